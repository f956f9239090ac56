#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace procmat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Raised when an operation receives operators on incompatible spaces
/// (duplicate, missing or mismatched subsystem labels).
class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tolerance for the Hermiticity check performed at construction.
inline constexpr double kHermitianTol = 1e-12;
/// An operator counts as positive semidefinite when its smallest eigenvalue
/// is at least -kPsdTol.
inline constexpr double kPsdTol = 1e-10;

/// A named tensor factor H^X with its dimension d_X.
struct SubsystemLabel {
  std::string name;
  std::size_t dim = 2;

  friend bool operator==(const SubsystemLabel&, const SubsystemLabel&) = default;
};

using LabelList = std::vector<SubsystemLabel>;

namespace labels {
inline const SubsystemLabel A_I{"A_I", 2};
inline const SubsystemLabel A_O{"A_O", 2};
inline const SubsystemLabel B_I{"B_I", 2};
inline const SubsystemLabel B_O{"B_O", 2};

/// A_I, A_O, B_I, B_O: the tensor order used by every builder and file format.
inline const LabelList& canonical() {
  static const LabelList order{A_I, A_O, B_I, B_O};
  return order;
}
}  // namespace labels

/**
 * Dense Hermitian matrix over an ordered list of labelled tensor factors.
 *
 * Row and column indices are mixed-radix encodings of the per-factor indices,
 * most significant digit first (the first label is the leftmost Kronecker
 * factor). The constructor rejects matrices whose deviation from Hermiticity
 * exceeds kHermitianTol and stores the exactly symmetrized matrix, so every
 * value of this type is Hermitian to machine precision.
 */
class HermitianOperator {
 public:
  HermitianOperator(LabelList labels, Matrix entries);

  static HermitianOperator identity(LabelList labels);
  static HermitianOperator zero(LabelList labels);

  const LabelList& labels() const { return labels_; }
  const Matrix& matrix() const { return entries_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }

  /// Real trace (the imaginary part of a Hermitian trace is zero).
  double trace() const;

  /// Position of the factor called `name`; throws LabelError if absent.
  std::size_t position(std::string_view name) const;
  bool has_label(std::string_view name) const;

  /// Same labels, in the same order, with the same dimensions.
  bool same_space(const HermitianOperator& other) const;

  /// max_{ij} |this_ij - other_ij|; operands must share a space.
  double max_abs_diff(const HermitianOperator& other) const;

  HermitianOperator& operator+=(const HermitianOperator& rhs);
  HermitianOperator& operator-=(const HermitianOperator& rhs);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator lhs, const HermitianOperator& rhs) {
    return lhs += rhs;
  }
  friend HermitianOperator operator-(HermitianOperator lhs, const HermitianOperator& rhs) {
    return lhs -= rhs;
  }
  friend HermitianOperator operator*(double s, HermitianOperator op) { return op *= s; }
  friend HermitianOperator operator*(HermitianOperator op, double s) { return op *= s; }

 private:
  LabelList labels_;
  Matrix entries_;
};

/// Kronecker product in the given order. Label names must be pairwise distinct.
HermitianOperator tensor(std::span<const HermitianOperator> factors);
HermitianOperator tensor(std::initializer_list<HermitianOperator> factors);

/// Tr_X over the named factors. Tracing out everything leaves a 1x1 operator
/// with no labels.
HermitianOperator partial_trace(const HermitianOperator& op,
                                const std::vector<std::string>& over);

/// _X W = I^X/d_X (x) Tr_X W, with the identity placed back at the traced
/// factors' original positions so input and output share a space.
HermitianOperator trace_replace(const HermitianOperator& op,
                                const std::vector<std::string>& over);

/// Word over {I, X, Y, Z}, one letter per qubit factor.
class PauliWord {
 public:
  explicit PauliWord(std::string_view letters);

  const std::string& str() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  char operator[](std::size_t i) const { return letters_[i]; }
  bool is_identity() const;

  friend auto operator<=>(const PauliWord&, const PauliWord&) = default;

 private:
  std::string letters_;
};

/// 2x2 matrix for one of 'I', 'X', 'Y', 'Z'.
Matrix pauli_matrix(char letter);

/// All 4^n words of length n in lexicographic I < X < Y < Z order.
std::vector<PauliWord> all_pauli_words(std::size_t n);

/// Tensor product of the named single-qubit matrices on `labels` (all dim 2).
HermitianOperator pauli_term(const PauliWord& word, const LabelList& labels);
/// As above, on the canonical labels for 4-letter words and on q0, q1, ...
/// otherwise.
HermitianOperator pauli_term(const PauliWord& word);

/// Tr(op P_word) / 2^n.
double pauli_coeff(const HermitianOperator& op, const PauliWord& word);

/// Every coefficient of an all-qubit operator whose magnitude exceeds `drop`.
std::map<PauliWord, double> pauli_decompose(const HermitianOperator& op, double drop = 0.0);

/// Sum_w coeffs[w] * pauli_term(w, labels); words must match labels.size().
HermitianOperator from_pauli(const std::map<PauliWord, double>& coeffs, const LabelList& labels);

double min_eigenvalue(const HermitianOperator& op);
std::vector<double> eigenvalues(const HermitianOperator& op);

inline bool is_psd(const HermitianOperator& op, double tol = kPsdTol) {
  return min_eigenvalue(op) >= -tol;
}

/// Default qubit labels q0, q1, ... used when a word carries no context.
LabelList qubit_labels(std::size_t n);

}  // namespace procmat
