#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "procmat/operators.hpp"
#include "procmat/validity.hpp"

namespace procmat {

/// Throws LabelError unless `op` lives on A_I, A_O, B_I, B_O in that order
/// (any dimensions).
void require_canonical(const HermitianOperator& op);

/**
 * Checks the five process-matrix conditions, each with a residual:
 *
 *   psd          W >= 0                                  (most-negative eigenvalue)
 *   trace        Tr W = d_AO d_BO                        (absolute deviation)
 *   bob_block    _{B_I B_O} W = _{A_O B_I B_O} W         (max-abs deviation)
 *   alice_block  _{A_I A_O} W = _{A_I A_O B_O} W         (max-abs deviation)
 *   two_way      W = _{B_O} W + _{A_O} W - _{A_O B_O} W  (max-abs deviation)
 */
ValidityReport validate_process(const HermitianOperator& w, double tol = kPsdTol);

/// A Hermitian operator on the canonical labels together with its cached
/// validity report. Invalid matrices are representable; check is_valid().
class ProcessMatrix {
 public:
  explicit ProcessMatrix(HermitianOperator op, double tol = kPsdTol);

  const HermitianOperator& op() const { return op_; }
  const ValidityReport& validity() const { return validity_; }
  bool is_valid() const { return validity_.all_passed(); }

 private:
  HermitianOperator op_;
  ValidityReport validity_;
};

/// Delta(W) = _{A_O B_O} W.
HermitianOperator nonsignalling_part(const HermitianOperator& w);

/// I^{(x)4} / 4 on qubit canonical labels.
HermitianOperator maximally_mixed_process();

/// 1/4 (I + (ZZZI + ZIXX)/sqrt 2), the process that violates the GYNI bound.
ProcessMatrix w_ocb();

/**
 * The 73 parameters of a causally separable qubit process
 *
 *   W^{A<B} = I/4 + sum c_{a i j}  s_a^{A_I} s_i^{A_O} s_j^{B_I} I^{B_O}
 *   W^{B<A} = I/4 + sum c'_{i a j} s_i^{A_I} I^{A_O} s_a^{B_I} s_j^{B_O}
 *   W_sep   = q W^{A<B} + (1 - q) W^{B<A}
 *
 * with a in {0, x, y, z} and i, j in {x, y, z}. Letters are encoded
 * 0=I, 1=X, 2=Y, 3=Z. Coordinates are numbered 0 (q), 1..36 (c, lexicographic
 * in (a, i, j)) and 37..72 (c', lexicographic in (i, a, j)).
 */
struct SepParams {
  static constexpr std::size_t kBlockSize = 36;
  static constexpr std::size_t kNumCoords = 1 + 2 * kBlockSize;

  double q = 0.5;
  std::array<double, kBlockSize> c{};
  std::array<double, kBlockSize> c_prime{};

  static std::size_t c_index(int alpha, int i, int j);
  static std::size_t c_prime_index(int i, int alpha, int j);

  double coord(std::size_t k) const;
  void set_coord(std::size_t k, double value);
  /// "q", "c_<a><i><j>" or "cp_<i><a><j>" with letters 0, x, y, z.
  static std::string coord_name(std::size_t k);
  /// Inverse of coord_name; throws std::invalid_argument.
  static std::size_t coord_from_name(const std::string& name);

  friend bool operator==(const SepParams&, const SepParams&) = default;
};

/// Three-factor Pauli word of c index k (on A_I, A_O, B_I) and of c' index k
/// (on A_I, B_I, B_O).
PauliWord block_a_word(std::size_t k);
PauliWord block_b_word(std::size_t k);

/// I/4 + sum_k c_k word_k, on A_I A_O B_I; W^{A<B} = block_a (x) I^{B_O}.
HermitianOperator block_a(const SepParams& p);
/// I/4 + sum_k c'_k word_k, on A_I B_I B_O; W^{B<A} is this with I^{A_O} inserted.
HermitianOperator block_b(const SepParams& p);

struct BlockEigenvalues {
  double a = 0.0;
  double b = 0.0;
};
BlockEigenvalues block_min_eigenvalues(const SepParams& p);
bool is_feasible(const SepParams& p, double tol = kPsdTol);

/// Rejection of parameters whose ordered blocks are not PSD.
class InfeasibleParams : public std::domain_error {
 public:
  InfeasibleParams(char block, double min_eigenvalue);
  char block() const { return block_; }
  double min_eigenvalue() const { return min_eig_; }

 private:
  char block_;
  double min_eig_;
};

struct SeparableProcess {
  ProcessMatrix ab;
  ProcessMatrix ba;
  ProcessMatrix sep;
};

/// Throws InfeasibleParams for an infeasible block and std::invalid_argument
/// for q outside [0, 1].
SeparableProcess w_sep_from_params(const SepParams& p, double tol = kPsdTol);

/// Parameters of q W^{A<B} + (1 - q + eps) W^{B<A} - eps I/4.
struct FeixParams {
  double q = 1.0;
  double eps = 0.0;
};

/// 1/4 (I + 1/3 sum_i I s_i s_i I)
HermitianOperator feix_order_ab();
/// 1/4 (I + Z I X Z)
HermitianOperator feix_order_ba();

ProcessMatrix w_feix(const FeixParams& p);

}  // namespace procmat
