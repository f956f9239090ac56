#include "procmat/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace procmat {
namespace {

std::size_t product_of_dims(const LabelList& labels) {
  std::size_t n = 1;
  for (const auto& l : labels) n *= l.dim;
  return n;
}

void check_distinct(const LabelList& labels) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.dim < 1) throw LabelError("subsystem '" + l.name + "' has dimension 0");
    if (!seen.insert(l.name).second) throw LabelError("duplicate subsystem label '" + l.name + "'");
  }
}

// Per-factor digits of a mixed-radix index, most significant first.
void decompose(std::size_t index, const std::vector<std::size_t>& dims,
               std::vector<std::size_t>& digits) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
}

struct Split {
  std::vector<std::size_t> dims;
  std::vector<bool> traced;
  LabelList kept;
  LabelList removed;
};

Split split_labels(const HermitianOperator& op, const std::vector<std::string>& over) {
  Split s;
  for (const auto& name : over) op.position(name);  // validates
  std::set<std::string> names(over.begin(), over.end());
  for (const auto& l : op.labels()) {
    s.dims.push_back(l.dim);
    const bool t = names.count(l.name) != 0;
    s.traced.push_back(t);
    (t ? s.removed : s.kept).push_back(l);
  }
  return s;
}

}  // namespace

HermitianOperator::HermitianOperator(LabelList labels, Matrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  check_distinct(labels_);
  const auto n = static_cast<Eigen::Index>(product_of_dims(labels_));
  if (entries_.rows() != n || entries_.cols() != n) {
    throw LabelError("matrix side " + std::to_string(entries_.rows()) + "x" +
                                std::to_string(entries_.cols()) +
                                " does not match product of label dimensions " +
                                std::to_string(n));
  }
  const Matrix adj = entries_.adjoint();
  const double dev = n == 0 ? 0.0 : (entries_ - adj).cwiseAbs().maxCoeff();
  if (!(dev <= kHermitianTol)) {
    throw std::invalid_argument("operator is not Hermitian (max |M - M^dagger| = " +
                                std::to_string(dev) + ")");
  }
  entries_ = (entries_ + adj) * 0.5;
}

HermitianOperator HermitianOperator::identity(LabelList labels) {
  const auto n = static_cast<Eigen::Index>(product_of_dims(labels));
  return {std::move(labels), Matrix::Identity(n, n)};
}

HermitianOperator HermitianOperator::zero(LabelList labels) {
  const auto n = static_cast<Eigen::Index>(product_of_dims(labels));
  return {std::move(labels), Matrix::Zero(n, n)};
}

double HermitianOperator::trace() const { return entries_.trace().real(); }

bool HermitianOperator::has_label(std::string_view name) const {
  return std::any_of(labels_.begin(), labels_.end(),
                     [&](const SubsystemLabel& l) { return l.name == name; });
}

std::size_t HermitianOperator::position(std::string_view name) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].name == name) return i;
  }
  throw LabelError("unknown subsystem label '" + std::string(name) + "'");
}

bool HermitianOperator::same_space(const HermitianOperator& other) const {
  return labels_ == other.labels_;
}

double HermitianOperator::max_abs_diff(const HermitianOperator& other) const {
  if (!same_space(other)) throw LabelError("operators live on different spaces");
  if (dim() == 0) return 0.0;
  return (entries_ - other.entries_).cwiseAbs().maxCoeff();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& rhs) {
  if (!same_space(rhs)) throw LabelError("cannot add operators on different spaces");
  entries_ += rhs.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& rhs) {
  if (!same_space(rhs)) throw LabelError("cannot subtract operators on different spaces");
  entries_ -= rhs.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  entries_ *= s;
  return *this;
}

HermitianOperator tensor(std::span<const HermitianOperator> factors) {
  LabelList all;
  Matrix acc = Matrix::Ones(1, 1);
  for (const auto& f : factors) {
    all.insert(all.end(), f.labels().begin(), f.labels().end());
    const Matrix& m = f.matrix();
    Matrix next(acc.rows() * m.rows(), acc.cols() * m.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
      for (Eigen::Index j = 0; j < acc.cols(); ++j) {
        next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = acc(i, j) * m;
      }
    }
    acc = std::move(next);
  }
  check_distinct(all);
  return {std::move(all), std::move(acc)};
}

HermitianOperator tensor(std::initializer_list<HermitianOperator> factors) {
  return tensor(std::span<const HermitianOperator>(factors.begin(), factors.size()));
}

HermitianOperator partial_trace(const HermitianOperator& op, const std::vector<std::string>& over) {
  const Split s = split_labels(op, over);
  const std::size_t n = op.dim();
  const auto m = static_cast<Eigen::Index>(product_of_dims(s.kept));
  Matrix out = Matrix::Zero(m, m);

  std::vector<std::size_t> rd(s.dims.size()), cd(s.dims.size());
  for (std::size_t r = 0; r < n; ++r) {
    decompose(r, s.dims, rd);
    for (std::size_t c = 0; c < n; ++c) {
      decompose(c, s.dims, cd);
      bool diagonal = true;
      std::size_t rk = 0, ck = 0;
      for (std::size_t k = 0; k < s.dims.size(); ++k) {
        if (s.traced[k]) {
          if (rd[k] != cd[k]) {
            diagonal = false;
            break;
          }
        } else {
          rk = rk * s.dims[k] + rd[k];
          ck = ck * s.dims[k] + cd[k];
        }
      }
      if (diagonal) {
        out(static_cast<Eigen::Index>(rk), static_cast<Eigen::Index>(ck)) +=
            op.matrix()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return {s.kept, std::move(out)};
}

HermitianOperator trace_replace(const HermitianOperator& op, const std::vector<std::string>& over) {
  const Split s = split_labels(op, over);
  const HermitianOperator reduced = partial_trace(op, over);
  const double d_x = static_cast<double>(product_of_dims(s.removed));
  const std::size_t n = op.dim();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  std::vector<std::size_t> rd(s.dims.size()), cd(s.dims.size());
  for (std::size_t r = 0; r < n; ++r) {
    decompose(r, s.dims, rd);
    for (std::size_t c = 0; c < n; ++c) {
      decompose(c, s.dims, cd);
      bool diagonal = true;
      std::size_t rk = 0, ck = 0;
      for (std::size_t k = 0; k < s.dims.size(); ++k) {
        if (s.traced[k]) {
          diagonal = diagonal && rd[k] == cd[k];
        } else {
          rk = rk * s.dims[k] + rd[k];
          ck = ck * s.dims[k] + cd[k];
        }
      }
      if (diagonal) {
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            reduced.matrix()(static_cast<Eigen::Index>(rk), static_cast<Eigen::Index>(ck)) / d_x;
      }
    }
  }
  return {op.labels(), std::move(out)};
}

PauliWord::PauliWord(std::string_view letters) : letters_(letters) {
  for (char ch : letters_) {
    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
      throw std::invalid_argument("invalid Pauli letter '" + std::string(1, ch) + "' in word '" +
                                  letters_ + "'");
    }
  }
}

bool PauliWord::is_identity() const {
  return std::all_of(letters_.begin(), letters_.end(), [](char c) { return c == 'I'; });
}

Matrix pauli_matrix(char letter) {
  using namespace std::complex_literals;
  Matrix m(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -1i, 1i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("invalid Pauli letter '" + std::string(1, letter) + "'");
  }
  return m;
}

std::vector<PauliWord> all_pauli_words(std::size_t n) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= 4;
  std::vector<PauliWord> words;
  words.reserve(count);
  std::string s(n, 'I');
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t v = k;
    for (std::size_t i = n; i-- > 0;) {
      s[i] = kLetters[v % 4];
      v /= 4;
    }
    words.emplace_back(s);
  }
  return words;
}

LabelList qubit_labels(std::size_t n) {
  LabelList out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"q" + std::to_string(i), 2});
  return out;
}

HermitianOperator pauli_term(const PauliWord& word, const LabelList& labels) {
  if (word.size() != labels.size()) {
    throw LabelError("Pauli word '" + word.str() + "' has " + std::to_string(word.size()) +
                     " letters for " + std::to_string(labels.size()) + " factors");
  }
  std::vector<HermitianOperator> factors;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (labels[i].dim != 2) {
      throw LabelError("Pauli term requires qubit factors; '" + labels[i].name + "' has dim " +
                       std::to_string(labels[i].dim));
    }
    factors.emplace_back(LabelList{labels[i]}, pauli_matrix(word[i]));
  }
  return tensor(factors);
}

HermitianOperator pauli_term(const PauliWord& word) {
  return pauli_term(word, word.size() == 4 ? labels::canonical() : qubit_labels(word.size()));
}

double pauli_coeff(const HermitianOperator& op, const PauliWord& word) {
  const HermitianOperator p = pauli_term(word, op.labels());
  const double scale = static_cast<double>(op.dim());
  // Tr(A B) = sum_ij A_ij B_ji
  return (op.matrix().cwiseProduct(p.matrix().transpose())).sum().real() / scale;
}

std::map<PauliWord, double> pauli_decompose(const HermitianOperator& op, double drop) {
  std::map<PauliWord, double> out;
  for (const auto& w : all_pauli_words(op.labels().size())) {
    const double c = pauli_coeff(op, w);
    if (std::abs(c) > drop) out.emplace(w, c);
  }
  return out;
}

HermitianOperator from_pauli(const std::map<PauliWord, double>& coeffs, const LabelList& labels) {
  HermitianOperator acc = HermitianOperator::zero(labels);
  for (const auto& [w, c] : coeffs) {
    if (c != 0.0) acc += c * pauli_term(w, labels);
  }
  return acc;
}

std::vector<double> eigenvalues(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double min_eigenvalue(const HermitianOperator& op) {
  if (op.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace procmat
