#include "procmat/process.hpp"

#include <cmath>

namespace procmat {
namespace {

constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
constexpr char kNames[] = {'0', 'x', 'y', 'z'};

// (alpha, i, j) with alpha in 0..3, i, j in 1..3, from a block index.
struct Triple {
  int first;
  int second;
  int third;
};

Triple c_triple(std::size_t k) {
  return {static_cast<int>(k / 9), static_cast<int>((k / 3) % 3) + 1, static_cast<int>(k % 3) + 1};
}

Triple c_prime_triple(std::size_t k) {
  return {static_cast<int>(k / 12) + 1, static_cast<int>((k / 3) % 4), static_cast<int>(k % 3) + 1};
}

int letter_from_name(char ch) {
  for (int i = 0; i < 4; ++i) {
    if (kNames[i] == ch) return i;
  }
  return -1;
}

PauliWord full_word_ab(std::size_t k) {
  const auto t = c_triple(k);
  return PauliWord(std::string{kLetters[t.first], kLetters[t.second], kLetters[t.third], 'I'});
}

PauliWord full_word_ba(std::size_t k) {
  const auto t = c_prime_triple(k);
  return PauliWord(std::string{kLetters[t.first], 'I', kLetters[t.second], kLetters[t.third]});
}

HermitianOperator ordered_process(const std::array<double, SepParams::kBlockSize>& coeffs,
                                  PauliWord (*word)(std::size_t)) {
  std::map<PauliWord, double> m{{PauliWord("IIII"), 0.25}};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) m.emplace(word(k), coeffs[k]);
  }
  return from_pauli(m, labels::canonical());
}

}  // namespace

void require_canonical(const HermitianOperator& op) {
  const auto& l = op.labels();
  const auto& c = labels::canonical();
  bool ok = l.size() == c.size();
  for (std::size_t i = 0; ok && i < l.size(); ++i) ok = l[i].name == c[i].name;
  if (!ok) throw LabelError("process matrices must live on A_I, A_O, B_I, B_O in that order");
}

ValidityReport validate_process(const HermitianOperator& w, double tol) {
  require_canonical(w);
  const double d_ao = static_cast<double>(w.labels()[1].dim);
  const double d_bo = static_cast<double>(w.labels()[3].dim);

  ValidityReport r;
  const double lam = min_eigenvalue(w);
  r.checks.push_back({"psd", "W >= 0", lam, lam >= -tol});

  const double tr = std::abs(w.trace() - d_ao * d_bo);
  r.checks.push_back({"trace", "Tr W = d_AO d_BO", tr, tr <= tol});

  const double bob =
      trace_replace(w, {"B_I", "B_O"}).max_abs_diff(trace_replace(w, {"A_O", "B_I", "B_O"}));
  r.checks.push_back({"bob_block", "_{B_I B_O} W = _{A_O B_I B_O} W", bob, bob <= tol});

  const double alice =
      trace_replace(w, {"A_I", "A_O"}).max_abs_diff(trace_replace(w, {"A_I", "A_O", "B_O"}));
  r.checks.push_back({"alice_block", "_{A_I A_O} W = _{A_I A_O B_O} W", alice, alice <= tol});

  const HermitianOperator rhs =
      trace_replace(w, {"B_O"}) + trace_replace(w, {"A_O"}) - trace_replace(w, {"A_O", "B_O"});
  const double two_way = w.max_abs_diff(rhs);
  r.checks.push_back(
      {"two_way", "W = _{B_O} W + _{A_O} W - _{A_O B_O} W", two_way, two_way <= tol});
  return r;
}

ProcessMatrix::ProcessMatrix(HermitianOperator op, double tol)
    : op_(std::move(op)), validity_(validate_process(op_, tol)) {}

HermitianOperator nonsignalling_part(const HermitianOperator& w) {
  require_canonical(w);
  return trace_replace(w, {"A_O", "B_O"});
}

HermitianOperator maximally_mixed_process() {
  return 0.25 * HermitianOperator::identity(labels::canonical());
}

ProcessMatrix w_ocb() {
  const double s = 0.25 / std::sqrt(2.0);
  return ProcessMatrix(from_pauli(
      {{PauliWord("IIII"), 0.25}, {PauliWord("ZZZI"), s}, {PauliWord("ZIXX"), s}},
      labels::canonical()));
}

std::size_t SepParams::c_index(int alpha, int i, int j) {
  if (alpha < 0 || alpha > 3 || i < 1 || i > 3 || j < 1 || j > 3) {
    throw std::out_of_range("c index out of range");
  }
  return static_cast<std::size_t>(alpha * 9 + (i - 1) * 3 + (j - 1));
}

std::size_t SepParams::c_prime_index(int i, int alpha, int j) {
  if (alpha < 0 || alpha > 3 || i < 1 || i > 3 || j < 1 || j > 3) {
    throw std::out_of_range("c' index out of range");
  }
  return static_cast<std::size_t>((i - 1) * 12 + alpha * 3 + (j - 1));
}

double SepParams::coord(std::size_t k) const {
  if (k == 0) return q;
  if (k <= kBlockSize) return c[k - 1];
  if (k < kNumCoords) return c_prime[k - 1 - kBlockSize];
  throw std::out_of_range("coordinate " + std::to_string(k) + " out of range");
}

void SepParams::set_coord(std::size_t k, double value) {
  if (k == 0) {
    q = value;
  } else if (k <= kBlockSize) {
    c[k - 1] = value;
  } else if (k < kNumCoords) {
    c_prime[k - 1 - kBlockSize] = value;
  } else {
    throw std::out_of_range("coordinate " + std::to_string(k) + " out of range");
  }
}

std::string SepParams::coord_name(std::size_t k) {
  if (k == 0) return "q";
  if (k <= kBlockSize) {
    const auto t = c_triple(k - 1);
    return std::string("c_") + kNames[t.first] + kNames[t.second] + kNames[t.third];
  }
  if (k < kNumCoords) {
    const auto t = c_prime_triple(k - 1 - kBlockSize);
    return std::string("cp_") + kNames[t.first] + kNames[t.second] + kNames[t.third];
  }
  throw std::out_of_range("coordinate " + std::to_string(k) + " out of range");
}

std::size_t SepParams::coord_from_name(const std::string& name) {
  if (name == "q") return 0;
  const bool prime = name.rfind("cp_", 0) == 0;
  const bool plain = !prime && name.rfind("c_", 0) == 0;
  const std::size_t off = prime ? 3 : 2;
  if ((prime || plain) && name.size() == off + 3) {
    const int a = letter_from_name(name[off]);
    const int b = letter_from_name(name[off + 1]);
    const int c = letter_from_name(name[off + 2]);
    try {
      if (plain && a >= 0 && b >= 1 && c >= 1) return 1 + c_index(a, b, c);
      if (prime && a >= 1 && b >= 0 && c >= 1) return 1 + kBlockSize + c_prime_index(a, b, c);
    } catch (const std::out_of_range&) {
    }
  }
  throw std::invalid_argument("unknown separable parameter '" + name + "'");
}

PauliWord block_a_word(std::size_t k) {
  const auto t = c_triple(k);
  return PauliWord(std::string{kLetters[t.first], kLetters[t.second], kLetters[t.third]});
}

PauliWord block_b_word(std::size_t k) {
  const auto t = c_prime_triple(k);
  return PauliWord(std::string{kLetters[t.first], kLetters[t.second], kLetters[t.third]});
}

HermitianOperator block_a(const SepParams& p) {
  std::map<PauliWord, double> m{{PauliWord("III"), 0.25}};
  for (std::size_t k = 0; k < p.c.size(); ++k) {
    if (p.c[k] != 0.0) m.emplace(block_a_word(k), p.c[k]);
  }
  return from_pauli(m, {labels::A_I, labels::A_O, labels::B_I});
}

HermitianOperator block_b(const SepParams& p) {
  std::map<PauliWord, double> m{{PauliWord("III"), 0.25}};
  for (std::size_t k = 0; k < p.c_prime.size(); ++k) {
    if (p.c_prime[k] != 0.0) m.emplace(block_b_word(k), p.c_prime[k]);
  }
  return from_pauli(m, {labels::A_I, labels::B_I, labels::B_O});
}

BlockEigenvalues block_min_eigenvalues(const SepParams& p) {
  return {min_eigenvalue(block_a(p)), min_eigenvalue(block_b(p))};
}

bool is_feasible(const SepParams& p, double tol) {
  const auto e = block_min_eigenvalues(p);
  return e.a >= -tol && e.b >= -tol && p.q >= 0.0 && p.q <= 1.0;
}

InfeasibleParams::InfeasibleParams(char block, double min_eigenvalue)
    : std::domain_error(std::string("separable block W^{") + (block == 'A' ? "A<B" : "B<A") +
                        "} is not PSD (min eigenvalue " + std::to_string(min_eigenvalue) + ")"),
      block_(block),
      min_eig_(min_eigenvalue) {}

SeparableProcess w_sep_from_params(const SepParams& p, double tol) {
  if (!(p.q >= 0.0 && p.q <= 1.0)) {
    throw std::invalid_argument("mixing weight q = " + std::to_string(p.q) + " outside [0, 1]");
  }
  const auto e = block_min_eigenvalues(p);
  if (e.a < -tol) throw InfeasibleParams('A', e.a);
  if (e.b < -tol) throw InfeasibleParams('B', e.b);

  HermitianOperator ab = ordered_process(p.c, full_word_ab);
  HermitianOperator ba = ordered_process(p.c_prime, full_word_ba);
  HermitianOperator sep = p.q * ab + (1.0 - p.q) * ba;
  return {ProcessMatrix(std::move(ab), tol), ProcessMatrix(std::move(ba), tol),
          ProcessMatrix(std::move(sep), tol)};
}

HermitianOperator feix_order_ab() {
  const double third = 0.25 / 3.0;
  return from_pauli({{PauliWord("IIII"), 0.25},
                     {PauliWord("IXXI"), third},
                     {PauliWord("IYYI"), third},
                     {PauliWord("IZZI"), third}},
                    labels::canonical());
}

HermitianOperator feix_order_ba() {
  return from_pauli({{PauliWord("IIII"), 0.25}, {PauliWord("ZIXZ"), 0.25}}, labels::canonical());
}

ProcessMatrix w_feix(const FeixParams& p) {
  return ProcessMatrix(p.q * feix_order_ab() + (1.0 - p.q + p.eps) * feix_order_ba() -
                       p.eps * maximally_mixed_process());
}

}  // namespace procmat
