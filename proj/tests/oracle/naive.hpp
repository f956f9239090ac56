#pragma once

// Brute-force reference implementations used as test oracles. Nothing here
// includes or calls the procmat library: matrices are nested std::vectors,
// products are explicit loops, and the eigensolvers are written from scratch.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

struct Mat {
  std::size_t n = 0;
  std::vector<cd> a;  // row-major

  Mat() = default;
  explicit Mat(std::size_t side) : n(side), a(side * side) {}
  cd& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  cd operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Mat identity(std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat pauli(char letter) {
  Mat m(2);
  switch (letter) {
    case 'I': m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 'X': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = cd(0, -1); m(1, 0) = cd(0, 1); break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return m;
}

inline Mat kron(const Mat& x, const Mat& y) {
  Mat r(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l) r(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
  return r;
}

inline Mat word(const std::string& w) {
  Mat r = identity(1);
  for (char c : w) r = kron(r, pauli(c));
  return r;
}

inline Mat add(const Mat& x, const Mat& y, double s = 1.0) {
  Mat r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += s * y.a[i];
  return r;
}

inline Mat scale(const Mat& x, double s) {
  Mat r = x;
  for (auto& v : r.a) v *= s;
  return r;
}

inline Mat mul(const Mat& x, const Mat& y) {
  Mat r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k)
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) += x(i, k) * y(k, j);
  return r;
}

inline cd trace(const Mat& m) {
  cd t = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) t += m(i, i);
  return t;
}

/// Tr(X Y) as the explicit double sum over entries.
inline cd trace_product(const Mat& x, const Mat& y) {
  cd t = 0.0;
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j) t += x(i, j) * y(j, i);
  return t;
}

inline Mat from_words(const std::map<std::string, double>& coeffs) {
  Mat r;
  for (const auto& [w, c] : coeffs) {
    Mat t = scale(word(w), c);
    r = r.n == 0 ? t : add(r, t);
  }
  return r;
}

/// Partial trace over qubit `k` (0 = leftmost) of an n-qubit operator.
inline Mat trace_out_qubit(const Mat& m, std::size_t nqubits, std::size_t k) {
  const std::size_t left = std::size_t{1} << k;
  const std::size_t right = std::size_t{1} << (nqubits - k - 1);
  Mat r(left * right);
  for (std::size_t l1 = 0; l1 < left; ++l1)
    for (std::size_t r1 = 0; r1 < right; ++r1)
      for (std::size_t l2 = 0; l2 < left; ++l2)
        for (std::size_t r2 = 0; r2 < right; ++r2)
          for (std::size_t s = 0; s < 2; ++s)
            r(l1 * right + r1, l2 * right + r2) +=
                m((l1 * 2 + s) * right + r1, (l2 * 2 + s) * right + r2);
  return r;
}

/// Inserts I/2 at qubit position k of an (n-1)-qubit operator.
inline Mat insert_half_identity(const Mat& m, std::size_t nqubits, std::size_t k) {
  const std::size_t left = std::size_t{1} << k;
  const std::size_t right = std::size_t{1} << (nqubits - k - 1);
  Mat r(left * 2 * right);
  for (std::size_t l1 = 0; l1 < left; ++l1)
    for (std::size_t r1 = 0; r1 < right; ++r1)
      for (std::size_t l2 = 0; l2 < left; ++l2)
        for (std::size_t r2 = 0; r2 < right; ++r2)
          for (std::size_t s = 0; s < 2; ++s)
            r((l1 * 2 + s) * right + r1, (l2 * 2 + s) * right + r2) =
                0.5 * m(l1 * right + r1, l2 * right + r2);
  return r;
}

/// _X W for a set of qubit positions.
inline Mat trace_replace(Mat m, std::size_t nqubits, const std::vector<std::size_t>& qubits) {
  for (std::size_t k : qubits) m = insert_half_identity(trace_out_qubit(m, nqubits, k), nqubits, k);
  return m;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> s, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = at(k, p), skq = at(k, q);
          at(k, p) = c * skp - sn * skq;
          at(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = at(p, k), sqk = at(q, k);
          at(p, k) = c * spk - sn * sqk;
          at(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Eigenvalues of a Hermitian matrix H = A + iB via the real symmetric
/// embedding [[A, -B], [B, A]], whose spectrum is that of H doubled.
inline std::vector<double> hermitian_eigenvalues(const Mat& h) {
  const std::size_t n = h.n, m = 2 * n;
  std::vector<double> s(m * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s[i * m + j] = h(i, j).real();
      s[(i + n) * m + (j + n)] = h(i, j).real();
      s[i * m + (j + n)] = -h(i, j).imag();
      s[(i + n) * m + j] = h(i, j).imag();
    }
  }
  const auto doubled = jacobi_eigenvalues(s, m);
  std::vector<double> ev;
  for (std::size_t i = 0; i < m; i += 2) ev.push_back(0.5 * (doubled[i] + doubled[i + 1]));
  return ev;
}

inline double min_eigenvalue(const Mat& h) { return hermitian_eigenvalues(h).front(); }

/// Characteristic-polynomial coefficients c_0..c_n of det(t I - H) (c_n = 1)
/// by the Faddeev-LeVerrier recursion.
inline std::vector<cd> characteristic_polynomial(const Mat& h) {
  const std::size_t n = h.n;
  std::vector<cd> c(n + 1);
  c[n] = 1.0;
  Mat mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    Mat next = mul(h, mk);
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = next;
    c[n - k] = -trace(mul(h, mk)) / static_cast<double>(k);
  }
  return c;
}

/// Real roots of the characteristic polynomial by Durand-Kerner iteration.
inline std::vector<double> charpoly_eigenvalues(const Mat& h) {
  const auto c = characteristic_polynomial(h);
  const std::size_t n = h.n;
  auto poly = [&](cd z) {
    cd v = 0.0;
    for (std::size_t k = n + 1; k-- > 0;) v = v * z + c[k];
    return v;
  };
  std::vector<cd> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(cd(0.4, 0.9), static_cast<double>(i));
  for (int it = 0; it < 2000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cd denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const cd step = poly(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  std::vector<double> ev;
  for (const auto& v : z) ev.push_back(v.real());
  std::sort(ev.begin(), ev.end());
  return ev;
}

// --- process-matrix level ----------------------------------------------------

/// |phi+><phi+| with |phi+> = |00> + |11>.
inline Mat phi_plus() {
  Mat m(4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 1.0;
  return m;
}

inline Mat ket_bra(std::size_t i, std::size_t j, std::size_t n) {
  Mat m(n);
  m(i, j) = 1.0;
  return m;
}

/// M[x][a] of the guess-your-neighbour's-input strategy, on (in, out).
inline std::array<std::array<Mat, 2>, 2> strategy() {
  const Mat p0 = ket_bra(0, 0, 2), p1 = ket_bra(1, 1, 2);
  std::array<std::array<Mat, 2>, 2> m;
  m[0][0] = Mat(4);
  m[0][1] = phi_plus();
  m[1][0] = kron(p0, p0);
  m[1][1] = kron(p1, p0);
  return m;
}

/// p[a][b][x][y] = Tr[(M_{a|x} (x) M_{b|y}) W] by explicit double loops.
using Table = std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2>;

inline Table cond_probs(const Mat& w, const std::array<std::array<Mat, 2>, 2>& ma,
                        const std::array<std::array<Mat, 2>, 2>& mb) {
  Table t{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) t[a][b][x][y] = trace_product(kron(ma[x][a], mb[y][b]), w).real();
  return t;
}

inline Table cond_probs(const Mat& w) { return cond_probs(w, strategy(), strategy()); }

inline std::array<double, 4> joint_uniform(const Table& t) {
  std::array<double, 4> p{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) p[a * 2 + b] += 0.25 * t[a][b][x][y];
  return p;
}

inline double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v) / std::log(2.0);
  return h;
}

inline double h_ab(const std::array<double, 4>& p) { return entropy_bits({p.begin(), p.end()}); }

inline double p_succ(const Table& t) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) s += t[y][x][x][y];
  return s / 4.0;
}

inline Mat w_ocb() {
  const double r = 0.25 / std::sqrt(2.0);
  return from_words({{"IIII", 0.25}, {"ZZZI", r}, {"ZIXX", r}});
}

inline Mat maximally_mixed() { return scale(identity(16), 0.25); }

/// W_sep from q and the two 36-entry coefficient arrays, index
/// alpha*9 + (i-1)*3 + (j-1) for c and (i-1)*12 + alpha*3 + (j-1) for c'.
inline Mat w_sep(double q, const std::vector<double>& c, const std::vector<double>& cp) {
  const char L[4] = {'I', 'X', 'Y', 'Z'};
  Mat ab = maximally_mixed(), ba = maximally_mixed();
  for (int al = 0; al < 4; ++al) {
    for (int i = 1; i < 4; ++i) {
      for (int j = 1; j < 4; ++j) {
        const double cv = c[al * 9 + (i - 1) * 3 + (j - 1)];
        const double cpv = cp[(i - 1) * 12 + al * 3 + (j - 1)];
        if (cv != 0.0) ab = add(ab, word(std::string{L[al], L[i], L[j], 'I'}), cv);
        if (cpv != 0.0) ba = add(ba, word(std::string{L[i], 'I', L[al], L[j]}), cpv);
      }
    }
  }
  return add(scale(ab, q), ba, 1.0 - q);
}

struct GridMax {
  double value = -1.0;
  double c = 0.0;
  double c_prime = 0.0;
};

/// Exhaustive grid search of H_AB over the subfamily q = 1/2 with only
/// c_{0zz} and c'_{z0x} nonzero. Each block is I/4 plus one Pauli word, so
/// the feasible square is [-1/4, 1/4]^2. The joint distribution is evaluated
/// as the brute-force joint at the origin plus its exact linear responses.
inline GridMax restricted_grid_max(double step) {
  std::vector<double> c(36, 0.0), cp(36, 0.0);
  const auto base = joint_uniform(cond_probs(w_sep(0.5, c, cp)));
  c[0 * 9 + 2 * 3 + 2] = 1.0;
  const auto with_c = joint_uniform(cond_probs(w_sep(0.5, c, cp)));
  c[0 * 9 + 2 * 3 + 2] = 0.0;
  cp[2 * 12 + 0 * 3 + 0] = 1.0;
  const auto with_cp = joint_uniform(cond_probs(w_sep(0.5, c, cp)));
  GridMax best;
  const int n = static_cast<int>(std::lround(0.5 / step));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double t1 = -0.25 + i * step, t2 = -0.25 + j * step;
      std::array<double, 4> p{};
      for (int k = 0; k < 4; ++k)
        p[k] = base[k] + t1 * (with_c[k] - base[k]) + t2 * (with_cp[k] - base[k]);
      const double h = h_ab(p);
      if (h > best.value) best = {h, t1, t2};
    }
  }
  return best;
}

}  // namespace oracle
