#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oracle/naive.hpp"
#include "procmat/optimizer.hpp"
#include "procmat/process.hpp"

namespace testing_support {

inline oracle::Mat to_oracle(const procmat::HermitianOperator& op) {
  oracle::Mat m(op.dim());
  for (std::size_t i = 0; i < op.dim(); ++i)
    for (std::size_t j = 0; j < op.dim(); ++j)
      m(i, j) = op.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return m;
}

inline oracle::Mat to_oracle(const procmat::SepParams& p) {
  return oracle::w_sep(p.q, {p.c.begin(), p.c.end()}, {p.c_prime.begin(), p.c_prime.end()});
}

inline procmat::Matrix random_hermitian_matrix(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g;
  procmat::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = procmat::Complex(g(gen), g(gen));
  return (m + m.adjoint()) / 2.0;
}

inline procmat::HermitianOperator random_hermitian(std::mt19937_64& gen,
                                                   const procmat::LabelList& labels) {
  std::size_t n = 1;
  for (const auto& l : labels) n *= l.dim;
  return {labels, random_hermitian_matrix(gen, n)};
}

/// Feasible separable parameters spread over the feasible set: interior draws
/// at several scales, plus draws pushed to the boundary along random
/// coordinates.
inline std::vector<procmat::SepParams> feasible_samples(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> coord(1, procmat::SepParams::kNumCoords - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scales[] = {0.02, 0.05, 0.1, 0.3};
  std::vector<procmat::SepParams> out;
  for (std::size_t s = 0; out.size() < count; ++s) {
    procmat::SepParams p = procmat::random_feasible_init(seed * 1000 + s, procmat::kPsdTol, scales[s % 4]);
    if (s % 2 == 1) {
      for (int moves = 0; moves < 6; ++moves) {
        const std::size_t k = coord(gen);
        const auto iv = procmat::feasible_interval(p, k);
        p.set_coord(k, u(gen) < 0.5 ? iv.lo : iv.hi);
      }
      p.q = u(gen) < 0.3 ? (u(gen) < 0.5 ? 0.0 : 1.0) : u(gen);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace testing_support
