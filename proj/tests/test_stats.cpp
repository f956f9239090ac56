#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle/naive.hpp"
#include "procmat/optimizer.hpp"
#include "procmat/stats.hpp"
#include "support.hpp"

using namespace procmat;
using testing_support::feasible_samples;
using testing_support::to_oracle;

namespace {

const Instrument kA = paper_strategy(Party::A);
const Instrument kB = paper_strategy(Party::B);

// Frozen from the brute-force evaluator; closed form 5(2 + sqrt 2)/32.
constexpr double kOcbSuccess = 0.5334708691207961;
constexpr double kMixedSuccess = 0.3125;
constexpr double kMixedEntropy = 1.6225562489182659;

void expect_matches_oracle(const HermitianOperator& w, double tol) {
  const auto lib = cond_probs(w, kA, kB);
  const auto ref = oracle::cond_probs(to_oracle(w));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) EXPECT_NEAR(lib(a, b, x, y), ref[a][b][x][y], tol);
}

}  // namespace

TEST(CondProbs, MaximallyMixedGivesCertainOutcomeOnForwarding) {
  const auto t = cond_probs(maximally_mixed_process(), kA, kB);
  EXPECT_NEAR(t(1, 1, 0, 0), 1.0, 1e-15);
  EXPECT_NEAR(t(0, 0, 0, 0) + t(0, 1, 0, 0) + t(1, 0, 0, 0), 0.0, 1e-15);
}

TEST(CondProbs, NormalizedAndAliceNeverOutputsZeroOnForwarding) {
  const auto t = cond_probs(w_ocb(), kA, kB);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      double s = 0.0;
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) s += t(a, b, x, y);
      EXPECT_NEAR(s, 1.0, 1e-12);
      EXPECT_EQ(t(0, 0, 0, y) + t(0, 1, 0, y), 0.0);
    }
  }
}

TEST(CondProbs, DimensionMismatchRejected) {
  const Instrument qutrit(Party::A, {"A_I", 3}, {"A_O", 2},
                          {{Setting{0, 0}, HermitianOperator::identity({{"A_I", 3}, {"A_O", 2}})}});
  EXPECT_THROW(cond_probs(w_ocb().op(), qutrit, kB), LabelError);
  EXPECT_THROW(cond_probs(w_ocb().op(), kB, kA), LabelError);
}

TEST(CondProbs, InvalidProcessSignalsProbabilityError) {
  const auto bad = maximally_mixed_process() - 0.5 * pauli_term(PauliWord("ZIZI"));
  EXPECT_THROW(cond_probs(bad, kA, kB), ProbabilityError);
}

TEST(CondProbTable, ClampsRoundoffAndRejectsLargeNegatives) {
  std::vector<double> v(16, 0.0);
  for (std::size_t xy = 0; xy < 4; ++xy) v[12 + xy] = 1.0;
  v[0] = -5e-13;
  v[12] = 1.0 + 5e-13;
  const CondProbTable t({0, 1}, {0, 1}, {0, 1}, {0, 1}, v);
  EXPECT_EQ(t(0, 0, 0, 0), 0.0);
  v[0] = -1e-9;
  v[12] = 1.0 + 1e-9;
  EXPECT_THROW(CondProbTable({0, 1}, {0, 1}, {0, 1}, {0, 1}, v), ProbabilityError);
  v[0] = 0.0;
  v[12] = 0.9;
  EXPECT_THROW(CondProbTable({0, 1}, {0, 1}, {0, 1}, {0, 1}, v), ProbabilityError);
}

TEST(InputDist, RejectsUnnormalized) {
  EXPECT_THROW(InputDist(2, 2, {0.3, 0.3, 0.3, 0.3}), std::invalid_argument);
  EXPECT_THROW(InputDist(2, 2, {0.5, 0.5, -0.2, 0.2}), std::invalid_argument);
  EXPECT_NO_THROW(InputDist(2, 2, {0.1, 0.2, 0.3, 0.4}));
}

TEST(JointDist, WOcbClosedForms) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto j = joint_dist(cond_probs(w_ocb(), kA, kB), InputDist::uniform(2, 2));
  EXPECT_NEAR(j(0, 0), (1.0 + r) / 16.0, 1e-12);
  EXPECT_NEAR(j(0, 1), (3.0 + r) / 16.0, 1e-12);
  EXPECT_NEAR(j(1, 0), (3.0 + r) / 16.0, 1e-12);
  EXPECT_NEAR(j(1, 1), (9.0 - 3.0 * r) / 16.0, 1e-12);
}

TEST(JointDist, NonUniformInputs) {
  const InputDist inputs(2, 2, {0.1, 0.2, 0.3, 0.4});
  const auto t = cond_probs(w_ocb(), kA, kB);
  const auto ref = oracle::cond_probs(oracle::w_ocb());
  const auto j = joint_dist(t, inputs);
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double expected = 0.0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) expected += inputs(x, y) * ref[a][b][x][y];
      EXPECT_NEAR(j(a, b), expected, 1e-14);
      total += j(a, b);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Entropies, UniformAndPointMass) {
  const auto u = entropies({{0, 1}, {0, 1}, {0.25, 0.25, 0.25, 0.25}});
  EXPECT_NEAR(u.h_ab, 2.0, 1e-15);
  EXPECT_NEAR(u.i_ab, 0.0, 1e-15);
  const auto p = entropies({{0, 1}, {0, 1}, {0.0, 0.0, 0.0, 1.0}});
  EXPECT_EQ(p.h_ab, 0.0);
  EXPECT_EQ(p.h_a, 0.0);
  EXPECT_EQ(p.h_b, 0.0);
  EXPECT_EQ(p.h_a_given_b, 0.0);
  EXPECT_EQ(p.i_ab, 0.0);
}

TEST(Entropies, WOcbTotalEntropy) {
  const auto j = joint_dist(cond_probs(w_ocb(), kA, kB), InputDist::uniform(2, 2));
  const auto rep = entropies(j);
  EXPECT_NEAR(rep.h_ab, 1.8458, 5e-4);
  EXPECT_NEAR(rep.h_ab, oracle::h_ab(oracle::joint_uniform(oracle::cond_probs(oracle::w_ocb()))), 1e-12);
}

TEST(Entropies, MaximallyMixedMatchesOracle) {
  const auto ref = oracle::joint_uniform(oracle::cond_probs(oracle::maximally_mixed()));
  EXPECT_NEAR(oracle::h_ab(ref), kMixedEntropy, 1e-14);
  const auto j = joint_dist(cond_probs(maximally_mixed_process(), kA, kB), InputDist::uniform(2, 2));
  EXPECT_NEAR(entropies(j).h_ab, kMixedEntropy, 1e-14);
}

TEST(EntropiesProperty, IdentitiesAndBounds) {
  std::mt19937_64 gen(12);
  std::gamma_distribution<double> g(0.5, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(4);
    double s = 0.0;
    for (auto& v : p) s += (v = g(gen));
    for (auto& v : p) v /= s;
    if (trial % 5 == 0) p[trial % 4] = 0.0;
    double s2 = 0.0;
    for (double v : p) s2 += v;
    for (auto& v : p) v /= s2;
    const auto r = entropies({{0, 1}, {0, 1}, p});
    EXPECT_NEAR(r.i_ab, r.h_a + r.h_b - r.h_ab, 1e-12);
    EXPECT_NEAR(r.i_ab, r.h_a - r.h_a_given_b, 1e-12);
    EXPECT_GE(r.h_ab, 0.0);
    EXPECT_LE(r.h_ab, 2.0 + 1e-12);
    EXPECT_NEAR(r.h_ab, oracle::entropy_bits(p), 1e-12);
  }
}

TEST(EntropiesProperty, InvariantUnderRelabeling) {
  const JointDist j{{0, 1}, {0, 1}, {0.1, 0.2, 0.3, 0.4}};
  const JointDist swapped{{1, 0}, {1, 0}, {0.4, 0.3, 0.2, 0.1}};
  const JointDist transposed{{0, 1}, {0, 1}, {0.1, 0.3, 0.2, 0.4}};
  const auto r = entropies(j), rs = entropies(swapped), rt = entropies(transposed);
  EXPECT_NEAR(r.h_ab, rs.h_ab, 1e-15);
  EXPECT_NEAR(r.h_a, rs.h_a, 1e-15);
  EXPECT_NEAR(r.i_ab, rs.i_ab, 1e-15);
  EXPECT_NEAR(r.h_ab, rt.h_ab, 1e-15);
  EXPECT_NEAR(r.h_a, rt.h_b, 1e-15);
}

TEST(EntropiesProperty, ConcaveAlongSegmentsOfProcesses) {
  const auto samples = feasible_samples(20, 61);
  const InputDist u = InputDist::uniform(2, 2);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto v = w_sep_from_params(samples[i]).sep.op();
    const auto w = w_sep_from_params(samples[i + 1]).sep.op();
    auto h = [&](double t) { return entropies(joint_dist(cond_probs((1.0 - t) * v + t * w, kA, kB), u)).h_ab; };
    for (double t = 0.1; t < 0.95; t += 0.1) {
      EXPECT_LE(h(t - 0.05) - 2.0 * h(t) + h(t + 0.05), 1e-9);
    }
  }
}

TEST(StatsProperty, AliceMarginalIgnoresBobInputInOrderedProcesses) {
  for (auto p : feasible_samples(20, 8)) {
    p.q = 1.0;
    const auto t = cond_probs(w_sep_from_params(p).sep, kA, kB);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t x = 0; x < 2; ++x) {
        const double y0 = t(a, 0, x, 0) + t(a, 1, x, 0);
        const double y1 = t(a, 0, x, 1) + t(a, 1, x, 1);
        EXPECT_NEAR(y0, y1, 1e-10);
      }
    }
  }
}

TEST(StatsProperty, NormalizationForValidInstrumentsAndProcesses) {
  const auto kraus_ins = [](Party party, double theta) {
    const auto [in, out] = party_labels(party);
    Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
    k0(0, 0) = std::cos(theta);
    k0(1, 1) = std::sin(theta);
    k1(1, 0) = std::sin(theta);
    k1(0, 1) = std::cos(theta);
    std::map<Setting, HermitianOperator> ops;
    ops.emplace(Setting{0, 0}, choi_from_kraus({k0}, in, out));
    ops.emplace(Setting{0, 1}, choi_from_kraus({k1}, in, out));
    ops.emplace(Setting{1, 0}, 0.5 * choi_identity(in, out));
    ops.emplace(Setting{1, 1}, 0.5 * choi_identity(in, out));
    return Instrument(party, in, out, ops);
  };
  for (double theta : {0.1, 0.7, 1.3}) {
    const auto a = kraus_ins(Party::A, theta);
    const auto b = kraus_ins(Party::B, theta / 2);
    ASSERT_TRUE(validate_instrument(a).all_passed());
    for (const auto& p : feasible_samples(5, 2)) {
      for (const auto& w : {w_ocb().op(), w_sep_from_params(p).sep.op()}) {
        const auto t = cond_probs(w, a, b);
        for (std::size_t x = 0; x < 2; ++x) {
          for (std::size_t y = 0; y < 2; ++y) {
            double s = 0.0;
            for (std::size_t i = 0; i < 2; ++i)
              for (std::size_t j = 0; j < 2; ++j) s += t(i, j, x, y);
            EXPECT_NEAR(s, 1.0, 1e-10);
          }
        }
      }
    }
  }
}

TEST(GameSuccess, PerfectGuessing) {
  std::vector<double> v(16, 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) v[((a * 2 + b) * 2 + x) * 2 + y] = (a == y && b == x) ? 1.0 : 0.0;
  EXPECT_DOUBLE_EQ(game_success(CondProbTable({0, 1}, {0, 1}, {0, 1}, {0, 1}, v)), 1.0);
}

TEST(GameSuccess, RejectsNonBinaryAlphabet) {
  std::vector<double> v(3 * 2 * 2 * 2, 0.0);
  for (std::size_t xy = 0; xy < 4; ++xy) v[xy] = 1.0;
  EXPECT_THROW(game_success(CondProbTable({0, 1, 2}, {0, 1}, {0, 1}, {0, 1}, v)), std::invalid_argument);
}

TEST(GameSuccess, FrozenOracleValues) {
  EXPECT_NEAR(oracle::p_succ(oracle::cond_probs(oracle::w_ocb())), kOcbSuccess, 1e-15);
  EXPECT_NEAR(kOcbSuccess, 5.0 * (2.0 + std::sqrt(2.0)) / 32.0, 1e-15);
  EXPECT_NEAR(game_success(cond_probs(w_ocb(), kA, kB)), kOcbSuccess, 1e-14);
  EXPECT_GT(game_success(cond_probs(w_ocb(), kA, kB)), kCausalBound);
  EXPECT_NEAR(oracle::p_succ(oracle::cond_probs(oracle::maximally_mixed())), kMixedSuccess, 1e-15);
  EXPECT_NEAR(game_success(cond_probs(maximally_mixed_process(), kA, kB)), kMixedSuccess, 1e-15);
}

TEST(GameSuccessProperty, SeparableProcessesRespectCausalBound) {
  for (const auto& p : feasible_samples(100, 71)) {
    EXPECT_LE(game_success(cond_probs(w_sep_from_params(p).sep, kA, kB)), kCausalBound + 1e-9);
  }
}

TEST(CondProbsProperty, MatchesNaiveEvaluator) {
  expect_matches_oracle(w_ocb().op(), 1e-12);
  expect_matches_oracle(maximally_mixed_process(), 1e-12);
  expect_matches_oracle(w_feix({1.0, 0.0}).op(), 1e-12);
  expect_matches_oracle(w_feix({0.0, 0.0}).op(), 1e-12);
  for (const auto& p : feasible_samples(20, 13)) expect_matches_oracle(w_sep_from_params(p).sep.op(), 1e-12);
}
