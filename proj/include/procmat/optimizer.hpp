#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "procmat/instruments.hpp"
#include "procmat/process.hpp"
#include "procmat/stats.hpp"

namespace procmat {

enum class Objective { H_AB, H_A, H_B, H_A_given_B, I_AB };

std::string to_string(Objective o);
/// Accepts the names produced by to_string; throws std::invalid_argument.
Objective objective_from_string(const std::string& name);
/// H_AB, H_A and H_B are concave along any segment of process matrices.
bool is_concave(Objective o);
double evaluate(Objective o, const JointDist& joint);

/// Name of the random bit generator behind every seeded draw.
inline constexpr const char* kGeneratorName = "mt19937_64";

struct OptimizerConfig {
  int restarts = 100;
  double sweep_tol = 1e-6;
  int max_sweeps = 500;
  double line_tol = 1e-7;
  double psd_tol = kPsdTol;
  std::uint64_t seed = 1;
  Objective objective = Objective::H_AB;
  Instrument ins_a = paper_strategy(Party::A);
  Instrument ins_b = paper_strategy(Party::B);
  InputDist inputs = InputDist::uniform(2, 2);
  /// Worker threads used by multistart; 0 means one per hardware thread.
  unsigned jobs = 1;
  bool record_trace = false;
  /// Standard deviation of the Gaussian coefficient draw in random_feasible_init.
  double init_scale = 0.05;
  /// Coordinates moved by the ascent, in sweep order; empty means all 73.
  /// The others keep their values from fixed_params.
  std::vector<std::size_t> active_coords;
  SepParams fixed_params;

  /// Throws std::invalid_argument for a non-positive count or tolerance, an
  /// out-of-range or repeated active coordinate, or infeasible fixed_params
  /// when a subset is active.
  void validate() const;
  /// active_coords, or 0..72 when it is empty.
  std::vector<std::size_t> sweep_order() const;
};

/**
 * The objective over the separable family, evaluated through the linear
 * response of the joint distribution p(a, b) to each Pauli coefficient:
 *
 *   p = q (r_0 + sum_k c_k r_k) + (1 - q) (r_0 + sum_k c'_k r'_k)
 *
 * where r_0 is the response to I/4 and r_k, r'_k the responses to the words of
 * W^{A<B} and W^{B<A}. Agrees with the Born rule applied to w_sep_from_params.
 */
class SeparableObjective {
 public:
  SeparableObjective(const Instrument& ins_a, const Instrument& ins_b, const InputDist& inputs,
                     Objective objective);
  explicit SeparableObjective(const OptimizerConfig& cfg);

  JointDist joint(const SepParams& p) const;
  double operator()(const SepParams& p) const;
  Objective objective() const { return objective_; }

  /// p(a, b) along coordinate `coord` as base + t * direction, where t is the
  /// coordinate value.
  struct Line {
    std::vector<double> base;
    std::vector<double> direction;
  };
  Line line(const SepParams& p, std::size_t coord) const;
  double evaluate_line(const Line& line, double t) const;

 private:
  std::vector<double> block_joint(const std::vector<double>& base,
                                  const std::vector<std::vector<double>>& resp,
                                  const std::array<double, SepParams::kBlockSize>& coeffs) const;

  std::vector<int> outcomes_a_, outcomes_b_;
  Objective objective_;
  std::vector<double> identity_response_;
  std::vector<std::vector<double>> resp_a_, resp_b_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Endpoint resolution of the bisection in feasible_interval.
inline constexpr double kIntervalResolution = 1e-11;

/// Values of one coordinate that keep both blocks PSD (and q in [0, 1]),
/// holding the others fixed. Throws InfeasibleParams if p is infeasible.
Interval feasible_interval(const SepParams& p, std::size_t coord, double psd_tol = kPsdTol);

struct LineResult {
  double value = 0.0;
  double argmax = 0.0;
};

/// Golden-section maximization of a concave function on [lo, hi] to `tol`.
LineResult golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                   double tol);

/// Maximizes the objective along `coord` within `interval`. Concave objectives
/// use golden-section search; the others scan a 65-point grid and refine the
/// best cell, without a global-optimality guarantee. The incoming value is
/// kept unless a candidate improves on it. Throws std::invalid_argument for an
/// empty interval.
LineResult line_maximize(const SeparableObjective& objective, const SepParams& p,
                         std::size_t coord, const Interval& interval, double line_tol);

struct AscentResult {
  SepParams params;
  double value = 0.0;
  int sweeps = 0;
  /// Objective at the start and after every sweep.
  std::vector<double> history;
};

/// Cyclic one-coordinate maximization over cfg.sweep_order() until no coordinate
/// moves by sweep_tol within a sweep, or max_sweeps sweeps.
AscentResult coordinate_ascent(const SepParams& init, const OptimizerConfig& cfg);
AscentResult coordinate_ascent(const SepParams& init, const SeparableObjective& objective,
                               const OptimizerConfig& cfg);

/// q ~ U[0, 1], coefficients ~ N(0, scale^2) drawn from mt19937_64(seed) in
/// coordinate order; each block's coefficients are halved until it is PSD.
SepParams random_feasible_init(std::uint64_t seed, double psd_tol = kPsdTol,
                               double scale = 0.05);

/// Number of halvings random_feasible_init applied to each block.
struct InitShrinks {
  int block_a = 0;
  int block_b = 0;
};
SepParams random_feasible_init(std::uint64_t seed, double psd_tol, double scale,
                               InitShrinks* shrinks);

struct RestartRecord {
  int index = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  int sweeps = 0;
};

struct OptimizerResult {
  SepParams best_params;
  double best_value = 0.0;
  int best_restart = 0;
  std::vector<RestartRecord> per_restart;
  /// Per-restart objective history; filled when cfg.record_trace.
  std::vector<std::vector<double>> traces;
};

/// Starting point of restart `seed`: random_feasible_init(seed) when every
/// coordinate is active; otherwise fixed_params with the active coordinates
/// taken from that draw and halved together until both blocks are PSD.
SepParams restart_init(std::uint64_t seed, const OptimizerConfig& cfg);
/// Runs cfg.restarts coordinate ascents from restart_init(seed + r, cfg)
/// on up to cfg.jobs threads. The best value wins, ties going to the lowest
/// restart index, so the result does not depend on scheduling.
OptimizerResult multistart(const OptimizerConfig& cfg);

struct FeixResult {
  FeixParams params;
  double value = 0.0;
  /// Best value on the eps = 0 edge, whose members are causally separable.
  double separable_edge_value = 0.0;
  FeixParams separable_edge_params;
};

/// Largest eps with w_feix(q, eps) PSD (bisection; 0 if none is).
double feix_max_eps(double q, double psd_tol = kPsdTol);

/// Grid over q in [0, 1] and feasible eps >= 0 with spacing `grid_step`, then
/// alternating golden-section refinement of q and eps.
FeixResult feix_maximize(const OptimizerConfig& cfg, double grid_step = 0.01);

}  // namespace procmat
