#include "procmat/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace procmat {
namespace {

using Block = Eigen::Matrix<Complex, 8, 8>;
using Full = Eigen::Matrix<Complex, 16, 16>;

// A candidate must beat the incoming value by this much to move a coordinate.
constexpr double kMinImprovement = 1e-13;
constexpr int kGridPoints = 65;

struct BlockWords {
  std::array<Block, SepParams::kBlockSize> a;
  std::array<Block, SepParams::kBlockSize> b;
};

const BlockWords& block_words() {
  static const BlockWords words = [] {
    BlockWords w;
    const LabelList la{labels::A_I, labels::A_O, labels::B_I};
    const LabelList lb{labels::A_I, labels::B_I, labels::B_O};
    for (std::size_t k = 0; k < SepParams::kBlockSize; ++k) {
      w.a[k] = pauli_term(block_a_word(k), la).matrix();
      w.b[k] = pauli_term(block_b_word(k), lb).matrix();
    }
    return w;
  }();
  return words;
}

Block assemble(const std::array<double, SepParams::kBlockSize>& coeffs,
               const std::array<Block, SepParams::kBlockSize>& words) {
  Block m = Block::Identity() * 0.25;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) m += coeffs[k] * words[k];
  }
  return m;
}

template <typename M>
double smallest_eigenvalue(const M& m) {
  Eigen::SelfAdjointEigenSolver<M> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Box-Muller, cosine branch only: one normal per two uniforms.
double standard_normal(std::mt19937_64& gen) {
  const double u1 = 1.0 - uniform01(gen);  // (0, 1]
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Maximizes f on [lo, hi], keeping `current` unless a candidate is better.
LineResult maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                       double current, double tol, bool concave) {
  LineResult best{f(current), current};
  std::vector<LineResult> candidates;
  if (!concave) candidates = {{f(lo), lo}, {f(hi), hi}};
  if (hi > lo) {
    if (concave) {
      candidates.push_back(golden_section_maximize(f, lo, hi, tol));
    } else {
      const double step = (hi - lo) / (kGridPoints - 1);
      int arg = 0;
      double val = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < kGridPoints; ++i) {
        const double v = f(lo + step * i);
        if (v > val) {
          val = v;
          arg = i;
        }
      }
      const double a = lo + step * std::max(0, arg - 1);
      const double b = std::min(hi, lo + step * std::min(kGridPoints - 1, arg + 1));
      candidates.push_back({val, lo + step * arg});
      candidates.push_back(golden_section_maximize(f, a, b, tol));
    }
  }
  if (candidates.empty()) return best;
  LineResult top = candidates.front();
  for (const auto& c : candidates) {
    if (c.value > top.value) top = c;
  }
  if (top.value > best.value + kMinImprovement) best = top;
  return best;
}

// Largest step from `from` towards `to` (|to - from| <= span) such that
// feasible() holds, assuming feasible(from) and a convex feasible set.
template <typename Pred>
double bisect_boundary(double from, double to, Pred feasible) {
  if (feasible(to)) return to;
  double lo = from, hi = to;
  while (std::abs(hi - lo) > kIntervalResolution) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

std::string to_string(Objective o) {
  switch (o) {
    case Objective::H_AB: return "H_AB";
    case Objective::H_A: return "H_A";
    case Objective::H_B: return "H_B";
    case Objective::H_A_given_B: return "H_A_given_B";
    case Objective::I_AB: return "I_AB";
  }
  return "?";
}

Objective objective_from_string(const std::string& name) {
  for (auto o : {Objective::H_AB, Objective::H_A, Objective::H_B, Objective::H_A_given_B,
                 Objective::I_AB}) {
    if (to_string(o) == name) return o;
  }
  throw std::invalid_argument("unknown objective '" + name +
                              "' (expected H_AB, H_A, H_B, H_A_given_B or I_AB)");
}

bool is_concave(Objective o) {
  return o == Objective::H_AB || o == Objective::H_A || o == Objective::H_B;
}

double evaluate(Objective o, const JointDist& joint) {
  switch (o) {
    case Objective::H_AB: return shannon_entropy(joint.p);
    case Objective::H_A: return shannon_entropy(joint.marginal_a());
    case Objective::H_B: return shannon_entropy(joint.marginal_b());
    case Objective::H_A_given_B: return entropies(joint).h_a_given_b;
    case Objective::I_AB: return entropies(joint).i_ab;
  }
  return 0.0;
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (!(sweep_tol > 0.0) || !(line_tol > 0.0) || !(psd_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (!(init_scale > 0.0)) throw std::invalid_argument("init_scale must be positive");
  std::vector<bool> seen(SepParams::kNumCoords, false);
  for (std::size_t k : active_coords) {
    if (k >= SepParams::kNumCoords) throw std::invalid_argument("active coordinate out of range");
    if (seen[k]) throw std::invalid_argument("repeated active coordinate " + SepParams::coord_name(k));
    seen[k] = true;
  }
  if (!active_coords.empty() &&
      (!is_feasible(fixed_params, psd_tol) || fixed_params.q < 0.0 || fixed_params.q > 1.0)) {
    throw std::invalid_argument("fixed_params must be feasible");
  }
}

std::vector<std::size_t> OptimizerConfig::sweep_order() const {
  if (!active_coords.empty()) return active_coords;
  std::vector<std::size_t> all(SepParams::kNumCoords);
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return all;
}

SeparableObjective::SeparableObjective(const Instrument& ins_a, const Instrument& ins_b,
                                       const InputDist& inputs, Objective objective)
    : outcomes_a_(ins_a.outcomes()), outcomes_b_(ins_b.outcomes()), objective_(objective) {
  identity_response_ = joint_response(maximally_mixed_process(), ins_a, ins_b, inputs);
  const LabelList& canon = labels::canonical();
  for (std::size_t k = 0; k < SepParams::kBlockSize; ++k) {
    const std::string wa = block_a_word(k).str() + "I";
    const auto wb = block_b_word(k).str();
    const std::string full_b{wb[0], 'I', wb[1], wb[2]};
    resp_a_.push_back(joint_response(pauli_term(PauliWord(wa), canon), ins_a, ins_b, inputs));
    resp_b_.push_back(joint_response(pauli_term(PauliWord(full_b), canon), ins_a, ins_b, inputs));
  }
}

SeparableObjective::SeparableObjective(const OptimizerConfig& cfg)
    : SeparableObjective(cfg.ins_a, cfg.ins_b, cfg.inputs, cfg.objective) {}

std::vector<double> SeparableObjective::block_joint(
    const std::vector<double>& base, const std::vector<std::vector<double>>& resp,
    const std::array<double, SepParams::kBlockSize>& coeffs) const {
  std::vector<double> p = base;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += coeffs[k] * resp[k][i];
  }
  return p;
}

JointDist SeparableObjective::joint(const SepParams& p) const {
  const auto pa = block_joint(identity_response_, resp_a_, p.c);
  const auto pb = block_joint(identity_response_, resp_b_, p.c_prime);
  JointDist j{outcomes_a_, outcomes_b_, std::vector<double>(pa.size())};
  for (std::size_t i = 0; i < pa.size(); ++i) j.p[i] = p.q * pa[i] + (1.0 - p.q) * pb[i];
  return j;
}

double SeparableObjective::operator()(const SepParams& p) const {
  return evaluate(objective_, joint(p));
}

SeparableObjective::Line SeparableObjective::line(const SepParams& p, std::size_t coord) const {
  const auto pa = block_joint(identity_response_, resp_a_, p.c);
  const auto pb = block_joint(identity_response_, resp_b_, p.c_prime);
  const std::size_t n = pa.size();
  Line l{std::vector<double>(n), std::vector<double>(n)};
  if (coord == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      l.base[i] = pb[i];
      l.direction[i] = pa[i] - pb[i];
    }
    return l;
  }
  const bool in_a = coord <= SepParams::kBlockSize;
  const std::size_t k = in_a ? coord - 1 : coord - 1 - SepParams::kBlockSize;
  if (!in_a && k >= SepParams::kBlockSize) throw std::out_of_range("coordinate out of range");
  const double weight = in_a ? p.q : 1.0 - p.q;
  const auto& r = in_a ? resp_a_[k] : resp_b_[k];
  const double t0 = p.coord(coord);
  for (std::size_t i = 0; i < n; ++i) {
    l.direction[i] = weight * r[i];
    l.base[i] = p.q * pa[i] + (1.0 - p.q) * pb[i] - t0 * l.direction[i];
  }
  return l;
}

double SeparableObjective::evaluate_line(const Line& line, double t) const {
  JointDist j{outcomes_a_, outcomes_b_, std::vector<double>(line.base.size())};
  for (std::size_t i = 0; i < j.p.size(); ++i) j.p[i] = line.base[i] + t * line.direction[i];
  return evaluate(objective_, j);
}

Interval feasible_interval(const SepParams& p, std::size_t coord, double psd_tol) {
  if (coord >= SepParams::kNumCoords) throw std::out_of_range("coordinate out of range");
  const auto& words = block_words();
  const Block a = assemble(p.c, words.a);
  const Block b = assemble(p.c_prime, words.b);
  const double ea = smallest_eigenvalue(a);
  const double eb = smallest_eigenvalue(b);
  if (ea < -psd_tol) throw InfeasibleParams('A', ea);
  if (eb < -psd_tol) throw InfeasibleParams('B', eb);
  if (!(p.q >= 0.0 && p.q <= 1.0)) throw std::invalid_argument("q outside [0, 1]");
  if (coord == 0) return {0.0, 1.0};

  const bool in_a = coord <= SepParams::kBlockSize;
  const std::size_t k = in_a ? coord - 1 : coord - 1 - SepParams::kBlockSize;
  const Block& start = in_a ? a : b;
  const Block& word = in_a ? words.a[k] : words.b[k];
  const double t0 = p.coord(coord);
  auto feasible = [&](double t) { return smallest_eigenvalue(Block(start + (t - t0) * word)) >= -psd_tol; };
  // A PSD block of trace 2 has |coefficient| <= 1/4, so these bounds are infeasible.
  constexpr double kOuter = 0.25 + 1e-6;
  return {bisect_boundary(t0, -kOuter, feasible), bisect_boundary(t0, kOuter, feasible)};
}

LineResult golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                   double tol) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return {f(x), x};
}

LineResult line_maximize(const SeparableObjective& objective, const SepParams& p,
                         std::size_t coord, const Interval& interval, double line_tol) {
  if (!(interval.hi >= interval.lo)) throw std::invalid_argument("empty feasible interval");
  const auto line = objective.line(p, coord);
  const auto f = [&](double t) { return objective.evaluate_line(line, t); };
  const double current = std::clamp(p.coord(coord), interval.lo, interval.hi);
  return maximize_1d(f, interval.lo, interval.hi, current, line_tol,
                     is_concave(objective.objective()));
}

AscentResult coordinate_ascent(const SepParams& init, const SeparableObjective& objective,
                               const OptimizerConfig& cfg) {
  AscentResult r{init, objective(init), 0, {}};
  r.history.push_back(r.value);
  const std::vector<std::size_t> order = cfg.sweep_order();
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t k : order) {
      const Interval iv = feasible_interval(r.params, k, cfg.psd_tol);
      const LineResult step = line_maximize(objective, r.params, k, iv, cfg.line_tol);
      max_change = std::max(max_change, std::abs(step.argmax - r.params.coord(k)));
      r.params.set_coord(k, step.argmax);
    }
    r.sweeps = sweep;
    r.value = objective(r.params);
    r.history.push_back(r.value);
    if (max_change < cfg.sweep_tol) break;
  }
  return r;
}

AscentResult coordinate_ascent(const SepParams& init, const OptimizerConfig& cfg) {
  cfg.validate();
  return coordinate_ascent(init, SeparableObjective(cfg), cfg);
}

SepParams random_feasible_init(std::uint64_t seed, double psd_tol, double scale,
                               InitShrinks* shrinks) {
  std::mt19937_64 gen(seed);
  SepParams p;
  p.q = uniform01(gen);
  for (auto& v : p.c) v = scale * standard_normal(gen);
  for (auto& v : p.c_prime) v = scale * standard_normal(gen);

  const auto& words = block_words();
  InitShrinks count;
  while (smallest_eigenvalue(assemble(p.c, words.a)) < -psd_tol) {
    for (auto& v : p.c) v *= 0.5;
    ++count.block_a;
  }
  while (smallest_eigenvalue(assemble(p.c_prime, words.b)) < -psd_tol) {
    for (auto& v : p.c_prime) v *= 0.5;
    ++count.block_b;
  }
  if (shrinks != nullptr) *shrinks = count;
  return p;
}

SepParams random_feasible_init(std::uint64_t seed, double psd_tol, double scale) {
  return random_feasible_init(seed, psd_tol, scale, nullptr);
}

SepParams restart_init(std::uint64_t seed, const OptimizerConfig& cfg) {
  const SepParams draw = random_feasible_init(seed, cfg.psd_tol, cfg.init_scale);
  if (cfg.active_coords.empty()) return draw;
  SepParams p = cfg.fixed_params;
  for (std::size_t k : cfg.active_coords) p.set_coord(k, draw.coord(k));
  for (int halvings = 0; !is_feasible(p, cfg.psd_tol); ++halvings) {
    for (std::size_t k : cfg.active_coords) {
      if (k == 0) continue;
      const double base = cfg.fixed_params.coord(k);
      p.set_coord(k, base + 0.5 * (p.coord(k) - base));
    }
    if (halvings > 200) return cfg.fixed_params;
  }
  return p;
}

OptimizerResult multistart(const OptimizerConfig& cfg) {
  cfg.validate();
  const SeparableObjective objective(cfg);
  const auto n = static_cast<std::size_t>(cfg.restarts);
  std::vector<AscentResult> runs(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < n; r = next++) {
      const SepParams init = restart_init(cfg.seed + r, cfg);
      runs[r] = coordinate_ascent(init, objective, cfg);
    }
  };
  unsigned jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  OptimizerResult out;
  for (std::size_t r = 0; r < n; ++r) {
    out.per_restart.push_back(
        {static_cast<int>(r), cfg.seed + r, runs[r].value, runs[r].sweeps});
    if (r == 0 || runs[r].value > out.best_value) {
      out.best_value = runs[r].value;
      out.best_params = runs[r].params;
      out.best_restart = static_cast<int>(r);
    }
    if (cfg.record_trace) out.traces.push_back(runs[r].history);
  }
  return out;
}

namespace {

struct FeixModel {
  Full ab, ba, mixed;
  std::vector<double> r_ab, r_ba, r_mixed;
  std::vector<int> oa, ob;
  Objective objective;
  double psd_tol;

  bool psd(double q, double eps) const {
    return smallest_eigenvalue(Full(q * ab + (1.0 - q + eps) * ba - eps * mixed)) >= -psd_tol;
  }
  double value(double q, double eps) const {
    JointDist j{oa, ob, std::vector<double>(r_ab.size())};
    for (std::size_t i = 0; i < j.p.size(); ++i) {
      j.p[i] = q * r_ab[i] + (1.0 - q + eps) * r_ba[i] - eps * r_mixed[i];
    }
    return evaluate(objective, j);
  }
  double max_eps(double q) const {
    double hi = 1.0;
    for (int i = 0; i < 64 && psd(q, hi); ++i) hi *= 2.0;
    return bisect_boundary(0.0, hi, [&](double e) { return psd(q, e); });
  }
};

FeixModel make_feix_model(const OptimizerConfig& cfg) {
  const auto ab = feix_order_ab(), ba = feix_order_ba(), mixed = maximally_mixed_process();
  return {ab.matrix(),
          ba.matrix(),
          mixed.matrix(),
          joint_response(ab, cfg.ins_a, cfg.ins_b, cfg.inputs),
          joint_response(ba, cfg.ins_a, cfg.ins_b, cfg.inputs),
          joint_response(mixed, cfg.ins_a, cfg.ins_b, cfg.inputs),
          cfg.ins_a.outcomes(),
          cfg.ins_b.outcomes(),
          cfg.objective,
          cfg.psd_tol};
}

}  // namespace

double feix_max_eps(double q, double psd_tol) {
  OptimizerConfig cfg;
  cfg.psd_tol = psd_tol;
  return make_feix_model(cfg).max_eps(q);
}

FeixResult feix_maximize(const OptimizerConfig& cfg, double grid_step) {
  cfg.validate();
  if (!(grid_step > 0.0) || grid_step > 1.0) throw std::invalid_argument("grid step must be in (0, 1]");
  const FeixModel m = make_feix_model(cfg);
  const bool concave = is_concave(cfg.objective);

  FeixResult out;
  out.value = -std::numeric_limits<double>::infinity();
  out.separable_edge_value = out.value;
  const int nq = static_cast<int>(std::lround(1.0 / grid_step));
  for (int i = 0; i <= nq; ++i) {
    const double q = std::min(1.0, i * grid_step);
    const double emax = m.max_eps(q);
    for (int j = 0; j * grid_step <= emax; ++j) {
      const double eps = j * grid_step;
      const double v = m.value(q, eps);
      if (v > out.value) {
        out.value = v;
        out.params = {q, eps};
      }
      if (j == 0 && v > out.separable_edge_value) {
        out.separable_edge_value = v;
        out.separable_edge_params = {q, 0.0};
      }
    }
  }

  // eps = 0 is always PSD (a mixture of two ordered processes), so q ranges over [0, 1].
  {
    const auto f = [&](double q) { return m.value(q, 0.0); };
    const auto r = maximize_1d(f, 0.0, 1.0, out.separable_edge_params.q, cfg.line_tol, concave);
    out.separable_edge_value = r.value;
    out.separable_edge_params = {r.argmax, 0.0};
  }

  FeixParams cur = out.params;
  double val = out.value;
  for (int round = 0; round < cfg.max_sweeps; ++round) {
    const FeixParams before = cur;
    const auto q_feasible = [&](double q) { return m.psd(q, cur.eps); };
    const double qlo = bisect_boundary(cur.q, 0.0, q_feasible);
    const double qhi = bisect_boundary(cur.q, 1.0, q_feasible);
    auto rq = maximize_1d([&](double q) { return m.value(q, cur.eps); }, qlo, qhi, cur.q,
                          cfg.line_tol, concave);
    cur.q = rq.argmax;
    auto re = maximize_1d([&](double e) { return m.value(cur.q, e); }, 0.0, m.max_eps(cur.q),
                          cur.eps, cfg.line_tol, concave);
    cur.eps = re.argmax;
    val = re.value;
    if (std::abs(cur.q - before.q) < cfg.sweep_tol && std::abs(cur.eps - before.eps) < cfg.sweep_tol) {
      break;
    }
  }
  out.params = cur;
  out.value = val;
  return out;
}

}  // namespace procmat
