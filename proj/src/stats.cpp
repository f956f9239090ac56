#include "procmat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace procmat {
namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_spaces(const HermitianOperator& w, const Instrument& ins_a, const Instrument& ins_b) {
  require_canonical(w);
  if (ins_a.party() != Party::A || ins_b.party() != Party::B) {
    throw LabelError("instruments must be given as (Alice, Bob)");
  }
  const auto& l = w.labels();
  if (ins_a.input_label().dim != l[0].dim || ins_a.output_label().dim != l[1].dim ||
      ins_b.input_label().dim != l[2].dim || ins_b.output_label().dim != l[3].dim) {
    throw LabelError("instrument dimensions do not match the process matrix");
  }
}

std::size_t position_of(const std::vector<int>& v, int value) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), value) - v.begin());
}

// Tr[(MA (x) MB) W]
double born(const Matrix& ma, const Matrix& mb, const Matrix& w) {
  const Complex t = kron(ma, mb).cwiseProduct(w.transpose()).sum();
  return t.real();
}

}  // namespace

CondProbTable::CondProbTable(std::vector<int> outcomes_a, std::vector<int> outcomes_b,
                             std::vector<int> inputs_x, std::vector<int> inputs_y,
                             std::vector<double> values)
    : outcomes_a_(std::move(outcomes_a)),
      outcomes_b_(std::move(outcomes_b)),
      inputs_x_(std::move(inputs_x)),
      inputs_y_(std::move(inputs_y)),
      values_(std::move(values)) {
  if (values_.size() != na() * nb() * nx() * ny()) {
    throw std::invalid_argument("conditional table has the wrong number of entries");
  }
  for (auto& v : values_) {
    if (v < -kNegativeProbTol) {
      throw ProbabilityError("negative probability " + std::to_string(v) +
                             " (invalid process or instrument)");
    }
    if (v < 0.0) v = 0.0;
  }
  for (std::size_t x = 0; x < nx(); ++x) {
    for (std::size_t y = 0; y < ny(); ++y) {
      double s = 0.0;
      for (std::size_t a = 0; a < na(); ++a) {
        for (std::size_t b = 0; b < nb(); ++b) s += (*this)(a, b, x, y);
      }
      if (std::abs(s - 1.0) > kNormalizationTol) {
        throw ProbabilityError("probabilities for inputs (" + std::to_string(inputs_x_[x]) + ", " +
                               std::to_string(inputs_y_[y]) + ") sum to " + std::to_string(s));
      }
    }
  }
}

InputDist::InputDist(std::size_t nx, std::size_t ny, std::vector<double> probs)
    : nx_(nx), ny_(ny), probs_(std::move(probs)) {
  if (probs_.size() != nx_ * ny_) throw std::invalid_argument("input distribution has wrong size");
  double s = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0)) throw std::invalid_argument("input probabilities must be nonnegative");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    throw std::invalid_argument("input probabilities sum to " + std::to_string(s));
  }
}

InputDist InputDist::uniform(std::size_t nx, std::size_t ny) {
  return {nx, ny, std::vector<double>(nx * ny, 1.0 / static_cast<double>(nx * ny))};
}

std::vector<double> JointDist::marginal_a() const {
  std::vector<double> m(na(), 0.0);
  for (std::size_t a = 0; a < na(); ++a) {
    for (std::size_t b = 0; b < nb(); ++b) m[a] += (*this)(a, b);
  }
  return m;
}

std::vector<double> JointDist::marginal_b() const {
  std::vector<double> m(nb(), 0.0);
  for (std::size_t a = 0; a < na(); ++a) {
    for (std::size_t b = 0; b < nb(); ++b) m[b] += (*this)(a, b);
  }
  return m;
}

CondProbTable cond_probs(const HermitianOperator& w, const Instrument& ins_a,
                         const Instrument& ins_b) {
  check_spaces(w, ins_a, ins_b);
  auto oa = ins_a.outcomes(), ob = ins_b.outcomes();
  auto ix = ins_a.inputs(), iy = ins_b.inputs();
  std::vector<double> values(oa.size() * ob.size() * ix.size() * iy.size(), 0.0);
  const double scale = std::max(1.0, w.matrix().cwiseAbs().maxCoeff());

  for (const auto& [ka, ma] : ins_a.operators()) {
    for (const auto& [kb, mb] : ins_b.operators()) {
      const Complex t = kron(ma.matrix(), mb.matrix()).cwiseProduct(w.matrix().transpose()).sum();
      if (std::abs(t.imag()) > 1e-12 * scale) {
        throw ProbabilityError("Born-rule trace has imaginary part " + std::to_string(t.imag()));
      }
      const std::size_t a = position_of(oa, ka.outcome), b = position_of(ob, kb.outcome);
      const std::size_t x = position_of(ix, ka.input), y = position_of(iy, kb.input);
      values[((a * ob.size() + b) * ix.size() + x) * iy.size() + y] = t.real();
    }
  }
  return {std::move(oa), std::move(ob), std::move(ix), std::move(iy), std::move(values)};
}

CondProbTable cond_probs(const ProcessMatrix& w, const Instrument& ins_a, const Instrument& ins_b) {
  return cond_probs(w.op(), ins_a, ins_b);
}

std::vector<double> joint_response(const HermitianOperator& op, const Instrument& ins_a,
                                   const Instrument& ins_b, const InputDist& inputs) {
  check_spaces(op, ins_a, ins_b);
  const auto oa = ins_a.outcomes(), ob = ins_b.outcomes();
  const auto ix = ins_a.inputs(), iy = ins_b.inputs();
  if (inputs.nx() != ix.size() || inputs.ny() != iy.size()) {
    throw std::invalid_argument("input distribution does not match the instruments' inputs");
  }
  std::vector<double> out(oa.size() * ob.size(), 0.0);
  for (const auto& [ka, ma] : ins_a.operators()) {
    for (const auto& [kb, mb] : ins_b.operators()) {
      const double pxy = inputs(position_of(ix, ka.input), position_of(iy, kb.input));
      if (pxy == 0.0) continue;
      out[position_of(oa, ka.outcome) * ob.size() + position_of(ob, kb.outcome)] +=
          pxy * born(ma.matrix(), mb.matrix(), op.matrix());
    }
  }
  return out;
}

JointDist joint_dist(const CondProbTable& t, const InputDist& inputs) {
  if (inputs.nx() != t.nx() || inputs.ny() != t.ny()) {
    throw std::invalid_argument("input distribution does not match the table's inputs");
  }
  JointDist j{t.outcomes_a(), t.outcomes_b(), std::vector<double>(t.na() * t.nb(), 0.0)};
  for (std::size_t a = 0; a < t.na(); ++a) {
    for (std::size_t b = 0; b < t.nb(); ++b) {
      double s = 0.0;
      for (std::size_t x = 0; x < t.nx(); ++x) {
        for (std::size_t y = 0; y < t.ny(); ++y) s += inputs(x, y) * t(a, b, x, y);
      }
      j.p[a * t.nb() + b] = s;
    }
  }
  return j;
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > kEntropyZero) h -= v * std::log2(v);
  }
  return h;
}

EntropyReport entropies(const JointDist& joint) {
  EntropyReport r;
  r.h_ab = shannon_entropy(joint.p);
  r.h_a = shannon_entropy(joint.marginal_a());
  r.h_b = shannon_entropy(joint.marginal_b());
  r.h_a_given_b = r.h_ab - r.h_b;
  r.i_ab = r.h_a + r.h_b - r.h_ab;
  return r;
}

double game_success(const CondProbTable& t) {
  const std::vector<int> bits{0, 1};
  if (t.outcomes_a() != bits || t.outcomes_b() != bits || t.inputs_x() != bits ||
      t.inputs_y() != bits) {
    throw std::invalid_argument("the guess-your-neighbour's-input game needs binary alphabets");
  }
  double s = 0.0;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) s += t(y, x, x, y);
  }
  return s / 4.0;
}

}  // namespace procmat
