#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "procmat/instruments.hpp"
#include "procmat/operators.hpp"
#include "procmat/process.hpp"

namespace procmat {

/// Probabilities below this magnitude contribute nothing to an entropy.
inline constexpr double kEntropyZero = 1e-15;
/// Negative probabilities above -kNegativeProbTol are roundoff and clamp to 0.
inline constexpr double kNegativeProbTol = 1e-12;
inline constexpr double kNormalizationTol = 1e-10;

/// Raised when Born-rule probabilities are inconsistent (significantly
/// negative or unnormalized), i.e. the process or an instrument is invalid.
class ProbabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// p(a, b | x, y) over the outcome/input alphabets of two instruments.
class CondProbTable {
 public:
  /// `values` is indexed ((a * nb + b) * nx + x) * ny + y over alphabet
  /// positions. Clamps roundoff negatives and enforces normalization per
  /// (x, y).
  CondProbTable(std::vector<int> outcomes_a, std::vector<int> outcomes_b, std::vector<int> inputs_x,
                std::vector<int> inputs_y, std::vector<double> values);

  /// Lookup by alphabet position.
  double operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return values_[((a * nb() + b) * nx() + x) * ny() + y];
  }

  std::size_t na() const { return outcomes_a_.size(); }
  std::size_t nb() const { return outcomes_b_.size(); }
  std::size_t nx() const { return inputs_x_.size(); }
  std::size_t ny() const { return inputs_y_.size(); }
  const std::vector<int>& outcomes_a() const { return outcomes_a_; }
  const std::vector<int>& outcomes_b() const { return outcomes_b_; }
  const std::vector<int>& inputs_x() const { return inputs_x_; }
  const std::vector<int>& inputs_y() const { return inputs_y_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<int> outcomes_a_, outcomes_b_, inputs_x_, inputs_y_;
  std::vector<double> values_;
};

/// p(x, y), row-major in x.
class InputDist {
 public:
  InputDist(std::size_t nx, std::size_t ny, std::vector<double> probs);
  static InputDist uniform(std::size_t nx, std::size_t ny);

  double operator()(std::size_t x, std::size_t y) const { return probs_[x * ny_ + y]; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::size_t nx_, ny_;
  std::vector<double> probs_;
};

/// p(a, b), row-major in a.
struct JointDist {
  std::vector<int> outcomes_a;
  std::vector<int> outcomes_b;
  std::vector<double> p;

  std::size_t na() const { return outcomes_a.size(); }
  std::size_t nb() const { return outcomes_b.size(); }
  double operator()(std::size_t a, std::size_t b) const { return p[a * nb() + b]; }
  std::vector<double> marginal_a() const;
  std::vector<double> marginal_b() const;
};

/// Shannon quantities in bits.
struct EntropyReport {
  double h_ab = 0.0;
  double h_a = 0.0;
  double h_b = 0.0;
  double h_a_given_b = 0.0;
  double i_ab = 0.0;
};

/// p(a,b|x,y) = Tr[(M_{a|x} (x) M_{b|y}) W]. Throws LabelError if the
/// instrument spaces do not match W's factors, ProbabilityError if the
/// resulting table is not a conditional distribution.
CondProbTable cond_probs(const HermitianOperator& w, const Instrument& ins_a,
                         const Instrument& ins_b);
CondProbTable cond_probs(const ProcessMatrix& w, const Instrument& ins_a, const Instrument& ins_b);

/// sum_{x,y} p(x,y) Tr[(M_{a|x} (x) M_{b|y}) op] for an arbitrary operator,
/// flattened as a * nb + b. Linear in op; no validation of the result.
std::vector<double> joint_response(const HermitianOperator& op, const Instrument& ins_a,
                                   const Instrument& ins_b, const InputDist& inputs);

JointDist joint_dist(const CondProbTable& t, const InputDist& inputs);

/// -sum p log2 p with 0 log 0 = 0.
double shannon_entropy(const std::vector<double>& p);

EntropyReport entropies(const JointDist& joint);

/// 1/4 sum_{x,y} p(a = y, b = x | x, y); requires binary alphabets {0, 1}.
double game_success(const CondProbTable& t);

/// The bound p_succ <= 1/2 obeyed by every causally separable process.
inline constexpr double kCausalBound = 0.5;

}  // namespace procmat
