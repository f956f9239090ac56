#include "procmat/instruments.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace procmat {

Instrument::Instrument(Party party, SubsystemLabel in, SubsystemLabel out,
                       std::map<Setting, HermitianOperator> operators)
    : party_(party), in_(std::move(in)), out_(std::move(out)), ops_(std::move(operators)) {
  if (ops_.empty()) throw std::invalid_argument("instrument has no operators");
  const LabelList expected{in_, out_};
  for (const auto& [key, op] : ops_) {
    if (op.labels() != expected) {
      throw LabelError("M_{" + std::to_string(key.outcome) + "|" + std::to_string(key.input) +
                       "} is not an operator on " + in_.name + " (x) " + out_.name);
    }
  }
}

const HermitianOperator& Instrument::M(int outcome, int input) const {
  auto it = ops_.find(Setting{input, outcome});
  if (it == ops_.end()) {
    throw std::out_of_range("instrument has no operator M_{" + std::to_string(outcome) + "|" +
                            std::to_string(input) + "}");
  }
  return it->second;
}

std::vector<int> Instrument::inputs() const {
  std::set<int> s;
  for (const auto& [key, op] : ops_) s.insert(key.input);
  return {s.begin(), s.end()};
}

std::vector<int> Instrument::outcomes() const {
  std::set<int> s;
  for (const auto& [key, op] : ops_) s.insert(key.outcome);
  return {s.begin(), s.end()};
}

std::pair<SubsystemLabel, SubsystemLabel> party_labels(Party p) {
  return p == Party::A ? std::pair{labels::A_I, labels::A_O} : std::pair{labels::B_I, labels::B_O};
}

HermitianOperator choi_identity(const SubsystemLabel& in, const SubsystemLabel& out) {
  if (in.dim != out.dim) throw LabelError("identity channel needs equal input/output dimensions");
  const auto d = static_cast<Eigen::Index>(in.dim);
  Matrix m = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0;
  }
  return {LabelList{in, out}, std::move(m)};
}

HermitianOperator choi_identity(std::size_t d) {
  if (d < 2) throw std::invalid_argument("choi_identity requires d >= 2");
  return choi_identity(SubsystemLabel{"in", d}, SubsystemLabel{"out", d});
}

HermitianOperator choi_from_kraus(const std::vector<Matrix>& kraus, const SubsystemLabel& in,
                                  const SubsystemLabel& out) {
  const auto di = static_cast<Eigen::Index>(in.dim);
  const auto dout = static_cast<Eigen::Index>(out.dim);
  Matrix acc = Matrix::Zero(di * dout, di * dout);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != di) {
      throw std::invalid_argument("Kraus operator has shape " + std::to_string(k.rows()) + "x" +
                                  std::to_string(k.cols()) + ", expected " +
                                  std::to_string(dout) + "x" + std::to_string(di));
    }
    // (I (x) K) sum_i |i>|i>
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(di * dout);
    for (Eigen::Index i = 0; i < di; ++i) v.segment(i * dout, dout) += k.col(i);
    acc += v * v.adjoint();
  }
  return {LabelList{in, out}, acc.transpose()};
}

Instrument paper_strategy(Party party) {
  const auto [in, out] = party_labels(party);
  Matrix ket0 = Matrix::Zero(2, 2);
  ket0(0, 0) = 1.0;
  Matrix ket1 = Matrix::Zero(2, 2);
  ket1(1, 1) = 1.0;
  const HermitianOperator zero_out(LabelList{out}, ket0);

  std::map<Setting, HermitianOperator> ops;
  ops.emplace(Setting{0, 0}, HermitianOperator::zero({in, out}));
  ops.emplace(Setting{0, 1}, choi_identity(in, out));
  ops.emplace(Setting{1, 0}, tensor({HermitianOperator(LabelList{in}, ket0), zero_out}));
  ops.emplace(Setting{1, 1}, tensor({HermitianOperator(LabelList{in}, ket1), zero_out}));
  return {party, in, out, std::move(ops)};
}

ValidityReport validate_instrument(const Instrument& ins, double tol) {
  double most_negative = 0.0;
  for (const auto& [key, op] : ins.operators()) most_negative = std::min(most_negative, min_eigenvalue(op));

  double tp_dev = 0.0;
  const auto id_in = HermitianOperator::identity({ins.input_label()});
  for (int x : ins.inputs()) {
    auto sum = HermitianOperator::zero({ins.input_label(), ins.output_label()});
    for (const auto& [key, op] : ins.operators()) {
      if (key.input == x) sum += op;
    }
    tp_dev = std::max(tp_dev, partial_trace(sum, {ins.output_label().name}).max_abs_diff(id_in));
  }

  ValidityReport r;
  r.checks.push_back({"psd", "every M_{a|x} >= 0", most_negative, most_negative >= -tol});
  r.checks.push_back({"trace_preserving", "Tr_out sum_a M_{a|x} = I_in for every x", tp_dev,
                      tp_dev <= tol});
  return r;
}

}  // namespace procmat
