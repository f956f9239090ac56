#pragma once

#include <map>
#include <vector>

#include "procmat/operators.hpp"
#include "procmat/validity.hpp"

namespace procmat {

enum class Party { A, B };

/// Classical setting (x) and outcome (a) of one party's operation M_{a|x}.
struct Setting {
  int input = 0;
  int outcome = 0;

  friend auto operator<=>(const Setting&, const Setting&) = default;
};

/**
 * A party's local instrument: for each input x, the Choi operators M_{a|x}
 * on X_I (x) X_O of the completely positive maps it may apply.
 *
 * Valid instruments have every M_{a|x} positive semidefinite and, for each x,
 * Tr_{X_O} sum_a M_{a|x} = I^{X_I}. Construction does not enforce validity;
 * see validate_instrument.
 */
class Instrument {
 public:
  Instrument(Party party, SubsystemLabel in, SubsystemLabel out,
             std::map<Setting, HermitianOperator> operators);

  Party party() const { return party_; }
  const SubsystemLabel& input_label() const { return in_; }
  const SubsystemLabel& output_label() const { return out_; }
  const std::map<Setting, HermitianOperator>& operators() const { return ops_; }

  /// M_{a|x}; throws std::out_of_range when the pair is absent.
  const HermitianOperator& M(int outcome, int input) const;

  /// Sorted distinct inputs x.
  std::vector<int> inputs() const;
  /// Sorted distinct outcomes a over all inputs.
  std::vector<int> outcomes() const;

 private:
  Party party_;
  SubsystemLabel in_;
  SubsystemLabel out_;
  std::map<Setting, HermitianOperator> ops_;
};

/// Default (input, output) labels of a party: (A_I, A_O) or (B_I, B_O).
std::pair<SubsystemLabel, SubsystemLabel> party_labels(Party p);

/// |phi+><phi+| with unnormalized |phi+> = sum_i |ii>, the Choi operator of
/// the identity channel on a d-dimensional system.
HermitianOperator choi_identity(std::size_t d);
HermitianOperator choi_identity(const SubsystemLabel& in, const SubsystemLabel& out);

/// Choi operator [I (x) E(|phi+><phi+|)]^T of the CP map with the given Kraus
/// operators (each d_out x d_in); the transpose is in the computational basis.
HermitianOperator choi_from_kraus(const std::vector<Matrix>& kraus, const SubsystemLabel& in,
                                  const SubsystemLabel& out);

/// The binary strategy used for the guess-your-neighbour's-input game: on x=0
/// forward the incoming state and output 1; on x=1 measure sigma_z, output the
/// result and send |0>.
Instrument paper_strategy(Party party);

/// Checks "psd" (residual: most-negative eigenvalue over all M_{a|x}) and
/// "trace_preserving" (residual: max deviation of Tr_{X_O} sum_a M_{a|x}
/// from the identity, over all x).
ValidityReport validate_instrument(const Instrument& ins, double tol = kPsdTol);

}  // namespace procmat
