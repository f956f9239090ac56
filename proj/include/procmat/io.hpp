#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "procmat/instruments.hpp"
#include "procmat/operators.hpp"
#include "procmat/optimizer.hpp"
#include "procmat/process.hpp"
#include "procmat/stats.hpp"

namespace procmat::io {

using Json = nlohmann::ordered_json;
using PauliMap = std::map<PauliWord, double>;

/// Malformed input document; the message names the offending key.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients with magnitude at or below this are omitted when an operator
/// is written as a Pauli map.
inline constexpr double kPauliDrop = 1e-15;

// Pauli-coefficient maps: {"IIII": 0.25, "ZZZI": 0.1767...}; absent words are 0.
Json to_json(const PauliMap& m);
PauliMap pauli_map_from_json(const Json& j, std::size_t word_length);
Json operator_to_json(const HermitianOperator& op);
/// Operator on the canonical labels from a 4-letter Pauli map.
HermitianOperator process_from_json(const Json& j);

// Separable parameters: {"q": ..., "c_0xx": ..., "cp_x0x": ...}; absent keys are 0.
Json to_json(const SepParams& p);
SepParams sep_params_from_json(const Json& j);

Json to_json(const FeixParams& p);
FeixParams feix_params_from_json(const Json& j);

// Instruments: {"party": "A", "operators": {"x=0,a=1": {"II": 0.5, ...}, ...}}
Json to_json(const Instrument& ins);
Instrument instrument_from_json(const Json& j);

// Input distributions: {"p": [[p00, p01], [p10, p11]]} indexed [x][y].
Json to_json(const InputDist& d);
InputDist input_dist_from_json(const Json& j);

Json to_json(const CondProbTable& t);
Json to_json(const JointDist& d);
Json to_json(const EntropyReport& r);
Json to_json(const ValidityReport& r);
Json to_json(const OptimizerResult& r);
Json config_to_json(const OptimizerConfig& cfg);

/// Columns a,b,x,y,p with a header row.
void write_csv(std::ostream& out, const CondProbTable& t);
/// Columns a,b,p with a header row.
void write_csv(std::ostream& out, const JointDist& d);
/// Columns restart,sweep,objective.
void write_trace_csv(std::ostream& out, const OptimizerResult& r);

/// Full-precision decimal text of a double (shortest round-trip form).
std::string format_full(double v);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace procmat::io
