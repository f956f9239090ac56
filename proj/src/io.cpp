#include "procmat/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace procmat::io {
namespace {

double number_at(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ParseError("value of '" + key + "' is not a number");
  return j.get<double>();
}

const Json& require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + " must be a JSON object");
  return j;
}

std::string party_name(Party p) { return p == Party::A ? "A" : "B"; }

}  // namespace

std::string format_full(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

Json to_json(const PauliMap& m) {
  Json j = Json::object();
  for (const auto& [w, c] : m) j[w.str()] = c;
  return j;
}

PauliMap pauli_map_from_json(const Json& j, std::size_t word_length) {
  require_object(j, "Pauli-coefficient map");
  PauliMap m;
  for (const auto& [key, value] : j.items()) {
    if (key.size() != word_length) {
      throw ParseError("Pauli word '" + key + "' should have " + std::to_string(word_length) +
                       " letters");
    }
    try {
      m[PauliWord(key)] = number_at(value, key);
    } catch (const std::invalid_argument&) {
      throw ParseError("invalid Pauli word '" + key + "'");
    }
  }
  return m;
}

Json operator_to_json(const HermitianOperator& op) { return to_json(pauli_decompose(op, kPauliDrop)); }

HermitianOperator process_from_json(const Json& j) {
  return from_pauli(pauli_map_from_json(j, 4), labels::canonical());
}

Json to_json(const SepParams& p) {
  Json j = Json::object();
  for (std::size_t k = 0; k < SepParams::kNumCoords; ++k) j[SepParams::coord_name(k)] = p.coord(k);
  return j;
}

SepParams sep_params_from_json(const Json& j) {
  require_object(j, "separable parameters");
  SepParams p;
  p.q = 0.0;
  for (const auto& [key, value] : j.items()) {
    std::size_t k = 0;
    try {
      k = SepParams::coord_from_name(key);
    } catch (const std::invalid_argument&) {
      throw ParseError("unknown separable parameter '" + key + "'");
    }
    p.set_coord(k, number_at(value, key));
  }
  return p;
}

Json to_json(const FeixParams& p) { return Json{{"q", p.q}, {"eps", p.eps}}; }

FeixParams feix_params_from_json(const Json& j) {
  require_object(j, "Feix parameters");
  FeixParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "q") {
      p.q = number_at(value, key);
    } else if (key == "eps") {
      p.eps = number_at(value, key);
    } else {
      throw ParseError("unknown Feix parameter '" + key + "'");
    }
  }
  return p;
}

Json to_json(const Instrument& ins) {
  Json ops = Json::object();
  for (const auto& [key, op] : ins.operators()) {
    ops["x=" + std::to_string(key.input) + ",a=" + std::to_string(key.outcome)] =
        operator_to_json(op);
  }
  return Json{{"party", party_name(ins.party())}, {"operators", ops}};
}

Instrument instrument_from_json(const Json& j) {
  require_object(j, "instrument");
  if (!j.contains("party") || !j["party"].is_string()) throw ParseError("missing key 'party'");
  const std::string name = j["party"].get<std::string>();
  if (name != "A" && name != "B") throw ParseError("value of 'party' must be \"A\" or \"B\"");
  const Party party = name == "A" ? Party::A : Party::B;
  if (!j.contains("operators")) throw ParseError("missing key 'operators'");
  const auto [in, out] = party_labels(party);

  std::map<Setting, HermitianOperator> ops;
  for (const auto& [key, value] : require_object(j["operators"], "operators").items()) {
    int x = 0, a = 0;
    char tail = 0;
    if (std::sscanf(key.c_str(), "x=%d,a=%d%c", &x, &a, &tail) != 2) {
      throw ParseError("operator key '" + key + "' is not of the form x=<int>,a=<int>");
    }
    ops.emplace(Setting{x, a}, from_pauli(pauli_map_from_json(value, 2), {in, out}));
  }
  if (ops.empty()) throw ParseError("instrument has no operators");
  return {party, in, out, std::move(ops)};
}

Json to_json(const InputDist& d) {
  Json rows = Json::array();
  for (std::size_t x = 0; x < d.nx(); ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < d.ny(); ++y) row.push_back(d(x, y));
    rows.push_back(row);
  }
  return Json{{"p", rows}};
}

InputDist input_dist_from_json(const Json& j) {
  require_object(j, "input distribution");
  if (!j.contains("p") || !j["p"].is_array() || j["p"].empty()) {
    throw ParseError("key 'p' must be a non-empty array of rows");
  }
  const std::size_t nx = j["p"].size();
  const std::size_t ny = j["p"][0].is_array() ? j["p"][0].size() : 0;
  std::vector<double> probs;
  for (std::size_t x = 0; x < nx; ++x) {
    const auto& row = j["p"][x];
    if (!row.is_array() || row.size() != ny || ny == 0) throw ParseError("rows of 'p' must have equal length");
    for (std::size_t y = 0; y < ny; ++y) probs.push_back(number_at(row[y], "p"));
  }
  try {
    return {nx, ny, std::move(probs)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("key 'p': ") + e.what());
  }
}

Json to_json(const CondProbTable& t) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < t.na(); ++a) {
    for (std::size_t b = 0; b < t.nb(); ++b) {
      for (std::size_t x = 0; x < t.nx(); ++x) {
        for (std::size_t y = 0; y < t.ny(); ++y) {
          rows.push_back(Json{{"a", t.outcomes_a()[a]},
                              {"b", t.outcomes_b()[b]},
                              {"x", t.inputs_x()[x]},
                              {"y", t.inputs_y()[y]},
                              {"p", t(a, b, x, y)}});
        }
      }
    }
  }
  return rows;
}

Json to_json(const JointDist& d) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < d.na(); ++a) {
    for (std::size_t b = 0; b < d.nb(); ++b) {
      rows.push_back(Json{{"a", d.outcomes_a[a]}, {"b", d.outcomes_b[b]}, {"p", d(a, b)}});
    }
  }
  return rows;
}

Json to_json(const EntropyReport& r) {
  return Json{{"H_AB", r.h_ab},
              {"H_A", r.h_a},
              {"H_B", r.h_b},
              {"H_A_given_B", r.h_a_given_b},
              {"I_AB", r.i_ab}};
}

Json to_json(const ValidityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"condition", c.description},
                          {"residual", c.residual},
                          {"passed", c.passed}});
  }
  return Json{{"valid", r.all_passed()}, {"checks", checks}};
}

Json to_json(const OptimizerResult& r) {
  Json restarts = Json::array();
  for (const auto& rec : r.per_restart) {
    restarts.push_back(
        Json{{"restart", rec.index}, {"seed", rec.seed}, {"value", rec.value}, {"sweeps", rec.sweeps}});
  }
  return Json{{"best_value", r.best_value},
              {"best_restart", r.best_restart},
              {"best_params", to_json(r.best_params)},
              {"per_restart", restarts}};
}

Json config_to_json(const OptimizerConfig& cfg) {
  Json j{{"restarts", cfg.restarts},
              {"sweep_tol", cfg.sweep_tol},
              {"max_sweeps", cfg.max_sweeps},
              {"line_tol", cfg.line_tol},
              {"psd_tol", cfg.psd_tol},
              {"seed", cfg.seed},
              {"generator", kGeneratorName},
              {"objective", to_string(cfg.objective)},
              {"init_scale", cfg.init_scale},
              {"jobs", cfg.jobs},
              {"instrument_a", to_json(cfg.ins_a)},
              {"instrument_b", to_json(cfg.ins_b)},
              {"inputs", to_json(cfg.inputs)}};
  if (!cfg.active_coords.empty()) {
    Json names = Json::array();
    for (std::size_t k : cfg.active_coords) names.push_back(SepParams::coord_name(k));
    j["active_coords"] = names;
    j["fixed_params"] = to_json(cfg.fixed_params);
  }
  return j;
}

void write_csv(std::ostream& out, const CondProbTable& t) {
  out << "a,b,x,y,p\n";
  for (std::size_t a = 0; a < t.na(); ++a) {
    for (std::size_t b = 0; b < t.nb(); ++b) {
      for (std::size_t x = 0; x < t.nx(); ++x) {
        for (std::size_t y = 0; y < t.ny(); ++y) {
          out << t.outcomes_a()[a] << ',' << t.outcomes_b()[b] << ',' << t.inputs_x()[x] << ','
              << t.inputs_y()[y] << ',' << format_full(t(a, b, x, y)) << '\n';
        }
      }
    }
  }
}

void write_csv(std::ostream& out, const JointDist& d) {
  out << "a,b,p\n";
  for (std::size_t a = 0; a < d.na(); ++a) {
    for (std::size_t b = 0; b < d.nb(); ++b) {
      out << d.outcomes_a[a] << ',' << d.outcomes_b[b] << ',' << format_full(d(a, b)) << '\n';
    }
  }
}

void write_trace_csv(std::ostream& out, const OptimizerResult& r) {
  out << "restart,sweep,objective\n";
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    for (std::size_t s = 0; s < r.traces[i].size(); ++s) {
      out << i << ',' << s << ',' << format_full(r.traces[i][s]) << '\n';
    }
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace procmat::io
