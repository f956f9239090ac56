#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "procmat/io.hpp"
#include "procmat/optimizer.hpp"
#include "procmat/process.hpp"
#include "procmat/stats.hpp"

namespace procmat::cli {
namespace {

using io::Json;

constexpr const char* kVersion = "0.1.0";

/// Bad flag combinations or unreadable inputs; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A process or instrument failed validation; maps to kExitInvalid.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProcessSpec {
  std::string name;  // ocb | feix | sep, or empty with --file
  std::optional<double> q;
  std::optional<double> eps;
  std::string params_file;
  std::string file;
};

struct StrategySpec {
  std::string file_a;
  std::string file_b;
  std::string inputs_file;
};

struct Session {
  std::vector<std::string> args;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::string started_at;
  std::ostream& out;
  std::ostream& err;
};

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

Json manifest(const Session& s, const Json& config, std::optional<std::uint64_t> seed) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - s.start).count();
  Json m{{"command", joined(s.args)},
         {"library", "procmat"},
         {"version", kVersion},
         {"config", config},
         {"generator", kGeneratorName}};
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  m["started_at"] = s.started_at;
  m["duration_seconds"] = secs;
  return m;
}

void text_header(const Session& s, std::ostream& out, std::optional<std::uint64_t> seed = std::nullopt) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - s.start).count();
  out << "# procmat " << kVersion << ": " << joined(s.args) << '\n' << "# generator " << kGeneratorName
      << ", seed " << (seed ? std::to_string(*seed) : "none") << ", started " << s.started_at << ", "
      << std::setprecision(3) << secs << " s" << std::setprecision(6) << '\n';
}

std::string describe(const ProcessSpec& p) {
  if (!p.file.empty()) return "file " + p.file;
  if (p.name == "feix") {
    return "feix (q=" + io::format_full(p.q.value_or(1.0)) +
           ", eps=" + io::format_full(p.eps.value_or(0.0)) + ")";
  }
  if (p.name == "sep") return "sep (" + p.params_file + ")";
  return p.name;
}

Json process_config(const ProcessSpec& p) {
  Json j{{"process", p.file.empty() ? p.name : "file"}};
  if (!p.file.empty()) j["file"] = p.file;
  if (p.q) j["q"] = *p.q;
  if (p.eps) j["eps"] = *p.eps;
  if (!p.params_file.empty()) j["params"] = p.params_file;
  return j;
}

// Builds W from the command-line options. Infeasible separable parameters are a validation
// failure; malformed specs and files are usage errors.
HermitianOperator build_process(const ProcessSpec& p) {
  const int sources = (p.name.empty() ? 0 : 1) + (p.file.empty() ? 0 : 1);
  if (sources != 1) throw UsageError("give exactly one of a process name (ocb, feix, sep) or --file");
  if ((p.q || p.eps) && p.name != "feix") throw UsageError("--q/--eps apply only to 'feix'");
  if (!p.params_file.empty() && p.name != "sep") throw UsageError("--params applies only to 'sep'");
  try {
    if (!p.file.empty()) return io::process_from_json(io::read_json_file(p.file));
    if (p.name == "ocb") return w_ocb().op();
    if (p.name == "feix") return w_feix({p.q.value_or(1.0), p.eps.value_or(0.0)}).op();
    if (p.name == "sep") {
      if (p.params_file.empty()) throw UsageError("'sep' requires --params FILE");
      const SepParams params = io::sep_params_from_json(io::read_json_file(p.params_file));
      try {
        return w_sep_from_params(params).sep.op();
      } catch (const InfeasibleParams& e) {
        throw ValidationFailure(e.what());
      } catch (const std::invalid_argument& e) {
        throw ValidationFailure(e.what());
      }
    }
  } catch (const io::ParseError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown process '" + p.name + "' (expected ocb, feix or sep)");
}

struct Strategy {
  Instrument a;
  Instrument b;
  InputDist inputs;
};

Strategy build_strategy(const StrategySpec& s) {
  try {
    Instrument a = s.file_a.empty() ? paper_strategy(Party::A)
                                    : io::instrument_from_json(io::read_json_file(s.file_a));
    Instrument b = s.file_b.empty() ? paper_strategy(Party::B)
                                    : io::instrument_from_json(io::read_json_file(s.file_b));
    InputDist inputs = s.inputs_file.empty()
                           ? InputDist::uniform(a.inputs().size(), b.inputs().size())
                           : io::input_dist_from_json(io::read_json_file(s.inputs_file));
    for (const auto* ins : {&a, &b}) {
      const auto report = validate_instrument(*ins);
      if (!report.all_passed()) {
        std::string msg = std::string("instrument of party ") + (ins == &a ? "A" : "B") + " is invalid:";
        for (const auto& c : report.checks) {
          if (!c.passed) msg += " " + c.name + " (residual " + io::format_full(c.residual) + ")";
        }
        throw ValidationFailure(msg);
      }
    }
    return {std::move(a), std::move(b), std::move(inputs)};
  } catch (const io::ParseError& e) {
    throw UsageError(e.what());
  } catch (const LabelError& e) {
    throw UsageError(e.what());
  }
}

Json strategy_config(const StrategySpec& s) {
  return Json{{"strategy_a", s.file_a.empty() ? "paper" : s.file_a},
              {"strategy_b", s.file_b.empty() ? "paper" : s.file_b},
              {"inputs", s.inputs_file.empty() ? "uniform" : s.inputs_file}};
}

void require_valid(const ProcessMatrix& w) {
  if (w.is_valid()) return;
  std::string msg = "process matrix is invalid:";
  for (const auto& c : w.validity().checks) {
    if (!c.passed) msg += " " + c.name + " (residual " + io::format_full(c.residual) + ")";
  }
  throw ValidationFailure(msg);
}

void print_validity_text(std::ostream& out, const ValidityReport& r) {
  for (const auto& c : r.checks) {
    out << std::left << std::setw(12) << c.name << ' ' << (c.passed ? "PASS" : "FAIL")
        << "  residual " << std::setw(13) << c.residual << "  " << c.description << '\n';
  }
  out << (r.all_passed() ? "valid process matrix" : "INVALID process matrix") << '\n';
}

void add_process_options(CLI::App* sub, ProcessSpec& p) {
  sub->add_option("process", p.name, "Built-in process: ocb, feix or sep");
  sub->add_option("--q", p.q, "Mixing weight q of the feix family");
  sub->add_option("--eps", p.eps, "Parameter eps of the feix family");
  sub->add_option("--params", p.params_file, "Separable parameter file for 'sep'");
  sub->add_option("--file", p.file, "Process matrix as a Pauli-coefficient map");
}

void add_strategy_options(CLI::App* sub, StrategySpec& s) {
  sub->add_option("--strategy-a", s.file_a, "Instrument file for Alice (default: paper strategy)");
  sub->add_option("--strategy-b", s.file_b, "Instrument file for Bob (default: paper strategy)");
  sub->add_option("--inputs", s.inputs_file, "Input distribution file (default: uniform)");
}

int cmd_validate(Session& s, const ProcessSpec& p, const std::string& format) {
  const ProcessMatrix w(build_process(p));
  if (format == "json") {
    Json doc{{"manifest", manifest(s, process_config(p), std::nullopt)},
             {"process", describe(p)},
             {"validity", io::to_json(w.validity())}};
    s.out << doc.dump(2) << '\n';
  } else if (format == "csv") {
    text_header(s, s.out);
    s.out << "check,passed,residual\n";
    for (const auto& c : w.validity().checks) {
      s.out << c.name << ',' << (c.passed ? 1 : 0) << ',' << io::format_full(c.residual) << '\n';
    }
  } else {
    text_header(s, s.out);
    s.out << "process: " << describe(p) << '\n';
    print_validity_text(s.out, w.validity());
  }
  return w.is_valid() ? kExitOk : kExitInvalid;
}

int cmd_entropy(Session& s, const ProcessSpec& p, const StrategySpec& st, const std::string& format) {
  const ProcessMatrix w(build_process(p));
  require_valid(w);
  const Strategy strat = build_strategy(st);
  const CondProbTable table = cond_probs(w, strat.a, strat.b);
  const JointDist joint = joint_dist(table, strat.inputs);
  const EntropyReport rep = entropies(joint);

  if (format == "json") {
    Json cfg = process_config(p);
    cfg.update(strategy_config(st));
    Json doc{{"manifest", manifest(s, cfg, std::nullopt)},
             {"process", describe(p)},
             {"cond_probs", io::to_json(table)},
             {"joint", io::to_json(joint)},
             {"entropies", io::to_json(rep)}};
    s.out << doc.dump(2) << '\n';
  } else if (format == "csv") {
    text_header(s, s.out);
    io::write_csv(s.out, table);
    s.out << '\n';
    io::write_csv(s.out, joint);
    s.out << "\nquantity,value\n";
    const Json values = io::to_json(rep);
    for (const auto& [k, v] : values.items()) {
      s.out << k << ',' << io::format_full(v.get<double>()) << '\n';
    }
  } else {
    text_header(s, s.out);
    s.out << "process: " << describe(p) << "\n\np(a,b|x,y)\n  a b x y  p\n";
    for (std::size_t a = 0; a < table.na(); ++a) {
      for (std::size_t b = 0; b < table.nb(); ++b) {
        for (std::size_t x = 0; x < table.nx(); ++x) {
          for (std::size_t y = 0; y < table.ny(); ++y) {
            s.out << "  " << table.outcomes_a()[a] << ' ' << table.outcomes_b()[b] << ' '
                  << table.inputs_x()[x] << ' ' << table.inputs_y()[y] << "  "
                  << table(a, b, x, y) << '\n';
          }
        }
      }
    }
    s.out << "\np(a,b)\n";
    for (std::size_t a = 0; a < joint.na(); ++a) {
      for (std::size_t b = 0; b < joint.nb(); ++b) {
        s.out << "  " << joint.outcomes_a[a] << ' ' << joint.outcomes_b[b] << "  " << joint(a, b)
              << '\n';
      }
    }
    s.out << "\nH_AB = " << rep.h_ab << "\nH_A = " << rep.h_a << "\nH_B = " << rep.h_b
          << "\nH_A_given_B = " << rep.h_a_given_b << "\nI_AB = " << rep.i_ab << '\n';
  }
  return kExitOk;
}

int cmd_game(Session& s, const ProcessSpec& p, const StrategySpec& st, const std::string& format) {
  const ProcessMatrix w(build_process(p));
  require_valid(w);
  const Strategy strat = build_strategy(st);
  double p_succ = 0.0;
  try {
    p_succ = game_success(cond_probs(w, strat.a, strat.b));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool violation = p_succ > kCausalBound;

  if (format == "json") {
    Json cfg = process_config(p);
    cfg.update(strategy_config(st));
    Json doc{{"manifest", manifest(s, cfg, std::nullopt)},
             {"process", describe(p)},
             {"p_succ", p_succ},
             {"causal_bound", kCausalBound},
             {"violation", violation}};
    s.out << doc.dump(2) << '\n';
  } else if (format == "csv") {
    text_header(s, s.out);
    s.out << "p_succ,causal_bound,violation\n"
          << io::format_full(p_succ) << ',' << io::format_full(kCausalBound) << ','
          << (violation ? 1 : 0) << '\n';
  } else {
    text_header(s, s.out);
    s.out << "process: " << describe(p) << "\np_succ = " << p_succ
          << "\ncausal bound = " << kCausalBound << '\n'
          << (violation ? "VIOLATION: p_succ exceeds the causal bound" : "no violation") << '\n';
  }
  return kExitOk;
}

struct OptimizeFlags {
  std::string mode;
  OptimizerConfig cfg;
  std::string objective = "H_AB";
  std::string out_file;
  std::string trace_file;
  std::string sep_result;
  std::string format = "text";
};

std::string resolve_output(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv(kOutputDirEnv);
  std::filesystem::path p(path);
  if (dir != nullptr && *dir != '\0' && p.is_relative()) p = std::filesystem::path(dir) / p;
  return p.string();
}

double reference_value(const OptimizerConfig& cfg) {
  return evaluate(cfg.objective,
                  joint_dist(cond_probs(w_ocb(), cfg.ins_a, cfg.ins_b), cfg.inputs));
}

int cmd_optimize(Session& s, OptimizeFlags& f, const StrategySpec& st) {
  if (f.mode != "sep" && f.mode != "feix") throw UsageError("optimize mode must be 'sep' or 'feix'");
  if (f.mode == "sep" && !f.sep_result.empty()) throw UsageError("--sep-result applies only to 'feix'");
  try {
    f.cfg.objective = objective_from_string(f.objective);
    f.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Strategy strat = build_strategy(st);
  f.cfg.ins_a = std::move(strat.a);
  f.cfg.ins_b = std::move(strat.b);
  f.cfg.inputs = std::move(strat.inputs);
  f.cfg.record_trace = !f.trace_file.empty();

  Json cfg_json = io::config_to_json(f.cfg);
  cfg_json["mode"] = f.mode;
  const std::string obj = to_string(f.cfg.objective);
  Json doc;
  std::ostringstream text;
  text << std::setprecision(6);

  if (f.mode == "sep") {
    const OptimizerResult r = multistart(f.cfg);
    const double ref = reference_value(f.cfg);
    const bool satisfied = ref > r.best_value;
    const std::string verdict = satisfied ? "inequality satisfied" : "inequality not satisfied";
    doc = Json{{"result", io::to_json(r)},
               {"reference", Json{{"process", "ocb"}, {"value", ref}}},
               {"verdict", verdict}};
    text << "best " << obj << " over the separable family: " << r.best_value << " (restart "
         << r.best_restart << " of " << f.cfg.restarts << ")\n"
         << obj << " of the reference nonseparable process (ocb): " << ref << '\n'
         << "verdict: " << verdict << " (reference - separable maximum = " << ref - r.best_value
         << ")\n";
    if (f.cfg.record_trace) {
      std::ofstream tf(resolve_output(f.trace_file));
      if (!tf) throw UsageError("cannot write trace file '" + f.trace_file + "'");
      io::write_trace_csv(tf, r);
    }
    if (f.format == "csv") {
      std::ostringstream csv;
      csv << "restart,seed,value,sweeps\n";
      for (const auto& rec : r.per_restart) {
        csv << rec.index << ',' << rec.seed << ',' << io::format_full(rec.value) << ','
            << rec.sweeps << '\n';
      }
      text.str(csv.str());
    }
  } else {
    const FeixResult fr = feix_maximize(f.cfg);
    double baseline = fr.separable_edge_value;
    std::string source = "eps = 0 edge of the feix family";
    std::optional<OptimizerResult> sep;
    if (!f.sep_result.empty()) {
      try {
        const Json j = io::read_json_file(f.sep_result);
        const double v = j.at("result").at("best_value").get<double>();
        if (v > baseline) {
          baseline = v;
          source = f.sep_result;
        }
      } catch (const nlohmann::json::exception&) {
        throw UsageError("'" + f.sep_result + "' has no result.best_value");
      } catch (const io::ParseError& e) {
        throw UsageError(e.what());
      }
    } else {
      sep = multistart(f.cfg);
      if (sep->best_value > baseline) {
        baseline = sep->best_value;
        source = "separable multistart (" + std::to_string(f.cfg.restarts) + " restarts)";
      }
    }
    const bool satisfied = fr.value > baseline;
    const std::string verdict = satisfied ? "inequality satisfied" : "inequality not satisfied";
    doc = Json{{"result",
                Json{{"best_value", fr.value},
                     {"best_params", io::to_json(fr.params)},
                     {"separable_edge_value", fr.separable_edge_value},
                     {"separable_edge_params", io::to_json(fr.separable_edge_params)}}},
               {"separable_baseline", Json{{"value", baseline}, {"source", source}}},
               {"verdict", verdict}};
    if (sep) doc["separable_baseline"]["result"] = io::to_json(*sep);
    text << "max " << obj << " over the feix family: " << fr.value << " at q=" << fr.params.q
         << ", eps=" << fr.params.eps << '\n'
         << "separable maximum with the same non-signalling part: " << baseline << " (" << source
         << ")\n"
         << "verdict: " << verdict << '\n';
    if (f.format == "csv") {
      std::ostringstream csv;
      csv << "quantity,value\nbest_value," << io::format_full(fr.value) << "\nq,"
          << io::format_full(fr.params.q) << "\neps," << io::format_full(fr.params.eps)
          << "\nseparable_baseline," << io::format_full(baseline) << "\nverdict," << verdict
          << '\n';
      text.str(csv.str());
    }
  }

  doc["manifest"] = manifest(s, cfg_json, f.cfg.seed);
  if (!f.out_file.empty()) {
    try {
      io::write_json_file(resolve_output(f.out_file), doc);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  }
  if (f.format == "json") {
    s.out << doc.dump(2) << '\n';
  } else {
    text_header(s, s.out, f.cfg.seed);
    s.out << text.str();
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session session{args, std::chrono::steady_clock::now(), utc_timestamp(), out, err};
  out << std::setprecision(6);

  CLI::App app{"Two-party process matrices: validity, outcome entropies, causal game, and "
               "separable entropy maximization",
               "procmat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ProcessSpec proc;
  StrategySpec strat;
  std::string format = "text";
  const std::vector<std::string> formats{"text", "json", "csv"};

  auto* validate = app.add_subcommand("validate", "Check the process-matrix conditions");
  add_process_options(validate, proc);
  validate->add_option("--format", format)->check(CLI::IsMember(formats));

  auto* entropy = app.add_subcommand("entropy", "Outcome probabilities and entropies");
  add_process_options(entropy, proc);
  add_strategy_options(entropy, strat);
  entropy->add_option("--format", format)->check(CLI::IsMember(formats));

  auto* game = app.add_subcommand("game", "Guess-your-neighbour's-input success probability");
  add_process_options(game, proc);
  add_strategy_options(game, strat);
  game->add_option("--format", format)->check(CLI::IsMember(formats));

  OptimizeFlags opt;
  auto* optimize = app.add_subcommand("optimize", "Maximize an entropy over the separable or feix family");
  optimize->add_option("mode", opt.mode, "sep or feix")->required()->check(CLI::IsMember({"sep", "feix"}));
  optimize->add_option("--restarts", opt.cfg.restarts, "Random restarts (default 100)");
  optimize->add_option("--seed", opt.cfg.seed, "Base seed; restart r uses seed + r");
  optimize->add_option("--tol", opt.cfg.sweep_tol, "Largest per-sweep parameter change at convergence");
  optimize->add_option("--max-sweeps", opt.cfg.max_sweeps, "Sweep limit per restart");
  optimize->add_option("--objective", opt.objective, "H_AB, H_A, H_B, H_A_given_B or I_AB");
  optimize->add_option("--jobs", opt.cfg.jobs, "Worker threads (0: all hardware threads)");
  optimize->add_option("--out", opt.out_file, "Write the result document (JSON) here");
  optimize->add_option("--trace", opt.trace_file, "Write per-sweep objective values (CSV) here");
  optimize->add_option("--sep-result", opt.sep_result,
                       "feix: separable result file to compare against instead of a new search");
  optimize->add_option("--format", opt.format)->check(CLI::IsMember(formats));
  add_strategy_options(optimize, strat);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(session, proc, format);
    if (entropy->parsed()) return cmd_entropy(session, proc, strat, format);
    if (game->parsed()) return cmd_game(session, proc, strat, format);
    if (optimize->parsed()) return cmd_optimize(session, opt, strat);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationFailure& e) {
    err << "validation failed: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ProbabilityError& e) {
    err << "validation failed: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace procmat::cli
