// fhvqe command-line driver: exact, vqe, sweep and circuit-dump.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fhvqe/ansatz.hpp"
#include "fhvqe/config.hpp"
#include "fhvqe/error.hpp"
#include "fhvqe/exactdiag.hpp"
#include "fhvqe/observables.hpp"
#include "fhvqe/vqe.hpp"

using namespace fhvqe;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_run_options(CLI::App* app, Flags& flags) {
  auto record = [&flags](const std::string& key) {
    return [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); };
  };
  app->add_option("--config", flags.config_path, "key = value config file; flags win");
  app->add_option_function<std::string>("--geometry", record("geometry"), "WIDTHxHEIGHT, e.g. 4x1");
  app->add_option_function<std::string>("--u", record("u"), "U/t");
  app->add_option_function<std::string>("--u-grid", record("u-grid"), "0,1,2,4 or start:stop:step");
  app->add_option_function<std::string>("--sector", record("sector"), "n_up,n_down");
  app->add_option_function<std::string>("--n-electrons", record("n-electrons"), "total electrons");
  app->add_option_function<std::string>("-k,--levels", record("levels"), "number of levels");
  app->add_option_function<std::string>("--diagram-level", record("diagram-level"), "sweep level, 0 or 2");
  app->add_option_function<std::string>("--sources", record("sources"), "sweep sources: both, exact, vqe");
  app->add_option_function<std::string>("--layers", record("layers"), "ansatz layers");
  app->add_option_function<std::string>("--variant", record("variant"),
                                        "modified_hopping, plain_hopping, number_preserving");
  app->add_flag_callback("--fswap", [&flags] { flags.overrides.emplace_back("fswap", "true"); },
                         "route 2D bonds through fermionic swaps");
  app->add_flag_callback("--no-fswap", [&flags] { flags.overrides.emplace_back("fswap", "false"); },
                         "apply 2D hopping gates without swaps");
  app->add_option_function<std::string>("--restarts", record("restarts"), "restarts per level");
  app->add_option_function<std::string>("--stage1-iters", record("stage1-iters"), "COBYLA evaluations");
  app->add_option_function<std::string>("--stage2-iters", record("stage2-iters"), "L-BFGS iterations");
  app->add_option_function<std::string>("--seed", record("seed"), "root seed");
  app->add_option_function<std::string>("--workers", record("workers"), "threads, 0 = all cores");
  app->add_option_function<std::string>("--out", record("out"), "output file (sweep: prefix)");
  app->add_option_function<std::string>("--format", record("format"), "csv, json or svg");
  app->add_option_function<std::string>("--trace", record("trace"), "optimizer trace CSV path");
}

RunConfig resolve(const Flags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) load_config_file(flags.config_path, config);
  for (const auto& [k, v] : flags.overrides) config.set(k, v);
  return config;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

double require_u(const RunConfig& c) {
  if (!c.u) throw ConfigError("--u is required");
  return *c.u;
}

int cmd_exact(const RunConfig& c) {
  const auto geometry = c.lattice();
  const double u = require_u(c);
  const auto [n_up, n_down] = c.resolved_sector();
  const auto spec = exact_spectrum(geometry, u, n_up, n_down, c.levels);
  std::ostringstream s;
  if (c.format == OutputFormat::csv) {
    s << "level,energy\n";
    for (std::size_t i = 0; i < spec.energies.size(); ++i) {
      s << i << ',' << json(spec.energies[i]).dump() << '\n';
    }
  } else if (c.format == OutputFormat::json) {
    json j;
    j["geometry"] = geometry.tag();
    j["u"] = u;
    j["sector"] = {n_up, n_down};
    j["energies"] = spec.energies;
    j["truncated"] = spec.truncated;
    s << j.dump(2) << '\n';
  } else {
    throw ConfigError("exact supports csv or json");
  }
  emit(c.out, s.str());
  return 0;
}

int cmd_vqe(const RunConfig& c) {
  const auto geometry = c.lattice();
  const double u = require_u(c);
  const auto [n_up, n_down] = c.resolved_sector();
  if (c.format == OutputFormat::svg) throw ConfigError("vqe supports csv or json");
  LevelSolver solver(geometry, u, n_up, n_down, c.ansatz(), c.schedule());
  if (static_cast<std::size_t>(c.levels) > solver.sector_dimension()) {
    throw OrderingError(std::to_string(c.levels) + " levels requested but the sector has dimension " +
                        std::to_string(solver.sector_dimension()));
  }
  const auto exact = exact_spectrum(geometry, u, n_up, n_down, c.levels);

  std::ofstream trace;
  if (!c.trace.empty()) {
    trace.open(c.trace, std::ios::binary);
    if (!trace) throw ConfigError("cannot write '" + c.trace + "'");
    trace << "level,restart,stage,evaluation,value\n";
  }

  json j;
  j["geometry"] = geometry.tag();
  j["u"] = u;
  j["sector"] = {n_up, n_down};
  j["variant"] = to_string(c.variant);
  j["layers"] = c.layers;
  j["fswap"] = c.fswap;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["n_params"] = solver.circuit().n_params;
  j["penalty_weight"] = solver.penalty_weight();
  j["levels"] = json::array();
  std::ostringstream csv;
  csv << "level,energy,exact,deviation,mean,std,max_prior_overlap\n";
  for (int level = 0; level < c.levels; ++level) {
    VqeTraceFn fn;
    if (trace.is_open()) {
      fn = [&trace, level](int r, int stage, int e, double v) {
        trace << level << ',' << r << ',' << stage << ',' << e << ',' << json(v).dump() << '\n';
      };
    }
    const auto r = solver.solve_level(level, fn);
    if (!std::isfinite(r.energy)) throw NumericalError("non-finite energy at level " + std::to_string(level));
    const double e_exact = exact.energies[static_cast<std::size_t>(level)];
    double max_overlap = 0.0;
    for (double o : r.overlaps_with_priors) max_overlap = std::max(max_overlap, o);
    json lj;
    lj["level"] = level;
    lj["energy"] = r.energy;
    lj["exact"] = e_exact;
    lj["deviation"] = r.energy - e_exact;
    lj["mean"] = r.mean;
    lj["std"] = r.std_dev;
    lj["objective"] = r.objective;
    lj["overlaps_with_priors"] = r.overlaps_with_priors;
    lj["runs"] = json::array();
    for (const auto& run : r.runs) {
      lj["runs"].push_back({{"seed", run.seed},
                            {"energy", run.energy},
                            {"objective", run.objective},
                            {"stage1_objective", run.stage1_objective},
                            {"evaluations", run.evaluations},
                            {"line_search_failed", run.line_search_failed}});
    }
    lj["params"] = r.params;
    j["levels"].push_back(std::move(lj));
    csv << level << ',' << json(r.energy).dump() << ',' << json(e_exact).dump() << ','
        << json(r.energy - e_exact).dump() << ',' << json(r.mean).dump() << ','
        << json(r.std_dev).dump() << ',' << json(max_overlap).dump() << '\n';
  }
  emit(c.out, c.format == OutputFormat::csv ? csv.str() : j.dump(2) + "\n");
  return 0;
}

std::string diagram_csv(const GapDiagram& d) {
  std::ostringstream s;
  write_csv(s, d);
  return s.str();
}

std::string errors_csv(const std::vector<ErrorStats>& stats) {
  std::ostringstream s;
  s << "quantity,count,mae,mse,mpe_percent\n";
  for (const auto& e : stats) {
    s << to_string(e.quantity) << ',' << e.count << ',' << json(e.mae).dump() << ','
      << json(e.mse).dump() << ',' << json(e.mpe).dump() << '\n';
  }
  return s.str();
}

int cmd_sweep(const RunConfig& c) {
  const auto geometry = c.lattice();
  const auto grid = c.resolved_u_grid();
  // Parallelism goes to sectors; restarts inside a sector stay serial.
  OptimizerSchedule schedule = c.schedule();
  schedule.workers = 1;
  const ExactSource exact_source;
  const VqeSource vqe_source(c.ansatz(), schedule);

  std::vector<GapDiagram> diagrams;
  if (c.sources != "vqe") {
    diagrams.push_back(build_diagram(exact_source, geometry, grid, c.diagram_level, c.workers));
  }
  if (c.sources != "exact") {
    diagrams.push_back(build_diagram(vqe_source, geometry, grid, c.diagram_level, c.workers));
  }
  std::vector<ErrorStats> stats;
  if (diagrams.size() == 2) stats = error_summary(diagrams[1], diagrams[0]);

  if (c.format == OutputFormat::svg) {
    if (c.out.empty()) throw ConfigError("svg output needs --out");
    for (const auto& d : diagrams) {
      for (Quantity q : {Quantity::energy, Quantity::charge_gap, Quantity::spin_gap}) {
        emit(c.out + "_" + d.source + "_" + to_string(q) + ".svg", heatmap_svg(d, q));
      }
    }
    if (!stats.empty()) emit(c.out + "_errors.json", error_summary_json(stats));
    return 0;
  }
  if (c.out.empty()) {
    if (c.format == OutputFormat::csv) {
      for (const auto& d : diagrams) std::cout << "# " << d.source << '\n' << diagram_csv(d);
      if (!stats.empty()) std::cout << "# errors\n" << errors_csv(stats);
    } else {
      json j;
      for (const auto& d : diagrams) j[d.source] = json::parse(to_json(d));
      if (!stats.empty()) j["errors"] = json::parse(error_summary_json(stats));
      std::cout << j.dump(2) << '\n';
    }
    return 0;
  }
  const bool csv = c.format == OutputFormat::csv;
  for (const auto& d : diagrams) {
    emit(c.out + "_" + d.source + (csv ? ".csv" : ".json"), csv ? diagram_csv(d) : to_json(d));
  }
  if (!stats.empty()) {
    emit(c.out + "_errors" + (csv ? ".csv" : ".json"), csv ? errors_csv(stats) : error_summary_json(stats));
  }
  return 0;
}

int cmd_circuit_dump(const RunConfig& c) {
  const auto geometry = c.lattice();
  const auto [n_up, n_down] = c.resolved_sector();
  const auto circuit = build_ansatz(geometry, n_up, n_down, c.ansatz());
  std::ostringstream s;
  if (c.format == OutputFormat::json) {
    json j;
    j["geometry"] = geometry.tag();
    j["sector"] = {n_up, n_down};
    j["n_qubits"] = circuit.n_qubits;
    j["n_params"] = circuit.n_params;
    j["fswap_disabled_on_2d"] = circuit.fswap_disabled_on_2d;
    j["prep"] = circuit.prep;
    j["gates"] = json::array();
    for (const auto& g : circuit.slots) {
      j["gates"].push_back({{"kind", to_string(g.kind)},
                            {"qubits", {g.q_a, g.q_b}},
                            {"params", {g.params[0], g.params[1]}}});
    }
    s << j.dump(2) << '\n';
  } else {
    circuit.dump(s);
  }
  emit(c.out, s.str());
  return 0;
}

int fail(int code, const char* type, const std::string& message) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cout << j.dump() << '\n';
  std::cerr << "error: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermi-Hubbard VQE and exact diagonalization"};
  app.require_subcommand(1);
  Flags flags;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"exact", "sector spectrum by exact diagonalization", cmd_exact},
      {"vqe", "ground and excited levels of one sector", cmd_vqe},
      {"sweep", "charge/spin gap diagrams over N and U", cmd_sweep},
      {"circuit-dump", "print the ansatz gate list", cmd_circuit_dump},
  };
  int (*selected)(const RunConfig&) = nullptr;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_run_options(sub, flags);
    sub->callback([&selected, run = cmd.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return selected(resolve(flags));
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, "numerical", e.what());
  } catch (const DimensionMismatch& e) {
    return fail(kExitNumerical, "internal", e.what());
  } catch (const Error& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const std::exception& e) {
    return fail(kExitNumerical, "internal", e.what());
  }
}
