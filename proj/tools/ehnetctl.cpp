// ehnetctl: validate configs, run simulations and sweeps, tune (V, Gamma).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "ehnet/analysis.hpp"
#include "ehnet/config.hpp"
#include "ehnet/errors.hpp"
#include "ehnet/io.hpp"
#include "ehnet/kernels.hpp"

namespace fs = std::filesystem;
using namespace ehnet;

namespace {

enum Exit { kOk = 0, kOther = 1, kValidation = 2, kInvariant = 3, kSolver = 4 };

int thread_cap() {
  if (const char* s = std::getenv("EHNETCTL_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 0;
}

struct Overrides {
  std::optional<double> eta, xi;

  void add(CLI::App* app) {
    app->add_option("--eta", eta, "Override storage efficiency");
    app->add_option("--xi", xi, "Override (dis-)charging efficiency");
  }
  void apply(Config& cfg) const {
    if (eta) cfg.scenario.system.eta = *eta;
    if (xi) cfg.scenario.system.xi = *xi;
  }
};

Config load(const std::string& path, const Overrides& o) {
  Config cfg = load_config(path);
  o.apply(cfg);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  const ValidationReport r = validate_system(cfg.scenario.system);
  if (!r.ok()) throw ValidationError("configuration fails validation:\n" + r.to_string());
  return cfg;
}

void print_window(const SystemParams& sys, double V) {
  const ParamWindow w(sys);
  std::cout << "V_max = " << w.v_max() << "\n"
            << "at V = " << V << ": Gamma_min = " << w.gamma_min(V)
            << ", Gamma_max = " << w.gamma_max(V) << "\n";
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

int cmd_validate(const std::string& path) {
  Config cfg = load_config(path);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  const SystemParams& s = cfg.scenario.system;
  const ValidationReport r = validate_system(s);
  std::cout << r.to_string();
  std::cout << "delta1 = " << s.delta1 << ", delta2 = " << s.delta2 << ", g_max = " << s.g_max
            << "\n";
  print_window(s, cfg.defaults.V);
  std::cout << (r.ok() ? "ok\n" : "FAILED\n");
  return r.ok() ? kOk : kValidation;
}

struct RunArgs {
  std::string config;
  std::string algorithm;
  std::optional<double> V, gamma;
  std::optional<std::int64_t> horizon;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  Overrides over;
};

EnsembleSpec make_spec(const Config& cfg, const RunArgs& a) {
  EnsembleSpec spec;
  spec.algorithm = a.algorithm.empty() ? cfg.defaults.algorithm : parse_algorithm(a.algorithm);
  spec.V = a.V.value_or(cfg.defaults.V);
  spec.gamma = a.gamma ? a.gamma : cfg.defaults.gamma;
  spec.harvest = cfg.environment.harvest;
  spec.horizon = a.horizon.value_or(cfg.defaults.horizon);
  spec.runs = a.runs.value_or(cfg.defaults.runs);
  spec.base_seed = a.seed.value_or(cfg.environment.seed);
  spec.threads = thread_cap();
  return spec;
}

int cmd_simulate(const RunArgs& a, bool traces) {
  Config cfg = load(a.config, a.over);
  const EnsembleSpec spec = make_spec(cfg, a);
  if (spec.algorithm == Algorithm::proposed) {
    try {
      AlgorithmParams::make(cfg.scenario.system, cfg.scenario.network.d_max(), spec.V, spec.gamma);
    } catch (const ValidationError& e) {
      std::cerr << "rejected: " << e.what() << '\n';
      print_window(cfg.scenario.system, spec.V);
      return kValidation;
    }
  }
  fs::create_directories(a.out_dir);
  std::vector<RunTrace> all;
  const EnsembleSummary s = run_ensemble(cfg.scenario, spec, traces ? &all : nullptr);
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::ostringstream os;
    io::write_trace_csv(os, cfg.scenario, all[i]);
    write_file(fs::path(a.out_dir) / ("trace_run" + std::to_string(i) + ".csv"), os.str());
  }
  write_file(fs::path(a.out_dir) / "summary.json", io::to_json(s).dump(2) + "\n");
  std::cout << s.algorithm << ": utility " << s.utility.mean << " +- " << s.utility.std
            << ", energy utilization " << s.energy_utilization.mean << " (" << s.runs << " runs x "
            << s.horizon << " slots) -> " << a.out_dir << "\n";
  return kOk;
}

int cmd_sweep(const RunArgs& a, const std::string& param_name, const std::vector<double>& values,
              std::vector<std::string> algorithms, bool svg) {
  Config cfg = load(a.config, a.over);
  const SweepParam param = parse_sweep_param(param_name);
  if (algorithms.empty()) {
    algorithms = param == SweepParam::e_max ? std::vector<std::string>{"proposed", "esa", "greedy"}
                                            : std::vector<std::string>{"proposed"};
  }
  std::vector<Algorithm> algs;
  for (const auto& n : algorithms) algs.push_back(parse_algorithm(n));
  EnsembleSpec spec = make_spec(cfg, a);
  if (param == SweepParam::V) spec.gamma.reset();

  const auto points = sweep(cfg.scenario, param, values, algs, spec);
  fs::create_directories(a.out_dir);
  for (const auto& p : points) {
    if (!p.ok) {
      std::cerr << "skipped " << param_name << " = " << p.value << " (" << p.algorithm
                << "): " << p.message << '\n';
      continue;
    }
    write_file(fs::path(a.out_dir) /
                   ("summary_" + param_name + "_" + io::number(p.value) + "_" + p.algorithm + ".json"),
               io::to_json(p.summary).dump(2) + "\n");
    std::cout << std::setw(10) << p.value << "  " << std::setw(8) << p.algorithm << "  utility "
              << p.summary.utility.mean << " +- " << p.summary.utility.std << "  energy util "
              << p.summary.energy_utilization.mean << '\n';
  }
  write_file(fs::path(a.out_dir) / "sweep.csv", sweep_csv(points));
  if (svg) {
    write_file(fs::path(a.out_dir) / "sweep.svg",
               io::svg_chart("utility vs " + param_name, param_name, "utility",
                             io::utility_series(points)));
  }
  return kOk;
}

int cmd_tune_gap(const std::string& path, std::optional<double> V_cap, const Overrides& over) {
  Config cfg = load(path, over);
  const SystemParams& s = cfg.scenario.system;
  const ParamWindow w(s);
  const double cap = V_cap.value_or(w.v_max());
  const int N = cfg.scenario.network.node_count();
  const int d = cfg.scenario.network.d_max();
  const GapOptimum opt = minimize_gap(s, N, d, cap);
  const GapOptimum grid = grid_minimize_gap(s, N, d, cap);
  const GapBound b = gap_bound(s, N, d, opt.V, opt.gamma);
  std::cout << std::setprecision(10) << "V* = " << opt.V << "\nGamma* = " << opt.gamma
            << "\nG_min = " << opt.value << "\nB1 = " << b.B1 << ", B2 = " << b.B2
            << ", B3 = " << b.B3 << ", B = " << b.B << "\ngrid 400x400: G = " << grid.value
            << " at (" << grid.V << ", " << grid.gamma << "), solver - grid = "
            << opt.value - grid.value << " (" << (opt.value - grid.value) / grid.value
            << " relative)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-harvesting multi-hop network simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("ehnetctl 0.1 (kernels: ") +
                                        std::string(kernels::isa_name(kernels::active_isa())) + ")");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print the (V, Gamma) window");
  validate->add_option("config", validate_path)->required();

  RunArgs sim;
  bool no_trace = false;
  auto* simulate = app.add_subcommand("simulate", "Run an ensemble and write traces + summary.json");
  simulate->add_option("config", sim.config)->required();
  simulate->add_option("--algorithm", sim.algorithm, "proposed | esa | greedy");
  simulate->add_option("--V", sim.V);
  simulate->add_option("--gamma", sim.gamma);
  simulate->add_option("--horizon", sim.horizon);
  simulate->add_option("--runs", sim.runs);
  simulate->add_option("--seed", sim.seed, "Base seed; run i uses seed + i");
  simulate->add_option("--out-dir", sim.out_dir);
  simulate->add_flag("--no-trace", no_trace, "Only write summary.json");
  sim.over.add(simulate);

  RunArgs sw;
  std::string param;
  std::vector<double> values;
  std::vector<std::string> algorithms;
  bool svg = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Ensembles over gamma, V or e_max");
  sweep_cmd->add_option("config", sw.config)->required();
  sweep_cmd->add_option("--param", param)->required()->check(CLI::IsMember({"gamma", "V", "e_max"}));
  sweep_cmd->add_option("--values", values)->required();
  sweep_cmd->add_option("--algorithms", algorithms, "Default: proposed (all three for e_max)");
  sweep_cmd->add_option("--V", sw.V);
  sweep_cmd->add_option("--gamma", sw.gamma);
  sweep_cmd->add_option("--horizon", sw.horizon);
  sweep_cmd->add_option("--runs", sw.runs);
  sweep_cmd->add_option("--seed", sw.seed);
  sweep_cmd->add_option("--out-dir", sw.out_dir);
  sweep_cmd->add_flag("--svg", svg, "Also write sweep.svg");
  sw.over.add(sweep_cmd);

  std::string tune_path;
  std::optional<double> V_cap;
  Overrides tune_over;
  auto* tune = app.add_subcommand("tune-gap", "Minimize the optimality gap B/V over (V, Gamma)");
  tune->add_option("config", tune_path)->required();
  tune->add_option("--V-cap", V_cap, "Default: V_max");
  tune_over.add(tune);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(validate_path);
    if (*simulate) return cmd_simulate(sim, !no_trace);
    if (*sweep_cmd) return cmd_sweep(sw, param, values, algorithms, svg);
    if (*tune) return cmd_tune_gap(tune_path, V_cap, tune_over);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kInvariant;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
