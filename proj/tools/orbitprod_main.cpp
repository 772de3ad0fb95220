// orbitprod: GaBP determinant estimates and their orbit-product corrections.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orbitprod/errors.hpp"
#include "orbitprod/exact.hpp"
#include "orbitprod/mmio.hpp"
#include "orbitprod/model.hpp"
#include "orbitprod/orbits.hpp"
#include "orbitprod/report.hpp"
#include "orbitprod/sweep.hpp"

namespace {

using namespace orbitprod;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadInput = 2,
  kNotWalkSummable = 3,
  kNoConvergence = 4,
  kResource = 5,
};

void emit_json(const nlohmann::json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

Schedule parse_schedule(const std::string& s) {
  if (s == "sync" || s == "synchronous") return Schedule::Synchronous;
  if (s == "seq" || s == "sequential") return Schedule::Sequential;
  throw std::invalid_argument("unknown schedule '" + s + "'");
}

struct GenArgs {
  std::string kind;
  int rows = 3, cols = 3;
  double r = 0.2;
  bool periodic = false;
  int n = 20;
  double avg_degree = 3.0;
  double rho = 0.8;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string h_out;
};

int cmd_gen(const GenArgs& a) {
  GraphModel model = a.kind == "grid" ? gen_grid(a.rows, a.cols, a.r, a.periodic)
                                      : gen_random(a.n, a.avg_degree, a.rho, a.seed);
  if (a.out == "-") {
    write_precision(std::cout, model);
  } else {
    write_precision_file(a.out, model);
  }
  if (!a.h_out.empty()) {
    std::mt19937_64 rng(a.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<double> h(model.size());
    for (double& v : h) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    write_vector_file(a.h_out, h);
  }
  const auto normalized = normalize(model);
  const auto ws = spectral_radius_abs(normalized.weights);
  const auto g = girth(model);
  std::cerr << "n=" << model.size() << " edges=" << model.edge_count()
            << " rho_abs=" << ws.rho_abs << " girth=" << (g ? std::to_string(*g) : "acyclic")
            << '\n';
  return kOk;
}

struct CheckArgs {
  std::string model;
  double tol = 1e-10;
  int max_iter = 10000;
};

int cmd_check(const CheckArgs& a) {
  const GraphModel model = read_precision_file(a.model);
  const auto normalized = normalize(model);
  const auto ws = spectral_radius_abs(normalized.weights, a.tol, a.max_iter);
  const auto g = girth(normalized.weights.index);
  nlohmann::json doc = {
      {"n", model.size()},
      {"edges", model.edge_count()},
      {"rho_abs", ws.rho_abs},
      {"iterations", ws.iterations},
      {"residual", ws.residual},
      {"converged", ws.converged},
      {"walk_summable", ws.walk_summable},
      {"girth", g ? nlohmann::json(*g) : nlohmann::json(nullptr)},
      {"logdet_shift", normalized.logdet_shift},
  };
  emit_json(doc, "-");
  return ws.walk_summable ? kOk : kNotWalkSummable;
}

struct EstimateArgs {
  std::string model;
  std::vector<std::string> methods = {"exact", "gabp"};
  std::string schedule = "sync";
  int grid_rows = 0, grid_cols = 0;
  bool periodic = false;
  std::string dump_rprime;
  std::string json_out = "-";
  EstimateOptions options;
};

int cmd_estimate(EstimateArgs a) {
  const GraphModel model = read_precision_file(a.model);
  a.options.methods = a.methods;
  a.options.gabp.schedule = parse_schedule(a.schedule);
  if (a.grid_rows > 0 || a.grid_cols > 0) {
    a.options.grid = GridShape{a.grid_rows, a.grid_cols, a.periodic};
  }
  if (!a.dump_rprime.empty()) a.options.dump_rprime = a.dump_rprime;
  const Report report = run_estimate(model, a.options);
  emit_json(to_json(report), a.json_out);
  return kOk;
}

struct SweepArgs {
  std::string csv_out = "-";
  bool no_periodic = false;
  std::string schedule = "sync";
  SweepOptions options;
};

int cmd_sweep(SweepArgs a) {
  if (a.no_periodic) a.options.periodic = false;
  a.options.gabp.schedule = parse_schedule(a.schedule);
  const auto rows = run_sweep(a.options);
  if (a.csv_out == "-") {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(a.csv_out);
    if (!out) throw ParseError("cannot write '" + a.csv_out + "'");
    write_sweep_csv(out, rows);
  }
  return kOk;
}

struct OrbitArgs {
  std::string model;
  int orbit_max = 8;
  std::size_t budget = kDefaultWalkBudget;
  bool backtrackless_only = false;
};

// One line per orbit: "length class vertex-sequence weight" with 1-based
// vertices joined by '-' and the start vertex repeated at the end.
int cmd_orbits(const OrbitArgs& a) {
  const GraphModel model = read_precision_file(a.model);
  const auto normalized = normalize(model);
  EnumerationLimits limits;
  limits.max_length = a.orbit_max;
  limits.walk_budget = a.budget;
  const auto orbits = a.backtrackless_only
                          ? enumerate_backtrackless_orbits(normalized.weights.index, limits)
                          : enumerate_orbits(normalized.weights.index, limits);
  for (const Orbit& orbit : orbits) {
    std::ostringstream seq;
    const Walk w = orbit.walk();
    for (std::size_t k = 0; k < w.vertices.size(); ++k) {
      if (k) seq << '-';
      seq << w.vertices[k] + 1;
    }
    char weight[32];
    std::snprintf(weight, sizeof weight, "%.17g", orbit_weight(normalized.weights.r, orbit));
    std::cout << orbit.length() << ' ' << to_string(orbit.kind) << ' ' << seq.str() << ' '
              << weight << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GaBP log-determinant estimates with orbit-product corrections"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a model (grid or random)");
  gen_cmd->add_option("kind", gen.kind, "grid | random")
      ->required()
      ->check(CLI::IsMember({"grid", "random"}));
  gen_cmd->add_option("--rows", gen.rows, "grid rows");
  gen_cmd->add_option("--cols", gen.cols, "grid columns");
  gen_cmd->add_option("--r", gen.r, "uniform grid edge weight");
  gen_cmd->add_flag("--periodic", gen.periodic, "wrap-around grid edges");
  gen_cmd->add_option("--n", gen.n, "random model vertex count");
  gen_cmd->add_option("--avg-degree", gen.avg_degree, "random model average degree");
  gen_cmd->add_option("--rho", gen.rho, "random model target rho(|R|)");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen.out, "Matrix Market output for J ('-' = stdout)");
  gen_cmd->add_option("--h-out", gen.h_out, "also write a random potential vector");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "walk-summability and girth report");
  check_cmd->add_option("model", check.model, "Matrix Market file for J")->required();
  check_cmd->add_option("--tol", check.tol, "power-iteration tolerance");
  check_cmd->add_option("--max-iter", check.max_iter, "power-iteration cap");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "run determinant estimators");
  est_cmd->add_option("model", est.model, "Matrix Market file for J")->required();
  est_cmd->add_option("--methods", est.methods, "comma-separated method list")
      ->delimiter(',')
      ->check(CLI::IsMember(kEstimateMethods));
  est_cmd->add_option("--tol", est.options.gabp.tol, "GaBP tolerance on message changes");
  est_cmd->add_option("--max-iter", est.options.gabp.max_iter, "GaBP sweep cap");
  est_cmd->add_option("--schedule", est.schedule, "sync | seq");
  est_cmd->add_option("--power-tol", est.options.power_tol, "power-iteration tolerance");
  est_cmd->add_option("--block-size,-L", est.options.block_size, "block length L");
  est_cmd->add_option("--orbit-max", est.options.orbit_max, "orbit length cutoff L_max");
  est_cmd->add_option("--grid-rows", est.grid_rows, "grid layout rows (blocksum methods)");
  est_cmd->add_option("--grid-cols", est.grid_cols, "grid layout cols (blocksum methods)");
  est_cmd->add_flag("--periodic", est.periodic, "grid layout wraps around");
  est_cmd->add_flag("--force", est.options.force, "run even if not walk-summable");
  est_cmd->add_option("--dump-rprime", est.dump_rprime, "write R' in Matrix Market form");
  est_cmd->add_option("--json", est.json_out, "JSON report path ('-' = stdout)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid experiment over r and L, CSV output");
  sweep_cmd->add_option("--rows", sweep.options.rows, "grid rows");
  sweep_cmd->add_option("--cols", sweep.options.cols, "grid columns");
  sweep_cmd->add_flag("--no-periodic", sweep.no_periodic, "plain (non-wrapping) grid");
  sweep_cmd->add_option("--r-list", sweep.options.r_values, "edge weights")->delimiter(',');
  sweep_cmd->add_option("--L-list", sweep.options.block_sizes, "block lengths")->delimiter(',');
  sweep_cmd->add_option("--methods", sweep.options.methods, "comma-separated method list")
      ->delimiter(',')
      ->check(CLI::IsMember(kSweepMethods));
  sweep_cmd->add_option("--tol", sweep.options.gabp.tol, "GaBP tolerance");
  sweep_cmd->add_option("--max-iter", sweep.options.gabp.max_iter, "GaBP sweep cap");
  sweep_cmd->add_option("--schedule", sweep.schedule, "sync | seq");
  sweep_cmd->add_option("--workers", sweep.options.workers, "worker threads (0 = auto)");
  sweep_cmd->add_option("--csv", sweep.csv_out, "CSV output path ('-' = stdout)");

  OrbitArgs orb;
  auto* orb_cmd = app.add_subcommand("orbits", "dump enumerated orbits");
  orb_cmd->add_option("model", orb.model, "Matrix Market file for J")->required();
  orb_cmd->add_option("--orbit-max", orb.orbit_max, "orbit length cutoff");
  orb_cmd->add_option("--budget", orb.budget, "closed-walk budget");
  orb_cmd->add_flag("--backtrackless", orb.backtrackless_only, "only backtrackless orbits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*check_cmd) return cmd_check(check);
    if (*est_cmd) return cmd_estimate(est);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*orb_cmd) return cmd_orbits(orb);
  } catch (const NotWalkSummable& e) {
    std::cerr << "not walk-summable: " << e.what() << '\n';
    return kNotWalkSummable;
  } catch (const ConvergenceFailure& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const InvalidModel& e) {
    std::cerr << "invalid model: " << e.what() << '\n';
    return kBadInput;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
