#include "orbitprod/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "orbitprod/blocksum.hpp"
#include "orbitprod/correction.hpp"
#include "orbitprod/exact.hpp"
#include "orbitprod/mmio.hpp"
#include "orbitprod/orbits.hpp"

namespace orbitprod {

namespace {

bool wants(const EstimateOptions& options, const std::string& method) {
  return std::find(options.methods.begin(), options.methods.end(), method) !=
         options.methods.end();
}

std::optional<double> finite_or_none(double v) {
  if (std::isfinite(v)) return v;
  return std::nullopt;
}

std::string arc_ordering_comment(const ArcIndex& index) {
  std::ostringstream out;
  out << "Backtrackless operator R' on directed edges (i,j), 1-based vertex ids.\n";
  out << "Row/column k is the k-th directed edge in lexicographic (i,j) order.\n";
  out << "Entry ((i,j),(j,k)) = r'_jk = r_jk / (1 - alpha_{j\\k}) for k != i.\n";
  for (int a = 0; a < index.arc_count(); ++a) {
    out << "edge " << a + 1 << ": " << index.arc(a).from + 1 << ' '
        << index.arc(a).to + 1 << '\n';
  }
  return out.str();
}

}  // namespace

Report run_estimate(const GraphModel& model, const EstimateOptions& options) {
  for (const auto& m : options.methods) {
    if (std::find(kEstimateMethods.begin(), kEstimateMethods.end(), m) ==
        kEstimateMethods.end()) {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
  }
  const bool block_methods = wants(options, "blocksum-R") ||
                             wants(options, "gabp+blocksum-Rprime");
  if (block_methods) {
    if (!options.grid) {
      throw std::invalid_argument("blocksum methods need the grid layout (--grid-rows/--grid-cols)");
    }
    if (options.grid->rows * options.grid->cols != model.size()) {
      throw std::invalid_argument("grid layout does not match the model size");
    }
  }

  const NormalizedModel normalized = normalize(model);
  const EdgeWeights& weights = normalized.weights;
  const auto ws = spectral_radius_abs(weights, options.power_tol, options.power_max_iter);

  Report report;
  report.n = model.size();
  report.edges = model.edge_count();
  report.rho_abs = ws.rho_abs;
  report.walk_summable = ws.walk_summable;
  report.girth = girth(weights.index);
  report.logdet_shift = normalized.logdet_shift;
  if (!options.force) require_walk_summable(ws);

  const double n = model.size();
  const double arcs = weights.arc_count();
  const double rho = ws.rho_abs;
  auto bound_or_none = [](double rho_value, const std::function<double()>& f) {
    return rho_value < 1.0 ? finite_or_none(f()) : std::nullopt;
  };

  std::optional<double> exact;
  std::optional<GaBPState> state;
  std::optional<double> zbp;
  std::optional<BacktracklessMatrix> rp;
  std::optional<double> rho_p;

  auto ensure_gabp = [&]() {
    if (state) return;
    state = run_gabp(weights, std::nullopt, options.gabp);
    report.gabp_iterations = state->iterations;
    if (!state->converged) {
      throw ConvergenceFailure("GaBP did not converge in " +
                               std::to_string(state->iterations) +
                               " iterations (max message change " +
                               std::to_string(state->max_residual) + ")");
    }
    zbp = log_zbp(*state, weights);
    rp.emplace(build_backtrackless(modified_weights(weights, *state), weights.index));
    const auto est = rho_prime(*rp, options.power_tol, options.power_max_iter);
    rho_p = est.radius;
    report.rho_prime = est.radius;
    if (options.dump_rprime) {
      std::ofstream out(*options.dump_rprime);
      if (!out) throw ParseError("cannot write '" + *options.dump_rprime + "'");
      write_general(out, rp->matrix(), arc_ordering_comment(weights.index));
    }
  };

  auto timed = [&](const std::string& name, const std::function<void(MethodResult&)>& body) {
    MethodResult result;
    result.method = name;
    const auto start = std::chrono::steady_clock::now();
    body(result);
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.logdet_j = report.logdet_shift - result.log_z;
    report.methods.push_back(std::move(result));
  };

  if (wants(options, "exact")) {
    timed("exact", [&](MethodResult& r) {
      r.log_z = log_z_exact(weights);
      r.bound = 0.0;
      exact = r.log_z;
    });
  }
  if (options.dump_rprime) ensure_gabp();
  if (wants(options, "gabp")) {
    timed("gabp", [&](MethodResult& r) {
      ensure_gabp();
      r.log_z = *zbp;
      r.bound = bound_or_none(rho, [&] { return n * gabp_error_bound(rho, report.girth); });
      r.parameters = {{"tol", options.gabp.tol}};
    });
  }
  if (wants(options, "gabp+btl-trunc")) {
    timed("gabp+btl-trunc", [&](MethodResult& r) {
      ensure_gabp();
      EnumerationLimits limits;
      limits.max_length = options.orbit_max;
      r.log_z = *zbp + truncated_correction(weights, *state, limits);
      r.bound = bound_or_none(*rho_p, [&] {
        return orbit_tail_bound(*rho_p, options.orbit_max, arcs);
      });
      r.parameters = {{"tol", options.gabp.tol}, {"L_max", options.orbit_max}};
    });
  }
  if (wants(options, "gabp+blocksum-Rprime")) {
    timed("gabp+blocksum-Rprime", [&](MethodResult& r) {
      ensure_gabp();
      const auto nodes = grid_block_family(options.grid->rows, options.grid->cols,
                                           options.block_size, options.grid->periodic);
      const auto family = induced_edge_family(nodes, weights.index);
      r.log_z = *zbp + log_z_blocks(rp->matrix(), family);
      r.bound = bound_or_none(*rho_p, [&] {
        return arcs * blocksum_error_bound(*rho_p, options.block_size);
      });
      r.parameters = {{"tol", options.gabp.tol}, {"L", options.block_size}};
    });
  }
  if (wants(options, "blocksum-R")) {
    timed("blocksum-R", [&](MethodResult& r) {
      const auto family = grid_block_family(options.grid->rows, options.grid->cols,
                                            options.block_size, options.grid->periodic);
      r.log_z = log_z_blocks(weights.matrix(), family);
      r.bound = bound_or_none(rho, [&] {
        return n * blocksum_error_bound(rho, options.block_size);
      });
      r.parameters = {{"L", options.block_size}};
    });
  }
  if (wants(options, "orbit-trunc")) {
    timed("orbit-trunc", [&](MethodResult& r) {
      EnumerationLimits limits;
      limits.max_length = options.orbit_max;
      r.log_z = truncated_orbit_logsum(weights, limits);
      r.bound = bound_or_none(rho, [&] { return orbit_tail_bound(rho, options.orbit_max, n); });
      r.parameters = {{"L_max", options.orbit_max}};
    });
  }
  if (exact) {
    for (auto& m : report.methods) m.error_vs_exact = std::abs(m.log_z - *exact);
  }
  return report;
}

nlohmann::json to_json(const Report& report) {
  using nlohmann::json;
  auto optional_value = [](const auto& v) -> json {
    if (v) return *v;
    return nullptr;
  };
  json model = {
      {"n", report.n},
      {"edges", report.edges},
      {"rho_abs", report.rho_abs},
      {"walk_summable", report.walk_summable},
      {"girth", optional_value(report.girth)},
      {"logdet_shift", report.logdet_shift},
      {"rho_prime", optional_value(report.rho_prime)},
      {"gabp_iterations", optional_value(report.gabp_iterations)},
  };
  json methods = json::array();
  for (const auto& m : report.methods) {
    methods.push_back({
        {"method", m.method},
        {"log_z", m.log_z},
        {"logdet_J", m.logdet_j},
        {"error_vs_exact", optional_value(m.error_vs_exact)},
        {"bound", optional_value(m.bound)},
        {"wall_time_seconds", m.wall_time_seconds},
        {"parameters", m.parameters},
    });
  }
  return {{"model", model}, {"methods", methods}};
}

}  // namespace orbitprod
