#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbitprod/errors.hpp"
#include "orbitprod/gabp.hpp"
#include "orbitprod/model.hpp"

namespace orbitprod {

/// GaBP did not reach the requested tolerance.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

inline const std::vector<std::string> kEstimateMethods = {
    "exact", "gabp", "gabp+btl-trunc", "gabp+blocksum-Rprime", "blocksum-R", "orbit-trunc"};

struct GridShape {
  int rows = 0;
  int cols = 0;
  bool periodic = false;
};

struct EstimateOptions {
  std::vector<std::string> methods = {"exact", "gabp"};
  GaBPOptions gabp;
  double power_tol = 1e-10;
  int power_max_iter = 10000;
  int block_size = 4;
  int orbit_max = 12;
  std::optional<GridShape> grid;  // vertex layout for blocksum methods
  bool force = false;
  std::optional<std::string> dump_rprime;
};

struct MethodResult {
  std::string method;
  double log_z = 0.0;     // normalized model, -log det(I - R) estimate
  double logdet_j = 0.0;  // logdet_shift - log_z
  std::optional<double> error_vs_exact;
  std::optional<double> bound;  // bound on |log_z - log Z|, same units
  double wall_time_seconds = 0.0;
  nlohmann::json parameters = nlohmann::json::object();
};

struct Report {
  int n = 0;
  std::size_t edges = 0;
  double rho_abs = 0.0;
  bool walk_summable = false;
  std::optional<int> girth;
  double logdet_shift = 0.0;
  std::optional<double> rho_prime;
  std::optional<int> gabp_iterations;
  std::vector<MethodResult> methods;
};

/// Runs the requested estimators. Refuses non-walk-summable models unless
/// options.force is set.
Report run_estimate(const GraphModel& model, const EstimateOptions& options);

nlohmann::json to_json(const Report& report);

}  // namespace orbitprod
