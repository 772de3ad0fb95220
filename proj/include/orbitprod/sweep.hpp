#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orbitprod/gabp.hpp"

namespace orbitprod {

inline const std::vector<std::string> kSweepMethods = {
    "exact", "gabp", "blocksum-R", "gabp+blocksum-Rprime"};

struct SweepOptions {
  int rows = 32;
  int cols = 32;
  bool periodic = true;
  std::vector<double> r_values = {0.05, 0.10, 0.15, 0.20, 0.23};
  std::vector<int> block_sizes = {2, 4, 8};
  std::vector<std::string> methods = kSweepMethods;
  GaBPOptions gabp;
  double power_tol = 1e-10;
  int power_max_iter = 10000;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// One CSV row. Methods that do not depend on the block size use L = 0.
/// Per-node quantities divide by the vertex count; failed cells carry NaN
/// values and an "error: ..." status.
struct SweepRow {
  double r = 0.0;
  int L = 0;
  std::string method;
  double log_z_per_node = 0.0;
  double error_per_node = 0.0;
  double bound_per_node = 0.0;
  double rho_r = 0.0;
  double rho_rprime = 0.0;
  std::string status = "ok";
};

/// Grid experiment: for every r builds the uniform grid model and evaluates
/// the requested methods for every block size. Rows are sorted by
/// (r, L, method).
std::vector<SweepRow> run_sweep(const SweepOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace orbitprod
