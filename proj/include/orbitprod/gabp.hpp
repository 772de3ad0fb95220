#pragma once

#include <optional>
#include <span>
#include <vector>

#include "orbitprod/model.hpp"

namespace orbitprod {

enum class Schedule {
  Synchronous,  // flooding: every message reads the previous sweep
  Sequential,   // round-robin in arc-id order, in place
};

struct GaBPOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  Schedule schedule = Schedule::Synchronous;
};

/// Message parameters of the unit-diagonal model, one per arc (ij):
///   alpha_ij = r_ij^2 / (1 - alpha_{i\j})
///   beta_ij  = r_ij (h_i + beta_{i\j}) / (1 - alpha_{i\j})
/// where alpha_{i\j} sums the messages into i from neighbours other than j.
struct GaBPState {
  std::vector<double> alpha;
  std::vector<double> beta;
  int iterations = 0;
  double max_residual = 0.0;
  bool converged = false;
};

/// Iterates from alpha = beta = 0 until the largest message change is <= tol.
/// Non-convergence is reported through `converged`; a non-positive
/// 1 - alpha_{i\j} throws NotWalkSummable.
GaBPState run_gabp(const EdgeWeights& weights,
                   std::optional<std::span<const double>> h = std::nullopt,
                   const GaBPOptions& options = {});

/// sum_{k in N(i), k != j} alpha_ki for every arc (ij).
std::vector<double> alpha_excluding(const EdgeWeights& weights, const GaBPState& state);

/// Largest violation of the fixed-point equations at `state`.
double fixed_point_residual(const EdgeWeights& weights, const GaBPState& state,
                            std::optional<std::span<const double>> h = std::nullopt);

struct GaBPResult {
  std::vector<double> variance;     // K_i^bp
  std::vector<double> mean;         // mu_i^bp
  std::vector<double> edge_log_z;   // log Z_ij^bp, per arc with from < to, in arc order
  double log_zbp = 0.0;
};

/// Variances and means of the unit-diagonal model. `mean` is left empty
/// when h is absent.
GaBPResult variances_means(const GaBPState& state, const EdgeWeights& weights,
                           std::optional<std::span<const double>> h = std::nullopt);

/// log Z^bp = sum_i log Z_i + sum_{ij} (log Z_ij - log Z_i - log Z_j).
double log_zbp(const GaBPState& state, const EdgeWeights& weights);

/// variances_means plus the per-edge terms and log Z^bp.
GaBPResult summarize(const GaBPState& state, const EdgeWeights& weights,
                     std::optional<std::span<const double>> h = std::nullopt);

/// rho^g / (g (1 - rho)): bound on (1/n)|log(Z^bp / Z)|; 0 for forests.
double gabp_error_bound(double rho, std::optional<int> girth);

}  // namespace orbitprod
