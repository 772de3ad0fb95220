#pragma once

#include <vector>

#include "orbitprod/exact.hpp"
#include "orbitprod/gabp.hpp"
#include "orbitprod/model.hpp"
#include "orbitprod/orbits.hpp"
#include "orbitprod/spectral.hpp"

namespace orbitprod {

/// r'_ij = r_ij / (1 - alpha_{i\j}), one per arc.
struct ModifiedWeights {
  std::vector<double> r_prime;
};

ModifiedWeights modified_weights(const EdgeWeights& weights, const GaBPState& state);

/// Non-backtracking operator on arcs: entry ((ij),(jk)) = r'_jk for k != i.
/// Rows and columns use the shared arc ids.
class BacktracklessMatrix {
 public:
  BacktracklessMatrix(const ModifiedWeights& mw, const ArcIndex& index);

  Eigen::Index dimension() const { return matrix_.rows(); }
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  SparseMatrix matrix_;
};

BacktracklessMatrix build_backtrackless(const ModifiedWeights& mw, const ArcIndex& index);

/// log Z' = -log det(I - R') by dense LU.
double log_zprime_exact(const BacktracklessMatrix& rp, Eigen::Index budget = kDenseBudget);

/// log Z'_gamma = -log(1 - prod r'^{n(gamma)}) for a backtrackless orbit.
/// Throws std::invalid_argument for any other orbit class.
double log_zprime_gamma(const Orbit& gamma, const ModifiedWeights& mw);

/// Sum of log Z'_gamma over backtrackless orbits of length <= max_length.
double truncated_correction(const EdgeWeights& weights, const GaBPState& state,
                            const EnumerationLimits& limits = {});

/// Power-iteration estimate of rho(|R'|).
PerronEstimate rho_prime(const BacktracklessMatrix& rp, double tol = 1e-10,
                         int max_iter = 10000);

}  // namespace orbitprod
