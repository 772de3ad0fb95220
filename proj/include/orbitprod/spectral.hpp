#pragma once

#include <Eigen/SparseCore>

namespace orbitprod {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct PerronEstimate {
  double radius = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Spectral radius of a square matrix with nonnegative entries.
///
/// Power iteration on I + A from the all-ones vector; the unit shift keeps
/// the Perron root strictly dominant for periodic (e.g. bipartite) patterns.
/// Matrices whose nonzero pattern is acyclic are nilpotent and return 0
/// without iterating. The estimate is the Rayleigh quotient and the residual
/// is ||A x - radius x||_2 / ||x||_2.
PerronEstimate perron_radius(const SparseMatrix& nonneg, double tol,
                             int max_iter);

}  // namespace orbitprod
