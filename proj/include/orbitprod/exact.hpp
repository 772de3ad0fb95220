#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orbitprod/model.hpp"

namespace orbitprod {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

/// Largest dimension the dense oracles accept by default.
inline constexpr Eigen::Index kDenseBudget = 4000;

struct LogDet {
  double log_abs = 0.0;
  int sign = 1;
};

/// log|det M| and sign via LU with partial pivoting.
/// Throws SingularMatrix when a pivot is exactly zero.
LogDet dense_logdet(const DenseMatrix& m);

/// Solves J mu = h. Throws SingularMatrix on exact singularity.
DenseVector dense_solve(const DenseMatrix& j, const DenseVector& h);

/// Entries (i, j) of K = J^{-1}; J must be positive definite.
std::vector<double> covariance_entries(const DenseMatrix& j,
                                       std::span<const std::pair<int, int>> targets);

/// log of the Gaussian normalizer: (n/2) log 2pi - (1/2) log det J + (1/2) h' J^{-1} h.
double log_partition(const DenseMatrix& j, const DenseVector& h);

DenseMatrix dense_precision(const GraphModel& model);
DenseMatrix dense_identity_minus(const SparseMatrix& a);

/// log Z(A) = -log det(I - A). Throws NumericalFailure if det(I - A) <= 0
/// and ResourceLimit if A exceeds `budget`.
double log_z_dense(const SparseMatrix& a, Eigen::Index budget = kDenseBudget);

/// log Z of a normalized model: -log det(I - R).
double log_z_exact(const EdgeWeights& weights, Eigen::Index budget = kDenseBudget);

}  // namespace orbitprod
