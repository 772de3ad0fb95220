#include "orbitprod/spectral.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace orbitprod {

namespace {

// Kahn's algorithm on the pattern of strictly positive entries.
bool has_acyclic_pattern(const SparseMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<int> indegree(n, 0);
  for (Eigen::Index row = 0; row < n; ++row) {
    for (SparseMatrix::InnerIterator it(a, row); it; ++it) {
      if (it.value() > 0.0) ++indegree[it.col()];
    }
  }
  std::queue<Eigen::Index> ready;
  for (Eigen::Index v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  Eigen::Index removed = 0;
  while (!ready.empty()) {
    const Eigen::Index v = ready.front();
    ready.pop();
    ++removed;
    for (SparseMatrix::InnerIterator it(a, v); it; ++it) {
      if (it.value() > 0.0 && --indegree[it.col()] == 0) ready.push(it.col());
    }
  }
  return removed == n;
}

}  // namespace

PerronEstimate perron_radius(const SparseMatrix& nonneg, double tol,
                             int max_iter) {
  if (nonneg.rows() != nonneg.cols()) {
    throw std::invalid_argument("perron_radius: matrix must be square");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("perron_radius: tol must be > 0");

  PerronEstimate est;
  const Eigen::Index n = nonneg.rows();
  if (n == 0 || has_acyclic_pattern(nonneg)) {
    est.converged = true;
    return est;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd ax(n);
  for (int iter = 1; iter <= max_iter; ++iter) {
    ax.noalias() = nonneg * x;
    const double lambda = x.dot(ax);
    est.radius = lambda;
    est.iterations = iter;
    est.residual = (ax - lambda * x).norm();
    if (est.residual <= tol) {
      est.converged = true;
      break;
    }
    x += ax;
    x /= x.norm();
  }
  return est;
}

}  // namespace orbitprod
