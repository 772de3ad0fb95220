#include "orbitprod/exact.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "orbitprod/errors.hpp"

namespace orbitprod {

namespace {

void require_square(const DenseMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

Eigen::PartialPivLU<DenseMatrix> factor(const DenseMatrix& m) {
  Eigen::PartialPivLU<DenseMatrix> lu(m);
  const auto& packed = lu.matrixLU();
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    if (packed(k, k) == 0.0) throw SingularMatrix("matrix is singular");
  }
  return lu;
}

Eigen::LLT<DenseMatrix> cholesky(const DenseMatrix& j) {
  Eigen::LLT<DenseMatrix> llt(j);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("matrix is not positive definite");
  }
  return llt;
}

}  // namespace

LogDet dense_logdet(const DenseMatrix& m) {
  require_square(m, "dense_logdet");
  LogDet out;
  if (m.rows() == 0) return out;
  const auto lu = factor(m);
  const auto& packed = lu.matrixLU();
  out.sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    const double pivot = packed(k, k);
    if (pivot < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(pivot));
  }
  return out;
}

DenseVector dense_solve(const DenseMatrix& j, const DenseVector& h) {
  require_square(j, "dense_solve");
  if (j.rows() != h.size()) throw std::invalid_argument("dense_solve: size mismatch");
  if (j.rows() == 0) return DenseVector();
  return factor(j).solve(h);
}

std::vector<double> covariance_entries(const DenseMatrix& j,
                                       std::span<const std::pair<int, int>> targets) {
  require_square(j, "covariance_entries");
  const auto llt = cholesky(j);
  const DenseMatrix k = llt.solve(DenseMatrix::Identity(j.rows(), j.cols()));
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& [a, b] : targets) out.push_back(k(a, b));
  return out;
}

double log_partition(const DenseMatrix& j, const DenseVector& h) {
  require_square(j, "log_partition");
  const auto llt = cholesky(j);
  const DenseMatrix& l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) logdet += 2.0 * std::log(l(k, k));
  const DenseVector mu = llt.solve(h);
  const double n = static_cast<double>(j.rows());
  return 0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * logdet + 0.5 * h.dot(mu);
}

DenseMatrix dense_precision(const GraphModel& model) {
  const int n = model.size();
  DenseMatrix j = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = model.diag()[i];
  for (const auto& e : model.edges()) {
    j(e.i, e.j) = e.value;
    j(e.j, e.i) = e.value;
  }
  return j;
}

DenseMatrix dense_identity_minus(const SparseMatrix& a) {
  DenseMatrix m = -DenseMatrix(a);
  m.diagonal().array() += 1.0;
  return m;
}

double log_z_dense(const SparseMatrix& a, Eigen::Index budget) {
  if (a.rows() > budget) {
    throw ResourceLimit("dense determinant of dimension " + std::to_string(a.rows()) +
                        " exceeds budget " + std::to_string(budget));
  }
  const LogDet ld = dense_logdet(dense_identity_minus(a));
  if (ld.sign <= 0) throw NumericalFailure("det(I - A) is not positive");
  return -ld.log_abs;
}

double log_z_exact(const EdgeWeights& weights, Eigen::Index budget) {
  return log_z_dense(weights.matrix(), budget);
}

}  // namespace orbitprod
