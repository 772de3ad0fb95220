#include "orbitprod/correction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "orbitprod/errors.hpp"

#include "compensated_sum.hpp"

namespace orbitprod {

ModifiedWeights modified_weights(const EdgeWeights& weights, const GaBPState& state) {
  const auto excl = alpha_excluding(weights, state);
  ModifiedWeights mw;
  mw.r_prime.resize(weights.arc_count());
  for (int a = 0; a < weights.arc_count(); ++a) {
    const double denom = 1.0 - excl[a];
    if (!(denom > 0.0)) {
      throw NotWalkSummable("1 - alpha_{i\\j} <= 0 on arc " + std::to_string(a));
    }
    mw.r_prime[a] = weights.r[a] / denom;
  }
  return mw;
}

BacktracklessMatrix::BacktracklessMatrix(const ModifiedWeights& mw, const ArcIndex& index)
    : matrix_(index.arc_count(), index.arc_count()) {
  if (static_cast<int>(mw.r_prime.size()) != index.arc_count()) {
    throw std::invalid_argument("modified weights do not match the arc index");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int a = 0; a < index.arc_count(); ++a) {
    const Arc& arc = index.arc(a);
    for (int b = index.out_begin(arc.to); b < index.out_end(arc.to); ++b) {
      if (index.arc(b).to != arc.from) triplets.emplace_back(a, b, mw.r_prime[b]);
    }
  }
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

BacktracklessMatrix build_backtrackless(const ModifiedWeights& mw, const ArcIndex& index) {
  return BacktracklessMatrix(mw, index);
}

double log_zprime_exact(const BacktracklessMatrix& rp, Eigen::Index budget) {
  return log_z_dense(rp.matrix(), budget);
}

double log_zprime_gamma(const Orbit& gamma, const ModifiedWeights& mw) {
  if (gamma.kind != OrbitClass::Backtrackless) {
    throw std::invalid_argument("log_zprime_gamma requires a backtrackless orbit");
  }
  const double w = orbit_weight(mw.r_prime, gamma);
  if (!(std::abs(w) < 1.0)) {
    throw DomainError("modified orbit weight " + std::to_string(w) + " has modulus >= 1");
  }
  return -std::log1p(-w);
}

double truncated_correction(const EdgeWeights& weights, const GaBPState& state,
                            const EnumerationLimits& limits) {
  const ModifiedWeights mw = modified_weights(weights, state);
  CompensatedSum sum;
  for (const Orbit& gamma : enumerate_backtrackless_orbits(weights.index, limits)) {
    sum.add(log_zprime_gamma(gamma, mw));
  }
  return sum.value();
}

PerronEstimate rho_prime(const BacktracklessMatrix& rp, double tol, int max_iter) {
  SparseMatrix abs = rp.matrix().cwiseAbs();
  return perron_radius(abs, tol, max_iter);
}

}  // namespace orbitprod
