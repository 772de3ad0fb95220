#include "orbitprod/gabp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orbitprod/errors.hpp"

namespace orbitprod {

namespace {

double checked_denominator(double alpha_excl, const Arc& arc) {
  const double denom = 1.0 - alpha_excl;
  if (!(denom > 0.0)) {
    throw NotWalkSummable("1 - alpha_{i\\j} <= 0 on arc (" + std::to_string(arc.from) +
                          "," + std::to_string(arc.to) + ")");
  }
  return denom;
}

double potential_at(const std::optional<std::span<const double>>& h, int i) {
  return h ? (*h)[i] : 0.0;
}

}  // namespace

GaBPState run_gabp(const EdgeWeights& weights,
                   std::optional<std::span<const double>> h,
                   const GaBPOptions& options) {
  const ArcIndex& index = weights.index;
  const int arcs = index.arc_count();
  if (h && static_cast<int>(h->size()) != weights.vertex_count()) {
    throw std::invalid_argument("run_gabp: potential size mismatch");
  }
  GaBPState state;
  state.alpha.assign(arcs, 0.0);
  state.beta.assign(arcs, 0.0);
  if (arcs == 0) {
    state.converged = true;
    return state;
  }

  // Sums over "all incoming but one" come from prefix and suffix sums, so each
  // outgoing message depends only on the other incoming messages.
  std::vector<double> next_alpha(arcs), next_beta(arcs);
  std::vector<double> pre_a, pre_b, suf_a, suf_b;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    double change = 0.0;
    for (int i = 0; i < weights.vertex_count(); ++i) {
      const int first = index.out_begin(i);
      const int deg = index.degree(i);
      pre_a.assign(deg + 1, 0.0);
      pre_b.assign(deg + 1, 0.0);
      suf_a.assign(deg + 1, 0.0);
      suf_b.assign(deg + 1, 0.0);
      for (int k = 0; k < deg; ++k) {
        const int in = index.reverse(first + k);
        pre_a[k + 1] = pre_a[k] + state.alpha[in];
        pre_b[k + 1] = pre_b[k] + state.beta[in];
      }
      for (int k = deg - 1; k >= 0; --k) {
        const int in = index.reverse(first + k);
        suf_a[k] = suf_a[k + 1] + state.alpha[in];
        suf_b[k] = suf_b[k + 1] + state.beta[in];
      }
      const double hi = potential_at(h, i);
      for (int k = 0; k < deg; ++k) {
        const int a = first + k;
        const double denom = checked_denominator(pre_a[k] + suf_a[k + 1], index.arc(a));
        const double r = weights.r[a];
        const double alpha = r * r / denom;
        const double beta = r * (hi + pre_b[k] + suf_b[k + 1]) / denom;
        change = std::max({change, std::abs(alpha - state.alpha[a]),
                           std::abs(beta - state.beta[a])});
        next_alpha[a] = alpha;
        next_beta[a] = beta;
      }
      // Messages leaving i never feed messages leaving i, so in-place
      // updates can be applied per vertex.
      if (options.schedule == Schedule::Sequential) {
        for (int a = first; a < first + deg; ++a) {
          state.alpha[a] = next_alpha[a];
          state.beta[a] = next_beta[a];
        }
      }
    }
    if (options.schedule == Schedule::Synchronous) {
      state.alpha.swap(next_alpha);
      state.beta.swap(next_beta);
    }
    state.iterations = iter;
    state.max_residual = change;
    if (change <= options.tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

std::vector<double> alpha_excluding(const EdgeWeights& weights, const GaBPState& state) {
  const ArcIndex& index = weights.index;
  std::vector<double> out(index.arc_count(), 0.0);
  for (int a = 0; a < index.arc_count(); ++a) {
    const int i = index.arc(a).from;
    double sum = 0.0;
    for (int b = index.out_begin(i); b < index.out_end(i); ++b) {
      if (b != a) sum += state.alpha[index.reverse(b)];
    }
    out[a] = sum;
  }
  return out;
}

double fixed_point_residual(const EdgeWeights& weights, const GaBPState& state,
                            std::optional<std::span<const double>> h) {
  const ArcIndex& index = weights.index;
  const auto excl = alpha_excluding(weights, state);
  double worst = 0.0;
  for (int a = 0; a < index.arc_count(); ++a) {
    const int i = index.arc(a).from;
    double beta_excl = 0.0;
    for (int b = index.out_begin(i); b < index.out_end(i); ++b) {
      if (b != a) beta_excl += state.beta[index.reverse(b)];
    }
    const double denom = 1.0 - excl[a];
    const double r = weights.r[a];
    worst = std::max(worst, std::abs(state.alpha[a] - r * r / denom));
    worst = std::max(worst,
                     std::abs(state.beta[a] - r * (potential_at(h, i) + beta_excl) / denom));
  }
  return worst;
}

GaBPResult variances_means(const GaBPState& state, const EdgeWeights& weights,
                           std::optional<std::span<const double>> h) {
  const ArcIndex& index = weights.index;
  const int n = weights.vertex_count();
  GaBPResult out;
  out.variance.resize(n);
  if (h) out.mean.resize(n);
  for (int i = 0; i < n; ++i) {
    double alpha_sum = 0.0, beta_sum = 0.0;
    for (int b = index.out_begin(i); b < index.out_end(i); ++b) {
      alpha_sum += state.alpha[index.reverse(b)];
      beta_sum += state.beta[index.reverse(b)];
    }
    const double denom = 1.0 - alpha_sum;
    if (!(denom > 0.0)) {
      throw NotWalkSummable("1 - sum_k alpha_ki <= 0 at vertex " + std::to_string(i));
    }
    out.variance[i] = 1.0 / denom;
    if (h) out.mean[i] = out.variance[i] * ((*h)[i] + beta_sum);
  }
  return out;
}

namespace {

// Fills edge_log_z and log_zbp given variances already present in `out`.
void add_determinant_terms(const GaBPState& state, const EdgeWeights& weights,
                           GaBPResult& out) {
  const ArcIndex& index = weights.index;
  const auto excl = alpha_excluding(weights, state);
  double total = 0.0;
  for (double k : out.variance) total += std::log(k);
  out.edge_log_z.clear();
  for (int a = 0; a < index.arc_count(); ++a) {
    const Arc& arc = index.arc(a);
    if (arc.from > arc.to) continue;
    const int back = index.reverse(a);
    const double r = weights.r[a];
    const double det = (1.0 - excl[a]) * (1.0 - excl[back]) - r * r;
    if (!(det > 0.0)) {
      throw NotWalkSummable("pairwise GaBP determinant <= 0 on edge {" +
                            std::to_string(arc.from) + "," + std::to_string(arc.to) + "}");
    }
    const double log_zij = -std::log(det);
    out.edge_log_z.push_back(log_zij);
    total += log_zij - std::log(out.variance[arc.from]) - std::log(out.variance[arc.to]);
  }
  out.log_zbp = total;
}

}  // namespace

double log_zbp(const GaBPState& state, const EdgeWeights& weights) {
  GaBPResult out = variances_means(state, weights);
  add_determinant_terms(state, weights, out);
  return out.log_zbp;
}

GaBPResult summarize(const GaBPState& state, const EdgeWeights& weights,
                     std::optional<std::span<const double>> h) {
  GaBPResult out = variances_means(state, weights, h);
  add_determinant_terms(state, weights, out);
  return out;
}

double gabp_error_bound(double rho, std::optional<int> girth) {
  if (!girth) return 0.0;
  if (!(rho < 1.0)) throw std::invalid_argument("gabp_error_bound: rho must be < 1");
  const double g = *girth;
  return std::pow(rho, g) / (g * (1.0 - rho));
}

}  // namespace orbitprod
