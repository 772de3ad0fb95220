#include "orbitprod/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <string>

#include "orbitprod/errors.hpp"

namespace orbitprod {

GraphModel::GraphModel(int n, std::vector<double> diag,
                       std::vector<WeightedEdge> edges,
                       std::optional<std::vector<double>> h)
    : diag_(std::move(diag)), edges_(std::move(edges)), h_(std::move(h)) {
  if (n < 0) throw InvalidModel("vertex count must be nonnegative");
  if (static_cast<int>(diag_.size()) != n) {
    throw InvalidModel("diagonal has " + std::to_string(diag_.size()) +
                       " entries, expected " + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    if (!(diag_[i] > 0.0) || !std::isfinite(diag_[i])) {
      throw InvalidModel("diagonal entry " + std::to_string(i) +
                         " is not a positive finite number");
    }
  }
  for (auto& e : edges_) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw InvalidModel("edge endpoint out of range");
    }
    if (e.i == e.j) throw InvalidModel("self-loop at vertex " + std::to_string(e.i));
    if (e.value == 0.0 || !std::isfinite(e.value)) {
      throw InvalidModel("edge {" + std::to_string(e.i) + "," + std::to_string(e.j) +
                         "} has a zero or non-finite value");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw InvalidModel("duplicate edge {" + std::to_string(edges_[k].i) + "," +
                         std::to_string(edges_[k].j) + "}");
    }
  }
  if (h_ && static_cast<int>(h_->size()) != n) {
    throw InvalidModel("potential vector length does not match vertex count");
  }
}

GraphModel GraphModel::with_potential(std::vector<double> h) const {
  return GraphModel(size(), diag_, edges_, std::move(h));
}

ArcIndex::ArcIndex(int n, std::span<const std::pair<int, int>> edges) : n_(n) {
  arcs_.reserve(2 * edges.size());
  for (const auto& [i, j] : edges) {
    arcs_.push_back({i, j});
    arcs_.push_back({j, i});
  }
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  offsets_.assign(n + 1, 0);
  for (const Arc& a : arcs_) ++offsets_[a.from + 1];
  for (int v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  reverse_.resize(arcs_.size());
  for (int id = 0; id < arc_count(); ++id) {
    reverse_[id] = find(arcs_[id].to, arcs_[id].from);
  }
}

int ArcIndex::find(int i, int j) const {
  if (i < 0 || i >= n_) return -1;
  const auto first = arcs_.begin() + offsets_[i];
  const auto last = arcs_.begin() + offsets_[i + 1];
  const auto it = std::lower_bound(first, last, j,
                                   [](const Arc& a, int to) { return a.to < to; });
  if (it == last || it->to != j) return -1;
  return static_cast<int>(it - arcs_.begin());
}

SparseMatrix EdgeWeights::matrix() const {
  SparseMatrix m(vertex_count(), vertex_count());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(r.size());
  for (int a = 0; a < arc_count(); ++a) {
    triplets.emplace_back(index.arc(a).from, index.arc(a).to, r[a]);
  }
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix EdgeWeights::abs_matrix() const {
  SparseMatrix m = matrix();
  return m.cwiseAbs();
}

namespace {

std::vector<std::pair<int, int>> edge_pairs(const GraphModel& model) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(model.edge_count());
  for (const auto& e : model.edges()) pairs.emplace_back(e.i, e.j);
  return pairs;
}

}  // namespace

NormalizedModel normalize(const GraphModel& model) {
  const auto pairs = edge_pairs(model);
  NormalizedModel out;
  out.weights.index = ArcIndex(model.size(), pairs);
  out.weights.r.resize(out.weights.index.arc_count());
  const auto& d = model.diag();
  for (const auto& e : model.edges()) {
    const double r = -e.value / std::sqrt(d[e.i] * d[e.j]);
    out.weights.r[out.weights.index.find(e.i, e.j)] = r;
    out.weights.r[out.weights.index.find(e.j, e.i)] = r;
  }
  for (double di : d) out.logdet_shift += std::log(di);
  return out;
}

GraphModel denormalize(const EdgeWeights& weights, std::span<const double> diag) {
  std::vector<WeightedEdge> edges;
  for (int a = 0; a < weights.arc_count(); ++a) {
    const Arc& arc = weights.index.arc(a);
    if (arc.from < arc.to) {
      edges.push_back({arc.from, arc.to,
                       -weights.r[a] * std::sqrt(diag[arc.from] * diag[arc.to])});
    }
  }
  return GraphModel(weights.vertex_count(),
                    std::vector<double>(diag.begin(), diag.end()), std::move(edges));
}

std::vector<double> normalized_potential(const GraphModel& model) {
  std::vector<double> h(model.size(), 0.0);
  if (model.potential()) {
    for (int i = 0; i < model.size(); ++i) {
      h[i] = (*model.potential())[i] / std::sqrt(model.diag()[i]);
    }
  }
  return h;
}

WalkSummabilityReport spectral_radius_abs(const EdgeWeights& weights, double tol,
                                          int max_iter) {
  const PerronEstimate est = perron_radius(weights.abs_matrix(), tol, max_iter);
  WalkSummabilityReport report;
  report.rho_abs = est.radius;
  report.iterations = est.iterations;
  report.residual = est.residual;
  report.converged = est.converged;
  report.walk_summable = est.converged && est.radius < 1.0 - kWalkSummableMargin;
  return report;
}

void require_walk_summable(const WalkSummabilityReport& report) {
  if (!report.converged) {
    throw NotWalkSummable("power iteration for rho(|R|) did not converge (residual " +
                          std::to_string(report.residual) + ")");
  }
  if (!report.walk_summable) {
    throw NotWalkSummable("model is not walk-summable: rho(|R|) = " +
                          std::to_string(report.rho_abs));
  }
}

std::optional<int> girth(const ArcIndex& index) {
  const int n = index.vertex_count();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(n), parent(n);
  std::queue<int> queue;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    parent[s] = -1;
    queue = {};
    queue.push(s);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      if (2 * dist[u] + 1 >= best) break;
      for (int a = index.out_begin(u); a < index.out_end(u); ++a) {
        const int v = index.arc(a).to;
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push(v);
        } else if (parent[u] != v) {
          best = std::min(best, dist[u] + dist[v] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

std::optional<int> girth(const GraphModel& model) {
  const auto pairs = edge_pairs(model);
  return girth(ArcIndex(model.size(), pairs));
}

GraphModel gen_grid(int rows, int cols, double r, bool periodic) {
  if (rows < 2 || cols < 2) throw InvalidModel("grid needs rows, cols >= 2");
  if (periodic && (rows < 3 || cols < 3)) {
    throw InvalidModel("periodic grid needs rows, cols >= 3");
  }
  if (r == 0.0 || !std::isfinite(r)) throw InvalidModel("grid weight must be nonzero");
  const int n = rows * cols;
  std::vector<WeightedEdge> edges;
  auto id = [cols](int row, int col) { return row * cols + col; };
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      if (col + 1 < cols) {
        edges.push_back({id(row, col), id(row, col + 1), -r});
      } else if (periodic) {
        edges.push_back({id(row, col), id(row, 0), -r});
      }
      if (row + 1 < rows) {
        edges.push_back({id(row, col), id(row + 1, col), -r});
      } else if (periodic) {
        edges.push_back({id(row, col), id(0, col), -r});
      }
    }
  }
  return GraphModel(n, std::vector<double>(n, 1.0), std::move(edges));
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool is_connected(int n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

constexpr int kMaxRandomDraws = 1000;

}  // namespace

GraphModel gen_random(int n, double avg_degree, double target_rho,
                      std::uint64_t seed) {
  if (n < 2) throw InvalidModel("random model needs n >= 2");
  if (!(target_rho > 0.0 && target_rho < 1.0)) {
    throw InvalidModel("target_rho must lie in (0, 1)");
  }
  if (!(avg_degree > 0.0)) throw InvalidModel("avg_degree must be positive");
  const double p = std::min(1.0, avg_degree / (n - 1));
  std::mt19937_64 rng(seed);

  for (int draw = 0; draw < kMaxRandomDraws; ++draw) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (uniform01(rng) < p) {
          double w = 0.0;
          while (w == 0.0) w = 2.0 * uniform01(rng) - 1.0;
          edges.push_back({i, j, w});
        }
      }
    }
    std::vector<double> diag(n);
    for (double& d : diag) d = 0.5 + 1.5 * uniform01(rng);
    if (edges.empty() || !is_connected(n, edges)) continue;

    // Treat the drawn values as r_ij, rescale, then map back to J.
    GraphModel unit(n, std::vector<double>(n, 1.0), edges);
    const auto normalized = normalize(unit);
    const auto est = perron_radius(normalized.weights.abs_matrix(), 1e-13, 1000000);
    if (!est.converged || !(est.radius > 0.0)) continue;
    const double scale = target_rho / est.radius;
    for (auto& e : edges) {
      e.value = -e.value * scale * std::sqrt(diag[e.i] * diag[e.j]);
    }
    return GraphModel(n, std::move(diag), std::move(edges));
  }
  throw InvalidModel("gen_random: no connected draw after " +
                     std::to_string(kMaxRandomDraws) + " attempts");
}

}  // namespace orbitprod
