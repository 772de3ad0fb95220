#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "orbitprod/exact.hpp"
#include "orbitprod/model.hpp"

namespace orbitprod::testing {

/// Unit-diagonal model with J_ij = -r on every listed edge.
inline GraphModel uniform_model(int n, const std::vector<std::pair<int, int>>& edges,
                                double r) {
  std::vector<WeightedEdge> e;
  for (auto [i, j] : edges) e.push_back({i, j, -r});
  return GraphModel(n, std::vector<double>(n, 1.0), std::move(e));
}

inline std::vector<std::pair<int, int>> cycle_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

inline std::vector<std::pair<int, int>> path_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

inline std::vector<std::pair<int, int>> complete_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return e;
}

inline std::vector<std::pair<int, int>> grid_edges(int rows, int cols) {
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.emplace_back(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) e.emplace_back(r * cols + c, (r + 1) * cols + c);
    }
  return e;
}

inline std::vector<std::pair<int, int>> cube_edges() {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < 8; ++v)
    for (int b = 0; b < 3; ++b) {
      const int u = v ^ (1 << b);
      if (v < u) e.emplace_back(v, u);
    }
  return e;
}

inline ArcIndex arc_index(int n, const std::vector<std::pair<int, int>>& edges) {
  return ArcIndex(n, edges);
}

/// Random recursive tree with signed couplings and random diagonal,
/// rescaled so rho(|R|) = target_rho.
inline GraphModel random_tree(int n, double target_rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (int v = 1; v < n; ++v) {
    const int parent = static_cast<int>(unit(rng) * v);
    double w = 0.0;
    while (w == 0.0) w = 2.0 * unit(rng) - 1.0;
    edges.push_back({parent, v, w});
  }
  std::vector<double> diag(n);
  for (double& d : diag) d = 0.5 + 1.5 * unit(rng);
  GraphModel unit_model(n, std::vector<double>(n, 1.0), edges);
  const auto est = perron_radius(normalize(unit_model).weights.abs_matrix(), 1e-14, 1000000);
  const double scale = target_rho / est.radius;
  for (auto& e : edges) e.value = -e.value * scale * std::sqrt(diag[e.i] * diag[e.j]);
  return GraphModel(n, std::move(diag), std::move(edges));
}

inline std::vector<double> random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = unit(rng);
  return v;
}

/// Dense I - R, built independently of EdgeWeights::matrix.
inline DenseMatrix dense_i_minus_r(const EdgeWeights& w) {
  const int n = w.vertex_count();
  DenseMatrix m = DenseMatrix::Identity(n, n);
  for (int a = 0; a < w.arc_count(); ++a) m(w.index.arc(a).from, w.index.arc(a).to) -= w.r[a];
  return m;
}

inline double dense_log_z(const EdgeWeights& w) {
  return -dense_logdet(dense_i_minus_r(w)).log_abs;
}

}  // namespace orbitprod::testing
