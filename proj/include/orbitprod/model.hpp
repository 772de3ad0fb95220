#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orbitprod/spectral.hpp"

namespace orbitprod {

struct WeightedEdge {
  int i;
  int j;
  double value;
};

/// Sparse symmetric precision matrix J with an optional potential vector h.
///
/// One value is stored per unordered edge. Edges are kept with i < j and
/// sorted lexicographically; the constructor rejects self-loops, duplicates,
/// zero off-diagonal values and non-positive diagonal entries.
class GraphModel {
 public:
  GraphModel(int n, std::vector<double> diag, std::vector<WeightedEdge> edges,
             std::optional<std::vector<double>> h = std::nullopt);

  int size() const { return static_cast<int>(diag_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  const std::optional<std::vector<double>>& potential() const { return h_; }

  GraphModel with_potential(std::vector<double> h) const;

 private:
  std::vector<double> diag_;
  std::vector<WeightedEdge> edges_;
  std::optional<std::vector<double>> h_;
};

struct Arc {
  int from;
  int to;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed-edge indexing shared by every module.
///
/// Each undirected edge {i,j} contributes the arcs (ij) and (ji). Arc ids
/// follow lexicographic (from, to) order, so the arcs leaving a vertex form
/// a contiguous id range.
class ArcIndex {
 public:
  ArcIndex() = default;
  ArcIndex(int n, std::span<const std::pair<int, int>> edges);

  int vertex_count() const { return n_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  std::size_t edge_count() const { return arcs_.size() / 2; }

  const Arc& arc(int id) const { return arcs_[id]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  int reverse(int id) const { return reverse_[id]; }

  /// Arc ids leaving v are [out_begin(v), out_end(v)).
  int out_begin(int v) const { return offsets_[v]; }
  int out_end(int v) const { return offsets_[v + 1]; }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Id of arc (i,j), or -1 when i and j are not adjacent.
  int find(int i, int j) const;

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> offsets_;
  std::vector<int> reverse_;
};

/// Off-diagonal weights of the unit-diagonal form J = D^{1/2} (I - R) D^{1/2}.
struct EdgeWeights {
  ArcIndex index;
  std::vector<double> r;  // per arc, r[(ij)] == r[(ji)]

  int vertex_count() const { return index.vertex_count(); }
  int arc_count() const { return index.arc_count(); }

  /// R as a sparse n x n matrix.
  SparseMatrix matrix() const;
  /// |R| as a sparse n x n matrix.
  SparseMatrix abs_matrix() const;
};

struct NormalizedModel {
  EdgeWeights weights;
  double logdet_shift = 0.0;  // sum_i log d_i
};

NormalizedModel normalize(const GraphModel& model);

/// Inverse of normalize for a given diagonal.
GraphModel denormalize(const EdgeWeights& weights, std::span<const double> diag);

/// h_i / sqrt(d_i): the potential of the unit-diagonal model.
std::vector<double> normalized_potential(const GraphModel& model);

struct WalkSummabilityReport {
  double rho_abs = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool walk_summable = false;
};

inline constexpr double kWalkSummableMargin = 1e-9;

WalkSummabilityReport spectral_radius_abs(const EdgeWeights& weights,
                                          double tol = 1e-10,
                                          int max_iter = 10000);

/// Throws NotWalkSummable unless the report certifies walk-summability.
void require_walk_summable(const WalkSummabilityReport& report);

/// Shortest cycle length; nullopt for forests.
std::optional<int> girth(const ArcIndex& index);
std::optional<int> girth(const GraphModel& model);

/// rows x cols nearest-neighbour grid with unit diagonal and J_ij = -r.
/// Vertex (row, col) has id row * cols + col.
GraphModel gen_grid(int rows, int cols, double r, bool periodic);

/// Erdos-Renyi graph with uniform [-1,1] couplings and random diagonal,
/// rescaled so that rho(|R|) equals target_rho.
GraphModel gen_random(int n, double avg_degree, double target_rho,
                      std::uint64_t seed);

}  // namespace orbitprod
