#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "orbitprod/model.hpp"

namespace orbitprod {

/// Vertex sequence (w_0 ... w_L); closed when w_0 == w_L. The trivial walk
/// has no vertices.
struct Walk {
  std::vector<int> vertices;

  int length() const { return vertices.empty() ? 0 : static_cast<int>(vertices.size()) - 1; }
  bool closed() const { return !vertices.empty() && vertices.front() == vertices.back(); }
  bool empty() const { return length() == 0; }
  friend bool operator==(const Walk&, const Walk&) = default;
};

enum class OrbitClass { TotallyBacktracking, Backtrackless, ReducibleNonTrivial };

std::string_view to_string(OrbitClass c);

/// Equivalence class of primitive closed walks under cyclic shift.
struct Orbit {
  std::vector<int> cycle;                        // minimal rotation, no repeated endpoint
  std::vector<std::pair<int, int>> step_counts;  // (arc id, n_ij), sorted by arc id
  OrbitClass kind = OrbitClass::TotallyBacktracking;

  int length() const { return static_cast<int>(cycle.size()); }
  /// Closed walk starting and ending at cycle[0].
  Walk walk() const;
};

/// Deletes backtracking pairs, including the pair that wraps around the end
/// of a closed walk, until none remain. Returns the trivial walk for totally
/// backtracking input.
Walk irreducible_core(const Walk& w);

/// Canonical orbit of a closed walk, or nullopt when the walk is a multiple
/// of a shorter one. Throws std::invalid_argument if consecutive vertices are
/// not adjacent.
std::optional<Orbit> canonical_orbit(const ArcIndex& index, const Walk& w);

/// Lexicographically minimal rotation of a cyclic sequence.
std::vector<int> minimal_rotation(const std::vector<int>& cycle);

/// Smallest p dividing the length such that the sequence has period p.
int primitive_period(const std::vector<int>& cycle);

/// Canonical cycle of the primitive root of irreducible_core(orbit); empty
/// for totally backtracking orbits. Orbits sharing this key form one
/// correction class.
std::vector<int> core_class_key(const Orbit& orbit);

inline constexpr int kDefaultOrbitLength = 14;
inline constexpr std::size_t kDefaultWalkBudget = 10'000'000;

struct EnumerationLimits {
  int max_length = kDefaultOrbitLength;
  std::size_t walk_budget = kDefaultWalkBudget;  // closed walks examined
};

/// Directed graph used by the enumerator.
struct Digraph {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;

  int size() const { return static_cast<int>(out.size()); }
  static Digraph from_undirected(const ArcIndex& index);
  /// Nodes are arcs of G; (ij) -> (jk) whenever k != i.
  static Digraph backtrackless(const ArcIndex& index);
};

/// Every primitive cycle of length <= max_length, each once, as its minimal
/// rotation; sorted by (length, sequence). Throws ResourceLimit when more
/// than walk_budget closed walks are examined.
std::vector<std::vector<int>> enumerate_cycles(const Digraph& g,
                                               const EnumerationLimits& limits = {});

/// All orbits of G with length <= limits.max_length.
std::vector<Orbit> enumerate_orbits(const ArcIndex& index,
                                    const EnumerationLimits& limits = {});

/// Backtrackless orbits of G, found as cycles of the arc graph.
std::vector<Orbit> enumerate_backtrackless_orbits(const ArcIndex& index,
                                                  const EnumerationLimits& limits = {});

/// prod_{(ij)} w_ij^{n_ij(orbit)} for per-arc weights w.
double orbit_weight(const std::vector<double>& arc_weights, const Orbit& orbit);

/// -log(1 - R^orbit). Throws DomainError when |R^orbit| >= 1.
double orbit_log_z(const EdgeWeights& weights, const Orbit& orbit);

/// Sum of orbit_log_z over all orbits of length <= max_length.
double truncated_orbit_logsum(const EdgeWeights& weights,
                              const EnumerationLimits& limits = {});

/// Same, restricted to one orbit class.
double truncated_class_logsum(const EdgeWeights& weights, OrbitClass kind,
                              const EnumerationLimits& limits = {});

struct TraceSeries {
  double lhs = 0.0;  // sum_{k <= L} tr(R^k) / k
  double rhs = 0.0;  // sum over orbits and multiples m|orbit| <= L of (R^orbit)^m / m
};

TraceSeries trace_series_crosscheck(const EdgeWeights& weights,
                                    const EnumerationLimits& limits = {});

/// n rho^{L+1} / ((L+1)(1-rho)): tail of the orbit product beyond length L.
double orbit_tail_bound(double rho, int max_length, double dimension);

}  // namespace orbitprod
