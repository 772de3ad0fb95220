#include "orbitprod/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

#include "orbitprod/errors.hpp"
#include "orbitprod/exact.hpp"

#include "compensated_sum.hpp"

namespace orbitprod {

std::string_view to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::TotallyBacktracking:
      return "totally-backtracking";
    case OrbitClass::Backtrackless:
      return "backtrackless";
    case OrbitClass::ReducibleNonTrivial:
      return "reducible-nontrivial";
  }
  return "unknown";
}

Walk Orbit::walk() const {
  Walk w{cycle};
  if (!cycle.empty()) w.vertices.push_back(cycle.front());
  return w;
}

Walk irreducible_core(const Walk& w) {
  std::vector<int> stack;
  stack.reserve(w.vertices.size());
  for (int v : w.vertices) {
    if (stack.size() >= 2 && stack[stack.size() - 2] == v) {
      stack.pop_back();
    } else {
      stack.push_back(v);
    }
  }
  if (!w.closed()) return Walk{std::move(stack)};

  // Wrap-around pairs: last step (u_{m-1} u_0) followed by first step (u_0 u_1).
  std::size_t first = 0, last = stack.size() - 1;
  while (last - first >= 2 && stack[first + 1] == stack[last - 1]) {
    ++first;
    --last;
  }
  if (last == first) return Walk{};
  return Walk{std::vector<int>(stack.begin() + first, stack.begin() + last + 1)};
}

std::vector<int> minimal_rotation(const std::vector<int>& cycle) {
  const std::size_t n = cycle.size();
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      const int a = cycle[(s + k) % n];
      const int b = cycle[(best + k) % n];
      if (a != b) {
        if (a < b) best = s;
        break;
      }
    }
  }
  std::vector<int> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = cycle[(best + k) % n];
  return out;
}

int primitive_period(const std::vector<int>& cycle) {
  const int n = static_cast<int>(cycle.size());
  for (int p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (int i = 0; i < n && periodic; ++i) periodic = cycle[i] == cycle[(i + p) % n];
    if (periodic) return p;
  }
  return n;
}

namespace {

bool has_backtracking_pair(const std::vector<int>& cycle) {
  const std::size_t n = cycle.size();
  for (std::size_t t = 0; t < n; ++t) {
    if (cycle[(t + n - 1) % n] == cycle[(t + 1) % n]) return true;
  }
  return false;
}

Orbit make_orbit(const ArcIndex& index, std::vector<int> cycle) {
  Orbit orbit;
  orbit.cycle = std::move(cycle);
  std::map<int, int> counts;
  const std::size_t n = orbit.cycle.size();
  for (std::size_t t = 0; t < n; ++t) {
    const int a = index.find(orbit.cycle[t], orbit.cycle[(t + 1) % n]);
    if (a < 0) {
      throw std::invalid_argument("walk steps between non-adjacent vertices " +
                                  std::to_string(orbit.cycle[t]) + " and " +
                                  std::to_string(orbit.cycle[(t + 1) % n]));
    }
    ++counts[a];
  }
  orbit.step_counts.assign(counts.begin(), counts.end());
  if (!has_backtracking_pair(orbit.cycle)) {
    orbit.kind = OrbitClass::Backtrackless;
  } else if (irreducible_core(orbit.walk()).empty()) {
    orbit.kind = OrbitClass::TotallyBacktracking;
  } else {
    orbit.kind = OrbitClass::ReducibleNonTrivial;
  }
  return orbit;
}

bool less_by_length(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

std::optional<Orbit> canonical_orbit(const ArcIndex& index, const Walk& w) {
  if (!w.closed() || w.length() < 1) {
    throw std::invalid_argument("canonical_orbit: walk must be closed and nonempty");
  }
  std::vector<int> cycle(w.vertices.begin(), w.vertices.end() - 1);
  if (primitive_period(cycle) < static_cast<int>(cycle.size())) return std::nullopt;
  return make_orbit(index, minimal_rotation(cycle));
}

std::vector<int> core_class_key(const Orbit& orbit) {
  const Walk core = irreducible_core(orbit.walk());
  if (core.empty()) return {};
  std::vector<int> cycle(core.vertices.begin(), core.vertices.end() - 1);
  cycle.resize(primitive_period(cycle));
  return minimal_rotation(cycle);
}

Digraph Digraph::from_undirected(const ArcIndex& index) {
  Digraph g;
  g.out.resize(index.vertex_count());
  for (const Arc& a : index.arcs()) g.out[a.from].push_back(a.to);
  g.in = g.out;
  return g;
}

Digraph Digraph::backtrackless(const ArcIndex& index) {
  Digraph g;
  g.out.resize(index.arc_count());
  g.in.resize(index.arc_count());
  for (int a = 0; a < index.arc_count(); ++a) {
    const Arc& arc = index.arc(a);
    for (int b = index.out_begin(arc.to); b < index.out_end(arc.to); ++b) {
      if (index.arc(b).to == arc.from) continue;
      g.out[a].push_back(b);
      g.in[b].push_back(a);
    }
  }
  return g;
}

namespace {

// Depth-first search over walks that start at `base` and never visit a node
// below it; every closed walk is checked for being the minimal rotation of a
// primitive cycle.
class CycleSearch {
 public:
  CycleSearch(const Digraph& g, const EnumerationLimits& limits,
              std::vector<std::vector<int>>& out)
      : g_(g), limits_(limits), out_(out), dist_(g.size()) {}

  void run(int base) {
    base_ = base;
    distances_to_base();
    path_.assign(1, base);
    extend();
  }

 private:
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  void distances_to_base() {
    std::fill(dist_.begin(), dist_.end(), kUnreachable);
    std::queue<int> queue;
    // dist_[base_] stays 0 so walks may pass through the base again.
    dist_[base_] = 0;
    queue.push(base_);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int u : g_.in[v]) {
        if (u > base_ && dist_[u] == kUnreachable) {
          dist_[u] = dist_[v] + 1;
          queue.push(u);
        }
      }
    }
  }

  void extend() {
    const int steps = static_cast<int>(path_.size());  // steps after the next move
    for (int x : g_.out[path_.back()]) {
      if (x < base_) continue;
      if (x == base_) consider_closed();
      if (steps < limits_.max_length && dist_[x] <= limits_.max_length - steps) {
        path_.push_back(x);
        extend();
        path_.pop_back();
      }
    }
  }

  void consider_closed() {
    if (++examined_ > limits_.walk_budget) {
      throw ResourceLimit("orbit enumeration exceeded the budget of " +
                          std::to_string(limits_.walk_budget) + " closed walks");
    }
    const std::size_t n = path_.size();
    for (std::size_t s = 1; s < n; ++s) {
      if (path_[s] != base_) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const int a = path_[(s + k) % n];
        const int b = path_[k];
        if (a < b) return;  // a smaller rotation exists
        if (a > b) break;
        if (k + 1 == n) return;  // rotation equals itself: not primitive
      }
    }
    out_.push_back(path_);
  }

  const Digraph& g_;
  const EnumerationLimits& limits_;
  std::vector<std::vector<int>>& out_;
  std::vector<int> dist_;
  std::vector<int> path_;
  int base_ = 0;
  std::size_t examined_ = 0;
};

}  // namespace

std::vector<std::vector<int>> enumerate_cycles(const Digraph& g,
                                               const EnumerationLimits& limits) {
  if (limits.max_length < 1) {
    throw std::invalid_argument("enumerate_cycles: max_length must be >= 1");
  }
  std::vector<std::vector<int>> cycles;
  CycleSearch search(g, limits, cycles);
  for (int base = 0; base < g.size(); ++base) search.run(base);
  std::sort(cycles.begin(), cycles.end(), less_by_length);
  return cycles;
}

std::vector<Orbit> enumerate_orbits(const ArcIndex& index,
                                    const EnumerationLimits& limits) {
  const auto cycles = enumerate_cycles(Digraph::from_undirected(index), limits);
  std::vector<Orbit> orbits;
  orbits.reserve(cycles.size());
  for (const auto& c : cycles) orbits.push_back(make_orbit(index, c));
  return orbits;
}

std::vector<Orbit> enumerate_backtrackless_orbits(const ArcIndex& index,
                                                  const EnumerationLimits& limits) {
  const auto cycles = enumerate_cycles(Digraph::backtrackless(index), limits);
  std::vector<Orbit> orbits;
  orbits.reserve(cycles.size());
  for (const auto& arc_cycle : cycles) {
    Orbit orbit;
    std::map<int, int> counts;
    std::vector<int> vertices;
    vertices.reserve(arc_cycle.size());
    for (int a : arc_cycle) {
      vertices.push_back(index.arc(a).from);
      ++counts[a];
    }
    orbit.cycle = minimal_rotation(vertices);
    orbit.step_counts.assign(counts.begin(), counts.end());
    orbit.kind = OrbitClass::Backtrackless;
    orbits.push_back(std::move(orbit));
  }
  std::sort(orbits.begin(), orbits.end(), [](const Orbit& a, const Orbit& b) {
    return less_by_length(a.cycle, b.cycle);
  });
  return orbits;
}

double orbit_weight(const std::vector<double>& arc_weights, const Orbit& orbit) {
  double w = 1.0;
  for (const auto& [arc, count] : orbit.step_counts) {
    w *= std::pow(arc_weights[arc], count);
  }
  return w;
}

double orbit_log_z(const EdgeWeights& weights, const Orbit& orbit) {
  const double w = orbit_weight(weights.r, orbit);
  if (!(std::abs(w) < 1.0)) {
    throw DomainError("orbit weight " + std::to_string(w) + " has modulus >= 1");
  }
  return -std::log1p(-w);
}

double truncated_orbit_logsum(const EdgeWeights& weights,
                              const EnumerationLimits& limits) {
  CompensatedSum sum;
  for (const Orbit& orbit : enumerate_orbits(weights.index, limits)) {
    sum.add(orbit_log_z(weights, orbit));
  }
  return sum.value();
}

double truncated_class_logsum(const EdgeWeights& weights, OrbitClass kind,
                              const EnumerationLimits& limits) {
  CompensatedSum sum;
  for (const Orbit& orbit : enumerate_orbits(weights.index, limits)) {
    if (orbit.kind == kind) sum.add(orbit_log_z(weights, orbit));
  }
  return sum.value();
}

TraceSeries trace_series_crosscheck(const EdgeWeights& weights,
                                    const EnumerationLimits& limits) {
  TraceSeries out;
  const DenseMatrix r = DenseMatrix(weights.matrix());
  DenseMatrix power = r;
  CompensatedSum lhs, rhs;
  for (int k = 1; k <= limits.max_length; ++k) {
    lhs.add(power.trace() / k);
    if (k < limits.max_length) power = power * r;
  }
  for (const Orbit& orbit : enumerate_orbits(weights.index, limits)) {
    const double w = orbit_weight(weights.r, orbit);
    double wm = 1.0;
    for (int m = 1; m * orbit.length() <= limits.max_length; ++m) {
      wm *= w;
      rhs.add(wm / m);
    }
  }
  out.lhs = lhs.value();
  out.rhs = rhs.value();
  return out;
}

double orbit_tail_bound(double rho, int max_length, double dimension) {
  const double next = max_length + 1;
  return dimension * std::pow(rho, next) / (next * (1.0 - rho));
}

}  // namespace orbitprod
