#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "orbitprod/errors.hpp"
#include "orbitprod/exact.hpp"
#include "orbitprod/gabp.hpp"
#include "orbitprod/orbits.hpp"

using namespace orbitprod;
using namespace orbitprod::testing;

namespace {

Walk walk(std::vector<int> v) { return Walk{std::move(v)}; }

}  // namespace

TEST_CASE("irreducible_core") {
  CHECK(irreducible_core(walk({0, 1, 2, 3, 2, 1, 0})).empty());
  CHECK(irreducible_core(walk({0, 1, 2, 0})) == walk({0, 1, 2, 0}));
  CHECK(irreducible_core(walk({0, 1, 2, 1, 3, 0})) == walk({0, 1, 3, 0}));
  // Wrap-around pair: 1 -> 0 -> 2 -> 3 -> 0 -> 1 reduces to the 3-cycle 0 2 3.
  const Walk wrapped = irreducible_core(walk({1, 0, 2, 3, 0, 1}));
  CHECK(wrapped.length() == 3);
  CHECK(wrapped.closed());
  CHECK(irreducible_core(walk({0, 1, 0})).empty());
}

TEST_CASE("minimal_rotation and primitive_period") {
  CHECK(minimal_rotation({1, 2, 0}) == std::vector<int>{0, 1, 2});
  CHECK(minimal_rotation({2, 0, 2, 1}) == std::vector<int>{0, 2, 1, 2});
  CHECK(primitive_period({0, 1, 2, 0, 1, 2}) == 3);
  CHECK(primitive_period({0, 1, 0, 2}) == 4);
  CHECK(primitive_period({5}) == 1);
}

TEST_CASE("canonical_orbit") {
  const auto tri = arc_index(3, cycle_edges(3));
  const auto rotated = canonical_orbit(tri, walk({1, 2, 0, 1}));
  REQUIRE(rotated.has_value());
  CHECK(rotated->cycle == std::vector<int>{0, 1, 2});
  CHECK(rotated->kind == OrbitClass::Backtrackless);
  CHECK(rotated->walk() == walk({0, 1, 2, 0}));

  CHECK_FALSE(canonical_orbit(tri, walk({0, 1, 2, 0, 1, 2, 0})).has_value());

  const auto edge = canonical_orbit(tri, walk({0, 1, 0}));
  REQUIRE(edge.has_value());
  CHECK(edge->length() == 2);
  CHECK(edge->kind == OrbitClass::TotallyBacktracking);

  const auto path = arc_index(3, path_edges(3));
  CHECK_THROWS_AS(canonical_orbit(path, walk({0, 2, 1, 0})), std::invalid_argument);

  SUBCASE("classification") {
    const auto g = arc_index(4, {{0, 1}, {1, 2}, {0, 2}, {1, 3}, {0, 3}});
    const auto reducible = canonical_orbit(g, walk({0, 1, 2, 1, 3, 0}));
    REQUIRE(reducible.has_value());
    CHECK(reducible->kind == OrbitClass::ReducibleNonTrivial);
    // Goes around the triangle and comes back the same way.
    const auto back_and_forth = canonical_orbit(g, walk({0, 1, 2, 0, 2, 1, 0}));
    REQUIRE(back_and_forth.has_value());
    CHECK(back_and_forth->kind == OrbitClass::TotallyBacktracking);
  }
  SUBCASE("step counts") {
    const auto o = canonical_orbit(path, walk({0, 1, 2, 1, 0}));
    REQUIRE(o.has_value());
    int total = 0;
    for (auto [arc, count] : o->step_counts) {
      CHECK(count == 1);
      total += count;
    }
    CHECK(total == 4);
  }
}

TEST_CASE("enumerate_orbits") {
  SUBCASE("triangle, L=3") {
    const auto orbits = enumerate_orbits(arc_index(3, cycle_edges(3)), {3, kDefaultWalkBudget});
    REQUIRE(orbits.size() == 5);
    int edges = 0, cycles = 0;
    for (const auto& o : orbits) {
      if (o.length() == 2) {
        ++edges;
        CHECK(o.kind == OrbitClass::TotallyBacktracking);
      } else {
        ++cycles;
        CHECK(o.kind == OrbitClass::Backtrackless);
      }
    }
    CHECK(edges == 3);
    CHECK(cycles == 2);
  }
  SUBCASE("trees only have totally backtracking orbits") {
    const auto m = random_tree(9, 0.5, 3);
    const auto orbits = enumerate_orbits(normalize(m).weights.index, {8, kDefaultWalkBudget});
    CHECK_FALSE(orbits.empty());
    for (const auto& o : orbits) CHECK(o.kind == OrbitClass::TotallyBacktracking);
  }
  SUBCASE("counts reproduce tr(A^k)") {
    const std::vector<std::pair<int, std::vector<std::pair<int, int>>>> graphs = {
        {4, complete_edges(4)}, {8, cube_edges()}, {6, grid_edges(2, 3)}, {5, cycle_edges(5)}};
    for (const auto& [n, edges] : graphs) {
      const auto index = arc_index(n, edges);
      const int max_len = 8;
      const auto orbits = enumerate_orbits(index, {max_len, kDefaultWalkBudget});
      std::set<std::vector<int>> distinct;
      for (const auto& o : orbits) distinct.insert(o.cycle);
      CHECK(distinct.size() == orbits.size());

      DenseMatrix a = DenseMatrix::Zero(n, n);
      for (auto [i, j] : edges) a(i, j) = a(j, i) = 1.0;
      DenseMatrix power = DenseMatrix::Identity(n, n);
      for (int k = 1; k <= max_len; ++k) {
        power = power * a;
        long long count = 0;
        for (const auto& o : orbits)
          if (k % o.length() == 0) count += o.length();
        CHECK(count == std::llround(power.trace()));
      }
    }
  }
  SUBCASE("walk budget") {
    CHECK_THROWS_AS(enumerate_orbits(arc_index(4, complete_edges(4)), {10, 100}), ResourceLimit);
  }
}

TEST_CASE("enumerate_backtrackless_orbits") {
  SUBCASE("single cycle has two orientations") {
    for (int n : {3, 5, 7}) {
      const auto orbits =
          enumerate_backtrackless_orbits(arc_index(n, cycle_edges(n)), {n + 1, kDefaultWalkBudget});
      REQUIRE(orbits.size() == 2);
      for (const auto& o : orbits) {
        CHECK(o.length() == n);
        CHECK(o.kind == OrbitClass::Backtrackless);
      }
    }
  }
  SUBCASE("agrees with filtered enumeration") {
    const auto index = arc_index(6, grid_edges(2, 3));
    const auto all = enumerate_orbits(index, {10, kDefaultWalkBudget});
    const auto btl = enumerate_backtrackless_orbits(index, {10, kDefaultWalkBudget});
    std::set<std::vector<int>> a, b;
    for (const auto& o : all)
      if (o.kind == OrbitClass::Backtrackless) a.insert(o.cycle);
    for (const auto& o : btl) b.insert(o.cycle);
    CHECK(a == b);
  }
  SUBCASE("none below girth") {
    CHECK(enumerate_backtrackless_orbits(arc_index(6, cycle_edges(6)), {5, kDefaultWalkBudget})
              .empty());
  }
}

TEST_CASE("orbit_log_z") {
  const double r = 0.3;
  const auto w = normalize(uniform_model(3, cycle_edges(3), r)).weights;
  const auto edge = canonical_orbit(w.index, walk({0, 1, 0}));
  CHECK(orbit_log_z(w, *edge) == doctest::Approx(-std::log(1 - r * r)).epsilon(1e-15));
  const auto tri = canonical_orbit(w.index, walk({0, 1, 2, 0}));
  CHECK(orbit_log_z(w, *tri) == doctest::Approx(-std::log(1 - r * r * r)).epsilon(1e-15));

  const auto big = normalize(uniform_model(2, {{0, 1}}, 1.0)).weights;
  CHECK_THROWS_AS(orbit_log_z(big, *canonical_orbit(big.index, walk({0, 1, 0}))), DomainError);
}

TEST_CASE("truncated sums") {
  SUBCASE("trees converge to log Z^bp") {
    const auto m = random_tree(6, 0.4, 8);
    const auto w = normalize(m).weights;
    const double bp = log_zbp(run_gabp(w), w);
    const double sum = truncated_orbit_logsum(w, {14, kDefaultWalkBudget});
    CHECK(std::abs(sum - bp) <= orbit_tail_bound(0.4, 14, 6));
    CHECK(truncated_class_logsum(w, OrbitClass::TotallyBacktracking, {10, kDefaultWalkBudget}) ==
          doctest::Approx(truncated_orbit_logsum(w, {10, kDefaultWalkBudget})).epsilon(1e-14));
  }
  SUBCASE("K4 within bound of log Z") {
    const auto w = normalize(uniform_model(4, complete_edges(4), 0.15)).weights;
    const double rho = 0.45;
    const double sum = truncated_orbit_logsum(w, {12, kDefaultWalkBudget});
    CHECK(std::abs(sum - dense_log_z(w)) <= orbit_tail_bound(rho, 12, 4));
  }
  SUBCASE("cycle below girth sums edge orbits") {
    const double r = 0.2;
    const auto w = normalize(uniform_model(6, cycle_edges(6), r)).weights;
    const double sum = truncated_orbit_logsum(w, {2, kDefaultWalkBudget});
    CHECK(sum == doctest::Approx(-6 * std::log(1 - r * r)).epsilon(1e-14));
  }
  SUBCASE("totally backtracking sums increase toward log Z^bp on K4") {
    const auto w = normalize(uniform_model(4, complete_edges(4), 0.15)).weights;
    const double bp = log_zbp(run_gabp(w), w);
    double prev = 0.0;
    for (int len = 2; len <= 10; len += 2) {
      const double s =
          truncated_class_logsum(w, OrbitClass::TotallyBacktracking, {len, kDefaultWalkBudget});
      CHECK(s >= prev);
      CHECK(s <= bp + 1e-14);
      prev = s;
    }
  }
}

TEST_CASE("trace_series_crosscheck") {
  const auto tri = normalize(uniform_model(3, cycle_edges(3), 0.3)).weights;
  auto t = trace_series_crosscheck(tri, {6, kDefaultWalkBudget});
  CHECK(std::abs(t.lhs - t.rhs) <= 1e-12);

  const auto none = normalize(GraphModel(2, {1.0, 1.0}, {})).weights;
  t = trace_series_crosscheck(none, {6, kDefaultWalkBudget});
  CHECK(t.lhs == 0.0);
  CHECK(t.rhs == 0.0);

  const auto grid = normalize(gen_grid(3, 3, 0.2, false)).weights;
  t = trace_series_crosscheck(grid, {8, kDefaultWalkBudget});
  CHECK(std::abs(t.lhs - t.rhs) <= 1e-12);

  const auto signed_model = normalize(gen_random(7, 3.0, 0.8, 17)).weights;
  t = trace_series_crosscheck(signed_model, {9, kDefaultWalkBudget});
  CHECK(std::abs(t.lhs - t.rhs) <= 1e-12);
}

TEST_CASE("orbit_tail_bound") {
  CHECK(orbit_tail_bound(0.5, 3, 2.0) == doctest::Approx(2.0 * 0.0625 / (4 * 0.5)));
}
