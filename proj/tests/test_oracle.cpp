#include "doctest.h"
#include "percsweep/oracle.hpp"

using namespace percsweep;
using oracle::ExactRatio;

TEST_CASE("binomial") {
  CHECK(oracle::binomial(4, 2) == 6);
  CHECK(oracle::binomial(9, 0) == 1);
  CHECK(oracle::binomial(9, 9) == 1);
  CHECK(oracle::binomial(3, 4) == 0);
  CHECK(oracle::binomial(25, 12) == 5200300);
}

TEST_CASE("bfs_partition of a small graph") {
  DynamicGraph g(5, 4);
  const VertexId a = g.create_vertex(1), b = g.create_vertex(2), c = g.create_vertex();
  const VertexId d = g.create_vertex();
  g.insert_edge(a, b);
  g.insert_edge(b, c);
  const auto part = oracle::bfs_partition(g);
  CHECK(part.component_count() == 2);
  CHECK(part.label[index_of(a)] == part.label[index_of(c)]);
  CHECK(part.order[part.label[index_of(a)]] == 3);
  CHECK(part.boundary[part.label[index_of(a)]] == BoundaryCounts{1, 1, 0, 0});
  g.remove_vertex(d);
  CHECK(oracle::bfs_partition(g).label[index_of(d)] == oracle::kUnlabelled);
}

TEST_CASE("bfs_partition of a lattice uses occupancy only") {
  SquareLattice lat(3);
  for (SiteIndex s : {0u, 1u, 2u, 8u}) lat.occupy(s);
  const auto part = oracle::bfs_partition(lat);
  CHECK(part.component_count() == 2);
  CHECK(part.label[3] == oracle::kUnlabelled);
  const SpanningTally t = oracle::census(part);
  CHECK(t[SpanClass::x_only] == 1);
  CHECK(t[SpanClass::neither] == 1);
}

TEST_CASE("compare_with_graph reports disagreement") {
  DynamicGraph g(3, 2);
  const VertexId a = g.create_vertex(), b = g.create_vertex();
  const auto before = oracle::bfs_partition(g);
  g.insert_edge(a, b);
  CHECK(oracle::compare_with_graph(g, before) != "");
  CHECK(oracle::compare_with_graph(g, oracle::bfs_partition(g)) == "");
}

TEST_CASE("exhaustive R on a 2x2 lattice") {
  CHECK(oracle::exhaustive_R(2, 0) == ExactRatio{0, 1});
  CHECK(oracle::exhaustive_R(2, 1) == ExactRatio{0, 1});
  CHECK(oracle::exhaustive_R(2, 2) == ExactRatio{1, 3});
  CHECK(oracle::exhaustive_R(2, 3) == ExactRatio{1, 1});
  CHECK(oracle::exhaustive_R(2, 4) == ExactRatio{1, 1});
}

TEST_CASE("exhaustive R on a 3x3 lattice") {
  for (std::uint32_t n = 0; n <= 2; ++n) CHECK(oracle::exhaustive_R(3, n).num == 0);
  CHECK(oracle::exhaustive_R(3, 9) == ExactRatio{1, 1});
  // Three sites span only as a full row or column: 6 of C(9,3)=84 each giving
  // one spanning direction, so R = (6 + 0) / (2 * 84).
  CHECK(oracle::exhaustive_R(3, 3) == ExactRatio{1, 28});
  for (std::uint32_t n = 0; n <= 9; ++n) {
    const auto c = oracle::enumerate_configurations(3, n);
    CHECK(c.s0 == oracle::binomial(9, n));
    CHECK(c.x_span == c.y_span);  // rotation symmetry
    CHECK(c.s2 <= c.s1);
  }
}

TEST_CASE("enumeration budget") {
  CHECK_THROWS_AS(oracle::enumerate_configurations(6, 18, 1000), oracle::BudgetExceeded);
}
