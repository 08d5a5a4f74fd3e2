#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percsweep/dynamic_graph.hpp"
#include "percsweep/lattice.hpp"

namespace percsweep::oracle {

inline constexpr std::uint32_t kUnlabelled = 0xffffffffu;

/// Connected components found by plain BFS, without consulting any tree.
struct ComponentPartition {
  std::vector<std::uint32_t> label;  // by vertex index or site index; kUnlabelled if absent
  std::vector<std::uint32_t> order;
  std::vector<BoundaryCounts> boundary;

  std::size_t component_count() const { return order.size(); }
};

/// Components over the explicit adjacency links of a graph, indexed by vertex.
ComponentPartition bfs_partition(const DynamicGraph& graph);

/// Components over occupied 4-neighbour sites, indexed by site. Uses only
/// occupancy flags and lattice geometry.
ComponentPartition bfs_partition(const SquareLattice& lattice);

SpanningTally census(const ComponentPartition& partition);

/// Empty on agreement, otherwise a description of the first mismatch
/// between the graph's trees and the partition.
std::string compare_with_graph(DynamicGraph& graph, const ComponentPartition& partition);
/// Same for a lattice, including the incremental spanning tally.
std::string compare_with_lattice(const SquareLattice& lattice, const ComponentPartition& partition);

struct ExactRatio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const ExactRatio&) const = default;
};

struct EnumerationCounts {
  std::uint64_t s0 = 0, s1 = 0, s2 = 0;
  std::uint64_t x_span = 0, y_span = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// s0, s1, s2 over every configuration of n occupied sites on an L x L
/// lattice, enumerated in lexicographic site order.
EnumerationCounts enumerate_configurations(std::uint32_t side, std::uint32_t n,
                                           std::uint64_t budget = 10'000'000);

/// Exact (s1 + s2) / (2 s0) over all configurations, in lowest terms.
ExactRatio exhaustive_R(std::uint32_t side, std::uint32_t n, std::uint64_t budget = 10'000'000);

}  // namespace percsweep::oracle
