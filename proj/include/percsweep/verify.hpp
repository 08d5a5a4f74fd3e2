#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "percsweep/lattice.hpp"

namespace percsweep {

struct VerifyScale {
  std::uint64_t seed = 1;
  // Random raw-graph operations against the BFS oracle.
  std::size_t graph_ops = 100000;
  std::size_t graph_vertices = 1000;
  std::size_t graph_max_degree = 8;
  // Random occupy/deoccupy walk on a lattice.
  std::uint32_t lattice_side = 16;
  std::size_t lattice_steps = 100000;
  std::size_t check_every = 100;
  // Uniform-visitation test on L = 2.
  std::uint64_t uniform_cycles = 200000;
  LatticeFault fault = LatticeFault::none;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

SuiteResult verify_graph_oracle(const VerifyScale& scale);
SuiteResult verify_lattice_oracle(const VerifyScale& scale);
SuiteResult verify_tally_census(const VerifyScale& scale);
SuiteResult verify_uniformity(const VerifyScale& scale);
SuiteResult verify_rng(const VerifyScale& scale);

std::vector<SuiteResult> run_verification(const VerifyScale& scale);

/// Chi-square outcome for the configurations visited at one occupation n.
struct UniformityCheck {
  std::size_t n = 0;
  std::size_t configurations = 0;
  std::uint64_t visits = 0;
  double chi_square = 0.0;
  double threshold = 0.0;  // df + 4 sqrt(2 df)
  bool passed = true;
};

/// Walks an L = 2 lattice over the full window [0, 4] and tests the visit
/// frequencies of the C(4, n) configurations at every n.
std::vector<UniformityCheck> uniform_visitation(std::uint64_t cycles, std::uint64_t seed);

/// Structural checks on the graph's record arenas: no reachable childless
/// graph record, no clump records outside accretion, child counts consistent.
std::string check_graph_hygiene(const DynamicGraph& graph);

}  // namespace percsweep
