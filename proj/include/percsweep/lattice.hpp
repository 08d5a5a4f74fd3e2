#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "percsweep/dynamic_graph.hpp"

namespace percsweep {

using SiteIndex = std::uint32_t;

struct Site {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
};

namespace boundary {
inline constexpr std::size_t kLeft = 0;
inline constexpr std::size_t kRight = 1;
inline constexpr std::size_t kBottom = 2;
inline constexpr std::size_t kTop = 3;

inline constexpr BoundaryMask bit(std::size_t b) { return static_cast<BoundaryMask>(1u << b); }
}  // namespace boundary

enum class SpanClass : std::uint8_t { neither = 0, x_only = 1, y_only = 2, both = 3 };

SpanClass span_class_of(const BoundaryCounts& counts);
const char* to_string(SpanClass c);

/// Census of live clusters by spanning class.
struct SpanningTally {
  std::array<std::int64_t, 4> counts{};

  std::int64_t& operator[](SpanClass c) { return counts[static_cast<std::size_t>(c)]; }
  std::int64_t operator[](SpanClass c) const { return counts[static_cast<std::size_t>(c)]; }
  std::int64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }

  /// True iff some cluster spans at least `dims` dimensions (1 or 2).
  bool spans(int dims) const;

  bool operator==(const SpanningTally&) const = default;
};

class LatticeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deliberate defects used to confirm that the verification suites detect
/// them. Never enabled in normal runs.
enum class LatticeFault { none, skip_tally_decrement };

/// L x L square lattice of sites with open boundaries and 4-neighbour
/// adjacency. Occupied sites are vertices of a DynamicGraph; the spanning
/// tally is maintained incrementally on every occupation change.
class SquareLattice {
 public:
  explicit SquareLattice(std::uint32_t side);

  std::uint32_t side() const { return side_; }
  std::size_t site_count() const { return std::size_t{side_} * side_; }
  std::size_t occupied_count() const { return occupied_; }

  SiteIndex index_of_site(Site s) const;
  Site site_of_index(SiteIndex i) const { return {i % side_, i / side_}; }

  BoundaryMask boundary_mask_of(Site s) const;
  SpanClass spanning_class(GraphId root) const;

  bool is_occupied(SiteIndex i) const;
  std::size_t occupy(SiteIndex i);
  std::size_t deoccupy(SiteIndex i);

  /// Occupied-or-not neighbours within the lattice; returns how many were written.
  std::size_t neighbor_sites(SiteIndex i, std::array<SiteIndex, 4>& out) const;

  bool spans(int dims) const { return tally_.spans(dims); }
  const SpanningTally& tally() const { return tally_; }

  /// Tally recomputed from the current cluster roots.
  SpanningTally rescan_tally() const;

  const DynamicGraph& graph() const { return graph_; }
  VertexId vertex_at(SiteIndex i) const { return site_vertex_.at(i); }
  SiteIndex site_of_vertex(VertexId v) const { return vertex_site_.at(percsweep::index_of(v)); }

  /// Text form: "L <side>" then the sorted occupied site indices, one per line.
  std::string snapshot() const;
  static SquareLattice from_snapshot(std::string_view text);

  void inject_fault(LatticeFault fault) { fault_ = fault; }

 private:
  void count_out(GraphId root);
  void count_in(SpanClass c) { ++tally_[c]; }

  std::uint32_t side_;
  DynamicGraph graph_;
  std::vector<VertexId> site_vertex_;
  std::vector<SiteIndex> vertex_site_;
  std::size_t occupied_ = 0;
  SpanningTally tally_;
  LatticeFault fault_ = LatticeFault::none;
};

}  // namespace percsweep
