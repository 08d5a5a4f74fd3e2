#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "percsweep/detail/arena.hpp"

namespace percsweep {

enum class VertexId : std::uint32_t {};
enum class GraphId : std::uint32_t {};
enum class ClumpId : std::uint32_t {};

inline constexpr std::uint32_t kNullIndex = std::numeric_limits<std::uint32_t>::max();
inline constexpr VertexId kNoVertex{kNullIndex};
inline constexpr GraphId kNoGraph{kNullIndex};
inline constexpr ClumpId kNoClump{kNullIndex};

constexpr std::uint32_t index_of(VertexId v) { return static_cast<std::uint32_t>(v); }
constexpr std::uint32_t index_of(GraphId g) { return static_cast<std::uint32_t>(g); }
constexpr std::uint32_t index_of(ClumpId c) { return static_cast<std::uint32_t>(c); }

/// Number of boundary bits carried by a vertex: two per lattice dimension.
inline constexpr std::size_t kBoundaryCount = 4;
using BoundaryMask = std::uint8_t;
using BoundaryCounts = std::array<std::uint32_t, kBoundaryCount>;

/// Raised when a caller violates an operation's contract (self-loop, duplicate
/// edge, missing edge, stale handle, adjacency overflow).
class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when the fixed vertex arena has no free slot.
class ArenaExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EdgeOutcome { intra_cluster, fused };

struct InsertResult {
  EdgeOutcome outcome;
  GraphId root;  // surviving root after the insertion
};

struct Fragment {
  GraphId root;
  std::uint32_t order = 0;
  BoundaryCounts boundary_counts{};
  bool is_host = false;  // the original tree, left in place
};

/// Result of an edge or vertex removal. Extracted fragments come first in
/// extraction order; the host fragment, if it still holds vertices, is last.
struct FragmentReport {
  std::vector<Fragment> fragments;
  std::size_t extracted = 0;
  std::size_t rounds = 0;
  std::size_t merges = 0;
};

struct DynamicGraphTestAccess;

/// Undirected graph whose connected components are kept as trees of graph
/// records with vertex records as leaves. Edge insertion fuses trees by
/// order; edge and vertex removal identify fragments by clump accretion.
///
/// Statistics (order, boundary counts) are authoritative only at roots.
/// Single-threaded; not safe for concurrent mutation.
class DynamicGraph {
 public:
  DynamicGraph(std::size_t vertex_capacity, std::size_t max_degree);

  VertexId create_vertex(BoundaryMask mask = 0);

  /// Root of v's tree. Every record on the traced path is re-linked to the
  /// root and graph records left childless are pruned.
  GraphId find_root(VertexId v);

  /// Root of v's tree without modifying it.
  GraphId root_of(VertexId v) const;

  InsertResult insert_edge(VertexId a, VertexId b);
  FragmentReport remove_edge(VertexId a, VertexId b);
  FragmentReport remove_vertex(VertexId v);

  /// Breadth-first clump growth from `kernels`, all of which must live in the
  /// tree rooted at `host_root`. Completed clumps other than the last are
  /// extracted into new trees; the remainder stays under `host_root`.
  FragmentReport run_accretion(std::span<const VertexId> kernels, GraphId host_root);

  bool is_live(VertexId v) const;
  bool is_live(GraphId g) const;
  bool has_edge(VertexId a, VertexId b) const;
  std::span<const VertexId> neighbors(VertexId v) const;
  std::size_t degree(VertexId v) const;
  BoundaryMask boundary_mask(VertexId v) const;

  GraphId parent(VertexId v) const;
  GraphId parent(GraphId g) const;
  bool is_root(GraphId g) const;
  std::uint32_t child_count(GraphId g) const;
  std::uint32_t order(GraphId root) const;
  const BoundaryCounts& boundary_counts(GraphId root) const;

  /// Number of parent links from v to its root.
  std::size_t depth(VertexId v) const;

  std::size_t live_vertex_count() const { return vertices_.live(); }
  std::size_t live_graph_count() const { return graphs_.live(); }
  std::size_t live_clump_count() const { return clumps_.live(); }
  std::size_t vertex_capacity() const { return vertex_capacity_; }
  std::size_t max_degree() const { return max_degree_; }

  template <class F>
  void for_each_vertex(F&& f) const {
    for (std::uint32_t i = 0; i < vertices_.size(); ++i)
      if (vertices_.is_live(i)) f(VertexId{i});
  }

  template <class F>
  void for_each_graph(F&& f) const {
    for (std::uint32_t i = 0; i < graphs_.size(); ++i)
      if (graphs_.is_live(i)) f(GraphId{i});
  }

 private:
  friend struct DynamicGraphTestAccess;

  struct VertexRecord {
    GraphId parent = kNoGraph;
    ClumpId clump = kNoClump;
    BoundaryMask mask = 0;
    std::uint32_t degree = 0;
    VertexId frontier_next = kNoVertex;
    VertexId member_next = kNoVertex;
  };

  struct GraphRecord {
    GraphId parent = kNoGraph;
    std::uint32_t child_count = 0;
    std::uint32_t order = 0;
    BoundaryCounts boundary{};
  };

  struct ClumpRecord {
    ClumpId parent = kNoClump;
    std::uint32_t order = 0;
    std::uint32_t seq = 0;  // nucleation order, breaks merge ties
    VertexId frontier_head = kNoVertex;
    VertexId frontier_tail = kNoVertex;
    VertexId member_head = kNoVertex;
    VertexId member_tail = kNoVertex;
  };

  VertexRecord& vrec(VertexId v) { return vertices_[index_of(v)]; }
  const VertexRecord& vrec(VertexId v) const { return vertices_[index_of(v)]; }
  GraphRecord& grec(GraphId g) { return graphs_[index_of(g)]; }
  const GraphRecord& grec(GraphId g) const { return graphs_[index_of(g)]; }
  ClumpRecord& crec(ClumpId c) { return clumps_[index_of(c)]; }

  void require_live(VertexId v, const char* what) const;
  GraphId new_root();
  VertexId* adjacency(VertexId v) { return adjacency_.data() + std::size_t{index_of(v)} * max_degree_; }
  const VertexId* adjacency(VertexId v) const {
    return adjacency_.data() + std::size_t{index_of(v)} * max_degree_;
  }
  void unlink(VertexId from, VertexId to);

  // Drops one child from g, pruning every record left childless on the way up.
  void release_child(GraphId g);

  ClumpId find_clump(VertexId v);
  ClumpId nucleate(VertexId kernel, std::uint32_t seq);
  void label(VertexId v, ClumpId c);
  VertexId pop_frontier(ClumpId c);
  ClumpId merge_clumps(ClumpId a, ClumpId b);
  Fragment extract_clump(ClumpId c, GraphId host_root);

  std::size_t vertex_capacity_;
  std::size_t max_degree_;
  detail::Arena<VertexRecord> vertices_;
  detail::Arena<GraphRecord> graphs_;
  detail::Arena<ClumpRecord> clumps_;
  std::vector<VertexId> adjacency_;

  // Scratch buffers reused across operations.
  std::vector<GraphId> trace_path_;
  std::vector<ClumpId> clump_path_;
  std::vector<ClumpId> live_clumps_;
  std::vector<ClumpId> episode_clumps_;
  std::vector<VertexId> kernel_buffer_;
};

}  // namespace percsweep
