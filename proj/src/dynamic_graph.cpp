#include "percsweep/dynamic_graph.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace percsweep {

DynamicGraph::DynamicGraph(std::size_t vertex_capacity, std::size_t max_degree)
    : vertex_capacity_(vertex_capacity),
      max_degree_(max_degree),
      vertices_(vertex_capacity),
      adjacency_(vertex_capacity * max_degree, kNoVertex) {
  if (max_degree == 0) throw GraphError("max_degree must be positive");
}

void DynamicGraph::require_live(VertexId v, const char* what) const {
  if (!vertices_.is_live(index_of(v))) throw GraphError(std::string(what) + ": vertex is not live");
}

GraphId DynamicGraph::new_root() { return GraphId{graphs_.allocate()}; }

VertexId DynamicGraph::create_vertex(BoundaryMask mask) {
  const std::uint32_t slot = vertices_.allocate();
  if (slot == decltype(vertices_)::kNull) throw ArenaExhausted("vertex arena exhausted");
  const VertexId v{slot};
  const GraphId g = new_root();

  VertexRecord& rec = vrec(v);
  rec.parent = g;
  rec.mask = mask;

  GraphRecord& root = grec(g);
  root.child_count = 1;
  root.order = 1;
  for (std::size_t b = 0; b < kBoundaryCount; ++b) root.boundary[b] = (mask >> b) & 1u;
  return v;
}

GraphId DynamicGraph::find_root(VertexId v) {
  VertexRecord& rec = vrec(v);
  const GraphId first = rec.parent;

  trace_path_.clear();
  GraphId g = first;
  while (grec(g).parent != kNoGraph) {
    trace_path_.push_back(g);
    g = grec(g).parent;
  }
  const GraphId root = g;
  if (trace_path_.empty()) return root;

  --grec(first).child_count;
  ++grec(root).child_count;
  rec.parent = root;

  for (std::size_t i = 0; i < trace_path_.size(); ++i) {
    const GraphId node = trace_path_[i];
    GraphRecord& nrec = grec(node);
    const GraphId up = nrec.parent;
    if (nrec.child_count == 0) {
      --grec(up).child_count;
      graphs_.release(index_of(node));
    } else if (up != root) {
      --grec(up).child_count;
      ++grec(root).child_count;
      nrec.parent = root;
    }
  }
  return root;
}

GraphId DynamicGraph::root_of(VertexId v) const {
  GraphId g = vrec(v).parent;
  while (grec(g).parent != kNoGraph) g = grec(g).parent;
  return g;
}

std::size_t DynamicGraph::depth(VertexId v) const {
  std::size_t links = 1;
  GraphId g = vrec(v).parent;
  while (grec(g).parent != kNoGraph) {
    g = grec(g).parent;
    ++links;
  }
  return links;
}

bool DynamicGraph::has_edge(VertexId a, VertexId b) const {
  const VertexId* adj = adjacency(a);
  return std::find(adj, adj + vrec(a).degree, b) != adj + vrec(a).degree;
}

void DynamicGraph::unlink(VertexId from, VertexId to) {
  VertexId* adj = adjacency(from);
  std::uint32_t& deg = vrec(from).degree;
  VertexId* it = std::find(adj, adj + deg, to);
  *it = adj[deg - 1];
  adj[deg - 1] = kNoVertex;
  --deg;
}

InsertResult DynamicGraph::insert_edge(VertexId a, VertexId b) {
  require_live(a, "insert_edge");
  require_live(b, "insert_edge");
  if (a == b) throw GraphError("insert_edge: self-loop");
  if (has_edge(a, b)) throw GraphError("insert_edge: duplicate edge");
  if (vrec(a).degree >= max_degree_ || vrec(b).degree >= max_degree_)
    throw GraphError("insert_edge: adjacency capacity exceeded");

  adjacency(a)[vrec(a).degree++] = b;
  adjacency(b)[vrec(b).degree++] = a;

  GraphId keep = find_root(a);
  GraphId absorb = find_root(b);
  if (keep == absorb) return {EdgeOutcome::intra_cluster, keep};

  // Equal orders keep the first argument's root.
  if (grec(absorb).order > grec(keep).order) std::swap(keep, absorb);

  GraphRecord& survivor = grec(keep);
  GraphRecord& lesser = grec(absorb);
  lesser.parent = keep;
  ++survivor.child_count;
  survivor.order += lesser.order;
  for (std::size_t i = 0; i < kBoundaryCount; ++i) survivor.boundary[i] += lesser.boundary[i];
  return {EdgeOutcome::fused, keep};
}

void DynamicGraph::release_child(GraphId g) {
  while (g != kNoGraph) {
    GraphRecord& rec = grec(g);
    if (--rec.child_count > 0) return;
    const GraphId up = rec.parent;
    graphs_.release(index_of(g));
    g = up;
  }
}

FragmentReport DynamicGraph::remove_edge(VertexId a, VertexId b) {
  require_live(a, "remove_edge");
  require_live(b, "remove_edge");
  if (a == b || !has_edge(a, b)) throw GraphError("remove_edge: edge absent");

  unlink(a, b);
  unlink(b, a);
  const GraphId host = find_root(a);
  const std::array<VertexId, 2> kernels{a, b};
  return run_accretion(kernels, host);
}

FragmentReport DynamicGraph::remove_vertex(VertexId v) {
  require_live(v, "remove_vertex");
  const GraphId host = find_root(v);

  VertexRecord& rec = vrec(v);
  kernel_buffer_.assign(adjacency(v), adjacency(v) + rec.degree);
  for (VertexId u : kernel_buffer_) unlink(u, v);
  std::fill(adjacency(v), adjacency(v) + rec.degree, kNoVertex);
  rec.degree = 0;

  GraphRecord& hrec = grec(host);
  hrec.order -= 1;
  for (std::size_t b = 0; b < kBoundaryCount; ++b) hrec.boundary[b] -= (rec.mask >> b) & 1u;

  // find_root left v as a direct child of the host.
  rec.parent = kNoGraph;
  const bool host_empty = hrec.order == 0;
  release_child(host);
  vertices_.release(index_of(v));

  if (host_empty) return {};
  return run_accretion(kernel_buffer_, host);
}

ClumpId DynamicGraph::find_clump(VertexId v) {
  VertexRecord& rec = vrec(v);
  ClumpId c = rec.clump;
  clump_path_.clear();
  while (crec(c).parent != kNoClump) {
    clump_path_.push_back(c);
    c = crec(c).parent;
  }
  rec.clump = c;
  for (ClumpId node : clump_path_) crec(node).parent = c;
  return c;
}

void DynamicGraph::label(VertexId v, ClumpId c) {
  VertexRecord& rec = vrec(v);
  ClumpRecord& clump = crec(c);
  rec.clump = c;
  ++clump.order;

  rec.frontier_next = kNoVertex;
  if (clump.frontier_tail == kNoVertex) {
    clump.frontier_head = v;
  } else {
    vrec(clump.frontier_tail).frontier_next = v;
  }
  clump.frontier_tail = v;

  rec.member_next = kNoVertex;
  if (clump.member_tail == kNoVertex) {
    clump.member_head = v;
  } else {
    vrec(clump.member_tail).member_next = v;
  }
  clump.member_tail = v;
}

ClumpId DynamicGraph::nucleate(VertexId kernel, std::uint32_t seq) {
  const ClumpId c{clumps_.allocate()};
  crec(c).seq = seq;
  episode_clumps_.push_back(c);
  label(kernel, c);
  return c;
}

VertexId DynamicGraph::pop_frontier(ClumpId c) {
  ClumpRecord& clump = crec(c);
  const VertexId x = clump.frontier_head;
  if (x == kNoVertex) return x;
  clump.frontier_head = vrec(x).frontier_next;
  if (clump.frontier_head == kNoVertex) clump.frontier_tail = kNoVertex;
  vrec(x).frontier_next = kNoVertex;
  return x;
}

ClumpId DynamicGraph::merge_clumps(ClumpId a, ClumpId b) {
  ClumpId keep = a;
  ClumpId absorb = b;
  const ClumpRecord& ra = crec(a);
  const ClumpRecord& rb = crec(b);
  if (rb.order > ra.order || (rb.order == ra.order && rb.seq < ra.seq)) std::swap(keep, absorb);

  ClumpRecord& survivor = crec(keep);
  ClumpRecord& lesser = crec(absorb);
  lesser.parent = keep;
  survivor.order += lesser.order;

  if (lesser.frontier_head != kNoVertex) {
    if (survivor.frontier_tail == kNoVertex) {
      survivor.frontier_head = lesser.frontier_head;
    } else {
      vrec(survivor.frontier_tail).frontier_next = lesser.frontier_head;
    }
    survivor.frontier_tail = lesser.frontier_tail;
  }
  if (lesser.member_head != kNoVertex) {
    if (survivor.member_tail == kNoVertex) {
      survivor.member_head = lesser.member_head;
    } else {
      vrec(survivor.member_tail).member_next = lesser.member_head;
    }
    survivor.member_tail = lesser.member_tail;
  }
  lesser.frontier_head = lesser.frontier_tail = kNoVertex;
  lesser.member_head = lesser.member_tail = kNoVertex;
  return keep;
}

Fragment DynamicGraph::extract_clump(ClumpId c, GraphId host_root) {
  const GraphId root = new_root();
  Fragment frag;
  frag.root = root;

  for (VertexId m = crec(c).member_head; m != kNoVertex;) {
    VertexRecord& rec = vrec(m);
    const VertexId next = rec.member_next;
    release_child(rec.parent);
    rec.parent = root;
    rec.clump = kNoClump;
    rec.member_next = kNoVertex;
    ++frag.order;
    for (std::size_t b = 0; b < kBoundaryCount; ++b) frag.boundary_counts[b] += (rec.mask >> b) & 1u;
    m = next;
  }

  GraphRecord& rrec = grec(root);
  rrec.child_count = frag.order;
  rrec.order = frag.order;
  rrec.boundary = frag.boundary_counts;

  GraphRecord& hrec = grec(host_root);
  hrec.order -= frag.order;
  for (std::size_t b = 0; b < kBoundaryCount; ++b) hrec.boundary[b] -= frag.boundary_counts[b];

  ClumpRecord& clump = crec(c);
  clump.member_head = clump.member_tail = kNoVertex;
  clump.frontier_head = clump.frontier_tail = kNoVertex;
  clump.order = 0;
  return frag;
}

FragmentReport DynamicGraph::run_accretion(std::span<const VertexId> kernels, GraphId host_root) {
  FragmentReport report;
  live_clumps_.clear();
  episode_clumps_.clear();

  std::uint32_t seq = 0;
  for (VertexId k : kernels) {
    if (vrec(k).clump != kNoClump) continue;
    live_clumps_.push_back(nucleate(k, seq++));
  }
  std::size_t live = live_clumps_.size();

  auto complete = [&](ClumpId& slot, ClumpId c) {
    report.fragments.push_back(extract_clump(c, host_root));
    ++report.extracted;
    --live;
    slot = kNoClump;
  };

  // A kernel with no remaining edges is a finished fragment on its own.
  for (ClumpId& c : live_clumps_) {
    if (live <= 1) break;
    if (vrec(crec(c).member_head).degree == 0) complete(c, c);
  }

  while (live > 1) {
    ++report.rounds;
    for (std::size_t i = 0; i < live_clumps_.size() && live > 1; ++i) {
      const ClumpId c = live_clumps_[i];
      if (c == kNoClump || crec(c).parent != kNoClump) continue;

      ClumpId current = c;
      const VertexId x = pop_frontier(c);
      if (x != kNoVertex) {
        for (VertexId y : neighbors(x)) {
          if (vrec(y).clump == kNoClump) {
            label(y, current);
            continue;
          }
          const ClumpId other = find_clump(y);
          if (other != current) {
            current = merge_clumps(current, other);
            ++report.merges;
            --live;
          }
        }
      }
      if (live > 1 && crec(current).frontier_head == kNoVertex) {
        auto slot = std::find(live_clumps_.begin(), live_clumps_.end(), current);
        complete(*slot, current);
      }
    }
    std::erase_if(live_clumps_,
                  [&](ClumpId c) { return c == kNoClump || crec(c).parent != kNoClump; });
  }

  for (ClumpId c : live_clumps_) {
    if (c == kNoClump || crec(c).parent != kNoClump) continue;
    for (VertexId m = crec(c).member_head; m != kNoVertex;) {
      VertexRecord& rec = vrec(m);
      const VertexId next = rec.member_next;
      rec.clump = kNoClump;
      rec.member_next = kNoVertex;
      rec.frontier_next = kNoVertex;
      m = next;
    }
  }
  for (ClumpId c : episode_clumps_) clumps_.release(index_of(c));
  episode_clumps_.clear();
  live_clumps_.clear();

  const GraphRecord& host = grec(host_root);
  if (host.order > 0) report.fragments.push_back({host_root, host.order, host.boundary, true});
  return report;
}

bool DynamicGraph::is_live(VertexId v) const { return vertices_.is_live(index_of(v)); }
bool DynamicGraph::is_live(GraphId g) const { return graphs_.is_live(index_of(g)); }

std::span<const VertexId> DynamicGraph::neighbors(VertexId v) const {
  return {adjacency(v), vrec(v).degree};
}

std::size_t DynamicGraph::degree(VertexId v) const { return vrec(v).degree; }
BoundaryMask DynamicGraph::boundary_mask(VertexId v) const { return vrec(v).mask; }
GraphId DynamicGraph::parent(VertexId v) const { return vrec(v).parent; }
GraphId DynamicGraph::parent(GraphId g) const { return grec(g).parent; }
bool DynamicGraph::is_root(GraphId g) const { return grec(g).parent == kNoGraph; }
std::uint32_t DynamicGraph::child_count(GraphId g) const { return grec(g).child_count; }
std::uint32_t DynamicGraph::order(GraphId root) const { return grec(root).order; }
const BoundaryCounts& DynamicGraph::boundary_counts(GraphId root) const { return grec(root).boundary; }

}  // namespace percsweep
