#include "percsweep/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

namespace percsweep::oracle {

ComponentPartition bfs_partition(const DynamicGraph& graph) {
  ComponentPartition part;
  part.label.assign(graph.vertex_capacity(), kUnlabelled);

  std::vector<VertexId> queue;
  graph.for_each_vertex([&](VertexId start) {
    if (part.label[index_of(start)] != kUnlabelled) return;
    const auto id = static_cast<std::uint32_t>(part.order.size());
    part.order.push_back(0);
    part.boundary.push_back({});
    queue.assign(1, start);
    part.label[index_of(start)] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      ++part.order[id];
      const BoundaryMask m = graph.boundary_mask(v);
      for (std::size_t b = 0; b < kBoundaryCount; ++b) part.boundary[id][b] += (m >> b) & 1u;
      for (VertexId u : graph.neighbors(v)) {
        if (part.label[index_of(u)] != kUnlabelled) continue;
        part.label[index_of(u)] = id;
        queue.push_back(u);
      }
    }
  });
  return part;
}

namespace {

// BFS over an occupancy grid; shared by the lattice oracle and enumeration.
template <class Occupied>
ComponentPartition grid_partition(std::uint32_t side, Occupied&& occupied) {
  const std::size_t sites = std::size_t{side} * side;
  ComponentPartition part;
  part.label.assign(sites, kUnlabelled);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t start = 0; start < sites; ++start) {
    if (!occupied(start) || part.label[start] != kUnlabelled) continue;
    const auto id = static_cast<std::uint32_t>(part.order.size());
    part.order.push_back(0);
    part.boundary.push_back({});
    queue.assign(1, start);
    part.label[start] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t s = queue[head];
      const std::uint32_t x = s % side, y = s / side;
      ++part.order[id];
      if (x == 0) ++part.boundary[id][boundary::kLeft];
      if (x == side - 1) ++part.boundary[id][boundary::kRight];
      if (y == 0) ++part.boundary[id][boundary::kBottom];
      if (y == side - 1) ++part.boundary[id][boundary::kTop];
      const std::uint32_t cand[4] = {x > 0 ? s - 1 : kUnlabelled, x + 1 < side ? s + 1 : kUnlabelled,
                                     y > 0 ? s - side : kUnlabelled, y + 1 < side ? s + side : kUnlabelled};
      for (std::uint32_t u : cand) {
        if (u == kUnlabelled || !occupied(u) || part.label[u] != kUnlabelled) continue;
        part.label[u] = id;
        queue.push_back(u);
      }
    }
  }
  return part;
}

}  // namespace

ComponentPartition bfs_partition(const SquareLattice& lattice) {
  return grid_partition(lattice.side(), [&](std::uint32_t s) { return lattice.is_occupied(s); });
}

SpanningTally census(const ComponentPartition& partition) {
  SpanningTally t;
  for (const BoundaryCounts& b : partition.boundary) ++t[span_class_of(b)];
  return t;
}

namespace {

// Label i of the partition must correspond to exactly one root, and back.
template <class RootOf>
std::string compare_roots(const DynamicGraph& graph, const ComponentPartition& part, std::size_t items,
                          RootOf&& root_of) {
  std::vector<GraphId> root_for_label(part.order.size(), kNoGraph);
  std::vector<std::uint32_t> label_for_root;
  for (std::size_t i = 0; i < items; ++i) {
    const std::uint32_t label = i < part.label.size() ? part.label[i] : kUnlabelled;
    const std::optional<GraphId> root = root_of(i);
    if (!root && label == kUnlabelled) continue;
    std::ostringstream msg;
    if (!root || label == kUnlabelled) {
      msg << "item " << i << " present in only one of graph and oracle";
      return msg.str();
    }
    const std::uint32_t r = index_of(*root);
    if (r >= label_for_root.size()) label_for_root.resize(r + 1, kUnlabelled);
    if (root_for_label[label] == kNoGraph) root_for_label[label] = *root;
    if (label_for_root[r] == kUnlabelled) label_for_root[r] = label;
    if (root_for_label[label] != *root || label_for_root[r] != label) {
      msg << "item " << i << ": partition disagrees with graph roots";
      return msg.str();
    }
  }
  for (std::size_t label = 0; label < part.order.size(); ++label) {
    const GraphId root = root_for_label[label];
    std::ostringstream msg;
    if (root == kNoGraph) {
      msg << "component " << label << " has no root";
      return msg.str();
    }
    if (graph.order(root) != part.order[label]) {
      msg << "component " << label << ": root order " << graph.order(root) << " vs BFS "
          << part.order[label];
      return msg.str();
    }
    if (graph.boundary_counts(root) != part.boundary[label]) {
      msg << "component " << label << ": boundary counts differ";
      return msg.str();
    }
  }
  return {};
}

}  // namespace

std::string compare_with_graph(DynamicGraph& graph, const ComponentPartition& partition) {
  const std::size_t items = std::max<std::size_t>(partition.label.size(), graph.vertex_capacity());
  return compare_roots(graph, partition, items, [&](std::size_t i) -> std::optional<GraphId> {
    const VertexId v{static_cast<std::uint32_t>(i)};
    if (i >= graph.vertex_capacity() || !graph.is_live(v)) return std::nullopt;
    return graph.find_root(v);
  });
}

std::string compare_with_lattice(const SquareLattice& lattice, const ComponentPartition& partition) {
  const DynamicGraph& graph = lattice.graph();
  if (graph.live_vertex_count() != lattice.occupied_count()) return "vertex count differs from occupancy";
  std::string msg = compare_roots(graph, partition, lattice.site_count(),
                                  [&](std::size_t i) -> std::optional<GraphId> {
                                    const VertexId v = lattice.vertex_at(static_cast<SiteIndex>(i));
                                    if (v == kNoVertex) return std::nullopt;
                                    return graph.root_of(v);
                                  });
  if (!msg.empty()) return msg;
  if (lattice.tally() != census(partition)) return "incremental spanning tally differs from BFS census";
  return {};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

EnumerationCounts enumerate_configurations(std::uint32_t side, std::uint32_t n, std::uint64_t budget) {
  const std::uint32_t sites = side * side;
  if (side < 2) throw std::invalid_argument("lattice side must be at least 2");
  if (n > sites) throw std::invalid_argument("n exceeds the number of sites");
  if (binomial(sites, n) > budget) throw BudgetExceeded("enumeration exceeds budget");

  EnumerationCounts counts;
  std::vector<std::uint32_t> combo(n);
  std::iota(combo.begin(), combo.end(), 0u);
  std::vector<std::uint8_t> occupied(sites, 0);

  for (;;) {
    std::fill(occupied.begin(), occupied.end(), 0);
    for (std::uint32_t s : combo) occupied[s] = 1;
    const ComponentPartition part = grid_partition(side, [&](std::uint32_t s) { return occupied[s] != 0; });
    bool x = false, y = false;
    for (const BoundaryCounts& b : part.boundary) {
      const SpanClass c = span_class_of(b);
      x = x || c == SpanClass::x_only || c == SpanClass::both;
      y = y || c == SpanClass::y_only || c == SpanClass::both;
    }
    ++counts.s0;
    counts.s1 += (x || y);
    counts.s2 += (x && y);
    counts.x_span += x;
    counts.y_span += y;

    // Next combination in lexicographic order.
    std::int64_t i = static_cast<std::int64_t>(n) - 1;
    while (i >= 0 && combo[i] == sites - n + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++combo[i];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) combo[j] = combo[j - 1] + 1;
  }
  return counts;
}

ExactRatio exhaustive_R(std::uint32_t side, std::uint32_t n, std::uint64_t budget) {
  const EnumerationCounts c = enumerate_configurations(side, n, budget);
  std::uint64_t num = c.s1 + c.s2;
  std::uint64_t den = 2 * c.s0;
  const std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace percsweep::oracle
