#include "percsweep/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace percsweep {

SpanClass span_class_of(const BoundaryCounts& counts) {
  const bool x = counts[boundary::kLeft] > 0 && counts[boundary::kRight] > 0;
  const bool y = counts[boundary::kBottom] > 0 && counts[boundary::kTop] > 0;
  return static_cast<SpanClass>((x ? 1 : 0) | (y ? 2 : 0));
}

const char* to_string(SpanClass c) {
  switch (c) {
    case SpanClass::neither: return "neither";
    case SpanClass::x_only: return "x-only";
    case SpanClass::y_only: return "y-only";
    case SpanClass::both: return "both";
  }
  return "?";
}

bool SpanningTally::spans(int dims) const {
  if (dims == 2) return (*this)[SpanClass::both] > 0;
  return (*this)[SpanClass::x_only] + (*this)[SpanClass::y_only] + (*this)[SpanClass::both] > 0;
}

SquareLattice::SquareLattice(std::uint32_t side)
    : side_(side),
      graph_(std::size_t{side} * side, 4),
      site_vertex_(std::size_t{side} * side, kNoVertex),
      vertex_site_(std::size_t{side} * side, kNullIndex) {
  if (side < 2) throw LatticeError("lattice side must be at least 2");
}

SiteIndex SquareLattice::index_of_site(Site s) const {
  if (s.x >= side_ || s.y >= side_) throw LatticeError("site coordinates out of range");
  return s.y * side_ + s.x;
}

BoundaryMask SquareLattice::boundary_mask_of(Site s) const {
  if (s.x >= side_ || s.y >= side_) throw LatticeError("site coordinates out of range");
  BoundaryMask mask = 0;
  if (s.x == 0) mask |= boundary::bit(boundary::kLeft);
  if (s.x == side_ - 1) mask |= boundary::bit(boundary::kRight);
  if (s.y == 0) mask |= boundary::bit(boundary::kBottom);
  if (s.y == side_ - 1) mask |= boundary::bit(boundary::kTop);
  return mask;
}

SpanClass SquareLattice::spanning_class(GraphId root) const {
  return span_class_of(graph_.boundary_counts(root));
}

bool SquareLattice::is_occupied(SiteIndex i) const {
  if (i >= site_count()) throw LatticeError("site index out of range");
  return site_vertex_[i] != kNoVertex;
}

std::size_t SquareLattice::neighbor_sites(SiteIndex i, std::array<SiteIndex, 4>& out) const {
  const std::uint32_t x = i % side_;
  const std::uint32_t y = i / side_;
  std::size_t count = 0;
  if (x > 0) out[count++] = i - 1;
  if (x + 1 < side_) out[count++] = i + 1;
  if (y > 0) out[count++] = i - side_;
  if (y + 1 < side_) out[count++] = i + side_;
  return count;
}

void SquareLattice::count_out(GraphId root) {
  if (fault_ == LatticeFault::skip_tally_decrement) return;
  --tally_[spanning_class(root)];
}

std::size_t SquareLattice::occupy(SiteIndex i) {
  if (is_occupied(i)) throw LatticeError("occupy: site already occupied");

  std::array<SiteIndex, 4> nbrs{};
  const std::size_t count = neighbor_sites(i, nbrs);

  // Retire the class of every distinct pre-existing cluster that will fuse.
  std::array<GraphId, 4> roots{};
  std::size_t distinct = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const VertexId u = site_vertex_[nbrs[k]];
    if (u == kNoVertex) continue;
    const GraphId r = graph_.find_root(u);
    if (std::find(roots.begin(), roots.begin() + distinct, r) == roots.begin() + distinct) {
      roots[distinct++] = r;
      count_out(r);
    }
  }

  const VertexId v = graph_.create_vertex(boundary_mask_of(site_of_index(i)));
  site_vertex_[i] = v;
  vertex_site_[percsweep::index_of(v)] = i;

  GraphId root = graph_.find_root(v);
  for (std::size_t k = 0; k < count; ++k) {
    const VertexId u = site_vertex_[nbrs[k]];
    if (u != kNoVertex) root = graph_.insert_edge(v, u).root;
  }
  count_in(spanning_class(root));
  return ++occupied_;
}

std::size_t SquareLattice::deoccupy(SiteIndex i) {
  if (!is_occupied(i)) throw LatticeError("deoccupy: site not occupied");
  const VertexId v = site_vertex_[i];

  count_out(graph_.find_root(v));
  const FragmentReport report = graph_.remove_vertex(v);
  for (const Fragment& f : report.fragments) count_in(span_class_of(f.boundary_counts));

  site_vertex_[i] = kNoVertex;
  vertex_site_[percsweep::index_of(v)] = kNullIndex;
  return --occupied_;
}

SpanningTally SquareLattice::rescan_tally() const {
  SpanningTally t;
  std::vector<std::uint8_t> seen;
  graph_.for_each_vertex([&](VertexId v) {
    const GraphId r = graph_.root_of(v);
    const std::size_t k = percsweep::index_of(r);
    if (k >= seen.size()) seen.resize(k + 1, 0);
    if (seen[k]) return;
    seen[k] = 1;
    ++t[spanning_class(r)];
  });
  return t;
}

std::string SquareLattice::snapshot() const {
  std::ostringstream out;
  out << "L " << side_ << '\n';
  for (SiteIndex i = 0; i < site_count(); ++i)
    if (site_vertex_[i] != kNoVertex) out << i << '\n';
  return out.str();
}

SquareLattice SquareLattice::from_snapshot(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  std::uint32_t side = 0;
  if (!(in >> tag >> side) || tag != "L") throw LatticeError("snapshot: expected header 'L <side>'");
  SquareLattice lattice(side);
  std::uint64_t index = 0;
  while (in >> index) {
    if (index >= lattice.site_count()) throw LatticeError("snapshot: site index out of range");
    lattice.occupy(static_cast<SiteIndex>(index));
  }
  if (!in.eof()) throw LatticeError("snapshot: malformed site index");
  return lattice;
}

}  // namespace percsweep
