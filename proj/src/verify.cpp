#include "percsweep/verify.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "percsweep/oracle.hpp"
#include "percsweep/rng.hpp"
#include "percsweep/sweep.hpp"

namespace percsweep {

std::string check_graph_hygiene(const DynamicGraph& graph) {
  if (graph.live_clump_count() != 0) return "clump records outstanding outside accretion";

  std::vector<std::uint32_t> children;
  auto count_child = [&](GraphId parent) {
    const std::uint32_t i = index_of(parent);
    if (i >= children.size()) children.resize(i + 1, 0);
    ++children[i];
  };
  std::string problem;
  graph.for_each_vertex([&](VertexId v) {
    const GraphId p = graph.parent(v);
    if (p == kNoGraph || !graph.is_live(p)) {
      problem = "vertex with a dead or missing parent";
      return;
    }
    count_child(p);
  });
  if (!problem.empty()) return problem;
  graph.for_each_graph([&](GraphId g) {
    const GraphId p = graph.parent(g);
    if (p == kNoGraph) return;
    if (!graph.is_live(p)) {
      problem = "graph record with a dead parent";
      return;
    }
    count_child(p);
  });
  if (!problem.empty()) return problem;

  std::size_t with_children = 0;
  graph.for_each_graph([&](GraphId g) {
    const std::uint32_t i = index_of(g);
    const std::uint32_t actual = i < children.size() ? children[i] : 0;
    if (actual != graph.child_count(g) && problem.empty()) {
      std::ostringstream msg;
      msg << "graph record " << i << " child_count " << graph.child_count(g) << " but has " << actual;
      problem = msg.str();
    }
    if (graph.child_count(g) > 0) ++with_children;
  });
  if (!problem.empty()) return problem;
  if (with_children != graph.live_graph_count()) return "live graph record with no children";
  return {};
}

namespace {

SuiteResult fail(std::string name, std::string detail) { return {std::move(name), false, std::move(detail)}; }

}  // namespace

SuiteResult verify_graph_oracle(const VerifyScale& scale) {
  const std::string name = "graph-oracle";
  DynamicGraph graph(scale.graph_vertices, scale.graph_max_degree);
  Mt19937 rng(static_cast<std::uint32_t>(derive_seed(scale.seed, 100)));
  std::vector<VertexId> live;
  std::vector<std::uint32_t> slot(scale.graph_vertices, kNullIndex);

  auto add_live = [&](VertexId v) {
    slot[index_of(v)] = static_cast<std::uint32_t>(live.size());
    live.push_back(v);
  };
  auto drop_live = [&](VertexId v) {
    const std::uint32_t i = slot[index_of(v)];
    live[i] = live.back();
    slot[index_of(live[i])] = i;
    live.pop_back();
    slot[index_of(v)] = kNullIndex;
  };
  auto random_live = [&] { return live[bounded_uniform(rng, live.size())]; };

  const std::size_t check_every = std::max<std::size_t>(1, scale.check_every * 10);
  std::size_t inserts = 0, edge_removals = 0, vertex_removals = 0;
  for (std::size_t op = 1; op <= scale.graph_ops; ++op) {
    const std::uint32_t roll = bounded_uniform(rng, 100);
    if (live.size() < 2 || (roll < 15 && live.size() < scale.graph_vertices)) {
      add_live(graph.create_vertex(static_cast<BoundaryMask>(bounded_uniform(rng, 16))));
    } else if (roll < 60) {
      const VertexId a = random_live();
      const VertexId b = random_live();
      if (a != b && !graph.has_edge(a, b) && graph.degree(a) < scale.graph_max_degree &&
          graph.degree(b) < scale.graph_max_degree) {
        graph.insert_edge(a, b);
        ++inserts;
      }
    } else if (roll < 88) {
      const VertexId a = random_live();
      if (graph.degree(a) > 0) {
        const auto nbrs = graph.neighbors(a);
        graph.remove_edge(a, nbrs[bounded_uniform(rng, nbrs.size())]);
        ++edge_removals;
      }
    } else {
      const VertexId v = random_live();
      drop_live(v);
      graph.remove_vertex(v);
      ++vertex_removals;
    }

    if (op % check_every == 0 || op == scale.graph_ops) {
      if (std::string h = check_graph_hygiene(graph); !h.empty())
        return fail(name, "op " + std::to_string(op) + ": " + h);
      if (std::string m = oracle::compare_with_graph(graph, oracle::bfs_partition(graph)); !m.empty())
        return fail(name, "op " + std::to_string(op) + ": " + m);
    }
  }
  std::ostringstream detail;
  detail << scale.graph_ops << " ops (" << inserts << " inserts, " << edge_removals << " edge removals, "
         << vertex_removals << " vertex removals), " << live.size() << " vertices at end";
  return {name, true, detail.str()};
}

namespace {

// Random occupy/deoccupy walk biased towards half filling.
template <class Check>
std::string lattice_walk(SquareLattice& lattice, std::size_t steps, std::uint64_t seed,
                         std::size_t check_every, Check&& check) {
  Mt19937 rng(static_cast<std::uint32_t>(seed));
  SitePicker picker(lattice.site_count());
  const std::size_t sites = lattice.site_count();
  for (std::size_t step = 1; step <= steps; ++step) {
    const bool up = bounded_uniform(rng, sites) >= lattice.occupied_count();
    if (up && lattice.occupied_count() < sites) {
      lattice.occupy(picker.pick_unoccupied(rng));
    } else if (lattice.occupied_count() > 0) {
      lattice.deoccupy(picker.pick_occupied(rng));
    }
    if (step % check_every == 0 || step == steps) {
      if (std::string m = check(lattice); !m.empty()) return "step " + std::to_string(step) + ": " + m;
    }
  }
  return {};
}

}  // namespace

SuiteResult verify_lattice_oracle(const VerifyScale& scale) {
  const std::string name = "lattice-oracle";
  SquareLattice lattice(scale.lattice_side);
  lattice.inject_fault(scale.fault);
  const std::string m = lattice_walk(lattice, scale.lattice_steps, derive_seed(scale.seed, 200),
                                     std::max<std::size_t>(1, scale.check_every), [](SquareLattice& l) {
                                       if (std::string h = check_graph_hygiene(l.graph()); !h.empty()) return h;
                                       return oracle::compare_with_lattice(l, oracle::bfs_partition(l));
                                     });
  if (!m.empty()) return fail(name, m);
  std::ostringstream detail;
  detail << scale.lattice_steps << " steps on L=" << scale.lattice_side << ", BFS re-check every "
         << scale.check_every;
  return {name, true, detail.str()};
}

SuiteResult verify_tally_census(const VerifyScale& scale) {
  const std::string name = "tally-census";
  SquareLattice lattice(8);
  lattice.inject_fault(scale.fault);
  const std::size_t steps = std::max<std::size_t>(1000, scale.lattice_steps / 10);
  const std::string m = lattice_walk(lattice, steps, derive_seed(scale.seed, 300), 1, [](SquareLattice& l) {
    if (l.tally() != l.rescan_tally()) return std::string("tally differs from root re-scan");
    if (l.tally() != oracle::census(oracle::bfs_partition(l)))
      return std::string("tally differs from BFS census");
    for (std::int64_t c : l.tally().counts)
      if (c < 0) return std::string("negative class count");
    return std::string();
  });
  if (!m.empty()) return fail(name, m);
  return {name, true, std::to_string(steps) + " steps on L=8, census after every step"};
}

std::vector<UniformityCheck> uniform_visitation(std::uint64_t cycles, std::uint64_t seed) {
  constexpr std::uint32_t kSide = 2;
  constexpr std::size_t kSites = 4;
  std::vector<std::array<std::uint64_t, 16>> visits(kSites + 1);
  for (auto& v : visits) v.fill(0);

  SweepEngine engine(kSide, RngConfig{RngKind::mt19937, seed, Pairing::single, 2});
  SweepPlan plan;
  plan.n_lo = 0;
  plan.n_hi = kSites;
  plan.cycles = cycles;
  SweepCounters counters;
  engine.run(plan, counters, nullptr, [&](const SquareLattice& lattice) {
    unsigned mask = 0;
    for (SiteIndex s = 0; s < kSites; ++s)
      if (lattice.is_occupied(s)) mask |= 1u << s;
    ++visits[lattice.occupied_count()][mask];
  });

  std::vector<UniformityCheck> out;
  for (std::size_t n = 0; n <= kSites; ++n) {
    UniformityCheck check;
    check.n = n;
    check.configurations = oracle::binomial(kSites, n);
    for (std::uint64_t c : visits[n]) check.visits += c;
    if (check.configurations > 1 && check.visits > 0) {
      const double expected = static_cast<double>(check.visits) / static_cast<double>(check.configurations);
      for (unsigned mask = 0; mask < 16; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
        const double d = static_cast<double>(visits[n][mask]) - expected;
        check.chi_square += d * d / expected;
      }
      const double df = static_cast<double>(check.configurations - 1);
      check.threshold = df + 4.0 * std::sqrt(2.0 * df);
      check.passed = check.chi_square <= check.threshold;
    }
    out.push_back(check);
  }
  return out;
}

SuiteResult verify_uniformity(const VerifyScale& scale) {
  const std::string name = "uniformity";
  std::ostringstream detail;
  bool ok = true;
  for (const UniformityCheck& c : uniform_visitation(scale.uniform_cycles, derive_seed(scale.seed, 400))) {
    if (c.configurations <= 1) continue;
    detail << "n=" << c.n << " chi2=" << c.chi_square << "/" << c.threshold << ' ';
    ok = ok && c.passed;
  }
  return {name, ok, detail.str()};
}

SuiteResult verify_rng(const VerifyScale& scale) {
  const std::string name = "rng";
  for (std::uint32_t seed : {5489u, 1u, 42u, static_cast<std::uint32_t>(scale.seed)}) {
    Mt19937 ours(seed);
    std::mt19937 reference(seed);
    for (int i = 0; i < 10000; ++i)
      if (ours() != reference()) return fail(name, "MT19937 diverges from std::mt19937 for seed " + std::to_string(seed));
  }
  Mt19937 canonical;
  std::uint32_t word = 0;
  for (int i = 0; i < 10000; ++i) word = canonical();
  if (word != 4123659995u) return fail(name, "10000th MT19937 output after seed 5489 is " + std::to_string(word));

  std::array<std::uint32_t, LaggedFibonacci::kLongLag> init{};
  Mt19937 filler(7);
  for (auto& w : init) w = filler();
  std::vector<std::uint32_t> seq(init.begin(), init.end());
  LaggedFibonacci lfg(init, 1);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t n = seq.size();
    seq.push_back(seq[n - LaggedFibonacci::kShortLag] + seq[n - LaggedFibonacci::kLongLag]);
    if (lfg() != seq.back()) return fail(name, "lagged-Fibonacci recurrence mismatch");
  }
  return {name, true, "MT19937 matches std::mt19937 on 4 seeds x 10^4 words; lagged-Fibonacci recurrence holds"};
}

std::vector<SuiteResult> run_verification(const VerifyScale& scale) {
  return {verify_graph_oracle(scale), verify_lattice_oracle(scale), verify_tally_census(scale),
          verify_uniformity(scale), verify_rng(scale)};
}

}  // namespace percsweep
