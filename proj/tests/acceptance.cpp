// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "percsweep/analysis.hpp"
#include "percsweep/commands.hpp"
#include "percsweep/oracle.hpp"
#include "percsweep/verify.hpp"
#include "support/mt19937ar.hpp"
#include "support/reference_curve.hpp"

using namespace percsweep;

namespace {

constexpr double kReferencePc = 0.5927460;

struct Outcome {
  bool passed;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %s: %s [%.1fs]\n", out.passed ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
  std::fflush(stdout);
  if (!out.passed) ++failures;
}

Outcome oracle_equivalence() {
  VerifyScale scale;
  scale.lattice_side = 16;
  scale.lattice_steps = 100000;
  scale.check_every = 100;
  const SuiteResult r = verify_lattice_oracle(scale);
  return {r.passed, r.detail};
}

SweepCounters difference(const SweepCounters& later, const SweepCounters& earlier) {
  SweepCounters d(later.side(), later.n_lo(), later.n_hi());
  for (std::size_t n = later.n_lo(); n <= later.n_hi(); ++n)
    d.set(n, later.s0(n) - earlier.s0(n), later.s1(n) - earlier.s1(n), later.s2(n) - earlier.s2(n));
  return d;
}

// Full-range sweeps in batches; the batch-means error absorbs the
// correlation between successive samples.
Outcome exhaustive_agreement(std::uint32_t side, std::uint64_t batches, std::uint64_t cycles_per_batch) {
  const std::size_t sites = std::size_t{side} * side;
  SweepEngine engine(side, RngConfig{RngKind::mt19937, derive_seed(17, side), Pairing::single, 2});
  SweepPlan plan;
  plan.n_lo = 0;
  plan.n_hi = sites;
  plan.cycles = cycles_per_batch;
  std::vector<SweepCounters> parts;
  SweepCounters total(side, 0, sites);
  for (std::uint64_t b = 0; b < batches; ++b) {
    SweepCounters batch(side, 0, sites);
    engine.run(plan, batch);
    total += batch;
    parts.push_back(batch);
  }

  std::ostringstream detail;
  bool ok = true;
  double worst = 0.0;
  std::uint64_t min_samples = UINT64_MAX;
  for (std::size_t n = 0; n <= sites; ++n) {
    const oracle::ExactRatio exact = oracle::exhaustive_R(side, static_cast<std::uint32_t>(n));
    const double r = estimate_R(total, n)->value;
    const double se = *batch_means_stderr(parts, n);
    const double dev = std::abs(r - exact.value());
    min_samples = std::min(min_samples, total.s0(n));
    const bool pass = se > 0 ? dev <= 4.0 * se : dev == 0.0;
    if (se > 0) worst = std::max(worst, dev / se);
    if (!pass) {
      ok = false;
      detail << "n=" << n << " R=" << r << " exact=" << exact.num << "/" << exact.den << " se=" << se << "; ";
    }
  }
  detail << "L=" << side << " all n, min samples/n " << min_samples << ", worst |dev|/se " << format_real(worst, 3);
  if (min_samples < 1000000) {
    ok = false;
    detail << " (too few samples)";
  }
  return {ok, detail.str()};
}

Outcome uniform_visits() {
  std::ostringstream detail;
  bool ok = true;
  for (const UniformityCheck& c : uniform_visitation(1000000, 29)) {
    if (c.configurations <= 1) continue;
    detail << "n=" << c.n << " chi2=" << format_real(c.chi_square, 3) << "<=" << format_real(c.threshold, 3) << " ";
    ok = ok && c.passed;
  }
  return {ok, "L=2, 1e6 cycles: " + detail.str()};
}

Outcome desk_scale() {
  RunConfig config;
  config.side = 64;
  config.auto_window = true;
  config.cycles = 20000;
  config.seed = 1;
  config.checkpoint_interval = 1000;
  std::vector<SweepCounters> snapshots;
  const SweepOutcome run = run_sweep(config, nullptr, [&](const Checkpoint& cp) { snapshots.push_back(cp.counters); });
  snapshots.push_back(run.checkpoint.counters);

  const EstimateOutcome est = run_estimate(run.checkpoint, CrossingCriterion{});
  if (!est.estimate) return {false, "no crossing: " + est.report.substr(est.report.rfind('#'))};
  const ThresholdEstimate& e = *est.estimate;
  const double dev = e.p_c - kReferencePc;

  std::vector<SweepCounters> batches;
  for (std::size_t i = 0; i < snapshots.size(); ++i)
    batches.push_back(i == 0 ? snapshots[0] : difference(snapshots[i], snapshots[i - 1]));
  const auto n_near = static_cast<std::size_t>(std::lround(e.n_star));
  const auto bm = batch_means_stderr(batches, n_near);

  const bool within = std::abs(dev) <= 0.001;
  const bool consistent = std::abs(dev) <= 4.0 * e.total_err;
  std::ostringstream detail;
  detail << "L=64 window [" << run.checkpoint.counters.n_lo() << "," << run.checkpoint.counters.n_hi()
         << "], 2e4 cycles: p_c=" << format_real(e.p_c, 8) << " stat_err=" << format_real(e.stat_err, 3)
         << " sys_err=" << format_real(e.sys_err, 3) << " deviation=" << format_real(dev, 3) << " ("
         << format_real(std::abs(dev) / e.total_err, 3) << " sigma), tau=" << format_real(est.tau, 3);
  if (bm) {
    const double tau_se = estimate_R(run.checkpoint.counters, n_near, est.tau)->std_error;
    detail << ", R stderr at n=" << n_near << " tau-based " << format_real(tau_se, 3) << " vs batch-means "
           << format_real(*bm, 3);
  }
  return {within && consistent, detail.str()};
}

Outcome crossing_arithmetic() {
  const ValueWithError t = crossing_target(2048);
  const bool ok = std::abs(t.value - 0.50015625) < 1e-12 && std::abs(t.error - 0.00000049) <= 0.5e-8;
  return {ok, "target " + format_real(t.value, 10) + " +/- " + format_real(t.error, 3)};
}

Outcome large_lattice_replay() {
  // Through the checkpoint text format, as the estimate command reads it.
  const Checkpoint cp = parse_checkpoint(format_checkpoint(reference::large_lattice_checkpoint()));
  const EstimateOutcome out = run_estimate(cp, CrossingCriterion{});
  if (!out.estimate) return {false, "no crossing"};
  const ThresholdEstimate& e = *out.estimate;
  const bool ok = std::abs(e.p_c - kReferencePc) <= 2e-7;
  return {ok, "p_c=" + format_real(e.p_c, 10) + " stat_err=" + format_real(e.stat_err, 3) +
                  " sys_err=" + format_real(e.sys_err, 3) + " total_err=" + format_real(e.total_err, 3)};
}

Outcome mt_bit_exact() {
  const std::uint32_t seeds[] = {5489u, 1u, 42u, 20261015u};
  for (std::uint32_t seed : seeds) {
    Mt19937 ours(seed);
    reference::Mt19937ar ref;
    ref.init_genrand(seed);
    for (int i = 0; i < 10000; ++i)
      if (ours() != ref.genrand_int32()) return {false, "diverged for seed " + std::to_string(seed)};
  }
  const std::uint32_t key[] = {0x123, 0x234, 0x345, 0x456};
  Mt19937 ours(std::span<const std::uint32_t>(key, 4));
  reference::Mt19937ar ref;
  ref.init_by_array(key, 4);
  for (int i = 0; i < 10000; ++i)
    if (ours() != ref.genrand_int32()) return {false, "diverged for array seed"};
  Mt19937 canonical;
  std::uint32_t w = 0;
  for (int i = 0; i < 10000; ++i) w = canonical();
  return {w == 4123659995u, "4 scalar seeds + 1 array seed x 1e4 words; 10000th output after 5489 = " +
                                std::to_string(w)};
}

Outcome early_termination() {
  constexpr std::uint32_t kSide = 24;
  constexpr int kDeletions = 10000;
  std::mt19937 rng(31);
  int done = 0, host_kept = 0, splits = 0;
  std::size_t max_fragments = 0;

  while (done < kDeletions) {
    // Fresh random cluster population: occupied grid sites, nearest-neighbour edges.
    DynamicGraph g(kSide * kSide, 4);
    std::vector<VertexId> at(kSide * kSide, kNoVertex);
    std::vector<VertexId> live;
    for (std::uint32_t i = 0; i < kSide * kSide; ++i) {
      if (rng() % 1000 >= 620) continue;
      at[i] = g.create_vertex();
      live.push_back(at[i]);
      const std::uint32_t x = i % kSide;
      if (x > 0 && at[i - 1] != kNoVertex) g.insert_edge(at[i], at[i - 1]);
      if (i >= kSide && at[i - kSide] != kNoVertex) g.insert_edge(at[i], at[i - kSide]);
    }

    for (int k = 0; k < 200 && done < kDeletions && !live.empty(); ++k, ++done) {
      const std::size_t pick = rng() % live.size();
      const VertexId victim = live[pick];
      live[pick] = live.back();
      live.pop_back();

      const auto before = oracle::bfs_partition(g);
      const std::uint32_t cluster = before.label[index_of(victim)];
      const GraphId host = g.find_root(victim);
      const std::uint32_t order_before = g.order(host);

      const FragmentReport r = g.remove_vertex(victim);
      const auto after = oracle::bfs_partition(g);
      if (std::string m = oracle::compare_with_graph(g, after); !m.empty()) return {false, m};
      if (std::string h = check_graph_hygiene(g); !h.empty()) return {false, h};

      if (order_before == 1) {
        if (!r.fragments.empty()) return {false, "isolated deletion reported fragments"};
        continue;
      }
      ++host_kept;
      if (r.fragments.empty() || !r.fragments.back().is_host || r.fragments.back().root != host)
        return {false, "host handle not preserved at deletion " + std::to_string(done)};
      if (!g.is_live(host) || !g.is_root(host)) return {false, "host root no longer a live root"};
      if (r.extracted + 1 != r.fragments.size())
        return {false, "extracted " + std::to_string(r.extracted) + " of " + std::to_string(r.fragments.size())};

      // Fragments must be exactly the BFS components of the old cluster.
      std::vector<std::uint32_t> expected, got;
      std::vector<std::uint8_t> seen(after.component_count(), 0);
      g.for_each_vertex([&](VertexId v) {
        if (before.label[index_of(v)] != cluster) return;
        const std::uint32_t c = after.label[index_of(v)];
        if (!seen[c]) {
          seen[c] = 1;
          expected.push_back(after.order[c]);
        }
      });
      for (const Fragment& f : r.fragments) got.push_back(f.order);
      std::sort(expected.begin(), expected.end());
      std::sort(got.begin(), got.end());
      if (expected != got) return {false, "fragment orders differ from BFS at deletion " + std::to_string(done)};
      if (r.fragments.size() > 1) ++splits;
      max_fragments = std::max(max_fragments, r.fragments.size());
    }
  }
  std::ostringstream detail;
  detail << done << " deletions, " << host_kept << " with surviving host, " << splits << " splits, up to "
         << max_fragments << " fragments";
  return {true, detail.str()};
}

Outcome determinism() {
  RunConfig config;
  config.side = 32;
  config.auto_window = true;
  config.cycles = 300;
  config.seed = 7;
  const std::string a = format_checkpoint(run_sweep(config).checkpoint);
  const std::string b = format_checkpoint(run_sweep(config).checkpoint);
  config.shards = 3;
  config.rng = RngKind::lagged_fibonacci;
  const std::string c = format_checkpoint(run_sweep(config).checkpoint);
  const std::string d = format_checkpoint(run_sweep(config).checkpoint);
  return {a == b && c == d, "L=32, 300 cycles: single-shard MT and 3-shard LFG checkpoints byte-identical (" +
                                std::to_string(a.size()) + " and " + std::to_string(c.size()) + " bytes)"};
}

Outcome performance() {
  const std::vector<std::uint32_t> sides{32, 64, 128, 256};
  const auto rows = run_bench(sides, 50, 3);
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail << "L=" << rows[i].side << " " << format_real(rows[i].ns_per_step(), 4) << "ns ";
    if (i == 0) continue;
    const double cost_ratio = rows[i].ns_per_step() / rows[i - 1].ns_per_step();
    const double size_ratio = static_cast<double>(rows[i].sites) / static_cast<double>(rows[i - 1].sites);
    ok = ok && cost_ratio < size_ratio;
  }
  const double total = rows.back().ns_per_step() / rows.front().ns_per_step();
  ok = ok && total < static_cast<double>(rows.back().sites) / static_cast<double>(rows.front().sites);
  detail << "(cost x" << format_real(total, 3) << " for N x64)";
  return {ok, detail.str()};
}

}  // namespace

int main() {
  report("oracle-equivalence", oracle_equivalence);
  report("exhaustive-L2", [] { return exhaustive_agreement(2, 100, 10000); });
  report("exhaustive-L3", [] { return exhaustive_agreement(3, 100, 10000); });
  report("uniform-visitation", uniform_visits);
  report("desk-scale-threshold", desk_scale);
  report("crossing-target", crossing_arithmetic);
  report("large-lattice-replay", large_lattice_replay);
  report("mt19937-bit-exact", mt_bit_exact);
  report("early-termination", early_termination);
  report("determinism", determinism);
  report("performance", performance);
  std::printf("%s: %d failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
