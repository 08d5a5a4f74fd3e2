#include "percsweep/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace percsweep {

std::string format_real(double value, int precision) {
  std::ostringstream out;
  out.precision(precision);
  out << value;
  return out.str();
}

Window auto_window(std::uint32_t side, double centre, double width_factor) {
  const double sites = static_cast<double>(side) * side;
  const double width = std::round(width_factor * critical_window_scale(side));
  const double mid = std::round(centre * sites);
  const double lo = std::clamp(mid - std::floor(width / 2.0), 0.0, sites);
  const double hi = std::clamp(lo + width, 0.0, sites);
  Window w{static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
  if (w.n_lo >= w.n_hi) {
    // Tiny lattices: fall back to the full range.
    w = {0, static_cast<std::size_t>(sites)};
  }
  return w;
}

Window resolve_window(const RunConfig& config) {
  if (config.side < 2) throw ConfigError("--size must be at least 2");
  const std::size_t sites = std::size_t{config.side} * config.side;
  if (config.mode == SweepMode::self_organized) return {0, sites};
  if (config.auto_window) {
    if (config.n_lo || config.n_hi) throw ConfigError("--auto-window conflicts with --n-min/--n-max");
    return auto_window(config.side, config.auto_centre);
  }
  if (!config.n_lo || !config.n_hi) throw ConfigError("window mode needs --n-min and --n-max, or --auto-window");
  const Window w{*config.n_lo, *config.n_hi};
  if (w.n_lo >= w.n_hi || w.n_hi > sites) throw ConfigError("window must satisfy 0 <= n-min < n-max <= N");
  return w;
}

namespace {

SweepCounters widen(const SweepCounters& c, std::uint32_t side, std::size_t lo, std::size_t hi) {
  SweepCounters out(side, lo, hi);
  if (c.empty()) return out;
  for (std::size_t n = c.n_lo(); n <= c.n_hi(); ++n) out.set(n, c.s0(n), c.s1(n), c.s2(n));
  return out;
}

// Sum of counters whose windows may differ (self-organized shards).
SweepCounters combine(std::span<const SweepCounters> parts, std::uint32_t side) {
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const SweepCounters& c : parts) {
    if (c.empty()) continue;
    lo = std::min(lo, c.n_lo());
    hi = std::max(hi, c.n_hi());
  }
  if (lo == SIZE_MAX) return SweepCounters();
  SweepCounters total(side, lo, hi);
  for (const SweepCounters& c : parts)
    if (!c.empty()) total += widen(c, side, lo, hi);
  return total;
}

struct Shard {
  SweepEngine engine;
  SweepCounters counters;
  std::uint64_t quota = 0;
  std::uint64_t completed = 0;
  std::uint64_t steps = 0;
  bool partial = false;
};

}  // namespace

SweepOutcome run_sweep(const RunConfig& config, const std::atomic<bool>* stop,
                       const std::function<void(const Checkpoint&)>& on_checkpoint) {
  const auto started = std::chrono::steady_clock::now();
  const Window window = resolve_window(config);
  if (config.shards == 0) throw ConfigError("--shards must be at least 1");
  if (config.rng == RngKind::lagged_fibonacci && config.decimation == 0)
    throw ConfigError("decimation must be at least 1");

  SweepPlan plan;
  plan.mode = config.mode;
  plan.n_lo = window.n_lo;
  plan.n_hi = window.n_hi;
  plan.equilibration_cycles = config.equilibration_cycles;
  if (config.mode == SweepMode::fixed_window) plan.trace_n = (window.n_lo + window.n_hi) / 2;

  std::vector<Shard> shards;
  shards.reserve(config.shards);
  for (unsigned k = 0; k < config.shards; ++k) {
    const std::uint64_t seed = config.shards == 1 ? config.seed : derive_seed(config.seed, 1000 + k);
    RngConfig rng{config.rng, seed, config.pairing, config.decimation};
    Shard shard{SweepEngine(config.side, rng), {}, 0, 0, 0, false};
    shard.quota = config.cycles / config.shards + (k < config.cycles % config.shards ? 1 : 0);
    if (config.mode == SweepMode::fixed_window)
      shard.counters = SweepCounters(config.side, window.n_lo, window.n_hi);
    shards.push_back(std::move(shard));
  }

  auto snapshot = [&]() {
    Checkpoint cp;
    std::vector<SweepCounters> parts;
    for (const Shard& s : shards) parts.push_back(s.counters);
    if (config.mode == SweepMode::fixed_window) {
      cp.counters = parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) cp.counters += parts[i];
    } else {
      cp.counters = combine(parts, config.side);
      if (cp.counters.empty()) cp.counters = SweepCounters(config.side, 0, 0);
    }

    std::uint64_t cycles = 0, steps = 0;
    bool partial = false;
    for (const Shard& s : shards) {
      cycles += s.completed;
      steps += s.steps;
      partial = partial || s.partial;
    }
    cp.set("size", std::to_string(config.side));
    cp.set("mode", config.mode == SweepMode::fixed_window ? "window" : "selforg");
    cp.set("rng", to_string(config.rng));
    cp.set("pairing", to_string(config.pairing));
    if (config.rng == RngKind::lagged_fibonacci) cp.set("decimation", std::to_string(config.decimation));
    cp.set("seed", std::to_string(config.seed));
    cp.set("shards", std::to_string(config.shards));
    cp.set("equilibration", std::to_string(config.equilibration_cycles));
    cp.set("cycles", std::to_string(cycles));
    cp.set("steps", std::to_string(steps));

    if (plan.trace_n) {
      DecorrelationEstimate worst;
      bool any = false;
      for (const Shard& s : shards) {
        const auto& raw = s.engine.trace();
        if (raw.empty()) continue;
        std::vector<double> trace(raw.size());
        std::transform(raw.begin(), raw.end(), trace.begin(), [](std::uint8_t v) { return 0.5 * v; });
        const DecorrelationEstimate est = estimate_decorrelation(trace);
        if (!any || est.tau > worst.tau) worst = est;
        any = true;
      }
      if (any) {
        // Visits to an interior n are one half-cycle, (n_hi - n_lo) steps, apart.
        const double spacing = static_cast<double>(window.n_hi - window.n_lo);
        cp.set("trace_n", std::to_string(*plan.trace_n));
        cp.set("tau", format_real(worst.tau));
        cp.set("tau_window", std::to_string(worst.window));
        cp.set("tau_reliable", worst.reliable ? "1" : "0");
        cp.set("decorrelation_steps", format_real(2.0 * worst.tau * spacing));
      }
    }
    if (partial) cp.set("partial", "1");
    return cp;
  };

  const std::uint64_t chunk = config.checkpoint_interval > 0 ? config.checkpoint_interval : UINT64_MAX;
  bool first = true;
  for (;;) {
    bool pending = false;
    for (const Shard& s : shards) pending = pending || (s.completed < s.quota && !s.partial);
    if (!pending && !first) break;

    auto work = [&](Shard& s) {
      SweepPlan p = plan;
      p.cycles = std::min(chunk, s.quota - s.completed);
      const SweepResult r = s.engine.run(p, s.counters, stop);
      s.completed += r.cycles_completed;
      s.steps += r.steps;
      s.partial = s.partial || r.partial;
    };

    if (shards.size() == 1) {
      work(shards.front());
    } else {
      std::vector<std::exception_ptr> errors(shards.size());
      std::vector<std::thread> threads;
      for (std::size_t k = 0; k < shards.size(); ++k) {
        threads.emplace_back([&, k] {
          try {
            work(shards[k]);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    first = false;

    bool partial = false;
    pending = false;
    for (const Shard& s : shards) {
      partial = partial || s.partial;
      pending = pending || s.completed < s.quota;
    }
    if (on_checkpoint && config.checkpoint_interval > 0 && pending && !partial) on_checkpoint(snapshot());
    if (partial) break;
  }

  SweepOutcome outcome;
  outcome.checkpoint = snapshot();
  outcome.partial = outcome.checkpoint.find("partial") != nullptr;
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return outcome;
}

EstimateOutcome run_estimate(const Checkpoint& checkpoint, const CrossingCriterion& criterion,
                             std::optional<double> tau_override) {
  EstimateOutcome out;
  if (tau_override) {
    out.tau = *tau_override;
  } else if (const std::string* t = checkpoint.find("tau")) {
    out.tau = std::stod(*t);
  }
  out.curve = build_curve(checkpoint.counters, out.tau);
  out.report = format_curve_csv(out.curve);
  try {
    out.estimate = estimate_pc(out.curve, criterion);
    out.report += format_estimate_footer(*out.estimate);
  } catch (const NoCrossingError& e) {
    out.failure = e;
    const ValueWithError target = crossing_target(checkpoint.counters.side(), criterion);
    out.report += "# no crossing: target=" + format_real(target.value, 9) +
                  " nearest_n=" + std::to_string(e.nearest_n) + " nearest_R=" + format_real(e.nearest_R, 9) +
                  "\n";
  }
  return out;
}

std::vector<BenchRow> run_bench(std::span<const std::uint32_t> sides, std::uint64_t cycles, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  if (cycles == 0) return rows;
  for (std::uint32_t side : sides) {
    const Window w = auto_window(side);
    SweepEngine engine(side, RngConfig{RngKind::mt19937, seed, Pairing::single, 2});
    SweepPlan plan;
    plan.n_lo = w.n_lo;
    plan.n_hi = w.n_hi;
    plan.cycles = 0;
    SweepCounters unused;
    engine.run(plan, unused);

    BenchRow row;
    row.side = side;
    row.sites = std::size_t{side} * side;
    row.cycles = cycles;
    for (std::uint64_t c = 0; c < cycles; ++c) {
      const auto t0 = clock::now();
      while (engine.occupied() < w.n_hi) {
        engine.step(Direction::up);
        ++row.up_steps;
      }
      const auto t1 = clock::now();
      while (engine.occupied() > w.n_lo) {
        engine.step(Direction::down);
        ++row.down_steps;
      }
      const auto t2 = clock::now();
      row.up_seconds += std::chrono::duration<double>(t1 - t0).count();
      row.down_seconds += std::chrono::duration<double>(t2 - t1).count();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_bench_csv(std::span<const BenchRow> rows) {
  std::ostringstream out;
  out << "L,N,cycles,up_steps_per_s,down_steps_per_s,cycle_steps_per_s,ns_per_step\n";
  for (const BenchRow& r : rows) {
    out << r.side << ',' << r.sites << ',' << r.cycles << ',' << format_real(r.up_rate(), 6) << ','
        << format_real(r.down_rate(), 6) << ',' << format_real(r.cycle_rate(), 6) << ','
        << format_real(r.ns_per_step(), 6) << '\n';
  }
  return out.str();
}

}  // namespace percsweep
