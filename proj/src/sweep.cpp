#include "percsweep/sweep.hpp"

#include <cmath>
#include <numeric>

namespace percsweep {

SitePicker::SitePicker(std::size_t site_count) : perm_(site_count), pos_(site_count) {
  std::iota(perm_.begin(), perm_.end(), SiteIndex{0});
  std::iota(pos_.begin(), pos_.end(), std::uint32_t{0});
}

void SitePicker::take(SiteIndex s) {
  if (is_occupied(s)) throw SweepError("take: site already on the occupied side");
  swap_positions(pos_[s], k_);
  ++k_;
}

void SitePicker::release(SiteIndex s) {
  if (!is_occupied(s)) throw SweepError("release: site not on the occupied side");
  swap_positions(pos_[s], k_ - 1);
  --k_;
}

SweepCounters::SweepCounters(std::uint32_t side, std::size_t n_lo, std::size_t n_hi)
    : side_(side), n_lo_(n_lo), n_hi_(n_hi) {
  if (n_lo > n_hi) throw SweepError("counter window has n_lo > n_hi");
  const std::size_t width = n_hi - n_lo + 1;
  s0_.assign(width, 0);
  s1_.assign(width, 0);
  s2_.assign(width, 0);
}

void SweepCounters::record(std::size_t n, bool spans1, bool spans2) {
  if (!contains(n)) return;
  const std::size_t i = n - n_lo_;
  ++s0_[i];
  s1_[i] += spans1;
  s2_[i] += spans2;
}

void SweepCounters::record_growing(std::size_t n, bool spans1, bool spans2) {
  if (empty()) {
    n_lo_ = n_hi_ = n;
    s0_.assign(1, 0);
    s1_.assign(1, 0);
    s2_.assign(1, 0);
  } else if (n < n_lo_) {
    const std::size_t grow = n_lo_ - n;
    s0_.insert(s0_.begin(), grow, 0);
    s1_.insert(s1_.begin(), grow, 0);
    s2_.insert(s2_.begin(), grow, 0);
    n_lo_ = n;
  } else if (n > n_hi_) {
    const std::size_t width = n - n_lo_ + 1;
    s0_.resize(width, 0);
    s1_.resize(width, 0);
    s2_.resize(width, 0);
    n_hi_ = n;
  }
  record(n, spans1, spans2);
}

void SweepCounters::set(std::size_t n, std::uint64_t s0, std::uint64_t s1, std::uint64_t s2) {
  if (!contains(n)) throw SweepError("set: n outside counter window");
  if (s2 > s1 || s1 > s0) throw SweepError("set: counters must satisfy s2 <= s1 <= s0");
  const std::size_t i = n - n_lo_;
  s0_[i] = s0;
  s1_[i] = s1;
  s2_[i] = s2;
}

SweepCounters& SweepCounters::operator+=(const SweepCounters& other) {
  if (other.side_ != side_ || other.n_lo_ != n_lo_ || other.n_hi_ != n_hi_ ||
      other.s0_.size() != s0_.size())
    throw SweepError("cannot merge counters with different windows");
  for (std::size_t i = 0; i < s0_.size(); ++i) {
    s0_[i] += other.s0_[i];
    s1_[i] += other.s1_[i];
    s2_[i] += other.s2_[i];
  }
  return *this;
}

std::uint64_t SweepCounters::total_observations() const {
  return std::accumulate(s0_.begin(), s0_.end(), std::uint64_t{0});
}

double critical_window_scale(std::uint32_t side) {
  const double n = static_cast<double>(side) * side;
  return n * std::pow(static_cast<double>(side), -0.75);
}

SweepEngine::SweepEngine(std::uint32_t side, const RngConfig& rng)
    : lattice_(side), picker_(lattice_.site_count()), rng_(rng) {}

SiteIndex SweepEngine::choose(Direction dir) {
  if (rng_.config().pairing == Pairing::single) {
    return dir == Direction::up ? picker_.pick_unoccupied(rng_.primary())
                                : picker_.pick_occupied(rng_.primary());
  }
  // Independent x and y streams: draw coordinates until the site has the
  // occupancy the step needs.
  if (dir == Direction::up && picker_.occupied_count() == picker_.site_count())
    throw SweepError("step up: lattice is full");
  if (dir == Direction::down && picker_.occupied_count() == 0)
    throw SweepError("step down: lattice is empty");
  const std::uint32_t side = lattice_.side();
  for (;;) {
    const std::uint32_t x = bounded_uniform(rng_.x_source(), side);
    const std::uint32_t y = bounded_uniform(rng_.y_source(), side);
    const SiteIndex s = y * side + x;
    if (picker_.is_occupied(s) == (dir == Direction::down)) {
      if (dir == Direction::up) {
        picker_.take(s);
      } else {
        picker_.release(s);
      }
      return s;
    }
  }
}

std::size_t SweepEngine::step(Direction dir) {
  const SiteIndex s = choose(dir);
  return dir == Direction::up ? lattice_.occupy(s) : lattice_.deoccupy(s);
}

void SweepEngine::sample(const SweepPlan& plan, SweepCounters& counters,
                         const SampleObserver& observer) {
  const std::size_t n = lattice_.occupied_count();
  const bool spans1 = lattice_.spans(1);
  const bool spans2 = lattice_.spans(2);
  if (plan.mode == SweepMode::self_organized) {
    counters.record_growing(n, spans1, spans2);
  } else {
    counters.record(n, spans1, spans2);
  }
  if (plan.trace_n && *plan.trace_n == n) {
    const bool x = lattice_.tally()[SpanClass::x_only] + lattice_.tally()[SpanClass::both] > 0;
    const bool y = lattice_.tally()[SpanClass::y_only] + lattice_.tally()[SpanClass::both] > 0;
    trace_.push_back(static_cast<std::uint8_t>(x + y));
  }
  if (observer) observer(lattice_);
}

SweepResult SweepEngine::run(const SweepPlan& plan, SweepCounters& counters,
                             const std::atomic<bool>* stop, const SampleObserver& observer) {
  SweepResult result;
  const std::size_t total = lattice_.site_count();

  if (plan.mode == SweepMode::fixed_window) {
    if (plan.n_lo >= plan.n_hi || plan.n_hi > total)
      throw SweepError("sweep window must satisfy 0 <= n_lo < n_hi <= N");
    if (counters.empty()) counters = SweepCounters(lattice_.side(), plan.n_lo, plan.n_hi);
    if (occupied() > plan.n_lo) throw SweepError("lattice starts above the lower turning point");

    while (occupied() < plan.n_lo) step(Direction::up);
    if (!equilibrated_) {
      for (std::uint64_t c = 0; c < plan.equilibration_cycles; ++c) {
        while (occupied() < plan.n_hi) step(Direction::up);
        while (occupied() > plan.n_lo) step(Direction::down);
      }
      equilibrated_ = true;
    }

    for (std::uint64_t c = 0; c < plan.cycles; ++c) {
      if (stop && stop->load(std::memory_order_relaxed)) {
        result.partial = true;
        break;
      }
      while (occupied() < plan.n_hi) {
        step(Direction::up);
        sample(plan, counters, observer);
        ++result.steps;
      }
      while (occupied() > plan.n_lo) {
        step(Direction::down);
        sample(plan, counters, observer);
        ++result.steps;
      }
      ++result.cycles_completed;
    }
    return result;
  }

  if (counters.empty()) counters = SweepCounters(lattice_.side());
  // Self-organized: turn when a spanning cluster appears, and again when the
  // last one disappears.
  if (!equilibrated_) {
    for (std::uint64_t c = 0; c < plan.equilibration_cycles; ++c) {
      while (!lattice_.spans(1)) step(Direction::up);
      while (lattice_.spans(1)) step(Direction::down);
    }
    equilibrated_ = true;
  }
  for (std::uint64_t c = 0; c < plan.cycles; ++c) {
    if (stop && stop->load(std::memory_order_relaxed)) {
      result.partial = true;
      break;
    }
    while (!lattice_.spans(1)) {
      step(Direction::up);
      sample(plan, counters, observer);
      ++result.steps;
    }
    while (lattice_.spans(1)) {
      step(Direction::down);
      sample(plan, counters, observer);
      ++result.steps;
    }
    ++result.cycles_completed;
  }
  return result;
}

DecorrelationEstimate estimate_decorrelation(std::span<const double> trace) {
  DecorrelationEstimate est;
  const std::size_t n = trace.size();
  if (n < 2) return est;

  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double sum = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) sum += (trace[i] - mean) * (trace[i + lag] - mean);
    return sum / static_cast<double>(n - lag);
  };

  const double c0 = autocov(0);
  if (c0 <= 0.0) {
    est.reliable = n >= 50;
    return est;
  }

  double tau = 0.5;
  std::size_t w = 1;
  for (; w < n; ++w) {
    tau += autocov(w) / c0;
    if (static_cast<double>(w) >= 6.0 * tau) break;
  }
  est.tau = std::max(tau, 0.0);
  est.window = w;
  est.reliable = static_cast<double>(n) >= 100.0 * est.tau && w < n;
  return est;
}

}  // namespace percsweep
