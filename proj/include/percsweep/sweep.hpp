#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "percsweep/lattice.hpp"
#include "percsweep/rng.hpp"

namespace percsweep {

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Permutation of site indices split at k: positions [0, k) hold the occupied
/// sites, [k, N) the unoccupied ones. Gives O(1) uniform choice from either side.
class SitePicker {
 public:
  explicit SitePicker(std::size_t site_count);

  std::size_t site_count() const { return perm_.size(); }
  std::size_t occupied_count() const { return k_; }
  bool is_occupied(SiteIndex s) const { return pos_[s] < k_; }

  template <class Gen>
  SiteIndex pick_unoccupied(Gen& gen) {
    if (k_ >= perm_.size()) throw SweepError("pick_unoccupied: lattice is full");
    const std::size_t i = k_ + bounded_uniform(gen, perm_.size() - k_);
    swap_positions(i, k_);
    return perm_[k_++];
  }

  template <class Gen>
  SiteIndex pick_occupied(Gen& gen) {
    if (k_ == 0) throw SweepError("pick_occupied: lattice is empty");
    const std::size_t i = bounded_uniform(gen, k_);
    swap_positions(i, k_ - 1);
    return perm_[--k_];
  }

  /// Moves a specific unoccupied site across the partition.
  void take(SiteIndex s);
  /// Moves a specific occupied site back across the partition.
  void release(SiteIndex s);

 private:
  void swap_positions(std::size_t i, std::size_t j) {
    std::swap(perm_[i], perm_[j]);
    pos_[perm_[i]] = static_cast<std::uint32_t>(i);
    pos_[perm_[j]] = static_cast<std::uint32_t>(j);
  }

  std::vector<SiteIndex> perm_;
  std::vector<std::uint32_t> pos_;
  std::size_t k_ = 0;
};

/// Observation counts s0, s1, s2 indexed by occupation n over [n_lo, n_hi].
class SweepCounters {
 public:
  SweepCounters() = default;
  /// Empty counters for a lattice side; self-organized runs grow them lazily.
  explicit SweepCounters(std::uint32_t side) : side_(side) {}
  SweepCounters(std::uint32_t side, std::size_t n_lo, std::size_t n_hi);

  std::uint32_t side() const { return side_; }
  std::size_t n_lo() const { return n_lo_; }
  std::size_t n_hi() const { return n_hi_; }
  bool empty() const { return s0_.empty(); }
  bool contains(std::size_t n) const { return !empty() && n >= n_lo_ && n <= n_hi_; }

  std::uint64_t s0(std::size_t n) const { return s0_[n - n_lo_]; }
  std::uint64_t s1(std::size_t n) const { return s1_[n - n_lo_]; }
  std::uint64_t s2(std::size_t n) const { return s2_[n - n_lo_]; }

  /// Adds one observation; silently ignored when n is outside the window.
  void record(std::size_t n, bool spans1, bool spans2);
  /// As record(), widening the window to include n first.
  void record_growing(std::size_t n, bool spans1, bool spans2);
  void set(std::size_t n, std::uint64_t s0, std::uint64_t s1, std::uint64_t s2);

  /// Elementwise sum; windows and sides must match.
  SweepCounters& operator+=(const SweepCounters& other);
  bool operator==(const SweepCounters&) const = default;

  std::uint64_t total_observations() const;

 private:
  std::uint32_t side_ = 0;
  std::size_t n_lo_ = 0;
  std::size_t n_hi_ = 0;
  std::vector<std::uint64_t> s0_, s1_, s2_;
};

enum class SweepMode { fixed_window, self_organized };
enum class Direction { up, down };

struct SweepPlan {
  SweepMode mode = SweepMode::fixed_window;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  std::uint64_t cycles = 1;
  /// Full cycles run without recording before the first recorded one.
  std::uint64_t equilibration_cycles = 1;
  /// When set, the spanning indicator is logged at every visit to this n.
  std::optional<std::size_t> trace_n;
};

struct SweepResult {
  std::uint64_t cycles_completed = 0;
  std::uint64_t steps = 0;  // recorded-phase steps only
  bool partial = false;
};

/// Called after every recorded step with the current lattice.
using SampleObserver = std::function<void(const SquareLattice&)>;

/// Width of the critical region in occupied sites, N * L^(-1/nu) with nu = 4/3.
double critical_window_scale(std::uint32_t side);

/// One lattice, one site picker and one random stream driving the
/// bidirectional walk.
class SweepEngine {
 public:
  SweepEngine(std::uint32_t side, const RngConfig& rng);

  std::size_t step(Direction dir);

  /// Runs `plan.cycles` up-down cycles, accumulating into `counters`.
  /// Resumable: a second call continues the walk without re-equilibrating.
  SweepResult run(const SweepPlan& plan, SweepCounters& counters,
                  const std::atomic<bool>* stop = nullptr, const SampleObserver& observer = {});

  const SquareLattice& lattice() const { return lattice_; }
  SquareLattice& lattice() { return lattice_; }
  const SitePicker& picker() const { return picker_; }
  std::size_t occupied() const { return lattice_.occupied_count(); }

  /// Spanning indicators (x-span + y-span, in {0,1,2}) logged at plan.trace_n.
  const std::vector<std::uint8_t>& trace() const { return trace_; }

 private:
  SiteIndex choose(Direction dir);
  void sample(const SweepPlan& plan, SweepCounters& counters, const SampleObserver& observer);

  SquareLattice lattice_;
  SitePicker picker_;
  RngStream rng_;
  bool equilibrated_ = false;
  std::vector<std::uint8_t> trace_;
};

struct DecorrelationEstimate {
  double tau = 0.5;  // integrated autocorrelation time, in samples
  std::size_t window = 0;
  bool reliable = false;  // trace length >= 100 tau
};

/// Integrated autocorrelation time with the self-consistent window: the first
/// W with W >= 6 tau(W).
DecorrelationEstimate estimate_decorrelation(std::span<const double> trace);

}  // namespace percsweep
