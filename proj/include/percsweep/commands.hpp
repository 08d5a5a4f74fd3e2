#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "percsweep/analysis.hpp"
#include "percsweep/checkpoint.hpp"
#include "percsweep/rng.hpp"
#include "percsweep/sweep.hpp"

namespace percsweep {

/// Process exit codes of the command-line tool.
namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsage = 2;
inline constexpr int kVerificationFailed = 3;
inline constexpr int kNoCrossing = 4;
inline constexpr int kInterrupted = 5;
}  // namespace exit_code

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Window {
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
};

/// Prior location of the threshold used to centre automatic windows.
inline constexpr double kAutoWindowCentre = 0.5927;
inline constexpr double kAutoWindowWidthFactor = 4.0;

/// Window centred on centre*N, width factor * N * L^(-3/4), clamped to [0, N].
Window auto_window(std::uint32_t side, double centre = kAutoWindowCentre,
                   double width_factor = kAutoWindowWidthFactor);

struct RunConfig {
  std::uint32_t side = 0;
  SweepMode mode = SweepMode::fixed_window;
  std::optional<std::size_t> n_lo;
  std::optional<std::size_t> n_hi;
  bool auto_window = false;
  double auto_centre = kAutoWindowCentre;
  std::uint64_t cycles = 0;
  std::uint64_t seed = Mt19937::kDefaultSeed;
  RngKind rng = RngKind::mt19937;
  Pairing pairing = Pairing::single;
  unsigned decimation = 2;
  unsigned shards = 1;
  std::uint64_t equilibration_cycles = 1;
  std::uint64_t checkpoint_interval = 0;  // cycles between intermediate checkpoints; 0 = none
};

/// Resolves and validates the window; throws ConfigError.
Window resolve_window(const RunConfig& config);

struct SweepOutcome {
  Checkpoint checkpoint;
  bool partial = false;
  double wall_seconds = 0.0;
};

/// Runs the configured sweep, sharded over `config.shards` engines with
/// derived seeds. `on_checkpoint` is called after every checkpoint interval.
SweepOutcome run_sweep(const RunConfig& config, const std::atomic<bool>* stop = nullptr,
                       const std::function<void(const Checkpoint&)>& on_checkpoint = {});

struct EstimateOutcome {
  SpanningCurve curve;
  double tau = 0.5;
  std::optional<ThresholdEstimate> estimate;
  std::optional<NoCrossingError> failure;
  std::string report;  // CSV followed by the estimate or failure footer
};

EstimateOutcome run_estimate(const Checkpoint& checkpoint, const CrossingCriterion& criterion,
                             std::optional<double> tau_override = std::nullopt);

struct BenchRow {
  std::uint32_t side = 0;
  std::size_t sites = 0;
  std::uint64_t cycles = 0;
  std::uint64_t up_steps = 0;
  std::uint64_t down_steps = 0;
  double up_seconds = 0.0;
  double down_seconds = 0.0;

  double up_rate() const { return static_cast<double>(up_steps) / up_seconds; }
  double down_rate() const { return static_cast<double>(down_steps) / down_seconds; }
  double cycle_rate() const {
    return static_cast<double>(up_steps + down_steps) / (up_seconds + down_seconds);
  }
  double ns_per_step() const { return 1e9 / cycle_rate(); }
};

/// Times up-steps and down-steps over `cycles` auto-window cycles per side.
std::vector<BenchRow> run_bench(std::span<const std::uint32_t> sides, std::uint64_t cycles,
                                std::uint64_t seed = 1);
std::string format_bench_csv(std::span<const BenchRow> rows);

std::string format_real(double value, int precision = 6);

}  // namespace percsweep
