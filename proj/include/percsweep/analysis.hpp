#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "percsweep/sweep.hpp"

namespace percsweep {

struct SpanningEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// R(n) = (s1 + s2) / (2 s0) with standard error sqrt(R(1-R) / s0_eff),
/// s0_eff = s0 / (2 tau). Empty when s0(n) = 0 or n is outside the window.
std::optional<SpanningEstimate> estimate_R(const SweepCounters& counters, std::size_t n,
                                           double tau = 0.5);

struct CurvePoint {
  std::size_t n = 0;
  double p = 0.0;
  double R = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

struct SpanningCurve {
  std::uint32_t side = 0;
  std::size_t sites = 0;
  std::vector<CurvePoint> points;  // only n with s0(n) > 0, ascending
};

SpanningCurve build_curve(const SweepCounters& counters, double tau = 0.5);

/// Finite-size target 0.5 + b/L for the spanning probability at p_c.
struct CrossingCriterion {
  double b = 0.320;
  double b_err = 0.001;
};

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

ValueWithError crossing_target(std::uint32_t side, const CrossingCriterion& criterion = {});

struct ThresholdEstimate {
  double p_c = 0.0;
  double stat_err = 0.0;
  double sys_err = 0.0;
  double total_err = 0.0;
  double n_star = 0.0;
  double slope = 0.0;  // dR/dn used for error propagation
  std::size_t bracket_lo = 0;
  std::size_t crossings = 0;  // bracketing pairs found
  std::uint32_t side = 0;
  std::uint64_t samples = 0;
};

class NoCrossingError : public std::runtime_error {
 public:
  NoCrossingError(const std::string& what, std::size_t nearest_n, double nearest_R)
      : std::runtime_error(what), nearest_n(nearest_n), nearest_R(nearest_R) {}
  std::size_t nearest_n;
  double nearest_R;
};

/// Linear interpolation between the adjacent pair of n bracketing the target.
/// With several bracketing pairs (noisy curves) the median crossing is used.
/// The slope for error propagation is a least-squares fit over a window that
/// widens until the rise across it exceeds twice the local standard error.
ThresholdEstimate estimate_pc(const SpanningCurve& curve, const CrossingCriterion& criterion = {});

/// Standard error of R(n) from the scatter of independent batch estimates.
std::optional<double> batch_means_stderr(std::span<const SweepCounters> batches, std::size_t n);

/// CSV: header "n,p,R,stderr", one row per curve point.
std::string format_curve_csv(const SpanningCurve& curve);
/// Comment line summarising a threshold estimate.
std::string format_estimate_footer(const ThresholdEstimate& est);

}  // namespace percsweep
