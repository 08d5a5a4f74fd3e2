#include "percsweep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace percsweep {

std::optional<SpanningEstimate> estimate_R(const SweepCounters& counters, std::size_t n, double tau) {
  if (!counters.contains(n) || counters.s0(n) == 0) return std::nullopt;
  const double s0 = static_cast<double>(counters.s0(n));
  const double r = (static_cast<double>(counters.s1(n)) + static_cast<double>(counters.s2(n))) / (2.0 * s0);
  const double effective = s0 / (2.0 * std::max(tau, 0.5));
  return SpanningEstimate{r, std::sqrt(std::max(r * (1.0 - r), 0.0) / effective)};
}

SpanningCurve build_curve(const SweepCounters& counters, double tau) {
  SpanningCurve curve;
  curve.side = counters.side();
  curve.sites = std::size_t{counters.side()} * counters.side();
  if (counters.empty()) return curve;
  for (std::size_t n = counters.n_lo(); n <= counters.n_hi(); ++n) {
    const auto r = estimate_R(counters, n, tau);
    if (!r) continue;
    curve.points.push_back({n, static_cast<double>(n) / static_cast<double>(curve.sites), r->value,
                            r->std_error, counters.s0(n)});
  }
  return curve;
}

ValueWithError crossing_target(std::uint32_t side, const CrossingCriterion& criterion) {
  const double l = static_cast<double>(side);
  return {0.5 + criterion.b / l, criterion.b_err / l};
}

namespace {

struct Crossing {
  double n_star;
  std::size_t lo;  // index of the lower bracketing point
  double fraction;
};

std::optional<double> fit_slope(const std::vector<CurvePoint>& pts, double centre, double half_width) {
  double sn = 0, sr = 0, snn = 0, snr = 0;
  std::size_t count = 0;
  for (const CurvePoint& p : pts) {
    const double x = static_cast<double>(p.n) - centre;
    if (std::abs(x) > half_width) continue;
    sn += x;
    sr += p.R;
    snn += x * x;
    snr += x * p.R;
    ++count;
  }
  if (count < 2) return std::nullopt;
  const double k = static_cast<double>(count);
  const double denom = k * snn - sn * sn;
  if (denom <= 0) return std::nullopt;
  return (k * snr - sn * sr) / denom;
}

}  // namespace

ThresholdEstimate estimate_pc(const SpanningCurve& curve, const CrossingCriterion& criterion) {
  const ValueWithError target = crossing_target(curve.side, criterion);
  const auto& pts = curve.points;
  if (pts.empty()) throw NoCrossingError("spanning curve is empty", 0, 0.0);

  std::vector<Crossing> crossings;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = pts[i].R - target.value;
    if (d == 0.0) {
      crossings.push_back({static_cast<double>(pts[i].n), i, 0.0});
      continue;
    }
    if (i + 1 == pts.size() || pts[i + 1].n != pts[i].n + 1) continue;
    const double e = pts[i + 1].R - target.value;
    if ((d < 0 && e > 0) || (d > 0 && e < 0)) {
      const double f = d / (d - e);
      crossings.push_back({static_cast<double>(pts[i].n) + f, i, f});
    }
  }

  if (crossings.empty()) {
    const auto nearest = std::min_element(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.R - target.value) < std::abs(b.R - target.value);
    });
    throw NoCrossingError("no adjacent pair of n brackets the target", nearest->n, nearest->R);
  }

  const Crossing& c = crossings[(crossings.size() - 1) / 2];
  const CurvePoint& a = pts[c.lo];
  const CurvePoint& b = c.fraction > 0.0 ? pts[c.lo + 1] : a;
  const double sigma = (1.0 - c.fraction) * a.std_error + c.fraction * b.std_error;

  const double span = static_cast<double>(pts.back().n - pts.front().n) + 1.0;
  double slope = 0.0;
  for (double h = 1.0;; h *= 2.0) {
    if (const auto s = fit_slope(pts, c.n_star, h)) {
      slope = *s;
      if (std::abs(slope) * h >= sigma) break;
    }
    if (h > span) break;
  }

  ThresholdEstimate est;
  const double sites = static_cast<double>(curve.sites);
  est.n_star = c.n_star;
  est.p_c = c.n_star / sites;
  est.slope = slope;
  est.bracket_lo = a.n;
  est.crossings = crossings.size();
  est.side = curve.side;
  for (const CurvePoint& p : pts) est.samples += p.samples;
  if (slope != 0.0) {
    est.stat_err = sigma / std::abs(slope) / sites;
    est.sys_err = target.error / std::abs(slope) / sites;
  } else {
    est.stat_err = est.sys_err = std::numeric_limits<double>::infinity();
  }
  est.total_err = std::hypot(est.stat_err, est.sys_err);
  return est;
}

std::optional<double> batch_means_stderr(std::span<const SweepCounters> batches, std::size_t n) {
  std::vector<double> values;
  for (const SweepCounters& b : batches)
    if (const auto r = estimate_R(b, n)) values.push_back(r->value);
  if (values.size() < 2) return std::nullopt;
  const double k = static_cast<double>(values.size());
  double mean = 0;
  for (double v : values) mean += v;
  mean /= k;
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (k - 1.0) / k);
}

std::string format_curve_csv(const SpanningCurve& curve) {
  std::string out = "n,p,R,stderr\n";
  char line[160];
  for (const CurvePoint& p : curve.points) {
    std::snprintf(line, sizeof line, "%zu,%.10f,%.9f,%.9f\n", p.n, p.p, p.R, p.std_error);
    out += line;
  }
  return out;
}

std::string format_estimate_footer(const ThresholdEstimate& est) {
  char line[400];
  std::snprintf(line, sizeof line,
                "# p_c=%.9f stat_err=%.3e sys_err=%.3e total_err=%.3e n_star=%.4f slope=%.6e "
                "L=%u samples=%llu crossings=%zu\n",
                est.p_c, est.stat_err, est.sys_err, est.total_err, est.n_star, est.slope, est.side,
                static_cast<unsigned long long>(est.samples), est.crossings);
  return line;
}

}  // namespace percsweep
