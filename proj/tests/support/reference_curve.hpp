#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "percsweep/checkpoint.hpp"

namespace reference {

// R at three consecutive n straddling the L=2048 crossing, with 5e8
// observations per n (stderr 2.2e-5 at tau = 1/2).
inline constexpr std::uint32_t kLargeSide = 2048;
inline constexpr std::array<std::pair<std::size_t, double>, 3> kLargePoints{
    {{2486156, 0.500097}, {2486157, 0.500153}, {2486158, 0.500209}}};
inline constexpr std::uint64_t kLargeS0 = 500'000'000;

inline percsweep::Checkpoint large_lattice_checkpoint() {
  percsweep::Checkpoint cp;
  cp.counters = percsweep::SweepCounters(kLargeSide, kLargePoints.front().first, kLargePoints.back().first);
  for (const auto& [n, r] : kLargePoints) {
    // (s1 + s2) / (2 s0) = r with s2 = s0 / 2.
    const auto sum = static_cast<std::uint64_t>(r * 2.0 * static_cast<double>(kLargeS0) + 0.5);
    const std::uint64_t s2 = kLargeS0 / 2;
    cp.counters.set(n, kLargeS0, sum - s2, s2);
  }
  cp.set("size", "2048");
  cp.set("tau", "0.5");
  return cp;
}

}  // namespace reference
