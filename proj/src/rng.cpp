#include "percsweep/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace percsweep {

void Mt19937::seed_scalar(std::uint32_t seed) {
  state_[0] = seed;
  for (std::size_t i = 1; i < kStateSize; ++i)
    state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) + static_cast<std::uint32_t>(i);
  index_ = kStateSize;
}

void Mt19937::seed_array(std::span<const std::uint32_t> key) {
  seed_scalar(19650218u);
  std::size_t i = 1;
  std::size_t j = 0;
  const std::size_t len = key.size();
  for (std::size_t k = std::max(kStateSize, len); k > 0; --k) {
    state_[i] = (state_[i] ^ ((state_[i - 1] ^ (state_[i - 1] >> 30)) * 1664525u)) + key[j] +
                static_cast<std::uint32_t>(j);
    ++i;
    ++j;
    if (i >= kStateSize) {
      state_[0] = state_[kStateSize - 1];
      i = 1;
    }
    if (j >= len) j = 0;
  }
  for (std::size_t k = kStateSize - 1; k > 0; --k) {
    state_[i] = (state_[i] ^ ((state_[i - 1] ^ (state_[i - 1] >> 30)) * 1566083941u)) -
                static_cast<std::uint32_t>(i);
    ++i;
    if (i >= kStateSize) {
      state_[0] = state_[kStateSize - 1];
      i = 1;
    }
  }
  state_[0] = 0x80000000u;
  index_ = kStateSize;
}

void Mt19937::twist() {
  constexpr std::uint32_t kUpper = 0x80000000u;
  constexpr std::uint32_t kLower = 0x7fffffffu;
  constexpr std::uint32_t kMatrix = 0x9908b0dfu;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    const std::uint32_t y = (state_[i] & kUpper) | (state_[(i + 1) % kStateSize] & kLower);
    state_[i] = state_[(i + kShift) % kStateSize] ^ (y >> 1) ^ ((y & 1u) ? kMatrix : 0u);
  }
  index_ = 0;
}

namespace {

std::array<std::uint32_t, 2> split_words(std::uint64_t v) {
  return {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v >> 32)};
}

}  // namespace

LaggedFibonacci::LaggedFibonacci(std::uint64_t seed, unsigned decimation) : decimation_(decimation) {
  if (decimation == 0) throw std::invalid_argument("lagged-Fibonacci decimation must be >= 1");
  const auto key = split_words(seed);
  Mt19937 filler{std::span<const std::uint32_t>(key)};
  for (auto& word : ring_) word = filler();
  // At least one odd word keeps the low bit off its short cycle.
  ring_[0] |= 1u;
  for (std::size_t i = 0; i < 10 * kLongLag; ++i) raw();
}

LaggedFibonacci::LaggedFibonacci(std::span<const std::uint32_t, kLongLag> initial, unsigned decimation)
    : decimation_(decimation) {
  if (decimation == 0) throw std::invalid_argument("lagged-Fibonacci decimation must be >= 1");
  std::copy(initial.begin(), initial.end(), ring_.begin());
}

const char* to_string(RngKind k) { return k == RngKind::mt19937 ? "mt19937" : "lfg"; }
const char* to_string(Pairing p) { return p == Pairing::single ? "single" : "xy"; }

RngKind parse_rng_kind(const std::string& s) {
  if (s == "mt19937") return RngKind::mt19937;
  if (s == "lfg") return RngKind::lagged_fibonacci;
  throw std::invalid_argument("unknown rng kind: " + s);
}

Pairing parse_pairing(const std::string& s) {
  if (s == "single") return Pairing::single;
  if (s == "xy") return Pairing::xy;
  throw std::invalid_argument("unknown pairing mode: " + s);
}

namespace {

std::variant<Mt19937, LaggedFibonacci> make_generator(RngKind kind, std::uint64_t seed,
                                                      unsigned decimation) {
  if (kind == RngKind::lagged_fibonacci) return LaggedFibonacci(seed, decimation);
  if (seed <= 0xffffffffu) return Mt19937(static_cast<std::uint32_t>(seed));
  const auto key = split_words(seed);
  return Mt19937(std::span<const std::uint32_t>(key));
}

}  // namespace

RandomSource::RandomSource(RngKind kind, std::uint64_t seed, unsigned decimation)
    : gen_(make_generator(kind, seed, decimation)) {}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RngStream::RngStream(const RngConfig& config)
    : config_(config),
      primary_(config.kind,
               config.pairing == Pairing::single ? config.seed : derive_seed(config.seed, 1),
               config.decimation),
      secondary_(config.kind, derive_seed(config.seed, 2), config.decimation) {}

}  // namespace percsweep
