#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

namespace percsweep {

/// MT19937 (Matsumoto & Nishimura), 32-bit output.
class Mt19937 {
 public:
  static constexpr std::uint32_t kDefaultSeed = 5489u;

  explicit Mt19937(std::uint32_t seed = kDefaultSeed) { seed_scalar(seed); }
  explicit Mt19937(std::span<const std::uint32_t> key) { seed_array(key); }

  void seed_scalar(std::uint32_t seed);
  void seed_array(std::span<const std::uint32_t> key);

  std::uint32_t operator()() {
    if (index_ >= kStateSize) twist();
    std::uint32_t y = state_[index_++];
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
  }

 private:
  static constexpr std::size_t kStateSize = 624;
  static constexpr std::size_t kShift = 397;

  void twist();

  std::array<std::uint32_t, kStateSize> state_{};
  std::size_t index_ = kStateSize + 1;
};

/// Mitchell-Moore additive lagged-Fibonacci generator,
/// x[n] = x[n-418] + x[n-1279] mod 2^32, keeping one output in `decimation`.
class LaggedFibonacci {
 public:
  static constexpr std::size_t kShortLag = 418;
  static constexpr std::size_t kLongLag = 1279;

  explicit LaggedFibonacci(std::uint64_t seed, unsigned decimation = 2);
  LaggedFibonacci(std::span<const std::uint32_t, kLongLag> initial, unsigned decimation);

  std::uint32_t operator()() {
    for (unsigned i = 1; i < decimation_; ++i) raw();
    return raw();
  }

  /// One undecimated step of the recurrence.
  std::uint32_t raw() {
    const std::size_t short_pos = pos_ + (kLongLag - kShortLag);
    const std::uint32_t value =
        ring_[pos_] + ring_[short_pos >= kLongLag ? short_pos - kLongLag : short_pos];
    ring_[pos_] = value;
    if (++pos_ == kLongLag) pos_ = 0;
    return value;
  }

  unsigned decimation() const { return decimation_; }

 private:
  std::array<std::uint32_t, kLongLag> ring_{};
  std::size_t pos_ = 0;  // slot holding x[n-1279]
  unsigned decimation_;
};

enum class RngKind { mt19937, lagged_fibonacci };
enum class Pairing { single, xy };

const char* to_string(RngKind k);
const char* to_string(Pairing p);
RngKind parse_rng_kind(const std::string& s);
Pairing parse_pairing(const std::string& s);

/// One 32-bit word source of either kind.
class RandomSource {
 public:
  RandomSource(RngKind kind, std::uint64_t seed, unsigned decimation);

  std::uint32_t operator()() {
    if (auto* mt = std::get_if<Mt19937>(&gen_)) return (*mt)();
    return std::get<LaggedFibonacci>(gen_)();
  }

 private:
  std::variant<Mt19937, LaggedFibonacci> gen_;
};

struct RngConfig {
  RngKind kind = RngKind::mt19937;
  std::uint64_t seed = Mt19937::kDefaultSeed;
  Pairing pairing = Pairing::single;
  unsigned decimation = 2;  // lagged-Fibonacci only
};

/// All randomness for one engine: a single stream, or an independent pair
/// used for x and y coordinates.
class RngStream {
 public:
  explicit RngStream(const RngConfig& config);

  const RngConfig& config() const { return config_; }
  RandomSource& primary() { return primary_; }
  RandomSource& x_source() { return primary_; }
  RandomSource& y_source() { return secondary_; }

 private:
  RngConfig config_;
  RandomSource primary_;
  RandomSource secondary_;
};

/// splitmix64 finaliser over (seed, stream); used to derive shard and
/// coordinate-stream seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Exactly uniform integer in [0, m) for 1 <= m <= 2^32. Words in the top
/// partial bucket are rejected; the result is taken from the high bits.
template <class Gen>
std::uint32_t bounded_uniform(Gen& gen, std::uint64_t m) {
  constexpr std::uint64_t kRange = std::uint64_t{1} << 32;
  const std::uint64_t bucket = kRange / m;
  const std::uint64_t limit = bucket * m;
  for (;;) {
    const std::uint64_t w = gen();
    if (w < limit) return static_cast<std::uint32_t>(w / bucket);
  }
}

}  // namespace percsweep
