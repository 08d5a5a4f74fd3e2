#include <array>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "percsweep/rng.hpp"
#include "support/mt19937ar.hpp"

using namespace percsweep;

TEST_CASE("MT19937 canonical 10000th output") {
  Mt19937 mt;
  std::uint32_t w = 0;
  for (int i = 0; i < 10000; ++i) w = mt();
  CHECK(w == 4123659995u);
}

TEST_CASE("MT19937 scalar seeding matches the reference routines") {
  for (std::uint32_t seed : {0u, 1u, 5489u, 19650218u, 0xffffffffu}) {
    Mt19937 ours(seed);
    reference::Mt19937ar ref;
    ref.init_genrand(seed);
    for (int i = 0; i < 5000; ++i) REQUIRE(ours() == ref.genrand_int32());
  }
}

TEST_CASE("MT19937 array seeding matches the reference routines") {
  const std::uint32_t key[] = {0x123, 0x234, 0x345, 0x456};
  Mt19937 ours(std::span<const std::uint32_t>(key, 4));
  reference::Mt19937ar ref;
  ref.init_by_array(key, 4);
  const std::uint32_t first[] = {1067595299u, 955945823u, 477289528u, 4107218783u, 4228976476u};
  for (std::uint32_t expect : first) {
    const std::uint32_t w = ours();
    CHECK(w == expect);
    CHECK(ref.genrand_int32() == expect);
  }
  for (int i = 0; i < 5000; ++i) REQUIRE(ours() == ref.genrand_int32());
}

TEST_CASE("MT19937 agrees with std::mt19937") {
  Mt19937 ours(42);
  std::mt19937 std_mt(42);
  for (int i = 0; i < 10000; ++i) REQUIRE(ours() == std_mt());
}

TEST_CASE("lagged Fibonacci follows the additive recurrence") {
  std::array<std::uint32_t, LaggedFibonacci::kLongLag> init{};
  reference::Mt19937ar fill;
  fill.init_genrand(9);
  for (auto& w : init) w = fill.genrand_int32();

  std::vector<std::uint32_t> x(init.begin(), init.end());
  LaggedFibonacci lfg(init, 1);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t n = x.size();
    x.push_back(x[n - 418] + x[n - 1279]);
    REQUIRE(lfg() == x.back());
  }
}

TEST_CASE("lagged Fibonacci decimation keeps every k-th output") {
  std::array<std::uint32_t, LaggedFibonacci::kLongLag> init{};
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = static_cast<std::uint32_t>(i * 2654435761u + 1);
  LaggedFibonacci raw(init, 1);
  LaggedFibonacci dec(init, 3);
  CHECK(dec.decimation() == 3);
  for (int i = 0; i < 1000; ++i) {
    raw();
    raw();
    REQUIRE(dec() == raw());
  }
}

TEST_CASE("seeded lagged Fibonacci streams differ by seed and repeat for equal seeds") {
  LaggedFibonacci a(1), b(1), c(2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint32_t wa = a();
    CHECK(wa == b());
    differs = differs || wa != c();
  }
  CHECK(differs);
}

TEST_CASE("bounded_uniform edge cases") {
  Mt19937 mt(7);
  for (int i = 0; i < 100; ++i) CHECK(bounded_uniform(mt, 1) == 0);
  Mt19937 a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(bounded_uniform(a, std::uint64_t{1} << 32) == b());
}

TEST_CASE("bounded_uniform uses the high bits") {
  // With m = 2 the result is the top bit of the accepted word.
  Mt19937 a(3), b(3);
  for (int i = 0; i < 1000; ++i) CHECK(bounded_uniform(a, 2) == (b() >> 31));
}

TEST_CASE("bounded_uniform is uniform for m = 3") {
  Mt19937 mt(11);
  std::array<double, 3> count{};
  const int draws = 300000;
  for (int i = 0; i < draws; ++i) count[bounded_uniform(mt, 3)] += 1;
  double chi2 = 0;
  for (double c : count) chi2 += (c - draws / 3.0) * (c - draws / 3.0) / (draws / 3.0);
  CHECK(chi2 < 2 + 4 * std::sqrt(4.0));
}

TEST_CASE("derive_seed separates streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 10; ++s)
    for (std::uint64_t k = 0; k < 10; ++k) seen.insert(derive_seed(s, k));
  CHECK(seen.size() == 100);
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));
}

TEST_CASE("generator names") {
  CHECK(parse_rng_kind("lfg") == RngKind::lagged_fibonacci);
  CHECK(std::string(to_string(RngKind::mt19937)) == "mt19937");
  CHECK(parse_pairing("xy") == Pairing::xy);
  CHECK_THROWS(parse_rng_kind("xorshift"));
}

TEST_CASE("RandomSource with a 32-bit seed is the plain MT stream") {
  RandomSource src(RngKind::mt19937, 5489, 2);
  Mt19937 mt;
  for (int i = 0; i < 100; ++i) CHECK(src() == mt());
}
