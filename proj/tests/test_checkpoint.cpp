#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "percsweep/checkpoint.hpp"

using namespace percsweep;

namespace {

Checkpoint random_checkpoint(std::uint32_t seed, std::size_t lo = 5, std::size_t hi = 12) {
  std::mt19937 rng(seed);
  Checkpoint cp;
  cp.counters = SweepCounters(4, lo, hi);
  for (std::size_t n = lo; n <= hi; ++n) {
    const std::uint64_t s0 = rng() % 1000;
    const std::uint64_t s1 = s0 ? rng() % (s0 + 1) : 0;
    const std::uint64_t s2 = s1 ? rng() % (s1 + 1) : 0;
    cp.counters.set(n, s0, s1, s2);
  }
  cp.set("cycles", std::to_string(rng() % 100));
  cp.set("steps", std::to_string(rng() % 1000));
  cp.set("tau", "0.75");
  return cp;
}

}  // namespace

TEST_CASE("format and parse round trip") {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const Checkpoint cp = random_checkpoint(seed);
    const std::string text = format_checkpoint(cp);
    const Checkpoint back = parse_checkpoint(text);
    CHECK(back.counters == cp.counters);
    CHECK(back.manifest == cp.manifest);
    CHECK(format_checkpoint(back) == text);
  }
}

TEST_CASE("checkpoint text layout") {
  Checkpoint cp;
  cp.counters = SweepCounters(2, 1, 2);
  cp.counters.set(1, 4, 0, 0);
  cp.counters.set(2, 8, 3, 1);
  cp.set("seed", "7");
  CHECK(format_checkpoint(cp) == "2 1 2\n# seed 7\n1 4 0 0\n2 8 3 1\n");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_checkpoint(""), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint("4 5\n"), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint("4 8 5\n"), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint("4 5 17\n"), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint("4 5 8\n9 1 1 1\n"), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint("4 5 8\n6 1 2 0\n"), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint("4 5 8\n6 1 x 0\n"), CheckpointError);
  CHECK_NOTHROW(parse_checkpoint("4 5 8\n\n# note free text here\n6 3 2 1\n"));
}

TEST_CASE("merge sums counters and bookkeeping") {
  const Checkpoint a = random_checkpoint(1), b = random_checkpoint(2);
  const std::vector<Checkpoint> parts{a, b};
  const Checkpoint m = merge_checkpoints(parts);
  for (std::size_t n = 5; n <= 12; ++n) CHECK(m.counters.s0(n) == a.counters.s0(n) + b.counters.s0(n));
  CHECK(*m.find("cycles") == std::to_string(std::stoull(*a.find("cycles")) + std::stoull(*b.find("cycles"))));
  CHECK(*m.find("merged") == "2");
  CHECK(*m.find("tau") == "0.75");
}

TEST_CASE("merge is commutative") {
  const Checkpoint a = random_checkpoint(3), b = random_checkpoint(4);
  const std::vector<Checkpoint> ab{a, b}, ba{b, a};
  CHECK(format_checkpoint(merge_checkpoints(ab)) == format_checkpoint(merge_checkpoints(ba)));
}

TEST_CASE("merging with an all-zero checkpoint is the identity on counters") {
  const Checkpoint a = random_checkpoint(5);
  Checkpoint zero;
  zero.counters = SweepCounters(4, 5, 12);
  const std::vector<Checkpoint> parts{a, zero};
  CHECK(merge_checkpoints(parts).counters == a.counters);
}

TEST_CASE("merge rejects different headers") {
  const std::vector<Checkpoint> parts{random_checkpoint(1, 5, 12), random_checkpoint(2, 5, 13)};
  CHECK_THROWS_AS(merge_checkpoints(parts), CheckpointError);
  CHECK_THROWS_AS(merge_checkpoints({}), CheckpointError);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "percsweep_checkpoint_test.txt";
  const Checkpoint a = random_checkpoint(6);
  write_checkpoint_file(path.string(), a);
  CHECK(format_checkpoint(read_checkpoint_file(path.string())) == format_checkpoint(a));
  std::filesystem::remove(path);
  CHECK_THROWS(read_checkpoint_file(path.string()));
}
