#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "percsweep/sweep.hpp"

namespace percsweep {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counter checkpoint. On disk:
///
///     <L> <n_lo> <n_hi>
///     # <key> <value>        (manifest, any number of lines)
///     <n> <s0> <s1> <s2>     (one line per n in the window)
struct Checkpoint {
  SweepCounters counters;
  std::vector<std::pair<std::string, std::string>> manifest;

  const std::string* find(std::string_view key) const;
  void set(std::string key, std::string value);
};

std::string format_checkpoint(const Checkpoint& cp);
Checkpoint parse_checkpoint(std::string_view text);

Checkpoint read_checkpoint_file(const std::string& path);
void write_checkpoint_file(const std::string& path, const Checkpoint& cp);

/// Sums counters of checkpoints with identical headers. The merged manifest
/// carries the summed cycle and step counts and the largest recorded tau, so
/// the result does not depend on argument order.
Checkpoint merge_checkpoints(std::span<const Checkpoint> parts);

}  // namespace percsweep
