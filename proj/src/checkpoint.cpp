#include "percsweep/checkpoint.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>

namespace percsweep {

const std::string* Checkpoint::find(std::string_view key) const {
  for (const auto& [k, v] : manifest)
    if (k == key) return &v;
  return nullptr;
}

void Checkpoint::set(std::string key, std::string value) {
  for (auto& [k, v] : manifest) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  manifest.emplace_back(std::move(key), std::move(value));
}

std::string format_checkpoint(const Checkpoint& cp) {
  const SweepCounters& c = cp.counters;
  std::ostringstream out;
  out << c.side() << ' ' << c.n_lo() << ' ' << c.n_hi() << '\n';
  for (const auto& [k, v] : cp.manifest) out << "# " << k << ' ' << v << '\n';
  if (!c.empty()) {
    for (std::size_t n = c.n_lo(); n <= c.n_hi(); ++n)
      out << n << ' ' << c.s0(n) << ' ' << c.s1(n) << ' ' << c.s2(n) << '\n';
  }
  return out.str();
}

Checkpoint parse_checkpoint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Checkpoint cp;

  if (!std::getline(in, line)) throw CheckpointError("checkpoint is empty");
  std::uint64_t side = 0, n_lo = 0, n_hi = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> side >> n_lo >> n_hi) || (header >> extra))
      throw CheckpointError("checkpoint header must be 'L n_lo n_hi'");
    if (side < 2 || n_lo > n_hi || n_hi > side * side)
      throw CheckpointError("checkpoint header out of range");
  }
  cp.counters = SweepCounters(static_cast<std::uint32_t>(side), n_lo, n_hi);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream comment(line.substr(1));
      std::string key, value;
      comment >> key;
      std::getline(comment >> std::ws, value);
      if (!key.empty()) cp.manifest.emplace_back(key, value);
      continue;
    }
    std::istringstream row(line);
    std::uint64_t n = 0, s0 = 0, s1 = 0, s2 = 0;
    std::string extra;
    if (!(row >> n >> s0 >> s1 >> s2) || (row >> extra))
      throw CheckpointError("malformed counter row at line " + std::to_string(line_no));
    if (!cp.counters.contains(n))
      throw CheckpointError("counter row outside window at line " + std::to_string(line_no));
    try {
      cp.counters.set(n, s0, s1, s2);
    } catch (const SweepError& e) {
      throw CheckpointError(std::string(e.what()) + " at line " + std::to_string(line_no));
    }
  }
  return cp;
}

Checkpoint read_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

void write_checkpoint_file(const std::string& path, const Checkpoint& cp) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path);
  out << format_checkpoint(cp);
  if (!out) throw CheckpointError("write failed: " + path);
}

namespace {

std::optional<std::uint64_t> as_count(const std::string* v) {
  if (!v) return std::nullopt;
  try {
    return std::stoull(*v);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

Checkpoint merge_checkpoints(std::span<const Checkpoint> parts) {
  if (parts.empty()) throw CheckpointError("nothing to merge");
  Checkpoint merged;
  merged.counters = parts.front().counters;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const SweepCounters& c = parts[i].counters;
    if (c.side() != merged.counters.side() || c.n_lo() != merged.counters.n_lo() ||
        c.n_hi() != merged.counters.n_hi())
      throw CheckpointError("checkpoint headers differ; cannot merge");
    merged.counters += c;
  }

  std::optional<std::uint64_t> cycles = 0, steps = 0;
  std::optional<double> tau;
  for (const Checkpoint& p : parts) {
    const auto pc = as_count(p.find("cycles"));
    const auto ps = as_count(p.find("steps"));
    cycles = (cycles && pc) ? std::optional(*cycles + *pc) : std::nullopt;
    steps = (steps && ps) ? std::optional(*steps + *ps) : std::nullopt;
    if (const std::string* t = p.find("tau")) {
      const double v = std::stod(*t);
      tau = tau ? std::max(*tau, v) : v;
    }
  }
  merged.set("merged", std::to_string(parts.size()));
  if (cycles) merged.set("cycles", std::to_string(*cycles));
  if (steps) merged.set("steps", std::to_string(*steps));
  if (tau) {
    std::ostringstream t;
    t.precision(6);
    t << *tau;
    merged.set("tau", t.str());
  }
  return merged;
}

}  // namespace percsweep
