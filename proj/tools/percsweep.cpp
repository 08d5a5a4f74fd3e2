// percsweep: bidirectional-sweep Monte Carlo for square-lattice site
// percolation. See README.md for the subcommands and exit codes.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percsweep/commands.hpp"
#include "percsweep/verify.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_interrupt(int) { g_stop.store(true); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace percsweep;

  CLI::App app{"Bidirectional-sweep Monte Carlo for square site percolation"};
  app.require_subcommand(1);

  // sweep
  RunConfig run;
  std::string rng_name = "mt19937", pairing_name = "single", mode_name = "window", sweep_out;
  std::size_t n_min = 0, n_max = 0;
  auto* sweep = app.add_subcommand("sweep", "Run sweeps and write a counter checkpoint");
  sweep->add_option("--size", run.side, "Lattice side L")->required();
  auto* n_min_opt = sweep->add_option("--n-min", n_min, "Lower turning point");
  auto* n_max_opt = sweep->add_option("--n-max", n_max, "Upper turning point");
  sweep->add_flag("--auto-window", run.auto_window, "Window centred on the threshold prior, width 4 N L^-3/4");
  sweep->add_option("--auto-centre", run.auto_centre, "Centre of the automatic window as a fraction of N");
  sweep->add_option("--cycles", run.cycles, "Number of up-down cycles")->required();
  sweep->add_option("--seed", run.seed, "Random seed");
  sweep->add_option("--rng", rng_name, "Generator")->check(CLI::IsMember({"mt19937", "lfg"}));
  sweep->add_option("--pairing", pairing_name, "Site selection streams")->check(CLI::IsMember({"single", "xy"}));
  sweep->add_option("--decimation", run.decimation, "Lagged-Fibonacci: keep one output in this many");
  sweep->add_option("--mode", mode_name, "Turning conditions")->check(CLI::IsMember({"window", "selforg"}));
  sweep->add_option("--equilibration", run.equilibration_cycles, "Unrecorded cycles before sampling");
  sweep->add_option("--shards", run.shards, "Independent engines with derived seeds");
  sweep->add_option("--checkpoint-interval", run.checkpoint_interval, "Cycles per shard between checkpoint writes");
  sweep->add_option("--out", sweep_out, "Checkpoint path (default stdout)");

  // merge
  std::vector<std::string> merge_inputs;
  std::string merge_out;
  auto* merge = app.add_subcommand("merge", "Sum checkpoints with identical headers");
  merge->add_option("files", merge_inputs, "Checkpoint files")->required()->check(CLI::ExistingFile);
  merge->add_option("--out", merge_out, "Merged checkpoint path (default stdout)");

  // estimate
  std::string estimate_input, estimate_out;
  CrossingCriterion criterion;
  double tau = 0.0;
  auto* estimate = app.add_subcommand("estimate", "Spanning curve and threshold estimate from a checkpoint");
  estimate->add_option("checkpoint", estimate_input, "Checkpoint file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--b", criterion.b, "Finite-size amplitude b in 0.5 + b/L");
  estimate->add_option("--b-err", criterion.b_err, "Uncertainty of b");
  auto* tau_opt = estimate->add_option("--tau", tau, "Override the checkpoint's autocorrelation time");
  estimate->add_option("--out", estimate_out, "CSV path (default stdout)");

  // verify
  VerifyScale scale;
  std::string fault_name = "none";
  auto* verify = app.add_subcommand("verify", "Run the oracle, census, uniformity and RNG suites");
  verify->add_option("--ops", scale.graph_ops, "Random graph operations");
  verify->add_option("--vertices", scale.graph_vertices, "Graph vertex capacity");
  verify->add_option("--steps", scale.lattice_steps, "Lattice occupy/deoccupy steps");
  verify->add_option("--size", scale.lattice_side, "Lattice side for the oracle walk");
  verify->add_option("--check-every", scale.check_every, "Steps between BFS re-checks");
  verify->add_option("--cycles", scale.uniform_cycles, "Cycles for the uniformity test");
  verify->add_option("--seed", scale.seed, "Random seed");
  verify->add_option("--inject-fault", fault_name, "Deliberate defect")
      ->check(CLI::IsMember({"none", "skip-tally-decrement"}));

  // bench
  std::vector<std::uint32_t> bench_sizes{32, 64, 128, 256};
  std::uint64_t bench_cycles = 100, bench_seed = 1;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Steps per second for up, down and full cycles");
  bench->add_option("--sizes", bench_sizes, "Lattice sides")->delimiter(',');
  bench->add_option("--cycles", bench_cycles, "Cycles per side");
  bench->add_option("--seed", bench_seed, "Random seed");
  bench->add_option("--out", bench_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::kUsage;
  }

  try {
    if (*sweep) {
      run.rng = parse_rng_kind(rng_name);
      run.pairing = parse_pairing(pairing_name);
      run.mode = mode_name == "window" ? SweepMode::fixed_window : SweepMode::self_organized;
      if (*n_min_opt) run.n_lo = n_min;
      if (*n_max_opt) run.n_hi = n_max;
      std::signal(SIGINT, on_interrupt);
      std::signal(SIGTERM, on_interrupt);

      auto write = [&](const Checkpoint& cp) {
        if (!sweep_out.empty()) write_checkpoint_file(sweep_out, cp);
      };
      const SweepOutcome outcome = run_sweep(run, &g_stop, write);
      emit(sweep_out, format_checkpoint(outcome.checkpoint));
      std::fprintf(stderr, "# wall_time_s %.3f\n", outcome.wall_seconds);
      if (outcome.partial) {
        std::fprintf(stderr, "interrupted: partial checkpoint written\n");
        return exit_code::kInterrupted;
      }
      return exit_code::kSuccess;
    }

    if (*merge) {
      std::vector<Checkpoint> parts;
      for (const std::string& f : merge_inputs) parts.push_back(read_checkpoint_file(f));
      emit(merge_out, format_checkpoint(merge_checkpoints(parts)));
      return exit_code::kSuccess;
    }

    if (*estimate) {
      const Checkpoint cp = read_checkpoint_file(estimate_input);
      const EstimateOutcome out =
          run_estimate(cp, criterion, *tau_opt ? std::optional<double>(tau) : std::nullopt);
      emit(estimate_out, out.report);
      if (out.failure) {
        std::fprintf(stderr, "no crossing of the target; nearest approach at n=%zu (R=%.6f)\n",
                     out.failure->nearest_n, out.failure->nearest_R);
        return exit_code::kNoCrossing;
      }
      return exit_code::kSuccess;
    }

    if (*verify) {
      if (fault_name == "skip-tally-decrement") scale.fault = LatticeFault::skip_tally_decrement;
      bool ok = true;
      for (const SuiteResult& r : run_verification(scale)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        ok = ok && r.passed;
      }
      return ok ? exit_code::kSuccess : exit_code::kVerificationFailed;
    }

    if (*bench) {
      const auto rows = run_bench(bench_sizes, bench_cycles, bench_seed);
      emit(bench_out, format_bench_csv(rows));
      return exit_code::kSuccess;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return exit_code::kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code::kRuntimeError;
  }
  return exit_code::kUsage;
}
