#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmkt/cli/config.hpp"
#include "tmkt/dispersion.hpp"
#include "tmkt/kinetics.hpp"
#include "tmkt/report.hpp"

namespace tmkt::cli {

/// Everything `analyze` computes for one configuration.
struct Evaluation {
  std::vector<Equilibrium> equilibria;
  StabilityReport kinetic;
  /// Single-country cross-diffusion conditions (h:5 or h:7rd, detD).
  std::vector<ConditionResult> cross_diffusion;
  std::optional<TuringReport> turing;
  int k_max = 0;
  std::optional<StabilityReport> thm42;
  std::optional<StabilityReport> thm43;
  std::optional<StabilityReport> thm44;
  /// Why the two-country diffusion check was skipped.
  std::string thm44_skipped;
  Verdict verdict = Verdict::marginal;
  std::vector<std::string> notes;

  /// All evaluated conditions, one per id, in registry order.
  [[nodiscard]] std::vector<ConditionResult> merged_conditions() const;
};

Evaluation evaluate(const RunConfig& config);

struct SweepSpec {
  std::string axis;
  double lo = 0.0;
  double hi = 0.0;
  /// Number of intervals; steps + 1 points including both ends.
  int steps = 0;
};

/// Parses "lo:hi"; throws ConfigError unless lo < hi and both are finite.
std::pair<double, double> parse_range(const std::string& text);

/// Worker count for sweeps: TM_THREADS when set to a positive integer,
/// otherwise the hardware concurrency, never more than `jobs`.
unsigned sweep_threads(std::size_t jobs);

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<SweepSpec> sweep;
};

/// Each command writes its JSON summary to `out` and its files to the output
/// directory. Throws ConfigError for inputs the command cannot use.
void cmd_analyze(const RunConfig& config, const CommandOptions& opts, std::ostream& out);
void cmd_dispersion(const RunConfig& config, const CommandOptions& opts, std::ostream& out);
void cmd_patch_check(const RunConfig& config, const CommandOptions& opts, std::ostream& out);
void cmd_simulate(const RunConfig& config, const CommandOptions& opts, std::ostream& out);
void cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out);

}  // namespace tmkt::cli
