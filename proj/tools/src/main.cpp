#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tmkt/cli/commands.hpp"
#include "tmkt/cli/config.hpp"
#include "tmkt/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Args {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string axis;
  std::string range;
  int steps = 0;
};

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--config", args.config, "JSON run configuration")->required();
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--seed", args.seed, "overrides simulation.seed");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tmkt::cli;

  CLI::App app{"tmkt: stability analysis and simulation of job/labour market models"};
  app.require_subcommand(1);
  Args args;
  auto* analyze = app.add_subcommand("analyze", "condition table, equilibria and spectra");
  auto* dispersion = app.add_subcommand("dispersion", "per-mode dispersion curve and Turing report");
  auto* patch = app.add_subcommand("patch-check", "two-country migration stability checks");
  auto* simulate = app.add_subcommand("simulate", "integrate the reaction-diffusion system");
  auto* sweep = app.add_subcommand("sweep", "scan one parameter and report condition margins");
  for (auto* cmd : {analyze, dispersion, patch, simulate, sweep}) add_common(cmd, args);
  sweep->add_option("--axis", args.axis, "parameter path, e.g. diffusion.d12")->required();
  sweep->add_option("--range", args.range, "lo:hi")->required();
  sweep->add_option("--steps", args.steps, "number of intervals")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig config = load_config(args.config);
    if (args.seed) config.simulation.seed = *args.seed;
    CommandOptions opts;
    if (!args.out.empty()) opts.out_dir = args.out;
    if (sweep->parsed()) {
      const auto [lo, hi] = parse_range(args.range);
      opts.sweep = SweepSpec{args.axis, lo, hi, args.steps};
    }

    if (analyze->parsed()) cmd_analyze(config, opts, std::cout);
    if (dispersion->parsed()) cmd_dispersion(config, opts, std::cout);
    if (patch->parsed()) cmd_patch_check(config, opts, std::cout);
    if (simulate->parsed()) cmd_simulate(config, opts, std::cout);
    if (sweep->parsed()) cmd_sweep(config, opts, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
