#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tmkt/dispersion.hpp"
#include "tmkt/kinetics.hpp"
#include "tmkt/migration.hpp"
#include "tmkt/patch.hpp"
#include "tmkt/pde_sim.hpp"

namespace tmkt::cli {

/// Bad input: malformed JSON, missing or unknown keys, invalid values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { simple, ratio, patch };
std::string_view to_string(ModelKind m);

/// Raw coefficients as read; det D > 0 is checked only by the commands that
/// need a well-posed operator.
struct DiffusionCoeffs {
  double d11 = 0.0;
  double d12 = 0.0;
  double d21 = 0.0;
  double d22 = 0.0;

  [[nodiscard]] double det() const { return d11 * d22 - d12 * d21; }
  [[nodiscard]] DiffusionMatrix2 matrix() const { return {d11, d12, d21, d22}; }
};

struct KineticCoeffs {
  double r = 0.0;
  double K = 0.0;
  double m = 0.0;
  double d = 0.0;
  double a = 1.0;

  [[nodiscard]] KineticParams params() const { return {r, K, m, d, a}; }
};

struct MigrationSpec {
  MigrationFunction::Family family = MigrationFunction::Family::rational;
  double alpha = 2.0;

  [[nodiscard]] MigrationFunction function() const;
};

struct PatchCoeffs {
  double delta1 = 0.0;
  double delta2 = 0.0;
  MigrationSpec rho1;
  MigrationSpec rho2;

  [[nodiscard]] PatchParams params() const;
};

struct DomainSpec {
  double L = 100.0;
  /// Second country length; defaults to L.
  std::optional<double> L2;
  /// Highest mode; chosen from the dispersion relation when absent.
  std::optional<int> k_max;
  std::size_t n = 512;
};

struct RunConfig {
  ModelKind model = ModelKind::ratio;
  KineticCoeffs kinetic;
  std::optional<DiffusionCoeffs> diffusion;
  /// Country-2 block in its own coordinate.
  std::optional<DiffusionCoeffs> diffusion2;
  std::optional<PatchCoeffs> patch;
  DomainSpec domain;
  SimConfig simulation;
  bool write_snapshots = false;
  std::optional<std::filesystem::path> output_dir;

  [[nodiscard]] Model kinetic_model() const {
    return model == ModelKind::simple ? Model::simple : Model::ratio;
  }
};

/// Strict parse: schema_version must be 1 and unknown keys are rejected.
/// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Sets the value addressed by `path` (e.g. "diffusion.d12",
/// "patch.rho1.alpha"). Throws ConfigError for unknown paths or absent
/// sections.
void set_parameter(RunConfig& config, std::string_view path, double value);
/// Reads the value addressed by `path`.
double get_parameter(const RunConfig& config, std::string_view path);

}  // namespace tmkt::cli
