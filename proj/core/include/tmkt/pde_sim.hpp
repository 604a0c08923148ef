#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmkt/dispersion.hpp"
#include "tmkt/kinetics.hpp"
#include "tmkt/patch.hpp"

namespace tmkt {

/// n cells of width h = L/n on [0, L]; values live at cell centres
/// x_i = (i + 1/2) h.
class Grid1D {
 public:
  static constexpr std::size_t kMinCells = 16;

  Grid1D(double L, std::size_t n);

  [[nodiscard]] double length() const { return L_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] double h() const { return L_ / static_cast<double>(n_); }
  [[nodiscard]] double x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h(); }

 private:
  double L_;
  std::size_t n_;
};

/// Species-major storage: component(s)[i] is species s at cell i.
class Field {
 public:
  Field(std::size_t species, std::size_t n, double fill = 0.0);

  [[nodiscard]] std::size_t species() const { return species_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::span<double> component(std::size_t s) {
    return {data_.data() + s * n_, n_};
  }
  [[nodiscard]] std::span<const double> component(std::size_t s) const {
    return {data_.data() + s * n_, n_};
  }
  [[nodiscard]] std::span<double> data() { return data_; }
  [[nodiscard]] std::span<const double> data() const { return data_; }

 private:
  std::size_t species_;
  std::size_t n_;
  std::vector<double> data_;
};

/// Second-order zero-flux Laplacian: ghost cells mirror the boundary values,
/// so out[0] = (f[1] - f[0])/h^2 and out[n-1] = (f[n-2] - f[n-1])/h^2.
/// The cell sum of the result telescopes to zero.
void laplacian_neumann(std::span<const double> f, double h, std::span<double> out);
std::vector<double> laplacian_neumann(std::span<const double> f, double h);

enum class SimModel { simple, ratio, patch };

std::string_view to_string(SimModel m);

/// A reaction-cross-diffusion system on a line. The patch model carries four
/// species (u1, v1, u2, v2) and requires equal diffusion blocks.
struct SimSystem {
  SimModel model = SimModel::ratio;
  KineticParams kinetics;
  DiffusionMatrix2 diffusion;
  std::optional<PatchParams> patch;
  /// Country-2 block in the common coordinate; defaults to `diffusion`.
  std::optional<DiffusionMatrix2> diffusion_country2;
  Reaction reaction = Reaction::enabled;

  [[nodiscard]] std::size_t species() const { return model == SimModel::patch ? 4 : 2; }
};

/// Throws PreconditionError / EqualDiffusionError for inconsistent systems.
void validate(const SimSystem& system);

/// Spatially constant equilibrium per species. Throws PreconditionError
/// when the interior state is not positive.
std::vector<double> system_equilibrium(const SimSystem& system);

/// safety * h^2 / (2 * max row sum of |D|)
double stable_dt_bound(const SimSystem& system, const Grid1D& grid, double safety);

enum class StepStatus { ok, diverged };

/// Classical RK4 on the method-of-lines system with reusable stage buffers.
class Integrator {
 public:
  /// `scale` sets the divergence guard: any |value| above 1e6 * scale (or a
  /// non-finite value) reports `diverged`.
  Integrator(SimSystem system, Grid1D grid, double scale);

  /// Time derivative of the semi-discrete system.
  void rhs(const Field& in, Field& out) const;
  [[nodiscard]] StepStatus step(Field& fields, double dt);

  [[nodiscard]] const SimSystem& system() const { return system_; }
  [[nodiscard]] const Grid1D& grid() const { return grid_; }

 private:
  SimSystem system_;
  Grid1D grid_;
  double limit_;
  Field k1_, k2_, k3_, k4_, stage_;
  mutable Field lap_;
};

/// One RK4 step in place; the guard scale is the largest |value| of the input.
[[nodiscard]] StepStatus step(const SimSystem& system, const Grid1D& grid, Field& fields,
                              double dt);

struct SimConfig {
  double t_end = 100.0;
  /// Explicit step; chosen from stable_dt_bound when empty.
  std::optional<double> dt;
  double safety = 0.4;
  /// Relative amplitude of the initial perturbation.
  double epsilon_ic = 1e-3;
  std::uint64_t seed = 0;
  /// Recording cadence in time units; 0 means t_end / 200.
  double record_every = 0.0;
  double tol_conv = 1e-6;
  bool keep_snapshots = false;

  void validate() const;
};

enum class SimVerdict { converged, pattern, diverged, undetermined };

std::string_view to_string(SimVerdict v);

struct DeviationSample {
  double t = 0.0;
  double deviation = 0.0;
};

struct Snapshot {
  double t = 0.0;
  Field fields;
};

struct SimResult {
  SimVerdict verdict = SimVerdict::undetermined;
  std::vector<double> equilibrium;
  /// max over species and cells of |state - equilibrium|, divided by the
  /// largest equilibrium component.
  std::vector<DeviationSample> deviation;
  double final_deviation = 0.0;
  Field final_fields{2, Grid1D::kMinCells};
  /// Dominant cosine mode k >= 1 of the final species-0 deviation.
  std::optional<int> dominant_mode;
  double dt = 0.0;
  std::size_t steps = 0;
  double t_reached = 0.0;
  /// Smallest field value seen at recording times; negative densities are
  /// reported here rather than rejected.
  double min_value = 0.0;
  std::vector<Snapshot> snapshots;
  std::string note;
};

/// equilibrium * (1 + epsilon * xi), xi uniform in [-1, 1] per cell and
/// species, drawn from a seeded mt19937_64.
Field perturbed_equilibrium(const SimSystem& system, const Grid1D& grid, double epsilon,
                            std::uint64_t seed);

/// Relative max-norm distance from the spatially constant equilibrium.
double relative_deviation(const Field& fields, std::span<const double> equilibrium);

/// argmax_k>=1 |sum_i f_i cos(pi k (i + 1/2)/n)|, smallest k on ties;
/// nullopt for a constant input.
std::optional<int> dominant_cosine_mode(std::span<const double> f);

SimResult simulate(const SimSystem& system, const Grid1D& grid, const SimConfig& config);
SimResult simulate(const SimSystem& system, const Grid1D& grid, const SimConfig& config,
                   Field initial);

}  // namespace tmkt
