#pragma once

#include <functional>
#include <string>

namespace tmkt {

/// Positive non-increasing migration function rho(w) with analytic
/// derivative. Closed family: rational (alpha + w)/(1 + w) with alpha > 1,
/// and constant rho == 1 (pure self-diffusion between countries). Custom
/// pairs are accepted after sampling rho > 0 and rho' < 0 on a grid.
class MigrationFunction {
 public:
  enum class Family { rational, constant, custom };

  static MigrationFunction rational(double alpha);
  static MigrationFunction constant();
  /// Validates rho > 0 and rho' < 0 at `samples` points of [0, w_max].
  static MigrationFunction custom(std::function<double(double)> rho,
                                  std::function<double(double)> derivative,
                                  double w_max = 100.0, int samples = 1001);

  [[nodiscard]] double value(double w) const;
  [[nodiscard]] double derivative(double w) const;

  [[nodiscard]] Family family() const { return family_; }
  /// Rational-family parameter; 1 for the constant family.
  [[nodiscard]] double alpha() const { return alpha_; }

 private:
  MigrationFunction(Family family, double alpha) : family_(family), alpha_(alpha) {}

  Family family_;
  double alpha_;
  std::function<double(double)> rho_;
  std::function<double(double)> drho_;
};

std::string to_string(MigrationFunction::Family f);

}  // namespace tmkt
