#include "tmkt/migration.hpp"

#include <cmath>
#include <utility>

#include "tmkt/error.hpp"

namespace tmkt {

MigrationFunction MigrationFunction::rational(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw PreconditionError("rational migration function needs alpha > 1");
  }
  return {Family::rational, alpha};
}

MigrationFunction MigrationFunction::constant() { return {Family::constant, 1.0}; }

MigrationFunction MigrationFunction::custom(std::function<double(double)> rho,
                                            std::function<double(double)> derivative,
                                            double w_max, int samples) {
  if (!rho || !derivative) throw PreconditionError("custom migration function is empty");
  if (!(w_max > 0.0) || samples < 2) throw PreconditionError("bad validation grid");
  for (int i = 0; i < samples; ++i) {
    const double w = w_max * i / (samples - 1);
    if (!(rho(w) > 0.0)) throw PreconditionError("custom migration function: rho <= 0");
    if (!(derivative(w) < 0.0)) {
      throw PreconditionError("custom migration function: rho' >= 0");
    }
  }
  MigrationFunction f{Family::custom, 1.0};
  f.rho_ = std::move(rho);
  f.drho_ = std::move(derivative);
  return f;
}

double MigrationFunction::value(double w) const {
  switch (family_) {
    case Family::rational: return (alpha_ + w) / (1.0 + w);
    case Family::constant: return 1.0;
    case Family::custom: return rho_(w);
  }
  return 1.0;
}

double MigrationFunction::derivative(double w) const {
  switch (family_) {
    case Family::rational: return (1.0 - alpha_) / ((1.0 + w) * (1.0 + w));
    case Family::constant: return 0.0;
    case Family::custom: return drho_(w);
  }
  return 0.0;
}

std::string to_string(MigrationFunction::Family f) {
  switch (f) {
    case MigrationFunction::Family::rational: return "rational";
    case MigrationFunction::Family::constant: return "constant";
    case MigrationFunction::Family::custom: return "custom";
  }
  return "custom";
}

}  // namespace tmkt
