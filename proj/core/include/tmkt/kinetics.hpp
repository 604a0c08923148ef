#pragma once

#include <string>
#include <vector>

#include "tmkt/linalg.hpp"
#include "tmkt/report.hpp"

namespace tmkt {

/// Which functional response couples free jobs (u) and labour (v).
enum class Model {
  simple,  ///< linear response m*u*v
  ratio,   ///< ratio-dependent response m*u*v/(a*v + u)
};

std::string_view to_string(Model m);

/// Growth rate r, capacity K, interaction m, labour death rate d and
/// half-saturation a. All strictly positive; `a` is unused by the simple
/// model.
class KineticParams {
 public:
  KineticParams(double r, double K, double m, double d, double a = 1.0);

  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] double K() const { return K_; }
  [[nodiscard]] double m() const { return m_; }
  [[nodiscard]] double d() const { return d_; }
  [[nodiscard]] double a() const { return a_; }

 private:
  double r_;
  double K_;
  double m_;
  double d_;
  double a_;
};

/// Free-job density u and labour density v.
struct State2 {
  double u = 0.0;
  double v = 0.0;
};

/// u r (1 - u/K) - m u v,  m u v - d v
State2 simple_rhs(const KineticParams& p, State2 s);

/// Ratio-dependent right-hand side. The interaction u v/(a v + u) is
/// extended by continuity to 0 at the origin; throws DomainError when
/// a v + u == 0 elsewhere.
State2 ratio_rhs(const KineticParams& p, State2 s);

State2 rhs(Model model, const KineticParams& p, State2 s);

struct Equilibrium {
  std::string label;
  State2 state;
  /// Both components strictly positive.
  bool positive = false;
  std::string note;
};

/// E0, E1 and the interior state E_bar = (d/m, (K m r - d r)/(K m^2)).
std::vector<Equilibrium> simple_equilibria(const KineticParams& p);

/// E0 (continuous extension only), E1 and the interior state E_r.
std::vector<Equilibrium> ratio_equilibria(const KineticParams& p);

/// The closed-form interior state of either model, positive or not.
State2 interior_equilibrium(Model model, const KineticParams& p);
bool interior_is_positive(Model model, const KineticParams& p);

/// Analytic Jacobian of the right-hand side at `s`.
Matrix2 jacobian_at(Model model, const KineticParams& p, State2 s);

/// Closed-form linearization at the interior equilibrium:
/// simple: [[-dr/(Km), -d], [r(1 - d/(Km)), 0]]
/// ratio:  [[(m^2-d^2)/(ma) - r, -d^2/m], [(d-m)^2/(am), -d(m-d)/m]]
Matrix2 interior_jacobian(Model model, const KineticParams& p);

/// Named kinetic conditions with signed margins and the spectrum of the
/// interior linearization. Simple: h:2. Ratio: h:3rd, h:2rd, h:4rd, plusmas.
StabilityReport check_kinetic_stability(Model model, const KineticParams& p,
                                        double eps = kDefaultMarginEps);

/// The ratio-model kinetic condition list, shared with the patch modules.
std::vector<ConditionResult> ratio_kinetic_conditions(const KineticParams& p);

}  // namespace tmkt
