#pragma once

#include <map>
#include <string>
#include <vector>

#include "burescone/bures.hpp"
#include "burescone/cone.hpp"
#include "burescone/lindblad.hpp"

namespace burescone {

/// One named pass/fail record: |measured - target| <= tolerance, with a
/// self-contained provenance note stating where the target comes from.
struct ScenarioCheck {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;

  static ScenarioCheck against(std::string name, double measured, double target,
                               double tolerance, std::string provenance);
  /// Bound-style record: pass iff measured <= bound (target = bound).
  static ScenarioCheck below(std::string name, double measured, double bound,
                             std::string provenance);
  /// Witness-style record: pass iff measured >= bound (target = bound).
  static ScenarioCheck above(std::string name, double measured, double bound,
                             std::string provenance);
};

/// Named column set; rows all have columns.size() entries. source describes
/// the quantity in formulas, units_note the scales of the columns.
struct ScenarioTable {
  std::string name;
  std::string source;
  std::string units_note;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ScenarioResult {
  std::string name;
  std::map<std::string, double> parameters;
  std::vector<ScenarioTable> tables;
  std::vector<ScenarioCheck> checks;

  bool all_passed() const;
};

// ---------------------------------------------------------------------------
// fitting helpers (exposed for tests)

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares straight line y = slope x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct SineFit {
  double omega = 0.0;
  double delta = 0.0;
  double rms = 0.0;  // root-mean-square residual of the best fit
};

/// Best fit of samples to the two-parameter radial geodesic family
/// r(t) = sin(omega t + delta), by multistart Gauss-Newton.
SineFit fit_radial_sine(const std::vector<double>& t, const std::vector<double>& r);

/// |du/dt| / (sqrt(g_rr) |dr/dt|) along a uniform-grid qubit trajectory, with
/// u = arcsin(sqrt(lambda_min)); fourth-order central differences, one value
/// per interior sample (two samples trimmed at each end). Identically 1 for
/// Bures geodesics: the flattened chart has ds = du along radial motion.
std::vector<double> flattened_speed_ratio(const Trajectory& traj);

// ---------------------------------------------------------------------------
// scenario runners

/// Exponential purification toward the pure boundary: jump sqrt(gamma)|0><1|
/// from the mixed state diag(p, 1-p). Emits r(t) and the closed-form metric
/// components; checks the late-time angular metric limit 1/4, the exponential
/// g_rr divergence rate, and unit Bures speed in the flattened chart
/// u = arcsin(sqrt(lambda_min)) — the geodesic witness.
ScenarioResult run_asymptotic_purification(double p = 0.7, double gamma = 2.0);

/// Finite-time purification with diverging rate gamma(t) = alpha/(T - t).
/// Emits the trajectory and the induced clock metric g_tt; checks the
/// power-law exponents of g_rr (-alpha) and g_tt (alpha - 2) in tau = T - t,
/// and for alpha != 2 that r(t) stays away from the sin(omega t + delta)
/// geodesic family (non-geodesic witness).
ScenarioResult run_finite_time_purification(double p = 0.7, double alpha = 2.0,
                                            double T = 1.0);

/// Pure-to-mixed escape from |+>: jumps sqrt(gamma1)|0><1|, sqrt(gamma1/4) s_z,
/// sqrt(gamma2) s_x, giving x = exp(-gamma1 t), y = 0,
/// z = (1 - exp(-(gamma1 + 2 gamma2) t)) gamma1/(gamma1 + 2 gamma2).
/// Checks the escape constant against lambda_min(t)/t, the early-time law
/// g_rr t -> 1/(16 C), and g_phph = exp(-2 gamma1 t)/4.
ScenarioResult run_pure_to_mixed(double gamma1 = 1.0, double gamma2 = 0.5);

/// Qutrit shooting out of |0> into two equal channels: rho00 = exp(-2 gamma t),
/// rho11 = rho22 = (1 - exp(-2 gamma t))/2. Checks diagonality, the escape
/// matrix gamma I, the linear escape rate, and the sqrt(t) growth of the
/// radial coordinate u = sqrt(lambda1).
ScenarioResult run_n3_shooting(double gamma = 1.0);

/// Reduced (theta-only) qutrit family with spectrum (eps, zeta eps, rest):
/// fits the asymptotic flat cone and reports kappa and the deficit angle.
ScenarioResult run_cone_2d(double zeta = 0.5);

/// Full (theta, phi) qutrit family: fits the asymptotic three-dimensional
/// cone, checks the phi = 0 slice against the reduced family, the exact
/// near-tip metric du'^2/(1-u'^2) + 2 kappa^2 u'^2 dOmega^2, and the 1/u^2
/// curvature divergence of the fitted cone.
ScenarioResult run_cone_3d(double zeta = 0.5);

/// Four-channel Lindblad construction whose stationary state is the rotated
/// qutrit state with spectrum (eps, zeta eps, 1 - (1+zeta) eps). Checks the
/// stationarity residual, convergence from |2><2|, and exponential decay of
/// rotated-frame coherences.
ScenarioResult run_cone_steady_state(double zeta = 0.5, double eps = 0.01,
                                     double theta = 0.7, double phi = 0.4,
                                     double Gamma = 1.0);

}  // namespace burescone
