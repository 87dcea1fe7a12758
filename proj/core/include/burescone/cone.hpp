#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "burescone/bures.hpp"
#include "burescone/ode.hpp"

namespace burescone {

struct DegenerateBase : std::runtime_error {
  explicit DegenerateBase(const std::string& what) : std::runtime_error(what) {}
};

struct TwoDimensionalCone : std::runtime_error {
  explicit TwoDimensionalCone(const std::string& what) : std::runtime_error(what) {}
};

struct FitDiverged : std::runtime_error {
  explicit FitDiverged(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// charts and states

enum class BaseKind { circle, sphere, general };

/// Metric cone ds^2 = du^2 + u^2 h_ab(theta) dtheta^a dtheta^b over a base of
/// dimension d. circle(kappa) has h = kappa^2 dtheta^2, sphere(kappa) has
/// h = kappa^2 (dtheta^2 + sin^2 theta dphi^2); general wraps a caller-supplied
/// base metric with finite-difference Christoffel symbols.
struct ConeChart {
  BaseKind kind = BaseKind::circle;
  int base_dim = 1;
  double kappa = 1.0;       // scale of the circle/sphere base; 0 when degenerate
  bool degenerate = false;  // base collapsed (kappa = 0)
  MetricField base_metric;  // theta -> h, d x d positive definite
  std::function<std::vector<RealMatrix>(const RealVector&)> base_christoffels;
  RealVector base_point;  // reference point for base-curvature probes

  static ConeChart circle(double kappa);
  static ConeChart sphere(double kappa);
  static ConeChart general(MetricField h, int base_dim, RealVector base_point);
};

/// Point + velocity on a cone, with arc parameter s.
struct ConeState {
  double u = 0.0;
  double du = 0.0;
  RealVector theta;
  RealVector dtheta;
  double s = 0.0;
};

/// Geodesic integration output. hit_tip marks that the radial coordinate
/// crossed below 1e-10 and the integration halted there; states holds one
/// entry per requested grid point up to (and including) the halt.
struct GeodesicResult {
  std::vector<ConeState> states;
  bool hit_tip = false;
  double s_end = 0.0;
};

/// Delta-function curvature density concentrated at the tip of a
/// two-dimensional cone: strength 2(1-kappa) supported at u = 0.
struct TipCurvatureDensity {
  double strength = 0.0;
  double support_u = 0.0;
};

/// Power-law fit of a Bures metric family to its asymptotic cone.
struct ConeFit {
  double kappa = 0.0;               // fitted cone scale
  double radial_coefficient = 0.0;  // coefficient A in g_ee ~ A / eps
  double radial_slope = 0.0;        // free log-log slope of g_ee (expect -1)
  double angular_slope = 0.0;       // free log-log slope of g_tt (expect +1)
  double max_residual = 0.0;        // worst relative deviation from the fit
};

// ---------------------------------------------------------------------------
// construction

/// Base quadratic form of the shrinking-eigenvalue block:
///   h = (1/2) sum_{a<b} (mu_a - mu_b)^2 / (mu_a + mu_b) |<a|db>|^2
/// with mu the positive weights (summing to 1) and overlaps[c](a,b) = <a|d_c b>
/// anti-Hermitian. Positive definite when the mu are not all equal; throws
/// DegenerateBase when they are.
RealMatrix base_metric_from_spectrum(const RealVector& mu,
                                     const std::vector<ComplexMatrix>& overlaps);

/// Asymptotic cone of the qutrit family with spectrum (eps, zeta eps, rest):
/// kappa = |1 - zeta| / (2 sqrt(2) (1 + zeta)). kind selects the reduced
/// circle base (theta only) or the full sphere base (theta, phi). zeta = 1
/// collapses the base and returns a chart flagged degenerate.
ConeChart cone_from_bures_limit(double zeta, BaseKind kind = BaseKind::sphere);

/// Full cone metric over (u, theta...) as a pointwise field.
MetricField cone_metric_field(const ConeChart& chart);

// ---------------------------------------------------------------------------
// geodesics

/// Geodesic energy (1/2)(udot^2 + u^2 |thetadot|_h^2); conserved along
/// geodesics.
double cone_energy(const ConeChart& chart, const ConeState& state);

/// Angular momentum covector u^2 h thetadot; each component is conserved along
/// geodesics whenever the base metric does not depend on the matching
/// coordinate.
RealVector cone_angular_momentum(const ConeChart& chart, const ConeState& state);

/// Integrate the geodesic equations
///   uddot = u |thetadot|_h^2,
///   thetaddot^a = -2 (udot/u) thetadot^a - Gamma^a_bc(h) thetadot^b thetadot^c
/// over the arc-parameter grid. Integration halts when u crosses below 1e-10
/// from above (hit_tip); a purely radial launch from the tip runs outward
/// unhindered and satisfies u(s) = u0 + udot0 s exactly.
GeodesicResult integrate_geodesic(const ConeChart& chart, const ConeState& initial,
                                  const std::vector<double>& s_grid,
                                  const OdeControl& ctrl = {});

// ---------------------------------------------------------------------------
// curvature

/// Scalar curvature R(u) = (R_base - d(d-1)) / u^2 for base dimension d >= 2;
/// sphere(kappa) gives (2/kappa^2 - 2)/u^2 in closed form, general bases probe
/// R_base numerically at chart.base_point. Throws TwoDimensionalCone for d = 1,
/// whose curvature is a tip delta function (use deficit_angle).
double cone_scalar_curvature(const ConeChart& chart, double u);

/// Angle missing when a two-dimensional cone of slope kappa is unrolled flat:
/// 2 pi (1 - kappa).
double deficit_angle(double kappa);

/// Integrated Gaussian curvature of a tip-centered disk, via Gauss-Bonnet
/// 2 pi - contour integral of the geodesic curvature of the rim (computed by
/// finite differences). Equals the deficit angle independent of the radius.
double integrated_curvature_disk(double kappa, double radius = 1.0);

/// Tip-concentrated curvature of a two-dimensional cone as a distribution:
/// strength 2(1-kappa) at u = 0.
TipCurvatureDensity tip_curvature_density(double kappa);

// ---------------------------------------------------------------------------
// asymptotic fit

/// Geometric grid with 20 points per decade over [lo, hi].
std::vector<double> cone_fit_window(double lo, double hi);

/// Fit the Bures metric of a family over (eps, theta[, phi]) with spectrum
/// (eps, zeta eps, 1 - (1+zeta) eps) to its asymptotic cone on an eps window:
/// g_ee ~ A/eps (A expected (1+zeta)/4) and g_tt ~ 2 kappa^2 (1+zeta) eps.
/// Throws FitDiverged when the worst relative deviation from the fitted power
/// laws exceeds 5%.
ConeFit fit_cone_to_bures(const ParametrizedFamily& family, double eps_lo,
                          double eps_hi, double zeta);

}  // namespace burescone
