#include "burescone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace burescone {

namespace {
constexpr double kTipRadius = 1e-10;

RealMatrix circle_metric(double kappa) {
  RealMatrix h(1, 1);
  h(0, 0) = kappa * kappa;
  return h;
}

RealMatrix sphere_metric(double kappa, double theta) {
  RealMatrix h = RealMatrix::Zero(2, 2);
  h(0, 0) = kappa * kappa;
  h(1, 1) = kappa * kappa * std::sin(theta) * std::sin(theta);
  return h;
}

void require_positive_scale(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("cone scale kappa must be positive");
}
}  // namespace

ConeChart ConeChart::circle(double kappa) {
  require_positive_scale(kappa);
  ConeChart c;
  c.kind = BaseKind::circle;
  c.base_dim = 1;
  c.kappa = kappa;
  c.base_metric = [kappa](const RealVector&) { return circle_metric(kappa); };
  c.base_christoffels = [](const RealVector&) {
    return std::vector<RealMatrix>{RealMatrix::Zero(1, 1)};
  };
  c.base_point = RealVector::Zero(1);
  return c;
}

ConeChart ConeChart::sphere(double kappa) {
  require_positive_scale(kappa);
  ConeChart c;
  c.kind = BaseKind::sphere;
  c.base_dim = 2;
  c.kappa = kappa;
  c.base_metric = [kappa](const RealVector& t) { return sphere_metric(kappa, t[0]); };
  c.base_christoffels = [](const RealVector& t) {
    const double st = std::sin(t[0]);
    const double ct = std::cos(t[0]);
    std::vector<RealMatrix> gamma(2, RealMatrix::Zero(2, 2));
    gamma[0](1, 1) = -st * ct;        // theta-component of phi-phi motion
    if (std::abs(st) < 1e-300) {
      throw std::domain_error("sphere base Christoffels singular at the pole");
    }
    gamma[1](0, 1) = gamma[1](1, 0) = ct / st;
    return gamma;
  };
  c.base_point = RealVector(2);
  c.base_point << std::numbers::pi / 2, 0.0;
  return c;
}

ConeChart ConeChart::general(MetricField h, int base_dim, RealVector base_point) {
  if (base_dim < 1) throw std::invalid_argument("base dimension must be >= 1");
  if (base_point.size() != base_dim) {
    throw DimensionMismatch("base point dimension does not match base_dim");
  }
  ConeChart c;
  c.kind = BaseKind::general;
  c.base_dim = base_dim;
  c.kappa = 0.0;
  c.base_metric = h;
  c.base_christoffels = [h](const RealVector& t) { return christoffels_fd(h, t, 1e-5); };
  c.base_point = std::move(base_point);
  return c;
}

// ---------------------------------------------------------------------------

RealMatrix base_metric_from_spectrum(const RealVector& mu,
                                     const std::vector<ComplexMatrix>& overlaps) {
  const Eigen::Index n = mu.size();
  if (n < 2) throw std::invalid_argument("need at least two shrinking weights");
  if (mu.minCoeff() <= 0.0) throw std::invalid_argument("weights must be positive");
  if (std::abs(mu.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to one");
  }
  const Eigen::Index p = static_cast<Eigen::Index>(overlaps.size());
  if (p == 0) throw std::invalid_argument("at least one overlap matrix required");
  for (const auto& w : overlaps) {
    if (w.rows() != n || w.cols() != n) {
      throw DimensionMismatch("overlap matrix size does not match weight count");
    }
    if (max_abs(ComplexMatrix(w + w.adjoint())) > tol::element) {
      throw std::invalid_argument("overlap matrices must be anti-Hermitian");
    }
  }
  if (mu.maxCoeff() - mu.minCoeff() < 1e-12) {
    throw DegenerateBase("all shrinking weights equal: base form vanishes at leading order");
  }

  RealMatrix h = RealMatrix::Zero(p, p);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double coeff = 0.5 * (mu[a] - mu[b]) * (mu[a] - mu[b]) / (mu[a] + mu[b]);
      for (Eigen::Index c = 0; c < p; ++c) {
        for (Eigen::Index d = 0; d < p; ++d) {
          h(c, d) += coeff * (overlaps[c](a, b) * std::conj(overlaps[d](a, b))).real();
        }
      }
    }
  }
  return 0.5 * (h + h.transpose());
}

ConeChart cone_from_bures_limit(double zeta, BaseKind kind) {
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  if (kind == BaseKind::general) {
    throw std::invalid_argument("limit charts are circle or sphere based");
  }
  const double kappa = std::abs(1.0 - zeta) / (2.0 * std::numbers::sqrt2 * (1.0 + zeta));
  if (kappa == 0.0) {
    // equal shrinking eigenvalues: the base collapses at leading order
    ConeChart c;
    c.kind = kind;
    c.base_dim = kind == BaseKind::circle ? 1 : 2;
    c.kappa = 0.0;
    c.degenerate = true;
    const int d = c.base_dim;
    c.base_metric = [d](const RealVector&) { return RealMatrix::Zero(d, d); };
    c.base_christoffels = [d](const RealVector&) {
      return std::vector<RealMatrix>(d, RealMatrix::Zero(d, d));
    };
    c.base_point = RealVector::Zero(d);
    return c;
  }
  return kind == BaseKind::circle ? ConeChart::circle(kappa) : ConeChart::sphere(kappa);
}

MetricField cone_metric_field(const ConeChart& chart) {
  const int d = chart.base_dim;
  const MetricField base = chart.base_metric;
  return [d, base](const RealVector& x) {
    const double u = x[0];
    RealMatrix g = RealMatrix::Zero(d + 1, d + 1);
    g(0, 0) = 1.0;
    g.block(1, 1, d, d) = u * u * base(x.tail(d));
    return g;
  };
}

// ---------------------------------------------------------------------------
// geodesics

double cone_energy(const ConeChart& chart, const ConeState& state) {
  const RealMatrix h = chart.base_metric(state.theta);
  const double angular = state.dtheta.dot(h * state.dtheta);
  return 0.5 * (state.du * state.du + state.u * state.u * angular);
}

RealVector cone_angular_momentum(const ConeChart& chart, const ConeState& state) {
  return state.u * state.u * (chart.base_metric(state.theta) * state.dtheta);
}

GeodesicResult integrate_geodesic(const ConeChart& chart, const ConeState& initial,
                                  const std::vector<double>& s_grid,
                                  const OdeControl& ctrl) {
  const int d = chart.base_dim;
  if (initial.theta.size() != d || initial.dtheta.size() != d) {
    throw DimensionMismatch("state dimension does not match chart base");
  }
  if (s_grid.size() < 2) throw std::invalid_argument("need at least two grid points");
  for (size_t k = 1; k < s_grid.size(); ++k) {
    if (s_grid[k] <= s_grid[k - 1]) {
      throw std::invalid_argument("arc grid must be strictly increasing");
    }
  }
  const bool radial = initial.dtheta.norm() == 0.0;
  if (initial.u < 0.0 || (initial.u == 0.0 && !radial)) {
    throw std::invalid_argument("launch requires u > 0 or purely radial data");
  }

  // y = (u, udot, theta, thetadot)
  Eigen::VectorXd y(2 + 2 * d);
  y[0] = initial.u;
  y[1] = initial.du;
  y.segment(2, d) = initial.theta;
  y.segment(2 + d, d) = initial.dtheta;

  auto rhs = [&chart, d](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd dy(y.size());
    const double u = y[0];
    const RealVector th = y.segment(2, d);
    const RealVector dth = y.segment(2 + d, d);
    dy[0] = y[1];
    dy.segment(2, d) = dth;
    if (dth.norm() == 0.0) {
      dy[1] = 0.0;
      dy.segment(2 + d, d).setZero();
      return dy;
    }
    const RealMatrix h = chart.base_metric(th);
    dy[1] = u * dth.dot(h * dth);
    const auto gamma = chart.base_christoffels(th);
    const double u_safe = std::max(u, 1e-300);
    for (int a = 0; a < d; ++a) {
      dy[2 + d + a] = -2.0 * (y[1] / u_safe) * dth[a] - dth.dot(gamma[a] * dth);
    }
    return dy;
  };
  auto tip_event = [](double, const Eigen::VectorXd& y) { return y[0] - kTipRadius; };

  auto snapshot = [&](double s, const Eigen::VectorXd& v) {
    ConeState st;
    st.u = v[0];
    st.du = v[1];
    st.theta = v.segment(2, d);
    st.dtheta = v.segment(2 + d, d);
    st.s = s;
    return st;
  };

  GeodesicResult out;
  out.states.push_back(snapshot(s_grid.front(), y));
  for (size_t k = 1; k < s_grid.size(); ++k) {
    const double reached = integrate_adaptive<Eigen::VectorXd>(
        rhs, s_grid[k - 1], s_grid[k], y, ctrl, nullptr, tip_event);
    out.states.push_back(snapshot(reached, y));
    out.s_end = reached;
    if (reached < s_grid[k]) {
      out.hit_tip = true;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// curvature

double cone_scalar_curvature(const ConeChart& chart, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("curvature requires u > 0");
  if (chart.degenerate) throw DegenerateBase("collapsed base has no smooth curvature");
  if (chart.base_dim < 2) {
    throw TwoDimensionalCone(
        "two-dimensional cones carry delta-function tip curvature; use deficit_angle");
  }
  const double d = chart.base_dim;
  double r_base = 0.0;
  if (chart.kind == BaseKind::sphere) {
    r_base = 2.0 / (chart.kappa * chart.kappa);
  } else {
    r_base = numeric_scalar_curvature(chart.base_metric, chart.base_point).ricci_scalar;
  }
  return (r_base - d * (d - 1.0)) / (u * u);
}

double deficit_angle(double kappa) { return 2.0 * std::numbers::pi * (1.0 - kappa); }

double integrated_curvature_disk(double kappa, double radius) {
  require_positive_scale(kappa);
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  // Gauss-Bonnet: total curvature = 2 pi - (geodesic curvature of rim) x (rim
  // length) = 2 pi (1 - d sqrt(g_tt)/du at the rim), evaluated by finite
  // differences of the rim circumference radius.
  auto sqrt_gtt = [kappa](double u) { return std::sqrt(kappa * kappa * u * u); };
  const double h = 0.01 * radius;
  const double growth = (sqrt_gtt(radius + h) - sqrt_gtt(radius - h)) / (2.0 * h);
  return 2.0 * std::numbers::pi * (1.0 - growth);
}

TipCurvatureDensity tip_curvature_density(double kappa) {
  require_positive_scale(kappa);
  return TipCurvatureDensity{2.0 * (1.0 - kappa), 0.0};
}

// ---------------------------------------------------------------------------
// asymptotic fit

std::vector<double> cone_fit_window(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("need 0 < lo < hi");
  const int n = std::max(2, static_cast<int>(std::lround(20.0 * std::log10(hi / lo))) + 1);
  return log_grid(lo, hi, n);
}

namespace {
struct PowerLaw {
  double slope = 0.0;
  double coeff = 0.0;     // coefficient with the slope fixed at `fixed`
  double residual = 0.0;  // worst relative deviation from the fixed-slope law
};

PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                       double fixed_slope) {
  const size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, sfix = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    sfix += ly - fixed_slope * lx;
  }
  PowerLaw out;
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.coeff = std::exp(sfix / static_cast<double>(n));
  for (size_t k = 0; k < n; ++k) {
    const double model = out.coeff * std::pow(x[k], fixed_slope);
    out.residual = std::max(out.residual, std::abs(y[k] / model - 1.0));
  }
  return out;
}
}  // namespace

ConeFit fit_cone_to_bures(const ParametrizedFamily& family, double eps_lo, double eps_hi,
                          double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  if (family.dim() < 2) throw DimensionMismatch("family must expose (eps, theta[, phi])");
  const std::vector<double> window = cone_fit_window(eps_lo, eps_hi);

  std::vector<double> g_ee, g_tt;
  g_ee.reserve(window.size());
  g_tt.reserve(window.size());
  RealVector x = RealVector::Zero(family.dim());
  x[1] = 1.0;  // fixed base angle away from the poles
  if (family.dim() > 2) x[2] = 0.7;
  for (double eps : window) {
    x[0] = eps;
    const MetricSample m = bures_metric_spectral(family, x);
    g_ee.push_back(m.g(0, 0));
    g_tt.push_back(m.g(1, 1));
  }

  const PowerLaw radial = fit_power_law(window, g_ee, -1.0);
  ConeFit out;
  out.radial_coefficient = radial.coeff;
  out.radial_slope = radial.slope;
  out.max_residual = radial.residual;

  const double tt_scale = *std::max_element(g_tt.begin(), g_tt.end());
  if (tt_scale < 1e-15) {
    // angular sector vanishes at leading order (equal shrinking eigenvalues)
    out.kappa = 0.0;
    out.angular_slope = 0.0;
  } else {
    const PowerLaw angular = fit_power_law(window, g_tt, 1.0);
    out.angular_slope = angular.slope;
    out.kappa = std::sqrt(angular.coeff / (2.0 * (1.0 + zeta)));
    out.max_residual = std::max(out.max_residual, angular.residual);
  }
  if (out.max_residual > 0.05) {
    throw FitDiverged("power-law residual " + std::to_string(out.max_residual) +
                      " exceeds 5%");
  }
  return out;
}

}  // namespace burescone
