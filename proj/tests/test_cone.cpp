#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "burescone/cone.hpp"

using namespace burescone;

namespace {

RealVector vec1(double a) {
  RealVector x(1);
  x << a;
  return x;
}

RealVector vec2(double a, double b) {
  RealVector x(2);
  x << a, b;
  return x;
}

double kappa_formula(double zeta) {
  return std::abs(1.0 - zeta) / (2.0 * std::sqrt(2.0) * (1.0 + zeta));
}

ConeState launch(double u, double du, RealVector theta, RealVector dtheta) {
  ConeState s;
  s.u = u;
  s.du = du;
  s.theta = std::move(theta);
  s.dtheta = std::move(dtheta);
  return s;
}

}  // namespace

TEST_CASE("base form of a two-mode shrinking block") {
  // weights (2/3, 1/3) with the polar overlap 1/2 between the two modes:
  // h = (1/2) (1/3)^2 / 1 * (1/2)^2 = 1/72
  RealVector mu = vec2(2.0 / 3.0, 1.0 / 3.0);
  ComplexMatrix w = ComplexMatrix::Zero(2, 2);
  w(0, 1) = 0.5;
  w(1, 0) = -0.5;
  const RealMatrix h = base_metric_from_spectrum(mu, {w});
  REQUIRE(h.rows() == 1);
  CHECK(h(0, 0) == doctest::Approx(1.0 / 72.0).epsilon(1e-14));
}

TEST_CASE("base form validation") {
  ComplexMatrix w = ComplexMatrix::Zero(2, 2);
  w(0, 1) = 0.5;
  w(1, 0) = -0.5;

  CHECK_THROWS_AS(base_metric_from_spectrum(vec2(0.5, 0.5), {w}), DegenerateBase);
  CHECK_THROWS_AS(base_metric_from_spectrum(vec2(0.5, 0.6), {w}),
                  std::invalid_argument);
  CHECK_THROWS_AS(base_metric_from_spectrum(vec2(-0.2, 1.2), {w}),
                  std::invalid_argument);
  CHECK_THROWS_AS(base_metric_from_spectrum(vec1(1.0), {w}), std::invalid_argument);
  CHECK_THROWS_AS(base_metric_from_spectrum(vec2(2.0 / 3.0, 1.0 / 3.0), {}),
                  std::invalid_argument);

  ComplexMatrix sym = ComplexMatrix::Zero(2, 2);
  sym(0, 1) = 0.5;
  sym(1, 0) = 0.5;  // Hermitian, not anti-Hermitian
  CHECK_THROWS_AS(base_metric_from_spectrum(vec2(2.0 / 3.0, 1.0 / 3.0), {sym}),
                  std::invalid_argument);

  ComplexMatrix wrong = ComplexMatrix::Zero(3, 3);
  CHECK_THROWS_AS(base_metric_from_spectrum(vec2(2.0 / 3.0, 1.0 / 3.0), {wrong}),
                  DimensionMismatch);
}

TEST_CASE("limit chart of the shrinking qutrit family") {
  for (double zeta : {0.2, 0.5, 0.8}) {
    const ConeChart reduced = cone_from_bures_limit(zeta, BaseKind::circle);
    CHECK(reduced.base_dim == 1);
    CHECK(reduced.kappa == doctest::Approx(kappa_formula(zeta)).epsilon(1e-14));
    CHECK_FALSE(reduced.degenerate);

    const ConeChart full = cone_from_bures_limit(zeta, BaseKind::sphere);
    CHECK(full.base_dim == 2);
    CHECK(full.kappa == doctest::Approx(kappa_formula(zeta)).epsilon(1e-14));
  }
  CHECK(cone_from_bures_limit(0.5, BaseKind::circle).kappa *
            cone_from_bures_limit(0.5, BaseKind::circle).kappa ==
        doctest::Approx(1.0 / 72.0).epsilon(1e-14));

  const ConeChart collapsed = cone_from_bures_limit(1.0);
  CHECK(collapsed.degenerate);
  CHECK(collapsed.kappa == 0.0);

  CHECK_THROWS_AS(cone_from_bures_limit(0.0), std::invalid_argument);
  CHECK_THROWS_AS(cone_from_bures_limit(0.5, BaseKind::general),
                  std::invalid_argument);
}

TEST_CASE("cone metric fields") {
  const MetricField f2 = cone_metric_field(ConeChart::circle(0.6));
  const RealMatrix g2 = f2(vec2(0.5, 1.0));
  CHECK(g2(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g2(1, 1) == doctest::Approx(0.25 * 0.36).epsilon(1e-15));

  const MetricField f3 = cone_metric_field(ConeChart::sphere(0.8));
  RealVector x(3);
  x << 0.5, 1.1, 0.3;
  const RealMatrix g3 = f3(x);
  CHECK(g3(1, 1) == doctest::Approx(0.25 * 0.64).epsilon(1e-15));
  CHECK(g3(2, 2) ==
        doctest::Approx(0.25 * 0.64 * std::sin(1.1) * std::sin(1.1)).epsilon(1e-15));
}

TEST_CASE("scalar curvature of three-dimensional cones") {
  CHECK(cone_scalar_curvature(ConeChart::sphere(0.8), 0.5) ==
        doctest::Approx(4.5).epsilon(1e-14));  // (2/0.64 - 2)/0.25
  CHECK(cone_scalar_curvature(cone_from_bures_limit(0.5), 1.0) ==
        doctest::Approx(142.0).epsilon(1e-12));  // 2/kappa^2 - 2 with kappa^2 = 1/72
  CHECK(std::abs(cone_scalar_curvature(ConeChart::sphere(1.0), 0.7)) <= 1e-14);

  // 1/u^2 scaling
  const double r1 = cone_scalar_curvature(ConeChart::sphere(0.8), 0.1);
  const double r2 = cone_scalar_curvature(ConeChart::sphere(0.8), 0.2);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(cone_scalar_curvature(ConeChart::circle(0.8), 0.5),
                  TwoDimensionalCone);
  CHECK_THROWS_AS(cone_scalar_curvature(ConeChart::sphere(0.8), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cone_scalar_curvature(cone_from_bures_limit(1.0), 0.5),
                  DegenerateBase);
}

TEST_CASE("a general chart wrapping the round base recovers the closed value") {
  const double kappa = 0.8;
  const MetricField base = [kappa](const RealVector& th) {
    RealMatrix h(2, 2);
    h << kappa * kappa, 0.0, 0.0,
        kappa * kappa * std::sin(th[0]) * std::sin(th[0]);
    return h;
  };
  const ConeChart wrapped = ConeChart::general(base, 2, vec2(1.0, 0.5));
  const double got = cone_scalar_curvature(wrapped, 0.7);
  const double want = cone_scalar_curvature(ConeChart::sphere(kappa), 0.7);
  CHECK(got == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("chart construction validation") {
  CHECK_THROWS_AS(ConeChart::circle(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConeChart::sphere(-0.5), std::invalid_argument);
  const MetricField flat = [](const RealVector&) { return RealMatrix::Identity(2, 2); };
  CHECK_THROWS_AS(ConeChart::general(flat, 0, RealVector()), std::invalid_argument);
  CHECK_THROWS_AS(ConeChart::general(flat, 2, vec1(0.0)), DimensionMismatch);
}

TEST_CASE("tip quantities of two-dimensional cones") {
  CHECK(deficit_angle(0.6) == doctest::Approx(2.0 * M_PI * 0.4).epsilon(1e-15));
  CHECK(deficit_angle(1.0) == doctest::Approx(0.0));

  for (double radius : {0.1, 0.5, 1.0}) {
    CHECK(integrated_curvature_disk(0.6, radius) ==
          doctest::Approx(deficit_angle(0.6)).epsilon(1e-12));
  }

  const TipCurvatureDensity tip = tip_curvature_density(0.6);
  CHECK(tip.strength == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(tip.support_u == 0.0);

  CHECK_THROWS_AS(integrated_curvature_disk(0.6, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tip_curvature_density(-0.1), std::invalid_argument);
}

TEST_CASE("base christoffels match finite differences of the base metric") {
  const ConeChart sphere = ConeChart::sphere(0.8);
  const RealVector th = vec2(1.1, 0.6);
  const auto closed = sphere.base_christoffels(th);
  const auto fd = christoffels_fd(sphere.base_metric, th, 1e-4);
  REQUIRE(closed.size() == 2);
  for (int a = 0; a < 2; ++a) {
    CHECK((closed[a] - fd[a]).cwiseAbs().maxCoeff() <= 1e-6);
  }
  CHECK_THROWS_AS(sphere.base_christoffels(vec2(0.0, 0.0)), std::domain_error);

  const ConeChart circle = ConeChart::circle(0.6);
  CHECK(circle.base_christoffels(vec1(1.0))[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a flat unrolled cone carries straight lines") {
  // kappa = 1 is the plane in polar coordinates; launching tangentially from
  // u0 = 1 traces the straight line u cos(theta) = 1, i.e.
  // u(s) = sqrt(1 + s^2), theta(s) = atan(s).
  const GeodesicResult res =
      integrate_geodesic(ConeChart::circle(1.0), launch(1.0, 0.0, vec1(0.0), vec1(1.0)),
                         linear_grid(0.0, 1.0, 11));
  REQUIRE(res.states.size() == 11);
  CHECK_FALSE(res.hit_tip);
  for (const ConeState& st : res.states) {
    CHECK(std::abs(st.u - std::hypot(1.0, st.s)) <= 1e-9);
    CHECK(std::abs(st.theta[0] - std::atan(st.s)) <= 1e-9);
  }
  CHECK(res.states.back().s == doctest::Approx(1.0));
}

TEST_CASE("geodesic conservation laws on the circle cone") {
  const ConeChart chart = ConeChart::circle(0.6);
  const ConeState init = launch(1.0, -1.0, vec1(0.0), vec1(0.5));
  const GeodesicResult res =
      integrate_geodesic(chart, init, linear_grid(0.0, 3.0, 301));
  CHECK_FALSE(res.hit_tip);

  const double e0 = cone_energy(chart, init);
  const double j0 = cone_angular_momentum(chart, init)[0];
  double u_min = init.u;
  for (const ConeState& st : res.states) {
    CHECK(std::abs(cone_energy(chart, st) - e0) <= 1e-9);
    CHECK(std::abs(cone_angular_momentum(chart, st)[0] - j0) <= 1e-9);
    u_min = std::min(u_min, st.u);
  }
  // closest approach |J| / (kappa sqrt(2E)); the grid samples it to O(ds^2)
  const double want = std::abs(j0) / (chart.kappa * std::sqrt(2.0 * e0));
  CHECK(u_min == doctest::Approx(want).epsilon(1e-3));
  CHECK(u_min >= want - 1e-6);
}

TEST_CASE("radial geodesics run straight through the arc parameter") {
  // outward from the tip: u(s) = s exactly
  const GeodesicResult out =
      integrate_geodesic(ConeChart::circle(0.7), launch(0.0, 1.0, vec1(0.3), vec1(0.0)),
                         linear_grid(0.0, 2.0, 21));
  CHECK_FALSE(out.hit_tip);
  for (const ConeState& st : out.states) {
    CHECK(std::abs(st.u - st.s) <= 1e-12);
    CHECK(std::abs(st.theta[0] - 0.3) <= 1e-14);
  }

  // inbound: halts at the tip at s = u0
  const GeodesicResult in =
      integrate_geodesic(ConeChart::circle(0.7), launch(1.0, -1.0, vec1(0.0), vec1(0.0)),
                         linear_grid(0.0, 2.0, 21));
  CHECK(in.hit_tip);
  CHECK(in.s_end == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(in.states.back().u <= 1e-9);
  CHECK(in.states.size() < 21);
}

TEST_CASE("equatorial sphere-cone geodesics stay equatorial") {
  const ConeChart chart = ConeChart::sphere(0.8);
  ConeState init = launch(1.0, 0.2, vec2(M_PI / 2.0, 0.0), vec2(0.0, 0.7));
  const GeodesicResult res =
      integrate_geodesic(chart, init, linear_grid(0.0, 2.0, 101));
  CHECK_FALSE(res.hit_tip);
  const double p_phi0 = cone_angular_momentum(chart, init)[1];
  for (const ConeState& st : res.states) {
    CHECK(std::abs(st.theta[0] - M_PI / 2.0) <= 1e-10);
    CHECK(std::abs(st.dtheta[0]) <= 1e-10);
    CHECK(std::abs(cone_angular_momentum(chart, st)[1] - p_phi0) <= 1e-8);
  }
}

TEST_CASE("geodesic launch validation") {
  const ConeChart chart = ConeChart::circle(0.6);
  CHECK_THROWS_AS(
      integrate_geodesic(chart, launch(1.0, 0.0, vec1(0.0), vec1(1.0)), {0.0, 0.5, 0.4}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_geodesic(chart, launch(1.0, 0.0, vec1(0.0), vec1(1.0)), {0.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_geodesic(chart, launch(-0.5, 0.0, vec1(0.0), vec1(0.0)),
                         linear_grid(0.0, 1.0, 11)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_geodesic(chart, launch(0.0, 1.0, vec1(0.0), vec1(1.0)),
                         linear_grid(0.0, 1.0, 11)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_geodesic(chart, launch(1.0, 0.0, vec2(0.0, 0.0), vec2(1.0, 0.0)),
                         linear_grid(0.0, 1.0, 11)),
      DimensionMismatch);
}

TEST_CASE("fit window is geometric at twenty points per decade") {
  const auto w = cone_fit_window(1e-6, 1e-3);
  REQUIRE(w.size() == 61);
  CHECK(w.front() == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(w.back() == doctest::Approx(1e-3).epsilon(1e-12));
  const double ratio = std::pow(10.0, 0.05);
  for (std::size_t k = 1; k < w.size(); ++k) {
    CHECK(w[k] / w[k - 1] == doctest::Approx(ratio).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cone_fit_window(0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(cone_fit_window(1e-3, 1e-3), std::invalid_argument);
}

TEST_CASE("asymptotic fit recovers the cone of the shrinking family") {
  const double zeta = 0.5;
  const ConeFit fit =
      fit_cone_to_bures(near_pure_qutrit_family(zeta, false), 1e-6, 1e-3, zeta);
  CHECK(fit.kappa == doctest::Approx(kappa_formula(zeta)).epsilon(1e-6));
  CHECK(fit.radial_coefficient ==
        doctest::Approx((1.0 + zeta) / 4.0).epsilon(1e-3));
  CHECK(std::abs(fit.radial_slope + 1.0) <= 2e-4);
  CHECK(std::abs(fit.angular_slope - 1.0) <= 1e-6);
  CHECK(fit.max_residual <= 0.01);

  // the full (theta, phi) family fits the same scale
  const ConeFit full =
      fit_cone_to_bures(near_pure_qutrit_family(zeta, true), 1e-6, 1e-3, zeta);
  CHECK(full.kappa == doctest::Approx(fit.kappa).epsilon(1e-8));
}

TEST_CASE("asymptotic fit: divergence and base collapse") {
  CHECK_THROWS_AS(
      fit_cone_to_bures(near_pure_qutrit_family(0.5, false), 0.05, 0.3, 0.5),
      FitDiverged);

  const ConeFit collapsed =
      fit_cone_to_bures(near_pure_qutrit_family(1.0, false), 1e-6, 1e-3, 1.0);
  CHECK(collapsed.kappa == 0.0);
  CHECK(collapsed.angular_slope == 0.0);

  CHECK_THROWS_AS(
      fit_cone_to_bures(near_pure_qutrit_family(0.5, false), 1e-6, 1e-3, 0.0),
      std::invalid_argument);
}

TEST_CASE("energy and angular momentum accessors") {
  const ConeChart chart = ConeChart::circle(0.6);
  const ConeState st = launch(2.0, 0.5, vec1(0.7), vec1(0.3));
  CHECK(cone_energy(chart, st) ==
        doctest::Approx(0.5 * (0.25 + 4.0 * 0.36 * 0.09)).epsilon(1e-14));
  CHECK(cone_angular_momentum(chart, st)[0] ==
        doctest::Approx(4.0 * 0.36 * 0.3).epsilon(1e-14));
}
