#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "burescone/scenarios.hpp"

using namespace burescone;

namespace {

void check_well_formed(const ScenarioResult& result) {
  INFO("scenario ", result.name);
  CHECK_FALSE(result.name.empty());
  CHECK_FALSE(result.parameters.empty());
  CHECK_FALSE(result.tables.empty());
  CHECK_FALSE(result.checks.empty());

  std::set<std::string> table_names;
  for (const ScenarioTable& table : result.tables) {
    INFO("table ", table.name);
    CHECK_FALSE(table.name.empty());
    CHECK_FALSE(table.source.empty());
    CHECK(table.columns.size() >= 2);
    CHECK_FALSE(table.rows.empty());
    for (const auto& row : table.rows) {
      CHECK(row.size() == table.columns.size());
      for (double v : row) CHECK(std::isfinite(v));
    }
    CHECK(table_names.insert(table.name).second);
  }

  std::set<std::string> check_names;
  for (const ScenarioCheck& c : result.checks) {
    INFO("check ", c.name);
    CHECK_FALSE(c.name.empty());
    CHECK_FALSE(c.provenance.empty());
    CHECK(std::isfinite(c.measured));
    CHECK(check_names.insert(c.name).second);
  }
}

Trajectory analytic_trajectory(double p, double gamma, double t0, double t1, int n) {
  Trajectory traj;
  traj.times = linear_grid(t0, t1, n);
  for (double t : traj.times) {
    traj.states.push_back(analytic_asymptotic_purification(p, gamma, t).matrix());
  }
  return traj;
}

}  // namespace

TEST_CASE("linear fit recovers an exact line") {
  std::vector<double> x, y;
  for (int k = 0; k < 20; ++k) {
    x.push_back(0.1 * k);
    y.push_back(2.5 * 0.1 * k - 1.0);
  }
  const LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_AS(linear_fit({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(linear_fit({1.0, 2.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("sine fit recovers frequency and phase of a clean signal") {
  std::vector<double> t, r;
  for (double tk : linear_grid(0.0, 2.0, 101)) {
    t.push_back(tk);
    r.push_back(std::sin(0.8 * tk + 0.3));
  }
  const SineFit fit = fit_radial_sine(t, r);
  CHECK(fit.omega == doctest::Approx(0.8).epsilon(1e-7));
  CHECK(fit.delta == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(fit.rms <= 1e-10);
}

TEST_CASE("sine fit flags a non-sinusoidal curve by its residual") {
  // cubic approach to the boundary, the shape of the fastest non-uniform
  // purification ramp: no member of sin(omega t + delta) tracks it
  std::vector<double> t, r;
  for (double tk : linear_grid(0.0, 1.0, 101)) {
    t.push_back(tk);
    r.push_back(1.0 - 0.6 * std::pow(1.0 - tk, 3));
  }
  CHECK(fit_radial_sine(t, r).rms > 1e-3);
  CHECK_THROWS_AS(fit_radial_sine({0.0, 0.1, 0.2}, {0.0, 0.1, 0.2}),
                  std::invalid_argument);
}

TEST_CASE("flattened chart turns exponential purification into unit speed") {
  const Trajectory traj = analytic_trajectory(0.7, 2.0, 0.0, 1.0, 1001);
  const std::vector<double> ratios = flattened_speed_ratio(traj);
  CHECK_FALSE(ratios.empty());
  for (double q : ratios) CHECK(std::abs(q - 1.0) <= 1e-6);
}

TEST_CASE("flattened chart validation") {
  Trajectory short_traj = analytic_trajectory(0.7, 2.0, 0.0, 1.0, 4);
  CHECK_THROWS_AS(flattened_speed_ratio(short_traj), std::invalid_argument);

  Trajectory skewed = analytic_trajectory(0.7, 2.0, 0.0, 1.0, 6);
  skewed.times[3] += 1e-3;
  CHECK_THROWS_AS(flattened_speed_ratio(skewed), std::invalid_argument);

  Trajectory pure;
  pure.times = linear_grid(0.0, 1.0, 6);
  pure.states.assign(6, from_bloch(BlochVector{0.0, 0.0, 1.0}).matrix());
  CHECK_THROWS_AS(flattened_speed_ratio(pure), BoundaryContact);
}

TEST_CASE("every scenario passes its own checks at default parameters") {
  const std::vector<ScenarioResult> results = {
      run_asymptotic_purification(), run_finite_time_purification(),
      run_pure_to_mixed(),           run_n3_shooting(),
      run_cone_2d(),                 run_cone_3d(),
      run_cone_steady_state()};
  std::set<std::string> names;
  for (const ScenarioResult& r : results) {
    check_well_formed(r);
    for (const ScenarioCheck& c : r.checks) {
      INFO("scenario ", r.name, " check ", c.name, " measured ", c.measured,
           " target ", c.target);
      CHECK(c.pass);
    }
    CHECK(r.all_passed());
    CHECK(names.insert(r.name).second);
  }
}

TEST_CASE("scenarios hold away from their default parameters") {
  const ScenarioResult slow = run_asymptotic_purification(0.8, 1.0);
  CHECK(slow.all_passed());
  CHECK(slow.parameters.at("gamma") == 1.0);

  // alpha != 2 engages the non-geodesic witness; T != 1 moves the window
  const ScenarioResult ramp = run_finite_time_purification(0.7, 1.0, 2.0);
  CHECK(ramp.all_passed());

  const ScenarioResult cone = run_cone_2d(0.8);
  CHECK(cone.all_passed());
  CHECK(cone.parameters.at("zeta") == 0.8);
}

TEST_CASE("scenario parameter validation") {
  CHECK_THROWS_AS(run_asymptotic_purification(0.4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_asymptotic_purification(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_asymptotic_purification(0.7, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_finite_time_purification(0.7, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_finite_time_purification(0.7, 2.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_pure_to_mixed(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(run_n3_shooting(0.0), std::invalid_argument);
  CHECK_THROWS_AS(run_cone_2d(0.0), std::invalid_argument);
  CHECK_THROWS_AS(run_cone_3d(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(run_cone_steady_state(0.5, 0.9), InvalidSpectrum);
}

TEST_CASE("check records carry their comparison semantics") {
  const ScenarioCheck eq = ScenarioCheck::against("a", 1.0, 1.005, 0.01, "why");
  CHECK(eq.pass);
  const ScenarioCheck eq_fail = ScenarioCheck::against("a", 1.0, 1.05, 0.01, "why");
  CHECK_FALSE(eq_fail.pass);

  CHECK(ScenarioCheck::below("b", 0.5, 1.0, "why").pass);
  CHECK_FALSE(ScenarioCheck::below("b", 2.0, 1.0, "why").pass);

  CHECK(ScenarioCheck::above("c", 2.0, 1.0, "why").pass);
  CHECK_FALSE(ScenarioCheck::above("c", 0.5, 1.0, "why").pass);
}
