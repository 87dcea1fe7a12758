#include <benchmark/benchmark.h>

#include "burescone/bures.hpp"
#include "burescone/cone.hpp"
#include "burescone/lindblad.hpp"
#include "burescone/scenarios.hpp"

using namespace burescone;

namespace {

RealVector vec3(double a, double b, double c) {
  RealVector x(3);
  x << a, b, c;
  return x;
}

void BM_integrate_qubit(benchmark::State& state) {
  const LindbladModel model = pure_to_mixed_model(1.0, 0.5);
  const DensityMatrix rho0 = from_bloch(BlochVector{1.0, 0.0, 0.0});
  const auto grid = linear_grid(0.0, 1.0, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(model, rho0, grid));
  }
}
BENCHMARK(BM_integrate_qubit);

void BM_integrate_qutrit_steady(benchmark::State& state) {
  const LindbladModel model = cone_steady_state_model(0.5, 0.01, 0.7, 0.4, 1.0);
  ComplexMatrix init = ComplexMatrix::Zero(3, 3);
  init(2, 2) = 1.0;
  const DensityMatrix rho0{init};
  const auto grid = linear_grid(0.0, 5.0, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(model, rho0, grid));
  }
}
BENCHMARK(BM_integrate_qutrit_steady);

void BM_metric_closed_form(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(bloch_metric_closed_form(0.6, 1.1, 0.4));
  }
}
BENCHMARK(BM_metric_closed_form);

void BM_metric_spectral_qubit(benchmark::State& state) {
  const ParametrizedFamily fam = bloch_ball_family();
  const RealVector x = vec3(0.6, 1.1, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bures_metric_spectral(fam, x));
  }
}
BENCHMARK(BM_metric_spectral_qubit);

void BM_metric_spectral_qutrit(benchmark::State& state) {
  const ParametrizedFamily fam = near_pure_qutrit_family(0.5, true);
  const RealVector x = vec3(1e-4, 1.0, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bures_metric_spectral(fam, x));
  }
}
BENCHMARK(BM_metric_spectral_qutrit);

void BM_numeric_curvature(benchmark::State& state) {
  const MetricField field = bloch_uchart_metric_field();
  const RealVector x = vec3(0.7, 1.1, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numeric_scalar_curvature(field, x));
  }
}
BENCHMARK(BM_numeric_curvature);

void BM_cone_geodesic_orbit(benchmark::State& state) {
  const ConeChart chart = ConeChart::circle(0.6);
  ConeState init;
  init.u = 1.0;
  init.du = -1.0;
  init.theta = RealVector::Zero(1);
  init.dtheta = (RealVector(1) << 0.3).finished();
  const auto grid = linear_grid(0.0, 3.0, 101);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_geodesic(chart, init, grid));
  }
}
BENCHMARK(BM_cone_geodesic_orbit);

void BM_fit_cone(benchmark::State& state) {
  const ParametrizedFamily fam = near_pure_qutrit_family(0.5, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_cone_to_bures(fam, 1e-4, 1e-3, 0.5));
  }
}
BENCHMARK(BM_fit_cone);

}  // namespace

BENCHMARK_MAIN();
