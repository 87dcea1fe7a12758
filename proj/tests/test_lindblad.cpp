#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "burescone/lindblad.hpp"

using namespace burescone;

namespace {

DensityMatrix diag_qubit(double p) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return DensityMatrix(m);
}

DensityMatrix basis_state(int n, int k) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

double max_state_error(const Trajectory& traj,
                       const std::function<ComplexMatrix(double)>& ref) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    worst = std::max(worst, max_abs(traj.states[k] - ref(traj.times[k])));
  }
  return worst;
}

}  // namespace

TEST_CASE("single decay channel matches its closed form") {
  const double p = 0.7, gamma = 2.0;
  const Trajectory traj = integrate(asymptotic_purification_model(gamma),
                                    diag_qubit(p), linear_grid(0.0, 3.0, 61));
  CHECK(max_state_error(traj, [&](double t) {
          return analytic_asymptotic_purification(p, gamma, t).matrix();
        }) <= 1e-8);
}

TEST_CASE("divergent-rate channel matches its closed form inside the window") {
  const double p = 0.7, alpha = 2.0, T = 1.0;
  const Trajectory traj =
      integrate(finite_time_purification_model(alpha, T), diag_qubit(p),
                linear_grid(0.0, T * (1.0 - 1e-3), 41));
  CHECK(max_state_error(traj, [&](double t) {
          return analytic_finite_time_purification(p, alpha, T, t).matrix();
        }) <= 1e-8);
}

TEST_CASE("three-channel qubit model matches its closed Bloch flow") {
  const double g1 = 1.0, g2 = 0.5;
  const Trajectory traj =
      integrate(pure_to_mixed_model(g1, g2), from_bloch(BlochVector{1.0, 0.0, 0.0}),
                linear_grid(0.0, 4.0, 81));
  const auto curve = traj.bloch_curve();
  double worst = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const BlochVector ref = analytic_pure_to_mixed(g1, g2, traj.times[k]);
    worst = std::max({worst, std::abs(curve[k].x - ref.x),
                      std::abs(curve[k].y - ref.y), std::abs(curve[k].z - ref.z)});
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("qutrit cascade matches its closed form") {
  const double gamma = 1.0;
  const Trajectory traj = integrate(n3_shooting_model(gamma), basis_state(3, 0),
                                    linear_grid(0.0, 2.0, 41));
  CHECK(max_state_error(traj, [&](double t) {
          return analytic_n3_shooting(gamma, t).matrix();
        }) <= 1e-8);
}

TEST_CASE("integration preserves trace, hermiticity, and positivity") {
  const Trajectory traj =
      integrate(pure_to_mixed_model(1.0, 0.5), from_bloch(BlochVector{1.0, 0.0, 0.0}),
                linear_grid(0.0, 5.0, 51));
  for (const ComplexMatrix& rho : traj.states) {
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-12);
    CHECK(std::abs(rho.trace().imag()) <= 1e-14);
    CHECK(max_abs(rho - rho.adjoint()) <= 1e-12);
    const SpectralDecomposition sd = eig_hermitian(rho);
    CHECK(sd.values[sd.values.size() - 1] >= -1e-10);
  }
}

TEST_CASE("the master-equation right-hand side is traceless and Hermitian") {
  std::mt19937 rng(4242u);
  auto draw = [&] { return 2.0 * std::ldexp(static_cast<double>(rng()), -32) - 1.0; };
  const LindbladModel qubit = pure_to_mixed_model(0.8, 0.3);
  const LindbladModel qutrit = cone_steady_state_model(0.5, 0.01, 0.7, 0.4, 1.3);
  for (int k = 0; k < 20; ++k) {
    for (const LindbladModel& model : {qubit, qutrit}) {
      const int n = static_cast<int>(model.dim);
      ComplexMatrix a(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = std::complex<double>(draw(), draw());
      }
      ComplexMatrix rho = 0.5 * (a + a.adjoint());
      rho += ComplexMatrix::Identity(n, n) * (1.0 - rho.trace().real()) / double(n);
      const ComplexMatrix rhs = lindblad_rhs(model, rho, 0.0);
      CHECK(std::abs(rhs.trace()) <= 1e-12);
      CHECK(max_abs(rhs - rhs.adjoint()) <= 1e-12);
    }
  }
}

TEST_CASE("escape data at the symmetric qubit state") {
  const double g1 = 1.0, g2 = 0.5;
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const EscapeData esc = escape_law(pure_to_mixed_model(g1, g2), plus);

  // variance-subtracted constant: the x-axis channel acts on its own
  // eigenstate and contributes nothing, sigma_z contributes g1/4, the
  // lowering channel g1/4.
  CHECK(std::abs(esc.escape_constant - g1 / 2.0) <= 1e-12);
  CHECK(esc.m.rows() == 1);
  CHECK(esc.rates.size() == 1);
  CHECK(std::abs(esc.rates[0] - esc.escape_constant) <= 1e-12);
  CHECK(esc.rates[esc.rates.size() - 1] >= -1e-15);

  // complement column orthonormal and orthogonal to psi
  const ComplexVector e0 = esc.complement.col(0);
  CHECK(std::abs(e0.norm() - 1.0) <= 1e-12);
  CHECK(std::abs((plus.adjoint() * e0)(0, 0)) <= 1e-12);
}

TEST_CASE("escape data for the excited state of the decay channel") {
  ComplexVector excited(2);
  excited << 0.0, 1.0;
  const EscapeData esc = escape_law(asymptotic_purification_model(2.0), excited);
  CHECK(std::abs(esc.escape_constant - 2.0) <= 1e-12);
  CHECK(std::abs(esc.c_min() - 2.0) <= 1e-12);
  CHECK(std::abs(esc.c_max() - 2.0) <= 1e-12);
}

TEST_CASE("escape matrix of the qutrit cascade is isotropic") {
  const double gamma = 1.7;
  ComplexVector psi = ComplexVector::Zero(3);
  psi[0] = 1.0;
  const EscapeData esc = escape_law(n3_shooting_model(gamma), psi);
  CHECK(esc.m.rows() == 2);
  CHECK(max_abs(esc.m - gamma * ComplexMatrix::Identity(2, 2)) <= 1e-12);
  CHECK(std::abs(esc.escape_constant - 2.0 * gamma) <= 1e-12);
  CHECK(std::abs(esc.c_min() - esc.c_max()) <= 1e-12);
}

TEST_CASE("escape law validates its input") {
  ComplexVector unnormalized(2);
  unnormalized << 1.0, 1.0;
  CHECK_THROWS_AS(escape_law(asymptotic_purification_model(1.0), unnormalized),
                  std::invalid_argument);
  ComplexVector wrong = ComplexVector::Zero(3);
  wrong[0] = 1.0;
  CHECK_THROWS_AS(escape_law(asymptotic_purification_model(1.0), wrong),
                  DimensionMismatch);
}

TEST_CASE("time grids") {
  const auto lin = linear_grid(0.0, 1.0, 11);
  REQUIRE(lin.size() == 11);
  CHECK(lin.front() == 0.0);
  CHECK(lin.back() == 1.0);
  for (int k = 0; k < 11; ++k) CHECK(std::abs(lin[k] - 0.1 * k) <= 1e-15);

  const auto lg = log_grid(1e-4, 1e-1, 4);
  REQUIRE(lg.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(lg[k] == doctest::Approx(std::pow(10.0, -4 + k)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(linear_grid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(linear_grid(1.0, 0.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("integration validates grid and state") {
  const LindbladModel model = asymptotic_purification_model(1.0);
  CHECK_THROWS_AS(integrate(model, diag_qubit(0.7), {}), std::invalid_argument);
  CHECK_THROWS_AS(integrate(model, diag_qubit(0.7), {0.0, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate(model, basis_state(3, 0), {0.0, 1.0}),
                  DimensionMismatch);
}

TEST_CASE("a rate singularity on the grid is rejected") {
  const LindbladModel model = finite_time_purification_model(2.0, 1.0);
  CHECK_THROWS_AS(integrate(model, diag_qubit(0.7), {0.0, 0.5, 1.0}),
                  RateSingularityInsideWindow);
  CHECK_NOTHROW(integrate(model, diag_qubit(0.7), {0.0, 0.5, 0.999}));
}

TEST_CASE("closed-form references and model builders validate their domain") {
  CHECK_THROWS_AS(analytic_finite_time_purification(0.7, 2.0, 1.0, 1.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(finite_time_purification_model(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(finite_time_purification_model(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("rotated qutrit frame is unitary and reduces to identity") {
  const ComplexMatrix b = rotated_qutrit_basis(0.7, 0.4);
  CHECK(max_abs(b.adjoint() * b - ComplexMatrix::Identity(3, 3)) <= 1e-14);
  CHECK(max_abs(rotated_qutrit_basis(0.0, 0.0) - ComplexMatrix::Identity(3, 3)) <=
        1e-14);
}

TEST_CASE("engineered qutrit model holds its stationary state") {
  const double zeta = 0.5, eps = 0.01, theta = 0.7, phi = 0.4, Gamma = 2.5;
  const DensityMatrix rho = its_steady_state(zeta, eps, theta, phi);

  const SpectralDecomposition sd = eig_hermitian(rho.matrix());
  CHECK(std::abs(sd.values[0] - (1.0 - 1.5 * eps)) <= 1e-13);
  CHECK(std::abs(sd.values[1] - eps) <= 1e-13);
  CHECK(std::abs(sd.values[2] - zeta * eps) <= 1e-13);

  const LindbladModel model = cone_steady_state_model(zeta, eps, theta, phi, Gamma);
  CHECK(max_abs(lindblad_rhs(model, rho.matrix(), 0.0)) <= 1e-12 * std::max(1.0, Gamma));
}

TEST_CASE("engineered qutrit model converges from a far initial state") {
  const double zeta = 0.5, eps = 0.01, theta = 0.7, phi = 0.4, Gamma = 1.0;
  const DensityMatrix target = its_steady_state(zeta, eps, theta, phi);
  const Trajectory traj =
      integrate(cone_steady_state_model(zeta, eps, theta, phi, Gamma),
                basis_state(3, 2), linear_grid(0.0, 20.0 / Gamma, 21));
  CHECK(max_abs(traj.states.back() - target.matrix()) <= 1e-8);
}

TEST_CASE("engineered model rejects invalid spectra") {
  CHECK_THROWS_AS(cone_steady_state_model(0.5, 0.9, 0.7, 0.4, 1.0), InvalidSpectrum);
  CHECK_THROWS_AS(cone_steady_state_model(0.5, 0.0, 0.7, 0.4, 1.0), InvalidSpectrum);
  CHECK_THROWS_AS(cone_steady_state_model(-1.0, 0.01, 0.7, 0.4, 1.0), InvalidSpectrum);
  CHECK_THROWS_AS(cone_steady_state_model(0.5, 0.01, 0.7, 0.4, 0.0), InvalidSpectrum);
  CHECK_THROWS_AS(its_steady_state(0.5, 0.9, 0.7, 0.4), InvalidSpectrum);
}

TEST_CASE("trajectory views: eigenvalue curves and bloch curve") {
  const Trajectory traj = integrate(n3_shooting_model(1.0), basis_state(3, 0),
                                    linear_grid(0.0, 1.0, 11));
  const RealMatrix curves = traj.eigenvalue_curves();
  REQUIRE(curves.rows() == 11);
  REQUIRE(curves.cols() == 3);
  for (int k = 0; k < curves.rows(); ++k) {
    CHECK(curves(k, 0) >= curves(k, 1) - 1e-14);
    CHECK(curves(k, 1) >= curves(k, 2) - 1e-14);
  }
  CHECK_THROWS_AS(traj.bloch_curve(), DimensionMismatch);
}
