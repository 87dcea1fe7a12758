#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "burescone/linalg.hpp"

using namespace burescone;

namespace {

double unit_draw(std::mt19937& rng) {
  return std::ldexp(static_cast<double>(rng()), -32);  // [0, 1)
}

double sym_draw(std::mt19937& rng) { return 2.0 * unit_draw(rng) - 1.0; }

ComplexMatrix random_hermitian(std::mt19937& rng, int n) {
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = std::complex<double>(sym_draw(rng), sym_draw(rng));
    }
  }
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  return h;
}

DensityMatrix random_mixed_qubit(std::mt19937& rng) {
  BlochVector b;
  const double r = 0.95 * unit_draw(rng);
  const double th = std::acos(2.0 * unit_draw(rng) - 1.0);
  const double ph = 2.0 * M_PI * unit_draw(rng);
  b.x = r * std::sin(th) * std::cos(ph);
  b.y = r * std::sin(th) * std::sin(ph);
  b.z = r * std::cos(th);
  return from_bloch(b);
}

}  // namespace

TEST_CASE("hermitian eigendecomposition: reconstruction, order, gauge") {
  std::mt19937 rng(20260816u);
  double worst_recon = 0.0, worst_ortho = 0.0, worst_order = 0.0;
  double worst_gauge_imag = 0.0;
  bool gauge_positive = true;
  for (int k = 0; k < 999; ++k) {
    const int n = 2 + k % 3;
    const ComplexMatrix h = random_hermitian(rng, n);
    const SpectralDecomposition sd = eig_hermitian(h);

    const ComplexMatrix recon =
        sd.vectors * sd.values.asDiagonal() * sd.vectors.adjoint();
    worst_recon = std::max(worst_recon, max_abs(recon - h));

    const ComplexMatrix gram = sd.vectors.adjoint() * sd.vectors;
    worst_ortho = std::max(
        worst_ortho, max_abs(gram - ComplexMatrix::Identity(n, n)));

    for (int i = 0; i + 1 < n; ++i) {
      worst_order = std::max(worst_order, sd.values[i + 1] - sd.values[i]);
    }

    for (int c = 0; c < n; ++c) {
      int arg = 0;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        if (std::abs(sd.vectors(i, c)) > best) {
          best = std::abs(sd.vectors(i, c));
          arg = i;
        }
      }
      worst_gauge_imag =
          std::max(worst_gauge_imag, std::abs(sd.vectors(arg, c).imag()));
      gauge_positive = gauge_positive && sd.vectors(arg, c).real() > 0.0;
    }
  }
  CHECK(worst_recon <= 1e-12);
  CHECK(worst_ortho <= 1e-12);
  CHECK(worst_order <= 1e-14);  // descending within rounding
  CHECK(worst_gauge_imag <= 1e-10);
  CHECK(gauge_positive);
}

TEST_CASE("phase gauge is idempotent") {
  std::mt19937 rng(7u);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 3;
    SpectralDecomposition sd = eig_hermitian(random_hermitian(rng, n));
    ComplexMatrix once = sd.vectors;
    apply_phase_gauge(once);
    CHECK(max_abs(once - sd.vectors) <= 1e-14);  // eig output already gauged
    ComplexMatrix twice = once;
    apply_phase_gauge(twice);
    CHECK(max_abs(twice - once) <= 1e-14);
  }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1.0, std::complex<double>(0.0, 0.4), 0.0, -1.0;
  CHECK_THROWS_AS(eig_hermitian(m), NotHermitian);
  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(eig_hermitian(rect), DimensionMismatch);
}

TEST_CASE("bloch round trips") {
  std::mt19937 rng(99u);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix rho = random_mixed_qubit(rng);
    const BlochVector b = to_bloch(rho);
    const DensityMatrix back = from_bloch(b);
    CHECK(max_abs(back.matrix() - rho.matrix()) <= 1e-14);
    const BlochVector b2 = to_bloch(back);
    CHECK(std::abs(b2.x - b.x) <= 1e-14);
    CHECK(std::abs(b2.y - b.y) <= 1e-14);
    CHECK(std::abs(b2.z - b.z) <= 1e-14);
  }
  // axis states
  const BlochVector up{0.0, 0.0, 1.0};
  const ComplexMatrix rho_up = from_bloch(up).matrix();
  CHECK(std::abs(rho_up(0, 0).real() - 1.0) <= 1e-15);
  CHECK(std::abs(rho_up(1, 1).real()) <= 1e-15);
}

TEST_CASE("density matrix construction validates its three properties") {
  ComplexMatrix nonherm(2, 2);
  nonherm << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, NotHermitian);

  ComplexMatrix badtrace = ComplexMatrix::Identity(2, 2) * 0.6;
  CHECK_THROWS_AS(DensityMatrix{badtrace}, std::invalid_argument);

  ComplexMatrix negative(2, 2);
  negative << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix{negative}, std::invalid_argument);

  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(DensityMatrix{rect}, DimensionMismatch);

  ComplexMatrix nan2 = ComplexMatrix::Identity(2, 2) * 0.5;
  nan2(0, 0) = std::nan("");
  CHECK_THROWS_AS(DensityMatrix{nan2}, std::invalid_argument);

  // tiny negative rounding residue is accepted
  ComplexMatrix nearly(2, 2);
  nearly << 1.0 + 1e-13, 0.0, 0.0, -1e-13;
  CHECK_NOTHROW(DensityMatrix{nearly});
}

TEST_CASE("to_bloch and from_bloch reject invalid input") {
  const ComplexMatrix qutrit = ComplexMatrix::Identity(3, 3) / 3.0;
  CHECK_THROWS_AS(to_bloch(DensityMatrix(qutrit)), DimensionMismatch);
  CHECK_THROWS_AS(from_bloch(BlochVector{1.2, 0.0, 0.0}), InvalidBloch);
}

TEST_CASE("rank counts eigenvalues above the threshold") {
  ComplexMatrix two = ComplexMatrix::Zero(3, 3);
  two(0, 0) = 0.5;
  two(1, 1) = 0.5;
  CHECK(rank_of(DensityMatrix(two)) == 2);

  ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK(rank_of(DensityMatrix(pure)) == 1);

  CHECK(rank_of(DensityMatrix(ComplexMatrix::Identity(4, 4) * 0.25)) == 4);
}

TEST_CASE("eigenvalue clamp removes only rounding residue") {
  CHECK(clamp_eigenvalue(-1e-13) == 0.0);
  CHECK(clamp_eigenvalue(-1e-11) == -1e-11);
  CHECK(clamp_eigenvalue(0.3) == 0.3);
  CHECK(clamp_eigenvalue(0.0) == 0.0);
}

TEST_CASE("pauli algebra") {
  const ComplexMatrix sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  const std::complex<double> im(0.0, 1.0);
  CHECK(max_abs(sx * sy - im * sz) <= 1e-15);
  CHECK(max_abs(sy * sz - im * sx) <= 1e-15);
  CHECK(max_abs(sz * sz - ComplexMatrix::Identity(2, 2)) <= 1e-15);
  CHECK(max_abs(sx - sx.adjoint()) <= 1e-15);

  const ComplexMatrix sm = sigma_minus();
  CHECK(std::abs(sm(0, 1) - 1.0) <= 1e-15);
  CHECK(std::abs(sm(0, 0)) + std::abs(sm(1, 0)) + std::abs(sm(1, 1)) <= 1e-15);
}
