#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace burescone {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// errors

struct NotHermitian : std::runtime_error {
  explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidBloch : std::runtime_error {
  explicit InvalidBloch(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// tolerances shared across modules

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-12;
inline constexpr double psd = 1e-12;
inline constexpr double rank = 1e-10;
inline constexpr double pair = 1e-12;
inline constexpr double element = 1e-9;
inline constexpr double eig_clamp = 1e-12;
}  // namespace tol

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Clamp tiny negative eigenvalues (rounding residue) to zero.
/// Values in (-1e-12, 0) become 0; anything else passes through.
inline double clamp_eigenvalue(double lambda) {
  return (lambda > -tol::eig_clamp && lambda < 0.0) ? 0.0 : lambda;
}

// ---------------------------------------------------------------------------
// types

/// Hermitian, unit-trace, positive-semidefinite matrix.
/// Construction validates all three properties and throws otherwise.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho, double psd_tol = tol::psd);

  const ComplexMatrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  ComplexMatrix rho_;
};

/// Eigen-system of a Hermitian matrix: eigenvalues descending, columns of
/// `vectors` the matching orthonormal eigenvectors in the fixed phase gauge
/// (largest-modulus entry of each column real and positive).
struct SpectralDecomposition {
  RealVector values;
  ComplexMatrix vectors;
  int rank = 0;
};

/// Bloch coordinates of a qubit state, rho = (I + x sigma_x + y sigma_y + z sigma_z)/2.
struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double r() const { return std::sqrt(x * x + y * y + z * z); }
};

// ---------------------------------------------------------------------------
// operations

/// Apply the phase gauge in place: each column is rotated so its
/// largest-modulus entry (first such entry on ties) is real and positive.
void apply_phase_gauge(ComplexMatrix& vectors);

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending,
/// phase-gauged eigenvectors. Throws NotHermitian if ||m - m^dag||_max > 1e-10.
SpectralDecomposition eig_hermitian(const ComplexMatrix& m, double rank_tol = tol::rank);

/// Number of eigenvalues exceeding rank_tol.
int rank_of(const DensityMatrix& rho, double rank_tol = tol::rank);

/// Bloch vector of a 2x2 density matrix. Throws DimensionMismatch for N != 2.
BlochVector to_bloch(const DensityMatrix& rho);

/// Density matrix with the given Bloch vector. Throws InvalidBloch if |x| > 1 + 1e-12.
DensityMatrix from_bloch(const BlochVector& x);

// Pauli matrices and common qubit operators.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// Lowering operator |0><1|.
ComplexMatrix sigma_minus();

}  // namespace burescone
