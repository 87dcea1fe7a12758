#include "burescone/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

namespace burescone {

DensityMatrix::DensityMatrix(ComplexMatrix rho, double psd_tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw DimensionMismatch("density matrix must be square and non-empty");
  }
  if (!rho_.allFinite()) {
    throw std::invalid_argument("density matrix has non-finite entries");
  }
  const double herm = max_abs(rho_ - rho_.adjoint());
  if (herm > tol::hermitian) {
    throw NotHermitian("density matrix not Hermitian, deviation " + std::to_string(herm));
  }
  const double tr_err = std::abs(rho_.trace() - std::complex<double>(1.0, 0.0));
  if (tr_err > tol::trace) {
    throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                std::to_string(tr_err));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho_ + rho_.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -psd_tol) {
    throw std::invalid_argument("density matrix not positive semidefinite, min eigenvalue " +
                                std::to_string(solver.eigenvalues().minCoeff()));
  }
}

void apply_phase_gauge(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best) {  // strict comparison: ties resolve to the lowest index
        best = a;
        pivot = r;
      }
    }
    if (best <= 0.0) continue;
    const std::complex<double> phase = vectors(pivot, c) / best;
    vectors.col(c) /= phase;
  }
}

SpectralDecomposition eig_hermitian(const ComplexMatrix& m, double rank_tol) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("eig_hermitian requires a square matrix");
  }
  const double herm = max_abs(m - m.adjoint());
  if (herm > tol::hermitian) {
    throw NotHermitian("matrix not Hermitian, deviation " + std::to_string(herm));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition failed");
  }

  const Eigen::Index n = m.rows();
  SpectralDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors.resize(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    out.vectors.col(c) = solver.eigenvectors().col(n - 1 - c);
  }
  apply_phase_gauge(out.vectors);
  out.rank = (out.values.array() > rank_tol).count();
  return out;
}

int rank_of(const DensityMatrix& rho, double rank_tol) {
  return eig_hermitian(rho.matrix(), rank_tol).rank;
}

BlochVector to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw DimensionMismatch("to_bloch requires a 2x2 density matrix");
  }
  const ComplexMatrix& m = rho.matrix();
  BlochVector b;
  b.x = 2.0 * m(0, 1).real();
  b.y = -2.0 * m(0, 1).imag();
  b.z = (m(0, 0) - m(1, 1)).real();
  return b;
}

DensityMatrix from_bloch(const BlochVector& x) {
  const double r = x.r();
  if (r > 1.0 + 1e-12) {
    throw InvalidBloch("Bloch vector norm " + std::to_string(r) + " exceeds 1");
  }
  ComplexMatrix rho(2, 2);
  const std::complex<double> i(0.0, 1.0);
  rho(0, 0) = 0.5 * (1.0 + x.z);
  rho(1, 1) = 0.5 * (1.0 - x.z);
  rho(0, 1) = 0.5 * (x.x - i * x.y);
  rho(1, 0) = 0.5 * (x.x + i * x.y);
  // psd tolerance loosened to absorb rounding when r == 1 exactly
  return DensityMatrix(rho, 1e-9);
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  const std::complex<double> i(0.0, 1.0);
  m << 0, -i, i, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

}  // namespace burescone
