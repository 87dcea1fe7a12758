#include "burescone/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace burescone {

namespace {
const std::complex<double> kI(0.0, 1.0);

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}
}  // namespace

JumpOperator JumpOperator::constant(ComplexMatrix op, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("jump rate must be non-negative");
  return JumpOperator{std::move(op), [gamma](double) { return gamma; }};
}

JumpOperator JumpOperator::time_dependent(ComplexMatrix op,
                                          std::function<double(double)> rate) {
  return JumpOperator{std::move(op), std::move(rate)};
}

RealMatrix Trajectory::eigenvalue_curves() const {
  RealMatrix out(static_cast<Eigen::Index>(states.size()), dim());
  for (size_t k = 0; k < states.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = eig_hermitian(states[k]).values.transpose();
  }
  return out;
}

std::vector<BlochVector> Trajectory::bloch_curve() const {
  if (dim() != 2) throw DimensionMismatch("bloch_curve requires a qubit trajectory");
  std::vector<BlochVector> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(to_bloch(DensityMatrix(s, 1e-8)));
  return out;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho, double t) {
  if (rho.rows() != model.dim || rho.cols() != model.dim) {
    throw DimensionMismatch("state dimension does not match model");
  }
  ComplexMatrix out = ComplexMatrix::Zero(model.dim, model.dim);
  if (model.hamiltonian.size() > 0 && max_abs(model.hamiltonian) > 0.0) {
    out -= kI * (model.hamiltonian * rho - rho * model.hamiltonian);
  }
  for (const auto& jump : model.jumps) {
    const double gamma = jump.rate(t);
    if (gamma == 0.0) continue;
    const ComplexMatrix ldl = jump.op.adjoint() * jump.op;
    out += gamma * (jump.op * rho * jump.op.adjoint() -
                    0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     const std::vector<double>& t_grid, const OdeControl& ctrl) {
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  if (rho0.dim() != model.dim) throw DimensionMismatch("initial state does not match model");
  for (size_t k = 0; k + 1 < t_grid.size(); ++k) {
    if (!(t_grid[k + 1] > t_grid[k])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
  for (double t : t_grid) {
    for (const auto& jump : model.jumps) {
      if (!std::isfinite(jump.rate(t))) {
        throw RateSingularityInsideWindow("rate non-finite at t = " + std::to_string(t));
      }
    }
  }

  const Eigen::Index n = model.dim;
  auto rhs = [&](double t, const ComplexVector& y) -> ComplexVector {
    return vec(lindblad_rhs(model, unvec(y, n), t));
  };
  // keep the state on the physical manifold after every accepted step
  std::function<void(double, ComplexVector&)> project = [&](double, ComplexVector& y) {
    ComplexMatrix rho = unvec(y, n);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    y = vec(rho);
  };

  Trajectory traj;
  traj.times = t_grid;
  traj.states.reserve(t_grid.size());

  ComplexVector y = vec(rho0.matrix());
  traj.states.push_back(unvec(y, n));
  for (size_t k = 0; k + 1 < t_grid.size(); ++k) {
    integrate_adaptive(rhs, t_grid[k], t_grid[k + 1], y, ctrl, project);
    traj.states.push_back(unvec(y, n));
  }
  return traj;
}

EscapeData escape_law(const LindbladModel& model, const ComplexVector& psi) {
  const Eigen::Index n = model.dim;
  if (psi.size() != n) throw DimensionMismatch("state dimension does not match model");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw std::invalid_argument("escape_law requires a normalized state");
  }

  // orthonormal completion of psi: Gram-Schmidt over the standard basis,
  // skipping the basis vector with the largest overlap with psi
  Eigen::Index skip = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(psi[i]);
    if (a > best) {
      best = a;
      skip = i;
    }
  }
  ComplexMatrix complement(n, n - 1);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == skip) continue;
    ComplexVector v = ComplexVector::Unit(n, i);
    v -= psi * (psi.dot(v));
    for (Eigen::Index j = 0; j < col; ++j) {
      v -= complement.col(j) * complement.col(j).dot(v);
    }
    const double vn = v.norm();
    if (vn < 1e-12) throw std::runtime_error("Gram-Schmidt breakdown in escape_law");
    complement.col(col++) = v / vn;
  }

  EscapeData out;
  out.complement = complement;
  out.m = ComplexMatrix::Zero(n - 1, n - 1);
  for (const auto& jump : model.jumps) {
    const double gamma = jump.rate(0.0);
    const ComplexVector v = complement.adjoint() * (jump.op * psi);
    out.m += gamma * v * v.adjoint();
  }
  const auto eig = eig_hermitian(out.m);
  out.rates = eig.values;
  out.escape_constant = out.m.trace().real();
  return out;
}

std::vector<double> linear_grid(double t0, double t1, int n) {
  if (n < 2 || t1 <= t0) throw std::invalid_argument("bad grid request");
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = t0 + (t1 - t0) * k / (n - 1);
  g.back() = t1;
  return g;
}

std::vector<double> log_grid(double t0, double t1, int n) {
  if (n < 2 || t0 <= 0.0 || t1 <= t0) throw std::invalid_argument("bad grid request");
  std::vector<double> g(n);
  const double l0 = std::log(t0), l1 = std::log(t1);
  for (int k = 0; k < n; ++k) g[k] = std::exp(l0 + (l1 - l0) * k / (n - 1));
  g.back() = t1;
  return g;
}

DensityMatrix analytic_asymptotic_purification(double p, double gamma, double t) {
  const double eta = (1.0 - p) * std::exp(-gamma * t);
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0 - eta;
  rho(1, 1) = eta;
  return DensityMatrix(rho);
}

DensityMatrix analytic_finite_time_purification(double p, double alpha, double T, double t) {
  if (t < 0.0 || t > T) throw std::invalid_argument("t outside [0, T]");
  const double eta = (1.0 - p) * std::pow((T - t) / T, alpha);
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0 - eta;
  rho(1, 1) = eta;
  return DensityMatrix(rho);
}

BlochVector analytic_pure_to_mixed(double gamma1, double gamma2, double t) {
  BlochVector b;
  b.x = std::exp(-gamma1 * t);
  b.y = 0.0;
  b.z = gamma1 / (gamma1 + 2.0 * gamma2) * (1.0 - std::exp(-(gamma1 + 2.0 * gamma2) * t));
  return b;
}

DensityMatrix analytic_n3_shooting(double gamma, double t) {
  const double p0 = std::exp(-2.0 * gamma * t);
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  rho(0, 0) = p0;
  rho(1, 1) = 0.5 * (1.0 - p0);
  rho(2, 2) = 0.5 * (1.0 - p0);
  return DensityMatrix(rho);
}

LindbladModel asymptotic_purification_model(double gamma) {
  LindbladModel model;
  model.dim = 2;
  model.hamiltonian = ComplexMatrix::Zero(2, 2);
  model.jumps.push_back(JumpOperator::constant(sigma_minus(), gamma));
  return model;
}

LindbladModel finite_time_purification_model(double alpha, double T) {
  if (alpha <= 0.0 || T <= 0.0) throw std::invalid_argument("alpha and T must be positive");
  LindbladModel model;
  model.dim = 2;
  model.hamiltonian = ComplexMatrix::Zero(2, 2);
  model.jumps.push_back(
      JumpOperator::time_dependent(sigma_minus(), [alpha, T](double t) {
        return alpha / (T - t);
      }));
  return model;
}

LindbladModel pure_to_mixed_model(double gamma1, double gamma2) {
  LindbladModel model;
  model.dim = 2;
  model.hamiltonian = ComplexMatrix::Zero(2, 2);
  model.jumps.push_back(JumpOperator::constant(sigma_minus(), gamma1));
  model.jumps.push_back(JumpOperator::constant(pauli_z(), 0.25 * gamma1));
  model.jumps.push_back(JumpOperator::constant(pauli_x(), gamma2));
  return model;
}

LindbladModel n3_shooting_model(double gamma) {
  LindbladModel model;
  model.dim = 3;
  model.hamiltonian = ComplexMatrix::Zero(3, 3);
  ComplexMatrix l1 = ComplexMatrix::Zero(3, 3);
  l1(1, 0) = 1.0;
  ComplexMatrix l2 = ComplexMatrix::Zero(3, 3);
  l2(2, 0) = 1.0;
  model.jumps.push_back(JumpOperator::constant(l1, gamma));
  model.jumps.push_back(JumpOperator::constant(l2, gamma));
  return model;
}

ComplexMatrix rotated_qutrit_basis(double theta, double phi) {
  ComplexMatrix basis = ComplexMatrix::Identity(3, 3);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::complex<double> e = std::exp(kI * phi);
  basis(0, 0) = c;
  basis(1, 0) = -std::conj(e) * s;
  basis(0, 1) = e * s;
  basis(1, 1) = c;
  return basis;
}

namespace {
void check_cone_spectrum(double zeta, double eps) {
  if (zeta <= 0.0) throw InvalidSpectrum("zeta must be positive");
  if (eps <= 0.0 || eps >= 1.0 / (1.0 + zeta)) {
    throw InvalidSpectrum("eps must lie in (0, 1/(1+zeta))");
  }
}
}  // namespace

LindbladModel cone_steady_state_model(double zeta, double eps, double theta, double phi,
                                      double Gamma) {
  check_cone_spectrum(zeta, eps);
  if (Gamma <= 0.0) throw InvalidSpectrum("Gamma must be positive");

  const ComplexMatrix basis = rotated_qutrit_basis(theta, phi);
  const ComplexVector v0 = basis.col(0);
  const ComplexVector v1 = basis.col(1);
  const ComplexVector v2 = basis.col(2);
  const double p2 = 1.0 - (1.0 + zeta) * eps;

  LindbladModel model;
  model.dim = 3;
  model.hamiltonian = ComplexMatrix::Zero(3, 3);
  model.jumps.push_back(JumpOperator::constant(v2 * v0.adjoint(), Gamma));
  model.jumps.push_back(JumpOperator::constant(v2 * v1.adjoint(), Gamma));
  model.jumps.push_back(JumpOperator::constant(v0 * v2.adjoint(), Gamma * eps / p2));
  model.jumps.push_back(JumpOperator::constant(v1 * v2.adjoint(), Gamma * zeta * eps / p2));
  return model;
}

DensityMatrix its_steady_state(double zeta, double eps, double theta, double phi) {
  check_cone_spectrum(zeta, eps);
  const ComplexMatrix basis = rotated_qutrit_basis(theta, phi);
  ComplexMatrix rho = eps * basis.col(0) * basis.col(0).adjoint() +
                      zeta * eps * basis.col(1) * basis.col(1).adjoint() +
                      (1.0 - (1.0 + zeta) * eps) * basis.col(2) * basis.col(2).adjoint();
  return DensityMatrix(rho);
}

}  // namespace burescone
