#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "burescone/linalg.hpp"
#include "burescone/ode.hpp"

namespace burescone {

struct RateSingularityInsideWindow : std::runtime_error {
  explicit RateSingularityInsideWindow(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidSpectrum : std::runtime_error {
  explicit InvalidSpectrum(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// types

/// Jump operator with a (possibly time-dependent) rate. The effective
/// Lindblad operator at time t is sqrt(rate(t)) * op.
struct JumpOperator {
  ComplexMatrix op;
  std::function<double(double)> rate;

  static JumpOperator constant(ComplexMatrix op, double gamma);
  static JumpOperator time_dependent(ComplexMatrix op, std::function<double(double)> rate);
};

/// Open-system model: Hamiltonian (may be zero) plus jump operators.
struct LindbladModel {
  Eigen::Index dim = 0;
  ComplexMatrix hamiltonian;  // dim x dim; zero matrix when absent
  std::vector<JumpOperator> jumps;
};

/// Time-ordered samples of an integrated trajectory.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;

  Eigen::Index dim() const { return states.empty() ? 0 : states.front().rows(); }
  /// Eigenvalues (descending) at each sample; row k = spectrum at times[k].
  RealMatrix eigenvalue_curves() const;
  /// Bloch curve for qubit trajectories. Throws DimensionMismatch otherwise.
  std::vector<BlochVector> bloch_curve() const;
};

/// Short-time escape data at a pure state: growth-rate matrix M for the
/// complement block, its eigenvalues, and the escape constant
/// C = sum_k (<psi|L_k^dag L_k|psi> - |<psi|L_k|psi>|^2) = tr M.
struct EscapeData {
  ComplexMatrix m;              // (N-1) x (N-1), positive semidefinite
  ComplexMatrix complement;     // columns: orthonormal basis of psi-perp
  RealVector rates;             // eigenvalues of m, descending
  double escape_constant = 0.0; // tr m
  double c_min() const { return rates[rates.size() - 1]; }
  double c_max() const { return rates[0]; }
};

// ---------------------------------------------------------------------------
// operations

/// Right-hand side of the master equation
///   drho/dt = -i[H, rho] + sum_k rate_k(t) (L rho L^dag - {L^dag L, rho}/2).
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho, double t);

/// Integrate the master equation over t_grid (ascending, t_grid[0] = t0).
/// Adaptive embedded RK 4/5 with Hermitian symmetrization and trace
/// renormalization after every accepted step. Throws
/// RateSingularityInsideWindow if any rate is non-finite on the grid and
/// StepFailure on controller underflow.
Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     const std::vector<double>& t_grid, const OdeControl& ctrl = {});

/// Escape-rate matrix M_ab = sum_k <e_a|L_k|psi><psi|L_k^dag|e_b> at a pure
/// state psi, rates evaluated at t = 0+. The complement basis {e_a} comes
/// from Gram-Schmidt over the standard basis, skipping the basis vector
/// with the largest overlap with psi.
EscapeData escape_law(const LindbladModel& model, const ComplexVector& psi);

/// Uniform time grid with n points on [t0, t1].
std::vector<double> linear_grid(double t0, double t1, int n);
/// Logarithmic grid with n points on [t0, t1], t0 > 0.
std::vector<double> log_grid(double t0, double t1, int n);

// ---------------------------------------------------------------------------
// closed-form references

/// Decay toward |0>: rho = diag(1 - (1-p) e^{-gamma t}, (1-p) e^{-gamma t}).
DensityMatrix analytic_asymptotic_purification(double p, double gamma, double t);

/// Divergent-rate decay, rate alpha/(T-t): rho11 = (1-p) ((T-t)/T)^alpha.
DensityMatrix analytic_finite_time_purification(double p, double alpha, double T, double t);

/// Bloch vector (e^{-g1 t}, 0, g1/(g1+2 g2) (1 - e^{-(g1+2 g2) t})).
BlochVector analytic_pure_to_mixed(double gamma1, double gamma2, double t);

/// Qutrit cascade: rho = diag(e^{-2 gamma t}, (1-e^{-2 gamma t})/2, (1-e^{-2 gamma t})/2).
DensityMatrix analytic_n3_shooting(double gamma, double t);

// ---------------------------------------------------------------------------
// model builders

/// Single decay channel sqrt(gamma) |0><1|.
LindbladModel asymptotic_purification_model(double gamma);

/// Decay channel with divergent rate alpha/(T-t).
LindbladModel finite_time_purification_model(double alpha, double T);

/// Jump set generating the Bloch system
///   xdot = -g1 x, ydot = -(g1 + 2 g2) y, zdot = g1 (1 - z) - 2 g2 z:
/// sqrt(g1) |0><1|, sqrt(g1/4) sigma_z, sqrt(g2) sigma_x.
LindbladModel pure_to_mixed_model(double gamma1, double gamma2);

/// Two equal decay channels out of |0>: sqrt(gamma) |1><0|, sqrt(gamma) |2><0|.
LindbladModel n3_shooting_model(double gamma);

// ---------------------------------------------------------------------------
// engineered qutrit steady state

/// Rotated qutrit frame: columns |0'>, |1'> span the {|0>,|1>} block rotated
/// by angle theta with azimuth phi; third column stays |2>.
ComplexMatrix rotated_qutrit_basis(double theta, double phi);

/// Four-channel model whose stationary state has spectrum
/// (eps, zeta eps, 1 - (1+zeta) eps) in the rotated frame. Gamma sets the
/// overall relaxation rate. Throws InvalidSpectrum outside
/// 0 < eps < 1/(1+zeta), zeta > 0, Gamma > 0.
LindbladModel cone_steady_state_model(double zeta, double eps, double theta, double phi,
                                      double Gamma);

/// The stationary state of cone_steady_state_model.
DensityMatrix its_steady_state(double zeta, double eps, double theta, double phi);

}  // namespace burescone
