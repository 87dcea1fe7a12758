#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "burescone/linalg.hpp"
#include "burescone/lindblad.hpp"

namespace burescone {

struct SingularPair : std::runtime_error {
  explicit SingularPair(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroEigenvalue : std::runtime_error {
  explicit ZeroEigenvalue(const std::string& what) : std::runtime_error(what) {}
};

struct BoundaryContact : std::runtime_error {
  explicit BoundaryContact(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateMetric : std::runtime_error {
  explicit DegenerateMetric(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// types

/// Smooth family of density matrices over P real coordinates.
/// step(c, x) is the finite-difference step for coordinate c at x: the
/// relative entry wins when positive, otherwise the absolute one.
struct ParametrizedFamily {
  std::vector<std::string> labels;
  std::function<DensityMatrix(const RealVector&)> eval;
  RealVector abs_step;  // default 1e-5 per coordinate
  RealVector rel_step;  // 0 = unused

  int dim() const { return static_cast<int>(labels.size()); }
  double step(int c, const RealVector& x) const;
  static ParametrizedFamily make(std::vector<std::string> labels,
                                 std::function<DensityMatrix(const RealVector&)> eval);
};

/// Family of normalized pure states over P real coordinates.
struct PureFamily {
  std::vector<std::string> labels;
  std::function<ComplexVector(const RealVector&)> eval;
  double fd_step = 1e-5;

  int dim() const { return static_cast<int>(labels.size()); }
};

/// Metric tensor sampled at one point; g is symmetric P x P.
struct MetricSample {
  RealVector point;
  RealMatrix g;
  std::vector<std::string> labels;
};

/// Scalar curvature sampled at one point.
struct CurvatureSample {
  RealVector point;
  double ricci_scalar = 0.0;
};

/// Pointwise metric tensor field over P coordinates.
using MetricField = std::function<RealMatrix(const RealVector&)>;

/// Eigen-data of a family at one point: eigenvalues, their coordinate
/// derivatives, and the connection overlaps w[c](i,j) = <i|d_c j>.
struct SpectralData {
  RealVector values;                 // descending
  RealMatrix dvalues;                // P x N, row c = d lambda / d x_c
  std::vector<ComplexMatrix> overlaps;  // P matrices, N x N, anti-Hermitian
};

// ---------------------------------------------------------------------------
// metric evaluation

/// Bures metric from the spectral double sum
///   g_mn = (1/2) sum_ij <i|d_m rho|j><j|d_n rho|i> / (lambda_i + lambda_j),
/// with d rho by central differences. Pairs with lambda_i + lambda_j < 1e-12
/// are skipped when every matrix element is below 1e-9 and raise SingularPair
/// otherwise.
MetricSample bures_metric_spectral(const ParametrizedFamily& family, const RealVector& x);

/// Bures metric from explicit spectral data:
///   (1/4) sum_i dlambda_i^2 / lambda_i
///   + (1/2) sum_{i<j} (lambda_i - lambda_j)^2/(lambda_i + lambda_j) |<i|dj>|^2.
/// Eigenvalues below 1e-12 raise ZeroEigenvalue when their differential is
/// non-zero; otherwise the radial term is dropped.
RealMatrix bures_metric_spectral_rep(const SpectralData& data);

/// Fubini-Study metric <d psi|d psi> - |<psi|d psi>|^2 by central differences.
/// Invariant under smooth phase redefinitions of the family.
MetricSample fubini_study_metric(const PureFamily& family, const RealVector& x);

/// Closed-form Bures metric in Bloch spherical coordinates (r, theta, phi):
/// diag(1/(4(1-r^2)), r^2/4, r^2 sin^2(theta)/4). Throws BoundaryContact at
/// r >= 1 - 1e-12 and InvalidBloch for r < 0 or r > 1.
MetricSample bloch_metric_closed_form(double r, double theta, double phi);

/// Same metric in the boundary-regular chart r = cos(u):
/// (1/4) diag(1, cos^2 u, cos^2 u sin^2 theta).
MetricSample bloch_metric_uchart(double u, double theta, double phi);

/// Scalar metric g_tt(t) = g_rr(r(t)) rdot^2 along a qubit trajectory moving
/// radially, rdot by central differences on the trajectory grid. Throws
/// BoundaryContact if r >= 1 - 1e-12 anywhere inside the window.
std::vector<double> induced_metric_along_trajectory(const Trajectory& traj);

// ---------------------------------------------------------------------------
// eigen-data extraction

/// Tracks eigenvector continuity along a parameter sweep: columns are
/// reordered by maximal overlap with the previous decomposition and phases
/// aligned to maximize Re<v_prev|v_new>.
class EigenContinuityTracker {
 public:
  /// Align `next` to the previously accepted decomposition (no-op on first call).
  SpectralDecomposition align(const SpectralDecomposition& next);

 private:
  bool has_prev_ = false;
  ComplexMatrix prev_vectors_;
};

/// Eigenvalues, their derivatives and overlaps <i|d_c j> of a family at x,
/// by central differences with continuity-tracked eigenvectors.
SpectralData spectral_probe(const ParametrizedFamily& family, const RealVector& x);

// ---------------------------------------------------------------------------
// curvature

/// Christoffel symbols of a metric field by central differences;
/// gamma[k](i,j) = Gamma^k_ij.
std::vector<RealMatrix> christoffels_fd(const MetricField& field, const RealVector& x,
                                        double h);

/// Scalar curvature of a metric field by nested central differences with one
/// Richardson step (h and h/2). Throws DegenerateMetric when |det g| < 1e-14
/// anywhere on the stencil.
CurvatureSample numeric_scalar_curvature(const MetricField& field, const RealVector& x,
                                         double h = 1e-3);

// ---------------------------------------------------------------------------
// built-in families and fields

/// Mixed qubit states over (r, theta, phi).
ParametrizedFamily bloch_ball_family();
/// Mixed qubit states over the regular chart (u, theta, phi), r = cos(u).
ParametrizedFamily bloch_uchart_family();
/// Pure qubit states over (theta, phi).
PureFamily bloch_sphere_pure_family();
/// Pure qutrit states over (theta, phi): rotated |0'> of the qutrit frame.
PureFamily qutrit_pure_family();

/// Qutrit family with spectrum (eps, zeta eps, 1 - (1+zeta) eps) over
/// (eps, theta) when with_phi is false, (eps, theta, phi) otherwise.
ParametrizedFamily near_pure_qutrit_family(double zeta, bool with_phi);

/// Metric field of the family's Bures metric (spectral double sum).
MetricField family_metric_field(ParametrizedFamily family);
/// Closed-form field over (u, theta, phi).
MetricField bloch_uchart_metric_field();
/// Flat Euclidean metric in spherical coordinates (r, theta, phi).
MetricField euclidean_spherical_field();

}  // namespace burescone
