#include "burescone/bures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace burescone {

namespace {
const std::complex<double> kI(0.0, 1.0);
constexpr double kDefaultStep = 1e-5;
constexpr double kBoundary = 1.0 - 1e-12;
}  // namespace

double ParametrizedFamily::step(int c, const RealVector& x) const {
  if (rel_step.size() == dim() && rel_step[c] > 0.0) {
    return rel_step[c] * std::abs(x[c]);
  }
  return abs_step.size() == dim() ? abs_step[c] : kDefaultStep;
}

ParametrizedFamily ParametrizedFamily::make(
    std::vector<std::string> labels,
    std::function<DensityMatrix(const RealVector&)> eval) {
  ParametrizedFamily f;
  f.labels = std::move(labels);
  f.eval = std::move(eval);
  f.abs_step = RealVector::Constant(f.dim(), kDefaultStep);
  f.rel_step = RealVector::Zero(f.dim());
  return f;
}

// ---------------------------------------------------------------------------
// spectral double sum

MetricSample bures_metric_spectral(const ParametrizedFamily& family, const RealVector& x) {
  const int p = family.dim();
  if (x.size() != p) throw DimensionMismatch("point dimension does not match family");

  const DensityMatrix center = family.eval(x);
  const Eigen::Index n = center.dim();
  const SpectralDecomposition eig = eig_hermitian(center.matrix());

  // d rho / d x_c by central differences, rotated into the eigenbasis
  std::vector<ComplexMatrix> a(p);
  for (int c = 0; c < p; ++c) {
    const double h = family.step(c, x);
    RealVector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const ComplexMatrix drho =
        (family.eval(xp).matrix() - family.eval(xm).matrix()) / (2.0 * h);
    a[c] = eig.vectors.adjoint() * drho * eig.vectors;
  }

  MetricSample out;
  out.point = x;
  out.labels = family.labels;
  out.g = RealMatrix::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom =
          clamp_eigenvalue(eig.values[i]) + clamp_eigenvalue(eig.values[j]);
      if (denom < tol::pair) {
        double elem = 0.0;
        for (int c = 0; c < p; ++c) elem = std::max(elem, std::abs(a[c](i, j)));
        if (elem >= tol::element) {
          throw SingularPair("eigenvalue pair (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is singular with coupling " +
                             std::to_string(elem));
        }
        continue;
      }
      for (int c = 0; c < p; ++c) {
        for (int d = c; d < p; ++d) {
          const double term =
              0.5 * (a[c](i, j) * std::conj(a[d](i, j))).real() / denom;
          out.g(c, d) += term;
        }
      }
    }
  }
  for (int c = 0; c < p; ++c) {
    for (int d = 0; d < c; ++d) out.g(c, d) = out.g(d, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// spectral-representation form

RealMatrix bures_metric_spectral_rep(const SpectralData& data) {
  const Eigen::Index n = data.values.size();
  const Eigen::Index p = data.dvalues.rows();
  if (data.dvalues.cols() != n) throw DimensionMismatch("dvalues shape mismatch");
  if (static_cast<Eigen::Index>(data.overlaps.size()) != p) {
    throw DimensionMismatch("one overlap matrix per coordinate required");
  }

  RealMatrix g = RealMatrix::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = clamp_eigenvalue(data.values[i]);
    const double dnorm = data.dvalues.col(i).norm();
    if (lam < tol::pair) {
      if (dnorm > tol::element) {
        throw ZeroEigenvalue("eigenvalue " + std::to_string(i) +
                             " vanishes with non-zero differential");
      }
      continue;
    }
    g += 0.25 / lam * data.dvalues.col(i) * data.dvalues.col(i).transpose();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double li = clamp_eigenvalue(data.values[i]);
      const double lj = clamp_eigenvalue(data.values[j]);
      if (li + lj < tol::pair) continue;
      const double w = 0.5 * (li - lj) * (li - lj) / (li + lj);
      for (Eigen::Index c = 0; c < p; ++c) {
        for (Eigen::Index d = 0; d < p; ++d) {
          g(c, d) += w * (data.overlaps[c](i, j) * std::conj(data.overlaps[d](i, j))).real();
        }
      }
    }
  }
  return 0.5 * (g + g.transpose());
}

// ---------------------------------------------------------------------------
// Fubini-Study

MetricSample fubini_study_metric(const PureFamily& family, const RealVector& x) {
  const int p = family.dim();
  if (x.size() != p) throw DimensionMismatch("point dimension does not match family");

  const ComplexVector psi = family.eval(x);
  std::vector<ComplexVector> dpsi(p);
  for (int c = 0; c < p; ++c) {
    RealVector xp = x, xm = x;
    xp[c] += family.fd_step;
    xm[c] -= family.fd_step;
    dpsi[c] = (family.eval(xp) - family.eval(xm)) / (2.0 * family.fd_step);
  }

  MetricSample out;
  out.point = x;
  out.labels = family.labels;
  out.g = RealMatrix::Zero(p, p);
  for (int c = 0; c < p; ++c) {
    for (int d = 0; d < p; ++d) {
      const std::complex<double> full = dpsi[c].dot(dpsi[d]);
      const std::complex<double> gauge = dpsi[c].dot(psi) * psi.dot(dpsi[d]);
      out.g(c, d) = (full - gauge).real();
    }
  }
  out.g = 0.5 * (out.g + out.g.transpose()).eval();
  return out;
}

// ---------------------------------------------------------------------------
// closed forms

MetricSample bloch_metric_closed_form(double r, double theta, double phi) {
  if (r < 0.0 || r > 1.0 + 1e-12) throw InvalidBloch("radius outside [0, 1]");
  if (r >= kBoundary) throw BoundaryContact("metric singular at the pure boundary");
  MetricSample out;
  out.point = RealVector(3);
  out.point << r, theta, phi;
  out.labels = {"r", "theta", "phi"};
  out.g = RealMatrix::Zero(3, 3);
  out.g(0, 0) = 1.0 / (4.0 * (1.0 - r * r));
  out.g(1, 1) = r * r / 4.0;
  out.g(2, 2) = r * r * std::sin(theta) * std::sin(theta) / 4.0;
  return out;
}

MetricSample bloch_metric_uchart(double u, double theta, double phi) {
  MetricSample out;
  out.point = RealVector(3);
  out.point << u, theta, phi;
  out.labels = {"u", "theta", "phi"};
  const double cu = std::cos(u);
  out.g = RealMatrix::Zero(3, 3);
  out.g(0, 0) = 0.25;
  out.g(1, 1) = 0.25 * cu * cu;
  out.g(2, 2) = 0.25 * cu * cu * std::sin(theta) * std::sin(theta);
  return out;
}

std::vector<double> induced_metric_along_trajectory(const Trajectory& traj) {
  const size_t m = traj.times.size();
  if (m < 3) throw std::invalid_argument("trajectory too short for derivatives");
  const auto bloch = traj.bloch_curve();

  std::vector<double> r(m);
  for (size_t k = 0; k < m; ++k) {
    r[k] = bloch[k].r();
    if (r[k] >= kBoundary) {
      throw BoundaryContact("trajectory touches the pure boundary at t = " +
                            std::to_string(traj.times[k]));
    }
  }

  // three-point derivative on a possibly non-uniform grid
  auto deriv = [&](size_t k) {
    if (k == 0) k = 1;
    if (k == m - 1) k = m - 2;
    const double h1 = traj.times[k] - traj.times[k - 1];
    const double h2 = traj.times[k + 1] - traj.times[k];
    return (h1 * h1 * r[k + 1] - h2 * h2 * r[k - 1] + (h2 * h2 - h1 * h1) * r[k]) /
           (h1 * h2 * (h1 + h2));
  };

  std::vector<double> gtt(m);
  for (size_t k = 0; k < m; ++k) {
    const double rdot = deriv(k);
    gtt[k] = rdot * rdot / (4.0 * (1.0 - r[k] * r[k]));
  }
  return gtt;
}

// ---------------------------------------------------------------------------
// eigen-data extraction

SpectralDecomposition EigenContinuityTracker::align(const SpectralDecomposition& next) {
  if (!has_prev_) {
    has_prev_ = true;
    prev_vectors_ = next.vectors;
    return next;
  }
  const Eigen::Index n = next.vectors.cols();
  SpectralDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.rank = next.rank;

  std::vector<bool> used(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index pick = -1;
    double best = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double overlap = std::abs(prev_vectors_.col(i).dot(next.vectors.col(j)));
      if (overlap > best) {
        best = overlap;
        pick = j;
      }
    }
    used[pick] = true;
    const std::complex<double> inner = prev_vectors_.col(i).dot(next.vectors.col(pick));
    const double mag = std::abs(inner);
    const std::complex<double> phase = mag > 0.0 ? inner / mag : 1.0;
    out.vectors.col(i) = next.vectors.col(pick) / phase;
    out.values[i] = next.values[pick];
  }
  prev_vectors_ = out.vectors;
  return out;
}

SpectralData spectral_probe(const ParametrizedFamily& family, const RealVector& x) {
  const int p = family.dim();
  const SpectralDecomposition center = eig_hermitian(family.eval(x).matrix());
  const Eigen::Index n = center.values.size();

  SpectralData out;
  out.values = center.values;
  out.dvalues.resize(p, n);
  out.overlaps.assign(p, ComplexMatrix::Zero(n, n));

  for (int c = 0; c < p; ++c) {
    const double h = family.step(c, x);
    RealVector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;

    EigenContinuityTracker plus;
    plus.align(center);
    const SpectralDecomposition dp = plus.align(eig_hermitian(family.eval(xp).matrix()));
    EigenContinuityTracker minus;
    minus.align(center);
    const SpectralDecomposition dm = minus.align(eig_hermitian(family.eval(xm).matrix()));

    out.dvalues.row(c) = (dp.values - dm.values).transpose() / (2.0 * h);
    ComplexMatrix w =
        center.vectors.adjoint() * (dp.vectors - dm.vectors) / (2.0 * h);
    // <i|dj> is anti-Hermitian for an orthonormal frame; enforce it to
    // suppress differencing noise
    out.overlaps[c] = 0.5 * (w - w.adjoint());
  }
  return out;
}

// ---------------------------------------------------------------------------
// curvature

namespace {

RealMatrix inverse_metric(const RealMatrix& g) {
  if (std::abs(g.determinant()) < 1e-14) {
    throw DegenerateMetric("metric determinant below 1e-14");
  }
  return g.inverse();
}

std::vector<RealMatrix> christoffels_at(const MetricField& field, const RealVector& x,
                                        double h) {
  const int p = static_cast<int>(x.size());
  const RealMatrix ginv = inverse_metric(field(x));

  std::vector<RealMatrix> dg(p);
  for (int c = 0; c < p; ++c) {
    RealVector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    dg[c] = (field(xp) - field(xm)) / (2.0 * h);
  }

  std::vector<RealMatrix> gamma(p, RealMatrix::Zero(p, p));
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        double acc = 0.0;
        for (int l = 0; l < p; ++l) {
          acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        gamma[k](i, j) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

double scalar_curvature_once(const MetricField& field, const RealVector& x, double h) {
  const int p = static_cast<int>(x.size());
  const RealMatrix ginv = inverse_metric(field(x));
  const auto gamma = christoffels_at(field, x, h);

  // dgamma[c][k](i,j) = d_c Gamma^k_ij
  std::vector<std::vector<RealMatrix>> dgamma(p);
  for (int c = 0; c < p; ++c) {
    RealVector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto gp = christoffels_at(field, xp, h);
    const auto gm = christoffels_at(field, xm, h);
    dgamma[c].resize(p);
    for (int k = 0; k < p; ++k) dgamma[c][k] = (gp[k] - gm[k]) / (2.0 * h);
  }

  RealMatrix ricci = RealMatrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      double acc = 0.0;
      for (int l = 0; l < p; ++l) {
        acc += dgamma[l][l](i, j) - dgamma[i][l](l, j);
        for (int m = 0; m < p; ++m) {
          acc += gamma[l](l, m) * gamma[m](i, j) - gamma[l](i, m) * gamma[m](l, j);
        }
      }
      ricci(i, j) = acc;
    }
  }
  return (ginv * ricci).trace();
}

}  // namespace

std::vector<RealMatrix> christoffels_fd(const MetricField& field, const RealVector& x,
                                        double h) {
  return christoffels_at(field, x, h);
}

CurvatureSample numeric_scalar_curvature(const MetricField& field, const RealVector& x,
                                         double h) {
  const double coarse = scalar_curvature_once(field, x, h);
  const double fine = scalar_curvature_once(field, x, 0.5 * h);
  CurvatureSample out;
  out.point = x;
  out.ricci_scalar = (4.0 * fine - coarse) / 3.0;  // Richardson, O(h^2) error term
  return out;
}

// ---------------------------------------------------------------------------
// built-in families and fields

ParametrizedFamily bloch_ball_family() {
  return ParametrizedFamily::make({"r", "theta", "phi"}, [](const RealVector& x) {
    BlochVector b;
    b.x = x[0] * std::sin(x[1]) * std::cos(x[2]);
    b.y = x[0] * std::sin(x[1]) * std::sin(x[2]);
    b.z = x[0] * std::cos(x[1]);
    return from_bloch(b);
  });
}

ParametrizedFamily bloch_uchart_family() {
  return ParametrizedFamily::make({"u", "theta", "phi"}, [](const RealVector& x) {
    const double r = std::cos(x[0]);
    BlochVector b;
    b.x = r * std::sin(x[1]) * std::cos(x[2]);
    b.y = r * std::sin(x[1]) * std::sin(x[2]);
    b.z = r * std::cos(x[1]);
    return from_bloch(b);
  });
}

PureFamily bloch_sphere_pure_family() {
  PureFamily f;
  f.labels = {"theta", "phi"};
  f.eval = [](const RealVector& x) {
    ComplexVector psi(2);
    psi[0] = std::cos(0.5 * x[0]);
    psi[1] = std::exp(kI * x[1]) * std::sin(0.5 * x[0]);
    return psi;
  };
  return f;
}

PureFamily qutrit_pure_family() {
  PureFamily f;
  f.labels = {"theta", "phi"};
  f.eval = [](const RealVector& x) {
    return ComplexVector(rotated_qutrit_basis(x[0], x[1]).col(0));
  };
  return f;
}

ParametrizedFamily near_pure_qutrit_family(double zeta, bool with_phi) {
  if (zeta <= 0.0) throw InvalidSpectrum("zeta must be positive");
  std::vector<std::string> labels =
      with_phi ? std::vector<std::string>{"eps", "theta", "phi"}
               : std::vector<std::string>{"eps", "theta"};
  auto f = ParametrizedFamily::make(std::move(labels), [zeta, with_phi](const RealVector& x) {
    const double eps = x[0];
    const double theta = x[1];
    const double phi = with_phi ? x[2] : 0.0;
    return its_steady_state(zeta, eps, theta, phi);
  });
  f.rel_step[0] = 0.1;  // rho is linear in eps, so the step only needs to stay in range
  return f;
}

MetricField family_metric_field(ParametrizedFamily family) {
  return [family = std::move(family)](const RealVector& x) {
    return bures_metric_spectral(family, x).g;
  };
}

MetricField bloch_uchart_metric_field() {
  return [](const RealVector& x) { return bloch_metric_uchart(x[0], x[1], x[2]).g; };
}

MetricField euclidean_spherical_field() {
  return [](const RealVector& x) {
    RealMatrix g = RealMatrix::Zero(3, 3);
    g(0, 0) = 1.0;
    g(1, 1) = x[0] * x[0];
    g(2, 2) = x[0] * x[0] * std::sin(x[1]) * std::sin(x[1]);
    return g;
  };
}

}  // namespace burescone
