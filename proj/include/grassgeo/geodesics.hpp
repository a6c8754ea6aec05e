#pragma once

// Exponential and logarithm maps at the origin O, the invariant metric, the
// geodesic equation, the action of G = SU(n+m) or SU(n,m) by linear
// fractional transformations, distances and the coherent-state quantities.
//
// co, si, ta and arcta denote cos, sin, tan, arctan on X_c and cosh, sinh,
// tanh, artanh on X_n.

#include "grassgeo/angles.hpp"
#include "grassgeo/core.hpp"
#include "grassgeo/pluecker.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

namespace grassgeo {

namespace fn {

inline double co(double x, Signature s) { return s == Signature::compact ? std::cos(x) : std::cosh(x); }
inline double si(double x, Signature s) { return s == Signature::compact ? std::sin(x) : std::sinh(x); }
inline double ta(double x, Signature s) { return s == Signature::compact ? std::tan(x) : std::tanh(x); }
inline double arcta(double x, Signature s) { return s == Signature::compact ? std::atan(x) : std::atanh(x); }

/// log co(x), accurate for small x.
inline double log_co(double x, Signature s) {
  const double h = std::sin(x / 2.0);
  if (s == Signature::compact) return std::log1p(-2.0 * h * h);
  const double k = std::sinh(x / 2.0);
  return std::log1p(2.0 * k * k);
}

}  // namespace fn

// ---------------------------------------------------------------------------
// Exponential map, block form, metric

/// Z(tB) = tB ta(sqrt(t^2 B^+B)) / sqrt(t^2 B^+B).
inline ChartPoint exp_map(const TangentDirection& b, double t, Signature sig, const Tolerance& tol = {}) {
  const CMatrix tb = t * b.B;
  if (tb.rows() < 1 || tb.cols() < 1) throw Error(ErrorKind::InvalidArgument, "empty tangent direction");
  if (sig == Signature::compact && spectral_norm(tb) >= kHalfPi - tol.rel)
    throw Error(ErrorKind::ChartSingularity, "geodesic leaves the chart (t |B_i| >= pi/2)");
  return ChartPoint(singular_apply(tb, [sig](double x) { return fn::ta(x, sig); }), sig);
}

/// Inverse of exp_map at t = 1: B = U arcta(Sigma) V^+ for Z = U Sigma V^+.
inline TangentDirection log_map(const ChartPoint& z) {
  const Signature sig = z.sig();
  return TangentDirection{singular_apply(z.Z(), [sig](double x) { return fn::arcta(x, sig); })};
}

/// The N x N matrix exp((0, tB; -e tB^+, 0)) in co/si block form.
inline CMatrix block_form(const TangentDirection& b, double t, Signature sig) {
  const CMatrix tb = t * b.B;
  const Eigen::Index n = tb.rows(), m = tb.cols();
  const CMatrix s = singular_apply(tb, [sig](double x) { return fn::si(x, sig); });
  auto co_sqrt = [sig](double x) { return fn::co(std::sqrt(std::max(x, 0.0)), sig); };
  CMatrix u(n + m, n + m);
  u.topLeftCorner(n, n) = hermitian_apply(tb * tb.adjoint(), co_sqrt);
  u.topRightCorner(n, m) = s;
  u.bottomLeftCorner(m, n) = -epsilon(sig) * s.adjoint();
  u.bottomRightCorner(m, m) = hermitian_apply(tb.adjoint() * tb, co_sqrt);
  return u;
}

/// Plane reached at time t along the geodesic with initial direction B, as
/// the top n rows of the block form.  Defined for every t (no chart needed).
inline FrameMatrix geodesic_frame(const TangentDirection& b, double t, Signature sig) {
  return FrameMatrix(block_form(b, t, sig).topRows(b.B.rows()));
}

/// ds^2 = Tr[(1 + e Z Z^+)^{-1} dZ (1 + e Z^+ Z)^{-1} dZ^+].
inline double metric_form(const ChartPoint& z, const CMatrix& dz) {
  if (dz.rows() != z.n() || dz.cols() != z.m()) throw Error(ErrorKind::DimensionMismatch, "dZ has the wrong shape");
  const double e = z.eps();
  const CMatrix& a = z.Z();
  const CMatrix left = (identity(z.n()) + e * a * a.adjoint()).partialPivLu().inverse();
  const CMatrix right = (identity(z.m()) + e * a.adjoint() * a).partialPivLu().inverse();
  return (left * dz * right * dz.adjoint()).trace().real();
}

/// Norm of Zdd - 2e Zd Z^+ (1 + e Z Z^+)^{-1} Zd along Z(sB), with central
/// differences of step h at s = t.
inline double geodesic_residual(const TangentDirection& b, double t, double h, Signature sig,
                                const Tolerance& tol = {}) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const CMatrix zm = exp_map(b, t - h, sig, tol).Z();
  const ChartPoint z0 = exp_map(b, t, sig, tol);
  const CMatrix zp = exp_map(b, t + h, sig, tol).Z();
  const CMatrix& z = z0.Z();
  const double e = epsilon(sig);
  const CMatrix zd = (zp - zm) / (2.0 * h);
  const CMatrix zdd = (zp - 2.0 * z + zm) / (h * h);
  const CMatrix inv = (identity(z.rows()) + e * z * z.adjoint()).partialPivLu().inverse();
  return (zdd - 2.0 * e * zd * z.adjoint() * inv * zd).norm();
}

// ---------------------------------------------------------------------------
// Group action

/// Element of SU(n+m) (compact) or SU(n,m) (noncompact), preserving
/// I(e) = diag(1_n, e 1_m).  Validated on construction.
class GroupElement {
 public:
  GroupElement(CMatrix u, Eigen::Index n, Signature sig) : u_(std::move(u)), n_(n), sig_(sig) {
    if (u_.rows() != u_.cols() || n_ < 1 || n_ >= u_.rows())
      throw Error(ErrorKind::DimensionMismatch, "group element must be N x N with 1 <= n < N");
    const double scale = std::max(1.0, u_.squaredNorm() / static_cast<double>(u_.rows()));
    if (form_residual() > 1e-12 * scale)
      throw Error(ErrorKind::InvalidArgument, "matrix does not preserve the invariant form");
    if (std::abs(u_.determinant() - Complex(1.0)) > 1e-10 * scale)
      throw Error(ErrorKind::InvalidArgument, "determinant is not 1");
  }

  static GroupElement identity_element(Eigen::Index n, Eigen::Index m, Signature sig) {
    return GroupElement(identity(n + m), n, sig);
  }

  const CMatrix& U() const { return u_; }
  Signature sig() const { return sig_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return u_.rows() - n_; }

  CMatrix A() const { return u_.topLeftCorner(n_, n_); }
  CMatrix B() const { return u_.topRightCorner(n_, m()); }
  CMatrix C() const { return u_.bottomLeftCorner(m(), n_); }
  CMatrix D() const { return u_.bottomRightCorner(m(), m()); }

  CMatrix form() const {
    CMatrix j = identity(u_.rows());
    j.bottomRightCorner(m(), m()) *= epsilon(sig_);
    return j;
  }

  /// max |U^+ I U - I| entry.
  double form_residual() const {
    const CMatrix j = form();
    return (u_.adjoint() * j * u_ - j).cwiseAbs().maxCoeff();
  }

  GroupElement inverse() const {
    const CMatrix j = form();
    return GroupElement(j * u_.adjoint() * j, n_, sig_);
  }

  GroupElement operator*(const GroupElement& o) const {
    if (o.n_ != n_ || o.u_.rows() != u_.rows() || o.sig_ != sig_)
      throw Error(ErrorKind::DimensionMismatch, "group elements differ in shape or signature");
    return GroupElement(u_ * o.u_, n_, sig_);
  }

 private:
  CMatrix u_;
  Eigen::Index n_;
  Signature sig_;
};

/// Z' = (AZ + B)(CZ + D)^{-1}.
inline ChartPoint mobius_action(const GroupElement& g, const ChartPoint& z, const Tolerance& tol = {}) {
  if (g.n() != z.n() || g.m() != z.m()) throw Error(ErrorKind::DimensionMismatch, "group element and point differ in shape");
  if (g.sig() != z.sig()) throw Error(ErrorKind::InvalidArgument, "group element and point differ in signature");
  const CMatrix den = g.C() * z.Z() + g.D();
  const RVector s = singular_values(den);
  if (s(s.size() - 1) <= tol.rel * std::max(1.0, s(0)))
    throw Error(ErrorKind::OutsideChart, "image of the point is not in the chart");
  CMatrix img = (g.A() * z.Z() + g.B()) * den.partialPivLu().inverse();
  if (z.sig() == Signature::noncompact && !(spectral_norm(img) < 1.0))
    throw Error(ErrorKind::InternalInconsistency, "image left the bounded domain");
  return ChartPoint(std::move(img), z.sig());
}

/// dZ' = (A - Z'C) dZ (CZ + D)^{-1}: tangent map of the action at z.
inline CMatrix mobius_differential(const GroupElement& g, const ChartPoint& z, const CMatrix& dz,
                                   const Tolerance& tol = {}) {
  const ChartPoint img = mobius_action(g, z, tol);
  const CMatrix den = g.C() * z.Z() + g.D();
  return (g.A() - img.Z() * g.C()) * dz * den.partialPivLu().inverse();
}

/// Transvection sending z1 to the origin, with unit phase blocks.
inline GroupElement transvection_to_zero(const ChartPoint& z1) {
  const double e = z1.eps();
  const CMatrix& z = z1.Z();
  const Eigen::Index n = z1.n(), m = z1.m();
  const CMatrix a = hermitian_inv_sqrt(identity(n) + e * z * z.adjoint());
  const CMatrix d = hermitian_inv_sqrt(identity(m) + e * z.adjoint() * z);
  CMatrix u(n + m, n + m);
  u.topLeftCorner(n, n) = a;
  u.topRightCorner(n, m) = -a * z;
  u.bottomLeftCorner(m, n) = e * d * z.adjoint();
  u.bottomRightCorner(m, m) = d;
  return GroupElement(std::move(u), n, z1.sig());
}

// ---------------------------------------------------------------------------
// Distances

/// The three closed forms of the distance plus the V/W spectral residual.
/// On the compact cut locus the relative coordinates do not exist and only
/// the V route is available (`tr` and `lag` are NaN, `in_chart` false).
struct DistanceFormulas {
  double tr = 0.0;
  double un = 0.0;
  double lag = 0.0;
  double vw_residual = 0.0;
  bool in_chart = true;
  std::vector<double> v_eigenvalues;
  std::vector<double> w_eigenvalues;
};

namespace detail {

inline CMatrix v_matrix(const ChartPoint& z1, const ChartPoint& z2) {
  const double e = z1.eps();
  const CMatrix& a = z1.Z();
  const CMatrix& b = z2.Z();
  const CMatrix one = identity(z1.n());
  const CMatrix s = hermitian_inv_sqrt(one + e * a * a.adjoint());
  const CMatrix mid = (one + e * b * b.adjoint()).partialPivLu().inverse();
  const CMatrix v = s * (one + e * a * b.adjoint()) * mid * (one + e * b * a.adjoint()) * s;
  return (v + v.adjoint()) / 2.0;
}

inline CMatrix w_unchecked(const ChartPoint& z1, const ChartPoint& z2) {
  const double e = z1.eps();
  const CMatrix& z = z1.Z();
  const CMatrix& zp = z2.Z();
  const CMatrix one = identity(z1.n());
  return (one + e * z * z.adjoint()).partialPivLu().inverse() * (one + e * z * zp.adjoint()) *
         (one + e * zp * zp.adjoint()).partialPivLu().inverse() * (one + e * zp * z.adjoint());
}

inline double root_sum_squares(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace detail

/// Eigenvalues of V, ascending.
inline std::vector<double> v_eigenvalues(const ChartPoint& z1, const ChartPoint& z2) {
  require_same_shape(z1, z2);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(detail::v_matrix(z1, z2), Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return ev;
}

inline DistanceFormulas distance_formulas(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  const Signature sig = z1.sig();
  const Eigen::Index n = z1.n();
  const Eigen::Index r = std::min(z1.n(), z1.m());
  DistanceFormulas out;

  try {
    const RVector s = singular_values(relative_coordinates(z1, z2, tol));
    double tr = 0.0;
    double lag = 0.0;
    const Complex eta = std::sqrt(Complex(-z1.eps()));
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double a = fn::arcta(s(i), sig);
      tr += a * a;
      const Complex th = std::log((1.0 + eta * s(i)) / (1.0 - eta * s(i))) / (2.0 * eta);
      lag += th.real() * th.real();
    }
    out.tr = std::sqrt(tr);
    out.lag = std::sqrt(lag);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutsideChart) throw;
    out.in_chart = false;
    out.tr = std::numeric_limits<double>::quiet_NaN();
    out.lag = std::numeric_limits<double>::quiet_NaN();
  }

  out.v_eigenvalues = v_eigenvalues(z1, z2);
  double un = 0.0;
  // cos^2 (resp. cosh^2) of the angles; the n - r structural ones equal 1
  const std::size_t lo = sig == Signature::compact ? 0 : static_cast<std::size_t>(n - r);
  for (std::size_t i = lo; i < lo + static_cast<std::size_t>(r); ++i) {
    const double l = out.v_eigenvalues[i];
    const double th = sig == Signature::compact ? std::acos(std::sqrt(std::clamp(l, 0.0, 1.0)))
                                                : std::acosh(std::sqrt(std::max(l, 1.0)));
    un += th * th;
  }
  out.un = std::sqrt(un);

  Eigen::ComplexEigenSolver<CMatrix> es(detail::w_unchecked(z1, z2), false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.w_eigenvalues.push_back(es.eigenvalues()(i).real());
  std::sort(out.w_eigenvalues.begin(), out.w_eigenvalues.end());
  for (std::size_t i = 0; i < out.w_eigenvalues.size(); ++i) {
    const double a = out.v_eigenvalues[i], b = out.w_eigenvalues[i];
    out.vw_residual = std::max(out.vw_residual, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return out;
}

struct DistanceResult {
  double d = 0.0;
  AngleSpectrum angles;
};

/// Geodesic distance d = sqrt(sum theta_j^2) with the stationary angles.
inline DistanceResult distance(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  DistanceResult out;
  out.angles = stationary_angles(z1, z2, tol);
  out.d = detail::root_sum_squares(out.angles.theta);
  return out;
}

// ---------------------------------------------------------------------------
// Coherent states

/// <z1|z2> = det(1 + e Z2 Z1^+)^e.
inline Complex coherent_overlap(const ChartPoint& z1, const ChartPoint& z2) {
  require_same_shape(z1, z2);
  const Complex h = hermitian_product(z1, z2);
  return z1.sig() == Signature::compact ? h : 1.0 / h;
}

/// Calabi diastasis D = e log(det(1 + e Z1Z1^+) det(1 + e Z2Z2^+) / |det(1 + e Z2Z1^+)|^2).
inline double diastasis(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  const double ratio = detail::normalized_product(z1, z2);
  if (z1.sig() == Signature::compact && ratio <= tol.rel)
    throw Error(ErrorKind::InfiniteDiastasis, "points lie on each other's polar divisor");
  return -2.0 * z1.eps() * std::log(ratio);
}

/// (delta, s) with delta^2 = sum theta_i^2 and co s = prod co theta_i.
inline std::pair<double, double> embedded_vs_intrinsic(const ChartPoint& z1, const ChartPoint& z2,
                                                       const Tolerance& tol = {}) {
  const AngleSpectrum a = stationary_angles(z1, z2, tol);
  const Signature sig = z1.sig();
  const double delta = detail::root_sum_squares(a.theta);
  double lc = 0.0;
  for (double t : a.theta) lc += fn::log_co(t, sig);
  double s = 0.0;
  if (sig == Signature::compact) {
    // sin^2 s = 1 - prod cos^2
    s = std::atan2(std::sqrt(std::max(-std::expm1(2.0 * lc), 0.0)), std::exp(lc));
  } else {
    s = std::asinh(std::sqrt(std::max(std::expm1(2.0 * lc), 0.0)));
  }
  return {delta, s};
}

}  // namespace grassgeo
