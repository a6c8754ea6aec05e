#pragma once

// Stationary (Jordan) angles between two planes.
//
// The primary route diagonalizes
//   W(e) = (1 + e Z Z^+)^{-1} (1 + e Z Z'^+) (1 + e Z' Z'^+)^{-1} (1 + e Z' Z^+),
// whose eigenvalues are cos^2 (compact) or cosh^2 (noncompact) of the
// angles.  W breaks down on the polar divisor and resolves angles near 0 or
// pi/2 poorly, so those cases are answered by an SVD route:
//   compact     orthonormal frames Q1, Q2; cosines are the singular values of
//               Q1 Q2^+, sines those of Q1 (1 - Q2^+ Q2); theta = atan2(s, c)
//   noncompact  theta = artanh of the singular values of the relative
//               coordinates of z2 seen from z1.

#include "grassgeo/core.hpp"
#include "grassgeo/pluecker.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace grassgeo {

struct WMatrix {
  CMatrix W;
  Signature sig = Signature::compact;
};

namespace detail {

/// |((z1,z2))| / (||z1|| ||z2||): normalized modulus of the hermitian product.
inline double normalized_product(const ChartPoint& z1, const ChartPoint& z2) {
  const double e = z1.eps();
  const double h = std::abs(hermitian_product(z1, z2));
  const double a = std::abs((identity(z1.n()) + e * z1.Z() * z1.Z().adjoint()).determinant());
  const double b = std::abs((identity(z2.n()) + e * z2.Z() * z2.Z().adjoint()).determinant());
  return h / std::sqrt(a * b);
}

inline std::vector<double> keep_meaningful(std::vector<double> all, Eigen::Index r) {
  std::sort(all.begin(), all.end());
  // the smallest n - r entries are the structurally-zero angles
  all.erase(all.begin(), all.end() - r);
  return all;
}

}  // namespace detail

/// W(e) for Z = z1, Z' = z2.  Requires ((z1, z2)) != 0.
inline WMatrix w_matrix(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  if (detail::normalized_product(z1, z2) <= tol.rel)
    throw Error(ErrorKind::OnPolarDivisor, "((z1, z2)) vanishes; W is undefined");
  const double e = z1.eps();
  const CMatrix& z = z1.Z();
  const CMatrix& zp = z2.Z();
  const CMatrix one = identity(z1.n());
  const CMatrix a = (one + e * z * z.adjoint()).partialPivLu().inverse();
  const CMatrix c = (one + e * zp * zp.adjoint()).partialPivLu().inverse();
  WMatrix w;
  w.W = a * (one + e * z * zp.adjoint()) * c * (one + e * zp * z.adjoint());
  w.sig = z1.sig();
  return w;
}

/// All n principal angles between two row spans (compact geometry),
/// ascending.  Works for any pair, including orthogonal directions.
inline std::vector<double> principal_angles_all(const FrameMatrix& f1, const FrameMatrix& f2,
                                                const Tolerance& tol = {}) {
  if (f1.N() != f2.N() || f1.n() != f2.n()) throw Error(ErrorKind::DimensionMismatch, "frames differ in shape");
  const CMatrix q1 = orthonormal_basis(f1, tol).rows;
  const CMatrix q2 = orthonormal_basis(f2, tol).rows;
  RVector c = singular_values(q1 * q2.adjoint());                          // descending
  const CMatrix proj = identity(f1.N()) - q2.adjoint() * q2;
  RVector s = singular_values(q1 * proj);                                   // descending
  const Eigen::Index n = f1.n();
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    // i-th largest cosine pairs with the i-th smallest sine
    const double ci = std::clamp(c(i), 0.0, 1.0);
    const double si = std::clamp(s(n - 1 - i), 0.0, 1.0);
    theta[static_cast<std::size_t>(i)] = std::atan2(si, ci);
  }
  std::sort(theta.begin(), theta.end());
  return theta;
}

/// The r = min(n, m) meaningful principal angles between two row spans.
inline AngleSpectrum principal_angles(const FrameMatrix& f1, const FrameMatrix& f2, const Tolerance& tol = {}) {
  const Eigen::Index r = std::min(f1.n(), f1.N() - f1.n());
  return AngleSpectrum{detail::keep_meaningful(principal_angles_all(f1, f2, tol), r), Signature::compact};
}

/// SVD route for chart points of either signature.
inline AngleSpectrum stationary_angles_oracle(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  if (z1.sig() == Signature::compact)
    return principal_angles(FrameMatrix::extended(z1), FrameMatrix::extended(z2), tol);
  const RVector s = singular_values(relative_coordinates(z1, z2, tol));  // r values
  std::vector<double> theta(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) theta[static_cast<std::size_t>(i)] = std::atanh(std::min(s(i), 1.0));
  std::sort(theta.begin(), theta.end());
  return AngleSpectrum{theta, Signature::noncompact};
}

/// Eigenvalues of W, real parts, ascending.  Fails with OnPolarDivisor like
/// w_matrix.
inline std::vector<double> w_eigenvalues(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  const WMatrix w = w_matrix(z1, z2, tol);
  Eigen::ComplexEigenSolver<CMatrix> es(w.W, false);
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Stationary angles from the W eigenproblem alone; throws if W is
/// unavailable or its spectrum leaves the admissible range beyond tolerance.
inline AngleSpectrum stationary_angles_w(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  const WMatrix w = w_matrix(z1, z2, tol);
  Eigen::ComplexEigenSolver<CMatrix> es(w.W, false);
  const auto& ev = es.eigenvalues();
  const double guard = 1e3 * tol.rel * std::max(1.0, w.W.norm());
  const Eigen::Index n = z1.n();
  const Eigen::Index r = std::min(z1.n(), z1.m());
  std::vector<double> lam;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(ev(i).imag()) > guard)
      throw Error(ErrorKind::InternalInconsistency, "W has a non-real eigenvalue");
    lam.push_back(ev(i).real());
  }
  std::sort(lam.begin(), lam.end());
  std::vector<double> theta;
  if (z1.sig() == Signature::compact) {
    // keep the r smallest; the other n - r equal 1
    for (Eigen::Index i = 0; i < r; ++i) {
      const double l = lam[static_cast<std::size_t>(i)];
      if (l < -guard || l > 1.0 + guard) throw Error(ErrorKind::InternalInconsistency, "cos^2 outside [0,1]");
      theta.push_back(std::acos(std::sqrt(std::clamp(l, 0.0, 1.0))));
    }
  } else {
    for (Eigen::Index i = n - r; i < n; ++i) {
      const double l = lam[static_cast<std::size_t>(i)];
      if (l < 1.0 - guard) throw Error(ErrorKind::InternalInconsistency, "cosh^2 below 1");
      theta.push_back(std::acosh(std::sqrt(std::max(l, 1.0))));
    }
  }
  std::sort(theta.begin(), theta.end());
  return AngleSpectrum{theta, z1.sig()};
}

/// Stationary angles between z1 and z2: W eigenvalues where they are well
/// conditioned, SVD route otherwise.
inline AngleSpectrum stationary_angles(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  if (detail::normalized_product(z1, z2) <= std::max(tol.rel, 1e-8)) return stationary_angles_oracle(z1, z2, tol);
  std::vector<double> lam;
  try {
    lam = w_eigenvalues(z1, z2, tol);
  } catch (const Error&) {
    return stationary_angles_oracle(z1, z2, tol);
  }
  const Eigen::Index n = z1.n();
  const Eigen::Index r = std::min(z1.n(), z1.m());
  constexpr double band = 1e-6;
  // only the r meaningful eigenvalues matter; the rest are exactly 1
  const std::size_t lo = z1.sig() == Signature::compact ? 0 : static_cast<std::size_t>(n - r);
  for (std::size_t i = lo; i < lo + static_cast<std::size_t>(r); ++i) {
    const double l = lam[i];
    const bool near_one = std::abs(l - 1.0) < band;
    const bool near_zero = z1.sig() == Signature::compact && l < band;
    if (near_one || near_zero) return stationary_angles_oracle(z1, z2, tol);
  }
  try {
    return stationary_angles_w(z1, z2, tol);
  } catch (const Error&) {
    return stationary_angles_oracle(z1, z2, tol);
  }
}

/// Both sides of the product formula: lhs = |((z1,z2))| / (||z1|| ||z2||),
/// rhs = prod co(theta_i) with co = cos (compact) or cosh (noncompact).
inline std::pair<double, double> angle_product_check(const ChartPoint& z1, const ChartPoint& z2,
                                                     const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  const double lhs = detail::normalized_product(z1, z2);
  const AngleSpectrum a = stationary_angles(z1, z2, tol);
  double rhs = 1.0;
  for (double t : a.theta) rhs *= (z1.sig() == Signature::compact) ? std::cos(t) : std::cosh(t);
  return {lhs, rhs};
}

/// Normalized modulus |(F1,F2)| / (||F1|| ||F2||) of the hermitian product of
/// two frames (compact geometry).
inline double frame_product_modulus(const FrameMatrix& f1, const FrameMatrix& f2) {
  const double h = std::abs(hermitian_product(f1, f2));
  const double a = std::abs((f1.rows * f1.rows.adjoint()).determinant());
  const double b = std::abs((f2.rows * f2.rows.adjoint()).determinant());
  return h / std::sqrt(a * b);
}

/// Hermitian form (w1, w2) = sum_i s_i conj(w1_i) w2_i with per-coordinate signs.
inline Complex signed_form(const CVector& w1, const CVector& w2, const std::vector<double>& signs) {
  Complex acc(0.0);
  for (Eigen::Index i = 0; i < w1.size(); ++i) acc += signs[static_cast<std::size_t>(i)] * std::conj(w1(i)) * w2(i);
  return acc;
}

/// Cayley distance with an explicit diagonal form: arccos for a definite
/// form, arccosh when `hyperbolic`.
inline double cayley_distance(const CVector& w1, const CVector& w2, const std::vector<double>& signs, bool hyperbolic) {
  if (w1.size() != w2.size() || static_cast<std::size_t>(w1.size()) != signs.size())
    throw Error(ErrorKind::DimensionMismatch, "vectors differ in length");
  if (w1.norm() == 0.0 || w2.norm() == 0.0) throw Error(ErrorKind::NullVector, "zero vector has no projective class");
  const double n1 = signed_form(w1, w1, signs).real();
  const double n2 = signed_form(w2, w2, signs).real();
  const double p = std::abs(signed_form(w1, w2, signs));
  if (!hyperbolic) return std::acos(std::clamp(p / std::sqrt(n1 * n2), 0.0, 1.0));
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw Error(ErrorKind::NonPositiveForm, "vector is not positive for the form");
  return std::acosh(std::max(p / std::sqrt(n1 * n2), 1.0));
}

/// Elliptic (compact) or hyperbolic (noncompact) hermitian Cayley distance
/// between [w1] and [w2].  The noncompact form is
/// (w, w')_n = conj(w_1) w'_1 - sum_{i>=2} conj(w_i) w'_i.
inline double cayley_distance(const CVector& w1, const CVector& w2, Signature sig) {
  std::vector<double> signs(static_cast<std::size_t>(w1.size()), 1.0);
  if (sig == Signature::noncompact)
    for (std::size_t i = 1; i < signs.size(); ++i) signs[i] = -1.0;
  return cayley_distance(w1, w2, signs, sig == Signature::noncompact);
}

/// Cayley distance between Pluecker images, using the form induced on
/// Lambda^n C^N by the signature.
inline double pluecker_cayley_distance(const PlueckerCoords& p1, const PlueckerCoords& p2, Signature sig) {
  if (p1.N != p2.N || p1.n != p2.n) throw Error(ErrorKind::DimensionMismatch, "Pluecker vectors differ in shape");
  std::vector<double> signs;
  for (const auto& I : p1.index_sets())
    signs.push_back(sig == Signature::compact ? 1.0 : pluecker_form_sign(I, p1.n));
  return cayley_distance(p1.coords, p2.coords, signs, sig == Signature::noncompact);
}

/// True iff W is a multiple of the identity (all stationary angles equal).
inline bool is_isoclinic_pair(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  if (z1.sig() != Signature::compact)
    throw Error(ErrorKind::SignatureUnsupported, "isoclinic test is defined for the compact signature");
  try {
    const WMatrix w = w_matrix(z1, z2, tol);
    const Complex lambda = w.W.trace() / static_cast<double>(z1.n());
    const double dev = (w.W - lambda * identity(z1.n())).norm();
    return dev <= tol.rel * std::max(1.0, w.W.norm());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OnPolarDivisor) throw;
  }
  const auto all = principal_angles_all(FrameMatrix::extended(z1), FrameMatrix::extended(z2), tol);
  return all.back() - all.front() <= std::sqrt(tol.rel);
}

}  // namespace grassgeo
