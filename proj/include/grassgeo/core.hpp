#pragma once

// Domain types and dense complex linear algebra shared by every grassgeo
// module.  Points of the Grassmann manifold G_n(C^{n+m}) are handled either
// as chart points Z (n x m Pontryagin coordinates, frame (1_n | Z)) or as
// n x N frame matrices whose rows span the plane.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace grassgeo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// ---------------------------------------------------------------------------
// Errors

enum class ErrorKind {
  RankDeficient,
  DimensionMismatch,
  OutsideChart,
  SignatureUnsupported,
  InternalInconsistency,
  OnPolarDivisor,
  NullVector,
  NonPositiveForm,
  ChartSingularity,
  InfiniteDiastasis,
  DegenerateVector,
  InvalidPoint,
  InvalidArgument,
};

inline const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutsideChart: return "OutsideChart";
    case ErrorKind::SignatureUnsupported: return "SignatureUnsupported";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::OnPolarDivisor: return "OnPolarDivisor";
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::NonPositiveForm: return "NonPositiveForm";
    case ErrorKind::ChartSingularity: return "ChartSingularity";
    case ErrorKind::InfiniteDiastasis: return "InfiniteDiastasis";
    case ErrorKind::DegenerateVector: return "DegenerateVector";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Signature: +1 for the compact Grassmannian X_c = SU(n+m)/S(U(n)xU(m)),
// -1 for its noncompact dual X_n = SU(n,m)/S(U(n)xU(m)).

enum class Signature : int { compact = 1, noncompact = -1 };

inline double epsilon(Signature s) { return static_cast<double>(static_cast<int>(s)); }

inline Signature signature_from_int(int e) {
  if (e == 1) return Signature::compact;
  if (e == -1) return Signature::noncompact;
  throw Error(ErrorKind::InvalidArgument, "signature must be +1 or -1, got " + std::to_string(e));
}

inline const char* signature_name(Signature s) {
  return s == Signature::compact ? "compact" : "noncompact";
}

// ---------------------------------------------------------------------------
// Tolerances

struct Tolerance {
  double rel = 1e-9;
  // Relative singular-value threshold for rank decisions; 0 selects the
  // default max(rows, cols) * 2^-50.
  double rank_factor = 0.0;

  double rank_threshold(Eigen::Index rows, Eigen::Index cols) const {
    if (rank_factor > 0.0) return rank_factor;
    return static_cast<double>(std::max(rows, cols)) * std::ldexp(1.0, -50);
  }

  static Tolerance with_rel(double rel) {
    if (!(rel > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    return Tolerance{rel, 0.0};
  }
};

// ---------------------------------------------------------------------------
// Small matrix helpers

inline CMatrix identity(Eigen::Index k) { return CMatrix::Identity(k, k); }

inline CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

/// Singular values in descending order.
inline RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector();
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

inline double spectral_norm(const CMatrix& a) {
  RVector s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

/// Numerical rank: singular values below threshold * sigma_max count as zero.
inline Eigen::Index numerical_rank(const CMatrix& a, const Tolerance& tol) {
  RVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = tol.rank_threshold(a.rows(), a.cols()) * s(0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// Product of row norms (Hadamard bound on any n x n minor of a).
inline double hadamard_bound(const CMatrix& a) {
  double p = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) p *= a.row(i).norm();
  return p;
}

/// Function of a hermitian matrix, evaluated on its spectrum.
template <class F>
CMatrix hermitian_apply(const CMatrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& ev = es.eigenvalues();
  RVector fv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) fv(i) = f(ev(i));
  return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
}

inline CMatrix hermitian_sqrt(const CMatrix& h) {
  return hermitian_apply(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

inline CMatrix hermitian_inv_sqrt(const CMatrix& h) {
  return hermitian_apply(h, [](double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::InvalidPoint, "matrix is not positive definite");
    return 1.0 / std::sqrt(x);
  });
}

/// Rectangular "diagonal" function: for B = U diag(sigma) V^+ returns
/// U diag(g(sigma)) V^+ (thin form), i.e. B * g(sqrt(B^+B)) / sqrt(B^+B)
/// without the 0/0 at sigma = 0.
template <class G>
CMatrix singular_apply(const CMatrix& b, G&& g) {
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  RVector gs(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) gs(i) = g(s(i));
  return svd.matrixU() * gs.asDiagonal() * svd.matrixV().adjoint();
}

/// x -> f(x)/x with a Taylor fallback below 1e-6 for the sin/tan-type
/// functions used here (f(x) = x + c3 x^3 + ...).
inline double ratio_over_x(double fx, double x, double c3) {
  if (std::abs(x) < 1e-6) return 1.0 + c3 * x * x;
  return fx / x;
}

// ---------------------------------------------------------------------------
// Domain types

/// n x m Pontryagin coordinates of a plane in the chart V_0, with the
/// signature it lives in.  Noncompact points satisfy 1_m - Z^+Z > 0.
class ChartPoint {
 public:
  ChartPoint(CMatrix z, Signature sig) : z_(std::move(z)), sig_(sig) {
    if (z_.rows() < 1 || z_.cols() < 1)
      throw Error(ErrorKind::InvalidArgument, "chart point needs n >= 1 and m >= 1");
    if (!z_.allFinite()) throw Error(ErrorKind::InvalidPoint, "chart point has non-finite entries");
    if (sig_ == Signature::noncompact && !(spectral_norm(z_) < 1.0))
      throw Error(ErrorKind::InvalidPoint, "noncompact point requires 1 - Z^+Z > 0");
  }

  const CMatrix& Z() const { return z_; }
  Signature sig() const { return sig_; }
  double eps() const { return epsilon(sig_); }
  Eigen::Index n() const { return z_.rows(); }
  Eigen::Index m() const { return z_.cols(); }

  static ChartPoint origin(Eigen::Index n, Eigen::Index m, Signature sig) {
    return ChartPoint(CMatrix::Zero(n, m), sig);
  }

 private:
  CMatrix z_;
  Signature sig_;
};

/// n x N matrix whose rows span an n-plane of C^N.
struct FrameMatrix {
  CMatrix rows;

  FrameMatrix() = default;
  explicit FrameMatrix(CMatrix r) : rows(std::move(r)) {}

  Eigen::Index n() const { return rows.rows(); }
  Eigen::Index N() const { return rows.cols(); }

  /// Extended matrix (1_n | Z) of a chart point.
  static FrameMatrix extended(const CMatrix& z) {
    CMatrix f(z.rows(), z.rows() + z.cols());
    f << identity(z.rows()), z;
    return FrameMatrix(std::move(f));
  }
  static FrameMatrix extended(const ChartPoint& p) { return extended(p.Z()); }

  /// Coordinate plane span{e_1..e_k} in C^N.
  static FrameMatrix coordinate(Eigen::Index k, Eigen::Index N) {
    CMatrix f = CMatrix::Zero(k, N);
    f.leftCols(k) = identity(k);
    return FrameMatrix(std::move(f));
  }
};

/// Tangent vector at the origin O, as normal coordinates B (n x m).
struct TangentDirection {
  CMatrix B;
};

/// The r = min(n, m) stationary angles, ascending.
struct AngleSpectrum {
  std::vector<double> theta;
  Signature sig = Signature::compact;

  std::size_t size() const { return theta.size(); }
  double max() const { return theta.empty() ? 0.0 : theta.back(); }
};

inline void require_same_shape(const ChartPoint& a, const ChartPoint& b) {
  if (a.n() != b.n() || a.m() != b.m())
    throw Error(ErrorKind::DimensionMismatch, "chart points have different shapes");
  if (a.sig() != b.sig()) throw Error(ErrorKind::InvalidArgument, "chart points have different signatures");
}

inline void require_full_rank(const FrameMatrix& f, const Tolerance& tol) {
  if (f.n() < 1 || f.N() < f.n()) throw Error(ErrorKind::InvalidArgument, "frame must be n x N with 1 <= n <= N");
  if (numerical_rank(f.rows, tol) < f.n()) throw Error(ErrorKind::RankDeficient, "frame rows are linearly dependent");
}

// ---------------------------------------------------------------------------
// Core operations

/// Orthonormal rows with the same row span: Q = L f with Q Q^+ = 1_n.
/// Householder QR of f^T, phases fixed so the triangular factor has a
/// positive diagonal (so (1_n | 0) is returned unchanged).
inline FrameMatrix orthonormal_basis(const FrameMatrix& f, const Tolerance& tol = {}) {
  require_full_rank(f, tol);
  const Eigen::Index n = f.n();
  Eigen::HouseholderQR<CMatrix> qr(f.rows.transpose());
  CMatrix q = qr.householderQ() * CMatrix::Identity(f.N(), n);
  CMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return FrameMatrix(q.transpose());
}

/// dim(span(a) ∩ span(b)) = n_a + n_b - rank([a; b]).
inline Eigen::Index intersection_dim(const FrameMatrix& a, const FrameMatrix& b, const Tolerance& tol = {}) {
  if (a.N() != b.N()) throw Error(ErrorKind::DimensionMismatch, "frames live in different ambient spaces");
  require_full_rank(a, tol);
  require_full_rank(b, tol);
  CMatrix stacked(a.n() + b.n(), a.N());
  stacked << a.rows, b.rows;
  return a.n() + b.n() - numerical_rank(stacked, tol);
}

/// Orthonormal basis (as rows) of the orthogonal complement of span(f).
inline FrameMatrix complement_basis(const FrameMatrix& f, const Tolerance& tol = {}) {
  require_full_rank(f, tol);
  Eigen::JacobiSVD<CMatrix> svd(f.rows, Eigen::ComputeFullV);
  const CMatrix& v = svd.matrixV();
  // Null vectors x of f satisfy f x = 0; the complement rows are conj(x)^T.
  CMatrix c = v.rightCols(f.N() - f.n()).adjoint();
  return FrameMatrix(std::move(c));
}

/// Relative coordinates of z2 seen from z1 after z1 is moved to the origin:
///   (1 + e Z1 Z1^+)^{-1/2} (Z2 - Z1) (1 + e Z1^+ Z2)^{-1} (1 + e Z1^+ Z1)^{1/2}.
/// Throws OutsideChart when 1 + e Z1^+ Z2 is numerically singular (compact
/// points on each other's polar divisor).
inline CMatrix relative_coordinates(const ChartPoint& z1, const ChartPoint& z2, const Tolerance& tol = {}) {
  require_same_shape(z1, z2);
  const double e = z1.eps();
  const CMatrix& a = z1.Z();
  const CMatrix& b = z2.Z();
  const Eigen::Index n = a.rows(), m = a.cols();
  CMatrix mid = identity(m) + e * a.adjoint() * b;
  RVector s = singular_values(mid);
  const double scale = std::max(1.0, spectral_norm(a)) * std::max(1.0, spectral_norm(b));
  if (s(s.size() - 1) <= tol.rel * scale)
    throw Error(ErrorKind::OutsideChart, "1 + eps Z1^+ Z2 is singular");
  CMatrix left = hermitian_inv_sqrt(identity(n) + e * a * a.adjoint());
  CMatrix right = hermitian_sqrt(identity(m) + e * a.adjoint() * a);
  return left * (b - a) * mid.partialPivLu().inverse() * right;
}

}  // namespace grassgeo
