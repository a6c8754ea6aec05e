#pragma once

// Cut and conjugate loci of the origin O = span{e_1..e_n} in X_c, tangent
// conjugate times along H = sum h_i D_{i,n+i}, and the restricted roots of
// (SU(n+m), S(U(n) x U(m))).

#include "grassgeo/angles.hpp"
#include "grassgeo/core.hpp"
#include "grassgeo/geodesics.hpp"
#include "grassgeo/pluecker.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace grassgeo {

enum class ConjugateKind { NotConjugate, WType, IType, Both };

inline const char* conjugate_kind_name(ConjugateKind k) {
  switch (k) {
    case ConjugateKind::NotConjugate: return "NotConjugate";
    case ConjugateKind::WType: return "WType";
    case ConjugateKind::IType: return "IType";
    case ConjugateKind::Both: return "Both";
  }
  return "Unknown";
}

struct ConjugateClass {
  ConjugateKind kind = ConjugateKind::NotConjugate;
  int zero_angles = 0;
  int right_angles = 0;
  int coincidences = 0;
  std::vector<double> angles;
};

enum class ConjugateFamily { t1, t2, t3 };

inline const char* family_name(ConjugateFamily f) {
  switch (f) {
    case ConjugateFamily::t1: return "t1";
    case ConjugateFamily::t2: return "t2";
    case ConjugateFamily::t3: return "t3";
  }
  return "unknown";
}

struct ConjugateTime {
  double t = 0.0;
  int multiplicity = 0;
  ConjugateFamily family = ConjugateFamily::t1;
};

/// Element of the Cartan subalgebra, sum h_i^2 = 1.
struct CartanVector {
  std::vector<double> h;

  explicit CartanVector(std::vector<double> v) : h(std::move(v)) {
    if (h.empty()) throw Error(ErrorKind::InvalidArgument, "Cartan vector must be nonempty");
    double s = 0.0;
    for (double x : h) {
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "Cartan vector has non-finite entries");
      s += x * x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "Cartan vector must satisfy sum h_i^2 = 1");
  }

  static CartanVector normalized(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    if (!(s > 0.0)) throw Error(ErrorKind::DegenerateVector, "zero Cartan vector");
    for (double& x : v) x /= std::sqrt(s);
    return CartanVector(std::move(v));
  }

  int r() const { return static_cast<int>(h.size()); }

  /// B = diag(h) as an n x m tangent direction.
  TangentDirection direction(int n, int m) const {
    if (r() != std::min(n, m)) throw Error(ErrorKind::DimensionMismatch, "Cartan vector length must be min(n, m)");
    CMatrix b = CMatrix::Zero(n, m);
    for (int i = 0; i < r(); ++i) b(i, i) = h[static_cast<std::size_t>(i)];
    return TangentDirection{b};
  }
};

// ---------------------------------------------------------------------------
// Cut locus

namespace detail {

inline FrameMatrix as_frame(const ChartPoint& z) {
  if (z.sig() != Signature::compact)
    throw Error(ErrorKind::SignatureUnsupported, "cut and conjugate loci are computed in the compact manifold");
  return FrameMatrix::extended(z);
}

}  // namespace detail

/// Whether span(z) is on the polar divisor of O, cross-checked against its
/// largest principal angle with O being pi/2.
inline bool in_cut_locus(const FrameMatrix& z, const Tolerance& tol = {}) {
  const FrameMatrix o = FrameMatrix::coordinate(z.n(), z.N());
  const bool polar = in_polar_divisor(z, o, tol);
  const auto all = principal_angles_all(z, o, tol);
  const bool right = kHalfPi - all.back() <= 2.0 * tol.rel;
  if (polar != right) throw Error(ErrorKind::InternalInconsistency, "polar-divisor and angle tests disagree");
  return polar;
}

inline bool in_cut_locus(const ChartPoint& z, const Tolerance& tol = {}) {
  return in_cut_locus(detail::as_frame(z), tol);
}

// ---------------------------------------------------------------------------
// Conjugate locus

inline constexpr double kAngleCoincidence = 1e-7;

/// Classification by the angles with O: an angle 0 (beyond the n - m
/// structural ones) or pi/2 puts the plane in the W part, two equal angles
/// strictly between 0 and pi/2 in the I part.
inline ConjugateClass classify_conjugate(const FrameMatrix& z, const Tolerance& tol = {}) {
  const FrameMatrix o = FrameMatrix::coordinate(z.n(), z.N());
  ConjugateClass c;
  c.angles = principal_angles(z, o, tol).theta;
  std::vector<double> interior;
  for (double t : c.angles) {
    if (t <= tol.rel)
      ++c.zero_angles;
    else if (t >= kHalfPi - tol.rel)
      ++c.right_angles;
    else
      interior.push_back(t);
  }
  for (std::size_t i = 1; i < interior.size(); ++i)
    if (interior[i] - interior[i - 1] <= kAngleCoincidence) ++c.coincidences;
  const bool w = c.zero_angles + c.right_angles >= 1;
  const bool eq = c.coincidences >= 1;
  c.kind = w && eq ? ConjugateKind::Both : w ? ConjugateKind::WType : eq ? ConjugateKind::IType : ConjugateKind::NotConjugate;
  return c;
}

inline ConjugateClass classify_conjugate(const ChartPoint& z, const Tolerance& tol = {}) {
  return classify_conjugate(detail::as_frame(z), tol);
}

namespace detail {

inline void require_nondegenerate(const CartanVector& h) {
  for (double x : h.h)
    if (std::abs(x) <= 1e-12) throw Error(ErrorKind::DegenerateVector, "Cartan vector has a zero entry");
}

inline void add_time(std::vector<ConjugateTime>& out, double t, int mult, ConjugateFamily f) {
  for (auto& c : out)
    if (c.family == f && std::abs(c.t - t) <= 1e-12 * t) {
      c.multiplicity += mult;
      return;
    }
  out.push_back(ConjugateTime{t, mult, f});
}

}  // namespace detail

/// Conjugate times t H of the geodesic exp(tH) o, for lambda = 1..lambda_max:
///   t1 = lambda pi / |h_p ± h_q|  (multiplicity 2)
///   t2 = lambda pi / (2 |h_p|)     (multiplicity 1)
///   t3 = lambda pi / |h_p|         (multiplicity 2|m - n|, only if m != n)
/// Equal times within a family are merged with summed multiplicity.
inline std::vector<ConjugateTime> tangent_conjugate_times(const CartanVector& h, int n, int m, int lambda_max) {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "need n, m >= 1");
  if (h.r() != std::min(n, m)) throw Error(ErrorKind::DimensionMismatch, "Cartan vector length must be min(n, m)");
  if (lambda_max < 1) throw Error(ErrorKind::InvalidArgument, "lambda_max must be >= 1");
  detail::require_nondegenerate(h);
  std::vector<ConjugateTime> out;
  const int r = h.r();
  for (int lam = 1; lam <= lambda_max; ++lam) {
    const double lp = lam * kPi;
    for (int p = 0; p < r; ++p)
      for (int q = p + 1; q < r; ++q)
        for (double s : {1.0, -1.0}) {
          const double d = std::abs(h.h[static_cast<std::size_t>(p)] + s * h.h[static_cast<std::size_t>(q)]);
          if (d > 1e-12) detail::add_time(out, lp / d, 2, ConjugateFamily::t1);
        }
    for (int p = 0; p < r; ++p) detail::add_time(out, lp / (2.0 * std::abs(h.h[static_cast<std::size_t>(p)])), 1, ConjugateFamily::t2);
    if (n != m)
      for (int p = 0; p < r; ++p)
        detail::add_time(out, lp / std::abs(h.h[static_cast<std::size_t>(p)]), 2 * std::abs(m - n), ConjugateFamily::t3);
  }
  std::stable_sort(out.begin(), out.end(), [](const ConjugateTime& a, const ConjugateTime& b) {
    if (a.family != b.family) return a.family < b.family;
    return a.t < b.t;
  });
  return out;
}

/// Smallest time of a family, or NaN when the family is empty.
inline double smallest_time(const std::vector<ConjugateTime>& times, ConjugateFamily f) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& c : times)
    if (c.family == f && !(c.t >= best)) best = c.t;
  return best;
}

/// Exponentiates the smallest t1 and t2 times of H = diag(h) and checks that
/// they land in the I part and the W part of the conjugate locus.
inline bool conjugate_roundtrip_check(const CartanVector& h, int n, int m, const Tolerance& tol = {}) {
  const auto times = tangent_conjugate_times(h, n, m, 1);
  const TangentDirection b = h.direction(n, m);
  const double t1 = smallest_time(times, ConjugateFamily::t1);
  const double t2 = smallest_time(times, ConjugateFamily::t2);
  auto kind_at = [&](double t) { return classify_conjugate(geodesic_frame(b, t, Signature::compact), tol).kind; };
  if (!std::isnan(t1)) {
    const ConjugateKind k = kind_at(t1);
    if (k != ConjugateKind::IType && k != ConjugateKind::Both) return false;
  }
  const ConjugateKind k2 = kind_at(t2);
  return k2 == ConjugateKind::WType || k2 == ConjugateKind::Both;
}

/// First t > 0 at which the geodesic exp(tB) o reaches the polar divisor of
/// O: the smallest eigenvalue of the hermitian block co sqrt(t^2 BB^+) turns
/// negative there.  Bracketed by a scan, then bisected.
inline double first_cut_time(const TangentDirection& b, double abs_tol = 1e-13) {
  const double fro = b.B.norm();
  if (!(fro > 0.0)) throw Error(ErrorKind::DegenerateVector, "zero direction never reaches the cut locus");
  auto lead = [&](double t) {
    const CMatrix c = block_form(b, t, Signature::compact).topLeftCorner(b.B.rows(), b.B.rows());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  // the first zero is at t >= pi / (2 ||B||_F), and the block stays
  // negative for a while after it, so this step cannot skip a sign change
  const double dt = kPi / (8.0 * fro);
  double lo = 0.0, hi = dt;
  while (lead(hi) > 0.0) {
    lo = hi;
    hi += dt;
  }
  while (hi - lo > abs_tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (lead(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (mid == lo && mid == hi) break;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Restricted roots

namespace detail {

inline CMatrix unit(int N, int i, int j) {
  CMatrix e = CMatrix::Zero(N, N);
  e(i - 1, j - 1) = 1.0;
  return e;
}
inline CMatrix dmat(int N, int i, int j) { return unit(N, i, j) - unit(N, j, i); }
inline CMatrix smat(int N, int i, int j) { return unit(N, i, j) + unit(N, j, i); }

}  // namespace detail

struct RootVector {
  std::string label;          // e.g. "X4_12"
  std::vector<int> coeffs;    // root = i * sum coeffs[k] h_k
  CMatrix X;
};

/// Cartan element H = sum h_i D_{i,n+i}.
inline CMatrix cartan_element(const CartanVector& h, int n, int m) {
  if (h.r() != std::min(n, m)) throw Error(ErrorKind::DimensionMismatch, "Cartan vector length must be min(n, m)");
  const int N = n + m;
  CMatrix H = CMatrix::Zero(N, N);
  for (int i = 1; i <= h.r(); ++i) H += h.h[static_cast<std::size_t>(i - 1)] * detail::dmat(N, i, n + i);
  return H;
}

/// Root space vectors X^1..X^14 of Table I.
inline std::vector<RootVector> root_vectors(int n, int m) {
  const int N = n + m, r = std::min(n, m), k = std::abs(m - n);
  const Complex I(0.0, 1.0);
  std::vector<RootVector> out;
  auto coeffs = [r](std::initializer_list<std::pair<int, int>> terms) {
    std::vector<int> c(static_cast<std::size_t>(r), 0);
    for (auto [idx, v] : terms) c[static_cast<std::size_t>(idx - 1)] += v;
    return c;
  };
  auto name = [](int j, int a, int b) { return "X" + std::to_string(j) + "_" + std::to_string(a) + std::to_string(b); };
  for (int a = 1; a <= r; ++a)
    for (int b = 1; b <= r; ++b) {
      if (a == b) continue;
      for (int s = 0; s < 2; ++s) {
        auto F = s == 0 ? detail::dmat : detail::smat;
        for (int e1 : {1, -1})
          for (int e2 : {1, -1}) {
            CMatrix X = F(N, a, n + b) + double(e1) * F(N, n + a, b) +
                        I * double(e2) * (F(N, n + a, n + b) - double(e1) * F(N, a, b));
            // j = e1 (1 + e2/2) + 5/2
            const int j = (2 * e1 + e1 * e2 + 5) / 2 + 4 * s;
            out.push_back(RootVector{name(j, a, b), coeffs({{a, e2}, {b, e2 * e1}}), std::move(X)});
          }
      }
    }
  for (int a = 1; a <= r; ++a) {
    const CMatrix x8 = detail::smat(N, a, n + a) + detail::smat(N, n + a, a) +
                       I * (detail::smat(N, n + a, n + a) - detail::smat(N, a, a));
    const CMatrix x7 = detail::smat(N, a, n + a) + detail::smat(N, n + a, a) -
                       I * (detail::smat(N, n + a, n + a) - detail::smat(N, a, a));
    out.push_back(RootVector{"X13_" + std::to_string(a), coeffs({{a, 2}}), 0.5 * x8});
    out.push_back(RootVector{"X14_" + std::to_string(a), coeffs({{a, -2}}), 0.5 * x7});
  }
  for (int a = 1; a <= r; ++a)
    for (int b = 1; b <= k; ++b)
      for (int s : {1, -1}) {
        CMatrix x9, x11;
        if (n <= m) {
          x9 = detail::unit(N, n + a, 2 * n + b) - double(s) * I * detail::unit(N, a, 2 * n + b);
          x11 = detail::unit(N, 2 * n + b, a) + double(s) * I * detail::unit(N, 2 * n + b, n + a);
        } else {
          x9 = detail::unit(N, n + a, m + b) - double(s) * I * detail::unit(N, a, m + b);
          x11 = detail::unit(N, m + b, a) + double(s) * I * detail::unit(N, m + b, n + a);
        }
        out.push_back(RootVector{name(s == 1 ? 9 : 10, a, b), coeffs({{a, s}}), std::move(x9)});
        out.push_back(RootVector{name(s == 1 ? 11 : 12, a, b), coeffs({{a, s}}), std::move(x11)});
      }
  return out;
}

/// Table I multiplicity of the root i sum c_k h_k.
inline int table_multiplicity(const std::vector<int>& c, int n, int m) {
  int nonzero = 0, maxabs = 0;
  for (int v : c)
    if (v != 0) {
      ++nonzero;
      maxabs = std::max(maxabs, std::abs(v));
    }
  if (nonzero == 2) return 2;
  if (nonzero == 1 && maxabs == 2) return 1;
  if (nonzero == 1 && maxabs == 1) return 2 * std::abs(m - n);
  return 0;
}

struct RootCheck {
  std::string root;       // symbolic, e.g. "i(h1-h2)"
  Complex value;
  int table = 0;          // summed Table I multiplicity of the roots sharing this value
  Eigen::Index span_rank = 0;
  Eigen::Index eigenspace = 0;
  bool ok = false;
};

struct RootsReport {
  bool ok = false;
  double max_residual = 0.0;
  int dimension_sum = 0;      // r + sum over positive roots of the multiplicity
  int dimension_m = 0;        // 2nm
  double killing_min = 0.0;   // min Q over the m-components of the root vectors
  std::vector<RootCheck> roots;
  std::vector<std::string> failures;
};

/// Q(X, Y) = -1/2 Tr(XY).
inline Complex killing_form(const CMatrix& x, const CMatrix& y) { return -0.5 * (x * y).trace(); }

/// Component of X in m (the off-diagonal n x m and m x n blocks).
inline CMatrix m_component(const CMatrix& x, int n) {
  CMatrix y = x;
  y.topLeftCorner(n, n).setZero();
  y.bottomRightCorner(x.rows() - n, x.cols() - n).setZero();
  return y;
}

inline RootsReport restricted_roots_report(int n, int m, const CartanVector& h, const Tolerance& tol = {}) {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "need n, m >= 1");
  const int N = n + m;
  const CMatrix H = cartan_element(h, n, m);
  const auto vecs = root_vectors(n, m);
  const Complex I(0.0, 1.0);
  RootsReport rep;
  rep.dimension_m = 2 * n * m;
  rep.killing_min = std::numeric_limits<double>::infinity();

  auto value_of = [&](const std::vector<int>& c) {
    double v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * h.h[k];
    return I * v;
  };

  std::map<std::vector<int>, std::vector<const RootVector*>> by_root;
  for (const auto& rv : vecs) {
    const Complex lam = value_of(rv.coeffs);
    const double res = (H * rv.X - rv.X * H - lam * rv.X).cwiseAbs().maxCoeff();
    rep.max_residual = std::max(rep.max_residual, res);
    if (res > tol.rel) rep.failures.push_back(rv.label + ": [H,X] != lambda X (residual " + std::to_string(res) + ")");
    by_root[rv.coeffs].push_back(&rv);

    const CMatrix xm = m_component(rv.X, n);
    const double q = killing_form(-xm.adjoint(), xm).real();
    rep.killing_min = std::min(rep.killing_min, q);
    if (!(q > 0.0)) rep.failures.push_back(rv.label + ": m-component has nonpositive Killing norm");
    for (const CMatrix& y : {CMatrix((rv.X - rv.X.adjoint()) / 2.0), CMatrix((rv.X + rv.X.adjoint()) / (2.0 * I))}) {
      const CMatrix ym = m_component(y, n);
      if (ym.norm() == 0.0) continue;
      const double qy = killing_form(ym, ym).real();
      rep.killing_min = std::min(rep.killing_min, qy);
      if (!(qy > 0.0)) rep.failures.push_back(rv.label + ": Q(Y, Y) <= 0 on a real m-component");
    }
  }

  // dimension bookkeeping over positive roots (first nonzero coefficient > 0)
  rep.dimension_sum = h.r();
  for (const auto& [c, list] : by_root) {
    const auto first = std::find_if(c.begin(), c.end(), [](int v) { return v != 0; });
    if (first != c.end() && *first > 0) rep.dimension_sum += table_multiplicity(c, n, m);
  }
  if (rep.dimension_sum != rep.dimension_m)
    rep.failures.push_back("multiplicities sum to " + std::to_string(rep.dimension_sum) + ", expected 2nm = " +
                           std::to_string(rep.dimension_m));

  // roots sharing a numerical value are checked together
  CMatrix adH = Eigen::kroneckerProduct(identity(N), H) - Eigen::kroneckerProduct(H.transpose(), identity(N));
  std::vector<std::vector<std::vector<int>>> groups;
  std::vector<Complex> group_values;
  for (const auto& [c, list] : by_root) {
    const Complex v = value_of(c);
    bool placed = false;
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (std::abs(group_values[g] - v) <= 1e-9) {
        groups[g].push_back(c);
        placed = true;
        break;
      }
    if (!placed) {
      groups.push_back({c});
      group_values.push_back(v);
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    RootCheck rc;
    rc.value = group_values[g];
    std::vector<const RootVector*> members;
    for (const auto& c : groups[g]) {
      rc.table += table_multiplicity(c, n, m);
      std::ostringstream name;
      name << "i(";
      bool first = true;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (c[k] < 0) name << "-";
        else if (!first) name << "+";
        if (std::abs(c[k]) != 1) name << std::abs(c[k]);
        name << "h" << k + 1;
        first = false;
      }
      name << ")";
      rc.root += (rc.root.empty() ? "" : "=") + name.str();
      for (const auto* p : by_root[c]) members.push_back(p);
    }
    CMatrix span(N * N, static_cast<Eigen::Index>(members.size()));
    for (std::size_t k = 0; k < members.size(); ++k)
      span.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXcd>(members[k]->X.data(), N * N);
    Tolerance rank_tol = tol;
    rank_tol.rank_factor = 1e-10;
    rc.span_rank = numerical_rank(span, rank_tol);
    const CMatrix shifted = adH - rc.value * identity(N * N);
    rc.eigenspace = N * N - numerical_rank(shifted, rank_tol);
    rc.ok = rc.span_rank == rc.table && rc.eigenspace == rc.table;
    if (!rc.ok)
      rep.failures.push_back(rc.root + ": Table I gives " + std::to_string(rc.table) + ", span rank " +
                             std::to_string(rc.span_rank) + ", ad_H eigenspace " + std::to_string(rc.eigenspace));
    rep.roots.push_back(std::move(rc));
  }
  rep.ok = rep.failures.empty();
  return rep;
}

inline bool restricted_roots_verify(int n, int m, const CartanVector& h, const Tolerance& tol = {}) {
  return restricted_roots_report(n, m, h, tol).ok;
}

}  // namespace grassgeo
