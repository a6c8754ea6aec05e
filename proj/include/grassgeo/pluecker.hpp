#pragma once

// Pluecker embedding, the Cauchy formula for the hermitian product of two
// planes, chart atlas and orthogonal complements.
//
// Index sets are 1-based, strictly increasing, and Pluecker coordinates are
// stored in lexicographic order of their index sets.

#include "grassgeo/core.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace grassgeo {

/// Strictly increasing n-subset of {1..N}.
class SchubertSymbol {
 public:
  SchubertSymbol(std::vector<int> sigma, int N) : sigma_(std::move(sigma)), N_(N) {
    if (sigma_.empty()) throw Error(ErrorKind::InvalidArgument, "Schubert symbol must be nonempty");
    for (std::size_t i = 0; i < sigma_.size(); ++i) {
      if (sigma_[i] < 1 || sigma_[i] > N_)
        throw Error(ErrorKind::InvalidArgument, "Schubert symbol entry out of range");
      if (i > 0 && sigma_[i] <= sigma_[i - 1])
        throw Error(ErrorKind::InvalidArgument, "Schubert symbol must be strictly increasing");
    }
  }

  static SchubertSymbol identity(int n, int N) {
    std::vector<int> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 1);
    return SchubertSymbol(std::move(s), N);
  }

  const std::vector<int>& sigma() const { return sigma_; }
  int n() const { return static_cast<int>(sigma_.size()); }
  int N() const { return N_; }
  int m() const { return N_ - n(); }

  /// omega(i) = sigma(i) - i.
  std::vector<int> omega() const {
    std::vector<int> w(sigma_.size());
    for (std::size_t i = 0; i < sigma_.size(); ++i) w[i] = sigma_[i] - static_cast<int>(i) - 1;
    return w;
  }

  /// Indices of {1..N} not in sigma, increasing.
  std::vector<int> complement() const {
    std::vector<int> c;
    for (int k = 1, j = 0; k <= N_; ++k) {
      if (j < n() && sigma_[static_cast<std::size_t>(j)] == k) { ++j; continue; }
      c.push_back(k);
    }
    return c;
  }

  friend bool operator==(const SchubertSymbol& a, const SchubertSymbol& b) {
    return a.N_ == b.N_ && a.sigma_ == b.sigma_;
  }
  /// The "precedes" order: lexicographic on the sorted entries.
  friend bool operator<(const SchubertSymbol& a, const SchubertSymbol& b) {
    return std::lexicographical_compare(a.sigma_.begin(), a.sigma_.end(), b.sigma_.begin(), b.sigma_.end());
  }

 private:
  std::vector<int> sigma_;
  int N_;
};

namespace detail {

/// All strictly increasing k-subsets of {1..N}, lexicographic.
inline std::vector<std::vector<int>> index_sets(int k, int N) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > N) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == N - k + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Columns of f selected by a 1-based index list.
inline CMatrix select_columns(const CMatrix& f, const std::vector<int>& cols) {
  CMatrix out(f.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = f.col(cols[j] - 1);
  return out;
}

}  // namespace detail

/// Homogeneous coordinates [Z_I] of a plane, I over n-subsets of {1..N} in
/// lexicographic order.
struct PlueckerCoords {
  int N = 0;
  int n = 0;
  CVector coords;

  std::vector<std::vector<int>> index_sets() const { return detail::index_sets(n, N); }

  /// Position of a sorted index set in `coords`, or -1.
  Eigen::Index position(const std::vector<int>& I) const {
    // Lexicographic rank of a combination.
    long long pos = 0;
    int prev = 0;
    for (int i = 0; i < n; ++i) {
      for (int v = prev + 1; v < I[static_cast<std::size_t>(i)]; ++v) pos += detail::binomial(N - v, n - i - 1);
      prev = I[static_cast<std::size_t>(i)];
    }
    return static_cast<Eigen::Index>(pos);
  }

  Complex at(const std::vector<int>& I) const { return coords(position(I)); }
};

/// n x n minors of the frame on every column set.
inline PlueckerCoords pluecker_coords(const FrameMatrix& f, const Tolerance& tol = {}) {
  require_full_rank(f, tol);
  PlueckerCoords p;
  p.N = static_cast<int>(f.N());
  p.n = static_cast<int>(f.n());
  const auto sets = detail::index_sets(p.n, p.N);
  p.coords.resize(static_cast<Eigen::Index>(sets.size()));
  for (std::size_t k = 0; k < sets.size(); ++k)
    p.coords(static_cast<Eigen::Index>(k)) = detail::select_columns(f.rows, sets[k]).partialPivLu().determinant();
  return p;
}

namespace detail {

/// Pluecker coordinate of an ordered (not necessarily sorted) index tuple:
/// alternating extension, zero on repeated indices.
inline Complex alternating_coord(const PlueckerCoords& p, std::vector<int> tuple) {
  int sign = 1;
  // insertion sort counting transpositions
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    for (std::size_t j = i; j > 0 && tuple[j - 1] > tuple[j]; --j) {
      std::swap(tuple[j - 1], tuple[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < tuple.size(); ++i)
    if (tuple[i] == tuple[i - 1]) return Complex(0.0);
  return static_cast<double>(sign) * p.at(tuple);
}

}  // namespace detail

/// Largest absolute value of the quadratic Grassmann-Pluecker relations
///   sum_k (-1)^k p(H, j_k) p(J \ j_k),  |H| = n-1, |J| = n+1.
/// Vanishes iff the coordinates come from a plane.
inline double pluecker_relations_residual(const PlueckerCoords& p) {
  if (p.n < 1 || p.N < p.n || p.coords.size() != detail::binomial(p.N, p.n))
    throw Error(ErrorKind::InvalidArgument, "Pluecker vector has the wrong length");
  if (p.n == 1 || p.n == p.N) return 0.0;
  const auto hs = detail::index_sets(p.n - 1, p.N);
  const auto js = detail::index_sets(p.n + 1, p.N);
  double worst = 0.0;
  for (const auto& h : hs) {
    for (const auto& j : js) {
      Complex acc(0.0);
      for (std::size_t k = 0; k < j.size(); ++k) {
        std::vector<int> left = h;
        left.push_back(j[k]);
        std::vector<int> right;
        for (std::size_t q = 0; q < j.size(); ++q)
          if (q != k) right.push_back(j[q]);
        const Complex term = detail::alternating_coord(p, left) * p.at(right);
        acc += (k % 2 == 0) ? term : -term;
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

/// Sign of the Pluecker coordinate Z_I under the indefinite form of
/// signature (n, m): (-1)^{#(I ∩ {n+1..N})}.
inline double pluecker_form_sign(const std::vector<int>& I, int n) {
  int k = 0;
  for (int v : I)
    if (v > n) ++k;
  return (k % 2 == 0) ? 1.0 : -1.0;
}

/// Pairing sum_I s_I conj(P1_I) P2_I, antilinear in the first argument;
/// s_I = 1 for the compact signature.
inline Complex pluecker_pairing(const PlueckerCoords& p1, const PlueckerCoords& p2, Signature sig) {
  if (p1.N != p2.N || p1.n != p2.n) throw Error(ErrorKind::DimensionMismatch, "Pluecker vectors differ in shape");
  if (sig == Signature::compact) return p1.coords.dot(p2.coords);
  const auto sets = p1.index_sets();
  Complex acc(0.0);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    acc += pluecker_form_sign(sets[k], p1.n) * std::conj(p1.coords(i)) * p2.coords(i);
  }
  return acc;
}

/// Hermitian product ((z1, z2)) = det(1_n + e Z2 Z1^+), antilinear in z1.
inline Complex hermitian_product(const ChartPoint& z1, const ChartPoint& z2) {
  require_same_shape(z1, z2);
#ifdef GRASSGEO_MUTATE_EPSILON_SIGN
  const double e = -z1.eps();
#else
  const double e = z1.eps();
#endif
  return (identity(z1.n()) + e * z2.Z() * z1.Z().adjoint()).determinant();
}

/// Hermitian product of two frames, det(F2 F1^+).
inline Complex hermitian_product(const FrameMatrix& f1, const FrameMatrix& f2) {
  if (f1.N() != f2.N() || f1.n() != f2.n()) throw Error(ErrorKind::DimensionMismatch, "frames differ in shape");
  return (f2.rows * f1.rows.adjoint()).determinant();
}

/// Extended frame of Z in the chart V_sigma: identity in the sigma columns,
/// Z in the complementary columns (increasing order).
inline FrameMatrix chart_frame(const CMatrix& z, const SchubertSymbol& sigma) {
  if (z.rows() != sigma.n() || z.cols() != sigma.m())
    throw Error(ErrorKind::DimensionMismatch, "chart coordinates do not match the symbol");
  CMatrix f = CMatrix::Zero(sigma.n(), sigma.N());
  const auto& s = sigma.sigma();
  const auto c = sigma.complement();
  for (std::size_t i = 0; i < s.size(); ++i) f(static_cast<Eigen::Index>(i), s[i] - 1) = 1.0;
  for (std::size_t a = 0; a < c.size(); ++a) f.col(c[a] - 1) = z.col(static_cast<Eigen::Index>(a));
  return FrameMatrix(std::move(f));
}

/// Pontryagin coordinates of span(f) in the chart V_sigma: the non-sigma
/// columns of (f_sigma)^{-1} f.
inline CMatrix chart_transition(const FrameMatrix& f, const SchubertSymbol& sigma, const Tolerance& tol = {}) {
  if (f.n() != sigma.n() || f.N() != sigma.N())
    throw Error(ErrorKind::DimensionMismatch, "frame and symbol have different shapes");
  const CMatrix block = detail::select_columns(f.rows, sigma.sigma());
  const RVector s = singular_values(block);
  const double scale = spectral_norm(f.rows);
  if (scale == 0.0 || s(s.size() - 1) <= tol.rel * scale)
    throw Error(ErrorKind::OutsideChart, "sigma-minor of the frame is singular");
  const CMatrix normalized = block.partialPivLu().solve(f.rows);
  return detail::select_columns(normalized, sigma.complement());
}

/// m x N frame (-Z^+ | 1_m) of the orthogonal complement of (1_n | Z).
inline FrameMatrix orthogonal_complement(const ChartPoint& z) {
  if (z.sig() != Signature::compact)
    throw Error(ErrorKind::SignatureUnsupported, "orthogonal complement is defined for the compact signature");
  CMatrix f(z.m(), z.n() + z.m());
  f << -z.Z().adjoint(), identity(z.m());
  return FrameMatrix(std::move(f));
}

/// |det(1_n + e Z Z'^+) - conj det(1_m + e Z^+ Z')| for z = z1, z' = z2.
inline double complement_identity_residual(const ChartPoint& z1, const ChartPoint& z2) {
  require_same_shape(z1, z2);
  const double e = z1.eps();
  const Complex lhs = (identity(z1.n()) + e * z1.Z() * z2.Z().adjoint()).determinant();
  const Complex rhs = (identity(z1.m()) + e * z1.Z().adjoint() * z2.Z()).determinant();
  return std::abs(lhs - std::conj(rhs));
}

/// Whether span(z) lies on the polar divisor of span(base), i.e.
/// ((z, base)) = 0.  Cross-checked against dim(span(z) ∩ base^perp) >= 1.
inline bool in_polar_divisor(const FrameMatrix& z, const FrameMatrix& base, const Tolerance& tol = {}) {
  if (z.N() != base.N() || z.n() != base.n())
    throw Error(ErrorKind::DimensionMismatch, "frames differ in shape");
  const FrameMatrix qz = orthonormal_basis(z, tol);
  const FrameMatrix qb = orthonormal_basis(base, tol);
  // orthonormal rows have Hadamard bound 1
  const bool by_det = std::abs(hermitian_product(qz, qb)) <= tol.rel;
  bool by_intersection = false;
  if (base.n() < base.N()) {
    Tolerance loose = tol;
    loose.rank_factor = tol.rel;
    by_intersection = intersection_dim(qz, complement_basis(qb, tol), loose) >= 1;
  }
  if (by_det != by_intersection)
    throw Error(ErrorKind::InternalInconsistency,
                "determinant and intersection tests disagree (ill-conditioned input)");
  return by_det;
}

}  // namespace grassgeo
