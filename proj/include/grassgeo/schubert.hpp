#pragma once

// Schubert cells and varieties of G_n(C^N) with respect to the coordinate
// flag C^1 ⊂ C^2 ⊂ ... ⊂ C^N (C^j = span{e_1..e_j}).
//
// A plane X lies in the open cell C_sigma when
//   sigma(i) = min{ j : dim(X ∩ C^j) >= i }.
// Its reduced echelon frame has the unit pivot of row i in column sigma(i),
// zeros to the right of each pivot and zeros in the other pivot columns.
// For example, in G_2(C^4) the span of (1, 2, 0, 0) and (0, 3, 1, 0)
// has sigma = {2, 3} and echelon frame
//   ( 1/2  1  0  0 )
//   (-3/2  0  1  0 ).

#include "grassgeo/core.hpp"
#include "grassgeo/pluecker.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace grassgeo {

/// Monotone omega with its jumps 0 = i_0 < i_1 < ... < i_l = n (1-based
/// positions where omega increases, plus n).
struct JumpSequence {
  std::vector<int> omega;
  std::vector<int> jumps;
  int m = 0;

  JumpSequence(std::vector<int> w, int m_) : omega(std::move(w)), m(m_) {
    if (omega.empty()) throw Error(ErrorKind::InvalidArgument, "omega must be nonempty");
    for (std::size_t i = 0; i < omega.size(); ++i) {
      if (omega[i] < 0 || omega[i] > m) throw Error(ErrorKind::InvalidArgument, "omega entry outside [0, m]");
      if (i > 0 && omega[i] < omega[i - 1]) throw Error(ErrorKind::InvalidArgument, "omega must be nondecreasing");
    }
    jumps.push_back(0);
    for (std::size_t i = 0; i + 1 < omega.size(); ++i)
      if (omega[i] < omega[i + 1]) jumps.push_back(static_cast<int>(i) + 1);
    jumps.push_back(static_cast<int>(omega.size()));
  }

  static JumpSequence from_symbol(const SchubertSymbol& s) { return JumpSequence(s.omega(), s.m()); }

  int n() const { return static_cast<int>(omega.size()); }

  SchubertSymbol symbol() const {
    std::vector<int> s(omega.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = omega[i] + static_cast<int>(i) + 1;
    return SchubertSymbol(std::move(s), n() + m);
  }
};

/// All C(N, n) symbols, in the order sigma ≺ tau (lexicographic).
inline std::vector<SchubertSymbol> enumerate_symbols(int n, int N) {
  if (n < 1 || n > N) throw Error(ErrorKind::InvalidArgument, "need 1 <= n <= N");
  std::vector<SchubertSymbol> out;
  for (auto& s : detail::index_sets(n, N)) out.emplace_back(std::move(s), N);
  return out;
}

/// d(sigma) = sum_i (sigma(i) - i).
inline int cell_dimension(const SchubertSymbol& s) {
  int d = 0;
  for (int w : s.omega()) d += w;
  return d;
}

namespace detail {

/// Rank of a column block with zero threshold taken relative to the whole frame.
inline Eigen::Index block_rank(const CMatrix& block, double scale, const Tolerance& tol) {
  if (block.cols() == 0 || block.rows() == 0) return 0;
  const RVector s = singular_values(block);
  const double cut = tol.rank_threshold(block.rows(), block.cols()) * scale;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// dim(X ∩ C^j) for j = 0..N, from the rank of the trailing column blocks.
inline std::vector<int> flag_dimensions(const FrameMatrix& f, const Tolerance& tol) {
  const double scale = spectral_norm(f.rows);
  std::vector<int> dims(static_cast<std::size_t>(f.N()) + 1);
  for (Eigen::Index j = 0; j <= f.N(); ++j)
    dims[static_cast<std::size_t>(j)] =
        static_cast<int>(f.n() - block_rank(f.rows.rightCols(f.N() - j), scale, tol));
  return dims;
}

inline FrameMatrix coordinate_plane(int j, int N) { return FrameMatrix::coordinate(j, N); }

/// span{e_N, e_{N-1}, ..., e_{N-j+1}}: the opposite flag.
inline FrameMatrix opposite_plane(int j, int N) {
  CMatrix f = CMatrix::Zero(j, N);
  for (int i = 0; i < j; ++i) f(i, N - 1 - i) = 1.0;
  return FrameMatrix(std::move(f));
}

}  // namespace detail

/// The cell symbol of span(f) and its reduced echelon frame.
inline std::pair<SchubertSymbol, FrameMatrix> echelon_form(const FrameMatrix& f, const Tolerance& tol = {}) {
  require_full_rank(f, tol);
  const std::vector<int> dims = detail::flag_dimensions(f, tol);
  std::vector<int> sigma;
  for (int j = 1; j <= f.N(); ++j)
    if (dims[static_cast<std::size_t>(j)] > dims[static_cast<std::size_t>(j - 1)]) sigma.push_back(j);
  if (static_cast<Eigen::Index>(sigma.size()) != f.n())
    throw Error(ErrorKind::InternalInconsistency, "flag dimensions do not jump n times");
  SchubertSymbol s(sigma, static_cast<int>(f.N()));
  CMatrix e = detail::select_columns(f.rows, sigma).partialPivLu().solve(f.rows);
  for (Eigen::Index i = 0; i < f.n(); ++i) {
    const int p = sigma[static_cast<std::size_t>(i)];
    for (Eigen::Index j = p; j < f.N(); ++j) e(i, j) = 0.0;
    for (Eigen::Index k = 0; k < f.n(); ++k) e(i, sigma[static_cast<std::size_t>(k)] - 1) = (k == i) ? 1.0 : 0.0;
  }
  return {s, FrameMatrix(std::move(e))};
}

/// Open-cell test through Pluecker coordinates: the sigma-minor is nonzero
/// and every minor tau with sigma ≺ tau vanishes.
inline bool in_open_cell(const FrameMatrix& f, const SchubertSymbol& s, const Tolerance& tol = {}) {
  if (f.n() != s.n() || f.N() != s.N()) throw Error(ErrorKind::DimensionMismatch, "frame and symbol differ in shape");
  const FrameMatrix q = orthonormal_basis(f, tol);
  const PlueckerCoords p = pluecker_coords(q, tol);
  // orthonormal frames have unit Pluecker norm
  const double cut = tol.rel;
  const Eigen::Index pos = p.position(s.sigma());
  if (std::abs(p.coords(pos)) <= cut) return false;
  for (Eigen::Index k = pos + 1; k < p.coords.size(); ++k)
    if (std::abs(p.coords(k)) > cut) return false;
  return true;
}

/// X ∈ Z(omega): dim(X ∩ C^{sigma(i_h)}) >= i_h at every jump.
inline bool schubert_membership(const FrameMatrix& f, const JumpSequence& w, const Tolerance& tol = {}) {
  if (f.n() != w.n() || f.N() != w.n() + w.m) throw Error(ErrorKind::DimensionMismatch, "frame and omega differ in shape");
  const int N = static_cast<int>(f.N());
  for (std::size_t h = 1; h < w.jumps.size(); ++h) {
    const int i = w.jumps[h];
    const int dim = w.omega[static_cast<std::size_t>(i - 1)] + i;
    if (intersection_dim(f, detail::coordinate_plane(dim, N), tol) < i) return false;
  }
  return true;
}

inline bool schubert_membership(const FrameMatrix& f, const SchubertSymbol& s, const Tolerance& tol = {}) {
  return schubert_membership(f, JumpSequence::from_symbol(s), tol);
}

/// Membership in the Schubert variety of omega for the opposite flag
/// span{e_N} ⊂ span{e_N, e_{N-1}} ⊂ ...
inline bool schubert_membership_opposite(const FrameMatrix& f, const JumpSequence& w, const Tolerance& tol = {}) {
  if (f.n() != w.n() || f.N() != w.n() + w.m) throw Error(ErrorKind::DimensionMismatch, "frame and omega differ in shape");
  const int N = static_cast<int>(f.N());
  for (std::size_t h = 1; h < w.jumps.size(); ++h) {
    const int i = w.jumps[h];
    const int dim = w.omega[static_cast<std::size_t>(i - 1)] + i;
    if (intersection_dim(f, detail::opposite_plane(dim, N), tol) < i) return false;
  }
  return true;
}

/// omega^p_l = (p-l, ..., p-l, m, ..., m) with l copies of p-l.
inline JumpSequence omega_p_l(int p, int l, int n, int m) {
  if (l < 1 || l > n || l > p || p - l > m)
    throw Error(ErrorKind::InvalidArgument, "omega^p_l is defined for 1 <= l <= min(n, p), p - l <= m");
  std::vector<int> w(static_cast<std::size_t>(n), m);
  for (int i = 0; i < l; ++i) w[static_cast<std::size_t>(i)] = p - l;
  return JumpSequence(std::move(w), m);
}

/// X ∈ V^p_l, i.e. dim(X ∩ C^p) >= l, decided directly and through Z(omega^p_l).
inline bool v_p_l_membership(const FrameMatrix& f, int p, int l, const Tolerance& tol = {}) {
  const int N = static_cast<int>(f.N());
  const int n = static_cast<int>(f.n());
  const int m = N - n;
  if (p < 1 || p > N - 1 || l < 1) throw Error(ErrorKind::InvalidArgument, "need 1 <= p <= N-1 and l >= 1");
  const bool direct = intersection_dim(f, detail::coordinate_plane(p, N), tol) >= l;
  if (l > n || l > p) {
    if (direct) throw Error(ErrorKind::InternalInconsistency, "intersection exceeds min(n, p)");
    return false;
  }
  if (l <= p - m) {
    if (!direct) throw Error(ErrorKind::InternalInconsistency, "intersection below p - m");
    return true;
  }
  const bool via_schubert = schubert_membership(f, omega_p_l(p, l, n, m), tol);
  if (direct != via_schubert) throw Error(ErrorKind::InternalInconsistency, "rank and Schubert tests disagree");
  return direct;
}

// ---------------------------------------------------------------------------
// Stratification of V^p_l

struct Stratum {
  int l = 0;
  int dimension = 0;
  std::string description;
};

struct Stratification {
  enum class Kind { Empty, Whole, Union };
  Kind kind = Kind::Empty;
  int p = 0, l = 0, n = 0, m = 0;
  std::vector<Stratum> strata;
  // closed terminal stratum W^p_{r1}
  std::string terminal;
};

inline const char* stratification_kind_name(Stratification::Kind k) {
  switch (k) {
    case Stratification::Kind::Empty: return "empty";
    case Stratification::Kind::Whole: return "whole";
    case Stratification::Kind::Union: return "union";
  }
  return "unknown";
}

/// V^p_l = W^p_l ∪ W^p_{l+1} ∪ ... ∪ W^p_{r1}, r1 = min(n, p), where
/// W^p_k = {dim(X ∩ C^p) = k} has dimension k(p-k) + m(n-k).
inline Stratification stratify(int p, int l, int n, int m) {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "need n, m >= 1");
  if (p <= 1 || p >= n + m) throw Error(ErrorKind::InvalidArgument, "need 1 < p < n + m");
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "need l >= 1");
  Stratification s;
  s.p = p, s.l = l, s.n = n, s.m = m;
  const auto G = [](int k, int N) { return "G_" + std::to_string(k) + "(C^" + std::to_string(N) + ")"; };
  if (l > n || l > p) {
    s.kind = Stratification::Kind::Empty;
    return s;
  }
  if (l <= p - m) {
    s.kind = Stratification::Kind::Whole;
    s.strata.push_back(Stratum{l, n * m, G(n, n + m)});
    return s;
  }
  s.kind = Stratification::Kind::Union;
  const int r1 = std::min(n, p);
  for (int k = l; k <= r1; ++k)
    s.strata.push_back(Stratum{k, k * (p - k) + m * (n - k), "W^" + std::to_string(p) + "_" + std::to_string(k)});
  if (p == n)
    s.terminal = "C^" + std::to_string(n);
  else if (p < n)
    s.terminal = G(m, n + m - p);
  else
    s.terminal = G(n, p);
  return s;
}

struct CellCounts {
  long long N_n = 0;
  long long cell_count = 0;
  long long euler = 0;
  std::vector<long long> poincare;
};

/// Binomial count, number of cells, Euler characteristic and the Poincare
/// coefficients #{sigma : d(sigma) = k}, k = 0..nm.
inline CellCounts theorem1_counts(int n, int m) {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "need n, m >= 1");
  CellCounts c;
  c.N_n = detail::binomial(n + m, n);
  c.poincare.assign(static_cast<std::size_t>(n * m) + 1, 0);
  for (const auto& s : enumerate_symbols(n, n + m)) {
    ++c.cell_count;
    ++c.poincare[static_cast<std::size_t>(cell_dimension(s))];
  }
  // all cells are even-dimensional, so every one contributes +1
  c.euler = c.cell_count;
  long long total = 0;
  for (long long v : c.poincare) total += v;
  if (c.N_n != c.cell_count || total != c.cell_count)
    throw Error(ErrorKind::InternalInconsistency, "cell counts disagree");
  return c;
}

/// Whether Z(omega) for the coordinate flag meets Z(omega') for the opposite
/// flag: omega(i) + omega'(n + 1 - i) >= m for all i.
inline bool nonvoid_intersection(const JumpSequence& w, const JumpSequence& wopp) {
  if (w.n() != wopp.n() || w.m != wopp.m) throw Error(ErrorKind::DimensionMismatch, "omega sequences differ in shape");
  const int n = w.n();
  for (int i = 0; i < n; ++i)
    if (w.omega[static_cast<std::size_t>(i)] + wopp.omega[static_cast<std::size_t>(n - 1 - i)] < w.m) return false;
  return true;
}

}  // namespace grassgeo
