#pragma once

// Independent reference computations used by the tests.  Nothing here calls
// into grassgeo beyond the plain matrix typedefs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

/// Modified Gram-Schmidt on the rows (two passes).  Rows that become
/// numerically zero are dropped.
inline CMatrix gram_schmidt_rows(const CMatrix& a, double drop = 1e-12) {
  std::vector<Eigen::Matrix<Complex, 1, Eigen::Dynamic>> q;
  const double scale = std::max(1.0, a.norm());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Eigen::Matrix<Complex, 1, Eigen::Dynamic> v = a.row(i);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) v -= (v * u.adjoint())(0, 0) * u;
    const double nv = v.norm();
    if (nv > drop * scale) q.push_back(v / nv);
  }
  CMatrix out(static_cast<Eigen::Index>(q.size()), a.cols());
  for (std::size_t i = 0; i < q.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = q[i];
  return out;
}

/// Determinant by the Leibniz permutation sum (k <= 8 or so).
inline Complex leibniz_det(const CMatrix& a) {
  const int k = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total(0.0);
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    Complex term(inversions % 2 == 0 ? 1.0 : -1.0);
    for (int i = 0; i < k; ++i) term *= a(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Determinant by cofactor expansion along the first row.
inline Complex laplace_det(const CMatrix& a) {
  const Eigen::Index k = a.rows();
  if (k == 0) return Complex(1.0);
  if (k == 1) return a(0, 0);
  Complex total(0.0);
  for (Eigen::Index j = 0; j < k; ++j) {
    CMatrix minor(k - 1, k - 1);
    for (Eigen::Index r = 1; r < k; ++r)
      for (Eigen::Index c = 0, cc = 0; c < k; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    total += ((j % 2 == 0) ? 1.0 : -1.0) * a(0, j) * laplace_det(minor);
  }
  return total;
}

/// All k-subsets of {0..N-1}, lexicographic.
inline std::vector<std::vector<int>> subsets(int k, int N) {
  std::vector<std::vector<int>> out;
  std::vector<bool> pick(static_cast<std::size_t>(N), false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < N; ++i)
      if (pick[static_cast<std::size_t>(i)]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

/// sum_I conj(det F1_I) det F2_I with Leibniz minors.
inline Complex minor_pairing(const CMatrix& f1, const CMatrix& f2) {
  const int n = static_cast<int>(f1.rows()), N = static_cast<int>(f1.cols());
  Complex acc(0.0);
  for (const auto& s : subsets(n, N)) {
    CMatrix a(n, n), b(n, n);
    for (int j = 0; j < n; ++j) {
      a.col(j) = f1.col(s[static_cast<std::size_t>(j)]);
      b.col(j) = f2.col(s[static_cast<std::size_t>(j)]);
    }
    acc += std::conj(leibniz_det(a)) * leibniz_det(b);
  }
  return acc;
}

inline CMatrix extended(const CMatrix& z) {
  CMatrix f(z.rows(), z.rows() + z.cols());
  f << CMatrix::Identity(z.rows(), z.rows()), z;
  return f;
}

/// Principal angles between the row spans of two n x N frames, from the
/// cosines sigma(Q1 Q2^+) and sines sigma(Q1 (1 - Q2^+ Q2)) paired through
/// atan2.  Returns the r = min(n, N - n) largest, ascending.
inline std::vector<double> principal_angles(const CMatrix& f1, const CMatrix& f2) {
  const CMatrix q1 = gram_schmidt_rows(f1), q2 = gram_schmidt_rows(f2);
  const Eigen::Index n = q1.rows(), N = q1.cols();
  Eigen::JacobiSVD<CMatrix> cs(q1 * q2.adjoint());
  const CMatrix proj = CMatrix::Identity(N, N) - q2.adjoint() * q2;
  Eigen::JacobiSVD<CMatrix> ss(q1 * proj);
  std::vector<double> c(cs.singularValues().data(), cs.singularValues().data() + n);
  std::vector<double> s(ss.singularValues().data(), ss.singularValues().data() + std::min(n, N));
  s.resize(static_cast<std::size_t>(n), 0.0);
  std::sort(c.begin(), c.end(), std::greater<>());  // cos descending = angle ascending
  std::sort(s.begin(), s.end());                    // sin ascending
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = std::atan2(s[i], c[i]);
  std::sort(theta.begin(), theta.end());
  const std::size_t r = static_cast<std::size_t>(std::min(n, N - n));
  return std::vector<double>(theta.end() - static_cast<std::ptrdiff_t>(r), theta.end());
}

/// Hyperbolic angles between two points of the bounded domain: the
/// singular values of (F1 J F1^+)^{-1/2} F1 J F2^+ (F2 J F2^+)^{-1/2} are
/// cosh theta, F = (1 | Z), J = diag(1, -1).
inline std::vector<double> hyperbolic_angles(const CMatrix& z1, const CMatrix& z2) {
  const Eigen::Index n = z1.rows(), m = z1.cols();
  auto inv_sqrt = [](const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    return CMatrix(es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().adjoint());
  };
  const CMatrix g11 = CMatrix::Identity(n, n) - z1 * z1.adjoint();
  const CMatrix g22 = CMatrix::Identity(n, n) - z2 * z2.adjoint();
  const CMatrix g12 = CMatrix::Identity(n, n) - z1 * z2.adjoint();
  Eigen::JacobiSVD<CMatrix> svd(inv_sqrt(g11) * g12 * inv_sqrt(g22));
  std::vector<double> th;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    th.push_back(std::acosh(std::max(1.0, svd.singularValues()(i))));
  std::sort(th.begin(), th.end());
  const std::size_t r = static_cast<std::size_t>(std::min(n, m));
  return std::vector<double>(th.end() - static_cast<std::ptrdiff_t>(r), th.end());
}

/// exp(A) by scaling and squaring with a Taylor polynomial.
inline CMatrix expm(const CMatrix& a) {
  const double nrm = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(nrm, -s) > 0.25) ++s;
  const CMatrix b = a * std::ldexp(1.0, -s);
  CMatrix term = CMatrix::Identity(a.rows(), a.cols()), sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Geodesic chart point exp(t [[0, B], [-e B^+, 0]]) applied to the origin.
inline CMatrix geodesic_point(const CMatrix& b, double t, double e) {
  const Eigen::Index n = b.rows(), m = b.cols();
  CMatrix x = CMatrix::Zero(n + m, n + m);
  x.topRightCorner(n, m) = b;
  x.bottomLeftCorner(m, n) = -e * b.adjoint();
  const CMatrix g = expm(t * x);
  const CMatrix top = g.topRows(n);
  return top.leftCols(n).inverse() * top.rightCols(m);
}

/// Eigenvalues of ad_H on gl(N), as the spectrum of 1 (x) H - H^T (x) 1.
inline Eigen::VectorXcd ad_eigenvalues(const CMatrix& h) {
  const Eigen::Index N = h.rows();
  CMatrix ad = CMatrix::Zero(N * N, N * N);
  const CMatrix one = CMatrix::Identity(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      ad.block(i * N, j * N, N, N) += one(i, j) * h;
      ad.block(i * N, j * N, N, N) -= h(j, i) * one;
    }
  Eigen::ComplexEigenSolver<CMatrix> es(ad, false);
  return es.eigenvalues();
}

inline int count_near(const Eigen::VectorXcd& ev, Complex value, double tol) {
  int k = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i) - value) < tol) ++k;
  return k;
}

}  // namespace oracle
