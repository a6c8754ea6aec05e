#pragma once

// Seeded random points, frames and group elements.

#include "grassgeo/core.hpp"
#include "grassgeo/geodesics.hpp"
#include "grassgeo/pluecker.hpp"

#include <cstdint>
#include <random>

namespace grassgeo {

using Rng = std::mt19937_64;

/// Independent standard complex-normal entries.
inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      a(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return a;
}

/// Compact: complex-normal entries.  Noncompact: the same, rescaled to
/// spectral norm 0.9 u with u uniform in (0.1, 1].
inline ChartPoint random_chart_point(Eigen::Index n, Eigen::Index m, Signature sig, Rng& rng) {
  CMatrix z = random_complex(n, m, rng);
  if (sig == Signature::noncompact) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    z *= 0.9 * u(rng) / spectral_norm(z);
  }
  return ChartPoint(std::move(z), sig);
}

inline FrameMatrix random_frame(Eigen::Index n, Eigen::Index N, Rng& rng) {
  return FrameMatrix(random_complex(n, N, rng));
}

/// Haar-distributed unitary k x k matrix (QR of a Ginibre matrix with the
/// phases of R removed).
inline CMatrix random_unitary(Eigen::Index k, Rng& rng) {
  const CMatrix a = random_complex(k, k, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * identity(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Complex d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline CMatrix random_special_unitary(Eigen::Index k, Rng& rng) {
  CMatrix q = random_unitary(k, rng);
  q.col(0) /= q.determinant();
  return q;
}

/// Random element of K = S(U(n) x U(m)).
inline GroupElement random_isotropy(Eigen::Index n, Eigen::Index m, Signature sig, Rng& rng) {
  CMatrix u = CMatrix::Zero(n + m, n + m);
  u.topLeftCorner(n, n) = random_unitary(n, rng);
  u.bottomRightCorner(m, m) = random_unitary(m, rng);
  u.col(0) /= u.determinant();
  return GroupElement(std::move(u), n, sig);
}

/// Random element of SU(n+m) (compact) or SU(n,m) (noncompact, as
/// k1 * transvection * k2 with k1, k2 in K).
inline GroupElement random_group_element(Eigen::Index n, Eigen::Index m, Signature sig, Rng& rng) {
  if (sig == Signature::compact) return GroupElement(random_special_unitary(n + m, rng), n, sig);
  const GroupElement k1 = random_isotropy(n, m, sig, rng);
  const GroupElement t = transvection_to_zero(random_chart_point(n, m, sig, rng));
  const GroupElement k2 = random_isotropy(n, m, sig, rng);
  return k1 * t * k2;
}

/// Generic point of the Schubert variety of sigma: row i is supported on
/// columns 1..sigma(i) (or on the last sigma(i) columns for the opposite flag).
inline FrameMatrix random_frame_in_variety(const SchubertSymbol& s, bool opposite, Rng& rng) {
  const int n = s.n(), N = s.N();
  CMatrix f = CMatrix::Zero(n, N);
  const CMatrix g = random_complex(n, N, rng);
  for (int i = 0; i < n; ++i) {
    const int k = s.sigma()[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j) {
      const int col = opposite ? N - 1 - j : j;
      f(i, col) = g(i, col);
    }
  }
  return FrameMatrix(std::move(f));
}

/// Pair (z1, z2) with z2 on the polar divisor of z1, i.e.
/// det(1 + Z2 Z1^+) = 0 (compact, z1 != 0).
inline std::pair<ChartPoint, ChartPoint> random_polar_pair(Eigen::Index n, Eigen::Index m, Rng& rng) {
  const ChartPoint z1 = random_chart_point(n, m, Signature::compact, rng);
  const CMatrix z20 = random_complex(n, m, rng);
  const CVector u = random_complex(n, 1, rng);
  const CVector w = z1.Z().adjoint() * u;
  // (1 + Z2 Z1^+) u = u + Z2 w = 0
  const CMatrix z2 = z20 + (-u - z20 * w) * w.adjoint() / w.squaredNorm();
  return {z1, ChartPoint(z2, Signature::compact)};
}

}  // namespace grassgeo
