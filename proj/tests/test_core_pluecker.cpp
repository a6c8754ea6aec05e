#include "grassgeo/grassgeo.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace grassgeo;

namespace {

CMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  CMatrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const Complex& v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

PlueckerCoords coords_of(int n, int N, std::vector<Complex> v) {
  PlueckerCoords p;
  p.n = n;
  p.N = N;
  p.coords = Eigen::Map<CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  return p;
}

}  // namespace

// -- core -------------------------------------------------------------------

TEST(Core, SignatureAndTolerance) {
  EXPECT_EQ(epsilon(Signature::compact), 1.0);
  EXPECT_EQ(epsilon(Signature::noncompact), -1.0);
  EXPECT_THROW(Tolerance::with_rel(0.0), Error);
  EXPECT_EQ(Tolerance::with_rel(1e-6).rel, 1e-6);
}

TEST(Core, ChartPointValidation) {
  CMatrix big(1, 1);
  big(0, 0) = 1.0;
  EXPECT_THROW(ChartPoint(big, Signature::noncompact), Error);
  EXPECT_NO_THROW(ChartPoint(big, Signature::compact));
  CMatrix bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    ChartPoint p(bad, Signature::compact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPoint);
  }
}

TEST(Core, OrthonormalBasisSpotValues) {
  const FrameMatrix base = FrameMatrix::coordinate(2, 4);
  EXPECT_LT((orthonormal_basis(base).rows - base.rows).norm(), 1e-15);
  const FrameMatrix row(mat({{3.0, 4.0}}));
  const CMatrix q = orthonormal_basis(row).rows;
  EXPECT_NEAR(std::abs(q(0, 0)), 0.6, 1e-15);
  EXPECT_NEAR(std::abs(q(0, 1)), 0.8, 1e-15);
}

TEST(Core, OrthonormalBasisMatchesGramSchmidt) {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const FrameMatrix f = random_frame(2, 4, rng);
    const CMatrix q = orthonormal_basis(f).rows;
    EXPECT_LT((q * q.adjoint() - identity(2)).norm(), 1e-12);
    // same span as the Gram-Schmidt basis: projectors agree
    const CMatrix g = oracle::gram_schmidt_rows(f.rows);
    EXPECT_LT((q.adjoint() * q - g.adjoint() * g).norm(), 1e-12);
  }
}

TEST(Core, RankDeficientFrameRejected) {
  const FrameMatrix f(mat({{1.0, 2.0, 0.0}, {2.0, 4.0, 0.0}}));
  try {
    orthonormal_basis(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficient);
  }
}

TEST(Core, IntersectionDimension) {
  const FrameMatrix a = FrameMatrix::coordinate(2, 4);
  const FrameMatrix b(mat({{0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}}));
  const FrameMatrix c(mat({{0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}}));
  EXPECT_EQ(intersection_dim(a, a), 2);
  EXPECT_EQ(intersection_dim(a, b), 0);
  EXPECT_EQ(intersection_dim(a, c), 1);
  // oracle: dim(A ∩ B) = dim A + dim B - dim(A + B)
  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    CMatrix u = random_complex(3, 5, rng), v = random_complex(3, 5, rng);
    v.row(0) = u.row(1) + Complex(0.0, 2.0) * u.row(2);
    CMatrix both(6, 5);
    both << u, v;
    const Eigen::Index sum_dim = oracle::gram_schmidt_rows(both, 1e-9).rows();
    EXPECT_EQ(intersection_dim(FrameMatrix(u), FrameMatrix(v)), 6 - sum_dim);
  }
}

TEST(Core, RelativeCoordinates) {
  Rng rng(3);
  const ChartPoint a = random_chart_point(2, 3, Signature::compact, rng);
  EXPECT_LT(relative_coordinates(a, a).norm(), 1e-12);
}

// -- pluecker ---------------------------------------------------------------

TEST(Pluecker, CoordinatesSpotValues) {
  const PlueckerCoords base = pluecker_coords(FrameMatrix::coordinate(2, 4));
  ASSERT_EQ(base.coords.size(), 6);
  EXPECT_EQ(base.coords(0), Complex(1.0));
  EXPECT_EQ(base.coords.tail(5).norm(), 0.0);

  const PlueckerCoords row = pluecker_coords(FrameMatrix(mat({{2.0, Complex(0, 1), -3.0}})));
  EXPECT_EQ(row.coords(0), Complex(2.0));
  EXPECT_EQ(row.coords(1), Complex(0.0, 1.0));
  EXPECT_EQ(row.coords(2), Complex(-3.0));

  const PlueckerCoords p = pluecker_coords(FrameMatrix(mat({{1.0, 0.0, 1.0, 0.0}, {0.0, 1.0, 0.0, 2.0}})));
  const std::vector<Complex> want{1.0, 0.0, 2.0, -1.0, 0.0, 2.0};
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(std::abs(p.coords(k) - want[static_cast<std::size_t>(k)]), 0.0, 1e-15);
  EXPECT_EQ(p.at({2, 3}), Complex(-1.0));
}

TEST(Pluecker, CoordinatesMatchLeibnizMinors) {
  Rng rng(4);
  const CMatrix f = random_complex(3, 6, rng);
  const PlueckerCoords p = pluecker_coords(FrameMatrix(f));
  const auto sets = oracle::subsets(3, 6);
  ASSERT_EQ(p.coords.size(), static_cast<Eigen::Index>(sets.size()));
  for (std::size_t k = 0; k < sets.size(); ++k) {
    CMatrix minor(3, 3);
    for (int j = 0; j < 3; ++j) minor.col(j) = f.col(sets[k][static_cast<std::size_t>(j)]);
    EXPECT_LT(std::abs(p.coords(static_cast<Eigen::Index>(k)) - oracle::laplace_det(minor)), 1e-12);
  }
}

TEST(Pluecker, Relations) {
  Rng rng(5);
  for (auto [n, N] : {std::pair{2, 4}, std::pair{2, 5}, std::pair{3, 6}}) {
    const PlueckerCoords p = pluecker_coords(random_frame(n, N, rng));
    const double scale = p.coords.cwiseAbs().maxCoeff();
    EXPECT_LT(pluecker_relations_residual(p), 1e-10 * scale * scale);
  }
  EXPECT_NEAR(pluecker_relations_residual(coords_of(2, 4, {1, 0, 0, 0, 0, 1})), 1.0, 1e-15);
  EXPECT_EQ(pluecker_relations_residual(coords_of(2, 4, {1, 0, 0, 0, 1, 0})), 0.0);
  EXPECT_THROW(pluecker_relations_residual(coords_of(2, 4, {1, 0, 0})), Error);
}

TEST(Pluecker, HermitianProductSpotValues) {
  const ChartPoint o = ChartPoint::origin(2, 2, Signature::compact);
  EXPECT_EQ(hermitian_product(o, o), Complex(1.0));
  CMatrix z(1, 1);
  z(0, 0) = Complex(0.3, -1.2);
  const ChartPoint p(z, Signature::compact);
  EXPECT_NEAR(std::abs(hermitian_product(p, p) - (1.0 + std::norm(z(0, 0)))), 0.0, 1e-15);
}

TEST(Pluecker, CauchyFormulaAgainstMinorOracle) {
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    for (Signature sig : {Signature::compact, Signature::noncompact}) {
      const ChartPoint a = random_chart_point(2, 2, sig, rng), b = random_chart_point(2, 2, sig, rng);
      const PlueckerCoords pa = pluecker_coords(FrameMatrix::extended(a));
      const PlueckerCoords pb = pluecker_coords(FrameMatrix::extended(b));
      const double scale = pa.coords.norm() * pb.coords.norm();
      EXPECT_LT(std::abs(hermitian_product(a, b) - pluecker_pairing(pa, pb, sig)) / scale, 1e-10);
      if (sig == Signature::compact) {
        const Complex ref = oracle::minor_pairing(oracle::extended(a.Z()), oracle::extended(b.Z()));
        EXPECT_LT(std::abs(hermitian_product(a, b) - ref) / scale, 1e-10);
      }
    }
  }
}

TEST(Pluecker, ChartTransition) {
  Rng rng(7);
  const ChartPoint z = random_chart_point(2, 3, Signature::compact, rng);
  const FrameMatrix f = FrameMatrix::extended(z);
  EXPECT_LT((chart_transition(f, SchubertSymbol::identity(2, 5)) - z.Z()).norm(), 1e-14);

  const Complex w(0.4, -0.7);
  const CMatrix in_chart = chart_transition(FrameMatrix(mat({{w, 1.0}})), SchubertSymbol({2}, 2));
  EXPECT_NEAR(std::abs(in_chart(0, 0) - w), 0.0, 1e-15);
  const CMatrix inv = chart_transition(FrameMatrix(mat({{1.0, w}})), SchubertSymbol({2}, 2));
  EXPECT_NEAR(std::abs(inv(0, 0) - 1.0 / w), 0.0, 1e-15);

  // sigma -> tau -> sigma
  const SchubertSymbol tau({2, 4}, 5);
  const CMatrix zt = chart_transition(f, tau);
  const FrameMatrix back = chart_frame(zt, tau);
  EXPECT_LT((chart_transition(back, SchubertSymbol::identity(2, 5)) - z.Z()).norm(), 1e-10 * (1 + z.Z().norm()));

  try {
    chart_transition(FrameMatrix::coordinate(2, 4), SchubertSymbol({3, 4}, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideChart);
  }
}

TEST(Pluecker, OrthogonalComplement) {
  const FrameMatrix c0 = orthogonal_complement(ChartPoint::origin(2, 2, Signature::compact));
  EXPECT_LT((c0.rows - mat({{0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}})).norm(), 1e-15);

  CMatrix z(1, 1);
  z(0, 0) = Complex(0.5, 0.25);
  const FrameMatrix c1 = orthogonal_complement(ChartPoint(z, Signature::compact));
  EXPECT_NEAR(std::abs(c1.rows(0, 0) + std::conj(z(0, 0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c1.rows(0, 1) - 1.0), 0.0, 1e-15);

  Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    const ChartPoint p = random_chart_point(2, 3, Signature::compact, rng);
    const FrameMatrix c = orthogonal_complement(p);
    EXPECT_LT((c.rows * FrameMatrix::extended(p).rows.adjoint()).norm(), 1e-12 * (1 + p.Z().squaredNorm()));
  }
}

TEST(Pluecker, ComplementIdentity) {
  const ChartPoint o = ChartPoint::origin(2, 3, Signature::compact);
  EXPECT_EQ(complement_identity_residual(o, o), 0.0);
  Rng rng(9);
  for (Signature sig : {Signature::compact, Signature::noncompact}) {
    const ChartPoint a = random_chart_point(2, 3, sig, rng), b = random_chart_point(2, 3, sig, rng);
    EXPECT_LT(complement_identity_residual(a, b), 1e-10);
  }
}

TEST(Pluecker, PolarDivisor) {
  EXPECT_FALSE(in_polar_divisor(FrameMatrix::coordinate(2, 4), FrameMatrix::coordinate(2, 4)));
  EXPECT_TRUE(in_polar_divisor(FrameMatrix(mat({{0.0, 1.0}})), FrameMatrix(mat({{1.0, 0.0}}))));
  const FrameMatrix z(mat({{0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}}));
  EXPECT_TRUE(in_polar_divisor(z, FrameMatrix::coordinate(2, 4)));
  // oracle: on the divisor iff the plane meets the orthogonal complement
  EXPECT_EQ(intersection_dim(z, FrameMatrix(mat({{0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}}))), 1);
}
