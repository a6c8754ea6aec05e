#pragma once

// Seeded property suite over every module.  Each property runs on
// `samples` random cases drawn over shapes with n, m <= 4 and records its
// worst residual.

#include "grassgeo/angles.hpp"
#include "grassgeo/core.hpp"
#include "grassgeo/geodesics.hpp"
#include "grassgeo/loci.hpp"
#include "grassgeo/pluecker.hpp"
#include "grassgeo/sampling.hpp"
#include "grassgeo/schubert.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace grassgeo {

struct PropertyResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  double threshold = 0.0;
  int cases = 0;
  std::string note;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<PropertyResult> properties;

  bool passed() const {
    for (const auto& p : properties)
      if (!p.passed) return false;
    return true;
  }
};

namespace detail {

class Property {
 public:
  Property(std::string name, double threshold) { r_.name = std::move(name), r_.threshold = threshold; }

  void residual(double v) {
    ++r_.cases;
    if (!(v <= r_.worst)) r_.worst = v;
    if (!(v <= r_.threshold)) fail("residual " + std::to_string(v));
  }
  void check(bool ok, const std::string& what) {
    ++r_.cases;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (r_.passed) r_.note = what;
    r_.passed = false;
  }
  PropertyResult result() const { return r_; }

 private:
  PropertyResult r_;
};

struct Shape {
  Eigen::Index n, m;
};

inline const std::vector<Shape>& suite_shapes() {
  static const std::vector<Shape> s{{1, 1}, {1, 3}, {2, 2}, {2, 3}, {3, 2}, {3, 4}, {4, 4}, {4, 1}};
  return s;
}

inline Signature sig_of(int k) { return k % 2 == 0 ? Signature::compact : Signature::noncompact; }

inline double angle_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

/// Frame of an n-plane meeting span{e_1..e_n} in max(k, n - m) dimensions.
inline FrameMatrix frame_with_intersection(Eigen::Index n, Eigen::Index m, Eigen::Index k, Rng& rng) {
  CMatrix f = random_complex(n, n + m, rng);
  // first k rows inside O, the rest generic
  f.topRows(k).rightCols(m).setZero();
  return FrameMatrix(random_complex(n, n, rng) * f);
}

}  // namespace detail

inline SuiteReport run_verify_suite(std::uint64_t seed, int samples, const Tolerance& tol = {}) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  using detail::Property;
  using detail::Shape;
  SuiteReport rep;
  rep.seed = seed;
  rep.samples = samples;
  const auto& shapes = detail::suite_shapes();
  int index = 0;

  auto run = [&](Property p, const std::function<void(Property&, Rng&, int)>& body) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index++)};
    Rng rng(seq);
    for (int k = 0; k < samples; ++k) {
      try {
        body(p, rng, k);
      } catch (const std::exception& e) {
        p.fail(std::string("exception: ") + e.what());
      }
    }
    rep.properties.push_back(p.result());
  };
  auto shape = [&](int k) { return shapes[static_cast<std::size_t>(k) % shapes.size()]; };

  // -- core ---------------------------------------------------------------
  run(Property("core.orthonormal_basis", 1e-12), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const FrameMatrix f = random_frame(s.n, s.n + s.m, rng);
    const FrameMatrix q = orthonormal_basis(f, tol);
    p.residual((q.rows * q.rows.adjoint() - identity(s.n)).norm());
    p.check(intersection_dim(f, q, tol) == s.n, "span changed");
  });
  run(Property("core.intersection_dim", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Eigen::Index kk = std::min<Eigen::Index>(k % (s.n + 1), s.n);
    const FrameMatrix a = detail::frame_with_intersection(s.n, s.m, kk, rng);
    const FrameMatrix o = FrameMatrix::coordinate(s.n, s.n + s.m);
    const Eigen::Index d = intersection_dim(a, o, tol);
    p.check(d == std::max(kk, s.n - s.m), "wrong dimension");
    p.check(d == intersection_dim(o, a, tol), "not symmetric");
    p.check(intersection_dim(FrameMatrix(random_complex(s.n, s.n, rng) * a.rows), o, tol) == d,
            "not invariant under left multiplication");
  });

  // -- pluecker -----------------------------------------------------------
  run(Property("pluecker.cauchy_formula", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint z1 = random_chart_point(s.n, s.m, sig, rng), z2 = random_chart_point(s.n, s.m, sig, rng);
    const Complex lhs = hermitian_product(z1, z2);
    const Complex rhs = pluecker_pairing(pluecker_coords(FrameMatrix::extended(z1)),
                                         pluecker_coords(FrameMatrix::extended(z2)), sig);
    const double scale = hadamard_bound(FrameMatrix::extended(z1).rows) * hadamard_bound(FrameMatrix::extended(z2).rows);
    p.residual(std::abs(lhs - rhs) / scale);
  });
  run(Property("pluecker.relations", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const FrameMatrix f = random_frame(s.n, s.n + s.m, rng);
    const PlueckerCoords c = pluecker_coords(f, tol);
    p.residual(pluecker_relations_residual(c) / c.coords.cwiseAbs2().maxCoeff());
  });
  run(Property("pluecker.transition_roundtrip", 1e-9), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const int N = static_cast<int>(s.n + s.m);
    const auto syms = detail::index_sets(static_cast<int>(s.n), N);
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    const SchubertSymbol sigma(syms[pick(rng)], N), tau(syms[pick(rng)], N);
    const CMatrix z = random_complex(s.n, s.m, rng);
    const CMatrix zt = chart_transition(chart_frame(z, sigma), tau, tol);
    const CMatrix back = chart_transition(chart_frame(zt, tau), sigma, tol);
    p.residual((back - z).norm() / std::max(1.0, z.norm()));
  });
  run(Property("pluecker.product_modulus_symmetry", 1e-12), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint z1 = random_chart_point(s.n, s.m, sig, rng), z2 = random_chart_point(s.n, s.m, sig, rng);
    const double a = std::abs(hermitian_product(z1, z2)), b = std::abs(hermitian_product(z2, z1));
    p.residual(std::abs(a - b) / std::max(1.0, a));
  });
  run(Property("pluecker.complement_involution", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const ChartPoint z = random_chart_point(s.n, s.m, Signature::compact, rng);
    const FrameMatrix c = orthogonal_complement(z);
    p.check((c.rows * FrameMatrix::extended(z).rows.adjoint()).norm() <= 1e-12 * std::max(1.0, z.Z().squaredNorm()),
            "complement not orthogonal");
    const FrameMatrix cc = complement_basis(c, tol);
    p.check(intersection_dim(cc, FrameMatrix::extended(z), tol) == s.n, "double complement changed the span");
  });
  run(Property("pluecker.complement_identity", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint z1 = random_chart_point(s.n, s.m, sig, rng), z2 = random_chart_point(s.n, s.m, sig, rng);
    const double scale = std::max(1.0, std::abs((identity(s.n) + z1.eps() * z1.Z() * z2.Z().adjoint()).determinant()));
    p.residual(complement_identity_residual(z1, z2) / scale);
  });
  run(Property("pluecker.polar_unitary_invariance", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const bool on = k % 2 == 0;
    FrameMatrix z, b;
    if (on) {
      auto [a, c] = random_polar_pair(s.n, s.m, rng);
      b = FrameMatrix::extended(a);
      z = FrameMatrix::extended(c);
    } else {
      b = random_frame(s.n, s.n + s.m, rng);
      z = random_frame(s.n, s.n + s.m, rng);
    }
    const CMatrix u = random_unitary(s.n + s.m, rng);
    const bool before = in_polar_divisor(z, b, tol);
    const bool after = in_polar_divisor(FrameMatrix(z.rows * u), FrameMatrix(b.rows * u), tol);
    p.check(before == on && after == on, "polar-divisor membership changed");
  });

  // -- angles -------------------------------------------------------------
  run(Property("angles.oracle_equivalence", 1e-8), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    std::vector<double> got, want;
    if (k % 5 == 4) {
      auto [a, c] = random_polar_pair(s.n, s.m, rng);
      got = stationary_angles(a, c, tol).theta;
      want = principal_angles(FrameMatrix::extended(a), FrameMatrix::extended(c), tol).theta;
      p.check(std::abs(got.back() - kHalfPi) <= 1e-8, "polar pair without a right angle");
    } else {
      const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
      got = stationary_angles(a, c, tol).theta;
      want = stationary_angles_oracle(a, c, tol).theta;
    }
    p.residual(detail::angle_gap(got, want));
  });
  run(Property("angles.unitary_invariance", 1e-8), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    const GroupElement g = random_group_element(s.n, s.m, sig, rng);
    p.residual(detail::angle_gap(stationary_angles(a, c, tol).theta,
                                 stationary_angles(mobius_action(g, a, tol), mobius_action(g, c, tol), tol).theta));
  });
  run(Property("angles.complement_symmetry", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const ChartPoint a = random_chart_point(s.n, s.m, Signature::compact, rng);
    const ChartPoint c = random_chart_point(s.n, s.m, Signature::compact, rng);
    const double lhs = angle_product_check(a, c, tol).first;
    p.residual(std::abs(frame_product_modulus(orthogonal_complement(a), orthogonal_complement(c)) - lhs));
  });
  run(Property("angles.common_directions", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Eigen::Index kk = k % (s.n + 1);
    const FrameMatrix a = detail::frame_with_intersection(s.n, s.m, kk, rng);
    const FrameMatrix o = FrameMatrix::coordinate(s.n, s.n + s.m);
    const auto all = principal_angles_all(a, o, tol);
    const auto zeros = std::count_if(all.begin(), all.end(), [&](double t) { return t <= 1e-7; });
    p.check(zeros == intersection_dim(a, o, tol), "zero-angle count differs from the intersection dimension");
  });
  run(Property("angles.v_w_eigenvalues", 1e-9), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    p.residual(distance_formulas(a, c, tol).vw_residual);
  });
  run(Property("angles.product_formula", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    const auto [lhs, rhs] = angle_product_check(a, c, tol);
    p.residual(std::abs(lhs - rhs) / std::max(1.0, lhs));
  });
  run(Property("angles.cayley_pluecker", 1e-7), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    const double d = pluecker_cayley_distance(pluecker_coords(FrameMatrix::extended(a)),
                                              pluecker_coords(FrameMatrix::extended(c)), sig);
    const double lhs = angle_product_check(a, c, tol).first;
    const double want = sig == Signature::compact ? std::acos(std::min(lhs, 1.0)) : std::acosh(std::max(lhs, 1.0));
    p.residual(std::abs(d - want));
  });

  // -- geodesics ----------------------------------------------------------
  run(Property("geodesics.distance_along_geodesic", 1e-8), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    TangentDirection b{random_complex(s.n, s.m, rng)};
    std::uniform_real_distribution<double> u(0.05, 0.95);
    double t = u(rng);
    if (sig == Signature::compact) t *= kHalfPi / spectral_norm(b.B);
    const ChartPoint z = exp_map(b, t, sig, tol);
    p.residual(std::abs(distance(ChartPoint::origin(s.n, s.m, sig), z, tol).d - t * b.B.norm()));
  });
  run(Property("geodesics.diagonal_angles", 1e-8), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const Eigen::Index r = std::min(s.n, s.m);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    CMatrix b = CMatrix::Zero(s.n, s.m);
    std::vector<double> want;
    for (Eigen::Index i = 0; i < r; ++i) {
      b(i, i) = u(rng);
      want.push_back(std::abs(b(i, i).real()));
    }
    std::sort(want.begin(), want.end());
    const ChartPoint z = exp_map(TangentDirection{b}, 1.0, sig, tol);
    p.residual(detail::angle_gap(stationary_angles(ChartPoint::origin(s.n, s.m, sig), z, tol).theta, want));
  });
  run(Property("geodesics.isometry_invariance", 1e-8), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    const GroupElement g = random_group_element(s.n, s.m, sig, rng);
    p.check(g.form_residual() <= 1e-12 * std::max(1.0, g.U().squaredNorm()), "group element breaks the form");
    p.residual(std::abs(distance(a, c, tol).d - distance(mobius_action(g, a, tol), mobius_action(g, c, tol), tol).d));
  });
  run(Property("geodesics.metric_axioms", 1e-8), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), b = random_chart_point(s.n, s.m, sig, rng),
                     c = random_chart_point(s.n, s.m, sig, rng);
    const double ab = distance(a, b, tol).d, ba = distance(b, a, tol).d;
    const double bc = distance(b, c, tol).d, ac = distance(a, c, tol).d;
    p.residual(std::abs(ab - ba) * 100.0);
    p.residual(std::max(0.0, ac - ab - bc));
  });
  run(Property("geodesics.formula_agreement", 1e-9), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    const DistanceFormulas f = distance_formulas(a, c, tol);
    const double d = distance(a, c, tol).d;
    p.residual(std::max({std::abs(f.tr - f.un), std::abs(f.tr - f.lag), std::abs(f.un - f.lag), std::abs(f.tr - d)}));
  });
  run(Property("geodesics.block_exponential", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const TangentDirection b{random_complex(s.n, s.m, rng)};
    CMatrix gen = CMatrix::Zero(s.n + s.m, s.n + s.m);
    gen.topRightCorner(s.n, s.m) = b.B;
    gen.bottomLeftCorner(s.m, s.n) = -epsilon(sig) * b.B.adjoint();
    const CMatrix e = gen.exp();
    p.residual((e - block_form(b, 1.0, sig)).norm() / std::max(1.0, e.norm()));
  });
  run(Property("geodesics.geodesic_equation", 1e-6), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    CMatrix b = random_complex(s.n, s.m, rng);
    b /= spectral_norm(b);
    p.residual(geodesic_residual(TangentDirection{b}, 0.3, 1e-4, sig, tol));
  });
  run(Property("geodesics.log_exp_roundtrip", 1e-9), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    CMatrix b = random_complex(s.n, s.m, rng);
    if (sig == Signature::compact) b *= 0.9 * kHalfPi / spectral_norm(b);
    const TangentDirection back = log_map(exp_map(TangentDirection{b}, 1.0, sig, tol));
    p.residual((back.B - b).norm());
  });
  run(Property("geodesics.metric_invariance", 1e-9), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint z = random_chart_point(s.n, s.m, sig, rng);
    const CMatrix dz = random_complex(s.n, s.m, rng);
    const GroupElement g = random_group_element(s.n, s.m, sig, rng);
    const double a = metric_form(z, dz);
    const double b = metric_form(mobius_action(g, z, tol), mobius_differential(g, z, dz, tol));
    p.residual(std::abs(a - b) / std::max(1.0, a));
  });
  run(Property("geodesics.diastasis_relation", 1e-9), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Signature sig = detail::sig_of(k);
    const ChartPoint a = random_chart_point(s.n, s.m, sig, rng), c = random_chart_point(s.n, s.m, sig, rng);
    const double D = diastasis(a, c, tol);
    const auto [delta, sv] = embedded_vs_intrinsic(a, c, tol);
    (void)delta;
    // D = -2 log cos s (compact), D = 2 log cosh s (noncompact)
    const double want = sig == Signature::compact ? -2.0 * std::log(std::cos(sv)) : 2.0 * std::log(std::cosh(sv));
    p.check(D >= -1e-12, "negative diastasis");
    p.residual(std::abs(D - want) / std::max(1.0, D));
  });
  run(Property("geodesics.embedded_below_intrinsic", 1e-10), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const ChartPoint a = random_chart_point(s.n, s.m, Signature::compact, rng);
    const ChartPoint c = random_chart_point(s.n, s.m, Signature::compact, rng);
    const auto [delta, sv] = embedded_vs_intrinsic(a, c, tol);
    p.residual(std::max(0.0, sv - delta));
  });

  // -- schubert -----------------------------------------------------------
  run(Property("schubert.cell_partition", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const int n = static_cast<int>(s.n), N = static_cast<int>(s.n + s.m);
    const auto syms = enumerate_symbols(n, N);
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    const SchubertSymbol target = syms[pick(rng)];
    const FrameMatrix f(random_complex(s.n, s.n, rng) * random_frame_in_variety(target, false, rng).rows);
    const auto [sigma, e] = echelon_form(f, tol);
    int hits = 0;
    for (const auto& t : syms) hits += in_open_cell(f, t, tol) ? 1 : 0;
    p.check(sigma == target, "echelon symbol differs from the generating cell");
    p.check(hits == 1 && in_open_cell(f, sigma, tol), "frame is not in exactly one open cell");
    p.check(schubert_membership(f, sigma, tol), "frame outside the closure of its own cell");
    p.check(intersection_dim(e, f, tol) == s.n, "echelon frame changed the span");
  });
  run(Property("schubert.dimension_bookkeeping", 0.0), [&](Property& p, Rng&, int k) {
    const Shape s = shape(k);
    const CellCounts c = theorem1_counts(static_cast<int>(s.n), static_cast<int>(s.m));
    long long total = 0;
    for (long long v : c.poincare) total += v;
    p.check(total == detail::binomial(static_cast<int>(s.n + s.m), static_cast<int>(s.n)), "Poincare sum differs");
  });
  run(Property("schubert.lemma2_consistency", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const int n = static_cast<int>(s.n), N = static_cast<int>(s.n + s.m);
    const auto syms = enumerate_symbols(n, N);
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    const FrameMatrix f = k % 2 ? random_frame(s.n, N, rng) : random_frame_in_variety(syms[pick(rng)], false, rng);
    for (int pp = 1; pp <= N - 1; ++pp)
      for (int l = 1; l <= n + 1; ++l) v_p_l_membership(f, pp, l, tol);
    p.check(true, "");
  });
  run(Property("schubert.nonvoid_rule", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const int n = static_cast<int>(s.n), N = static_cast<int>(s.n + s.m);
    const auto syms = enumerate_symbols(n, N);
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    const SchubertSymbol a = syms[pick(rng)], b = syms[pick(rng)];
    const JumpSequence wa = JumpSequence::from_symbol(a), wb = JumpSequence::from_symbol(b);
    const FrameMatrix f = random_frame_in_variety(a, false, rng);
    const bool hit = schubert_membership_opposite(f, wb, tol);
    if (!nonvoid_intersection(wa, wb)) p.check(!hit, "sample meets a variety the rule declares disjoint");
    const FrameMatrix g = random_frame_in_variety(b, true, rng);
    if (!nonvoid_intersection(wa, wb)) p.check(!schubert_membership(g, wa, tol), "opposite sample meets a forbidden variety");
    p.check(true, "");
  });

  // -- loci ---------------------------------------------------------------
  run(Property("loci.cut_equals_first_conjugate", 1e-6), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Eigen::Index r = std::min(s.n, s.m);
    std::vector<double> h(static_cast<std::size_t>(r));
    std::uniform_real_distribution<double> u(0.1, 1.0), sign(-1.0, 1.0);
    for (auto& x : h) x = u(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
    const CartanVector cv = CartanVector::normalized(h);
    const TangentDirection b = cv.direction(static_cast<int>(s.n), static_cast<int>(s.m));
    const double tc = first_cut_time(b);
    const double t2 = smallest_time(tangent_conjugate_times(cv, static_cast<int>(s.n), static_cast<int>(s.m), 1),
                                    ConjugateFamily::t2);
    p.residual(std::abs(tc - t2));
    p.check(in_cut_locus(geodesic_frame(b, tc, Signature::compact), tol), "cut time is not on the cut locus");
    p.check(!in_cut_locus(geodesic_frame(b, tc - 1e-6, Signature::compact), tol), "cut locus reached earlier");
  });
  run(Property("loci.wong_parts", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const int n = static_cast<int>(s.n), m = static_cast<int>(s.m), N = n + m;
    const int base = std::max(0, n - m);
    // frames in V^n_{base+1} (coordinate flag, p = n) or in V^m_1 (opposite flag)
    FrameMatrix f;
    if (k % 3 == 0 && base + 1 <= n) {
      f = random_frame_in_variety(omega_p_l(n, base + 1, n, m).symbol(), false, rng);
    } else if (k % 3 == 1) {
      f = random_frame_in_variety(omega_p_l(m, 1, n, m).symbol(), true, rng);
    } else {
      f = random_frame(n, N, rng);
    }
    const ConjugateClass c = classify_conjugate(f, tol);
    const FrameMatrix o = FrameMatrix::coordinate(n, N);
    const FrameMatrix operp = detail::opposite_plane(m, N);
    const bool in_vn = intersection_dim(f, o, tol) >= base + 1;
    const bool in_vm = intersection_dim(f, operp, tol) >= 1;
    p.check((c.zero_angles >= 1) == in_vn, "zero angle disagrees with V^n");
    p.check((c.right_angles >= 1) == in_vm, "right angle disagrees with V^m(O-perp)");
    if (in_vn && in_vm && base == 0)
      p.check(nonvoid_intersection(omega_p_l(n, 1, n, m), omega_p_l(m, 1, n, m)),
              "point in both Wong parts where the rule forbids it");
  });
  run(Property("loci.cut_locus_right_angle", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    FrameMatrix f;
    if (k % 2 == 0) {
      // first row inside O-perp
      f = random_frame(s.n, s.n + s.m, rng);
      f.rows.row(0).head(s.n).setZero();
    } else {
      f = random_frame(s.n, s.n + s.m, rng);
    }
    p.check(in_cut_locus(f, tol) == (classify_conjugate(f, tol).right_angles >= 1), "cut-locus tests disagree");
  });
  run(Property("loci.isotropy_invariance", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    const Eigen::Index r = std::min(s.n, s.m);
    CMatrix b = CMatrix::Zero(s.n, s.m);
    std::uniform_real_distribution<double> u(0.2, 1.2);
    const double x = u(rng);
    for (Eigen::Index i = 0; i < r; ++i) b(i, i) = (k % 3 == 0) ? x : (k % 3 == 1 && i > 0 ? 0.0 : u(rng));
    const ChartPoint z = exp_map(TangentDirection{b}, 1.0, Signature::compact, tol);
    const GroupElement g = random_isotropy(s.n, s.m, Signature::compact, rng);
    const ConjugateClass a = classify_conjugate(z, tol), c = classify_conjugate(mobius_action(g, z, tol), tol);
    p.check(a.kind == c.kind && a.zero_angles == c.zero_angles && a.right_angles == c.right_angles &&
                a.coincidences == c.coincidences,
            "classification changed under K");
  });
  run(Property("loci.conjugate_roundtrip", 0.0), [&](Property& p, Rng& rng, int k) {
    const Shape s = k % 2 ? Shape{2, 3} : Shape{2, 2};
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const CartanVector cv = CartanVector::normalized({u(rng), -u(rng)});
    p.check(conjugate_roundtrip_check(cv, static_cast<int>(s.n), static_cast<int>(s.m), tol), "round trip failed");
  });
  run(Property("loci.restricted_roots", 1e-12), [&](Property& p, Rng& rng, int k) {
    const Shape s = shape(k);
    std::vector<double> h(static_cast<std::size_t>(std::min(s.n, s.m)));
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (auto& x : h) x = u(rng);
    const RootsReport r = restricted_roots_report(static_cast<int>(s.n), static_cast<int>(s.m),
                                                  CartanVector::normalized(h), Tolerance{1e-12, 0.0});
    p.residual(r.max_residual);
    p.check(r.ok, r.failures.empty() ? "" : r.failures.front());
    p.check(r.killing_min > 0.0, "Killing form not positive on m");
  });

  return rep;
}

}  // namespace grassgeo
