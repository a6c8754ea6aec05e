// Acceptance run: one PASS/FAIL line per criterion.

#include "grassgeo/grassgeo.hpp"
#include "support/oracles.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace grassgeo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

CMatrix chart_of_frame(const CMatrix& f) {
  const Eigen::Index n = f.rows();
  return f.leftCols(n).partialPivLu().solve(f.rightCols(f.cols() - n));
}

Outcome cauchy_formula() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0, worst_oracle = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index m = (k % 2 == 0) ? 2 : 3;
    const ChartPoint a = random_chart_point(2, m, Signature::compact, rng);
    const ChartPoint b = random_chart_point(2, m, Signature::compact, rng);
    const PlueckerCoords pa = pluecker_coords(FrameMatrix::extended(a));
    const PlueckerCoords pb = pluecker_coords(FrameMatrix::extended(b));
    const double scale = pa.coords.norm() * pb.coords.norm();
    const Complex lhs = hermitian_product(a, b);
    worst = std::max(worst, std::abs(lhs - pluecker_pairing(pa, pb, Signature::compact)) / scale);
    const Complex ref = oracle::minor_pairing(oracle::extended(a.Z()), oracle::extended(b.Z()));
    worst_oracle = std::max(worst_oracle, std::abs(lhs - ref) / scale);
  }
  const double secs = seconds_since(t0);
  o.require(worst < 1e-10, "library pairing");
  o.require(worst_oracle < 1e-10, "Leibniz-minor pairing");
  o.require(secs < 5.0, "runtime");
  o.detail << "200 pairs, worst " << worst << ", vs oracle " << worst_oracle << ", " << secs << " s";
  return o;
}

Outcome angle_oracle() {
  Outcome o;
  Rng rng(202);
  const std::pair<Eigen::Index, Eigen::Index> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {1, 3}, {3, 4}};
  double worst = 0.0;
  int polar = 0, cases = 0;
  for (int k = 0; k < 200; ++k) {
    const auto [n, m] = shapes[k % 5];
    std::vector<double> got, want;
    if (k % 10 == 0) {
      const auto [a, b] = random_polar_pair(n, m, rng);
      got = stationary_angles(a, b).theta;
      want = oracle::principal_angles(oracle::extended(a.Z()), oracle::extended(b.Z()));
      ++polar;
    } else {
      const Signature sig = (k % 2 == 0) ? Signature::compact : Signature::noncompact;
      const ChartPoint a = random_chart_point(n, m, sig, rng), b = random_chart_point(n, m, sig, rng);
      got = stationary_angles_w(a, b).theta;
      want = sig == Signature::compact ? oracle::principal_angles(oracle::extended(a.Z()), oracle::extended(b.Z()))
                                       : oracle::hyperbolic_angles(a.Z(), b.Z());
    }
    worst = std::max(worst, max_abs_diff(got, want));
    ++cases;
  }
  o.require(worst < 1e-8, "angle agreement");
  o.require(polar == 20, "polar-pair count");
  o.detail << cases << " pairs (" << polar << " on the polar divisor), worst " << worst;
  return o;
}

Outcome distance_formulas_agree() {
  Outcome o;
  Rng rng(303);
  const std::pair<Eigen::Index, Eigen::Index> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {1, 3}, {3, 4}};
  double worst = 0.0, worst_ev = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto [n, m] = shapes[k % 5];
    const Signature sig = (k % 2 == 0) ? Signature::compact : Signature::noncompact;
    const ChartPoint a = random_chart_point(n, m, sig, rng), b = random_chart_point(n, m, sig, rng);
    const DistanceFormulas f = distance_formulas(a, b);
    for (double x : {std::abs(f.tr - f.un), std::abs(f.tr - f.lag), std::abs(f.un - f.lag)})
      worst = std::max(worst, std::isnan(x) ? std::numeric_limits<double>::infinity() : x);
    worst_ev = std::max(worst_ev, max_abs_diff(sorted(f.v_eigenvalues), sorted(f.w_eigenvalues)));
  }
  CMatrix one(1, 1), z(1, 1);
  one(0, 0) = 1.0;
  z(0, 0) = Complex(0.3, -0.4);
  const double sphere = distance(ChartPoint::origin(1, 1, Signature::compact), ChartPoint(one, Signature::compact)).d;
  const double disk = distance(ChartPoint::origin(1, 1, Signature::noncompact), ChartPoint(z, Signature::noncompact)).d;
  const double sphere_err = std::abs(sphere - kPi / 4.0), disk_err = std::abs(disk - std::atanh(0.5));
  o.require(worst < 1e-9, "formula agreement");
  o.require(worst_ev < 1e-9, "V/W eigenvalues");
  o.require(sphere_err <= 1e-12, "sphere spot value");
  o.require(disk_err <= 1e-12, "disk spot value");
  o.detail << "200 pairs, formulas " << worst << ", eigenvalues " << worst_ev << "; d(0,1) err " << sphere_err
           << ", d(0,z) err " << disk_err;
  return o;
}

Outcome geodesic_consistency() {
  Outcome o;
  Rng rng(404);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  const std::pair<Eigen::Index, Eigen::Index> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {1, 3}, {3, 4}};
  double worst_res = 0.0, worst_d = 0.0, worst_exp = 0.0;
  for (Signature sig : {Signature::compact, Signature::noncompact}) {
    for (int k = 0; k < 50; ++k) {
      const auto [n, m] = shapes[k % 5];
      const TangentDirection b{random_complex(n, m, rng)};
      const double t = sig == Signature::compact ? u(rng) * kHalfPi / spectral_norm(b.B) : 2.0 * u(rng);
      // the central difference is only O(h^2 |Z''''|) accurate, so the residual
      // is taken on the unit-spectral-norm direction with t |B|_2 <= 0.9
      const TangentDirection unit{b.B / spectral_norm(b.B)};
      worst_res = std::max(worst_res, geodesic_residual(unit, u(rng), 1e-4, sig));
      const ChartPoint z = exp_map(b, t, sig);
      worst_d = std::max(worst_d, std::abs(distance(ChartPoint::origin(n, m, sig), z).d - t * b.B.norm()));
      const CMatrix ref = oracle::geodesic_point(b.B, t, epsilon(sig));
      worst_exp = std::max(worst_exp, (z.Z() - ref).norm() / std::max(1.0, ref.norm()));
    }
  }
  o.require(worst_res < 1e-6, "geodesic equation residual");
  o.require(worst_d < 1e-8, "distance along geodesic");
  o.require(worst_exp < 1e-9, "exp_map vs series exponential");
  o.detail << "100 directions, residual " << worst_res << ", |d - t|B|| " << worst_d << ", exp vs oracle " << worst_exp;
  return o;
}

Outcome isometry_invariance() {
  Outcome o;
  Rng rng(505);
  const std::pair<Eigen::Index, Eigen::Index> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {1, 3}, {3, 4}};
  double worst_form = 0.0, worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto [n, m] = shapes[k % 5];
    const Signature sig = (k % 2 == 0) ? Signature::compact : Signature::noncompact;
    const GroupElement g = random_group_element(n, m, sig, rng);
    const double scale = std::max(1.0, g.U().squaredNorm() / static_cast<double>(n + m));
    worst_form = std::max(worst_form, g.form_residual() / scale);
    const ChartPoint a = random_chart_point(n, m, sig, rng), b = random_chart_point(n, m, sig, rng);
    const DistanceResult before = distance(a, b);
    const DistanceResult after = distance(mobius_action(g, a), mobius_action(g, b));
    worst = std::max({worst, std::abs(before.d - after.d), max_abs_diff(before.angles.theta, after.angles.theta)});
  }
  o.require(worst_form <= 1e-12, "group element construction");
  o.require(worst < 1e-8, "invariance");
  o.detail << "50 group elements, form residual " << worst_form << ", deviation " << worst;
  return o;
}

Outcome counts() {
  Outcome o;
  const CellCounts c = theorem1_counts(2, 2);
  o.require(c.N_n == 6 && c.cell_count == 6 && c.euler == 6 && c.poincare == std::vector<long long>{1, 1, 2, 1, 1},
            "G_2(C^4) counts");
  for (int m = 1; m <= 6; ++m) {
    const CellCounts p = theorem1_counts(1, m);
    o.require(p.N_n == m + 1 && p.cell_count == m + 1 && p.euler == m + 1, "projective space counts");
  }
  Rng rng(606);
  const auto symbols = enumerate_symbols(2, 4);
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
  int exactly_one = 0;
  for (int k = 0; k < 100; ++k) {
    const SchubertSymbol& s = symbols[pick(rng)];
    const FrameMatrix f = random_frame_in_variety(s, false, rng);
    int hits = 0;
    bool right_cell = false;
    for (const auto& t : symbols)
      if (in_open_cell(f, t)) {
        ++hits;
        right_cell = (t == s);
      }
    if (hits == 1 && right_cell && echelon_form(f).first == s) ++exactly_one;
  }
  o.require(exactly_one == 100, "cell partition");
  o.detail << "(2,2) -> (" << c.N_n << "," << c.cell_count << "," << c.euler << ",(1,1,2,1,1)); (1,m) = m+1 for m <= 6; "
           << exactly_one << "/100 frames in exactly one open cell";
  return o;
}

CartanVector random_cartan(Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::bernoulli_distribution coin(0.5);
  while (true) {
    std::vector<double> h{u(rng), u(rng)};
    if (std::abs(h[0] - h[1]) < 0.05) continue;
    for (double& x : h)
      if (coin(rng)) x = -x;
    return CartanVector::normalized(h);
  }
}

bool oracle_right_angle(const FrameMatrix& f) {
  const CMatrix o = FrameMatrix::coordinate(f.n(), f.N()).rows;
  const auto th = oracle::principal_angles(f.rows, o);
  return !th.empty() && th.back() >= kHalfPi - 1e-7;
}

Outcome loci() {
  Outcome o;
  Rng rng(707);
  int roundtrips = 0, frames = 0, agree = 0, cut_on_locus = 0;
  double worst_cut = 0.0;
  for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}}) {
    for (int k = 0; k < 20; ++k) {
      const CartanVector h = random_cartan(rng);
      if (conjugate_roundtrip_check(h, n, m)) ++roundtrips;
      const TangentDirection b = h.direction(n, m);
      const auto times = tangent_conjugate_times(h, n, m, 1);
      const double tc = first_cut_time(b);
      const double t2 = smallest_time(times, ConjugateFamily::t2);
      worst_cut = std::max(worst_cut, std::abs(tc - t2));
      // frames along the geodesic: before, at and after the cut
      for (double t : {0.5 * tc, tc, t2, 0.5 * (tc + smallest_time(times, ConjugateFamily::t1))}) {
        if (std::isnan(t)) continue;
        const FrameMatrix f = geodesic_frame(b, t, Signature::compact);
        ++frames;
        const bool want = oracle_right_angle(f);
        if (in_cut_locus(f) == want) ++agree;
        if (t == tc && want) ++cut_on_locus;
      }
      // a generic frame and one with a row orthogonal to O
      FrameMatrix g = random_frame(n, n + m, rng);
      FrameMatrix p = random_frame(n, n + m, rng);
      p.rows.row(0).head(n).setZero();
      for (const FrameMatrix& f : {g, p}) {
        ++frames;
        if (in_cut_locus(f) == oracle_right_angle(f)) ++agree;
      }
    }
  }
  o.require(roundtrips == 40, "conjugate round trips");
  o.require(agree == frames, "cut-locus agreement");
  o.require(worst_cut < 1e-6, "cut time");
  o.require(cut_on_locus == 40, "right angle at the cut time");
  o.detail << roundtrips << "/40 round trips; cut-locus agreement " << agree << "/" << frames
           << "; |t_cut - t_conj| worst " << worst_cut;
  return o;
}

Outcome restricted_roots() {
  Outcome o;
  Rng rng(808);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double worst_res = 0.0;
  int shapes_ok = 0;
  for (auto [n, m] : {std::pair{1, 1}, std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const int r = std::min(n, m);
    std::vector<double> hv(static_cast<std::size_t>(r));
    for (auto& x : hv) x = u(rng);
    const CartanVector h = CartanVector::normalized(hv);
    const bool verified = restricted_roots_verify(n, m, h);
    const RootsReport rep = restricted_roots_report(n, m, h);
    worst_res = std::max(worst_res, rep.max_residual);
    bool table = true;
    for (const auto& c : rep.roots) table = table && c.table == c.span_rank && c.table == c.eigenspace;
    // independent multiplicities from the ad_H spectrum on gl(N)
    const int N = n + m;
    CMatrix H = CMatrix::Zero(N, N);
    for (int i = 0; i < r; ++i) {
      H(i, n + i) = h.h[static_cast<std::size_t>(i)];
      H(n + i, i) = -h.h[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXcd ev = oracle::ad_eigenvalues(H);
    const Complex I(0.0, 1.0);
    bool spectrum = true;
    for (int a = 0; a < r; ++a) {
      const double ha = h.h[static_cast<std::size_t>(a)];
      spectrum = spectrum && oracle::count_near(ev, I * 2.0 * ha, 1e-8) == 1;
      if (n != m) spectrum = spectrum && oracle::count_near(ev, I * ha, 1e-8) == 2 * std::abs(m - n);
      for (int b = a + 1; b < r; ++b) {
        const double hb = h.h[static_cast<std::size_t>(b)];
        spectrum = spectrum && oracle::count_near(ev, I * (ha + hb), 1e-8) == 2;
        spectrum = spectrum && oracle::count_near(ev, I * (ha - hb), 1e-8) == 2;
      }
    }
    if (verified && rep.ok && table && spectrum && rep.max_residual < 1e-12) ++shapes_ok;
  }
  o.require(shapes_ok == 5, "restricted roots");
  o.detail << shapes_ok << "/5 shapes verified, commutator residual " << worst_res;
  return o;
}

Outcome embedded_inequality() {
  Outcome o;
  Rng rng(909);
  double min_slack = std::numeric_limits<double>::infinity(), worst_eq = 0.0;
  for (int k = 0; k < 500; ++k) {
    const ChartPoint a = random_chart_point(2, 2, Signature::compact, rng);
    const ChartPoint b = random_chart_point(2, 2, Signature::compact, rng);
    const auto [delta, s] = embedded_vs_intrinsic(a, b);
    min_slack = std::min(min_slack, delta - s);
  }
  for (int k = 0; k < 100; ++k) {
    // r = 1
    const ChartPoint a = random_chart_point(1, 3, Signature::compact, rng);
    const ChartPoint b = random_chart_point(1, 3, Signature::compact, rng);
    const auto [d1, s1] = embedded_vs_intrinsic(a, b);
    worst_eq = std::max(worst_eq, std::abs(d1 - s1));
    // one zero angle: the planes share a direction
    const CMatrix f1 = random_complex(2, 4, rng);
    CMatrix f2 = random_complex(2, 4, rng);
    f2.row(0) = f1.row(0);
    const auto [d2, s2] = embedded_vs_intrinsic(ChartPoint(chart_of_frame(f1), Signature::compact),
                                                ChartPoint(chart_of_frame(f2), Signature::compact));
    worst_eq = std::max(worst_eq, std::abs(d2 - s2));
    min_slack = std::min({min_slack, d1 - s1, d2 - s2});
  }
  o.require(min_slack >= -1e-10, "inequality");
  o.require(worst_eq <= 1e-10, "equality cases");
  o.detail << "700 pairs, min slack " << min_slack << ", equality cases worst " << worst_eq;
  return o;
}

Outcome end_to_end() {
  Outcome o;
  const std::string cmd = std::string(GRASSGEO_CLI_PATH) + " verify-suite --seed 0 --samples 50";
  auto run = [&](std::string& out) {
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return -1;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    const int st = pclose(p);
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  const auto t0 = Clock::now();
  std::string first, second;
  const int rc = run(first);
  const double secs = seconds_since(t0);
  run(second);
  bool passed = false;
  std::size_t props = 0;
  try {
    const auto j = nlohmann::json::parse(first);
    passed = j.at("passed").get<bool>();
    props = j.at("properties").size();
  } catch (const std::exception&) {
  }
  o.require(rc == 0, "exit status");
  o.require(passed, "suite verdict");
  o.require(secs < 60.0, "runtime");
  o.require(first == second, "byte-identical reruns");
  o.detail << "exit " << rc << ", " << props << " properties, " << secs << " s";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Cauchy formula", cauchy_formula},
      {"angle oracle equivalence", angle_oracle},
      {"distance formula agreement", distance_formulas_agree},
      {"geodesic consistency", geodesic_consistency},
      {"isometry invariance", isometry_invariance},
      {"cell counts and partition", counts},
      {"cut and conjugate loci", loci},
      {"restricted roots", restricted_roots},
      {"embedded distance below intrinsic", embedded_inequality},
      {"verify-suite end to end", end_to_end},
  };
  int failures = 0, k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << "exception: " << e.what();
    }
    if (!r.pass) ++failures;
    std::cout << "criterion " << k << " [" << (r.pass ? "PASS" : "FAIL") << "] " << name << ": " << r.detail.str()
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
