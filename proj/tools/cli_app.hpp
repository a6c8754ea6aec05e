#pragma once

// grassgeo command-line front end.  Matrices are MatrixDoc JSON objects
//   {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)
// read from positional paths, from --json <path>, or from standard input
// (a single MatrixDoc or an array of them).  Results are one JSON object on
// standard output.  Exit codes: 0 ok, 1 domain error, 2 usage/format error.

#include "grassgeo/grassgeo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace grassgeo::cli {

using nlohmann::json;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline json matrix_doc(const CMatrix& a) {
  json data = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) data.push_back(to_json(a(i, j)));
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline CMatrix parse_matrix_doc(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw FormatError("MatrixDoc needs rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw FormatError("rows and cols must be integers");
  const long long r = j["rows"].get<long long>(), c = j["cols"].get<long long>();
  if (r < 0 || c < 0) throw FormatError("rows and cols must be nonnegative");
  const json& d = j["data"];
  if (!d.is_array() || static_cast<long long>(d.size()) != r * c) throw FormatError("data must hold rows*cols entries");
  CMatrix a(r, c);
  for (long long k = 0; k < r * c; ++k) {
    const json& e = d[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw FormatError("entries must be [re, im] number pairs");
    const double re = e[0].get<double>(), im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError("entries must be finite");
    a(k / c, k % c) = Complex(re, im);
  }
  return a;
}

inline json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline std::vector<CMatrix> parse_bundle(const json& j) {
  std::vector<CMatrix> out;
  if (j.is_array())
    for (const auto& e : j) out.push_back(parse_matrix_doc(e));
  else
    out.push_back(parse_matrix_doc(j));
  return out;
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
  return s;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw FormatError("bad integer '" + item + "'");
    } catch (const std::logic_error&) {
      throw FormatError("bad integer '" + item + "'");
    }
  }
  return out;
}

inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw FormatError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw FormatError("bad number '" + item + "'");
    }
  }
  return out;
}

inline Signature parse_signature(const std::string& s) {
  if (s == "compact" || s == "1" || s == "+1") return Signature::compact;
  if (s == "noncompact" || s == "-1") return Signature::noncompact;
  throw FormatError("--epsilon must be compact or noncompact");
}

struct Options {
  std::string epsilon = "compact";
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string json_path;
  bool pretty = false;

  std::vector<std::string> files;
  double t = 1.0;
  std::string sigma;
  std::string h;
  int n = 0, m = 0, N = 0, p = 0, l = 0;
  int lambda_max = 1;
  int samples = 50;
  bool frame = false;
};

class Runner {
 public:
  Runner(const Options& o, std::istream& in, const std::string& command, const std::string& argv_text)
      : o_(o), in_(in), command_(command), digest_(fnv1a(argv_text)) {}

  Signature sig() const { return parse_signature(o_.epsilon); }

  Tolerance tolerance() const {
    if (o_.tol) return Tolerance::with_rel(*o_.tol);
    if (const char* env = std::getenv("GRASSGEO_TOL")) {
      try {
        std::size_t used = 0;
        const std::string s(env);
        const double v = std::stod(s, &used);
        if (used != s.size()) throw FormatError("GRASSGEO_TOL is not a number");
        return Tolerance::with_rel(v);
      } catch (const std::logic_error&) {
        throw FormatError("GRASSGEO_TOL is not a number");
      }
    }
    return Tolerance{};
  }

  /// Input matrices, in order.
  const std::vector<CMatrix>& matrices() {
    if (loaded_) return mats_;
    loaded_ = true;
    if (!o_.files.empty()) {
      for (const auto& f : o_.files) {
        const std::string text = read_file(f);
        digest_ = fnv1a(text, digest_);
        for (auto& a : parse_bundle(parse_json_text(text, f))) mats_.push_back(std::move(a));
      }
    } else {
      std::string text;
      if (!o_.json_path.empty()) {
        text = read_file(o_.json_path);
      } else {
        std::ostringstream s;
        s << in_.rdbuf();
        text = s.str();
      }
      digest_ = fnv1a(text, digest_);
      mats_ = parse_bundle(parse_json_text(text, o_.json_path.empty() ? "stdin" : o_.json_path));
    }
    return mats_;
  }

  const CMatrix& matrix(std::size_t k) {
    const auto& ms = matrices();
    if (ms.size() <= k) throw FormatError(command_ + " needs " + std::to_string(k + 1) + " matrix input(s)");
    return ms[k];
  }

  ChartPoint point(std::size_t k) { return ChartPoint(matrix(k), sig()); }
  FrameMatrix frame(std::size_t k) { return FrameMatrix(matrix(k)); }

  json envelope(json result) const {
    json out;
    out["command"] = command_;
    out["inputs"] = "fnv1a:" + hex64(digest_);
    out["tolerance"] = json{{"rel", tolerance().rel}};
    for (auto it = result.begin(); it != result.end(); ++it) out[it.key()] = it.value();
    return out;
  }

  std::uint64_t digest() const { return digest_; }

 private:
  const Options& o_;
  std::istream& in_;
  std::string command_;
  std::uint64_t digest_;
  std::vector<CMatrix> mats_;
  bool loaded_ = false;
};

inline json angles_json(const AngleSpectrum& a) { return json(a.theta); }

inline json run_command(const std::string& cmd, const Options& o, Runner& r, int& status) {
  const Tolerance tol = r.tolerance();
  status = 0;
  if (cmd == "distance") {
    const ChartPoint a = r.point(0), b = r.point(1);
    const DistanceResult d = distance(a, b, tol);
    const DistanceFormulas f = distance_formulas(a, b, tol);
    return {{"d", d.d},
            {"angles", angles_json(d.angles)},
            {"formulas", {{"tr", f.tr}, {"un", f.un}, {"lag", f.lag}, {"vw_residual", f.vw_residual}, {"in_chart", f.in_chart}}}};
  }
  if (cmd == "angles") {
    const ChartPoint a = r.point(0), b = r.point(1);
    const auto [lhs, rhs] = angle_product_check(a, b, tol);
    json out{{"angles", angles_json(stationary_angles(a, b, tol))}, {"product", {lhs, rhs}}};
    if (a.sig() == Signature::compact) out["isoclinic"] = is_isoclinic_pair(a, b, tol);
    return out;
  }
  if (cmd == "exp") return {{"Z", matrix_doc(exp_map(TangentDirection{r.matrix(0)}, o.t, r.sig(), tol).Z())}};
  if (cmd == "log") return {{"B", matrix_doc(log_map(r.point(0)).B)}};
  if (cmd == "pluecker") {
    const PlueckerCoords p = pluecker_coords(r.frame(0), tol);
    json coords = json::array();
    for (Eigen::Index k = 0; k < p.coords.size(); ++k) coords.push_back(to_json(p.coords(k)));
    return {{"n", p.n}, {"N", p.N}, {"index_sets", p.index_sets()}, {"coords", coords}};
  }
  if (cmd == "relations") {
    const CMatrix& a = r.matrix(0);
    PlueckerCoords p;
    if (o.n > 0) {
      // a row of C(N, n) coordinates
      const Eigen::Index len = a.size();
      int N = o.n;
      while (detail::binomial(N, o.n) < len) ++N;
      if (detail::binomial(N, o.n) != len) throw FormatError("coordinate count is not a binomial C(N, n)");
      p.N = N;
      p.n = o.n;
      p.coords = Eigen::Map<const CVector>(CMatrix(a.transpose()).data(), len);
    } else {
      p = pluecker_coords(FrameMatrix(a), tol);
    }
    return {{"residual", pluecker_relations_residual(p)}};
  }
  if (cmd == "transition") {
    const FrameMatrix f = r.frame(0);
    const SchubertSymbol s(parse_int_list(o.sigma), static_cast<int>(f.N()));
    return {{"Z", matrix_doc(chart_transition(f, s, tol))}};
  }
  if (cmd == "overlap") {
    const ChartPoint a = r.point(0), b = r.point(1);
    return {{"overlap", to_json(coherent_overlap(a, b))}, {"hermitian_product", to_json(hermitian_product(a, b))}};
  }
  if (cmd == "diastasis") return {{"D", diastasis(r.point(0), r.point(1), tol)}};
  if (cmd == "cells") {
    if (o.n > 0) {
      json syms = json::array(), dims = json::array();
      for (const auto& s : enumerate_symbols(o.n, o.N)) {
        syms.push_back(s.sigma());
        dims.push_back(cell_dimension(s));
      }
      return {{"symbols", syms}, {"dimensions", dims}};
    }
    const auto [s, e] = echelon_form(r.frame(0), tol);
    return {{"sigma", s.sigma()}, {"dimension", cell_dimension(s)}, {"echelon", matrix_doc(e.rows)}};
  }
  if (cmd == "schubert-member") {
    const FrameMatrix f = r.frame(0);
    if (o.p > 0) return {{"member", v_p_l_membership(f, o.p, o.l, tol)}, {"p", o.p}, {"l", o.l}};
    const SchubertSymbol s(parse_int_list(o.sigma), static_cast<int>(f.N()));
    return {{"member", schubert_membership(f, s, tol)}, {"sigma", s.sigma()}, {"omega", s.omega()}};
  }
  if (cmd == "stratify") {
    const Stratification s = stratify(o.p, o.l, o.n, o.m);
    json strata = json::array();
    for (const auto& st : s.strata)
      strata.push_back({{"l", st.l}, {"dimension", st.dimension}, {"description", st.description}});
    json out{{"kind", stratification_kind_name(s.kind)}, {"strata", strata}};
    if (!s.terminal.empty()) out["terminal"] = s.terminal;
    return out;
  }
  if (cmd == "counts") {
    const CellCounts c = theorem1_counts(o.n, o.m);
    return {{"N_n", c.N_n}, {"cell_count", c.cell_count}, {"euler", c.euler}, {"poincare", c.poincare}};
  }
  if (cmd == "cut" || cmd == "conjugate") {
    const FrameMatrix f = o.frame ? r.frame(0) : FrameMatrix::extended(ChartPoint(r.matrix(0), Signature::compact));
    if (cmd == "cut") return {{"cut", in_cut_locus(f, tol)}};
    const ConjugateClass c = classify_conjugate(f, tol);
    return {{"kind", conjugate_kind_name(c.kind)}, {"zero_angles", c.zero_angles}, {"right_angles", c.right_angles},
            {"coincidences", c.coincidences}, {"angles", c.angles}};
  }
  if (cmd == "conjtimes") {
    const CartanVector h = CartanVector::normalized(parse_real_list(o.h));
    const auto times = tangent_conjugate_times(h, o.n, o.m, o.lambda_max);
    json fam = json::object();
    json list = json::array();
    for (const auto& t : times) {
      fam[family_name(t.family)].push_back(t.t);
      list.push_back({{"t", t.t}, {"multiplicity", t.multiplicity}, {"family", family_name(t.family)}});
    }
    return {{"h", h.h}, {"families", fam}, {"times", list}};
  }
  if (cmd == "roots-verify") {
    std::vector<double> hv;
    if (!o.h.empty()) {
      hv = parse_real_list(o.h);
    } else {
      Rng rng(o.seed);
      std::uniform_real_distribution<double> u(0.1, 1.0);
      hv.resize(static_cast<std::size_t>(std::min(o.n, o.m)));
      for (auto& x : hv) x = u(rng);
    }
    const CartanVector h = CartanVector::normalized(hv);
    const RootsReport rep = restricted_roots_report(o.n, o.m, h, tol);
    json roots = json::array();
    for (const auto& c : rep.roots)
      roots.push_back({{"root", c.root}, {"table", c.table}, {"span_rank", c.span_rank}, {"eigenspace", c.eigenspace}, {"ok", c.ok}});
    status = rep.ok ? 0 : 1;
    return {{"ok", rep.ok},          {"h", h.h},
            {"max_residual", rep.max_residual}, {"dimension_sum", rep.dimension_sum},
            {"dimension_m", rep.dimension_m},   {"killing_min", rep.killing_min},
            {"roots", roots},        {"failures", rep.failures}};
  }
  if (cmd == "verify-suite") {
    const SuiteReport rep = run_verify_suite(o.seed, o.samples, tol);
    json props = json::array();
    for (const auto& p : rep.properties) {
      json e{{"name", p.name}, {"passed", p.passed}, {"worst", p.worst}, {"threshold", p.threshold}, {"cases", p.cases}};
      if (!p.note.empty()) e["note"] = p.note;
      props.push_back(std::move(e));
    }
    status = rep.passed() ? 0 : 1;
    return {{"passed", rep.passed()}, {"seed", rep.seed}, {"samples", rep.samples}, {"properties", props}};
  }
  throw FormatError("unknown command " + cmd);
}

inline int run_cli(int argc, char** argv, std::istream& in, std::ostream& out) {
  Options o;
  CLI::App app{"Geometry of complex Grassmann manifolds", "grassgeo"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--epsilon", o.epsilon, "compact or noncompact");
  app.add_option("--tol", o.tol, "relative tolerance (overrides GRASSGEO_TOL)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--json", o.json_path, "read input matrices from this file");
  app.add_flag("--pretty", o.pretty, "indent the JSON output");

  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto files = [&](CLI::App* s) { s->add_option("files", o.files, "MatrixDoc files"); };

  auto* distance_c = sub("distance", "geodesic distance and stationary angles");
  files(distance_c);
  files(sub("angles", "stationary angles, product formula, isoclinic test"));
  auto* exp_c = sub("exp", "exponential map at the origin");
  files(exp_c);
  exp_c->add_option("--t", o.t, "geodesic parameter");
  files(sub("log", "logarithm map at the origin"));
  files(sub("pluecker", "Pluecker coordinates of a frame"));
  auto* rel_c = sub("relations", "Grassmann-Pluecker residual of a frame or coordinate row");
  files(rel_c);
  rel_c->add_option("--n", o.n, "input is a row of C(N, n) coordinates");
  auto* tr_c = sub("transition", "coordinates of a frame in the chart of a Schubert symbol");
  files(tr_c);
  tr_c->add_option("--sigma", o.sigma, "chart symbol, e.g. 2,4")->required();
  files(sub("overlap", "coherent-state overlap"));
  files(sub("diastasis", "Calabi diastasis"));
  auto* cells_c = sub("cells", "list Schubert symbols (--n --N) or the cell of a frame");
  files(cells_c);
  cells_c->add_option("--n", o.n);
  cells_c->add_option("--N", o.N);
  auto* mem_c = sub("schubert-member", "Schubert variety membership (--sigma or --p --l)");
  files(mem_c);
  mem_c->add_option("--sigma", o.sigma);
  mem_c->add_option("--p", o.p);
  mem_c->add_option("--l", o.l);
  auto* str_c = sub("stratify", "stratification of V^p_l");
  str_c->add_option("--p", o.p)->required();
  str_c->add_option("--l", o.l)->default_val(1);
  str_c->add_option("--n", o.n)->required();
  str_c->add_option("--m", o.m)->required();
  auto* cnt_c = sub("counts", "cell counts and Poincare polynomial");
  cnt_c->add_option("--n", o.n)->required();
  cnt_c->add_option("--m", o.m)->required();
  for (const char* name : {"cut", "conjugate"}) {
    auto* c = sub(name, std::string(name) == "cut" ? "cut-locus test against O" : "conjugate-locus classification");
    files(c);
    c->add_flag("--frame", o.frame, "input is an n x N frame instead of chart coordinates");
  }
  auto* ct_c = sub("conjtimes", "tangent conjugate times");
  ct_c->add_option("--h", o.h, "Cartan vector, e.g. 0.8,0.6")->required();
  ct_c->add_option("--n", o.n)->required();
  ct_c->add_option("--m", o.m)->required();
  ct_c->add_option("--lambda-max", o.lambda_max)->default_val(1);
  auto* rv_c = sub("roots-verify", "check the restricted root table");
  rv_c->add_option("--n", o.n)->required();
  rv_c->add_option("--m", o.m)->required();
  rv_c->add_option("--h", o.h, "Cartan vector (default: random from --seed)");
  auto* vs_c = sub("verify-suite", "run the property suite");
  vs_c->add_option("--samples", o.samples)->default_val(50);

  auto emit = [&](const json& j) {
    out << (o.pretty ? j.dump(2) : j.dump()) << "\n";
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit(json{{"error", "UsageError"}, {"message", e.what()}});
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  std::string argv_text;
  for (int i = 1; i < argc; ++i) argv_text += std::string(argv[i]) + '\0';
  Runner runner(o, in, cmd, argv_text);
  try {
    int status = 0;
    json result = run_command(cmd, o, runner, status);
    emit(runner.envelope(std::move(result)));
    return status;
  } catch (const FormatError& e) {
    emit(json{{"command", cmd}, {"error", "FormatError"}, {"message", e.what()}});
    return 2;
  } catch (const Error& e) {
    emit(json{{"command", cmd}, {"error", e.name()}, {"message", e.what()}});
    return 1;
  }
}

}  // namespace grassgeo::cli
