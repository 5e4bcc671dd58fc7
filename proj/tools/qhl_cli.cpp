// qhl: command-line experiments. One JSON report per run on stdout (or --out).
// Exit status: 0 success, 1 a verification flag is false, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qhl/chain.hpp"
#include "qhl/diamond.hpp"
#include "qhl/exact.hpp"
#include "qhl/lp.hpp"
#include "qhl/monodromy.hpp"
#include "qhl/qz.hpp"

using json = nlohmann::ordered_json;
using namespace qhl;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

class Report {
 public:
  json results = json::object();
  json checks = json::object();

  std::string load(const std::string& key, const std::string& path) {
    std::string text = read_file(path);
    inputs_[key] = {{"path", path}, {"fnv1a64", fnv1a(text)}};
    return text;
  }
  void note_value(const std::string& key, const std::string& value) { inputs_[key] = value; }
  void check(const std::string& name, bool ok) {
    checks[name] = ok;
    ok_ = ok_ && ok;
  }
  bool ok() const { return ok_; }
  json finish(const std::string& command, std::optional<double> seconds) const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs_;
    j["results"] = results;
    j["verified"] = checks;
    j["ok"] = ok_;
    if (seconds) j["wall_seconds"] = *seconds;
    return j;
  }

 private:
  json inputs_ = json::object();
  bool ok_ = true;
};

json rat_json(const Rat& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) return r.get_num().get_si();
  return to_string(r);
}

json vec_json(const QVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rat_json(x));
  return a;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    auto a = cur.find_first_not_of(" \t");
    auto b = cur.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
  }
  return out;
}

LatVec parse_latvec(const std::string& s) {
  LatVec v;
  for (const auto& t : split(s, ',')) v.push_back(std::stoll(t));
  if (v.empty()) throw InputError("empty integer vector");
  return v;
}

QVec parse_qvec(const std::string& s) {
  QVec v;
  for (const auto& t : split(s, ',')) v.push_back(parse_rat(t));
  return v;
}

MonodromySpace load_space(Report& rep, const std::string& path) {
  return MonodromySpace(parse_matrix(rep.load("matrix", path)));
}

EquivariantComplex load_complex(Report& rep, const std::string& spec) {
  try {
    auto cx = builtin_complex(spec);
    rep.note_value("complex", spec);
    return cx;
  } catch (const std::invalid_argument&) {
  }
  return parse_complex(rep.load("complex", spec));
}

int supporting_radius(const EquivariantComplex& cx, const Chain& c) {
  for (int R = 0; R <= 64; ++R)
    if (restrict_ball(cx, R).supports(c)) return R;
  throw InputError("chain is not supported in any ball of radius <= 64");
}

json expression_json(const Expression& e) { return e.canonical().to_string(); }

// ---------------------------------------------------------------- handlers

struct Opts {
  std::string matrix, alpha = "1", window = "auto", p = "1", M, lp, complex, cycle, word, chain, mode = "integral",
              omega = "1", cayley, inclusion, q, mu, snf;
  long long kmax = 5, mmax = 1024, vmax = 4;
  double margin = 0;
  int radius = -1, dim = -1, level = 1, tau = 1, s = 1, bs = 0;
  bool verify = false, linf = false;
};

void run_elliptic(const Opts& o, Report& rep) {
  auto v = is_elliptic(load_space(rep, o.matrix));
  rep.results["elliptic"] = v.elliptic;
  if (!v.elliptic) rep.results["reason"] = v.reason;
  rep.check("exact", true);
}

void run_distort(const Opts& o, Report& rep) {
  auto space = load_space(rep, o.matrix);
  LatVec alpha = parse_latvec(o.alpha);
  long long S;
  std::string source;
  if (o.window == "auto") {
    auto w = auto_window(space, o.kmax);
    if (w) {
      S = *w;
      source = "shift bound";
    } else {
      // no shift bound off the elliptic case; shifts up to log2(m_max) reach every power needed
      S = 0;
      while ((1LL << (S + 1)) <= o.mmax) ++S;
      source = "log2 of mmax";
    }
  } else {
    S = std::stoll(o.window);
    source = "user";
  }
  auto rows = distortion_profile(space, alpha, o.kmax, o.mmax, S);
  QVec a = space.lattice().point(alpha);
  json profile = json::array();
  bool witnesses_ok = true;
  for (const auto& r : rows) {
    bool ok = r.max_multiple == 0 ||
              (evaluate(space, r.witness) == Rat(static_cast<long>(r.max_multiple)) * a && r.witness.volume() <= r.k);
    witnesses_ok = witnesses_ok && ok;
    profile.push_back({{"k", r.k},
                       {"max_multiple", r.max_multiple},
                       {"saturated", r.saturated},
                       {"witness", expression_json(r.witness)}});
  }
  const auto& last = rows.back();
  rep.results["k"] = last.k;
  rep.results["max_multiple"] = last.max_multiple;
  rep.results["saturated"] = last.saturated;
  rep.results["witness"] = expression_json(last.witness);
  rep.results["window"] = S;
  rep.results["window_source"] = source;
  rep.results["profile"] = profile;
  rep.check("witnesses_evaluate", witnesses_ok);
}

void run_decompose(const Opts& o, Report& rep) {
  auto space = load_space(rep, o.matrix);
  LatVec p = parse_latvec(o.p);
  BigInt M(o.M);
  auto r = greedy_decompose(space, p, M);
  QVec want = space.lattice().point(p);
  for (auto& x : want) x *= Rat(M);
  long long maxc = 0;
  for (const auto& t : r.expr.terms)
    for (auto u : t.u) maxc = std::max(maxc, std::llabs(u));
  rep.results["expression"] = expression_json(r.expr);
  rep.results["terms"] = r.expr.terms.size();
  rep.results["volume"] = r.expr.volume();
  rep.results["max_coefficient"] = maxc;
  rep.results["term_bound"] = r.term_bound;
  rep.results["attempts"] = r.attempts;
  rep.check("evaluates_to_target", evaluate(space, r.expr) == want);
}

void run_shiftbound(const Opts& o, Report& rep) {
  auto space = load_space(rep, o.matrix);
  auto f = shift_bound_constants(space);
  auto r = verify_shift_bound(space, o.vmax, o.margin);
  rep.results["a"] = rat_json(f.a);
  rep.results["b"] = f.b;
  rep.results["window"] = r.window;
  rep.results["splits_checked"] = r.splits_checked;
  rep.results["vanishing_splits"] = r.vanishing_splits;
  rep.results["counterexamples"] = r.counterexamples.size();
  rep.results["trivial_only"] = r.trivial_only;
  rep.check("no_counterexamples", r.counterexamples.empty());
}

void run_lp(const Opts& o, Report& rep) {
  StandardLP lp = parse_lp(rep.load("lp", o.lp));
  auto r = simplex_solve(lp);
  rep.results["status"] = to_string(r.status);
  if (r.status == LPStatus::optimal) {
    rep.results["optimum"] = rat_json(r.optimum);
    rep.results["primal"] = vec_json(r.primal);
    rep.results["dual"] = vec_json(r.dual);
    auto d = simplex_solve(dual_of(lp));
    rep.results["dual_optimum"] = rat_json(-d.optimum);
    rep.check("certificates", certificates_hold(lp, r));
    rep.check("strong_duality", d.status == LPStatus::optimal && -d.optimum == r.optimum);
  }
  rep.results["pivots"] = r.pivots;
}

std::vector<QVec> omega_values(const std::string& s, std::size_t n) {
  QVec v = parse_qvec(s);
  if (v.size() == 1) return std::vector<QVec>(n, QVec{v[0]});
  if (v.size() != n) throw InputError("omega needs 1 or " + std::to_string(n) + " values");
  std::vector<QVec> out;
  for (const auto& x : v) out.push_back(QVec{x});
  return out;
}

void run_dual(const Opts& o, Report& rep) {
  if (o.radius < 0) throw InputError("--radius is required");
  FiniteBall fb;
  if (!o.cayley.empty()) {
    fb = cayley_graph_ball(*make_group(o.cayley), o.radius);
    rep.note_value("cayley", o.cayley);
  } else {
    auto cx = load_complex(rep, o.complex.empty() ? "grid" : o.complex);
    int n = o.dim >= 0 ? o.dim : cx.top_dim() - 1;
    fb = to_finite_ball(cx, restrict_ball(cx, o.radius), n, Direction::cochain);
  }
  auto omega = omega_values(o.omega, fb.n_constraint());
  rep.results["radius"] = o.radius;
  rep.results["unknowns"] = fb.n_unknown();
  rep.results["constraints"] = fb.n_constraint();
  if (o.linf) {
    auto K = linf_min_bound(fb, omega);
    rep.results["linf_bound"] = K ? rat_json(*K) : json(nullptr);
    rep.check("feasible", K.has_value());
    return;
  }
  std::vector<PolyhedralNorm> norms(fb.n_unknown(), PolyhedralNorm::absolute());
  auto cert = bounded_primitive_or_violator(fb, omega, norms);
  rep.results["certificate_kind"] = cert.kind == DualityCertificate::primitive ? "primitive" : "violator";
  rep.results["primal_optimum"] = rat_json(cert.primal_optimum);
  if (cert.kind == DualityCertificate::primitive) {
    Rat m = 0;
    for (const auto& a : cert.alpha)
      for (const auto& x : a) m = std::max(m, x < 0 ? Rat(-x) : x);
    rep.results["alpha_sup"] = rat_json(m);
  } else {
    rep.results["content"] = rat_json(cert.content);
    rep.results["boundary_norm"] = rat_json(cert.boundary_norm);
  }
  rep.check("certificate", verify_certificate(fb, omega, norms, cert));
}

Chain load_cycle(const Opts& o, Report& rep, const EquivariantComplex& cx, int dim) {
  int given = !o.cycle.empty() + !o.word.empty() + !o.chain.empty() + (o.bs > 0);
  if (given != 1) throw InputError("give exactly one of --cycle, --chain, --word, --bs");
  if (o.bs > 0) return bs_word_boundary(cx, o.bs);
  if (!o.word.empty()) return word_cycle(cx, cx.group().parse_word(o.word));
  std::string text = o.chain;
  if (!o.cycle.empty())
    text = rep.load("cycle", o.cycle);
  else
    for (auto& ch : text)
      if (ch == ';') ch = '\n';
  return parse_chain(cx, dim, text);
}

void run_fill(const Opts& o, Report& rep) {
  auto cx = load_complex(rep, o.complex.empty() ? "grid" : o.complex);
  Chain b = load_cycle(o, rep, cx, o.dim >= 0 ? o.dim : cx.top_dim() - 1);
  if (o.mode != "integral" && o.mode != "rational") throw InputError("--mode is integral or rational");
  int R = o.radius >= 0 ? o.radius : supporting_radius(cx, b);
  auto f = filling_volume(cx, restrict_ball(cx, R), b, o.mode == "integral" ? FillMode::integral : FillMode::rational);
  rep.results["radius"] = R;
  rep.results["cycle_volume"] = rat_json(b.volume());
  rep.results["mode"] = o.mode;
  rep.results["fillable"] = f.has_value();
  if (f) {
    rep.results["volume"] = rat_json(f->volume);
    rep.results["cells"] = f->chain.c.size();
    rep.check("boundary_matches", cx.boundary(f->chain) == b);
  } else {
    rep.check("boundary_matches", false);
  }
}

void run_pair(const Opts& o, Report& rep) {
  auto cx = load_complex(rep, o.complex.empty() ? "tube" : o.complex);
  int dim = o.dim >= 0 ? o.dim : cx.top_dim() - 1;
  Chain b = load_cycle(o, rep, cx, dim);
  auto vals = parse_qvec(o.omega);
  std::size_t cells = cx.count(dim + 1);
  if (vals.size() == 1) vals.assign(cells, vals[0]);
  if (vals.size() != cells) throw InputError("omega needs 1 or " + std::to_string(cells) + " values");
  auto w = TwistedCocycle::untwisted(dim + 1, std::vector<Rat>(vals.begin(), vals.end()));
  int R = o.radius >= 0 ? o.radius : supporting_radius(cx, b);
  auto p = filling_pairing(cx, restrict_ball(cx, R), b, w);
  rep.results["radius"] = R;
  rep.results["pairing"] = vec_json(p.value);
  rep.results["cycle_volume"] = rat_json(b.volume());
  rep.results["filling_volume"] = rat_json(p.first.volume);
  rep.results["distinct_fillings"] = p.distinct_fillings;
  // filling_pairing throws when the two fillings disagree, so reaching here means they agree
  rep.check("filling_independent", true);
}

void run_diamond(const Opts& o, Report& rep) {
  DiamondComplex X(o.level);
  auto r = verify_tau(X, o.tau);
  rep.results["n"] = r.n;
  rep.results["k"] = r.k;
  rep.results["K"] = rat_json(r.K);
  rep.results["volume"] = rat_json(r.volume);
  rep.results["boundary_volume"] = rat_json(r.boundary_volume);
  rep.results["boundary_bound"] = rat_json(r.boundary_bound);
  rep.results["rho_diff_cells"] = rat_json(r.rho_diff);
  rep.results["rho_bound"] = rat_json(r.rho_bound);
  rep.results["K_range"] = {rat_json(r.K_low), rat_json(r.K_high)};
  json viol = json::array();
  for (const auto& v : r.violations()) viol.push_back(v);
  rep.results["violations"] = viol;
  if (o.verify) {
    rep.check("evaluation_is_multiple", r.evaluation_is_multiple);
    rep.check("K_in_range", r.K_ok);
    rep.check("boundary_bound", r.boundary_ok);
    rep.check("rho_bound", r.rho_ok);
  }
}

LMatrix json_lmatrix(const json& j) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : j) {
    std::vector<std::string> row;
    for (const auto& x : r) row.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    rows.push_back(row);
  }
  return parse_lmatrix(rows);
}

// a module is either a matrix of relations or {"gens": n, "relations": [...]}
QZModule json_module(const json& j) {
  if (j.is_object()) {
    std::size_t g = j.at("gens").get<std::size_t>();
    LMatrix m = json_lmatrix(j.value("relations", json::array()));
    if (m.rows() == 0) m = LMatrix(g, 0);
    if (m.rows() != g) throw InputError("relations have the wrong number of rows");
    return {m};
  }
  return {json_lmatrix(j)};
}

json lmatrix_json(const LMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).to_string());
    a.push_back(r);
  }
  return a;
}

json invariants_json(const std::vector<LaurentPoly>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(p.to_string());
  return a;
}

void run_module_split(const Opts& o, Report& rep) {
  json j = json::parse(rep.load("inclusion", o.inclusion));
  QZModule A = json_module(j.at("A")), M = json_module(j.at("M"));
  LMatrix F = j.contains("map") && !j["map"].empty() ? json_lmatrix(j["map"]) : LMatrix(M.gens(), A.gens());
  auto r = splitting_test(A, M, F);
  rep.results["split"] = r.split;
  if (r.split) {
    rep.results["retraction"] = lmatrix_json(r.retraction);
    rep.check("retraction", verify_retraction(A, M, F, r.retraction));
  } else {
    rep.results["certificate"] = r.certificate;
    rep.check("infeasibility_certified", !r.certificate.empty());
  }
}

void run_module_cert(const Opts& o, Report& rep) {
  LaurentPoly ql = parse_laurent(o.q);
  if (ql.low() < 0) throw InputError("q must be a polynomial");
  QPoly q = ql.poly() * QPoly::x_power(static_cast<std::size_t>(ql.low()));
  QVec mu = o.mu.empty() ? QVec{} : parse_qvec(o.mu);
  auto C = certificate_chains(q, o.s, mu);
  rep.results["s"] = C.s;
  rep.results["r"] = C.r;
  rep.results["P"] = C.P.to_string();
  rep.results["boundary"] = C.boundary.to_string();
  rep.results["E"] = C.E.to_string();
  rep.results["F"] = C.F.to_string();
  rep.results["G"] = C.G.to_string();
  rep.results["F_norm"] = rat_json(C.F_norm);
  rep.results["G_volume"] = rat_json(C.G_volume);
  rep.results["G_denominator"] = C.G_denominator.get_str();
  rep.results["pairing"] = vec_json(C.pairing);
  rep.results["pairing_norm"] = rat_json(C.pairing_norm);
  rep.check("E_zero", C.E.is_zero());
  rep.check("split_exact", C.split_exact);
  rep.check("F_bounded", C.F_bounded);
  rep.check("pairing", C.pairing == C.pairing_direct);
}

void run_module_snf(const Opts& o, Report& rep) {
  json j = json::parse(rep.load("matrix", o.snf));
  LMatrix M = json_lmatrix(j.is_object() ? j.at("matrix") : j);
  auto S = laurent_snf(M);
  rep.results["rank"] = S.rank;
  rep.results["invariants"] = invariants_json(S.invariants);
  rep.results["U"] = lmatrix_json(S.U);
  rep.results["V"] = lmatrix_json(S.V);
  rep.check("UMV_equals_D", S.U * M * S.V == S.D);
  bool units = M.rows() == 0 || M.rows() > 6 || determinant(S.U).is_unit();
  units = units && (M.cols() == 0 || M.cols() > 6 || determinant(S.V).is_unit());
  rep.check("unit_determinants", units);
}

void run_module_ext(const Opts& o, Report& rep) {
  json j = json::parse(rep.load("modules", o.inclusion));
  auto E = ext_module(json_module(j.at("M")), json_module(j.at("N")));
  rep.results["gens"] = E.gens();
  rep.results["invariants"] = invariants_json(invariant_factors(E));
  rep.check("exact", true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qhl: exact experiments on volume distortion, fillings and twisted pairings"};
  app.require_subcommand(1);
  Opts o;
  std::string out;
  bool pretty = false, timing = false;
  app.add_option("--out", out, "write the JSON report here instead of stdout");
  app.add_flag("--pretty", pretty, "human-readable table instead of JSON");
  app.add_flag("--timing", timing, "include wall time (breaks byte-identical reports)");
  app.fallthrough();

  auto* el = app.add_subcommand("elliptic", "decide ellipticity of a rational matrix");
  el->add_option("--matrix", o.matrix, "matrix file: 'rows cols' then entries")->required();

  auto* di = app.add_subcommand("distort", "volume distortion profile of a lattice vector");
  di->add_option("--matrix", o.matrix)->required();
  di->add_option("--alpha", o.alpha, "lattice coordinates, comma separated");
  di->add_option("--kmax", o.kmax);
  di->add_option("--mmax", o.mmax);
  di->add_option("--window", o.window, "shift window, or 'auto'");

  auto* de = app.add_subcommand("decompose", "greedy expression for M p");
  de->add_option("--matrix", o.matrix)->required();
  de->add_option("--p", o.p, "lattice coordinates, comma separated");
  de->add_option("--M", o.M, "multiplier")->required();

  auto* sb = app.add_subcommand("shiftbound", "exhaustive check of the shift bound");
  sb->add_option("--matrix", o.matrix)->required();
  sb->add_option("--vmax", o.vmax);
  sb->add_option("--margin", o.margin);

  auto* lp = app.add_subcommand("lp", "solve a standard-form LP exactly and check duality");
  lp->add_option("--lp", o.lp, "LP dump: 'm n', A rows, b, c")->required();

  auto* du = app.add_subcommand("dual", "bounded primitive or violating chain on a ball");
  du->add_option("--complex", o.complex, "builtin name or complex file");
  du->add_option("--cayley", o.cayley, "use the Cayley graph ball of this group instead");
  du->add_option("--radius", o.radius)->required();
  du->add_option("--dim", o.dim, "cochain degree n (omega lives in degree n+1)");
  du->add_option("--omega", o.omega, "one value, or one per constraint cell");
  du->add_flag("--linf", o.linf, "report the minimal sup norm of a primitive instead");

  auto* fi = app.add_subcommand("fill", "filling volume of a cycle");
  fi->add_option("--complex", o.complex);
  fi->add_option("--cycle", o.cycle, "chain file with '(cell, word) coeff' lines");
  fi->add_option("--chain", o.chain, "inline chain, lines separated by ';'");
  fi->add_option("--word", o.word, "loop word in the presentation complex");
  fi->add_option("--bs", o.bs, "the BS(1,2) loop of parameter k");
  fi->add_option("--radius", o.radius, "ball radius, default the smallest supporting one");
  fi->add_option("--dim", o.dim);
  fi->add_option("--mode", o.mode, "integral or rational");

  auto* pa = app.add_subcommand("pair", "pairing of a cycle with an untwisted cocycle through fillings");
  pa->add_option("--complex", o.complex);
  pa->add_option("--cycle", o.cycle);
  pa->add_option("--chain", o.chain);
  pa->add_option("--word", o.word);
  pa->add_option("--radius", o.radius);
  pa->add_option("--dim", o.dim);
  pa->add_option("--omega", o.omega, "one value, or one per orbit cell");

  auto* dm = app.add_subcommand("diamond", "tau chains in the diamond complexes");
  dm->add_option("--level", o.level)->required();
  dm->add_option("--tau", o.tau)->required();
  dm->add_flag("--verify", o.verify, "fail unless all postconditions hold");

  auto* mo = app.add_subcommand("module", "modules over the Laurent ring");
  mo->require_subcommand(1);
  auto* ms = mo->add_subcommand("split", "splitting test for an inclusion");
  ms->add_option("--inclusion", o.inclusion, "JSON with A, M and map")->required();
  auto* mc = mo->add_subcommand("cert", "certificate chains for q");
  mc->add_option("--q", o.q)->required();
  mc->add_option("--s", o.s)->required();
  mc->add_option("--mu", o.mu, "pairing seed, comma separated");
  auto* mn = mo->add_subcommand("snf", "Smith form of a Laurent matrix");
  mn->add_option("--matrix", o.snf, "JSON matrix of Laurent strings")->required();
  auto* me = mo->add_subcommand("ext", "Ext of two modules");
  me->add_option("--modules", o.inclusion, "JSON with M and N")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.back()->help());
    return 2;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);
  Report rep;
  if (const char* th = std::getenv("QHL_THREADS")) rep.note_value("QHL_THREADS", th);
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (el->parsed()) run_elliptic(o, rep);
    else if (di->parsed()) run_distort(o, rep);
    else if (de->parsed()) run_decompose(o, rep);
    else if (sb->parsed()) run_shiftbound(o, rep);
    else if (lp->parsed()) run_lp(o, rep);
    else if (du->parsed()) run_dual(o, rep);
    else if (fi->parsed()) run_fill(o, rep);
    else if (pa->parsed()) run_pair(o, rep);
    else if (dm->parsed()) run_diamond(o, rep);
    else if (ms->parsed()) run_module_split(o, rep);
    else if (mc->parsed()) run_module_cert(o, rep);
    else if (mn->parsed()) run_module_snf(o, rep);
    else if (me->parsed()) run_module_ext(o, rep);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: bad JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::optional<double> secs;
  if (timing) secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json report = rep.finish(command, secs);

  std::string text;
  if (pretty) {
    std::ostringstream os;
    os << command << "\n";
    for (const auto& [k, v] : report["results"].items())
      if (!v.is_array() || v.size() <= 4) os << "  " << std::left << std::setw(28) << k << v.dump() << "\n";
    for (const auto& [k, v] : report["verified"].items())
      os << "  " << std::left << std::setw(28) << ("check " + k) << (v.get<bool>() ? "ok" : "FAILED") << "\n";
    text = os.str();
  } else {
    text = report.dump() + "\n";
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << out << "\n";
      return 2;
    }
    f << text;
  }
  return rep.ok() ? 0 : 1;
}
