#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhl/chain.hpp"
#include "qhl/diamond.hpp"
#include "qhl/lp.hpp"
#include "qhl/monodromy.hpp"
#include "qhl/qz.hpp"

namespace py = pybind11;
using namespace qhl;

namespace {

// Rationals cross the boundary as fractions.Fraction; inputs may be int, str or Fraction.
Rat to_rat(const py::handle& h) { return parse_rat(py::str(h).cast<std::string>()); }

py::object from_rat(const Rat& r) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(to_string(r));
}

QMatrix to_matrix(const std::vector<std::vector<py::object>>& rows) {
  std::vector<std::vector<Rat>> r;
  for (const auto& row : rows) {
    std::vector<Rat> v;
    for (const auto& x : row) v.push_back(to_rat(x));
    r.push_back(std::move(v));
  }
  return QMatrix::from_rows(r);
}

QVec to_vec(const std::vector<py::object>& xs) {
  QVec v;
  for (const auto& x : xs) v.push_back(to_rat(x));
  return v;
}

py::list from_vec(const QVec& v) {
  py::list out;
  for (const auto& x : v) out.append(from_rat(x));
  return out;
}

LMatrix to_lmatrix(const std::vector<std::vector<std::string>>& rows) { return parse_lmatrix(rows); }

std::vector<std::vector<std::string>> from_lmatrix(const LMatrix& m) {
  std::vector<std::vector<std::string>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(m(i, j).to_string());
  return out;
}

QZModule to_module(const std::vector<std::vector<std::string>>& rows, std::size_t gens) {
  LMatrix m = to_lmatrix(rows);
  if (m.rows() == 0) m = LMatrix(gens, 0);
  return {m};
}

}  // namespace

PYBIND11_MODULE(_qhl, m) {
  m.doc() = "exact distortion, filling and module computations";

  m.def(
      "is_elliptic",
      [](const std::vector<std::vector<py::object>>& rows) {
        auto v = is_elliptic(MonodromySpace(to_matrix(rows)));
        return py::make_tuple(v.elliptic, v.reason);
      },
      py::arg("matrix"), "(elliptic, reason) for a rational matrix");

  m.def(
      "min_volume",
      [](const std::vector<std::vector<py::object>>& rows, const std::vector<py::object>& target, long long V,
         long long S) -> py::object {
        MonodromySpace sp(to_matrix(rows));
        auto r = achievable_min_volume(sp, to_vec(target), V, S);
        if (!r) return py::none();
        return py::make_tuple(r->volume, r->witness.canonical().to_string());
      },
      py::arg("matrix"), py::arg("target"), py::arg("max_volume"), py::arg("window"));

  m.def(
      "distortion_profile",
      [](const std::vector<std::vector<py::object>>& rows, const LatVec& alpha, long long kmax, long long mmax,
         long long S) {
        MonodromySpace sp(to_matrix(rows));
        py::list out;
        for (const auto& r : distortion_profile(sp, alpha, kmax, mmax, S)) {
          py::dict d;
          d["k"] = r.k;
          d["max_multiple"] = r.max_multiple;
          d["saturated"] = r.saturated;
          d["witness"] = r.witness.canonical().to_string();
          out.append(d);
        }
        return out;
      },
      py::arg("matrix"), py::arg("alpha"), py::arg("kmax"), py::arg("mmax"), py::arg("window"));

  m.def(
      "greedy_decompose",
      [](const std::vector<std::vector<py::object>>& rows, const LatVec& p, const py::object& M) {
        MonodromySpace sp(to_matrix(rows));
        BigInt big(py::str(M).cast<std::string>());
        auto r = greedy_decompose(sp, p, big);
        QVec want = sp.lattice().point(p);
        for (auto& x : want) x *= Rat(big);
        py::dict d;
        d["expression"] = r.expr.canonical().to_string();
        d["terms"] = r.expr.terms.size();
        d["verified"] = evaluate(sp, r.expr) == want;
        return d;
      },
      py::arg("matrix"), py::arg("p"), py::arg("M"));

  m.def(
      "simplex",
      [](const std::vector<std::vector<py::object>>& A, const std::vector<py::object>& b,
         const std::vector<py::object>& c) {
        StandardLP lp{to_matrix(A), to_vec(b), to_vec(c)};
        auto r = simplex_solve(lp);
        py::dict d;
        d["status"] = to_string(r.status);
        if (r.status == LPStatus::optimal) {
          d["optimum"] = from_rat(r.optimum);
          d["primal"] = from_vec(r.primal);
          d["dual"] = from_vec(r.dual);
          d["certified"] = certificates_hold(lp, r);
        }
        return d;
      },
      py::arg("A"), py::arg("b"), py::arg("c"), "maximize c.x subject to A x <= b, x >= 0");

  m.def("validate_builtin", [](const std::string& name) { return validate_complex(builtin_complex(name)).ok; });

  m.def(
      "filling_volume",
      [](const std::string& complex, const std::string& word, bool integral, int radius) -> py::object {
        auto cx = builtin_complex(complex);
        Chain b = word_cycle(cx, cx.group().parse_word(word));
        if (radius < 0)
          for (radius = 0; !restrict_ball(cx, radius).supports(b); ++radius) {
          }
        auto f = filling_volume(cx, restrict_ball(cx, radius), b, integral ? FillMode::integral : FillMode::rational);
        if (!f) return py::none();
        return from_rat(f->volume);
      },
      py::arg("complex"), py::arg("word"), py::arg("integral") = true, py::arg("radius") = -1);

  m.def(
      "pairing",
      [](const std::string& complex, const std::string& chain, const std::vector<py::object>& omega, int radius) {
        auto cx = builtin_complex(complex);
        int dim = cx.top_dim() - 1;
        std::string text = chain;
        for (auto& ch : text)
          if (ch == ';') ch = '\n';
        Chain b = parse_chain(cx, dim, text);
        QVec w = to_vec(omega);
        auto cocycle = TwistedCocycle::untwisted(dim + 1, std::vector<Rat>(w.begin(), w.end()));
        if (radius < 0)
          for (radius = 0; !restrict_ball(cx, radius).supports(b); ++radius) {
          }
        return from_vec(filling_pairing(cx, restrict_ball(cx, radius), b, cocycle).value);
      },
      py::arg("complex"), py::arg("chain"), py::arg("omega"), py::arg("radius") = -1);

  m.def(
      "verify_tau",
      [](int n, int k) {
        auto r = verify_tau(DiamondComplex(n), k);
        py::dict d;
        d["K"] = from_rat(r.K);
        d["boundary_volume"] = from_rat(r.boundary_volume);
        d["rho_diff_cells"] = from_rat(r.rho_diff);
        d["K_ok"] = r.K_ok;
        d["boundary_ok"] = r.boundary_ok;
        d["rho_ok"] = r.rho_ok;
        d["violations"] = r.violations();
        return d;
      },
      py::arg("n"), py::arg("k"));

  m.def(
      "laurent_snf",
      [](const std::vector<std::vector<std::string>>& rows) {
        LMatrix M = to_lmatrix(rows);
        auto S = laurent_snf(M);
        std::vector<std::string> inv;
        for (const auto& p : S.invariants) inv.push_back(p.to_string());
        return py::make_tuple(inv, from_lmatrix(S.U), from_lmatrix(S.V), S.U * M * S.V == S.D);
      },
      py::arg("matrix"), "(invariants, U, V, verified) with U M V diagonal");

  m.def(
      "splitting_test",
      [](const std::vector<std::vector<std::string>>& A, const std::vector<std::vector<std::string>>& M,
         const std::vector<std::vector<std::string>>& F, std::size_t a_gens) {
        QZModule mA = to_module(A, a_gens), mM = to_module(M, 0);
        LMatrix map = F.empty() ? LMatrix(mM.gens(), mA.gens()) : to_lmatrix(F);
        auto r = splitting_test(mA, mM, map);
        return py::make_tuple(r.split, r.split ? py::cast(from_lmatrix(r.retraction)) : py::cast(r.certificate));
      },
      py::arg("A"), py::arg("M"), py::arg("map"), py::arg("a_gens") = 0,
      "(split, retraction or infeasibility certificate); relations are matrix columns");

  m.def(
      "certificate_chains",
      [](const std::vector<py::object>& q, int s, const std::vector<py::object>& mu) {
        auto C = certificate_chains(QPoly(to_vec(q)), s, to_vec(mu));
        py::dict d;
        d["P"] = C.P.to_string();
        d["E"] = C.E.to_string();
        d["F"] = C.F.to_string();
        d["G"] = C.G.to_string();
        d["G_volume"] = from_rat(C.G_volume);
        d["pairing"] = from_vec(C.pairing);
        d["ok"] = C.ok();
        return d;
      },
      py::arg("q"), py::arg("s"), py::arg("mu") = std::vector<py::object>{},
      "q as coefficients, lowest degree first");
}
