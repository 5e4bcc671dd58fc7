#include <doctest.h>

#include "gen.hpp"
#include "qhl/qz.hpp"

using namespace qhl;

namespace {

LaurentPoly L(const char* s) { return parse_laurent(s); }

LaurentPoly random_laurent(testgen::Gen& g, long max_span = 2) {
  long span = g.integer(-1, max_span);
  if (span < 0) return {};
  std::vector<Rat> c;
  for (long i = 0; i <= span; ++i) c.push_back(Rat(g.integer(-2, 2)));
  return {QPoly(c), g.integer(-1, 1)};
}

LMatrix random_lmatrix(testgen::Gen& g, std::size_t r, std::size_t c) {
  LMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_laurent(g);
  return m;
}

// gcd of nonzero polynomials, normalized; independent of the Smith reduction
LaurentPoly gcd_oracle(const std::vector<LaurentPoly>& xs) {
  QPoly g;
  for (const auto& x : xs)
    if (!x.is_zero()) g = poly_gcd(g, x.normalized().poly());
  return g.is_zero() ? LaurentPoly() : LaurentPoly(g);
}

LMatrix one(const LaurentPoly& p) {
  LMatrix m(1, 1);
  m(0, 0) = p;
  return m;
}

}  // namespace

TEST_CASE("Laurent arithmetic and text form") {
  CHECK(L("t^-1 + 2 - 3/2*t^2").to_string() == "t^-1 + 2 - 3/2*t^2");
  CHECK(L("t - 1") * L("t + 1") == L("t^2 - 1"));
  CHECK(L("t^-2") * L("t^2") == LaurentPoly(1));
  CHECK(L("0").is_zero());
  CHECK(L("-t").to_string() == "-t");
  CHECK(L("t^3 - t").low() == 1);
  CHECK(L("t^3 - t").span() == 2);
  CHECK(L("2*t^-3").is_unit());
  CHECK(L("2*t^-3").unit_inverse() == L("1/2*t^3"));
  CHECK_THROWS(L("1 + t").unit_inverse());
  CHECK(L("3*t^2 - 3*t^4").normalized() == L("1 - t^2").scaled(-1));
  testgen::Gen g(5);
  for (int it = 0; it < 200; ++it) {
    auto a = random_laurent(g, 4), b = random_laurent(g, 3);
    CHECK(parse_laurent(a.to_string()) == a);
    CHECK((a + b) - b == a);
    CHECK(a * b == b * a);
    if (b.is_zero()) continue;
    auto [q, r] = a.divmod(b);
    CHECK(q * b + r == a);
    CHECK(r.span() < b.span());
    CHECK((a * b).exact_div(b) == a);
  }
}

TEST_CASE("Smith form over the Laurent ring") {
  LMatrix M = parse_lmatrix({{"t - 1", "t^2 - 1"}, {"0", "t - 1"}});
  auto S = laurent_snf(M);
  CHECK(S.U * M * S.V == S.D);
  REQUIRE(S.rank == 2);
  CHECK(S.invariants[0] == L("t - 1").normalized());
  // det M = (t-1)^2, so the second factor is t-1 as well
  CHECK(S.invariants[1] == L("t - 1").normalized());
  CHECK(determinant(S.U).is_unit());
  CHECK(determinant(S.V).is_unit());

  LMatrix diag = parse_lmatrix({{"2*t^3 - 2*t^2", "0"}, {"0", "t^2 - 2*t + 1"}});
  auto Sd = laurent_snf(diag);
  CHECK(Sd.invariants[0] == L("t - 1").normalized());
  CHECK(Sd.invariants[1] == (L("t - 1") * L("t - 1")).normalized());

  auto Z = laurent_snf(LMatrix(2, 3));
  CHECK(Z.rank == 0);
  CHECK(Z.D.is_zero());
  CHECK(laurent_snf(LMatrix(0, 2)).rank == 0);

  testgen::Gen g(17);
  for (int it = 0; it < 120; ++it) {
    std::size_t r = static_cast<std::size_t>(g.integer(1, 3)), c = static_cast<std::size_t>(g.integer(1, 3));
    LMatrix A = random_lmatrix(g, r, c);
    auto T = laurent_snf(A);
    CHECK(T.U * A * T.V == T.D);
    CHECK(determinant(T.U).is_unit());
    CHECK(determinant(T.V).is_unit());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) CHECK(T.D(i, j).is_zero());
    for (std::size_t i = 0; i + 1 < T.rank; ++i) CHECK(T.invariants[i + 1].exact_div(T.invariants[i]).has_value());
    // first invariant factor is the gcd of all entries
    std::vector<LaurentPoly> entries;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) entries.push_back(A(i, j));
    if (T.rank > 0) CHECK(T.invariants[0] == gcd_oracle(entries));
    // product of invariants is the determinant up to a unit
    if (r == c) {
      auto d = determinant(A);
      if (T.rank == r) {
        LaurentPoly prod = 1;
        for (const auto& x : T.invariants) prod = prod * x;
        CHECK(prod == d.normalized());
      } else {
        CHECK(d.is_zero());
      }
    }
  }
}

TEST_CASE("solving over the Laurent ring") {
  LMatrix A = parse_lmatrix({{"t - 1", "0"}, {"0", "t + 1"}});
  auto x = laurent_solve(A, {L("t^2 - 1"), L("t^-1 + 1")});
  REQUIRE(x);
  CHECK((*x)[0] == L("t + 1"));
  CHECK((*x)[1] == L("t^-1"));
  CHECK_FALSE(laurent_solve(A, {L("1"), L("0")}));
  testgen::Gen g(23);
  for (int it = 0; it < 60; ++it) {
    LMatrix B = random_lmatrix(g, 2, 3);
    std::vector<LaurentPoly> y{random_laurent(g), random_laurent(g), random_laurent(g)};
    std::vector<LaurentPoly> b(2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) b[i] = b[i] + B(i, j) * y[j];
    auto s = laurent_solve(B, b);
    REQUIRE(s);
    for (std::size_t i = 0; i < 2; ++i) {
      LaurentPoly v;
      for (std::size_t j = 0; j < 3; ++j) v = v + B(i, j) * (*s)[j];
      CHECK(v == b[i]);
    }
  }
}

TEST_CASE("modules: invariant factors and Ext") {
  auto p = L("t - 1");
  auto R1 = QZModule::cyclic(p);
  auto R2 = QZModule::cyclic(p * p);
  CHECK(invariant_factors(R1) == std::vector<LaurentPoly>{p.normalized()});
  CHECK(invariant_factors(QZModule::free(2)).size() == 2);
  CHECK(invariant_factors(QZModule::cyclic(L("3*t^5"))).empty());

  CHECK(ext_module(QZModule::free(3), R1).gens() == 0);
  CHECK(isomorphic(ext_module(R1, R1), R1));
  CHECK(isomorphic(ext_module(R2, R1), R1));
  CHECK(isomorphic(ext_module(R2, R2), R2));
  CHECK(isomorphic(ext_module(R1, QZModule::free(1)), R1));
  // R/(t-1) + R/(t+1) is cyclic on (t^2 - 1)
  CHECK(isomorphic(QZModule::direct_sum(R1, QZModule::cyclic(L("t + 1"))), QZModule::cyclic(L("t^2 - 1"))));

  // cyclic case against N/pN = R/gcd(p, n)
  testgen::Gen g(41);
  const char* pool[] = {"t - 1", "t + 1", "t^2 + 1", "t^2 - t + 1", "2*t - 1", "t^2 - 6/5*t + 1"};
  for (int it = 0; it < 40; ++it) {
    LaurentPoly a = 1, b = 1;
    for (int k = 0; k < 3; ++k) {
      if (g.coin()) a = a * L(pool[g.integer(0, 5)]);
      if (g.coin()) b = b * L(pool[g.integer(0, 5)]);
    }
    a = a.shifted(g.integer(-2, 2));
    auto E = ext_module(QZModule::cyclic(a), QZModule::cyclic(b));
    LaurentPoly gd = gcd_oracle({a, b});
    if (gd.is_unit())
      CHECK(invariant_factors(E).empty());
    else
      CHECK(isomorphic(E, QZModule::cyclic(gd)));
  }
}

TEST_CASE("splitting test") {
  auto p = L("t - 1");
  // (t-1) M inside M = R/(t-1)^2, generated by the class of t-1
  auto A = QZModule::cyclic(p);
  auto M = QZModule::cyclic(p * p);
  auto r = splitting_test(A, M, one(p));
  CHECK_FALSE(r.split);
  CHECK_FALSE(r.certificate.empty());

  auto S = QZModule::direct_sum(A, A);
  LMatrix first(2, 1);
  first(0, 0) = 1;
  auto r2 = splitting_test(A, S, first);
  REQUIRE(r2.split);
  CHECK(verify_retraction(A, S, first, r2.retraction));

  auto r0 = splitting_test(QZModule::free(0), M, LMatrix(1, 0));
  CHECK(r0.split);
  CHECK(r0.retraction.rows() == 0);

  // x -> x is not a map R/(t-1) -> R/(t-1)^2
  CHECK_THROWS_AS(splitting_test(A, M, one(1)), std::invalid_argument);

  // R/(a) -> R/(ab) by multiplication with b splits iff gcd(a, b) = 1
  const char* pool[] = {"t - 1", "t + 1", "t^2 + 1", "t^2 - t + 1", "3*t - 1"};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int e = 1; e <= 2; ++e) {
        auto a = L(pool[i]);
        auto b = e == 1 ? L(pool[j]) : L(pool[j]) * L(pool[j]);
        auto res = splitting_test(QZModule::cyclic(a), QZModule::cyclic(a * b), one(b));
        bool coprime = gcd_oracle({a, b}).is_unit();
        CHECK(res.split == coprime);
        if (res.split) CHECK(verify_retraction(QZModule::cyclic(a), QZModule::cyclic(a * b), one(b), res.retraction));
        else CHECK_FALSE(res.certificate.empty());
      }
}

TEST_CASE("lifting homomorphisms") {
  // K = {v} inside the edge v -- w
  FreeComplex X;
  X.names = {{"v", "w"}, {"e"}};
  X.d = {LMatrix(0, 2), parse_lmatrix({{"-1"}, {"1"}})};
  auto r = lifting_homomorphism(X, {{0}}, 1);
  CHECK(r.verified);
  CHECK(r.j[0](0, 1) == LaurentPoly(1));
  CHECK(r.u[0](0, 1) == LaurentPoly(-1));
  CHECK(r.u[0](0, 0).is_zero());
  CHECK(r.j[1].rows() == 0);

  // the tube: v, e with de = (t-1)v, a, c with dc = (t-1)a; X adds a2 and c' with dc' = t a - a2
  FreeComplex T;
  T.names = {{"v"}, {"e"}, {"a", "a2"}, {"c", "cp"}};
  T.d = {LMatrix(0, 1), parse_lmatrix({{"0"}}), LMatrix(1, 2), parse_lmatrix({{"t - 1", "t"}, {"0", "-1"}})};
  REQUIRE(T.is_complex());
  std::vector<std::vector<std::size_t>> K{{0}, {0}, {0}, {0}};
  auto rt = lifting_homomorphism(T, K, 3);
  CHECK(rt.verified);
  CHECK(rt.j[2](0, 1) == L("t"));
  // u lands on the added cell c'
  for (std::size_t e = 0; e < 2; ++e) CHECK(rt.u[2](0, e).is_zero());
  CHECK_FALSE(rt.u[2](1, 1).is_zero());

  // K = X
  auto id = lifting_homomorphism(T, {{0}, {0}, {0, 1}, {0, 1}}, 3);
  for (int k = 0; k <= 3; ++k) {
    CHECK(id.j[static_cast<std::size_t>(k)] == LMatrix::identity(T.rank(k)));
    CHECK(id.u[static_cast<std::size_t>(k)].is_zero());
  }

  // a2 with no c': the quotient has H_2
  FreeComplex bad = T;
  bad.names[3] = {"c"};
  bad.d[3] = parse_lmatrix({{"t - 1"}, {"0"}});
  CHECK_THROWS_AS(lifting_homomorphism(bad, {{0}, {0}, {0}, {0}}, 2), std::invalid_argument);
  CHECK_NOTHROW(lifting_homomorphism(bad, {{0}, {0}, {0}, {0}}, 1));
  // not closed: c without a
  CHECK_THROWS_AS(lifting_homomorphism(T, {{0}, {0}, {}, {0}}, 3), std::invalid_argument);
}

TEST_CASE("certificate chains for q = t - 1") {
  QPoly q = QPoly::linear_root(1);
  Rat G0;
  for (int s = 1; s <= 12; ++s) {
    auto C = certificate_chains(q, s);
    CHECK(C.ok());
    CHECK(C.E.is_zero());
    CHECK(C.pairing == QVec{Rat(s)});
    CHECK(C.pairing_direct == QVec{Rat(s)});
    // boundary is t^s - 1
    CHECK(C.boundary == L("t - 1") * C.P);
    CHECK(C.boundary == LaurentPoly::monomial(1, s) - LaurentPoly(1));
    if (s == 1) G0 = C.G_volume;
    CHECK(C.G_volume == G0);
    CHECK(C.pairing_norm == Rat(s * s) * C.H(0, 0));
  }
  auto C5 = certificate_chains(q, 5);
  CHECK(C5.pairing == QVec{5});
}

TEST_CASE("certificate chains for elliptic quadratics") {
  const char* qs[] = {"1 -6/5 1", "1 0 1", "1 1 1", "1 2/3 1", "1 -1 1"};
  for (const char* qc : qs) {
    QPoly q = parse_poly_coeffs(qc);
    auto first = certificate_chains(q, 2);
    for (int s = 2; s <= 14; ++s) {
      auto C = certificate_chains(q, s);
      CHECK(C.ok());
      CHECK(C.split_exact);
      CHECK(C.E.is_zero());
      CHECK(C.F_bounded);
      CHECK(C.G_volume == first.G_volume);
      CHECK(C.G.shifted(-s) == first.G.shifted(-2));
      CHECK(C.A.transpose() * C.H * C.A == C.H);
      QVec mu{1, 0};
      CHECK(C.pairing_norm == Rat(s * s) * dot(mu, C.H * mu));
      // independent check: P_s == s t^{s-1} mod q
      REQUIRE(C.P.low() >= 0);
      auto Pq = (C.P.poly() * QPoly::x_power(static_cast<std::size_t>(C.P.low()))).divmod(q).second;
      auto target = (QPoly::x_power(static_cast<std::size_t>(s - 1)).scaled(s)).divmod(q).second;
      CHECK(LaurentPoly(Pq) == LaurentPoly(target));
    }
  }
  auto C6 = certificate_chains(parse_poly_coeffs("1 -6/5 1"), 6, {Rat(1, 2), Rat(-3)});
  CHECK(C6.ok());
  CHECK(C6.F.high() <= 2);
  CHECK(C6.F.low() >= 0);
}

TEST_CASE("certificate hypotheses") {
  CHECK_THROWS_AS(certificate_chains(QPoly::linear_root(2), 3), std::invalid_argument);
  CHECK_THROWS_AS(certificate_chains(parse_poly_coeffs("1 -2 1"), 3), std::invalid_argument);
  CHECK_THROWS_AS(certificate_chains(parse_poly_coeffs("0 1"), 3), std::invalid_argument);
  CHECK_THROWS_AS(certificate_chains(parse_poly_coeffs("1 0 1"), 1), std::invalid_argument);
  CHECK_THROWS_AS(certificate_chains(parse_poly_coeffs("1 -3 1"), 4), std::invalid_argument);
  auto H = invariant_form(companion_matrix(parse_poly_coeffs("1 0 0 1")));
  REQUIRE(H);
}
