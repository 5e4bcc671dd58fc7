#include <doctest.h>

#include <cstdlib>
#include <set>

#include "gen.hpp"
#include "qhl/chain.hpp"

using namespace qhl;

namespace {

const char* kBuiltins[] = {"grid", "line", "z3", "tube", "F2", "tree3", "bs12"};

Word repeat(int l, int n) { return Word(static_cast<std::size_t>(n), l); }

Word concat(std::initializer_list<Word> parts) {
  Word w;
  for (const auto& p : parts) w.insert(w.end(), p.begin(), p.end());
  return w;
}

// x^k y^k x^-k y^-k
Word square(int k) { return concat({repeat(1, k), repeat(2, k), repeat(-1, k), repeat(-2, k)}); }

// b^-k a b^k a b^-k a^-1 b^k a^-1 in the b^-1 a b = a^2 orientation
Word bs_word(int k) {
  return concat({repeat(-2, k), {1}, repeat(2, k), {1}, repeat(-2, k), {-1}, repeat(2, k), {-1}});
}

// Smallest radius whose ball carries the cycle.
int support_radius(const EquivariantComplex& cx, const Chain& b) {
  for (int R = 0;; ++R)
    if (restrict_ball(cx, R).supports(b)) return R;
}

Chain random_chain(testgen::Gen& g, const EquivariantComplex& cx, const Ball& ball, int d, int terms) {
  Chain x;
  x.dim = d;
  const auto& cells = ball.cells[static_cast<std::size_t>(d)];
  for (int i = 0; i < terms; ++i) {
    const auto& c = cells[static_cast<std::size_t>(g.integer(0, static_cast<long>(cells.size()) - 1))];
    x.add(c.first, c.second, Rat(g.integer(-2, 2)));
  }
  return x;
}

}  // namespace

TEST_CASE("boundary of boundary vanishes on shipped complexes") {
  for (auto name : kBuiltins) {
    auto cx = builtin_complex(name);
    auto rep = validate_complex(cx);
    CHECK_MESSAGE(rep.ok, name << ": " << rep.message);
  }
}

TEST_CASE("sign-flipped boundary is caught with a witness") {
  auto cx = builtin_complex("grid");
  auto terms = cx.boundary_terms(2, 0);
  terms[0].coeff = -terms[0].coeff;
  cx.set_boundary(2, 0, terms);
  auto rep = validate_complex(cx);
  CHECK_FALSE(rep.ok);
  CHECK(rep.dim == 2);
  CHECK_FALSE(rep.witness.empty());
  CHECK(rep.witness == cx.boundary(cx.boundary(cx.cell(2, 0, cx.group().identity()))));
}

TEST_CASE("Fox boundary of a relator cell is the relator loop") {
  for (auto name : {"grid", "tree3", "bs12"}) {
    auto cx = builtin_complex(name);
    auto rels = cx.group().relators();
    REQUIRE(rels.size() == cx.count(2));
    for (std::size_t k = 0; k < rels.size(); ++k)
      CHECK(cx.boundary(cx.cell(2, k, cx.group().identity())) == word_cycle(cx, rels[k]));
  }
  // d(x y x^-1 y^-1)/dx = 1 - y
  auto Z2 = make_group("Z2");
  auto D = fox_derivative(*Z2, {1, 2, -1, -2}, 0);
  CHECK(D.size() == 2);
  CHECK(D[Z2->identity()] == 1);
  CHECK(D[Z2->letter(2)] == -1);
}

TEST_CASE("ball counts") {
  auto line = builtin_complex("line");
  auto b = restrict_ball(line, 2);
  CHECK(b.count(0) == 5);
  CHECK(b.count(1) == 4);
  auto f2 = builtin_complex("F2");
  b = restrict_ball(f2, 2);
  CHECK(b.count(0) == 17);
  CHECK(b.count(1) == 16);
  auto grid = builtin_complex("grid");
  b = restrict_ball(grid, 0);
  CHECK(b.count(0) == 1);
  CHECK(b.count(1) == 0);
  CHECK(b.count(2) == 0);
}

TEST_CASE("grid balls match a coordinate count") {
  auto grid = builtin_complex("grid");
  for (int R = 0; R <= 6; ++R) {
    auto in = [R](long x, long y) { return std::abs(x) + std::abs(y) <= R; };
    std::size_t v = 0, e = 0, f = 0;
    for (long x = -R - 1; x <= R + 1; ++x)
      for (long y = -R - 1; y <= R + 1; ++y) {
        if (!in(x, y)) continue;
        ++v;
        e += in(x + 1, y) + in(x, y + 1);
        f += in(x + 1, y) && in(x, y + 1) && in(x + 1, y + 1);
      }
    auto b = restrict_ball(grid, R);
    CHECK(b.count(0) == v);
    CHECK(b.count(1) == e);
    CHECK(b.count(2) == f);
  }
}

TEST_CASE("chain evaluation") {
  auto tube = builtin_complex("tube");
  const auto& G = tube.group();
  auto a = *tube.find(2, "a");
  Chain x = tube.cell(2, a, G.letter(1)) - tube.cell(2, a, G.identity());
  CHECK(chain_evaluation(tube, x) == std::vector<Rat>{0});
  CHECK(chain_evaluation(tube, tube.cell(2, a, G.evaluate({1, 1, 1}))) == std::vector<Rat>{1});
  auto grid = builtin_complex("grid");
  Chain y = grid.cell(1, 0, grid.group().letter(2), 3) + grid.cell(1, 0, grid.group().letter(-1), 2);
  CHECK(chain_evaluation(grid, y) == std::vector<Rat>{5, 0});
}

TEST_CASE("grid squares fill with k^2 cells in both modes") {
  auto grid = builtin_complex("grid");
  for (int k = 1; k <= 4; ++k) {
    Chain b = word_cycle(grid, square(k));
    auto ball = restrict_ball(grid, 2 * k);
    auto r = filling_volume(grid, ball, b, FillMode::rational);
    auto z = filling_volume(grid, ball, b, FillMode::integral);
    REQUIRE(r);
    REQUIRE(z);
    CHECK(r->volume == k * k);
    CHECK(z->volume == k * k);
    CHECK(grid.boundary(z->chain) == b);
  }
  Chain zero;
  zero.dim = 1;
  auto f = filling_volume(grid, restrict_ball(grid, 1), zero, FillMode::integral);
  REQUIRE(f);
  CHECK(f->volume == 0);
  CHECK_THROWS_AS(filling_volume(grid, restrict_ball(grid, 2), grid.cell(1, 0, grid.group().identity()),
                                 FillMode::rational),
                  std::invalid_argument);
  // the ball is too small to carry the square
  CHECK_THROWS_AS(filling_volume(grid, restrict_ball(grid, 3), word_cycle(grid, square(2)), FillMode::rational),
                  std::invalid_argument);
}

TEST_CASE("rational filling never exceeds integral filling") {
  testgen::Gen g(71);
  for (auto name : {"grid", "z3"}) {
    auto cx = builtin_complex(name);
    auto ball = restrict_ball(cx, 3);
    for (int it = 0; it < 15; ++it) {
      Chain c = random_chain(g, cx, ball, 2, static_cast<int>(g.integer(1, 4)));
      Chain b = cx.boundary(c);
      auto r = filling_volume(cx, ball, b, FillMode::rational);
      auto z = filling_volume(cx, ball, b, FillMode::integral);
      REQUIRE(r);
      REQUIRE(z);
      CHECK(r->volume <= z->volume);
      CHECK(z->volume <= c.volume());
    }
  }
}

TEST_CASE("BS(1,2) words need exponentially many cells") {
  auto cx = builtin_complex("bs12");
  Rat prev = 0;
  for (int k = 1; k <= 3; ++k) {
    Word w = bs_word(k);
    CHECK(w.size() == static_cast<std::size_t>(4 * k + 4));
    REQUIRE(cx.group().evaluate(w) == cx.group().identity());
    Chain b = word_cycle(cx, w);
    int R = support_radius(cx, b);
    CHECK(R == 2 * k + 1);
    auto z = filling_volume(cx, restrict_ball(cx, R), b, FillMode::integral);
    auto z1 = filling_volume(cx, restrict_ball(cx, R + 1), b, FillMode::integral);
    auto r = filling_volume(cx, restrict_ball(cx, R), b, FillMode::rational);
    REQUIRE(z);
    REQUIRE(z1);
    REQUIRE(r);
    CHECK(cx.boundary(z->chain) == b);
    // the second homology of the cover vanishes, so the filling is forced
    CHECK(r->volume == z->volume);
    CHECK(z1->volume == z->volume);
    CHECK(z->volume >= Rat(1L << k));
    CHECK(z->volume > prev);
    CHECK(z->volume == Rat((2L << k) - 2));
    prev = z->volume;
  }
}

TEST_CASE("tube pairing counts the tube length") {
  auto tube = builtin_complex("tube");
  const auto& G = tube.group();
  auto a = *tube.find(2, "a");
  auto w = TwistedCocycle::untwisted(3, {1});
  auto tw = w;
  tw.rho = {QMatrix::from_rows({{-1}})};
  for (int k = 1; k <= 50; ++k) {
    Chain b = tube.cell(2, a, G.evaluate(repeat(1, k))) - tube.cell(2, a, G.identity());
    CHECK(b.volume() == 2);
    auto ball = restrict_ball(tube, k);
    auto p = filling_pairing(tube, ball, b, w);
    CHECK(p.value == QVec{Rat(k)});
    CHECK(p.first.volume == k);
    // sum of (-1)^i over i < k
    CHECK(filling_pairing(tube, ball, b, tw).value == QVec{Rat(k % 2)});
  }
}

TEST_CASE("pairing of a single cell boundary is the cocycle value") {
  auto grid = builtin_complex("grid");
  const auto& G = grid.group();
  auto w = TwistedCocycle::untwisted(2, {Rat(7, 3)});
  for (const Word& at : {Word{}, Word{1, 1, -2}, Word{2, 2}}) {
    Elem g = G.evaluate(at);
    Chain b = grid.boundary(grid.cell(2, 0, g));
    auto p = filling_pairing(grid, restrict_ball(grid, 5), b, w);
    CHECK(p.value == QVec{Rat(7, 3)});
  }
  auto z3 = builtin_complex("z3");
  auto w3 = TwistedCocycle::untwisted(2, {2, -1, 5});
  for (std::size_t i = 0; i < 3; ++i) {
    Chain b = z3.boundary(z3.cell(2, i, z3.group().identity()));
    CHECK(filling_pairing(z3, restrict_ball(z3, 3), b, w3).value == w3.values[i]);
  }
}

TEST_CASE("pairings do not depend on the filling; they bound the volume") {
  testgen::Gen g(404);
  auto z3 = builtin_complex("z3");
  auto ball = restrict_ball(z3, 3);
  int instances = 0, distinct = 0;
  while (instances < 20) {
    Chain c = random_chain(g, z3, ball, 2, static_cast<int>(g.integer(2, 5)));
    Chain b = z3.boundary(c);
    if (b.empty()) continue;
    std::vector<Rat> vals;
    for (int i = 0; i < 3; ++i) vals.push_back(g.rat(4, 3));
    auto w = TwistedCocycle::untwisted(2, vals);
    auto p = filling_pairing(z3, ball, b, w);
    // independent route: pair with the chain the cycle was built from
    CHECK(p.value == evaluate_cochain(z3, w, c));
    CHECK(evaluate_cochain(z3, w, p.second.chain) == p.value);
    Rat W = 0;
    for (const auto& v : vals) W = std::max(W, Rat(abs(v)));
    if (W > 0) CHECK(p.first.volume >= abs(p.value[0]) / W);
    distinct += p.distinct_fillings;
    ++instances;
  }
  CHECK(distinct > 0);
}

TEST_CASE("twisted pairing rejects a non-cocycle and a nonzero evaluation") {
  auto z3 = builtin_complex("z3");
  auto ball = restrict_ball(z3, 3);
  auto w = TwistedCocycle::untwisted(2, {0, 0, 1});
  w.rho = {QMatrix::from_rows({{2}}), QMatrix::identity(1), QMatrix::identity(1)};
  Chain b = z3.boundary(z3.cell(2, 2, z3.group().identity()));
  CHECK_THROWS_AS(filling_pairing(z3, ball, b, w), std::invalid_argument);
  auto tube = builtin_complex("tube");
  Chain a = tube.cell(2, 0, tube.group().identity());
  CHECK_THROWS_AS(filling_pairing(tube, restrict_ball(tube, 2), a, TwistedCocycle::untwisted(3, {1})),
                  std::invalid_argument);
}

TEST_CASE("filling volume is translation invariant") {
  testgen::Gen g(8);
  auto grid = builtin_complex("grid");
  const auto& G = grid.group();
  auto big = restrict_ball(grid, 9);
  for (int it = 0; it < 10; ++it) {
    Chain c = random_chain(g, grid, restrict_ball(grid, 2), 2, 3);
    Chain b = grid.boundary(c);
    Elem t = G.evaluate({static_cast<int>(g.integer(1, 2)) * (g.coin() ? 1 : -1), 2, 2});
    auto f = filling_volume(grid, big, b, FillMode::integral);
    auto ft = filling_volume(grid, big, grid.translate(t, b), FillMode::integral);
    REQUIRE(f);
    REQUIRE(ft);
    CHECK(f->volume == ft->volume);
  }
}

TEST_CASE("normalizing the evaluation") {
  auto grid = builtin_complex("grid");
  const auto& G = grid.group();
  Chain b = grid.boundary(grid.cell(2, 0, G.identity())) - grid.boundary(grid.cell(2, 0, G.evaluate({1, 1, 1, 1})));
  auto n = normalize_zero_evaluation(grid, b);
  CHECK(n.chain == b);
  CHECK(n.correction.empty());
  CHECK(n.constant == 1);
  Chain zero;
  zero.dim = 1;
  CHECK(normalize_zero_evaluation(grid, zero).chain.empty());
  // tree3: each relator cell x^2 evaluates to twice its edge in the base
  auto tree = builtin_complex("tree3");
  const auto& T = tree.group();
  Chain e = tree.cell(1, 0, T.identity()) + tree.cell(1, 1, T.identity());
  auto m = normalize_zero_evaluation(tree, e);
  CHECK(chain_evaluation(tree, m.chain) == std::vector<Rat>{0, 0, 0});
  CHECK(m.chain == e - tree.boundary(m.correction));
  CHECK(m.correction.volume() == 1);
  CHECK(m.constant == 1);
  // the tube 2-cell is a cycle but its evaluation is not a base boundary
  auto tube = builtin_complex("tube");
  CHECK_THROWS_AS(normalize_zero_evaluation(tube, tube.cell(2, 0, tube.group().identity())), std::invalid_argument);
}

TEST_CASE("directed filling functions") {
  auto grid = builtin_complex("grid");
  std::vector<Chain> squares;
  for (int k = 1; k <= 4; ++k) squares.push_back(word_cycle(grid, square(k)));
  auto rows = directed_fv(grid, restrict_ball(grid, 8), TwistedCocycle::untwisted(2, {1}), squares);
  REQUIRE(rows.size() == 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(rows[static_cast<std::size_t>(k - 1)].volume == 4 * k);
    CHECK(rows[static_cast<std::size_t>(k - 1)].max_pairing == k * k);
  }
  auto tube = builtin_complex("tube");
  const auto& G = tube.group();
  std::vector<Chain> fam;
  for (int k = 1; k <= 6; ++k) fam.push_back(tube.cell(2, 0, G.evaluate(repeat(1, k))) - tube.cell(2, 0, G.identity()));
  auto w = TwistedCocycle::untwisted(3, {1});
  auto trows = directed_fv(tube, restrict_ball(tube, 6), w, fam);
  REQUIRE(trows.size() == 1);
  CHECK(trows[0].volume == 2);
  CHECK(trows[0].max_pairing == 6);
  CHECK(trows[0].cycles == 6);
  auto ex = directed_fv_exhaustive(tube, restrict_ball(tube, 3), w, 2, 2);
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].cycles == 0);
  CHECK(ex[1].volume == 2);
  // t^j a - a and its negative for 0 < |j| <= 3
  CHECK(ex[1].cycles == 12);
  CHECK(ex[1].max_pairing == 3);
}

TEST_CASE("LP views of balls") {
  auto grid = builtin_complex("grid");
  for (int R : {3, 5}) {
    auto fb = to_finite_ball(grid, restrict_ball(grid, R), 1, Direction::cochain);
    fb.validate();
    std::vector<QVec> omega(fb.n_constraint(), QVec{1});
    std::vector<PolyhedralNorm> norms(fb.n_unknown(), PolyhedralNorm::absolute());
    auto cert = bounded_primitive_or_violator(fb, omega, norms);
    CHECK(verify_certificate(fb, omega, norms, cert));
    CHECK(cert.kind == (R == 3 ? DualityCertificate::primitive : DualityCertificate::violator));
  }
  auto line = builtin_complex("line");
  for (int R = 1; R <= 6; ++R) {
    auto fb = to_finite_ball(line, restrict_ball(line, R), 0, Direction::cochain);
    auto K = linf_min_bound(fb, std::vector<QVec>(fb.n_constraint(), QVec{1}));
    REQUIRE(K);
    CHECK(*K == R);
  }
  // the chain view of the line ball keeps the two endpoints off the constraint list
  auto chain_line = to_finite_ball(line, restrict_ball(line, 3), 0, Direction::chain);
  CHECK(chain_line.n_constraint() == 5);
  auto tree = make_group("tree3");
  for (int R = 1; R <= 5; ++R) {
    auto fb = cayley_graph_ball(*tree, R);
    CHECK(fb.n_upper() + 1 == fb.n_lower());
    auto K = linf_min_bound(fb, std::vector<QVec>(fb.n_constraint(), QVec{1}));
    REQUIRE(K);
    CHECK(*K <= 1);
  }
}

TEST_CASE("text formats round trip") {
  for (auto name : kBuiltins) {
    auto cx = builtin_complex(name);
    auto back = parse_complex(format_complex(cx));
    REQUIRE(back.top_dim() == cx.top_dim());
    for (int d = 0; d <= cx.top_dim(); ++d) {
      REQUIRE(back.count(d) == cx.count(d));
      for (std::size_t i = 0; i < cx.count(d); ++i) {
        CHECK(back.name(d, i) == cx.name(d, i));
        auto c = cx.cell(d, i, cx.group().identity());
        CHECK(back.boundary(c) == cx.boundary(c));
        CHECK(back.closure_vertices(d, i) == cx.closure_vertices(d, i));
      }
    }
  }
  auto grid = builtin_complex("grid");
  Chain b = word_cycle(grid, square(2));
  CHECK(parse_chain(grid, 1, format_chain(grid, b)) == b);
  CHECK(parse_chain(grid, 1, "# comment\n(x, y^2 x) 3/2\n(y, 1)\n").volume() == Rat(5, 2));
  CHECK_THROWS_AS(parse_chain(grid, 1, "(q, 1) 1"), std::invalid_argument);
  auto pres = parse_complex("group BS12\npresentation\n");
  CHECK(validate_complex(pres).ok);
  CHECK(pres.count(2) == 1);
}
