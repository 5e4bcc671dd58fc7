#include <doctest.h>

#include "gen.hpp"
#include "qhl/exact.hpp"
#include "qhl/group.hpp"

using namespace qhl;

namespace {

Word random_word(testgen::Gen& g, const GroupOracle& G, int len) {
  Word w;
  for (int i = 0; i < len; ++i) {
    int l = static_cast<int>(g.integer(1, static_cast<long>(G.rank())));
    w.push_back(g.coin() ? l : -l);
  }
  return w;
}

// Product of random conjugates of relators: always the identity.
Word random_trivial(testgen::Gen& g, const GroupOracle& G, int pieces) {
  Word out;
  auto rels = G.relators();
  if (rels.empty()) rels.push_back({1, -1});
  for (int i = 0; i < pieces; ++i) {
    Word c = random_word(g, G, static_cast<int>(g.integer(0, 3)));
    Word r = rels[static_cast<std::size_t>(g.integer(0, static_cast<long>(rels.size()) - 1))];
    if (g.coin()) r = inverse_word(r);
    out.insert(out.end(), c.begin(), c.end());
    out.insert(out.end(), r.begin(), r.end());
    Word ci = inverse_word(c);
    out.insert(out.end(), ci.begin(), ci.end());
  }
  return out;
}

// Affine image: a -> x + 1, every stable letter -> x / 2.
QMatrix affine_image(const Word& w, int a_letter = 1) {
  QMatrix A = QMatrix::from_rows({{1, 1}, {0, 1}});
  QMatrix S = QMatrix::from_rows({{Rat(1, 2), 0}, {0, 1}});
  QMatrix m = QMatrix::identity(2);
  for (int l : w) {
    QMatrix x = std::abs(l) == a_letter ? A : S;
    m = m * (l > 0 ? x : x.inverse());
  }
  return m;
}

// Diamond level n >= 2 oracle: affine image plus free reduction of each level.
std::pair<QMatrix, std::vector<Word>> diamond_oracle(const Word& w, int n) {
  std::vector<Word> levels(static_cast<std::size_t>(n));
  for (int l : w) {
    int g = std::abs(l);
    if (g == 1) continue;
    levels[static_cast<std::size_t>(g / 2 - 1)].push_back(l);
  }
  for (auto& v : levels) v = free_reduce(v);
  return {affine_image(w), levels};
}

// Direct Britton reduction on the word for level 1: letters a = 1, b = 2, c = 3.
bool britton_trivial(Word w) {
  for (;;) {
    w = free_reduce(w);
    bool changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      if (std::abs(w[i]) == 1) continue;
      std::size_t j = i + 1;
      long long m = 0;
      while (j < w.size() && std::abs(w[j]) == 1) m += w[j++] > 0 ? 1 : -1;
      if (j >= w.size() || w[j] != -w[i]) continue;
      Word rep;
      if (w[i] < 0) {
        // s^-1 a^m s = a^2m
        for (long long k = 0; k < 2 * std::abs(m); ++k) rep.push_back(m > 0 ? 1 : -1);
      } else if (m % 2 == 0) {
        // s a^2m s^-1 = a^m
        for (long long k = 0; k < std::abs(m) / 2; ++k) rep.push_back(m > 0 ? 1 : -1);
      } else {
        continue;
      }
      Word nw(w.begin(), w.begin() + static_cast<long>(i));
      nw.insert(nw.end(), rep.begin(), rep.end());
      nw.insert(nw.end(), w.begin() + static_cast<long>(j + 1), w.end());
      w = nw;
      changed = true;
    }
    if (!changed) break;
  }
  for (int l : w)
    if (std::abs(l) != 1) return false;
  long long m = 0;
  for (int l : w) m += l;
  return m == 0;
}

}  // namespace

TEST_CASE("word parsing and formatting") {
  DiamondGroup d(1);
  CHECK(d.parse_word("b1^-1 a b1") == Word{-2, 1, 2});
  CHECK(d.parse_word("b1⁻¹ab1") == Word{-2, 1, 2});
  CHECK(d.parse_word("a^{3}c1") == Word{1, 1, 1, 3});
  CHECK(d.parse_word("1").empty());
  CHECK(d.format_word({-2, 1, 1, 3}) == "b1^-1 a^2 c1");
  CHECK_THROWS_AS(d.parse_word("q"), std::invalid_argument);
  CHECK_THROWS_AS(d.parse_word("a^"), std::invalid_argument);
}

TEST_CASE("diamond level 1 examples") {
  DiamondGroup d(1);
  auto x = d.evaluate(d.parse_word("b1^-1 a b1"));
  CHECK(x == d.evaluate(d.parse_word("a^2")));
  CHECK(d.equal(d.parse_word("b1^-1 a b1"), d.parse_word("c1^-1 a c1")));
  CHECK_FALSE(d.equal(d.parse_word("b1 a b1^-1"), d.parse_word("c1 a c1^-1")));
  CHECK(d.format(d.evaluate(d.parse_word("b1 a^4 b1^-1"))) == "a^2");
  CHECK(d.format(d.evaluate(d.parse_word("b1 a^3 b1^-1"))) == "a b1 a b1^-1");
}

TEST_CASE("relators normalize to the identity") {
  for (auto name : {"Z", "Z2", "F2", "tree3", "BS12", "diamond1", "diamond2", "diamond3"}) {
    auto G = make_group(name);
    for (const auto& r : G->relators()) CHECK(G->evaluate(r) == G->identity());
    CHECK(G->normal_word(G->identity()).empty());
  }
}

TEST_CASE("group laws on random words") {
  testgen::Gen g(2024);
  for (auto name : {"Z2", "F2", "tree3", "BS12", "diamond1", "diamond2", "diamond3"}) {
    auto G = make_group(name);
    for (int it = 0; it < 200; ++it) {
      Word u = random_word(g, *G, static_cast<int>(g.integer(0, 8)));
      Word v = random_word(g, *G, static_cast<int>(g.integer(0, 8)));
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      Elem x = G->evaluate(u), y = G->evaluate(v);
      CHECK(G->multiply(x, y) == G->evaluate(uv));
      CHECK(G->multiply(x, G->invert(x)) == G->identity());
      // normal_word is a fixed point
      CHECK(G->evaluate(G->normal_word(x)) == x);
      CHECK(G->evaluate(random_trivial(g, *G, 3)) == G->identity());
    }
  }
}

TEST_CASE("BS(1,2) agrees with its affine representation") {
  BS12Group G;
  testgen::Gen g(5);
  for (int it = 0; it < 300; ++it) {
    Word u = random_word(g, G, static_cast<int>(g.integer(0, 10)));
    Word v = g.coin() ? random_word(g, G, static_cast<int>(g.integer(0, 10))) : u;
    if (u == v && g.coin()) {
      Word t = random_trivial(g, G, 2);
      v.insert(v.begin() + static_cast<long>(g.integer(0, static_cast<long>(v.size()))), t.begin(), t.end());
    }
    CHECK((G.evaluate(u) == G.evaluate(v)) == (affine_image(u) == affine_image(v)));
  }
}

TEST_CASE("diamond levels 2 and 3 agree with the semidirect oracle") {
  testgen::Gen g(9);
  for (int n : {2, 3}) {
    DiamondGroup G(n);
    for (int it = 0; it < 300; ++it) {
      Word u = random_word(g, G, static_cast<int>(g.integer(0, 10)));
      Word v = u;
      if (g.coin()) {
        Word t = random_trivial(g, G, 2);
        v.insert(v.begin() + static_cast<long>(g.integer(0, static_cast<long>(v.size()))), t.begin(), t.end());
      } else {
        v = random_word(g, G, static_cast<int>(g.integer(0, 10)));
      }
      CHECK((G.evaluate(u) == G.evaluate(v)) == (diamond_oracle(u, n) == diamond_oracle(v, n)));
    }
    // b1 a b1^-1 = c1 a c1^-1 once a second level exists
    CHECK(G.equal(G.parse_word("b1 a b1^-1"), G.parse_word("c1 a c1^-1")));
  }
}

TEST_CASE("diamond level 1 agrees with direct Britton reduction") {
  DiamondGroup G(1);
  testgen::Gen g(13);
  for (int it = 0; it < 400; ++it) {
    Word w = g.coin() ? random_trivial(g, G, static_cast<int>(g.integer(1, 3)))
                      : random_word(g, G, static_cast<int>(g.integer(0, 10)));
    CHECK((G.evaluate(w) == G.identity()) == britton_trivial(w));
  }
}

TEST_CASE("Cayley balls") {
  CHECK(make_group("Z")->ball(2).size() == 5);
  CHECK(make_group("F2")->ball(2).size() == 17);
  CHECK(make_group("tree3")->ball(3).size() == 22);
  CHECK(make_group("Z2")->ball(3).size() == 25);
  auto b = make_group("BS12")->ball(2);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1].second <= b[i].second);
}
