#include "qhl/chain.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qhl {

// ------------------------------------------------------------ chains

void Chain::add(std::size_t cell, const Elem& g, const Rat& v) {
  if (v == 0) return;
  auto key = std::make_pair(cell, g);
  auto it = c.find(key);
  if (it == c.end()) {
    c.emplace(std::move(key), v);
    return;
  }
  it->second += v;
  if (it->second == 0) c.erase(it);
}

Rat Chain::volume() const {
  Rat s = 0;
  for (const auto& [k, v] : c) s += abs(v);
  return s;
}

Chain Chain::operator+(const Chain& o) const {
  Chain out = *this;
  for (const auto& [k, v] : o.c) out.add(k.first, k.second, v);
  return out;
}

Chain Chain::operator-(const Chain& o) const { return *this + o.scaled(-1); }

Chain Chain::scaled(const Rat& s) const {
  Chain out;
  out.dim = dim;
  if (s == 0) return out;
  for (const auto& [k, v] : c) out.c.emplace(k, v * s);
  return out;
}

// ------------------------------------------------------------ complexes

std::size_t EquivariantComplex::count(int d) const {
  if (d < 0 || d >= static_cast<int>(names_.size())) return 0;
  return names_[static_cast<std::size_t>(d)].size();
}

std::optional<std::size_t> EquivariantComplex::find(int d, const std::string& name) const {
  for (std::size_t i = 0; i < count(d); ++i)
    if (names_[static_cast<std::size_t>(d)][i] == name) return i;
  return std::nullopt;
}

std::size_t EquivariantComplex::add_cell(int d, std::string name, std::vector<BoundaryTerm> boundary) {
  if (d < 0) throw std::invalid_argument("negative cell dimension");
  auto ud = static_cast<std::size_t>(d);
  if (names_.size() <= ud) {
    names_.resize(ud + 1);
    bd_.resize(ud + 1);
  }
  names_[ud].push_back(std::move(name));
  bd_[ud].push_back({});
  std::size_t i = names_[ud].size() - 1;
  set_boundary(d, i, std::move(boundary));
  return i;
}

void EquivariantComplex::set_boundary(int d, std::size_t i, std::vector<BoundaryTerm> boundary) {
  for (const auto& t : boundary)
    if (d == 0 || t.cell >= count(d - 1)) throw std::invalid_argument("boundary term refers to a missing cell");
  bd_.at(static_cast<std::size_t>(d)).at(i) = std::move(boundary);
  closure_cache_.clear();
}

const std::vector<BoundaryTerm>& EquivariantComplex::boundary_terms(int d, std::size_t i) const {
  return bd_.at(static_cast<std::size_t>(d)).at(i);
}

Chain EquivariantComplex::cell(int d, std::size_t i, const Elem& g, const Rat& coeff) const {
  Chain x;
  x.dim = d;
  x.add(i, g, coeff);
  return x;
}

Chain EquivariantComplex::boundary(const Chain& x) const {
  Chain out;
  out.dim = x.dim - 1;
  if (x.dim <= 0) return out;
  for (const auto& [k, v] : x.c)
    for (const auto& t : boundary_terms(x.dim, k.first)) out.add(t.cell, G_->multiply(k.second, t.g), v * t.coeff);
  return out;
}

Chain EquivariantComplex::translate(const Elem& g, const Chain& x) const {
  Chain out;
  out.dim = x.dim;
  for (const auto& [k, v] : x.c) out.add(k.first, G_->multiply(g, k.second), v);
  return out;
}

const std::vector<std::pair<std::size_t, Elem>>& EquivariantComplex::closure_vertices(int d, std::size_t i) const {
  auto key = std::make_pair(d, i);
  if (auto it = explicit_closure_.find(key); it != explicit_closure_.end()) return it->second;
  if (auto it = closure_cache_.find(key); it != closure_cache_.end()) return it->second;
  std::set<std::pair<std::size_t, Elem>> acc;
  if (d == 0) {
    acc.insert({i, G_->identity()});
  } else if (boundary_terms(d, i).empty()) {
    acc.insert({0, G_->identity()});
  } else {
    for (const auto& t : boundary_terms(d, i))
      for (const auto& [v, h] : closure_vertices(d - 1, t.cell)) acc.insert({v, G_->multiply(t.g, h)});
  }
  return closure_cache_[key] = std::vector<std::pair<std::size_t, Elem>>(acc.begin(), acc.end());
}

void EquivariantComplex::set_closure_vertices(int d, std::size_t i, std::vector<std::pair<std::size_t, Elem>> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  explicit_closure_[{d, i}] = std::move(v);
  closure_cache_.clear();
}

ValidationReport validate_complex(const EquivariantComplex& cx) {
  ValidationReport rep;
  const auto id = cx.group().identity();
  for (int d = 2; d <= cx.top_dim(); ++d)
    for (std::size_t i = 0; i < cx.count(d); ++i) {
      Chain dd = cx.boundary(cx.boundary(cx.cell(d, i, id)));
      if (!dd.empty()) {
        rep.ok = false;
        rep.dim = d;
        rep.cell = i;
        rep.witness = dd;
        rep.message = "boundary of boundary of " + cx.name(d, i) + " is " + format_chain(cx, dd);
        return rep;
      }
    }
  return rep;
}

std::map<Elem, Rat> fox_derivative(const GroupOracle& G, const Word& r, int gen) {
  std::map<Elem, Rat> D;
  Elem prefix = G.identity();
  for (int l : r) {
    bool hit = std::abs(l) - 1 == gen;
    if (l > 0) {
      if (hit) D[prefix] += 1;
      prefix = G.times_letter(prefix, l);
    } else {
      prefix = G.times_letter(prefix, l);
      if (hit) D[prefix] -= 1;
    }
  }
  for (auto it = D.begin(); it != D.end();) it = it->second == 0 ? D.erase(it) : std::next(it);
  return D;
}

EquivariantComplex presentation_complex(std::shared_ptr<const GroupOracle> G) {
  EquivariantComplex cx(G);
  const Elem id = G->identity();
  cx.add_cell(0, "v");
  for (std::size_t j = 0; j < G->rank(); ++j)
    cx.add_cell(1, G->generators()[j], {{0, G->letter(static_cast<int>(j) + 1), 1}, {0, id, -1}});
  auto rels = G->relators();
  for (std::size_t k = 0; k < rels.size(); ++k) {
    std::vector<BoundaryTerm> terms;
    for (std::size_t j = 0; j < G->rank(); ++j)
      for (const auto& [g, c] : fox_derivative(*G, rels[k], static_cast<int>(j))) terms.push_back({j, g, c});
    std::size_t i = cx.add_cell(2, "r" + std::to_string(k + 1), terms);
    std::vector<std::pair<std::size_t, Elem>> cl{{0, id}};
    Elem p = id;
    for (int l : rels[k]) {
      p = G->times_letter(p, l);
      cl.push_back({0, p});
    }
    cx.set_closure_vertices(2, i, cl);
  }
  return cx;
}

EquivariantComplex cube_complex(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("cube_complex supports 1 <= n <= 3");
  static const char* names[] = {"x", "y", "z"};
  std::vector<std::string> gens(names, names + n);
  auto G = std::make_shared<FreeAbelianGroup>(gens);
  EquivariantComplex cx(G);
  const Elem id = G->identity();
  // cell index within its dimension, by subset mask
  std::vector<std::size_t> idx(std::size_t{1} << n);
  for (int d = 0; d <= n; ++d)
    for (unsigned S = 0; S < (1u << n); ++S) {
      if (__builtin_popcount(S) != d) continue;
      std::string nm;
      std::vector<BoundaryTerm> terms;
      int pos = 0;
      for (int i = 0; i < n; ++i) {
        if (!(S & (1u << i))) continue;
        nm += gens[static_cast<std::size_t>(i)];
        Rat s = pos % 2 == 0 ? 1 : -1;
        std::size_t f = idx[S & ~(1u << i)];
        terms.push_back({f, G->letter(i + 1), s});
        terms.push_back({f, id, -s});
        ++pos;
      }
      idx[S] = cx.add_cell(d, d == 0 ? "v" : nm, terms);
    }
  return cx;
}

EquivariantComplex tube_complex() {
  auto G = std::shared_ptr<const GroupOracle>(make_group("tube"));
  EquivariantComplex cx(G);
  const Elem id = G->identity(), t = G->letter(1);
  cx.add_cell(0, "v");
  cx.add_cell(1, "t", {{0, t, 1}, {0, id, -1}});
  cx.add_cell(2, "a");
  cx.add_cell(3, "c", {{0, t, 1}, {0, id, -1}});
  return cx;
}

// ------------------------------------------------------------ balls

bool Ball::contains(int d, std::size_t cell, const Elem& g) const {
  if (d < 0 || d >= static_cast<int>(index.size())) return false;
  return index[static_cast<std::size_t>(d)].count({cell, g}) > 0;
}

bool Ball::supports(const Chain& x) const {
  for (const auto& [k, v] : x.c)
    if (!contains(x.dim, k.first, k.second)) return false;
  return true;
}

int Ball::distance(const EquivariantComplex& cx, int d, std::size_t cell, const Elem& g) const {
  int best = radius + 1;
  for (const auto& [v, h] : cx.closure_vertices(d, cell)) {
    auto it = vertex_dist.find(cx.group().multiply(g, h));
    if (it != vertex_dist.end()) best = std::min(best, it->second);
  }
  return best;
}

Ball restrict_ball(const EquivariantComplex& cx, int R) {
  if (R < 0) throw std::invalid_argument("radius must be nonnegative");
  const auto& G = cx.group();
  Ball ball;
  ball.radius = R;
  for (const auto& [g, d] : G.ball(R)) ball.vertex_dist.emplace(g, d);
  int top = cx.top_dim();
  ball.cells.resize(static_cast<std::size_t>(top + 1));
  ball.index.resize(static_cast<std::size_t>(top + 1));
  for (int d = 0; d <= top; ++d) {
    std::set<std::pair<std::size_t, Elem>> kept;
    for (std::size_t i = 0; i < cx.count(d); ++i) {
      const auto& cl = cx.closure_vertices(d, i);
      if (cl.empty()) continue;
      Elem h0inv = G.invert(cl.front().second);
      for (const auto& [b, bd] : ball.vertex_dist) {
        Elem g = G.multiply(b, h0inv);
        bool in = true;
        for (const auto& [v, h] : cl)
          if (!ball.vertex_dist.count(G.multiply(g, h))) {
            in = false;
            break;
          }
        if (in) kept.insert({i, g});
      }
    }
    auto& cells = ball.cells[static_cast<std::size_t>(d)];
    cells.assign(kept.begin(), kept.end());
    for (std::size_t k = 0; k < cells.size(); ++k) ball.index[static_cast<std::size_t>(d)][cells[k]] = k;
  }
  return ball;
}

FiniteBall to_finite_ball(const EquivariantComplex& cx, const Ball& ball, int n, Direction direction) {
  const auto& G = cx.group();
  FiniteBall fb;
  fb.direction = direction;
  auto up = static_cast<std::size_t>(n + 1), lo = static_cast<std::size_t>(n);
  if (n < 0 || up >= ball.cells.size()) throw std::invalid_argument("ball has no cells of dimension n+1");
  for (const auto& [j, h] : ball.cells[lo]) {
    fb.lower_names.push_back(cx.name(n, j) + "@" + G.format(h));
    fb.lower_dist.push_back(ball.distance(cx, n, j, h));
  }
  for (const auto& [i, g] : ball.cells[up]) {
    fb.upper_names.push_back(cx.name(n + 1, i) + "@" + G.format(g));
    fb.upper_dist.push_back(ball.distance(cx, n + 1, i, g));
    std::map<std::size_t, Rat> row;
    for (const auto& t : cx.boundary_terms(n + 1, i)) {
      auto it = ball.index[lo].find({t.cell, G.multiply(g, t.g)});
      if (it == ball.index[lo].end()) throw std::logic_error("ball is not closed under faces");
      row[it->second] += t.coeff;
    }
    SparseRow sr;
    for (const auto& [j, a] : row)
      if (a != 0) sr.emplace_back(j, a);
    fb.incidence.push_back(std::move(sr));
  }
  if (direction == Direction::chain) {
    // a lower cell is interior when every coface of the cover lies in the ball
    for (const auto& [j, h] : ball.cells[lo]) {
      bool interior = true;
      for (std::size_t i = 0; i < cx.count(n + 1) && interior; ++i)
        for (const auto& t : cx.boundary_terms(n + 1, i))
          if (t.cell == j && !ball.contains(n + 1, i, G.multiply(h, G.invert(t.g)))) {
            interior = false;
            break;
          }
      fb.lower_interior.push_back(interior);
    }
  }
  return fb;
}

FiniteBall cayley_graph_ball(const GroupOracle& G, int R) {
  FiniteBall fb;
  fb.direction = Direction::chain;
  auto verts = G.ball(R);
  std::map<Elem, std::size_t> at;
  for (const auto& [g, d] : verts) {
    at[g] = fb.lower_names.size();
    fb.lower_names.push_back(G.format(g));
    fb.lower_dist.push_back(d);
    fb.lower_interior.push_back(d < R);
  }
  for (const auto& [g, d] : verts)
    for (std::size_t s = 0; s < G.rank(); ++s) {
      int l = static_cast<int>(s) + 1;
      Elem h = G.times_letter(g, l);
      auto it = at.find(h);
      if (it == at.end()) continue;
      if (G.times_letter(h, l) == g && !(g < h)) continue;  // involution edge already seen
      fb.upper_names.push_back(G.format(g) + "|" + G.generators()[s]);
      fb.upper_dist.push_back(std::min(d, fb.lower_dist[it->second]));
      fb.incidence.push_back({{it->second, 1}, {at[g], -1}});
    }
  return fb;
}

Chain word_cycle(const EquivariantComplex& cx, const Word& w) {
  const auto& G = cx.group();
  Chain x;
  x.dim = 1;
  Elem p = G.identity();
  for (int l : w) {
    auto e = static_cast<std::size_t>(std::abs(l)) - 1;
    if (e >= cx.count(1)) throw std::invalid_argument("word letter has no edge");
    Elem q = G.times_letter(p, l);
    if (l > 0)
      x.add(e, p, 1);
    else
      x.add(e, q, -1);
    p = std::move(q);
  }
  return x;
}

std::vector<Rat> chain_evaluation(const EquivariantComplex& cx, const Chain& x) {
  std::vector<Rat> out(cx.count(x.dim), Rat(0));
  for (const auto& [k, v] : x.c) out.at(k.first) += v;
  return out;
}

// ------------------------------------------------------------ fillings

namespace {

void require_cycle_in_ball(const EquivariantComplex& cx, const Ball& ball, const Chain& b) {
  if (!cx.boundary(b).empty()) throw std::invalid_argument("chain is not a cycle");
  if (!ball.supports(b)) throw std::invalid_argument("chain is not supported in the ball");
}

std::optional<Filling> fill(const EquivariantComplex& cx, const Ball& ball, const Chain& b, bool integral,
                            const QVec& weights) {
  int n = b.dim;
  Filling out;
  out.chain.dim = n + 1;
  out.volume = 0;
  if (b.empty()) return out;
  if (n + 1 >= static_cast<int>(ball.cells.size())) return std::nullopt;
  const auto& G = cx.group();
  const auto& upper = ball.cells[static_cast<std::size_t>(n + 1)];
  const auto& lidx = ball.index[static_cast<std::size_t>(n)];
  L1Problem p;
  p.nvars = upper.size();
  p.rows.resize(ball.count(n));
  p.rhs.assign(ball.count(n), Rat(0));
  for (std::size_t v = 0; v < upper.size(); ++v) {
    std::map<std::size_t, Rat> col;
    for (const auto& t : cx.boundary_terms(n + 1, upper[v].first))
      col[lidx.at({t.cell, G.multiply(upper[v].second, t.g)})] += t.coeff;
    for (const auto& [j, a] : col)
      if (a != 0) p.rows[j].emplace_back(v, a);
  }
  for (const auto& [k, c] : b.c) p.rhs[lidx.at(k)] = c;
  // drop empty rows; an empty row with nonzero target is infeasible
  L1Problem q;
  q.nvars = p.nvars;
  q.weights = weights;
  for (std::size_t j = 0; j < p.rows.size(); ++j) {
    if (p.rows[j].empty()) {
      if (p.rhs[j] != 0) return std::nullopt;
      continue;
    }
    q.rows.push_back(std::move(p.rows[j]));
    q.rhs.push_back(p.rhs[j]);
  }
  auto sol = l1_minimize(q, integral);
  if (!sol) return std::nullopt;
  for (std::size_t v = 0; v < upper.size(); ++v) out.chain.add(upper[v].first, upper[v].second, sol->x[v]);
  out.volume = out.chain.volume();
  return out;
}

Rat frac_of(long a, long b) {
  Rat r(a, b);
  r.canonicalize();
  return r;
}

Rat linf(const QVec& v) {
  Rat m = 0;
  for (const auto& x : v) m = std::max(m, Rat(abs(x)));
  return m;
}

}  // namespace

std::optional<Filling> filling_volume(const EquivariantComplex& cx, const Ball& ball, const Chain& b, FillMode mode) {
  require_cycle_in_ball(cx, ball, b);
  return fill(cx, ball, b, mode == FillMode::integral, {});
}

TwistedCocycle TwistedCocycle::untwisted(int dim, std::vector<Rat> values) {
  TwistedCocycle w;
  w.dim = dim;
  w.r = 1;
  for (auto& v : values) w.values.push_back(QVec{v});
  return w;
}

QMatrix TwistedCocycle::rho_of(const GroupOracle& G, const Elem& g) const {
  QMatrix m = QMatrix::identity(r);
  if (rho.empty()) return m;
  for (int l : G.normal_word(g)) {
    const QMatrix& x = rho.at(static_cast<std::size_t>(std::abs(l)) - 1);
    m = m * (l > 0 ? x : x.inverse());
  }
  return m;
}

QVec TwistedCocycle::value(const GroupOracle& G, std::size_t cell, const Elem& g) const {
  if (rho.empty()) return values.at(cell);
  return rho_of(G, g) * values.at(cell);
}

QVec evaluate_cochain(const EquivariantComplex& cx, const TwistedCocycle& w, const Chain& c) {
  if (c.dim != w.dim && !c.empty()) throw std::invalid_argument("cochain and chain dimensions differ");
  QVec s(w.r, Rat(0));
  for (const auto& [k, v] : c.c) s = s + v * w.value(cx.group(), k.first, k.second);
  return s;
}

PairingResult filling_pairing(const EquivariantComplex& cx, const Ball& ball, const Chain& b, const TwistedCocycle& w) {
  if (w.dim != b.dim + 1) throw std::invalid_argument("cocycle must have degree one more than the cycle");
  if (w.values.size() != cx.count(w.dim)) throw std::invalid_argument("cocycle needs one value per orbit cell");
  for (const auto& v : w.values)
    if (v.size() != w.r) throw std::invalid_argument("cocycle value has the wrong dimension");
  if (!w.rho.empty() && w.rho.size() != cx.group().rank())
    throw std::invalid_argument("monodromy needs one matrix per generator");
  for (const auto& m : w.rho)
    if (!m.square() || m.rows() != w.r || m.det() == 0) throw std::invalid_argument("monodromy matrix not invertible");
  require_cycle_in_ball(cx, ball, b);
  for (const auto& e : chain_evaluation(cx, b))
    if (e != 0) throw std::invalid_argument("chain evaluation is nonzero; normalize first");
  auto top = static_cast<std::size_t>(w.dim + 1);
  if (top < ball.cells.size())
    for (const auto& [i, g] : ball.cells[top]) {
      QVec d = evaluate_cochain(cx, w, cx.boundary(cx.cell(w.dim + 1, i, g)));
      if (!is_zero(d)) throw std::invalid_argument("cocycle condition fails on " + cx.name(w.dim + 1, i));
    }
  PairingResult out;
  auto first = fill(cx, ball, b, false, {});
  if (!first) throw std::invalid_argument("no filling inside the ball");
  // penalize the first support so the second solve lands on another basis when one exists
  QVec weights;
  const auto& upper = ball.cells[static_cast<std::size_t>(b.dim + 1)];
  for (std::size_t i = 0; i < upper.size(); ++i)
    weights.push_back(first->chain.c.count(upper[i]) ? Rat(8) : 1 + frac_of(static_cast<long>(i % 5), 7));
  auto second = fill(cx, ball, b, false, weights);
  if (!second) throw std::logic_error("weighted filling infeasible while unweighted one exists");
  out.value = evaluate_cochain(cx, w, first->chain);
  if (evaluate_cochain(cx, w, second->chain) != out.value)
    throw std::logic_error("pairing depends on the filling");
  out.distinct_fillings = !(first->chain == second->chain);
  out.first = std::move(*first);
  out.second = std::move(*second);
  return out;
}

Normalized normalize_zero_evaluation(const EquivariantComplex& cx, const Chain& b) {
  Normalized out;
  out.chain = b;
  out.correction.dim = b.dim + 1;
  out.constant = 1;
  auto e = chain_evaluation(cx, b);
  bool zero = std::all_of(e.begin(), e.end(), [](const Rat& x) { return x == 0; });
  if (zero) return out;
  int n = b.dim;
  L1Problem p;
  p.nvars = cx.count(n + 1);
  p.rows.resize(cx.count(n));
  for (std::size_t i = 0; i < p.nvars; ++i) {
    std::map<std::size_t, Rat> col;
    for (const auto& t : cx.boundary_terms(n + 1, i)) col[t.cell] += t.coeff;
    for (const auto& [j, a] : col)
      if (a != 0) p.rows[j].emplace_back(i, a);
  }
  p.rhs = e;
  auto sol = p.nvars == 0 ? std::nullopt : l1_minimize(p, false);
  if (!sol) throw std::invalid_argument("chain evaluation is not a boundary in the base");
  const Elem id = cx.group().identity();
  for (std::size_t i = 0; i < p.nvars; ++i) out.correction.add(i, id, sol->x[i]);
  out.chain = b - cx.boundary(out.correction);
  out.constant = out.chain.volume() / b.volume();
  return out;
}

std::vector<DirectedRow> directed_fv(const EquivariantComplex& cx, const Ball& ball, const TwistedCocycle& w,
                                     const std::vector<Chain>& family) {
  std::map<Rat, DirectedRow> rows;
  for (const auto& b : family) {
    Rat vol = b.volume();
    Rat p = linf(filling_pairing(cx, ball, b, w).value);
    auto [it, fresh] = rows.try_emplace(vol, DirectedRow{vol, p, 0});
    it->second.max_pairing = std::max(it->second.max_pairing, p);
    ++it->second.cycles;
  }
  std::vector<DirectedRow> out;
  for (auto& [v, r] : rows) out.push_back(r);
  return out;
}

std::vector<DirectedRow> directed_fv_exhaustive(const EquivariantComplex& cx, const Ball& ball, const TwistedCocycle& w,
                                                int n, int k) {
  if (n < 0 || static_cast<std::size_t>(n) >= ball.cells.size()) return {};
  const auto& cells = ball.cells[static_cast<std::size_t>(n)];
  const Elem id = cx.group().identity();
  std::map<int, DirectedRow> rows;
  for (int v = 1; v <= k; ++v) rows[v] = DirectedRow{v, 0, 0};
  std::vector<std::pair<std::size_t, int>> picks;  // (cell index, sign), nondecreasing index
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!picks.empty()) {
      Chain b;
      b.dim = n;
      bool anchored = false;
      for (const auto& [i, s] : picks) {
        b.add(cells[i].first, cells[i].second, s);
        if (cells[i].second == id) anchored = true;
      }
      auto e = chain_evaluation(cx, b);
      bool ok = anchored && std::all_of(e.begin(), e.end(), [](const Rat& x) { return x == 0; }) &&
                cx.boundary(b).empty();
      if (ok) {
        try {
          Rat p = linf(filling_pairing(cx, ball, b, w).value);
          auto& row = rows[static_cast<int>(picks.size())];
          row.max_pairing = std::max(row.max_pairing, p);
          ++row.cycles;
        } catch (const std::invalid_argument&) {
          // no filling inside the ball
        }
      }
    }
    if (static_cast<int>(picks.size()) == k) return;
    for (std::size_t i = from; i < cells.size(); ++i)
      for (int s : {1, -1}) {
        if (!picks.empty() && picks.back().first == i && picks.back().second != s) continue;
        picks.emplace_back(i, s);
        rec(i);
        picks.pop_back();
      }
  };
  rec(0);
  std::vector<DirectedRow> out;
  for (auto& [v, r] : rows) out.push_back(r);
  return out;
}

// ------------------------------------------------------------ text formats

namespace {

std::string trim(std::string_view s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::string group_token(const GroupOracle& G) {
  if (G.name() == "Z" && G.generators().front() == "t") return "tube";
  return G.name();
}

}  // namespace

std::string format_chain(const EquivariantComplex& cx, const Chain& x) {
  std::ostringstream os;
  for (const auto& [k, v] : x.c)
    os << "(" << cx.name(x.dim, k.first) << ", " << cx.group().format(k.second) << ") " << to_string(v) << "\n";
  return os.str();
}

Chain parse_chain(const EquivariantComplex& cx, int dim, std::string_view text) {
  Chain x;
  x.dim = dim;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto open = line.find('('), close = line.find(')');
    auto comma = line.find(',');
    if (open != 0 || close == std::string::npos || comma == std::string::npos || comma > close)
      throw std::invalid_argument("chain line must look like (cell, word) coeff: " + line);
    std::string name = trim(std::string_view(line).substr(1, comma - 1));
    std::string word = trim(std::string_view(line).substr(comma + 1, close - comma - 1));
    std::string coeff = trim(std::string_view(line).substr(close + 1));
    auto cell = cx.find(dim, name);
    if (!cell) throw std::invalid_argument("unknown cell in chain: " + name);
    x.add(*cell, cx.group().evaluate(cx.group().parse_word(word)), coeff.empty() ? Rat(1) : parse_rat(coeff));
  }
  return x;
}

std::string format_complex(const EquivariantComplex& cx) {
  const auto& G = cx.group();
  std::ostringstream os;
  os << "group " << group_token(G) << "\n";
  for (int d = 0; d <= cx.top_dim(); ++d)
    for (std::size_t i = 0; i < cx.count(d); ++i) {
      os << "cell " << d << " " << cx.name(d, i);
      const auto& terms = cx.boundary_terms(d, i);
      if (!terms.empty()) {
        os << " :";
        for (std::size_t k = 0; k < terms.size(); ++k)
          os << (k ? "; " : " ") << to_string(terms[k].coeff) << " [" << G.format(terms[k].g) << "] "
             << cx.name(d - 1, terms[k].cell);
      }
      os << "\n";
    }
  // closures that differ from the derived ones are written out
  EquivariantComplex bare(cx.group_ptr());
  for (int d = 0; d <= cx.top_dim(); ++d)
    for (std::size_t i = 0; i < cx.count(d); ++i) bare.add_cell(d, cx.name(d, i), cx.boundary_terms(d, i));
  for (int d = 1; d <= cx.top_dim(); ++d)
    for (std::size_t i = 0; i < cx.count(d); ++i) {
      const auto& cl = cx.closure_vertices(d, i);
      if (cl == bare.closure_vertices(d, i)) continue;
      os << "closure " << d << " " << cx.name(d, i) << " :";
      for (std::size_t k = 0; k < cl.size(); ++k)
        os << (k ? "; " : " ") << "[" << G.format(cl[k].second) << "] " << cx.name(0, cl[k].first);
      os << "\n";
    }
  return os.str();
}

EquivariantComplex parse_complex(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::optional<EquivariantComplex> cx;
  auto parse_bracket = [](const std::string& tok, std::string& word, std::string& rest) {
    auto a = tok.find('['), b = tok.find(']');
    if (a == std::string::npos || b == std::string::npos || b < a)
      throw std::invalid_argument("expected [word] in term: " + tok);
    word = trim(std::string_view(tok).substr(a + 1, b - a - 1));
    rest = trim(std::string_view(tok).substr(b + 1));
    return trim(std::string_view(tok).substr(0, a));
  };
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "group") {
      std::string g;
      ls >> g;
      cx.emplace(std::shared_ptr<const GroupOracle>(make_group(g)));
      continue;
    }
    if (!cx) throw std::invalid_argument("complex file must start with a group line");
    if (kw == "presentation") {
      cx.emplace(presentation_complex(cx->group_ptr()));
      continue;
    }
    if (kw != "cell" && kw != "closure") throw std::invalid_argument("unknown complex directive: " + kw);
    int d = -1;
    std::string name;
    ls >> d >> name;
    if (d < 0 || name.empty()) throw std::invalid_argument("bad cell line: " + line);
    std::string rest;
    std::getline(ls, rest);
    rest = trim(rest);
    if (!rest.empty() && rest[0] == ':') rest = trim(std::string_view(rest).substr(1));
    std::vector<std::string> toks = rest.empty() ? std::vector<std::string>{} : split(rest, ';');
    const auto& G = cx->group();
    if (kw == "cell") {
      std::vector<BoundaryTerm> terms;
      for (const auto& tok : toks) {
        std::string word, target;
        std::string coeff = parse_bracket(tok, word, target);
        auto f = cx->find(d - 1, target);
        if (!f) throw std::invalid_argument("unknown face " + target + " of " + name);
        terms.push_back({*f, G.evaluate(G.parse_word(word)), coeff.empty() ? Rat(1) : parse_rat(coeff)});
      }
      if (cx->find(d, name)) throw std::invalid_argument("duplicate cell " + name);
      cx->add_cell(d, name, terms);
    } else {
      auto c = cx->find(d, name);
      if (!c) throw std::invalid_argument("closure for unknown cell " + name);
      std::vector<std::pair<std::size_t, Elem>> cl;
      for (const auto& tok : toks) {
        std::string word, target;
        parse_bracket(tok, word, target);
        auto v = cx->find(0, target);
        if (!v) throw std::invalid_argument("unknown vertex " + target);
        cl.push_back({*v, G.evaluate(G.parse_word(word))});
      }
      cx->set_closure_vertices(d, *c, cl);
    }
  }
  if (!cx) throw std::invalid_argument("empty complex description");
  return std::move(*cx);
}

EquivariantComplex builtin_complex(std::string_view name) {
  auto pres = [](std::string_view g) { return presentation_complex(std::shared_ptr<const GroupOracle>(make_group(g))); };
  if (name == "grid") return pres("Z2");
  if (name == "line") return cube_complex(1);
  if (name == "z3") return cube_complex(3);
  if (name == "tube") return tube_complex();
  if (name == "F2") return pres("F2");
  if (name == "tree3") return pres("tree3");
  if (name == "bs12") return pres("BS12");
  throw std::invalid_argument("unknown builtin complex: " + std::string(name));
}

}  // namespace qhl
