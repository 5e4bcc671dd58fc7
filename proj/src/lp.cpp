#include "qhl/lp.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace qhl {

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::unbounded: return "unbounded";
    case LPStatus::infeasible: return "infeasible";
  }
  return "?";
}

namespace {

// Dense tableau with a profit row d (d_j > 0 means column j improves the objective).
struct Tableau {
  std::size_t m = 0, ncol = 0;
  std::vector<std::vector<Rat>> t;  // m rows of ncol + 1, rhs last
  std::vector<Rat> d;
  Rat value;
  std::vector<std::size_t> basis;
  std::vector<bool> blocked;
  std::size_t pivots = 0;

  void set_cost(const std::vector<Rat>& cost) {
    d = cost;
    value = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Rat& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < ncol; ++j)
        if (sgn(t[i][j])) d[j] -= cb * t[i][j];
      value += cb * t[i][ncol];
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    auto& row = t[r];
    Rat inv = 1 / row[s];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= ncol; ++j)
      if (sgn(row[j])) {
        row[j] *= inv;
        nz.push_back(j);
      }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(t[i][s]) == 0) continue;
      Rat f = t[i][s];
      for (auto j : nz) t[i][j] -= f * row[j];
    }
    if (sgn(d[s])) {
      Rat f = d[s];
      for (auto j : nz) {
        if (j < ncol)
          d[j] -= f * row[j];
        else
          value += f * row[j];
      }
    }
    basis[r] = s;
    ++pivots;
  }

  // Dantzig pricing, switching to Bland's rule during long degenerate runs so
  // cycling is impossible.
  LPStatus optimize() {
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      std::size_t s = ncol;
      for (std::size_t j = 0; j < ncol; ++j) {
        if (blocked[j] || sgn(d[j]) <= 0) continue;
        if (s == ncol || (!bland && d[j] > d[s])) s = j;
        if (bland) break;
      }
      if (s == ncol) return LPStatus::optimal;
      std::size_t r = m;
      Rat best;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(t[i][s]) <= 0) continue;
        Rat ratio = t[i][ncol] / t[i][s];
        if (r == m || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m) return LPStatus::unbounded;
      if (sgn(best) == 0) {
        if (++degenerate_run >= 50) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      pivot(r, s);
    }
  }
};

}  // namespace

LPResult simplex_solve(const StandardLP& lp) {
  std::size_t m = lp.A.rows(), n = lp.A.cols();
  if (lp.b.size() != m || lp.c.size() != n) throw std::invalid_argument("StandardLP: inconsistent dimensions");
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (sgn(lp.b[i]) < 0) art_rows.push_back(i);
  Tableau tb;
  tb.m = m;
  tb.ncol = n + m + art_rows.size();
  tb.t.assign(m, std::vector<Rat>(tb.ncol + 1));
  tb.basis.resize(m);
  tb.blocked.assign(tb.ncol, false);
  std::size_t next_art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    bool neg = sgn(lp.b[i]) < 0;
    auto& row = tb.t[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = neg ? Rat(-lp.A(i, j)) : lp.A(i, j);
    row[n + i] = neg ? -1 : 1;
    row[tb.ncol] = neg ? Rat(-lp.b[i]) : lp.b[i];
    if (neg) {
      row[next_art] = 1;
      tb.basis[i] = next_art++;
    } else {
      tb.basis[i] = n + i;
    }
  }
  LPResult res;
  if (!art_rows.empty()) {
    std::vector<Rat> cost(tb.ncol);
    for (std::size_t j = n + m; j < tb.ncol; ++j) cost[j] = -1;
    tb.set_cost(cost);
    tb.optimize();
    if (sgn(tb.value) < 0) {
      res.status = LPStatus::infeasible;
      res.pivots = tb.pivots;
      return res;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] < n + m) continue;
      std::size_t j = 0;
      while (j < n + m && sgn(tb.t[i][j]) == 0) ++j;
      if (j == n + m) throw std::logic_error("simplex: artificial row without a replacement column");
      tb.pivot(i, j);
    }
    for (std::size_t j = n + m; j < tb.ncol; ++j) tb.blocked[j] = true;
  }
  std::vector<Rat> cost(tb.ncol);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
  tb.set_cost(cost);
  LPStatus st = tb.optimize();
  res.pivots = tb.pivots;
  if (st == LPStatus::unbounded) {
    res.status = st;
    return res;
  }
  res.status = LPStatus::optimal;
  res.primal.assign(n, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] < n) res.primal[tb.basis[i]] = tb.t[i][tb.ncol];
  res.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.dual[i] = -tb.d[n + i];
  res.optimum = tb.value;
  if (!certificates_hold(lp, res)) throw std::logic_error("simplex: certificate check failed");
  return res;
}

StandardLP dual_of(const StandardLP& lp) {
  StandardLP d;
  d.A = lp.A.transpose().scaled(-1);
  d.b = Rat(-1) * lp.c;
  d.c = Rat(-1) * lp.b;
  return d;
}

bool certificates_hold(const StandardLP& lp, const LPResult& r) {
  if (r.status != LPStatus::optimal) return false;
  std::size_t m = lp.A.rows(), n = lp.A.cols();
  if (r.primal.size() != n || r.dual.size() != m) return false;
  for (const auto& x : r.primal)
    if (sgn(x) < 0) return false;
  for (const auto& y : r.dual)
    if (sgn(y) < 0) return false;
  QVec ax = lp.A * r.primal;
  for (std::size_t i = 0; i < m; ++i)
    if (ax[i] > lp.b[i]) return false;
  QVec aty = lp.A.transpose() * r.dual;
  for (std::size_t j = 0; j < n; ++j)
    if (aty[j] < lp.c[j]) return false;
  return dot(lp.c, r.primal) == r.optimum && dot(lp.b, r.dual) == r.optimum;
}

std::string format_lp(const StandardLP& lp) {
  std::ostringstream os;
  os << lp.A.rows() << ' ' << lp.A.cols() << '\n';
  for (std::size_t i = 0; i < lp.A.rows(); ++i) {
    for (std::size_t j = 0; j < lp.A.cols(); ++j) os << (j ? " " : "") << lp.A(i, j).get_str();
    os << '\n';
  }
  for (std::size_t i = 0; i < lp.b.size(); ++i) os << (i ? " " : "") << lp.b[i].get_str();
  os << '\n';
  for (std::size_t j = 0; j < lp.c.size(); ++j) os << (j ? " " : "") << lp.c[j].get_str();
  os << '\n';
  return os.str();
}

StandardLP parse_lp(std::string_view text) {
  QVec all = parse_vector(text);
  if (all.size() < 2) throw std::invalid_argument("LP text needs an 'm n' header");
  if (!is_integer(all[0]) || !is_integer(all[1]) || all[0] < 0 || all[1] < 0)
    throw std::invalid_argument("LP header must be two nonnegative integers");
  std::size_t m = all[0].get_num().get_ui(), n = all[1].get_num().get_ui();
  if (all.size() != 2 + m * n + m + n) throw std::invalid_argument("LP text: wrong entry count");
  StandardLP lp;
  lp.A = QMatrix(m, n);
  std::size_t k = 2;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) lp.A(i, j) = all[k++];
  lp.b.assign(all.begin() + static_cast<long>(k), all.begin() + static_cast<long>(k + m));
  k += m;
  lp.c.assign(all.begin() + static_cast<long>(k), all.end());
  return lp;
}

// ------------------------------------------------------------ general form

std::size_t GeneralLP::add_var(bool is_free) {
  if (free_var.size() < nvars) free_var.resize(nvars, false);
  free_var.push_back(is_free);
  objective.resize(nvars + 1);
  return nvars++;
}

void GeneralLP::add_row(SparseRow row, Sense s, const Rat& r) {
  rows.push_back(std::move(row));
  senses.push_back(s);
  rhs.push_back(r);
}

GeneralResult solve_general(const GeneralLP& g) {
  std::vector<std::size_t> plus(g.nvars), minus(g.nvars, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t v = 0; v < g.nvars; ++v) {
    plus[v] = ncols++;
    if (v < g.free_var.size() && g.free_var[v]) minus[v] = ncols++;
  }
  std::size_t nrows = 0;
  for (auto s : g.senses) nrows += s == Sense::eq ? 2 : 1;
  StandardLP lp;
  lp.A = QMatrix(nrows, ncols);
  lp.b.resize(nrows);
  lp.c.assign(ncols, Rat(0));
  std::size_t r = 0;
  std::vector<std::size_t> first_row(g.rows.size());
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    first_row[k] = r;
    int copies = g.senses[k] == Sense::eq ? 2 : 1;
    for (int cp = 0; cp < copies; ++cp) {
      bool neg = g.senses[k] == Sense::ge || cp == 1;
      for (const auto& [v, a] : g.rows[k]) {
        Rat coef = neg ? Rat(-a) : a;
        lp.A(r, plus[v]) += coef;
        if (minus[v] != SIZE_MAX) lp.A(r, minus[v]) -= coef;
      }
      lp.b[r] = neg ? Rat(-g.rhs[k]) : g.rhs[k];
      ++r;
    }
  }
  for (std::size_t v = 0; v < g.nvars && v < g.objective.size(); ++v) {
    Rat c = g.minimize ? Rat(-g.objective[v]) : g.objective[v];
    lp.c[plus[v]] += c;
    if (minus[v] != SIZE_MAX) lp.c[minus[v]] -= c;
  }
  LPResult lr = simplex_solve(lp);
  GeneralResult out;
  out.status = lr.status;
  if (lr.status != LPStatus::optimal) return out;
  out.optimum = g.minimize ? Rat(-lr.optimum) : lr.optimum;
  out.x.resize(g.nvars);
  for (std::size_t v = 0; v < g.nvars; ++v) {
    out.x[v] = lr.primal[plus[v]];
    if (minus[v] != SIZE_MAX) out.x[v] -= lr.primal[minus[v]];
  }
  out.duals.resize(g.rows.size());
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    std::size_t i = first_row[k];
    switch (g.senses[k]) {
      case Sense::le: out.duals[k] = lr.dual[i]; break;
      case Sense::ge: out.duals[k] = -lr.dual[i]; break;
      case Sense::eq: out.duals[k] = lr.dual[i] - lr.dual[i + 1]; break;
    }
  }
  return out;
}

// ------------------------------------------------------------ l1 minimization

namespace {

struct CoreLP {
  std::vector<std::size_t> vars;  // original indices
  std::vector<SparseRow> rows;    // over core positions
  QVec rhs;
  QVec weights;
};

std::optional<std::pair<Rat, QVec>> solve_core(const CoreLP& core,
                                               const std::vector<std::tuple<std::size_t, Sense, Rat>>& bounds) {
  GeneralLP g;
  g.minimize = true;
  std::size_t nv = core.vars.size();
  for (std::size_t v = 0; v < 2 * nv; ++v) g.add_var(false);
  for (std::size_t v = 0; v < nv; ++v) {
    g.objective[v] = core.weights[v];
    g.objective[nv + v] = core.weights[v];
  }
  for (std::size_t k = 0; k < core.rows.size(); ++k) {
    SparseRow row;
    for (const auto& [v, a] : core.rows[k]) {
      row.emplace_back(v, a);
      row.emplace_back(nv + v, Rat(-a));
    }
    g.add_row(std::move(row), Sense::eq, core.rhs[k]);
  }
  for (const auto& [col, s, val] : bounds) g.add_row({{col, Rat(1)}}, s, val);
  GeneralResult r = solve_general(g);
  if (r.status != LPStatus::optimal) return std::nullopt;
  return std::make_pair(r.optimum, r.x);
}

// Integer solvability of E x = b by unimodular column reduction (E U = H lower echelon).
std::optional<QVec> integer_solution(const CoreLP& core) {
  std::size_t m = core.rows.size(), n = core.vars.size();
  std::vector<std::vector<BigInt>> M(m, std::vector<BigInt>(n));
  std::vector<BigInt> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    BigInt l = core.rhs[i].get_den();
    for (const auto& [v, a] : core.rows[i]) l = lcm(l, BigInt(a.get_den()));
    for (const auto& [v, a] : core.rows[i]) M[i][v] += BigInt(a.get_num()) * (l / a.get_den());
    b[i] = BigInt(core.rhs[i].get_num()) * (l / core.rhs[i].get_den());
  }
  std::vector<std::vector<BigInt>> U(n, std::vector<BigInt>(n));
  for (std::size_t j = 0; j < n; ++j) U[j][j] = 1;
  auto col_axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    for (auto& row : M) row[dst] -= q * row[src];
    for (auto& row : U) row[dst] -= q * row[src];
  };
  auto col_swap = [&](std::size_t a, std::size_t c) {
    for (auto& row : M) std::swap(row[a], row[c]);
    for (auto& row : U) std::swap(row[a], row[c]);
  };
  std::vector<std::size_t> pivot_col(m, SIZE_MAX);
  std::size_t c = 0;
  for (std::size_t i = 0; i < m && c < n; ++i) {
    while (true) {
      std::size_t best = SIZE_MAX;
      for (std::size_t j = c; j < n; ++j)
        if (sgn(M[i][j]) && (best == SIZE_MAX || abs(M[i][j]) < abs(M[i][best]))) best = j;
      if (best == SIZE_MAX) break;
      col_swap(c, best);
      bool clean = true;
      for (std::size_t j = c + 1; j < n; ++j) {
        if (!sgn(M[i][j])) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), M[i][j].get_mpz_t(), M[i][c].get_mpz_t());
        col_axpy(j, c, q);
        if (sgn(M[i][j])) clean = false;
      }
      if (clean) {
        pivot_col[i] = c++;
        break;
      }
    }
  }
  std::vector<BigInt> y(n);
  for (std::size_t i = 0; i < m; ++i) {
    BigInt acc = b[i];
    for (std::size_t j = 0; j < c; ++j)
      if (j != pivot_col[i]) acc -= M[i][j] * y[j];
    if (pivot_col[i] == SIZE_MAX) {
      if (sgn(acc)) return std::nullopt;
      continue;
    }
    const BigInt& d = M[i][pivot_col[i]];
    if (!mpz_divisible_p(acc.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
    y[pivot_col[i]] = acc / d;
  }
  QVec x(n);
  for (std::size_t r = 0; r < n; ++r) {
    BigInt s = 0;
    for (std::size_t j = 0; j < n; ++j) s += U[r][j] * y[j];
    x[r] = Rat(s);
  }
  return x;
}

}  // namespace

std::optional<L1Solution> l1_minimize(const L1Problem& p, bool integral) {
  if (p.rows.size() != p.rhs.size()) throw std::invalid_argument("L1Problem: rows/rhs mismatch");
  QVec w = p.weights.empty() ? QVec(p.nvars, Rat(1)) : p.weights;
  if (w.size() != p.nvars) throw std::invalid_argument("L1Problem: weight count");
  std::vector<std::vector<std::pair<std::size_t, Rat>>> var_rows(p.nvars);
  for (std::size_t k = 0; k < p.rows.size(); ++k)
    for (const auto& [v, a] : p.rows[k])
      if (sgn(a)) var_rows.at(v).emplace_back(k, a);
  std::vector<Rat> residual = p.rhs;
  std::vector<int> open(p.rows.size(), 0);
  for (std::size_t k = 0; k < p.rows.size(); ++k)
    for (const auto& [v, a] : p.rows[k])
      if (sgn(a)) ++open[k];
  std::vector<bool> fixed(p.nvars, false);
  QVec x(p.nvars);
  std::deque<std::size_t> queue;
  for (std::size_t k = 0; k < p.rows.size(); ++k) {
    if (open[k] == 1) queue.push_back(k);
    if (open[k] == 0 && sgn(residual[k])) return std::nullopt;
  }
  L1Solution sol;
  // Singleton rows force their variable; on contractible complexes this
  // usually solves the whole filling problem.
  while (!queue.empty()) {
    std::size_t k = queue.front();
    queue.pop_front();
    if (open[k] != 1) continue;
    std::size_t v = SIZE_MAX;
    Rat a;
    for (const auto& [u, c] : p.rows[k])
      if (sgn(c) && !fixed[u]) v = u, a = c;
    if (v == SIZE_MAX) continue;
    Rat val = residual[k] / a;
    if (integral && !is_integer(val)) return std::nullopt;
    fixed[v] = true;
    x[v] = val;
    ++sol.presolved;
    for (const auto& [k2, c] : var_rows[v]) {
      residual[k2] -= c * val;
      --open[k2];
      if (open[k2] == 1) queue.push_back(k2);
      if (open[k2] == 0 && sgn(residual[k2])) return std::nullopt;
    }
  }
  CoreLP core;
  std::vector<std::size_t> pos(p.nvars, SIZE_MAX);
  for (std::size_t k = 0; k < p.rows.size(); ++k) {
    if (open[k] == 0) continue;
    SparseRow row;
    for (const auto& [v, a] : p.rows[k]) {
      if (!sgn(a) || fixed[v]) continue;
      if (pos[v] == SIZE_MAX) {
        pos[v] = core.vars.size();
        core.vars.push_back(v);
        core.weights.push_back(w[v]);
      }
      row.emplace_back(pos[v], a);
    }
    core.rows.push_back(std::move(row));
    core.rhs.push_back(residual[k]);
  }
  sol.core_vars = core.vars.size();
  if (!core.vars.empty()) {
    std::size_t nv = core.vars.size();
    auto root = solve_core(core, {});
    if (!root) return std::nullopt;
    QVec best_x = root->second;
    bool need_bb = integral && std::any_of(best_x.begin(), best_x.end(), [](const Rat& v) { return !is_integer(v); });
    if (need_bb) {
      bool integral_weights = std::all_of(core.weights.begin(), core.weights.end(), is_integer);
      if (std::any_of(core.weights.begin(), core.weights.end(), [](const Rat& v) { return sgn(v) <= 0; }))
        throw std::invalid_argument("integral l1 minimization needs positive weights");
      // A particular integer solution bounds the search region, so branching terminates.
      auto particular = integer_solution(core);
      if (!particular) return std::nullopt;
      std::optional<Rat> incumbent = Rat(0);
      QVec incumbent_x(2 * nv);
      for (std::size_t i = 0; i < nv; ++i) {
        const Rat& v = (*particular)[i];
        *incumbent += core.weights[i] * abs(v);
        (sgn(v) >= 0 ? incumbent_x[i] : incumbent_x[nv + i]) = abs(v);
      }
      std::vector<std::vector<std::tuple<std::size_t, Sense, Rat>>> stack{{}};
      while (!stack.empty()) {
        auto bounds = std::move(stack.back());
        stack.pop_back();
        if (++sol.bb_nodes > 20000) throw std::runtime_error("branch-and-bound node limit reached");
        auto node = solve_core(core, bounds);
        if (!node) continue;
        Rat bound = node->first;
        if (integral_weights) bound = Rat(ceil_div(bound));
        if (incumbent && bound >= *incumbent) continue;
        std::size_t frac = 2 * nv;
        for (std::size_t c = 0; c < 2 * nv; ++c)
          if (!is_integer(node->second[c])) {
            frac = c;
            break;
          }
        if (frac == 2 * nv) {
          incumbent = node->first;
          incumbent_x = node->second;
          continue;
        }
        Rat v = node->second[frac];
        auto lo = bounds, hi = bounds;
        lo.emplace_back(frac, Sense::le, Rat(floor_div(v)));
        hi.emplace_back(frac, Sense::ge, Rat(ceil_div(v)));
        stack.push_back(std::move(hi));
        stack.push_back(std::move(lo));
      }
      if (!incumbent) return std::nullopt;
      best_x = incumbent_x;
    }
    for (std::size_t i = 0; i < nv; ++i) x[core.vars[i]] = best_x[i] - best_x[nv + i];
  }
  sol.value = 0;
  for (std::size_t v = 0; v < p.nvars; ++v) sol.value += w[v] * abs(x[v]);
  sol.x = std::move(x);
  // Exact re-check of E x = b.
  for (std::size_t k = 0; k < p.rows.size(); ++k) {
    Rat s = 0;
    for (const auto& [v, a] : p.rows[k]) s += a * sol.x[v];
    if (s != p.rhs[k]) throw std::logic_error("l1_minimize: solution fails E x = b");
  }
  return sol;
}

// ------------------------------------------------------------ norms

PolyhedralNorm::PolyhedralNorm(std::vector<QVec> functionals) : f_(std::move(functionals)) {
  if (f_.empty()) throw std::invalid_argument("polyhedral norm needs at least one functional");
  dim_ = f_[0].size();
  if (dim_ == 0) throw std::invalid_argument("polyhedral norm of dimension zero");
  for (const auto& c : f_)
    if (c.size() != dim_) throw std::invalid_argument("polyhedral norm: functional dimension mismatch");
  // Definite iff the functionals' cone is everything, i.e. each +-e_k is a
  // nonnegative combination of them.
  for (std::size_t k = 0; k < dim_; ++k)
    for (int sgn_k : {1, -1}) {
      GeneralLP g;
      for (std::size_t l = 0; l < f_.size(); ++l) g.add_var(false);
      for (std::size_t i = 0; i < dim_; ++i) {
        SparseRow row;
        for (std::size_t l = 0; l < f_.size(); ++l)
          if (sgn(f_[l][i])) row.emplace_back(l, f_[l][i]);
        g.add_row(std::move(row), Sense::eq, i == k ? Rat(sgn_k) : Rat(0));
      }
      if (solve_general(g).status != LPStatus::optimal)
        throw std::invalid_argument("functionals define only a seminorm");
    }
}

PolyhedralNorm PolyhedralNorm::absolute(const Rat& scale) {
  if (sgn(scale) <= 0) throw std::invalid_argument("norm scale must be positive");
  return PolyhedralNorm({{Rat(1 / scale)}, {Rat(-1 / scale)}});
}

PolyhedralNorm PolyhedralNorm::l_infinity(std::size_t r) {
  std::vector<QVec> f;
  for (std::size_t k = 0; k < r; ++k)
    for (int s : {1, -1}) {
      QVec c(r);
      c[k] = s;
      f.push_back(c);
    }
  return PolyhedralNorm(std::move(f));
}

PolyhedralNorm PolyhedralNorm::l_one(std::size_t r) {
  std::vector<QVec> f;
  for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
    QVec c(r);
    for (std::size_t k = 0; k < r; ++k) c[k] = (mask >> k) & 1 ? -1 : 1;
    f.push_back(c);
  }
  return PolyhedralNorm(std::move(f));
}

Rat PolyhedralNorm::value(const QVec& v) const {
  Rat best = dot(f_[0], v);
  for (std::size_t l = 1; l < f_.size(); ++l) best = std::max(best, dot(f_[l], v));
  return best;
}

Rat PolyhedralNorm::dual_value(const QVec& w) const {
  if (w.size() != dim_) throw std::invalid_argument("dual norm: dimension mismatch");
  if (dim_ == 1) {
    // Closed form: the best functional of matching sign does all the work.
    if (sgn(w[0]) == 0) return 0;
    Rat best = 0;
    for (const auto& c : f_)
      if (sgn(c[0]) == sgn(w[0])) best = std::max(best, Rat(abs(c[0])));
    return abs(w[0]) / best;
  }
  GeneralLP g;
  g.minimize = true;
  for (std::size_t l = 0; l < f_.size(); ++l) {
    g.add_var(false);
    g.objective[l] = 1;
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    SparseRow row;
    for (std::size_t l = 0; l < f_.size(); ++l)
      if (sgn(f_[l][i])) row.emplace_back(l, f_[l][i]);
    g.add_row(std::move(row), Sense::eq, w[i]);
  }
  auto r = solve_general(g);
  if (r.status != LPStatus::optimal) throw std::logic_error("dual norm LP failed on a definite norm");
  return r.optimum;
}

// ------------------------------------------------------------ balls

std::size_t FiniteBall::n_unknown() const { return direction == Direction::cochain ? n_lower() : n_upper(); }

std::vector<std::size_t> FiniteBall::constraint_cells() const {
  std::vector<std::size_t> out;
  if (direction == Direction::cochain) {
    for (std::size_t i = 0; i < n_upper(); ++i) out.push_back(i);
  } else {
    for (std::size_t j = 0; j < n_lower(); ++j)
      if (lower_interior.empty() || lower_interior[j]) out.push_back(j);
  }
  return out;
}

std::size_t FiniteBall::n_constraint() const { return constraint_cells().size(); }

std::vector<SparseRow> FiniteBall::operator_rows() const {
  if (direction == Direction::cochain) return incidence;
  auto cells = constraint_cells();
  std::vector<std::size_t> row_of(n_lower(), SIZE_MAX);
  for (std::size_t k = 0; k < cells.size(); ++k) row_of[cells[k]] = k;
  std::vector<SparseRow> rows(cells.size());
  for (std::size_t i = 0; i < n_upper(); ++i)
    for (const auto& [j, a] : incidence[i])
      if (row_of[j] != SIZE_MAX) rows[row_of[j]].emplace_back(i, a);
  return rows;
}

void FiniteBall::validate() const {
  if (incidence.size() != n_upper()) throw std::invalid_argument("ball: incidence list per upper cell required");
  if (!upper_dist.empty() && upper_dist.size() != n_upper()) throw std::invalid_argument("ball: upper distances");
  if (!lower_dist.empty() && lower_dist.size() != n_lower()) throw std::invalid_argument("ball: lower distances");
  if (!lower_interior.empty() && lower_interior.size() != n_lower()) throw std::invalid_argument("ball: interior flags");
  std::vector<bool> touched(n_lower(), false);
  for (const auto& row : incidence)
    for (const auto& [j, a] : row) {
      if (j >= n_lower()) throw std::invalid_argument("ball: incidence index out of range");
      touched[j] = true;
    }
  for (std::size_t j = 0; j < n_lower(); ++j)
    if (!touched[j] && !(lower_interior.empty() || lower_interior[j]))
      throw std::invalid_argument("ball: lower cell neither incident nor interior: " +
                                  (j < lower_names.size() ? lower_names[j] : std::to_string(j)));
}

StandardLP assemble_primal(const FiniteBall& ball, const std::vector<QVec>& omega,
                           const std::vector<PolyhedralNorm>& norms, PrimalLayout* layout) {
  ball.validate();
  auto rows = ball.operator_rows();
  std::size_t nc = rows.size(), nu = ball.n_unknown(), r = ball.r;
  if (omega.size() != nc) throw std::invalid_argument("omega: one value per constraint cell required");
  if (norms.size() != nu) throw std::invalid_argument("norms: one per unknown cell required");
  for (const auto& o : omega)
    if (o.size() != r) throw std::invalid_argument("omega: wrong value dimension");
  for (const auto& nm : norms)
    if (nm.dim() != r) throw std::invalid_argument("norm: wrong dimension");
  PrimalLayout lay;
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t k = 0; k < r; ++k)
      if (sgn(omega[c][k])) lay.x_index.emplace_back(c, k);
  std::size_t nx = lay.x_index.size();
  lay.alpha_offset = nx;
  lay.alpha_count = nu * r;
  std::size_t nvar = nx + 2 * lay.alpha_count;
  std::size_t nB = 0;
  for (const auto& nm : norms) nB += nm.functionals().size();
  lay.rows_A = nx;
  lay.rows_C = 2 * nc * r;
  lay.rows_B = nB;
  StandardLP lp;
  lp.A = QMatrix(lay.rows_A + lay.rows_C + lay.rows_B, nvar);
  lp.b.assign(lp.A.rows(), Rat(0));
  lp.c.assign(nvar, Rat(0));
  auto ap = [&](std::size_t u, std::size_t k) { return nx + u * r + k; };
  auto am = [&](std::size_t u, std::size_t k) { return nx + lay.alpha_count + u * r + k; };
  std::size_t row = 0;
  for (std::size_t t = 0; t < nx; ++t) {
    auto [c, k] = lay.x_index[t];
    lp.A(row, t) = 1;
    lp.b[row] = abs(omega[c][k]);
    lp.c[t] = 1;
    ++row;
  }
  std::vector<std::size_t> x_of(nc * r, SIZE_MAX);
  for (std::size_t t = 0; t < nx; ++t) x_of[lay.x_index[t].first * r + lay.x_index[t].second] = t;
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t k = 0; k < r; ++k) {
      int s = sgn(omega[c][k]);
      std::size_t t = x_of[c * r + k];
      // Row pair: x - s (D alpha) <= 0 and its mirror; with omega = 0 it pins D alpha = 0.
      for (int mirror = 0; mirror < 2; ++mirror) {
        Rat flip = mirror ? -1 : 1;
        if (t != SIZE_MAX) lp.A(row, t) = flip;
        Rat scale = s ? Rat(-s) * flip : flip;
        for (const auto& [u, a] : rows[c]) {
          lp.A(row, ap(u, k)) += scale * a;
          lp.A(row, am(u, k)) -= scale * a;
        }
        ++row;
      }
      lay.c_rows.emplace_back(c, k);
    }
  for (std::size_t u = 0; u < nu; ++u)
    for (const auto& f : norms[u].functionals()) {
      for (std::size_t k = 0; k < r; ++k) {
        lp.A(row, ap(u, k)) = f[k];
        lp.A(row, am(u, k)) = -f[k];
      }
      lp.b[row] = 1;
      ++row;
    }
  if (layout) *layout = std::move(lay);
  return lp;
}

bool verify_certificate(const FiniteBall& ball, const std::vector<QVec>& omega,
                        const std::vector<PolyhedralNorm>& norms, const DualityCertificate& cert) {
  auto rows = ball.operator_rows();
  std::size_t r = ball.r;
  if (cert.kind == DualityCertificate::primitive) {
    if (cert.alpha.size() != ball.n_unknown()) return false;
    for (std::size_t u = 0; u < cert.alpha.size(); ++u)
      if (norms[u].value(cert.alpha[u]) > 1) return false;
    for (std::size_t c = 0; c < rows.size(); ++c) {
      QVec val(r);
      for (const auto& [u, a] : rows[c])
        for (std::size_t k = 0; k < r; ++k) val[k] += a * cert.alpha[u][k];
      if (val != omega[c]) return false;
    }
    return true;
  }
  if (cert.sigma.size() != rows.size()) return false;
  Rat content = 0;
  for (std::size_t c = 0; c < rows.size(); ++c) content += dot(omega[c], cert.sigma[c]);
  std::vector<QVec> w(ball.n_unknown(), QVec(r));
  for (std::size_t c = 0; c < rows.size(); ++c)
    for (const auto& [u, a] : rows[c])
      for (std::size_t k = 0; k < r; ++k) w[u][k] += a * cert.sigma[c][k];
  Rat bnorm = 0;
  for (std::size_t u = 0; u < w.size(); ++u)
    if (!is_zero(w[u])) bnorm += norms[u].dual_value(w[u]);
  return content == cert.content && bnorm == cert.boundary_norm && content > bnorm;
}

DualityCertificate bounded_primitive_or_violator(const FiniteBall& ball, const std::vector<QVec>& omega,
                                                 const std::vector<PolyhedralNorm>& norms) {
  PrimalLayout lay;
  StandardLP lp = assemble_primal(ball, omega, norms, &lay);
  LPResult res = simplex_solve(lp);
  if (res.status != LPStatus::optimal) throw std::logic_error("duality LP must be feasible and bounded");
  DualityCertificate cert;
  cert.primal_optimum = res.optimum;
  cert.omega_mass = 0;
  for (const auto& o : omega) cert.omega_mass += l1_norm(o);
  std::size_t r = ball.r, nu = ball.n_unknown();
  auto rows = ball.operator_rows();
  if (res.optimum == cert.omega_mass) {
    cert.kind = DualityCertificate::primitive;
    cert.alpha.assign(nu, QVec(r));
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t k = 0; k < r; ++k)
        cert.alpha[u][k] = res.primal[lay.alpha_offset + u * r + k] -
                           res.primal[lay.alpha_offset + lay.alpha_count + u * r + k];
  } else {
    cert.kind = DualityCertificate::violator;
    cert.sigma.assign(rows.size(), QVec(r));
    for (std::size_t t = 0; t < lay.c_rows.size(); ++t) {
      auto [c, k] = lay.c_rows[t];
      Rat C = res.dual[lay.rows_A + 2 * t] - res.dual[lay.rows_A + 2 * t + 1];
      int s = sgn(omega[c][k]);
      cert.sigma[c][k] = s ? Rat(s) * C : Rat(-C);
    }
    cert.content = 0;
    for (std::size_t c = 0; c < rows.size(); ++c) cert.content += dot(omega[c], cert.sigma[c]);
    std::vector<QVec> w(nu, QVec(r));
    for (std::size_t c = 0; c < rows.size(); ++c)
      for (const auto& [u, a] : rows[c])
        for (std::size_t k = 0; k < r; ++k) w[u][k] += a * cert.sigma[c][k];
    cert.boundary_norm = 0;
    for (std::size_t u = 0; u < nu; ++u)
      if (!is_zero(w[u])) cert.boundary_norm += norms[u].dual_value(w[u]);
  }
  cert.verified = verify_certificate(ball, omega, norms, cert);
  return cert;
}

std::optional<Rat> linf_min_bound(const FiniteBall& ball, const std::vector<QVec>& omega, QVec* witness) {
  ball.validate();
  auto rows = ball.operator_rows();
  std::size_t r = ball.r, nu = ball.n_unknown();
  if (omega.size() != rows.size()) throw std::invalid_argument("omega: one value per constraint cell required");
  GeneralLP g;
  g.minimize = true;
  for (std::size_t v = 0; v < nu * r; ++v) g.add_var(true);
  std::size_t K = g.add_var(false);
  g.objective[K] = 1;
  for (std::size_t c = 0; c < rows.size(); ++c)
    for (std::size_t k = 0; k < r; ++k) {
      SparseRow row;
      for (const auto& [u, a] : rows[c]) row.emplace_back(u * r + k, a);
      g.add_row(std::move(row), Sense::eq, omega[c][k]);
    }
  for (std::size_t v = 0; v < nu * r; ++v) {
    g.add_row({{v, Rat(1)}, {K, Rat(-1)}}, Sense::le, 0);
    g.add_row({{v, Rat(-1)}, {K, Rat(-1)}}, Sense::le, 0);
  }
  auto res = solve_general(g);
  if (res.status != LPStatus::optimal) return std::nullopt;
  if (witness) *witness = QVec(res.x.begin(), res.x.begin() + static_cast<long>(nu * r));
  return res.optimum;
}

std::vector<std::optional<Rat>> linf_coboundary_profile(
    const std::vector<std::pair<FiniteBall, std::vector<QVec>>>& family) {
  std::vector<std::optional<Rat>> out;
  for (const auto& [ball, omega] : family) out.push_back(linf_min_bound(ball, omega));
  return out;
}

WeightedVerdict weighted_primitive(const FiniteBall& ball, const std::vector<Rat>& sigma,
                                   const std::function<Rat(int)>& f) {
  if (ball.direction != Direction::chain) throw std::invalid_argument("weighted_primitive expects a chain-direction ball");
  if (ball.r != 1) throw std::invalid_argument("weighted_primitive works with scalar coefficients");
  std::vector<PolyhedralNorm> norms;
  for (std::size_t i = 0; i < ball.n_upper(); ++i) {
    int d = ball.upper_dist.empty() ? 0 : ball.upper_dist[i];
    norms.push_back(PolyhedralNorm::absolute(f(d)));
  }
  std::vector<QVec> omega;
  for (const auto& s : sigma) omega.push_back({s});
  WeightedVerdict v;
  v.certificate = bounded_primitive_or_violator(ball, omega, norms);
  v.zero_class = v.certificate.kind == DualityCertificate::primitive;
  return v;
}

}  // namespace qhl
