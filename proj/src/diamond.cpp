#include "qhl/diamond.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace qhl {

int DiamondCell::dim() const {
  int d = e0;
  for (char p : P) d += p != 0;
  return d;
}

int DiamondCell::top_level() const {
  for (int i = static_cast<int>(P.size()); i > 0; --i)
    if (P[static_cast<std::size_t>(i - 1)] != 0) return i;
  return 0;
}

namespace {

std::string cell_name(const DiamondCell& c) {
  std::string s = c.e0 ? "a" : "";
  for (std::size_t i = 0; i < c.P.size(); ++i)
    if (c.P[i]) s += std::string(1, c.P[i]) + std::to_string(i + 1);
  return s.empty() ? "v" : s;
}

int stable_letter(int m, char which) {
  return which == 'b' ? DiamondGroup::b_letter(m) : DiamondGroup::c_letter(m);
}

Elem power(const GroupOracle& G, int letter, long long e) {
  Elem out = G.identity();
  Elem base = G.letter(e < 0 ? -letter : letter);
  unsigned long long m = static_cast<unsigned long long>(e < 0 ? -e : e);
  while (m) {
    if (m & 1) out = G.multiply(out, base);
    m >>= 1;
    if (m) base = G.multiply(base, base);
  }
  return out;
}

Rat pow2(int e) {
  mpz_class z = 1;
  z <<= static_cast<mp_bitcnt_t>(e);
  return Rat(z);
}

}  // namespace

DiamondComplex::DiamondComplex(int n) : n_(n), G_(std::make_shared<DiamondGroup>(n)), cx_(G_) {
  if (n < 1 || n > 6) throw std::invalid_argument("diamond complex level must be in 1..6");
  // every (e0, P), grouped by dimension; within a dimension order by (top level, its letter, e0, P)
  std::vector<DiamondCell> all;
  std::size_t total = 2;
  for (int i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    DiamondCell c;
    c.e0 = static_cast<int>(code % 2);
    std::size_t r = code / 2;
    for (int i = 0; i < n; ++i, r /= 3) c.P.push_back(r % 3 == 0 ? 0 : r % 3 == 1 ? 'b' : 'c');
    all.push_back(c);
  }
  auto key = [](const DiamondCell& c) {
    int m = c.top_level();
    char l = m ? c.P[static_cast<std::size_t>(m - 1)] : 0;
    return std::make_tuple(c.dim(), m, l, c.e0, c.P);
  };
  std::sort(all.begin(), all.end(), [&](const DiamondCell& x, const DiamondCell& y) { return key(x) < key(y); });
  cells_.resize(static_cast<std::size_t>(n + 2));
  const Elem id = G_->identity();
  for (const auto& c : all) {
    int d = c.dim();
    std::vector<BoundaryTerm> terms;
    int m = c.top_level();
    if (m == 0) {
      if (c.e0) terms = {{0, G_->letter(1), 1}, {0, id, -1}};
    } else {
      DiamondCell E = c;
      char which = E.P[static_cast<std::size_t>(m - 1)];
      E.P[static_cast<std::size_t>(m - 1)] = 0;
      int dE = E.dim();
      std::size_t iE = index(E);
      // (dE) x I
      for (const auto& t : cx_.boundary_terms(dE, iE)) {
        DiamondCell F = cell(dE - 1, t.cell);
        F.P[static_cast<std::size_t>(m - 1)] = which;
        terms.push_back({index(F), t.g, t.coeff});
      }
      // (-1)^dim E (x . f(E) - E)
      Rat s = dE % 2 == 0 ? 1 : -1;
      Elem x = G_->letter(stable_letter(m, which));
      terms.push_back({iE, x, s});
      if (E.e0) terms.push_back({iE, G_->multiply(x, G_->letter(1)), s});
      terms.push_back({iE, id, -s});
    }
    std::size_t i = cx_.add_cell(d, cell_name(c), terms);
    cells_[static_cast<std::size_t>(d)].push_back(c);
    index_[{c.e0, c.P}] = i;
  }
}

std::size_t DiamondComplex::index(const DiamondCell& c) const {
  auto it = index_.find({c.e0, c.P});
  if (it == index_.end()) throw std::invalid_argument("no such diamond cell");
  return it->second;
}

std::size_t DiamondComplex::top_cell(const std::string& I) const {
  if (I.size() > static_cast<std::size_t>(n_)) throw std::invalid_argument("top cell word too long");
  DiamondCell c;
  c.e0 = 1;
  c.P.assign(static_cast<std::size_t>(n_), 0);
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (I[i] != 'b' && I[i] != 'c') throw std::invalid_argument("top cell letters are b and c");
    c.P[i] = I[i];
  }
  return index(c);
}

Chain DiamondComplex::times_interval(const Chain& x, int m, char which) const {
  Chain out;
  out.dim = x.dim + 1;
  for (const auto& [k, v] : x.c) {
    DiamondCell c = cell(x.dim, k.first);
    if (c.top_level() >= m) throw std::invalid_argument("cell already has a factor at this level");
    c.P[static_cast<std::size_t>(m - 1)] = which;
    out.add(index(c), k.second, v);
  }
  return out;
}

Elem DiamondComplex::rho(const Elem& g) const {
  Word w = G_->normal_word(g);
  Elem out = G_->identity();
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long long run = static_cast<long long>(j - i);
    int l = std::abs(w[i]);
    long long e = (w[i] > 0 ? run : -run) * (l == 1 ? 2 : 1);
    out = G_->multiply(out, power(*G_, l, e));
    i = j;
  }
  return out;
}

Chain DiamondComplex::rho(const Chain& x) const {
  Chain out;
  out.dim = x.dim;
  const Elem a = G_->letter(1);
  for (const auto& [k, v] : x.c) {
    Elem g = rho(k.second);
    if (cell(x.dim, k.first).e0) out.add(k.first, G_->multiply(g, a), v);
    out.add(k.first, std::move(g), v);
  }
  return out;
}

std::vector<Rat> DiamondComplex::sigma(int m) const {
  if (m < 1 || m > n_) throw std::invalid_argument("sigma level out of range");
  std::vector<Rat> s(cx_.count(m + 1), Rat(0));
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::string I;
    int nb = 0;
    for (int i = 0; i < m; ++i) {
      bool b = !(mask & (1u << i));
      I += b ? 'b' : 'c';
      nb += b;
    }
    s[top_cell(I)] = nb % 2 == 0 ? 1 : -1;
  }
  return s;
}

QMatrix DiamondComplex::base_boundary_matrix(int d) const {
  QMatrix M(cx_.count(d - 1), cx_.count(d));
  for (std::size_t i = 0; i < cx_.count(d); ++i)
    for (const auto& t : cx_.boundary_terms(d, i)) M(t.cell, i) += t.coeff;
  return M;
}

std::vector<Rat> DiamondComplex::base_boundary(int d, const std::vector<Rat>& x) const {
  QVec y = base_boundary_matrix(d) * QVec(x.begin(), x.end());
  return {y.begin(), y.end()};
}

Chain DiamondComplex::tau(int m, int k) const {
  if (m < 1 || m > n_) throw std::invalid_argument("tau level out of range");
  Chain out;
  out.dim = m + 1;
  if (k <= 0) return out;
  if (m == 1) {
    // disk bounded by b^-k a b^k c^-k a^-1 c^k, one strip per pair of stable letters
    const std::size_t a = index(DiamondCell{1, std::vector<char>(static_cast<std::size_t>(n_), 0)});
    for (int j = 0; j < k; ++j) {
      Chain path;
      path.dim = 1;
      Elem p = G_->identity();
      for (long long i = 0; i < (1LL << j); ++i) {
        path.add(a, p, 1);
        p = G_->times_letter(p, 1);
      }
      out = out + cx_.translate(power(*G_, stable_letter(1, 'c'), j - k), times_interval(path, 1, 'c'));
      out = out - cx_.translate(power(*G_, stable_letter(1, 'b'), j - k), times_interval(path, 1, 'b'));
    }
    return out;
  }
  // layer j sits at x^{-(k-j)-1}; its top rho tau(j) meets the bottom tau(j+1) of the next layer
  for (int j = 1; j <= k; ++j) {
    Chain t = tau(m - 1, j);
    out = out - cx_.translate(power(*G_, stable_letter(m, 'b'), -(k - j) - 1), times_interval(t, m, 'b'));
    out = out + cx_.translate(power(*G_, stable_letter(m, 'c'), -(k - j) - 1), times_interval(t, m, 'c'));
  }
  return out;
}

DiamondConstants diamond_constants(int n) {
  if (n < 1) throw std::invalid_argument("level must be positive");
  if (n == 1) return {6, 2};
  auto prev = diamond_constants(n - 1);
  Rat v1 = DiamondComplex(n - 1).tau(n - 1, 1).volume();
  return {2 * prev.C + 2 * prev.Cprime + 2 * v1, 2 * prev.Cprime + pow2(n + 1)};
}

std::vector<std::string> TauReport::violations() const {
  std::vector<std::string> v;
  if (!evaluation_is_multiple) v.push_back("chain evaluation is not a multiple of sigma");
  if (!K_ok) v.push_back(to_string(K_low) + " <= K = " + to_string(K) + " <= " + to_string(K_high));
  if (!boundary_ok) v.push_back("vol(boundary) = " + to_string(boundary_volume) + " <= " + to_string(boundary_bound));
  if (!rho_ok) v.push_back("rho difference = " + to_string(rho_diff) + " <= " + to_string(rho_bound));
  return v;
}

TauReport verify_tau(const DiamondComplex& X, int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  int n = X.level();
  const auto& cx = X.complex();
  TauReport r;
  r.n = n;
  r.k = k;
  Chain t = X.tau(n, k);
  r.volume = t.volume();
  auto ev = chain_evaluation(cx, t);
  auto sig = X.sigma(n);
  std::size_t pivot = X.top_cell(std::string(static_cast<std::size_t>(n), 'c'));
  r.K = ev[pivot] / sig[pivot];
  r.evaluation_is_multiple = true;
  for (std::size_t i = 0; i < ev.size(); ++i) r.evaluation_is_multiple &= ev[i] == r.K * sig[i];
  r.K_low = pow2(k);
  r.K_high = pow2(n + k);
  r.K_ok = r.K_low <= r.K && r.K <= r.K_high;
  auto C = diamond_constants(n);
  Rat kn = 1, kn1 = 1;
  for (int i = 0; i < n; ++i) kn *= k;
  for (int i = 0; i + 1 < n; ++i) kn1 *= k;
  r.boundary_volume = cx.boundary(t).volume();
  r.boundary_bound = C.C * kn;
  r.boundary_ok = r.boundary_volume <= r.boundary_bound;
  r.rho_diff = k >= 1 ? (X.rho(X.tau(n, k - 1)) - t).volume() : Rat(0);
  r.rho_bound = C.Cprime * kn1;
  r.rho_ok = r.rho_diff <= r.rho_bound;
  return r;
}

Word bs_word(int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  Word w;
  auto put = [&](int l, int c) { w.insert(w.end(), static_cast<std::size_t>(c), l); };
  put(-2, k);
  put(1, 1);
  put(2, k);
  put(1, 1);
  put(-2, k);
  put(-1, 1);
  put(2, k);
  put(-1, 1);
  return w;
}

Chain bs_word_boundary(const EquivariantComplex& bs12, int k) {
  if (bs12.group().name() != "BS12") throw std::invalid_argument("bs_word_boundary needs the BS(1,2) complex");
  return word_cycle(bs12, bs_word(k));
}

}  // namespace qhl
