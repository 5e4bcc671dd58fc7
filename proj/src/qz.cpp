#include "qhl/qz.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace qhl {

LaurentPoly::LaurentPoly(QPoly p, long offset) : off_(offset) {
  const auto& c = p.coeffs();
  std::size_t z = 0;
  while (z < c.size() && c[z] == 0) ++z;
  if (z == c.size()) {
    off_ = 0;
    return;
  }
  p_ = z ? QPoly(std::vector<Rat>(c.begin() + static_cast<long>(z), c.end())) : std::move(p);
  off_ += static_cast<long>(z);
}

LaurentPoly::LaurentPoly(const Rat& c) : LaurentPoly(QPoly::constant(c)) {}

LaurentPoly LaurentPoly::monomial(const Rat& c, long k) { return {QPoly::constant(c), k}; }

Rat LaurentPoly::coeff(long k) const {
  if (is_zero() || k < off_) return 0;
  return p_.coeff(static_cast<std::size_t>(k - off_));
}

namespace {

std::vector<Rat> dense(const LaurentPoly& a, long lo, long hi) {
  std::vector<Rat> v(static_cast<std::size_t>(hi - lo + 1), Rat(0));
  for (long k = a.low(); !a.is_zero() && k <= a.high(); ++k) v[static_cast<std::size_t>(k - lo)] = a.coeff(k);
  return v;
}

LaurentPoly combine(const LaurentPoly& a, const LaurentPoly& b, const Rat& sb) {
  if (a.is_zero()) return b.scaled(sb);
  if (b.is_zero()) return a;
  long lo = std::min(a.low(), b.low()), hi = std::max(a.high(), b.high());
  auto x = dense(a, lo, hi), y = dense(b, lo, hi);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += sb * y[i];
  return {QPoly(std::move(x)), lo};
}

}  // namespace

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const { return combine(*this, o, 1); }
LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return combine(*this, o, -1); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  return {p_ * o.p_, off_ + o.off_};
}

LaurentPoly LaurentPoly::scaled(const Rat& s) const {
  if (s == 0 || is_zero()) return {};
  return {p_.scaled(s), off_};
}

LaurentPoly LaurentPoly::shifted(long k) const { return is_zero() ? *this : LaurentPoly(p_, off_ + k); }

std::pair<LaurentPoly, LaurentPoly> LaurentPoly::divmod(const LaurentPoly& d) const {
  if (d.is_zero()) throw std::domain_error("division by zero Laurent polynomial");
  if (is_zero()) return {{}, {}};
  auto [q, r] = p_.divmod(d.p_);
  return {LaurentPoly(q, off_ - d.off_), LaurentPoly(r, off_)};
}

std::optional<LaurentPoly> LaurentPoly::exact_div(const LaurentPoly& d) const {
  auto [q, r] = divmod(d);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

LaurentPoly LaurentPoly::unit_inverse() const {
  if (!is_unit()) throw std::domain_error("not a unit: " + to_string());
  return monomial(1 / p_.coeff(0), -off_);
}

LaurentPoly LaurentPoly::normalizing_unit() const {
  if (is_zero()) return {1};
  return monomial(1 / p_.lead(), -off_);
}

LaurentPoly LaurentPoly::normalized() const { return is_zero() ? *this : normalizing_unit() * *this; }

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (long k = low(); k <= high(); ++k) {
    Rat c = coeff(k);
    if (c == 0) continue;
    bool neg = c < 0;
    Rat a = neg ? Rat(-c) : c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    std::string mono = k == 0 ? "" : k == 1 ? "t" : "t^" + std::to_string(k);
    if (mono.empty())
      s += qhl::to_string(a);
    else if (a == 1)
      s += mono;
    else
      s += qhl::to_string(a) + "*" + mono;
  }
  return s;
}

LaurentPoly parse_laurent(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty Laurent polynomial");
  LaurentPoly out;
  std::size_t i = 0;
  while (i < s.size()) {
    Rat sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && !((s[j] == '+' || s[j] == '-') && j > i && s[j - 1] != '^')) ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw std::invalid_argument("bad Laurent polynomial: " + std::string(text));
    auto tp = term.find_first_of("tx");
    Rat c = 1;
    long e = 0;
    if (tp == std::string::npos) {
      c = parse_rat(term);
    } else {
      std::string cs = term.substr(0, tp);
      if (!cs.empty() && cs.back() == '*') cs.pop_back();
      if (!cs.empty()) c = parse_rat(cs);
      std::string rest = term.substr(tp + 1);
      if (rest.empty())
        e = 1;
      else if (rest[0] == '^')
        e = std::stol(rest.substr(1));
      else
        throw std::invalid_argument("bad Laurent term: " + term);
    }
    out = out + LaurentPoly::monomial(sign * c, e);
    i = j;
  }
  return out;
}

// ---- matrices ----

LMatrix LMatrix::identity(std::size_t n) {
  LMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

LMatrix LMatrix::operator*(const LMatrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("Laurent matrix shape mismatch");
  LMatrix m(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      const auto& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < o.c_; ++j)
        if (!o(k, j).is_zero()) m(i, j) = m(i, j) + a * o(k, j);
    }
  return m;
}

LMatrix LMatrix::operator+(const LMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Laurent matrix shape mismatch");
  LMatrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = m.a_[i] + o.a_[i];
  return m;
}

LMatrix LMatrix::operator-(const LMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Laurent matrix shape mismatch");
  LMatrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = m.a_[i] - o.a_[i];
  return m;
}

bool LMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const LaurentPoly& p) { return p.is_zero(); });
}

LMatrix LMatrix::block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
  LMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

LaurentPoly determinant(const LMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  LaurentPoly d;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    LMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = m(i, k);
    LaurentPoly t = m(0, j) * determinant(minor);
    d = j % 2 ? d - t : d + t;
  }
  return d;
}

LMatrix parse_lmatrix(const std::vector<std::vector<std::string>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  LMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged Laurent matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = parse_laurent(rows[i][j]);
  }
  return m;
}

// ---- Smith form ----

namespace {

void swap_rows(LMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(LMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row dst += f * row src
void add_row(LMatrix& m, std::size_t dst, std::size_t src, const LaurentPoly& f) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!m(src, j).is_zero()) m(dst, j) = m(dst, j) + f * m(src, j);
}
void add_col(LMatrix& m, std::size_t dst, std::size_t src, const LaurentPoly& f) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m(i, src).is_zero()) m(i, dst) = m(i, dst) + m(i, src) * f;
}
void scale_row(LMatrix& m, std::size_t r, const LaurentPoly& f) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = f * m(r, j);
}

}  // namespace

SmithForm laurent_snf(const LMatrix& M) {
  SmithForm S;
  S.D = M;
  S.U = LMatrix::identity(M.rows());
  S.V = LMatrix::identity(M.cols());
  LMatrix& D = S.D;
  std::size_t m = M.rows(), n = M.cols(), t = 0;
  for (; t < std::min(m, n); ++t) {
    // pivot: smallest span in the remaining block
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (!D(i, j).is_zero() && (pi == m || D(i, j).span() < D(pi, pj).span())) pi = i, pj = j;
    if (pi == m) break;
    swap_rows(D, t, pi);
    swap_rows(S.U, t, pi);
    swap_cols(D, t, pj);
    swap_cols(S.V, t, pj);
    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t).is_zero()) continue;
        LaurentPoly q = D(i, t).divmod(D(t, t)).first;
        add_row(D, i, t, -q);
        add_row(S.U, i, t, -q);
        if (!D(i, t).is_zero()) {
          swap_rows(D, t, i);
          swap_rows(S.U, t, i);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j).is_zero()) continue;
        LaurentPoly q = D(t, j).divmod(D(t, t)).first;
        add_col(D, j, t, -q);
        add_col(S.V, j, t, -q);
        if (!D(t, j).is_zero()) {
          swap_cols(D, t, j);
          swap_cols(S.V, t, j);
          changed = true;
        }
      }
      if (changed) continue;
      // the pivot must divide the rest of the block
      for (std::size_t i = t + 1; i < m && !changed; ++i)
        for (std::size_t j = t + 1; j < n && !changed; ++j)
          if (!D(i, j).exact_div(D(t, t))) {
            add_row(D, t, i, 1);
            add_row(S.U, t, i, 1);
            changed = true;
          }
      if (!changed) break;
    }
    LaurentPoly u = D(t, t).normalizing_unit();
    scale_row(D, t, u);
    scale_row(S.U, t, u);
    S.invariants.push_back(D(t, t));
  }
  S.rank = t;
  if (!(S.U * M * S.V == S.D)) throw std::logic_error("Smith form failed its recomputation check");
  return S;
}

namespace {

struct SolveOutcome {
  std::optional<std::vector<LaurentPoly>> x;
  std::string why;
};

std::vector<LaurentPoly> mat_vec(const LMatrix& A, const std::vector<LaurentPoly>& v) {
  std::vector<LaurentPoly> out(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!A(i, j).is_zero() && !v[j].is_zero()) out[i] = out[i] + A(i, j) * v[j];
  return out;
}

SolveOutcome solve_detail(const LMatrix& L, const std::vector<LaurentPoly>& b) {
  if (b.size() != L.rows()) throw std::invalid_argument("right-hand side has the wrong length");
  SmithForm S = laurent_snf(L);
  auto c = mat_vec(S.U, b);
  std::vector<LaurentPoly> y(L.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < S.rank) {
      auto q = c[i].exact_div(S.invariants[i]);
      if (!q)
        return {std::nullopt, "invariant factor " + S.invariants[i].to_string() + " does not divide " + c[i].to_string() +
                                  " in row " + std::to_string(i)};
      y[i] = *q;
    } else if (!c[i].is_zero()) {
      return {std::nullopt, "row " + std::to_string(i) + " beyond the rank has nonzero entry " + c[i].to_string()};
    }
  }
  return {mat_vec(S.V, y), ""};
}

std::vector<LaurentPoly> column_of(const LMatrix& m, std::size_t j) {
  std::vector<LaurentPoly> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

bool in_column_span(const LMatrix& P, const std::vector<LaurentPoly>& v) { return solve_detail(P, v).x.has_value(); }

}  // namespace

std::optional<std::vector<LaurentPoly>> laurent_solve(const LMatrix& L, const std::vector<LaurentPoly>& b) {
  return solve_detail(L, b).x;
}

// ---- modules ----

QZModule QZModule::cyclic(const LaurentPoly& p) {
  LMatrix m(1, 1);
  m(0, 0) = p;
  return {m};
}

QZModule QZModule::direct_sum(const QZModule& a, const QZModule& b) {
  const auto& A = a.relations;
  const auto& B = b.relations;
  LMatrix m(A.rows() + B.rows(), A.cols() + B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) m(i, j) = A(i, j);
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) m(A.rows() + i, A.cols() + j) = B(i, j);
  return {m};
}

std::vector<LaurentPoly> invariant_factors(const QZModule& M) {
  SmithForm S = laurent_snf(M.relations);
  std::vector<LaurentPoly> out;
  for (const auto& d : S.invariants)
    if (!d.is_unit()) out.push_back(d);
  for (std::size_t i = S.rank; i < M.gens(); ++i) out.emplace_back();
  return out;
}

bool isomorphic(const QZModule& a, const QZModule& b) { return invariant_factors(a) == invariant_factors(b); }

bool map_well_defined(const QZModule& A, const QZModule& M, const LMatrix& F) {
  if (F.rows() != M.gens() || F.cols() != A.gens()) throw std::invalid_argument("map matrix has the wrong shape");
  LMatrix img = F * A.relations;
  for (std::size_t j = 0; j < img.cols(); ++j)
    if (!in_column_span(M.relations, column_of(img, j))) return false;
  return true;
}

bool verify_retraction(const QZModule& A, const QZModule& M, const LMatrix& F, const LMatrix& G) {
  if (G.rows() != A.gens() || G.cols() != M.gens()) return false;
  if (!map_well_defined(M, A, G)) return false;
  LMatrix diff = G * F - LMatrix::identity(A.gens());
  for (std::size_t j = 0; j < diff.cols(); ++j)
    if (!in_column_span(A.relations, column_of(diff, j))) return false;
  return true;
}

SplitResult splitting_test(const QZModule& A, const QZModule& M, const LMatrix& F) {
  if (!map_well_defined(A, M, F)) throw std::invalid_argument("ill-defined map: relations are not sent into relations");
  const std::size_t a = A.gens(), m = M.gens(), nM = M.relations.cols(), nA = A.relations.cols();
  SplitResult res;
  if (a == 0) {
    res.split = true;
    res.retraction = LMatrix(0, m);
    return res;
  }
  // unknowns G (a x m), Y (nA x nM), Z (nA x a) with G P_M = P_A Y and G F - I = P_A Z
  const std::size_t oY = a * m, oZ = oY + nA * nM, nu = oZ + nA * a;
  const std::size_t ne = a * nM + a * a;
  LMatrix L(ne, nu);
  std::vector<LaurentPoly> b(ne);
  const auto& PM = M.relations;
  const auto& PA = A.relations;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t l = 0; l < nM; ++l) {
      std::size_t e = i * nM + l;
      for (std::size_t k = 0; k < m; ++k) L(e, i * m + k) = PM(k, l);
      for (std::size_t p = 0; p < nA; ++p) L(e, oY + p * nM + l) = -PA(i, p);
    }
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t l = 0; l < a; ++l) {
      std::size_t e = a * nM + i * a + l;
      for (std::size_t k = 0; k < m; ++k) L(e, i * m + k) = F(k, l);
      for (std::size_t p = 0; p < nA; ++p) L(e, oZ + p * a + l) = -PA(i, p);
      if (i == l) b[e] = 1;
    }
  auto out = solve_detail(L, b);
  if (!out.x) {
    res.certificate = out.why;
    return res;
  }
  res.split = true;
  res.retraction = LMatrix(a, m);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t k = 0; k < m; ++k) res.retraction(i, k) = (*out.x)[i * m + k];
  if (!verify_retraction(A, M, F, res.retraction)) throw std::logic_error("retraction failed verification");
  return res;
}

QZModule ext_module(const QZModule& M, const QZModule& N) {
  SmithForm S = laurent_snf(M.relations);
  QZModule out{LMatrix(0, 0)};
  const std::size_t n = N.gens();
  for (const auto& d : S.invariants) {
    if (d.is_unit()) continue;
    LMatrix rel(n, N.relations.cols() + n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < N.relations.cols(); ++j) rel(i, j) = N.relations(i, j);
      rel(i, N.relations.cols() + i) = d;
    }
    out = QZModule::direct_sum(out, {rel});
  }
  return out;
}

// ---- lifting homomorphisms ----

std::size_t FreeComplex::rank(int k) const {
  if (k < 0 || k > top()) return 0;
  return names[static_cast<std::size_t>(k)].size();
}

LMatrix FreeComplex::boundary(int k) const {
  if (k <= 0 || k > top()) return LMatrix(rank(k - 1), rank(k));
  return d[static_cast<std::size_t>(k)];
}

bool FreeComplex::is_complex() const {
  if (d.size() != names.size()) return false;
  for (int k = 1; k <= top(); ++k) {
    const auto& m = d[static_cast<std::size_t>(k)];
    if (m.rows() != rank(k - 1) || m.cols() != rank(k)) return false;
    if (k >= 2 && !(boundary(k - 1) * m).is_zero()) return false;
  }
  return true;
}

namespace {

LMatrix sub_rows_cols(const LMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  LMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& s) {
  std::set<std::size_t> in(s.begin(), s.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!in.count(i)) out.push_back(i);
  return out;
}

// X_k x K_k inclusion
LMatrix inclusion(std::size_t n, const std::vector<std::size_t>& K) {
  LMatrix m(n, K.size());
  for (std::size_t p = 0; p < K.size(); ++p) m(K[p], p) = 1;
  return m;
}

const std::vector<std::size_t>& cells_at(const std::vector<std::vector<std::size_t>>& K, int k) {
  static const std::vector<std::size_t> none;
  if (k < 0 || static_cast<std::size_t>(k) >= K.size()) return none;
  return K[static_cast<std::size_t>(k)];
}

}  // namespace

LiftingResult lifting_homomorphism(const FreeComplex& X, const std::vector<std::vector<std::size_t>>& K, int n) {
  if (!X.is_complex()) throw std::invalid_argument("X is not a chain complex");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  for (int k = 0; k <= X.top(); ++k) {
    const auto& Kk = cells_at(K, k);
    std::set<std::size_t> below(cells_at(K, k - 1).begin(), cells_at(K, k - 1).end());
    auto dk = X.boundary(k);
    for (auto e : Kk) {
      if (e >= X.rank(k)) throw std::invalid_argument("subcomplex cell index out of range");
      for (std::size_t i = 0; i < dk.rows(); ++i)
        if (!dk(i, e).is_zero() && !below.count(i)) throw std::invalid_argument("K is not closed under the boundary");
    }
  }
  // the quotient must be acyclic through degree n
  for (int k = 0; k <= n; ++k) {
    auto Qk = complement(X.rank(k), cells_at(K, k));
    auto Qk1 = complement(X.rank(k + 1), cells_at(K, k + 1));
    auto Qkm = complement(X.rank(k - 1), cells_at(K, k - 1));
    auto lo = laurent_snf(sub_rows_cols(X.boundary(k), Qkm, Qk));
    auto hi = laurent_snf(sub_rows_cols(X.boundary(k + 1), Qk, Qk1));
    bool units = std::all_of(hi.invariants.begin(), hi.invariants.end(), [](const LaurentPoly& p) { return p.is_unit(); });
    if (lo.rank + hi.rank != Qk.size() || !units)
      throw std::invalid_argument("quotient has homology in degree " + std::to_string(k));
  }
  LiftingResult r;
  for (int k = 0; k <= n; ++k) {
    const auto& Kk = cells_at(K, k);
    std::size_t nk = X.rank(k);
    LMatrix jk(Kk.size(), nk), uk(X.rank(k + 1), nk);
    LMatrix dk = X.boundary(k), dk1 = X.boundary(k + 1);
    // [i | -d_{k+1}] (c; u) = e + u_{k-1}(d e)
    LMatrix sys(nk, Kk.size() + X.rank(k + 1));
    for (std::size_t p = 0; p < Kk.size(); ++p) sys(Kk[p], p) = 1;
    for (std::size_t i = 0; i < nk; ++i)
      for (std::size_t j = 0; j < X.rank(k + 1); ++j) sys(i, Kk.size() + j) = -dk1(i, j);
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t p = 0; p < Kk.size(); ++p) pos[Kk[p]] = p;
    for (std::size_t e = 0; e < nk; ++e) {
      if (pos.count(e)) {
        jk(pos[e], e) = 1;
        continue;
      }
      std::vector<LaurentPoly> w(nk);
      w[e] = 1;
      if (k >= 1) {
        auto de = column_of(dk, e);
        auto ude = mat_vec(r.u[static_cast<std::size_t>(k - 1)], de);
        for (std::size_t i = 0; i < nk; ++i) w[i] = w[i] + ude[i];
      }
      auto sol = solve_detail(sys, w);
      if (!sol.x) throw std::logic_error("lifting step has no solution: " + sol.why);
      for (std::size_t p = 0; p < Kk.size(); ++p) jk(p, e) = (*sol.x)[p];
      for (std::size_t j = 0; j < X.rank(k + 1); ++j) uk(j, e) = (*sol.x)[Kk.size() + j];
    }
    r.j.push_back(jk);
    r.u.push_back(uk);
  }
  r.verified = verify_lifting(X, K, n, r);
  if (!r.verified) throw std::logic_error("lifting homomorphism failed its identities");
  return r;
}

bool verify_lifting(const FreeComplex& X, const std::vector<std::vector<std::size_t>>& K, int n,
                    const LiftingResult& r) {
  if (r.j.size() != static_cast<std::size_t>(n + 1) || r.u.size() != static_cast<std::size_t>(n + 1)) return false;
  for (int k = 0; k <= n; ++k) {
    auto uk = static_cast<std::size_t>(k);
    const auto& Kk = cells_at(K, k);
    LMatrix ik = inclusion(X.rank(k), Kk);
    if (!(r.j[uk] * ik == LMatrix::identity(Kk.size()))) return false;
    LMatrix lhs = ik * r.j[uk] - LMatrix::identity(X.rank(k));
    LMatrix rhs = X.boundary(k + 1) * r.u[uk];
    if (k >= 1) {
      rhs = rhs + r.u[uk - 1] * X.boundary(k);
      LMatrix dK = sub_rows_cols(X.boundary(k), cells_at(K, k - 1), Kk);
      if (!(dK * r.j[uk] == r.j[uk - 1] * X.boundary(k))) return false;
    }
    if (!(lhs == rhs)) return false;
  }
  return true;
}

// ---- certificate chains ----

QMatrix companion_matrix(const QPoly& q) {
  if (q.degree() < 1) throw std::invalid_argument("companion matrix needs a nonconstant polynomial");
  QPoly m = q.monic();
  std::size_t r = static_cast<std::size_t>(m.degree());
  QMatrix A(r, r);
  for (std::size_t i = 0; i + 1 < r; ++i) A(i + 1, i) = 1;
  for (std::size_t i = 0; i < r; ++i) A(i, r - 1) = -m.coeff(i);
  return A;
}

namespace {

bool positive_definite(const QMatrix& H) {
  for (std::size_t k = 1; k <= H.rows(); ++k) {
    QMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = H(i, j);
    if (m.det() <= 0) return false;
  }
  return true;
}

Rat form(const QMatrix& H, const QVec& v) { return dot(v, H * v); }

LaurentPoly T_of(const QVec& v, long shift) {
  return LaurentPoly(QPoly(std::vector<Rat>(v.begin(), v.end())), shift);
}

}  // namespace

std::optional<QMatrix> invariant_form(const QMatrix& A) {
  const std::size_t r = A.rows();
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) slots.emplace_back(i, j);
  auto sym = [&](const QVec& x) {
    QMatrix H(r, r);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      H(slots[s].first, slots[s].second) = x[s];
      H(slots[s].second, slots[s].first) = x[s];
    }
    return H;
  };
  // linear map H -> A^T H A - H on symmetric matrices
  QMatrix L(slots.size(), slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    QVec e(slots.size(), Rat(0));
    e[s] = 1;
    QMatrix H = sym(e);
    QMatrix D = A.transpose() * H * A - H;
    for (std::size_t t = 0; t < slots.size(); ++t) L(t, s) = D(slots[t].first, slots[t].second);
  }
  auto basis = L.kernel();
  if (basis.empty()) return std::nullopt;
  const std::size_t k = basis.size();
  for (long bound = 1; bound <= 4; ++bound) {
    std::vector<long> c(k, -bound);
    for (;;) {
      bool edge = std::any_of(c.begin(), c.end(), [&](long x) { return std::labs(x) == bound; });
      if (edge) {
        QVec x(slots.size(), Rat(0));
        for (std::size_t b = 0; b < k; ++b)
          for (std::size_t s = 0; s < slots.size(); ++s) x[s] += Rat(c[b]) * basis[b][s];
        QMatrix H = sym(x);
        if (positive_definite(H)) return H;
      }
      std::size_t i = 0;
      while (i < k && c[i] == bound) c[i++] = -bound;
      if (i == k) break;
      ++c[i];
    }
  }
  return std::nullopt;
}

bool Certificate::ok() const {
  return split_exact && E.is_zero() && F_bounded && pairing == pairing_direct;
}

Certificate certificate_chains(const QPoly& q0, int s, QVec mu) {
  if (q0.degree() < 1) throw std::invalid_argument("q must be nonconstant");
  QPoly q = q0.monic();
  if (q.coeff(0) == 0) throw std::invalid_argument("q(0) = 0: t is not invertible modulo q");
  if (poly_gcd(q, q.derivative()).degree() > 0) throw std::invalid_argument("q is not squarefree");
  if (!all_roots_on_unit_circle(q)) throw std::invalid_argument("q has a root off the unit circle");
  const int r = static_cast<int>(q.degree());
  if (s < r) throw std::invalid_argument("s must be at least deg q");
  const auto ur = static_cast<std::size_t>(r);
  if (mu.empty()) {
    mu.assign(ur, Rat(0));
    mu[0] = 1;
  }
  if (mu.size() != ur) throw std::invalid_argument("mu has the wrong dimension");

  Certificate C;
  C.s = s;
  C.r = r;
  C.A = companion_matrix(q);
  auto H = invariant_form(C.A);
  if (!H) throw std::runtime_error("no invariant positive definite form found");
  C.H = *H;
  const QMatrix& A = C.A;
  const long M = s - 1;
  QVec e1(ur, Rat(0));
  e1[0] = 1;

  std::vector<QVec> Aj{e1};  // A^j e1, j = 0..M
  for (long j = 1; j <= M; ++j) Aj.push_back(A * Aj.back());
  for (long j = 0; j <= M; ++j) C.P = C.P + T_of(Aj[static_cast<std::size_t>(j)], M - j);
  LaurentPoly qL(q);
  C.boundary = C.P * qL;

  // reindex i = j - l: middle shifts carry A^i q(A) e1 = 0
  QVec qe1 = q.eval(A) * e1;
  QVec Ai = qe1;
  for (long i = 0; i <= M - r; ++i) {
    C.E = C.E + T_of(Ai, M - i);
    Ai = A * Ai;
  }
  // top shifts: fixed vectors just above t^{s-1}
  for (long i = -r; i <= -1; ++i) {
    QVec g(ur, Rat(0));
    for (long l = -i; l <= r; ++l) {
      QVec v = Aj[static_cast<std::size_t>(i + l)];
      for (std::size_t x = 0; x < ur; ++x) g[x] += q.coeff(static_cast<std::size_t>(l)) * v[x];
    }
    C.G = C.G + T_of(g, M - i);
  }
  // window shifts d = 0..r-1 carry A^M u_d with u_d independent of s
  QMatrix Ainv = A.inverse();
  QMatrix AM = A.pow(M);
  C.F_bounded = true;
  for (long d = 0; d < r; ++d) {
    QVec w(ur, Rat(0));
    for (long l = 0; l <= d; ++l) {
      QVec v = Aj[static_cast<std::size_t>(l)];
      for (std::size_t x = 0; x < ur; ++x) w[x] += q.coeff(static_cast<std::size_t>(l)) * v[x];
    }
    QVec u = Ainv.pow(d) * w;
    QVec f = AM * u;
    C.F = C.F + T_of(f, d);
    Rat nf = form(C.H, f);
    C.F_bounded = C.F_bounded && nf == form(C.H, u);
    if (nf > C.F_norm) C.F_norm = nf;
  }
  if (!C.F.is_zero() && (C.F.low() < 0 || C.F.high() > 2 * r - 2)) C.F_bounded = false;
  C.split_exact = C.boundary == C.E + C.F + C.G;

  C.G_volume = 0;
  C.G_denominator = 1;
  for (long k = C.G.low(); !C.G.is_zero() && k <= C.G.high(); ++k) {
    Rat c = C.G.coeff(k);
    C.G_volume += c < 0 ? Rat(-c) : c;
    mpz_lcm(C.G_denominator.get_mpz_t(), C.G_denominator.get_mpz_t(), c.get_den_mpz_t());
  }

  C.pairing = C.A.pow(M) * mu;
  for (auto& x : C.pairing) x *= s;
  C.pairing_direct.assign(ur, Rat(0));
  QVec Am = mu;
  for (long m = 0; m <= C.P.high(); ++m) {
    Rat p = C.P.coeff(m);
    for (std::size_t x = 0; x < ur; ++x) C.pairing_direct[x] += p * Am[x];
    Am = A * Am;
  }
  C.pairing_norm = form(C.H, C.pairing);
  return C;
}

}  // namespace qhl
