#include "qhl/exact.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qhl {

Rat parse_rat(std::string_view s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.empty()) throw std::invalid_argument("empty rational");
  if (t[0] == '+') t.erase(0, 1);
  auto slash = t.find('/');
  auto digits_ok = [](std::string_view d, bool allow_sign) {
    if (d.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && d[0] == '-') i = 1;
    if (i == d.size()) return false;
    for (; i < d.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    return true;
  };
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false))
    throw std::invalid_argument("bad rational '" + std::string(s) + "'");
  BigInt n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

std::string to_string(const QVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

BigInt floor_div(const Rat& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt ceil_div(const Rat& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt round_half_to_zero(const Rat& r) {
  if (r < 0) return -round_half_to_zero(-r);
  BigInt f = floor_div(r);
  Rat frac = r - Rat(f);
  if (frac > Rat(1, 2)) return f + 1;
  return f;
}

bool is_integer(const Rat& r) { return r.get_den() == 1; }
int sign(const Rat& r) { return sgn(r); }

Rat dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) && sgn(b[i])) s += a[i] * b[i];
  return s;
}

QVec operator+(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec operator-(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVec operator*(const Rat& s, const QVec& v) {
  QVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

Rat l1_norm(const QVec& v) {
  Rat s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

bool is_zero(const QVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

// ---------------------------------------------------------------- QMatrix

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<Rat>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  QMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QMatrix QMatrix::column(const QVec& v) {
  QMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

QMatrix QMatrix::diagonal(const QVec& d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

QVec QMatrix::row(std::size_t i) const { return QVec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

QVec QMatrix::col(std::size_t j) const {
  QVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  QMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& x = (*this)(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (sgn(o(k, j))) r(i, j) += x * o(k, j);
    }
  return r;
}

QVec QMatrix::operator*(const QVec& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix-vector: shape mismatch");
  QVec r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (sgn((*this)(i, k)) && sgn(v[k])) r[i] += (*this)(i, k) * v[k];
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

QMatrix QMatrix::scaled(const Rat& s) const {
  QMatrix r = *this;
  for (auto& x : r.a_) x *= s;
  return r;
}

bool QMatrix::operator==(const QMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

QMatrix QMatrix::transpose() const {
  QMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

QMatrix QMatrix::pow(long long e) const {
  if (!square()) throw std::invalid_argument("pow: non-square matrix");
  QMatrix base = e < 0 ? inverse() : *this;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
  QMatrix r = identity(rows_);
  while (n) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

namespace {

// Row-reduces m in place to reduced echelon form; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rat inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (sgn(m(r, j))) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

QMatrix QMatrix::inverse() const {
  if (!square()) throw std::invalid_argument("inverse: non-square matrix");
  std::size_t n = rows_;
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
  QMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

Rat QMatrix::det() const {
  if (!square()) throw std::invalid_argument("det: non-square matrix");
  QMatrix m = *this;
  Rat d = 1;
  std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

std::size_t QMatrix::rank() const {
  QMatrix m = *this;
  return rref(m).size();
}

std::optional<QVec> QMatrix::solve(const QVec& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solve: shape mismatch");
  QMatrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == cols_) return std::nullopt;
  QVec x(cols_);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, cols_);
  return x;
}

std::vector<QVec> QMatrix::kernel() const {
  QMatrix m = *this;
  auto piv = rref(m);
  std::vector<bool> is_piv(cols_, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<QVec> basis;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_piv[f]) continue;
    QVec v(cols_);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool QMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rat& x) { return sgn(x) == 0; });
}

BigInt QMatrix::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& x : a_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }

void QPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

QPoly QPoly::constant(const Rat& c) { return QPoly(std::vector<Rat>{c}); }

QPoly QPoly::x_power(std::size_t k) {
  std::vector<Rat> c(k + 1);
  c[k] = 1;
  return QPoly(std::move(c));
}

QPoly QPoly::linear_root(const Rat& r) { return QPoly(std::vector<Rat>{-r, Rat(1)}); }

QPoly QPoly::operator+(const QPoly& o) const {
  std::vector<Rat> c(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) + o.coeff(i);
  return QPoly(std::move(c));
}

QPoly QPoly::operator-(const QPoly& o) const {
  std::vector<Rat> c(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) - o.coeff(i);
  return QPoly(std::move(c));
}

QPoly QPoly::operator*(const QPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rat> c(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  }
  return QPoly(std::move(c));
}

QPoly QPoly::scaled(const Rat& s) const {
  std::vector<Rat> c = c_;
  for (auto& x : c) x *= s;
  return QPoly(std::move(c));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rat> r = c_;
  long dd = d.degree();
  if (degree() < dd) return {QPoly(), *this};
  std::vector<Rat> q(static_cast<std::size_t>(degree() - dd + 1));
  Rat inv = 1 / d.lead();
  for (long k = degree() - dd; k >= 0; --k) {
    Rat f = r[static_cast<std::size_t>(k + dd)] * inv;
    q[static_cast<std::size_t>(k)] = f;
    if (sgn(f) == 0) continue;
    for (long j = 0; j <= dd; ++j) r[static_cast<std::size_t>(k + j)] -= f * d.c_[static_cast<std::size_t>(j)];
  }
  r.resize(static_cast<std::size_t>(dd));
  return {QPoly(std::move(q)), QPoly(std::move(r))};
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  return scaled(1 / lead());
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rat> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return QPoly(std::move(c));
}

QPoly QPoly::reciprocal() const {
  std::vector<Rat> c(c_.rbegin(), c_.rend());
  return QPoly(std::move(c));
}

Rat QPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

QMatrix QPoly::eval(const QMatrix& m) const {
  if (!m.square()) throw std::invalid_argument("poly eval: non-square matrix");
  QMatrix r(m.rows(), m.cols());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * m + QMatrix::identity(m.rows()).scaled(*it);
  return r;
}

std::string QPoly::to_string(char var) const {
  if (is_zero()) return "0";
  std::string s;
  for (long i = degree(); i >= 0; --i) {
    const Rat& c = c_[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    Rat a = abs(c);
    if (s.empty())
      s += sgn(c) < 0 ? "-" : "";
    else
      s += sgn(c) < 0 ? " - " : " + ";
    bool unit = a == 1 && i > 0;
    if (!unit) s += a.get_str();
    if (i > 0) {
      if (!unit) s += "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

QPoly poly_gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

QPoly squarefree_part(const QPoly& p) {
  if (p.degree() <= 0) return p.monic();
  QPoly g = poly_gcd(p, p.derivative());
  return p.divmod(g).first.monic();
}

QPoly parse_poly_coeffs(std::string_view s) {
  return QPoly(parse_vector(s));
}

QPoly characteristic_polynomial(const QMatrix& m) {
  if (!m.square()) throw std::invalid_argument("characteristic polynomial: non-square matrix");
  // Faddeev-LeVerrier.
  std::size_t n = m.rows();
  std::vector<Rat> c(n + 1);
  c[n] = 1;
  QMatrix mk = QMatrix::identity(n);
  QMatrix am(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    am = m * mk;
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<unsigned long>(k);
    mk = am + QMatrix::identity(n).scaled(c[n - k]);
  }
  return QPoly(std::move(c));
}

QPoly minimal_polynomial(const QMatrix& m) {
  if (!m.square()) throw std::invalid_argument("minimal polynomial: non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return QPoly::constant(1);
  std::size_t len = n * n;
  // Incremental elimination on vec(M^k); each stored vector remembers the
  // polynomial combination that produced it.
  struct Reduced {
    std::vector<Rat> v;
    std::size_t pivot;
    QPoly combo;
  };
  std::vector<Reduced> basis;
  QMatrix pw = QMatrix::identity(n);
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Rat> v = pw.data();
    QPoly combo = QPoly::x_power(k);
    for (const auto& b : basis) {
      if (sgn(v[b.pivot]) == 0) continue;
      Rat f = v[b.pivot];
      for (std::size_t j = 0; j < len; ++j)
        if (sgn(b.v[j])) v[j] -= f * b.v[j];
      combo = combo - b.combo.scaled(f);
    }
    std::size_t p = 0;
    while (p < len && sgn(v[p]) == 0) ++p;
    if (p == len) return combo.monic();
    Rat inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    combo = combo.scaled(inv);
    // Keep earlier vectors reduced at the new pivot so the sweep above stays valid.
    for (auto& b : basis) {
      if (sgn(b.v[p]) == 0) continue;
      Rat f = b.v[p];
      for (std::size_t j = 0; j < len; ++j)
        if (sgn(v[j])) b.v[j] -= f * v[j];
      b.combo = b.combo - combo.scaled(f);
    }
    basis.push_back({std::move(v), p, std::move(combo)});
    pw = pw * m;
  }
  throw std::logic_error("minimal polynomial: no dependency found (Cayley-Hamilton violated)");
}

// ---------------------------------------------------------------- root location

namespace {

int sign_variations(const std::vector<QPoly>& seq, const Rat& x) {
  int var = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

QPoly strip_root(QPoly p, const Rat& r, int* count) {
  QPoly lin = QPoly::linear_root(r);
  while (p.degree() >= 1 && sgn(p.eval(r)) == 0) {
    p = p.divmod(lin).first;
    if (count) ++*count;
  }
  return p;
}

bool is_palindromic(const QPoly& p) { return p.reciprocal() == p; }

}  // namespace

long sturm_real_root_count(const QPoly& p, const Rat& lo, const Rat& hi) {
  if (p.is_zero()) throw std::invalid_argument("Sturm count of the zero polynomial");
  if (!(lo < hi)) throw std::invalid_argument("Sturm count needs lo < hi");
  if (sgn(p.eval(lo)) == 0 || sgn(p.eval(hi)) == 0)
    throw std::domain_error("Sturm endpoint is a root; divide it out first");
  if (p.degree() == 0) return 0;
  std::vector<QPoly> seq{p, p.derivative()};
  while (true) {
    QPoly r = seq[seq.size() - 2].divmod(seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(r.scaled(-1));
  }
  if (seq.back().degree() > 0) throw std::domain_error("Sturm count needs a squarefree polynomial");
  return sign_variations(seq, lo) - sign_variations(seq, hi);
}

QPoly palindromic_reduction(const QPoly& r) {
  if (r.degree() < 0 || r.degree() % 2 != 0) throw std::invalid_argument("palindromic reduction needs even degree");
  std::size_t h = static_cast<std::size_t>(r.degree() / 2);
  // D_0 = 2, D_1 = y, D_j = y D_{j-1} - D_{j-2}, with D_j(x + 1/x) = x^j + x^{-j}.
  QPoly y = QPoly::x_power(1);
  QPoly dprev = QPoly::constant(2), dcur = y;
  QPoly q = QPoly::constant(r.coeff(h));
  for (std::size_t j = 1; j <= h; ++j) {
    q = q + dcur.scaled(r.coeff(h + j));
    QPoly next = y * dcur - dprev;
    dprev = dcur;
    dcur = next;
  }
  return q;
}

namespace {

// Number of distinct roots of squarefree q in the closed interval [-2, 2].
long roots_in_closed_band(QPoly q) {
  long count = 0;
  int hits = 0;
  q = strip_root(std::move(q), Rat(2), &hits);
  q = strip_root(std::move(q), Rat(-2), &hits);
  count += hits;
  if (q.degree() >= 1) count += sturm_real_root_count(q, Rat(-2), Rat(2));
  return count;
}

}  // namespace

bool all_roots_on_unit_circle(const QPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("unit-circle test of the zero polynomial");
  QPoly r = strip_root(strip_root(p, Rat(1), nullptr), Rat(-1), nullptr);
  if (r.degree() == 0) return true;
  if (r.degree() % 2 != 0 || !is_palindromic(r.monic())) return false;
  QPoly q = squarefree_part(palindromic_reduction(r.monic()));
  return roots_in_closed_band(q) == q.degree();
}

bool has_root_on_unit_circle(const QPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("unit-circle test of the zero polynomial");
  if (p.degree() == 0) return false;
  if (sgn(p.eval(Rat(1))) == 0 || sgn(p.eval(Rat(-1))) == 0) return true;
  QPoly g = poly_gcd(p, p.reciprocal());
  if (g.degree() <= 0) return false;
  g = squarefree_part(g);
  if (g.degree() % 2 != 0 || !is_palindromic(g))
    throw std::logic_error("self-reciprocal part is not palindromic");
  QPoly q = squarefree_part(palindromic_reduction(g));
  return roots_in_closed_band(q) > 0;
}

// ---------------------------------------------------------------- IntLattice

IntLattice::IntLattice(QMatrix basis) : basis_(std::move(basis)) {
  if (!basis_.square()) throw std::invalid_argument("lattice basis must be square");
  inv_ = basis_.inverse();
}

IntLattice IntLattice::standard(std::size_t n) { return IntLattice(QMatrix::identity(n)); }

QVec IntLattice::point(const std::vector<long long>& coords) const {
  QVec c(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) c[i] = Rat(static_cast<long>(coords[i]));
  return basis_ * c;
}

std::optional<std::vector<BigInt>> IntLattice::coords(const QVec& v) const {
  QVec c = inv_ * v;
  std::vector<BigInt> out;
  out.reserve(c.size());
  for (const auto& x : c) {
    if (!is_integer(x)) return std::nullopt;
    out.push_back(x.get_num());
  }
  return out;
}

// ---------------------------------------------------------------- text I/O

namespace {

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

QMatrix parse_matrix(std::string_view text) {
  auto tok = tokens(text);
  if (tok.size() < 2) throw std::invalid_argument("matrix text needs a 'rows cols' header");
  long r = std::stol(tok[0]), c = std::stol(tok[1]);
  if (r < 0 || c < 0) throw std::invalid_argument("negative matrix shape");
  if (tok.size() != static_cast<std::size_t>(2 + r * c))
    throw std::invalid_argument("matrix text: expected " + std::to_string(r * c) + " entries");
  QMatrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = parse_rat(tok[static_cast<std::size_t>(2 + i * c + j)]);
  return m;
}

std::string format_matrix(const QMatrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).get_str();
    os << '\n';
  }
  return os.str();
}

QVec parse_vector(std::string_view text) {
  QVec v;
  for (const auto& t : tokens(text)) v.push_back(parse_rat(t));
  return v;
}

}  // namespace qhl
