#include "qhl/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qhl {

namespace {

long long to_ll(const BigInt& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("lattice coordinate exceeds 64 bits");
  return v.get_si();
}

LatVec to_latvec(const QVec& v) {
  LatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_integer(v[i])) throw std::logic_error("expected an integral lattice vector");
    out[i] = to_ll(v[i].get_num());
  }
  return out;
}

QVec to_qvec(const LatVec& v) {
  QVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(static_cast<long>(v[i]));
  return out;
}

Rat frac(const BigInt& n, const BigInt& d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

Rat sq_norm(const QVec& v) {
  Rat s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

Rat frobenius_sq(const QMatrix& m) {
  Rat s = 0;
  for (const auto& x : m.data()) s += x * x;
  return s;
}

// Rational r with r >= sqrt(x), within about 2^-10.
Rat sqrt_upper(const Rat& x) {
  double d = std::sqrt(x.get_d());
  Rat r = frac(static_cast<long>(std::ceil(d * 1024.0)) + 1, 1024);
  while (r * r < x) r += Rat(1, 1024);
  return r;
}

Rat round_bits(const Rat& x, int prec) {
  Rat y;
  mpq_mul_2exp(y.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(prec));
  BigInt f = floor_div(y + Rat(1, 2));
  Rat r(f);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(prec));
  return r;
}

QMatrix round_bits(const QMatrix& m, int prec) {
  QMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = round_bits(m(i, j), prec);
  return out;
}

std::vector<std::complex<double>> float_roots(const QPoly& p) {
  using C = std::complex<double>;
  std::size_t n = static_cast<std::size_t>(p.degree());
  std::vector<double> a(n + 1);
  for (std::size_t i = 0; i <= n; ++i) a[i] = Rat(p.coeff(i) / p.lead()).get_d();
  auto f = [&](C z) {
    C r = 0;
    for (std::size_t i = n + 1; i-- > 0;) r = r * z + a[i];
    return r;
  };
  std::vector<C> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(C(0.4, 0.9), static_cast<int>(i));
  for (int it = 0; it < 2000; ++it) {
    double moved = 0;
    for (std::size_t i = 0; i < n; ++i) {
      C den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      C step = f(z[i]) / den;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15) break;
  }
  return z;
}

// Emits every multiset (as index lists, nondecreasing) of size 1..max_size drawn
// from n moves, skipping multisets that contain a move and its negation.
void for_each_multiset(std::size_t n, std::size_t max_size, const std::function<std::size_t(std::size_t)>& negation,
                       const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> cur;
  std::vector<int> used(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!cur.empty()) visit(cur);
    if (cur.size() == max_size) return;
    for (std::size_t i = start; i < n; ++i) {
      if (used[negation(i)]) continue;
      cur.push_back(i);
      ++used[i];
      rec(i);
      --used[i];
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

// ------------------------------------------------------------ space and expressions

MonodromySpace::MonodromySpace(QMatrix B, std::optional<IntLattice> lattice, int label_n)
    : B_(std::move(B)), label_n_(label_n) {
  if (!B_.square() || B_.rows() == 0) throw std::invalid_argument("monodromy matrix must be square");
  if (B_.det() == 0) throw std::invalid_argument("monodromy matrix must be invertible");
  lattice_ = lattice ? *lattice : IntLattice::standard(B_.rows());
  if (lattice_.dimension() != B_.rows()) throw std::invalid_argument("lattice dimension mismatch");
  Binv_ = B_.inverse();
  T_ = lattice_.basis().inverse() * B_ * lattice_.basis();
}

const QMatrix& MonodromySpace::power(long long t) const {
  auto it = powers_.find(t);
  if (it != powers_.end()) return it->second;
  QMatrix m = t >= 0 ? B_.pow(t) : Binv_.pow(-t);
  return powers_.emplace(t, std::move(m)).first->second;
}

QVec MonodromySpace::apply(long long t, const LatVec& u) const {
  if (u.size() != dim()) throw std::invalid_argument("lattice vector dimension mismatch");
  return power(t) * lattice_.point(u);
}

long long Expression::volume() const {
  long long v = 0;
  for (const auto& t : terms)
    for (auto x : t.u) v += x < 0 ? -x : x;
  return v;
}

Expression Expression::canonical() const {
  std::map<long long, LatVec> by_shift;
  for (const auto& t : terms) {
    auto& acc = by_shift[t.shift];
    if (acc.empty()) acc.assign(t.u.size(), 0);
    if (acc.size() != t.u.size()) throw std::invalid_argument("expression terms of different dimension");
    for (std::size_t i = 0; i < t.u.size(); ++i) acc[i] += t.u[i];
  }
  Expression out;
  for (auto& [s, u] : by_shift)
    if (std::any_of(u.begin(), u.end(), [](long long x) { return x != 0; })) out.terms.push_back({s, u});
  return out;
}

Expression Expression::shifted(long long s) const {
  Expression out = *this;
  for (auto& t : out.terms) t.shift += s;
  return out;
}

Expression Expression::concat(const Expression& o) const {
  Expression out = *this;
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  return out;
}

std::string Expression::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) os << ',';
    os << '(' << terms[i].shift << ',';
    if (terms[i].u.size() == 1) {
      os << (terms[i].u[0] >= 0 ? "+" : "") << terms[i].u[0];
    } else {
      os << '[';
      for (std::size_t j = 0; j < terms[i].u.size(); ++j) os << (j ? "," : "") << terms[i].u[j];
      os << ']';
    }
    os << ')';
  }
  os << '}';
  return os.str();
}

QVec evaluate(const MonodromySpace& space, const Expression& e) {
  QVec v(space.dim());
  for (const auto& t : e.terms) v = v + space.apply(t.shift, t.u);
  return v;
}

EllipticVerdict is_elliptic(const MonodromySpace& space) {
  QPoly mp = minimal_polynomial(space.B());
  EllipticVerdict v;
  if (!all_roots_on_unit_circle(mp)) {
    v.reason = "eigenvalue off unit circle";
  } else if (poly_gcd(mp, mp.derivative()).degree() > 0) {
    v.reason = "nontrivial Jordan block";
  } else {
    v.elliptic = true;
  }
  return v;
}

// ------------------------------------------------------------ exhaustive search

std::size_t MoveSearch::Hash::operator()(const QVec& v) const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& x : v) {
    std::size_t a = mpz_get_ui(x.get_num_mpz_t()) ^ (static_cast<std::size_t>(mpz_sgn(x.get_num_mpz_t()) + 1) << 62);
    std::size_t b = mpz_get_ui(x.get_den_mpz_t());
    h = (h ^ a) * 1099511628211ull;
    h = (h ^ b) * 1099511628211ull;
  }
  return h;
}

MoveSearch::MoveSearch(const MonodromySpace& space, long long S, long long max_volume)
    : space_(space), S_(S), V_(max_volume), half_((max_volume + 1) / 2) {
  if (S < 0 || max_volume < 0) throw std::invalid_argument("window and volume budget must be nonnegative");
  std::size_t m = space.dim();
  for (long long t = -S; t <= S; ++t)
    for (std::size_t j = 0; j < m; ++j)
      for (int s : {-1, 1}) {
        LatVec e(m, 0);
        e[j] = s;
        moves_.push_back({t, j, s, space.apply(t, e)});
      }
  auto [it, ok] = dist_.emplace(QVec(m), 0);
  levels_.push_back({&it->first});
  for (long long r = 1; r <= half_; ++r) {
    std::vector<const QVec*> next;
    for (const QVec* x : levels_.back())
      for (const auto& mv : moves_) {
        auto [jt, fresh] = dist_.emplace(*x + mv.vec, r);
        if (fresh) next.push_back(&jt->first);
      }
    levels_.push_back(std::move(next));
  }
}

std::optional<long long> MoveSearch::distance(const QVec& x) const {
  // A path of length l <= V splits into a prefix of length max(0, l - half) and
  // a stored suffix, so only the low levels need scanning.
  long long best = std::numeric_limits<long long>::max();
  auto it = dist_.find(x);
  if (it != dist_.end()) best = it->second;
  long long top = std::max<long long>(0, V_ - half_);
  for (long long r = 1; r <= top && r < best; ++r)
    for (const QVec* y : levels_[static_cast<std::size_t>(r)]) {
      auto jt = dist_.find(x - *y);
      if (jt != dist_.end()) best = std::min(best, r + jt->second);
    }
  if (best > V_) return std::nullopt;
  return best;
}

Expression MoveSearch::witness(const QVec& x) const {
  auto d = distance(x);
  if (!d) throw std::invalid_argument("target not reachable within the budget");
  Expression e;
  QVec cur = x;
  long long rem = *d;
  std::size_t start = 0;
  while (rem > 0) {
    bool found = false;
    for (std::size_t i = start; i < moves_.size(); ++i) {
      QVec next = cur - moves_[i].vec;
      auto dn = distance(next);
      if (dn && *dn == rem - 1) {
        LatVec u(space_.dim(), 0);
        u[moves_[i].j] = moves_[i].sign;
        e.terms.push_back({moves_[i].t, u});
        cur = std::move(next);
        --rem;
        start = i;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("witness reconstruction failed");
  }
  return e.canonical();
}

std::optional<MinVolume> achievable_min_volume(const MonodromySpace& space, const QVec& target, long long V, long long S) {
  if (target.size() != space.dim()) throw std::invalid_argument("target dimension mismatch");
  if (is_zero(target)) return MinVolume{0, {}};
  MoveSearch search(space, S, V);
  auto d = search.distance(target);
  if (!d) return std::nullopt;
  MinVolume out{*d, search.witness(target)};
  if (evaluate(space, out.witness) != target) throw std::logic_error("witness does not evaluate to target");
  return out;
}

std::vector<DistortionRow> distortion_profile(const MonodromySpace& space, const LatVec& alpha, long long k_max,
                                              long long m_max, long long S) {
  if (std::all_of(alpha.begin(), alpha.end(), [](long long v) { return v == 0; }))
    throw std::invalid_argument("alpha must be nonzero");
  if (m_max < 1) throw std::invalid_argument("m_max must be positive");
  MoveSearch search(space, S, k_max);
  QVec a = space.lattice().point(alpha);
  std::vector<long long> dist(static_cast<std::size_t>(m_max) + 1, -1);
  for (long long m = 1; m <= m_max; ++m) {
    auto d = search.distance(Rat(static_cast<long>(m)) * a);
    if (d) dist[static_cast<std::size_t>(m)] = *d;
  }
  std::vector<DistortionRow> rows;
  for (long long k = 0; k <= k_max; ++k) {
    DistortionRow row;
    row.k = k;
    for (long long m = m_max; m >= 1; --m) {
      long long d = dist[static_cast<std::size_t>(m)];
      if (d >= 0 && d <= k) {
        row.max_multiple = m;
        break;
      }
    }
    row.saturated = row.max_multiple == m_max;
    if (row.max_multiple > 0) row.witness = search.witness(Rat(static_cast<long>(row.max_multiple)) * a);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ------------------------------------------------------------ hyperbolic decomposition

namespace {

// Projector onto the |lambda| > 1 part: Newton iteration for the matrix sign of
// the Cayley transform, on rationals rounded to prec bits.
QMatrix expanding_projector(const QMatrix& T, int prec) {
  std::size_t n = T.rows();
  QMatrix I = QMatrix::identity(n);
  QMatrix X = round_bits((T + I).inverse() * (T - I), prec);
  Rat tol(1);
  mpq_div_2exp(tol.get_mpq_t(), tol.get_mpq_t(), static_cast<mp_bitcnt_t>(prec - 8));
  for (int it = 0; it < 400; ++it) {
    QMatrix Xn = round_bits((X + X.inverse()).scaled(Rat(1, 2)), prec);
    Rat diff = 0;
    for (std::size_t i = 0; i < Xn.data().size(); ++i) diff = std::max(diff, Rat(abs(Xn.data()[i] - X.data()[i])));
    X = std::move(Xn);
    if (diff <= tol) break;
  }
  return round_bits((I + X).scaled(Rat(1, 2)), prec);
}

QVec round_to_Q_lattice(const QVec& y, const BigInt& Q) {
  QVec z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = Rat(Q * round_half_to_zero(y[i] / Q));
  return z;
}

bool integral(const QVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return is_integer(x); });
}

std::optional<Expression> run_decomposition(const QMatrix& T, const QMatrix& Tinv, const QMatrix& Pp, const BigInt& Q,
                                            const QVec& q) {
  std::size_t n = T.rows();
  QMatrix Pm = QMatrix::identity(n) - Pp;
  Expression e;
  auto emit = [&](long long shift, const QVec& v) {
    if (!is_zero(v)) e.terms.push_back({shift, to_latvec(v)});
  };
  QVec a = round_to_Q_lattice(Pm * q, Q);
  QVec z = round_to_Q_lattice(Pp * q, Q);
  emit(0, q - a - z);
  const int cap = 4096;
  // Expanding side: b = T^-1 z stays in the lattice because z is in Q Lambda.
  QVec b = Tinv * z;
  for (long long s = 1; !is_zero(b); ++s) {
    if (s > cap || !integral(b)) return std::nullopt;
    QVec zz = round_to_Q_lattice(Pp * b, Q);
    emit(s, b - zz);
    b = Tinv * zz;
  }
  QVec c = T * a;
  for (long long s = -1; !is_zero(c); --s) {
    if (-s > cap || !integral(c)) return std::nullopt;
    QVec zz = round_to_Q_lattice(Pm * c, Q);
    emit(s, c - zz);
    c = T * zz;
  }
  return e.canonical();
}

}  // namespace

GreedyResult greedy_decompose(const MonodromySpace& space, const LatVec& p, const BigInt& M) {
  std::size_t r = space.dim();
  if (p.size() != r) throw std::invalid_argument("p dimension mismatch");
  const QMatrix& T = space.T();
  QPoly chi = characteristic_polynomial(T);
  if (has_root_on_unit_circle(chi)) throw std::domain_error("eigenvalue on the unit circle");
  QMatrix Tinv = T.inverse();
  GreedyResult res;
  auto& K = res.constants;
  K.Q = lcm(T.denominator_lcm(), Tinv.denominator_lcm());
  double Lf = std::numeric_limits<double>::infinity();
  for (auto z : float_roots(chi)) {
    double m = std::abs(z);
    Lf = std::min(Lf, m > 1 ? m : 1 / m);
  }
  K.L = frac(static_cast<long>(std::floor(Lf * 1024.0 - 1e-6)), 1024);
  if (K.L <= 1) K.L = Rat(1025, 1024);
  K.U = sqrt_upper(std::max(frobenius_sq(T), frobenius_sq(Tinv)));
  QVec q(r);
  for (std::size_t i = 0; i < r; ++i) q[i] = Rat(M * static_cast<long>(p[i]));
  QVec target = space.lattice().point(p);
  for (auto& x : target) x *= M;
  double mag = std::sqrt(sq_norm(q).get_d());
  res.term_bound = mag > 1 ? 2.0 * std::log(mag) / std::log(K.L.get_d()) + static_cast<double>(K.c0)
                           : static_cast<double>(K.c0);
  int prec = 128;
  for (int attempt = 1; attempt <= 4; ++attempt, prec *= 2) {
    res.attempts = attempt;
    res.precision_bits = prec;
    K.P_plus = expanding_projector(T, prec);
    K.split_exact = K.P_plus * K.P_plus == K.P_plus && K.P_plus * T == T * K.P_plus;
    K.kappa = std::max({Rat(1), sqrt_upper(frobenius_sq(K.P_plus)),
                        sqrt_upper(frobenius_sq(QMatrix::identity(r) - K.P_plus))});
    Rat qb = (K.U + 1) * Rat(K.Q) * K.kappa;
    res.coefficient_bound_sq = qb * qb * Rat(static_cast<long>(r));
    if (is_zero(q)) {
      res.expr = {};
      return res;
    }
    auto e = run_decomposition(T, Tinv, K.P_plus, K.Q, q);
    if (!e) continue;
    if (evaluate(space, *e) != target) continue;
    if (static_cast<double>(e->terms.size()) > res.term_bound) continue;
    bool small = std::all_of(e->terms.begin(), e->terms.end(),
                             [&](const Term& t) { return sq_norm(to_qvec(t.u)) <= res.coefficient_bound_sq; });
    if (!small) continue;
    res.expr = std::move(*e);
    return res;
  }
  throw std::runtime_error("greedy_decompose: verification failed after precision escalation");
}

// ------------------------------------------------------------ shift bounds

namespace {

struct GInt {
  BigInt re, im;
};

GInt gmul(const GInt& a, const GInt& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
GInt gsub(const GInt& a, const GInt& b) { return {a.re - b.re, a.im - b.im}; }
BigInt gnorm(const GInt& a) { return a.re * a.re + a.im * a.im; }
bool gzero(const GInt& a) { return a.re == 0 && a.im == 0; }

GInt gdiv_round(const GInt& a, const GInt& b) {
  BigInt n = gnorm(b);
  GInt num = gmul(a, {b.re, -b.im});
  return {round_half_to_zero(frac(num.re, n)), round_half_to_zero(frac(num.im, n))};
}

GInt ggcd(GInt a, GInt b) {
  while (!gzero(b)) {
    GInt r = gsub(a, gmul(gdiv_round(a, b), b));
    a = b;
    b = r;
  }
  return a;
}

GInt gdiv_exact(const GInt& a, const GInt& b) {
  GInt q = gdiv_round(a, b);
  if (!gzero(gsub(a, gmul(q, b)))) throw std::logic_error("inexact Gaussian division");
  return q;
}

bool rational_sqrt(const Rat& x, Rat& out) {
  if (x < 0) return false;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return false;
  BigInt n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  out = frac(n, d);
  return true;
}

}  // namespace

double ShiftBound::operator()(double V) const { return a.get_d() + b * std::log(V); }

bool ShiftBound::admits(long long m, long long V) const {
  if (V < 1) return m <= 0;
  Rat e = Rat(static_cast<long>(m)) - a;
  if (e <= 0) return true;
  if (!user_supplied && prime_norm > 0 && is_integer(e)) {
    // m - a <= log_{sqrt N} V  <=>  N^(m-a) <= V^2
    BigInt lhs;
    mpz_pow_ui(lhs.get_mpz_t(), prime_norm.get_mpz_t(), e.get_num().get_ui());
    BigInt v(static_cast<long>(V));
    return lhs <= v * v;
  }
  return static_cast<double>(m) <= (*this)(static_cast<double>(V)) + 1e-12;
}

ShiftBound user_shift_bound(const Rat& a, double b) {
  ShiftBound f;
  f.a = a;
  f.b = b;
  f.user_supplied = true;
  f.note = "user supplied";
  return f;
}

ShiftBound shift_bound_constants(const MonodromySpace& space) {
  const QMatrix& B = space.B();
  QPoly chi = characteristic_polynomial(B);
  if (!all_roots_on_unit_circle(chi)) throw std::domain_error("eigenvalue off unit circle");
  if (B.rows() != 2) throw std::invalid_argument("unsupported number field: supply constants");
  Rat tau = chi.coeff(1) * -1, delta = chi.coeff(0);
  if (delta != 1 || tau * tau >= 4) throw std::invalid_argument("unsupported: eigenvalues must be a non-real conjugate pair");
  Rat s;
  if (!rational_sqrt(4 - tau * tau, s)) throw std::invalid_argument("unsupported number field: eigenvalues outside Q(i)");
  Rat re = tau / 2, im = s / 2;
  BigInt d = lcm(BigInt(re.get_den()), BigInt(im.get_den()));
  GInt num{re.get_num() * (d / re.get_den()), im.get_num() * (d / im.get_den())};
  GInt g = ggcd(num, {d, 0});
  GInt p = gdiv_exact(num, g);
  BigInt np = gnorm(p);
  if (np == 1) throw std::invalid_argument("unsupported: eigenvalue is a root of unity");
  // Smallest norm of a Gaussian prime dividing p.
  BigInt ell = 2;
  while (np % ell != 0) ++ell;
  BigInt pn = ell;
  if (ell % 4 == 3) pn = ell * ell;
  ShiftBound f;
  f.a = static_cast<long>(B.rows()) - 1;
  f.prime_norm = pn;
  f.b = 2.0 / std::log(pn.get_d());
  f.note = "Gaussian eigenvalue, |p'|^2 = " + pn.get_str();
  return f;
}

std::optional<long long> auto_window(const MonodromySpace& space, long long k) {
  if (k <= 0) return 0;
  try {
    ShiftBound f = shift_bound_constants(space);
    double w = static_cast<double>(k) * f(static_cast<double>(k));
    double rw = std::round(w);
    return static_cast<long long>(std::abs(w - rw) < 1e-9 ? rw : std::ceil(w));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

ShiftBoundReport verify_shift_bound(const MonodromySpace& space, long long V_max, double margin,
                                    std::optional<ShiftBound> f_opt) {
  ShiftBoundReport rep;
  ShiftBound f = f_opt ? *f_opt : shift_bound_constants(space);
  if (V_max < 2) {
    rep.trivial_only = true;
    return rep;
  }
  double wf = f(static_cast<double>(V_max)) + margin;
  long long W = wf < 1e-12 ? 0 : static_cast<long long>(std::ceil(wf - 1e-12));
  rep.window = W;
  if (W < 1) {
    rep.trivial_only = true;
    return rep;
  }
  std::size_t m = space.dim();
  struct Half {
    Expression e;
    QVec value;
    long long vol, top;
  };
  std::vector<LatVec> unit;
  std::vector<long long> shifts;
  for (long long t = 0; t <= W; ++t)
    for (std::size_t j = 0; j < m; ++j)
      for (int s : {-1, 1}) {
        LatVec u(m, 0);
        u[j] = s;
        unit.push_back(u);
        shifts.push_back(t);
      }
  auto neg = [&](std::size_t i) { return i ^ 1u; };
  std::vector<Half> halves;
  for_each_multiset(unit.size(), static_cast<std::size_t>(V_max - 1), neg, [&](const std::vector<std::size_t>& ms) {
    if (shifts[ms.front()] != 0) return;  // normalized: lowest shift is 0
    Expression e;
    for (auto i : ms) e.terms.push_back({shifts[i], unit[i]});
    e = e.canonical();
    if (e.terms.empty() || e.terms.front().shift != 0) return;
    QVec v = evaluate(space, e);
    if (is_zero(v)) return;
    halves.push_back({e, v, e.volume(), e.terms.back().shift});
  });
  std::map<QVec, std::vector<std::size_t>> by_value;
  for (std::size_t i = 0; i < halves.size(); ++i) by_value[halves[i].value].push_back(i);
  for (const auto& h1 : halves)
    for (long long g = 1; g <= W; ++g) {
      ++rep.splits_checked;
      long long off = h1.top + g;
      QVec want = space.power(-off) * (Rat(-1) * h1.value);
      auto it = by_value.find(want);
      if (it == by_value.end()) continue;
      for (auto idx : it->second) {
        const Half& h2 = halves[idx];
        if (h1.vol + h2.vol > V_max) continue;
        ++rep.vanishing_splits;
        Expression second = h2.e.shifted(off);
        if (!is_zero(evaluate(space, h1.e.concat(second)))) throw std::logic_error("split check mismatch");
        if (!f.admits(g, h1.vol + h2.vol)) rep.counterexamples.emplace_back(h1.e, second);
      }
    }
  return rep;
}

// ------------------------------------------------------------ the 4x4 example

QMatrix rotation_345() { return QMatrix::from_rows({{Rat(3, 5), Rat(-4, 5)}, {Rat(4, 5), Rat(3, 5)}}); }

MonodromySpace oddD_space() {
  QMatrix A = rotation_345();
  QMatrix B(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      B(i, j) = A(i, j);
      B(i + 2, j + 2) = A(i, j);
    }
    B(i + 2, i) = 1;
  }
  return MonodromySpace(B, std::nullopt, 3);
}

namespace {

int val5(const QVec& v) {
  int best = 0;
  for (const auto& x : v) {
    BigInt d = x.get_den();
    int e = 0;
    while (d % 5 == 0) {
      d /= 5;
      ++e;
    }
    if (d != 1) throw std::logic_error("unexpected denominator");
    best = std::max(best, e);
  }
  return best;
}

}  // namespace

Expression oddD_lower_bound(long long k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (k == 0) return {};
  MonodromySpace space = oddD_space();
  QMatrix A = rotation_345();
  // v and A v are both integral exactly on this index-5 sublattice.
  QMatrix Lp = QMatrix::from_rows({{-2, 1}, {1, 2}});
  QMatrix Lp_inv = Lp.inverse();
  auto nearest = [&](const QVec& x) {
    QVec c = Lp_inv * x;
    for (auto& y : c) y = Rat(round_half_to_zero(y));
    return Lp * c;
  };
  Rat K(static_cast<long>(k));
  QVec v0{Rat(5 * K), Rat(0)};
  std::vector<QVec> v{v0};
  QVec S = v0;
  for (long long i = 1; i < k; ++i) {
    QVec want = A.pow(-i) * (Rat(static_cast<long>(i + 1)) * v0 - S);
    v.push_back(nearest(want));
    S = S + A.pow(i) * v.back();
  }
  // Telescoped first-block terms: the first block of the value cancels.
  std::map<long long, QVec> terms;
  auto add = [&](long long shift, const QVec& first, const QVec& second) {
    auto& t = terms[shift];
    if (t.empty()) t.assign(4, Rat(0));
    for (std::size_t i = 0; i < 2; ++i) {
      t[i] += first[i];
      t[i + 2] += second[i];
    }
  };
  QVec zero2(2);
  add(0, Rat(-1) * (A * v[0]), zero2);
  for (long long i = 1; i < k; ++i) add(i, v[static_cast<std::size_t>(i - 1)] - A * v[static_cast<std::size_t>(i)], zero2);
  add(k, v.back(), zero2);
  // Peel 5-adic denominators of the residual with unit corrections at matching shifts.
  QVec d = QVec{Rat(5 * K * K), Rat(0)} - S;
  std::vector<QVec> small;
  for (int l1 = 1; l1 <= 4; ++l1)
    for (int x = -2; x <= 2; ++x)
      for (int y = -2; y <= 2; ++y)
        if (std::abs(x) + std::abs(y) == l1) small.push_back({Rat(x), Rat(y)});
  while (!integral(d)) {
    int j = val5(d);
    bool done = false;
    for (const auto& c : small) {
      QVec nd = d - A.pow(j) * c;
      if (val5(nd) < j) {
        add(j, zero2, c);
        d = nd;
        done = true;
        break;
      }
    }
    if (!done) throw std::logic_error("oddD correction peeling stalled");
  }
  add(0, zero2, d);
  Expression e;
  for (auto& [s, u] : terms) e.terms.push_back({s, to_latvec(u)});
  e = e.canonical();
  QVec want{Rat(0), Rat(0), Rat(5 * K * K), Rat(0)};
  if (evaluate(space, e) != want) throw std::logic_error("oddD construction failed verification");
  return e;
}

LengthBound certify_length_bound(long long k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  MonodromySpace space = oddD_space();
  ShiftBound f = shift_bound_constants(MonodromySpace(rotation_345()));
  LengthBound out;
  out.L.assign(static_cast<std::size_t>(k) + 1, 0);
  out.Lv.assign(static_cast<std::size_t>(k) + 1, 0);
  out.windows.assign(static_cast<std::size_t>(k) + 1, 0);
  for (long long j = 1; j <= k; ++j) {
    double w = static_cast<double>(j) * f(static_cast<double>(j));
    long long W = static_cast<long long>(std::ceil(w - 1e-9));
    out.windows[static_cast<std::size_t>(j)] = W;
    std::vector<LatVec> unit;
    std::vector<long long> shifts;
    for (long long t = 0; t <= W; ++t)
      for (std::size_t c = 0; c < 2; ++c)
        for (int s : {-1, 1}) {
          LatVec u(4, 0);
          u[c] = s;
          unit.push_back(u);
          shifts.push_back(t);
        }
    // Case (1): first block of the total vanishes, no proper prefix vanishes.
    Rat best_sq = 0;
    for_each_multiset(unit.size(), static_cast<std::size_t>(j), [](std::size_t i) { return i ^ 1u; },
                      [&](const std::vector<std::size_t>& ms) {
                        if (static_cast<long long>(ms.size()) != j || shifts[ms.front()] != 0) return;
                        Expression e;
                        for (auto i : ms) e.terms.push_back({shifts[i], unit[i]});
                        e = e.canonical();
                        if (e.terms.empty() || e.terms.front().shift != 0) return;
                        QVec prefix(4);
                        for (std::size_t t = 0; t < e.terms.size(); ++t) {
                          prefix = prefix + space.apply(e.terms[t].shift, e.terms[t].u);
                          bool first_zero = prefix[0] == 0 && prefix[1] == 0;
                          if (t + 1 < e.terms.size() && first_zero) return;
                          if (t + 1 == e.terms.size() && !first_zero) return;
                        }
                        best_sq = std::max(best_sq, Rat(prefix[2] * prefix[2] + prefix[3] * prefix[3]));
                      });
    double Lp = std::sqrt(best_sq.get_d());
    double Lv = Lp;
    for (long long i = 1; i < j; ++i)
      Lv = std::max(Lv, out.Lv[static_cast<std::size_t>(i)] + out.Lv[static_cast<std::size_t>(j - i)]);
    out.Lv[static_cast<std::size_t>(j)] = Lv;
  }
  // Second-block terms each add their own length.
  for (long long j = 1; j <= k; ++j) {
    double L = 0;
    for (long long i = 0; i <= j; ++i) L = std::max(L, out.Lv[static_cast<std::size_t>(i)] + static_cast<double>(j - i));
    out.L[static_cast<std::size_t>(j)] = L;
  }
  return out;
}

}  // namespace qhl
