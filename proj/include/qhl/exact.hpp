#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qhl {

using Rat = mpq_class;
using BigInt = mpz_class;
using QVec = std::vector<Rat>;

// Accepts "p", "p/q", "-p/q". Throws std::invalid_argument on junk or q == 0.
Rat parse_rat(std::string_view s);
std::string to_string(const Rat& r);
std::string to_string(const QVec& v);

BigInt floor_div(const Rat& r);
BigInt ceil_div(const Rat& r);
// Nearest integer, halves rounded toward zero.
BigInt round_half_to_zero(const Rat& r);
bool is_integer(const Rat& r);
int sign(const Rat& r);

Rat dot(const QVec& a, const QVec& b);
QVec operator+(const QVec& a, const QVec& b);
QVec operator-(const QVec& a, const QVec& b);
QVec operator*(const Rat& s, const QVec& v);
Rat l1_norm(const QVec& v);
bool is_zero(const QVec& v);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<std::vector<Rat>>& rows);
  static QMatrix column(const QVec& v);
  static QMatrix diagonal(const QVec& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<Rat>& data() const { return a_; }

  QVec row(std::size_t i) const;
  QVec col(std::size_t j) const;

  QMatrix operator*(const QMatrix& o) const;
  QVec operator*(const QVec& v) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix scaled(const Rat& s) const;
  bool operator==(const QMatrix& o) const;
  bool operator!=(const QMatrix& o) const { return !(*this == o); }

  QMatrix transpose() const;
  // Negative exponents go through the inverse.
  QMatrix pow(long long e) const;
  QMatrix inverse() const;  // throws std::domain_error when singular
  Rat det() const;
  std::size_t rank() const;
  // One solution of M x = b, if any.
  std::optional<QVec> solve(const QVec& b) const;
  // Basis of the right null space.
  std::vector<QVec> kernel() const;
  bool is_zero() const;
  // Least common multiple of all entry denominators.
  BigInt denominator_lcm() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

// Polynomials with rational coefficients, lowest degree first.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rat> c);
  static QPoly constant(const Rat& c);
  static QPoly x_power(std::size_t k);
  static QPoly linear_root(const Rat& r);  // x - r

  const std::vector<Rat>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const Rat& lead() const { return c_.back(); }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator*(const QPoly& o) const;
  QPoly scaled(const Rat& s) const;
  bool operator==(const QPoly& o) const { return c_ == o.c_; }
  bool operator!=(const QPoly& o) const { return c_ != o.c_; }

  // Euclidean division; throws on zero divisor.
  std::pair<QPoly, QPoly> divmod(const QPoly& d) const;
  QPoly monic() const;
  QPoly derivative() const;
  // x^deg p(1/x)
  QPoly reciprocal() const;
  Rat eval(const Rat& x) const;
  QMatrix eval(const QMatrix& m) const;

  std::string to_string(char var = 'x') const;

 private:
  void trim();
  std::vector<Rat> c_;
};

QPoly poly_gcd(QPoly a, QPoly b);  // monic, gcd(0,0) = 0
QPoly squarefree_part(const QPoly& p);
QPoly parse_poly_coeffs(std::string_view s);  // "c0 c1 c2 ..." low degree first

QPoly characteristic_polynomial(const QMatrix& m);
QPoly minimal_polynomial(const QMatrix& m);

long sturm_real_root_count(const QPoly& p, const Rat& lo, const Rat& hi);
bool all_roots_on_unit_circle(const QPoly& p);
bool has_root_on_unit_circle(const QPoly& p);
// The polynomial q with x^{-h} r(x) = q(x + 1/x) for palindromic r of degree 2h.
QPoly palindromic_reduction(const QPoly& r);

class IntLattice {
 public:
  IntLattice() = default;
  explicit IntLattice(QMatrix basis);
  static IntLattice standard(std::size_t n);
  std::size_t dimension() const { return basis_.rows(); }
  const QMatrix& basis() const { return basis_; }
  QVec point(const std::vector<long long>& coords) const;
  std::optional<std::vector<BigInt>> coords(const QVec& v) const;
  bool contains(const QVec& v) const { return coords(v).has_value(); }

 private:
  QMatrix basis_, inv_;
};

// "rows cols" header then entries.
QMatrix parse_matrix(std::string_view text);
std::string format_matrix(const QMatrix& m);
QVec parse_vector(std::string_view text);  // separators: whitespace or commas

}  // namespace qhl
