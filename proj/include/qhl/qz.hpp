#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhl/exact.hpp"

namespace qhl {

// t^offset * p(t) with p(0) != 0; zero has an empty p.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(QPoly p, long offset = 0);  // NOLINT(google-explicit-constructor)
  LaurentPoly(const Rat& c);              // NOLINT(google-explicit-constructor)
  LaurentPoly(int c) : LaurentPoly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  static LaurentPoly monomial(const Rat& c, long k);
  static LaurentPoly t() { return monomial(1, 1); }

  bool is_zero() const { return p_.is_zero(); }
  bool is_unit() const { return !is_zero() && p_.degree() == 0; }
  long low() const { return off_; }
  long high() const { return off_ + p_.degree(); }
  long span() const { return is_zero() ? -1 : p_.degree(); }
  const QPoly& poly() const { return p_; }
  long offset() const { return off_; }
  Rat coeff(long k) const;

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator-() const { return scaled(-1); }
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly scaled(const Rat& s) const;
  LaurentPoly shifted(long k) const;
  bool operator==(const LaurentPoly& o) const { return off_ == o.off_ && p_ == o.p_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  // a = q d + r with span(r) < span(d)
  std::pair<LaurentPoly, LaurentPoly> divmod(const LaurentPoly& d) const;
  std::optional<LaurentPoly> exact_div(const LaurentPoly& d) const;
  LaurentPoly unit_inverse() const;  // throws unless a unit
  // Associate with offset 0 and monic underlying polynomial.
  LaurentPoly normalized() const;
  LaurentPoly normalizing_unit() const;  // u with u * this == normalized()

  std::string to_string() const;  // "c0 + c1*t + c-1*t^-1" style

 private:
  QPoly p_;
  long off_ = 0;
};

LaurentPoly parse_laurent(std::string_view text);

class LMatrix {
 public:
  LMatrix() = default;
  LMatrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}
  static LMatrix identity(std::size_t n);
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  LaurentPoly& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const LaurentPoly& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  LMatrix operator*(const LMatrix& o) const;
  LMatrix operator+(const LMatrix& o) const;
  LMatrix operator-(const LMatrix& o) const;
  bool operator==(const LMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool is_zero() const;
  LMatrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<LaurentPoly> a_;
};

LaurentPoly determinant(const LMatrix& m);  // cofactor expansion, small matrices
LMatrix parse_lmatrix(const std::vector<std::vector<std::string>>& rows);

struct SmithForm {
  LMatrix U, D, V;  // U M V = D
  std::size_t rank = 0;
  std::vector<LaurentPoly> invariants;  // normalized diagonal, d_i | d_{i+1}
};
SmithForm laurent_snf(const LMatrix& M);
// One solution of L x = b over the Laurent ring, if any.
std::optional<std::vector<LaurentPoly>> laurent_solve(const LMatrix& L, const std::vector<LaurentPoly>& b);

// R^gens / (column span of relations)
struct QZModule {
  LMatrix relations;  // gens x nrel
  std::size_t gens() const { return relations.rows(); }
  static QZModule cyclic(const LaurentPoly& p);
  static QZModule free(std::size_t n) { return {LMatrix(n, 0)}; }
  static QZModule direct_sum(const QZModule& a, const QZModule& b);
};
// Non-unit invariant factors; zeros mark free summands.
std::vector<LaurentPoly> invariant_factors(const QZModule& M);
bool isomorphic(const QZModule& a, const QZModule& b);

// Matrix F (M.gens x A.gens) sends generator i of A to column i.
bool map_well_defined(const QZModule& A, const QZModule& M, const LMatrix& F);

struct SplitResult {
  bool split = false;
  LMatrix retraction;       // A.gens x M.gens, when split
  std::string certificate;  // why the retraction system has no solution
};
// Throws std::invalid_argument when F is not a module map.
SplitResult splitting_test(const QZModule& A, const QZModule& M, const LMatrix& F);
bool verify_retraction(const QZModule& A, const QZModule& M, const LMatrix& F, const LMatrix& G);

QZModule ext_module(const QZModule& M, const QZModule& N);

// Based free complex over the Laurent ring: d[k] is rank[k-1] x rank[k], d[0] is 0 x rank[0].
struct FreeComplex {
  std::vector<std::vector<std::string>> names;
  std::vector<LMatrix> d;
  std::size_t rank(int k) const;
  int top() const { return static_cast<int>(names.size()) - 1; }
  LMatrix boundary(int k) const;  // zero matrix outside the stored range
  bool is_complex() const;
};

struct LiftingResult {
  std::vector<LMatrix> j;  // j[k]: K rank x X rank
  std::vector<LMatrix> u;  // u[k]: X rank[k+1] x X rank[k]
  bool verified = false;
};
// K is the subcomplex spanned by the listed cells of X.
// Throws std::invalid_argument when K is not closed or the quotient has homology in degrees <= n.
LiftingResult lifting_homomorphism(const FreeComplex& X, const std::vector<std::vector<std::size_t>>& K, int n);
bool verify_lifting(const FreeComplex& X, const std::vector<std::vector<std::size_t>>& K, int n,
                    const LiftingResult& r);

struct Certificate {
  int s = 0, r = 0;
  QMatrix A;               // companion matrix, multiplication by t on Q[t]/(q)
  QMatrix H;               // A^T H A = H, positive definite
  LaurentPoly P;           // c_s = P(t) c
  LaurentPoly boundary;    // d c_s = boundary(t) z
  LaurentPoly E, F, G;     // boundary = E + F + G
  bool split_exact = false;
  Rat F_norm;              // max over window vectors of their H-norm squared
  bool F_bounded = false;  // H-norms independent of s
  Rat G_volume;
  BigInt G_denominator;    // K with K G integral
  QVec pairing;            // s A^{s-1} mu
  QVec pairing_direct;     // sum_m P_m A^m mu
  Rat pairing_norm;        // H-norm squared, = s^2 |mu|_H^2
  bool ok() const;
};
// Throws std::invalid_argument unless q is squarefree with q(0) != 0, all roots on
// the unit circle, and s >= deg q.
Certificate certificate_chains(const QPoly& q, int s, QVec mu = {});
QMatrix companion_matrix(const QPoly& q);
// A rational positive definite H with A^T H A = H, if a small search finds one.
std::optional<QMatrix> invariant_form(const QMatrix& A);

}  // namespace qhl
