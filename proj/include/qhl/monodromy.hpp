#pragma once

#include <map>
#include <unordered_map>
#include <optional>
#include <string>
#include <vector>

#include "qhl/exact.hpp"

namespace qhl {

using LatVec = std::vector<long long>;

// pi_n (x) Q = Q^m with one loop acting by B; lattice coordinates index cells.
class MonodromySpace {
 public:
  explicit MonodromySpace(QMatrix B, std::optional<IntLattice> lattice = std::nullopt, int label_n = 0);
  const QMatrix& B() const { return B_; }
  const IntLattice& lattice() const { return lattice_; }
  std::size_t dim() const { return B_.rows(); }
  int label_n() const { return label_n_; }
  // B expressed in lattice coordinates.
  const QMatrix& T() const { return T_; }
  // B^t applied to the lattice vector P u, in ambient coordinates.
  QVec apply(long long t, const LatVec& u) const;
  const QMatrix& power(long long t) const;

 private:
  QMatrix B_, Binv_, T_;
  IntLattice lattice_;
  int label_n_;
  mutable std::map<long long, QMatrix> powers_;
};

struct Term {
  long long shift = 0;
  LatVec u;
  bool operator==(const Term& o) const { return shift == o.shift && u == o.u; }
};

struct Expression {
  std::vector<Term> terms;

  long long volume() const;
  // Merge equal shifts, drop zero vectors, sort by shift.
  Expression canonical() const;
  Expression shifted(long long s) const;
  Expression concat(const Expression& o) const;
  std::string to_string() const;
};

QVec evaluate(const MonodromySpace& space, const Expression& e);

struct EllipticVerdict {
  bool elliptic = false;
  std::string reason;  // empty when elliptic
};
EllipticVerdict is_elliptic(const MonodromySpace& space);

struct MinVolume {
  long long volume = 0;
  Expression witness;
};

// Exhaustive search over unit moves +-B^t e_j with |t| <= S. Ties go to the
// lexicographically smallest sorted move list, moves ordered by (t, j, sign).
class MoveSearch {
 public:
  MoveSearch(const MonodromySpace& space, long long S, long long max_volume);
  std::optional<long long> distance(const QVec& x) const;  // nullopt if above max_volume
  Expression witness(const QVec& x) const;
  std::size_t stored_states() const { return dist_.size(); }
  long long window() const { return S_; }

 private:
  struct Hash {
    std::size_t operator()(const QVec& v) const;
  };
  struct Move {
    long long t;
    std::size_t j;
    int sign;
    QVec vec;
  };
  const MonodromySpace& space_;
  long long S_, V_, half_;
  std::vector<Move> moves_;
  std::unordered_map<QVec, long long, Hash> dist_;
  std::vector<std::vector<const QVec*>> levels_;
};

std::optional<MinVolume> achievable_min_volume(const MonodromySpace& space, const QVec& target, long long V, long long S);

struct DistortionRow {
  long long k = 0;
  long long max_multiple = 0;
  bool saturated = false;
  Expression witness;
};
std::vector<DistortionRow> distortion_profile(const MonodromySpace& space, const LatVec& alpha, long long k_max,
                                              long long m_max, long long S);

struct DecompositionConstants {
  BigInt Q;
  Rat L;             // lower estimate of the expansion rate off the circle
  Rat U;             // upper bound on max(|T|, |T^-1|)
  Rat kappa;         // upper bound on the split projector norms (1 for orthogonal splits)
  QMatrix P_plus;    // projector onto the expanding part, lattice coordinates
  bool split_exact = false;
  long long c0 = 4;
};

struct GreedyResult {
  Expression expr;
  DecompositionConstants constants;
  int precision_bits = 0;
  int attempts = 0;
  double term_bound = 0;
  Rat coefficient_bound_sq;
};

// Throws std::domain_error when B has an eigenvalue on the unit circle.
GreedyResult greedy_decompose(const MonodromySpace& space, const LatVec& p, const BigInt& M);

// f(V) = a + b ln V
struct ShiftBound {
  Rat a;
  double b = 0;
  BigInt prime_norm;  // |p'|^2 in the Gaussian case, 0 for user constants
  bool user_supplied = false;
  std::string note;

  double operator()(double V) const;
  // Exact m <= f(V) in the Gaussian case, float comparison otherwise.
  bool admits(long long m, long long V) const;
};

ShiftBound shift_bound_constants(const MonodromySpace& space);
ShiftBound user_shift_bound(const Rat& a, double b);
std::optional<long long> auto_window(const MonodromySpace& space, long long k);

struct ShiftBoundReport {
  long long window = 0;
  std::size_t splits_checked = 0;
  std::size_t vanishing_splits = 0;
  std::vector<std::pair<Expression, Expression>> counterexamples;  // second half already shifted
  bool trivial_only = false;
};
ShiftBoundReport verify_shift_bound(const MonodromySpace& space, long long V_max, double margin,
                                    std::optional<ShiftBound> f = std::nullopt);

// The 4x4 space [[A,0],[I,A]] with A the 3-4-5 rotation.
MonodromySpace oddD_space();
QMatrix rotation_345();
Expression oddD_lower_bound(long long k);

struct LengthBound {
  std::vector<double> L;   // index k
  std::vector<double> Lv;  // pure first-block part
  std::vector<long long> windows;
};
LengthBound certify_length_bound(long long k);

}  // namespace qhl
