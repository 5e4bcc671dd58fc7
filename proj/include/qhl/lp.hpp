#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhl/exact.hpp"

namespace qhl {

// maximize c.x subject to A x <= b, x >= 0
struct StandardLP {
  QMatrix A;
  QVec b, c;
};

enum class LPStatus { optimal, unbounded, infeasible };
std::string to_string(LPStatus s);

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  Rat optimum;
  QVec primal;
  QVec dual;
  std::size_t pivots = 0;
};

LPResult simplex_solve(const StandardLP& lp);
// min b.y s.t. A^T y >= c, y >= 0, written as max -b.y s.t. -A^T y <= -c.
StandardLP dual_of(const StandardLP& lp);
// Exact feasibility of both certificates plus c.x == b.y.
bool certificates_hold(const StandardLP& lp, const LPResult& r);

std::string format_lp(const StandardLP& lp);
StandardLP parse_lp(std::string_view text);

// Sparse general-form program, converted to StandardLP on solve.
using SparseRow = std::vector<std::pair<std::size_t, Rat>>;
enum class Sense { le, ge, eq };

struct GeneralLP {
  std::size_t nvars = 0;
  std::vector<bool> free_var;  // empty means all nonnegative
  std::vector<SparseRow> rows;
  std::vector<Sense> senses;
  QVec rhs;
  QVec objective;
  bool minimize = false;

  std::size_t add_var(bool is_free = false);
  void add_row(SparseRow row, Sense s, const Rat& r);
};

struct GeneralResult {
  LPStatus status = LPStatus::infeasible;
  Rat optimum;
  QVec x;
  // Multiplier per row of the maximization form (objective negated when minimizing).
  QVec duals;
};

GeneralResult solve_general(const GeneralLP& lp);

// minimize sum_v w_v |x_v| subject to E x = b.
struct L1Problem {
  std::size_t nvars = 0;
  std::vector<SparseRow> rows;
  QVec rhs;
  QVec weights;  // empty means all ones
};

struct L1Solution {
  Rat value;
  QVec x;
  std::size_t presolved = 0;  // variables fixed by singleton elimination
  std::size_t core_vars = 0;  // variables left for the simplex
  std::size_t bb_nodes = 0;
};

std::optional<L1Solution> l1_minimize(const L1Problem& p, bool integral);

// ------------------------------------------------------------ duality on balls

class PolyhedralNorm {
 public:
  // Throws std::invalid_argument if the functionals only define a seminorm.
  explicit PolyhedralNorm(std::vector<QVec> functionals);
  static PolyhedralNorm absolute(const Rat& scale = 1);  // |x| / scale, r = 1
  static PolyhedralNorm l_infinity(std::size_t r);
  static PolyhedralNorm l_one(std::size_t r);

  std::size_t dim() const { return dim_; }
  const std::vector<QVec>& functionals() const { return f_; }
  Rat value(const QVec& v) const;
  // min sum B_l with sum B_l c_l = w, B >= 0
  Rat dual_value(const QVec& w) const;

 private:
  std::vector<QVec> f_;
  std::size_t dim_ = 0;
};

enum class Direction { cochain, chain };

// Upper cells carry dimension n+1, lower cells dimension n.
struct FiniteBall {
  std::vector<std::string> upper_names, lower_names;
  std::vector<int> upper_dist, lower_dist;
  std::vector<bool> lower_interior;
  std::vector<SparseRow> incidence;  // per upper cell: (lower index, coefficient of f_j in del e_i)
  Direction direction = Direction::cochain;
  std::size_t r = 1;

  std::size_t n_upper() const { return upper_names.size(); }
  std::size_t n_lower() const { return lower_names.size(); }
  std::size_t n_unknown() const;
  std::size_t n_constraint() const;
  // Constraint rows of the operator D: cochain D = incidence, chain D = incidence^T on interior cells.
  std::vector<SparseRow> operator_rows() const;
  std::vector<std::size_t> constraint_cells() const;
  void validate() const;
};

struct PrimalLayout {
  std::vector<std::pair<std::size_t, std::size_t>> x_index;  // (constraint row, component) per x var
  std::size_t alpha_offset = 0, alpha_count = 0;             // alpha+ block then alpha- block
  std::size_t rows_A = 0, rows_C = 0, rows_B = 0;
  std::vector<std::pair<std::size_t, std::size_t>> c_rows;   // (constraint row, component) per C pair
};

StandardLP assemble_primal(const FiniteBall& ball, const std::vector<QVec>& omega,
                           const std::vector<PolyhedralNorm>& norms, PrimalLayout* layout = nullptr);

struct DualityCertificate {
  enum Kind { primitive, violator } kind = primitive;
  Rat primal_optimum;
  Rat omega_mass;                 // sum of |omega| components
  std::vector<QVec> alpha;        // per unknown cell, primitive branch
  std::vector<QVec> sigma;        // per constraint cell, violator branch
  Rat content;                    // <omega, sigma>
  Rat boundary_norm;              // sum N'(D^T sigma)
  bool verified = false;
};

DualityCertificate bounded_primitive_or_violator(const FiniteBall& ball, const std::vector<QVec>& omega,
                                                 const std::vector<PolyhedralNorm>& norms);
bool verify_certificate(const FiniteBall& ball, const std::vector<QVec>& omega,
                        const std::vector<PolyhedralNorm>& norms, const DualityCertificate& cert);

// Minimal K with D u = omega and |u| <= K componentwise; nullopt if no u exists.
std::optional<Rat> linf_min_bound(const FiniteBall& ball, const std::vector<QVec>& omega, QVec* witness = nullptr);
std::vector<std::optional<Rat>> linf_coboundary_profile(
    const std::vector<std::pair<FiniteBall, std::vector<QVec>>>& family);

struct WeightedVerdict {
  bool zero_class = false;  // condition (2): sigma bounds a weighted-bounded chain
  DualityCertificate certificate;
};

// Chain direction with norms |x / f(d(*, e))| on the unknown cells.
WeightedVerdict weighted_primitive(const FiniteBall& ball, const std::vector<Rat>& sigma,
                                   const std::function<Rat(int)>& f);

}  // namespace qhl
