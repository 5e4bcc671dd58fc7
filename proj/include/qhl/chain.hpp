#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhl/exact.hpp"
#include "qhl/group.hpp"
#include "qhl/lp.hpp"

namespace qhl {

// coefficient * (g . cell)
struct BoundaryTerm {
  std::size_t cell;
  Elem g;
  Rat coeff;
};

// Finitely supported map (cell orbit, group element) -> Rat of one dimension.
struct Chain {
  int dim = 0;
  std::map<std::pair<std::size_t, Elem>, Rat> c;

  void add(std::size_t cell, const Elem& g, const Rat& v);
  Rat volume() const;  // l1 norm
  bool empty() const { return c.empty(); }
  Chain operator+(const Chain& o) const;
  Chain operator-(const Chain& o) const;
  Chain scaled(const Rat& s) const;
  bool operator==(const Chain& o) const { return dim == o.dim && c == o.c; }
};

class EquivariantComplex {
 public:
  explicit EquivariantComplex(std::shared_ptr<const GroupOracle> G) : G_(std::move(G)) {}

  const GroupOracle& group() const { return *G_; }
  std::shared_ptr<const GroupOracle> group_ptr() const { return G_; }
  int top_dim() const { return static_cast<int>(names_.size()) - 1; }
  std::size_t count(int d) const;
  const std::string& name(int d, std::size_t i) const { return names_.at(static_cast<std::size_t>(d)).at(i); }
  std::optional<std::size_t> find(int d, const std::string& name) const;
  std::size_t add_cell(int d, std::string name, std::vector<BoundaryTerm> boundary = {});
  void set_boundary(int d, std::size_t i, std::vector<BoundaryTerm> boundary);
  const std::vector<BoundaryTerm>& boundary_terms(int d, std::size_t i) const;

  Chain cell(int d, std::size_t i, const Elem& g, const Rat& coeff = 1) const;
  Chain boundary(const Chain& x) const;
  Chain translate(const Elem& g, const Chain& x) const;
  // Vertex translates (vertex cell, h) in the closure of the orbit cell at the identity.
  // Derived from the boundary unless set explicitly; a cell with empty boundary sits at vertex 0.
  const std::vector<std::pair<std::size_t, Elem>>& closure_vertices(int d, std::size_t i) const;
  void set_closure_vertices(int d, std::size_t i, std::vector<std::pair<std::size_t, Elem>> v);

 private:
  std::shared_ptr<const GroupOracle> G_;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<std::vector<BoundaryTerm>>> bd_;
  std::map<std::pair<int, std::size_t>, std::vector<std::pair<std::size_t, Elem>>> explicit_closure_;
  mutable std::map<std::pair<int, std::size_t>, std::vector<std::pair<std::size_t, Elem>>> closure_cache_;
};

struct ValidationReport {
  bool ok = true;
  int dim = -1;
  std::size_t cell = 0;
  Chain witness;  // the nonzero boundary of a boundary
  std::string message;
};
ValidationReport validate_complex(const EquivariantComplex& cx);

// One vertex, one edge per generator, one 2-cell per relator with Fox-derivative boundary.
EquivariantComplex presentation_complex(std::shared_ptr<const GroupOracle> G);
// Standard cube complex of Z^n.
EquivariantComplex cube_complex(int n);
// S^2 x R over Z = <t>: vertex v, edge t, 2-cell a with zero boundary, 3-cell c with boundary t.a - a.
EquivariantComplex tube_complex();

// Fox derivative d r / d x_gen as a group-ring element.
std::map<Elem, Rat> fox_derivative(const GroupOracle& G, const Word& r, int gen);

// Full subcomplex on vertices of word length <= R.
struct Ball {
  int radius = 0;
  std::map<Elem, int> vertex_dist;
  std::vector<std::vector<std::pair<std::size_t, Elem>>> cells;  // per dimension, sorted
  std::vector<std::map<std::pair<std::size_t, Elem>, std::size_t>> index;

  bool contains(int d, std::size_t cell, const Elem& g) const;
  std::size_t count(int d) const { return d < static_cast<int>(cells.size()) ? cells[static_cast<std::size_t>(d)].size() : 0; }
  bool supports(const Chain& x) const;
  int distance(const EquivariantComplex& cx, int d, std::size_t cell, const Elem& g) const;
};
Ball restrict_ball(const EquivariantComplex& cx, int R);

// LP view of the ball between dimensions n+1 (upper) and n (lower).
FiniteBall to_finite_ball(const EquivariantComplex& cx, const Ball& ball, int n, Direction direction);
// Cayley graph ball as a 1-dim chain-direction program: edges upper, vertices lower,
// vertices at distance < R interior. Involution edges are merged.
FiniteBall cayley_graph_ball(const GroupOracle& G, int R);

// Edge path of a word in a complex whose edge j is generator j with boundary x_j.v - v.
Chain word_cycle(const EquivariantComplex& cx, const Word& w);

// Pushforward to the base: coefficient sums per orbit cell.
std::vector<Rat> chain_evaluation(const EquivariantComplex& cx, const Chain& x);

enum class FillMode { rational, integral };
struct Filling {
  Rat volume;
  Chain chain;
};
std::optional<Filling> filling_volume(const EquivariantComplex& cx, const Ball& ball, const Chain& b, FillMode mode);

struct TwistedCocycle {
  int dim = 0;  // degree n+1
  std::size_t r = 1;
  std::vector<QVec> values;  // per orbit cell of dimension dim
  std::vector<QMatrix> rho;  // per generator; empty means trivial

  static TwistedCocycle untwisted(int dim, std::vector<Rat> values);
  QMatrix rho_of(const GroupOracle& G, const Elem& g) const;
  QVec value(const GroupOracle& G, std::size_t cell, const Elem& g) const;
};

struct PairingResult {
  QVec value;
  Filling first, second;
  bool distinct_fillings = false;
};
// Throws std::invalid_argument on a non-cycle, a nonzero evaluation, a cocycle
// failure on the ball, or when no filling exists in the ball.
PairingResult filling_pairing(const EquivariantComplex& cx, const Ball& ball, const Chain& b, const TwistedCocycle& w);
QVec evaluate_cochain(const EquivariantComplex& cx, const TwistedCocycle& w, const Chain& c);

struct Normalized {
  Chain chain;       // zero-evaluation cycle
  Chain correction;  // (n+1)-chain with chain = b - boundary(correction)
  Rat constant;      // vol(result) / vol(b), 1 for b = 0
};
// Throws std::invalid_argument when the evaluation is not a base boundary.
Normalized normalize_zero_evaluation(const EquivariantComplex& cx, const Chain& b);

struct DirectedRow {
  Rat volume;
  Rat max_pairing;  // max |pairing| (l-infinity over components)
  std::size_t cycles = 0;
};
std::vector<DirectedRow> directed_fv(const EquivariantComplex& cx, const Ball& ball, const TwistedCocycle& w,
                                     const std::vector<Chain>& family);
// All integral zero-evaluation n-cycles of volume <= k in the ball with a cell at the identity.
std::vector<DirectedRow> directed_fv_exhaustive(const EquivariantComplex& cx, const Ball& ball, const TwistedCocycle& w,
                                                int n, int k);

// Text formats.
std::string format_chain(const EquivariantComplex& cx, const Chain& x);
Chain parse_chain(const EquivariantComplex& cx, int dim, std::string_view text);
std::string format_complex(const EquivariantComplex& cx);
EquivariantComplex parse_complex(std::string_view text);
// Shipped complexes: grid, line, z3, tube, F2, tree3, bs12.
EquivariantComplex builtin_complex(std::string_view name);

}  // namespace qhl
