#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qhl/chain.hpp"
#include "qhl/group.hpp"

namespace qhl {

// Cells of X_n are pairs (e0, P): e0 = 0 for the vertex, 1 for the loop a, and
// P[i] in {0, 'b', 'c'} says whether the cell is a product with I_{b_{i+1}} or I_{c_{i+1}}.
struct DiamondCell {
  int e0 = 0;
  std::vector<char> P;
  int dim() const;
  int top_level() const;  // largest level with an interval factor, 0 if none
};

class DiamondComplex {
 public:
  explicit DiamondComplex(int n);

  int level() const { return n_; }
  const DiamondGroup& group() const { return *G_; }
  const EquivariantComplex& complex() const { return cx_; }
  std::size_t index(const DiamondCell& c) const;
  const DiamondCell& cell(int d, std::size_t i) const { return cells_.at(static_cast<std::size_t>(d)).at(i); }
  // Orbit index of the top cell e_I of level m, I in {b,c}^m given as a string.
  std::size_t top_cell(const std::string& I) const;

  // Product with the interval I_x at level m (1-based); cells must have no factor at levels >= m.
  Chain times_interval(const Chain& x, int m, char which) const;
  // Pushforward along the monodromy a -> a^2, b_i -> b_i, c_i -> c_i.
  Chain rho(const Chain& x) const;
  Elem rho(const Elem& g) const;

  // sum over I in {b,c}^m of (-1)^{#b} e_I, indexed by orbit cells of dimension m+1.
  std::vector<Rat> sigma(int m) const;
  // Base boundary of a base chain of dimension d.
  std::vector<Rat> base_boundary(int d, const std::vector<Rat>& x) const;
  // Matrix of the base boundary from dimension d to d-1.
  QMatrix base_boundary_matrix(int d) const;

  // The hard-to-fill chain tau_m(k) in the cover of X_n, m <= n.
  Chain tau(int m, int k) const;

 private:
  int n_;
  std::shared_ptr<DiamondGroup> G_;
  EquivariantComplex cx_;
  std::vector<std::vector<DiamondCell>> cells_;
  std::map<std::pair<int, std::vector<char>>, std::size_t> index_;
};

struct DiamondConstants {
  Rat C, Cprime;
};
// From the inductive bounds: C_1 = 6, C'_1 = 2, C_n = 2C_{n-1} + 2C'_{n-1} + 2 vol tau_{n-1}(1),
// C'_n = 2C'_{n-1} + 2^{n+1}.
DiamondConstants diamond_constants(int n);

struct TauReport {
  int n = 0, k = 0;
  Rat K;                  // chain evaluation is K sigma_n
  bool evaluation_is_multiple = false;
  Rat K_low, K_high;      // 2^k and 2^{n+k}
  bool K_ok = false;
  Rat volume;             // vol tau_n(k)
  Rat boundary_volume;    // vol d tau_n(k)
  Rat boundary_bound;     // C_n k^n
  bool boundary_ok = false;
  Rat rho_diff;           // vol(rho tau_n(k-1) - tau_n(k))
  Rat rho_bound;          // C'_n k^{n-1}
  bool rho_ok = false;
  bool ok() const { return evaluation_is_multiple && K_ok && boundary_ok && rho_ok; }
  std::vector<std::string> violations() const;
};
TauReport verify_tau(const DiamondComplex& X, int k);

// b^-k a b^k a b^-k a^-1 b^k a^-1 with b^-1 a b = a^2.
Word bs_word(int k);
// The loop of bs_word(k) as a 1-cycle in the BS(1,2) presentation complex.
Chain bs_word_boundary(const EquivariantComplex& bs12, int k);

}  // namespace qhl
