#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qhl {

// Canonical encoding of a group element; equal elements have equal encodings.
using Elem = std::vector<long long>;
// Letters are +(i+1) for generator i and -(i+1) for its inverse.
using Word = std::vector<int>;

class GroupOracle {
 public:
  explicit GroupOracle(std::vector<std::string> gens) : gens_(std::move(gens)) {}
  virtual ~GroupOracle() = default;

  virtual std::string name() const = 0;
  virtual Elem identity() const = 0;
  virtual Elem multiply(const Elem& x, const Elem& y) const = 0;
  virtual Elem invert(const Elem& x) const = 0;
  // A word spelling x; deterministic in x.
  virtual Word normal_word(const Elem& x) const = 0;
  // Defining relators, used by Fox calculus.
  virtual std::vector<Word> relators() const = 0;
  // x * letter
  virtual Elem times_letter(const Elem& x, int letter) const = 0;

  const std::vector<std::string>& generators() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }
  Elem letter(int l) const;
  Elem evaluate(const Word& w) const;
  bool equal(const Word& u, const Word& v) const { return evaluate(u) == evaluate(v); }
  // Juxtaposed generator names, each optionally followed by ^k; "1" or "" is the identity.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;
  std::string format(const Elem& x) const { return format_word(normal_word(x)); }
  // Breadth-first ball in the Cayley graph, ordered by (length, encoding).
  std::vector<std::pair<Elem, int>> ball(int R) const;

 protected:
  std::vector<std::string> gens_;
};

Word inverse_word(const Word& w);
Word free_reduce(Word w);

class FreeAbelianGroup : public GroupOracle {
 public:
  explicit FreeAbelianGroup(std::vector<std::string> gens);
  std::string name() const override;
  Elem identity() const override { return Elem(rank(), 0); }
  Elem multiply(const Elem& x, const Elem& y) const override;
  Elem invert(const Elem& x) const override;
  Word normal_word(const Elem& x) const override;
  std::vector<Word> relators() const override;
  Elem times_letter(const Elem& x, int letter) const override;
};

class FreeGroup : public GroupOracle {
 public:
  explicit FreeGroup(std::vector<std::string> gens) : GroupOracle(std::move(gens)) {}
  std::string name() const override { return "F" + std::to_string(rank()); }
  Elem identity() const override { return {}; }
  Elem multiply(const Elem& x, const Elem& y) const override;
  Elem invert(const Elem& x) const override;
  Word normal_word(const Elem& x) const override;
  std::vector<Word> relators() const override { return {}; }
  Elem times_letter(const Elem& x, int letter) const override { return multiply(x, {letter}); }
};

// Free product of three copies of Z/2; its Cayley graph is the 3-regular tree.
class TreeGroup : public GroupOracle {
 public:
  TreeGroup() : GroupOracle({"x", "y", "z"}) {}
  std::string name() const override { return "tree3"; }
  Elem identity() const override { return {}; }
  Elem multiply(const Elem& x, const Elem& y) const override;
  Elem invert(const Elem& x) const override { return Elem(x.rbegin(), x.rend()); }
  Word normal_word(const Elem& x) const override;
  std::vector<Word> relators() const override { return {{1, 1}, {2, 2}, {3, 3}}; }
  Elem times_letter(const Elem& x, int letter) const override { return multiply(x, {letter}); }
};

// <a, b | b^-1 a b = a^2>, stored as a^x b^n with x = p / 2^e: {p, e, n}.
class BS12Group : public GroupOracle {
 public:
  BS12Group() : GroupOracle({"a", "b"}) {}
  std::string name() const override { return "BS12"; }
  Elem identity() const override { return {0, 0, 0}; }
  Elem multiply(const Elem& x, const Elem& y) const override;
  Elem invert(const Elem& x) const override;
  Word normal_word(const Elem& x) const override;
  std::vector<Word> relators() const override;
  Elem times_letter(const Elem& x, int letter) const override;
};

// <a, b_i, c_i | b_i^-1 a b_i = c_i^-1 a c_i = a^2, level-i letters commute with level-j letters>.
// Level 1 uses Britton normal form {m, (s, eps, r)...}: a^m s^eps a^r ...
// with s in {1 = b, 2 = c}, r in {0, 1} after s and r = 0 after s^-1.
// Level n >= 2 is Z[1/2] x| (F_2)^n: {p, e, then per level: length, letters}.
class DiamondGroup : public GroupOracle {
 public:
  explicit DiamondGroup(int n);
  std::string name() const override { return "diamond" + std::to_string(n_); }
  int level() const { return n_; }
  Elem identity() const override;
  Elem multiply(const Elem& x, const Elem& y) const override;
  Elem invert(const Elem& x) const override;
  Word normal_word(const Elem& x) const override;
  std::vector<Word> relators() const override;
  Elem times_letter(const Elem& x, int letter) const override;
  // Letters: a = 1, b_i = 2i, c_i = 2i + 1.
  static int a_letter() { return 1; }
  static int b_letter(int i) { return 2 * i; }
  static int c_letter(int i) { return 2 * i + 1; }

 private:
  int n_;
};

std::unique_ptr<GroupOracle> make_group(std::string_view name);

// Checked 64-bit helpers shared with the chain code.
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);
long long checked_shl(long long a, long long s);

}  // namespace qhl
