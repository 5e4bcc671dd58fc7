#include "qhl/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace qhl {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("group element exceeds 64-bit encoding");
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("group element exceeds 64-bit encoding");
  return r;
}

long long checked_shl(long long a, long long s) {
  if (s < 0 || s > 62) {
    if (a == 0) return 0;
    throw std::overflow_error("group element exceeds 64-bit encoding");
  }
  return checked_mul(a, 1LL << s);
}

namespace {

// Dyadic rational p / 2^e kept with e >= 0 and p odd unless e == 0.
struct Dyadic {
  long long p = 0, e = 0;
};

Dyadic normalize(long long p, long long e) {
  if (p == 0) return {0, 0};
  while (e < 0) {
    p = checked_shl(p, 1);
    ++e;
  }
  while (e > 0 && p % 2 == 0) {
    p /= 2;
    --e;
  }
  return {p, e};
}

Dyadic add(Dyadic x, Dyadic y) {
  long long E = std::max(x.e, y.e);
  return normalize(checked_add(checked_shl(x.p, E - x.e), checked_shl(y.p, E - y.e)), E);
}

// x * 2^-s
Dyadic scale(Dyadic x, long long s) { return normalize(x.p, checked_add(x.e, s)); }

void append_power(Word& w, int letter, long long k) {
  if (k < 0) {
    letter = -letter;
    k = -k;
  }
  for (long long i = 0; i < k; ++i) w.push_back(letter);
}

}  // namespace

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = -l;
  return out;
}

Word free_reduce(Word w) {
  Word out;
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

// ------------------------------------------------------------ common

Elem GroupOracle::letter(int l) const {
  std::size_t i = static_cast<std::size_t>(std::abs(l));
  if (l == 0 || i > rank()) throw std::invalid_argument("letter out of range");
  return times_letter(identity(), l);
}

Elem GroupOracle::evaluate(const Word& w) const {
  Elem x = identity();
  for (int l : w) x = times_letter(x, l);
  return x;
}

Word GroupOracle::parse_word(std::string_view s) const {
  Word w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '*' || s[i] == '.')) ++i;
  };
  skip();
  if (s.substr(i) == "1") return w;
  while (i < s.size()) {
    std::size_t best = 0, best_len = 0;
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (gens_[g].size() > best_len && s.substr(i, gens_[g].size()) == gens_[g]) {
        best = g;
        best_len = gens_[g].size();
      }
    if (best_len == 0) throw std::invalid_argument("malformed word at '" + std::string(s.substr(i)) + "'");
    i += best_len;
    long long k = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      bool brace = i < s.size() && s[i] == '{';
      if (brace) ++i;
      std::size_t start = i;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      std::string num(s.substr(start, i - start));
      if (num.empty() || num == "-" || num == "+") throw std::invalid_argument("malformed exponent");
      k = std::stoll(num);
      if (brace) {
        if (i >= s.size() || s[i] != '}') throw std::invalid_argument("malformed exponent");
        ++i;
      }
    } else if (s.substr(i, 5) == "⁻¹") {  // superscript -1
      k = -1;
      i += 5;
    }
    append_power(w, static_cast<int>(best) + 1, k);
    skip();
  }
  return w;
}

std::string GroupOracle::format_word(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long long k = static_cast<long long>(j - i) * (w[i] > 0 ? 1 : -1);
    if (!out.empty()) out += ' ';
    out += gens_[static_cast<std::size_t>(std::abs(w[i])) - 1];
    if (k != 1) out += "^" + std::to_string(k);
    i = j;
  }
  return out;
}

std::vector<std::pair<Elem, int>> GroupOracle::ball(int R) const {
  if (R < 0) throw std::invalid_argument("radius must be nonnegative");
  std::map<Elem, int> seen{{identity(), 0}};
  std::vector<Elem> frontier{identity()};
  std::vector<std::pair<Elem, int>> out{{identity(), 0}};
  for (int r = 1; r <= R; ++r) {
    std::vector<Elem> next;
    for (const auto& x : frontier)
      for (int g = 1; g <= static_cast<int>(rank()); ++g)
        for (int l : {g, -g}) {
          Elem y = times_letter(x, l);
          if (seen.emplace(y, r).second) next.push_back(y);
        }
    std::sort(next.begin(), next.end());
    for (const auto& y : next) out.emplace_back(y, r);
    frontier = std::move(next);
  }
  return out;
}

// ------------------------------------------------------------ free abelian

FreeAbelianGroup::FreeAbelianGroup(std::vector<std::string> gens) : GroupOracle(std::move(gens)) {
  if (rank() == 0) throw std::invalid_argument("free abelian group needs a generator");
}

std::string FreeAbelianGroup::name() const { return rank() == 1 ? "Z" : "Z" + std::to_string(rank()); }

Elem FreeAbelianGroup::multiply(const Elem& x, const Elem& y) const {
  Elem z(rank());
  for (std::size_t i = 0; i < rank(); ++i) z[i] = checked_add(x[i], y[i]);
  return z;
}

Elem FreeAbelianGroup::invert(const Elem& x) const {
  Elem z(x);
  for (auto& v : z) v = -v;
  return z;
}

Word FreeAbelianGroup::normal_word(const Elem& x) const {
  Word w;
  for (std::size_t i = 0; i < rank(); ++i) append_power(w, static_cast<int>(i) + 1, x[i]);
  return w;
}

Elem FreeAbelianGroup::times_letter(const Elem& x, int l) const {
  std::size_t i = static_cast<std::size_t>(std::abs(l));
  if (l == 0 || i > rank()) throw std::invalid_argument("letter out of range");
  Elem z(x);
  z[i - 1] = checked_add(z[i - 1], l > 0 ? 1 : -1);
  return z;
}

std::vector<Word> FreeAbelianGroup::relators() const {
  std::vector<Word> out;
  for (int i = 1; i <= static_cast<int>(rank()); ++i)
    for (int j = i + 1; j <= static_cast<int>(rank()); ++j) out.push_back({i, j, -i, -j});
  return out;
}

// ------------------------------------------------------------ free and tree

Elem FreeGroup::multiply(const Elem& x, const Elem& y) const {
  Elem z(x);
  for (auto l : y) {
    if (!z.empty() && z.back() == -l)
      z.pop_back();
    else
      z.push_back(l);
  }
  return z;
}

Elem FreeGroup::invert(const Elem& x) const {
  Elem z(x.rbegin(), x.rend());
  for (auto& l : z) l = -l;
  return z;
}

Word FreeGroup::normal_word(const Elem& x) const { return Word(x.begin(), x.end()); }

Elem TreeGroup::multiply(const Elem& x, const Elem& y) const {
  Elem z(x);
  for (auto l : y) {
    long long g = l < 0 ? -l : l;
    if (!z.empty() && z.back() == g)
      z.pop_back();
    else
      z.push_back(g);
  }
  return z;
}

Word TreeGroup::normal_word(const Elem& x) const { return Word(x.begin(), x.end()); }

// ------------------------------------------------------------ BS(1,2)

Elem BS12Group::multiply(const Elem& x, const Elem& y) const {
  // (u, n)(v, m) = (u + v 2^-n, n + m)
  Dyadic s = add({x[0], x[1]}, scale({y[0], y[1]}, x[2]));
  return {s.p, s.e, checked_add(x[2], y[2])};
}

Elem BS12Group::invert(const Elem& x) const {
  Dyadic s = scale({-x[0], x[1]}, -x[2]);
  return {s.p, s.e, -x[2]};
}

Word BS12Group::normal_word(const Elem& x) const {
  // a^(p/2^e) = b^e a^p b^-e
  Word w;
  append_power(w, 2, x[1]);
  append_power(w, 1, x[0]);
  append_power(w, 2, checked_add(x[2], -x[1]));
  return w;
}

Elem BS12Group::times_letter(const Elem& x, int l) const {
  if (l == 1 || l == -1) return multiply(x, {l, 0, 0});
  if (l == 2 || l == -2) return {x[0], x[1], checked_add(x[2], l / 2)};
  throw std::invalid_argument("letter out of range");
}

std::vector<Word> BS12Group::relators() const { return {{-2, 1, 2, -1, -1}}; }

// ------------------------------------------------------------ diamond groups

DiamondGroup::DiamondGroup(int n) : GroupOracle({"a"}), n_(n) {
  if (n < 1) throw std::invalid_argument("diamond level must be at least 1");
  for (int i = 1; i <= n; ++i) {
    gens_.push_back("b" + std::to_string(i));
    gens_.push_back("c" + std::to_string(i));
  }
}

Elem DiamondGroup::identity() const {
  if (n_ == 1) return {0};
  Elem x{0, 0};
  x.resize(2 + static_cast<std::size_t>(n_), 0);
  return x;
}

namespace {

// Level 1: insert a^amount in front of syllable idx and push it left.
void push_a(Elem& x, std::size_t idx, long long amount) {
  while (idx > 0 && amount != 0) {
    std::size_t base = 1 + 3 * (idx - 1);
    if (x[base + 1] < 0) {
      amount = checked_mul(amount, 2);  // s^-1 a^m = a^2m s^-1
    } else {
      long long total = checked_add(x[base + 2], amount);
      long long r = ((total % 2) + 2) % 2;
      x[base + 2] = r;
      amount = (total - r) / 2;  // s a^(2j+r) = a^j s a^r
    }
    --idx;
  }
  if (idx == 0) x[0] = checked_add(x[0], amount);
}

struct Levels {
  Dyadic x;
  std::vector<Word> w;
};

Levels unpack(const Elem& e, int n) {
  Levels L{{e[0], e[1]}, {}};
  std::size_t pos = 2;
  for (int i = 0; i < n; ++i) {
    std::size_t len = static_cast<std::size_t>(e[pos++]);
    L.w.emplace_back(e.begin() + static_cast<long>(pos), e.begin() + static_cast<long>(pos + len));
    pos += len;
  }
  return L;
}

Elem pack(const Levels& L) {
  Elem e{L.x.p, L.x.e};
  for (const auto& w : L.w) {
    e.push_back(static_cast<long long>(w.size()));
    e.insert(e.end(), w.begin(), w.end());
  }
  return e;
}

long long exponent_sum(const Levels& L) {
  long long s = 0;
  for (const auto& w : L.w)
    for (int l : w) s += l > 0 ? 1 : -1;
  return s;
}

}  // namespace

Elem DiamondGroup::times_letter(const Elem& x0, int l) const {
  int g = std::abs(l);
  if (l == 0 || g > static_cast<int>(rank())) throw std::invalid_argument("letter out of range");
  int sgn = l > 0 ? 1 : -1;
  if (n_ == 1) {
    Elem x = x0;
    std::size_t k = (x.size() - 1) / 3;
    if (g == 1) {
      push_a(x, k, sgn);
      return x;
    }
    long long s = g - 1;  // 1 = b, 2 = c
    if (k > 0) {
      std::size_t base = 1 + 3 * (k - 1);
      // pinches: s^-1 a^m s and s a^0 s^-1 (s a s^-1 is reduced)
      if (x[base] == s && x[base + 1] == -sgn && x[base + 2] == 0) {
        x.resize(base);
        return x;
      }
    }
    x.insert(x.end(), {s, static_cast<long long>(sgn), 0});
    return x;
  }
  Levels L = unpack(x0, n_);
  if (g == 1) {
    L.x = add(L.x, scale({sgn, 0}, exponent_sum(L)));
  } else {
    int level = g / 2;  // b_i = 2i, c_i = 2i + 1 as letters; index g = letter
    int local = (g % 2 == 0 ? 1 : 2) * sgn;
    auto& w = L.w[static_cast<std::size_t>(level - 1)];
    if (!w.empty() && w.back() == -local)
      w.pop_back();
    else
      w.push_back(local);
  }
  return pack(L);
}

Elem DiamondGroup::multiply(const Elem& x, const Elem& y) const {
  Elem z = x;
  for (int l : normal_word(y)) z = times_letter(z, l);
  return z;
}

Elem DiamondGroup::invert(const Elem& x) const { return evaluate(inverse_word(normal_word(x))); }

Word DiamondGroup::normal_word(const Elem& x) const {
  Word w;
  if (n_ == 1) {
    append_power(w, 1, x[0]);
    for (std::size_t i = 1; i + 2 < x.size(); i += 3) {
      int s = static_cast<int>(x[i]) + 1;
      w.push_back(x[i + 1] > 0 ? s : -s);
      append_power(w, 1, x[i + 2]);
    }
    return w;
  }
  Levels L = unpack(x, n_);
  // a^(p/2^e) = b1^e a^p b1^-e
  append_power(w, b_letter(1), L.x.e);
  append_power(w, 1, L.x.p);
  append_power(w, b_letter(1), -L.x.e);
  for (int i = 0; i < n_; ++i)
    for (int l : L.w[static_cast<std::size_t>(i)]) {
      int base = std::abs(l) == 1 ? b_letter(i + 1) : c_letter(i + 1);
      w.push_back(l > 0 ? base : -base);
    }
  return w;
}

std::vector<Word> DiamondGroup::relators() const {
  std::vector<Word> out;
  for (int i = 1; i <= n_; ++i)
    for (int s : {b_letter(i), c_letter(i)}) out.push_back({-s, 1, s, -1, -1});
  for (int i = 1; i <= n_; ++i)
    for (int j = i + 1; j <= n_; ++j)
      for (int x : {b_letter(i), c_letter(i)})
        for (int y : {b_letter(j), c_letter(j)}) out.push_back({x, y, -x, -y});
  return out;
}

std::unique_ptr<GroupOracle> make_group(std::string_view name) {
  if (name == "Z" || name == "line") return std::make_unique<FreeAbelianGroup>(std::vector<std::string>{"x"});
  if (name == "tube") return std::make_unique<FreeAbelianGroup>(std::vector<std::string>{"t"});
  if (name == "Z2" || name == "grid") return std::make_unique<FreeAbelianGroup>(std::vector<std::string>{"x", "y"});
  if (name == "Z3") return std::make_unique<FreeAbelianGroup>(std::vector<std::string>{"x", "y", "z"});
  if (name == "F2") return std::make_unique<FreeGroup>(std::vector<std::string>{"a", "b"});
  if (name == "tree3") return std::make_unique<TreeGroup>();
  if (name == "BS12") return std::make_unique<BS12Group>();
  if (name.substr(0, 7) == "diamond" && name.size() == 8 && name[7] >= '1' && name[7] <= '9')
    return std::make_unique<DiamondGroup>(name[7] - '0');
  throw std::invalid_argument("unknown group '" + std::string(name) + "'");
}

}  // namespace qhl
