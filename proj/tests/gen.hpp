#pragma once
// Hand-rolled generators for property tests. Seeds are fixed so failures replay.

#include <random>

#include "qhl/exact.hpp"

namespace qhl::testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Rat rat(long num_bound = 9, long den_bound = 6) {
    Rat r(integer(-num_bound, num_bound), integer(1, den_bound));
    r.canonicalize();
    return r;
  }
  QMatrix matrix(std::size_t r, std::size_t c, long num_bound = 5, long den_bound = 3) {
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rat(num_bound, den_bound);
    return m;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qhl::testgen
