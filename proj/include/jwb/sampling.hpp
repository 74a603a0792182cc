#pragma once

#include <cstdint>
#include <random>

#include "jwb/linalg.hpp"

namespace jwb::sampling {

// Seeded generator for reproducible property checks. Draws go through
// eng() % n rather than std::uniform_int_distribution so sequences do not
// depend on the standard-library implementation.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}

  uint64_t next(uint64_t n) { return eng() % n; }  // uniform-ish in [0, n)

  // Small rational in [-9, 9] with denominator 1..4 (zero allowed).
  Rat rat() {
    int64_t num = static_cast<int64_t>(next(19)) - 9;
    int64_t den = static_cast<int64_t>(1 + next(4));
    return Rat(num, den);
  }

  Rat nonzero_rat() {
    for (;;) {
      Rat r = rat();
      if (r != 0) return r;
    }
  }

  // Sparse vector in dimension dim with at most max_support random entries.
  linalg::SparseVec element(int dim, int max_support = 6) {
    std::vector<std::pair<int32_t, Rat>> entries;
    int k = dim < max_support ? dim : max_support;
    for (int t = 0; t < k; ++t)
      entries.emplace_back(static_cast<int32_t>(next(static_cast<uint64_t>(dim))), rat());
    return linalg::sv_normalize(std::move(entries));
  }
};

}  // namespace jwb::sampling
