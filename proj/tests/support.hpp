#pragma once

// Random case generators shared by the unit tests and the acceptance binary.

#include <optional>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "shfam/shfam.hpp"

namespace support {

using namespace shfam;

/// Invariant array with side sizes in [lo, hi] and elements in [1, top].
inline BipartiteArray random_invariant(std::mt19937_64& rng, std::size_t lo, std::size_t hi, long long top) {
  std::uniform_int_distribution<std::size_t> size(lo, hi);
  std::uniform_int_distribution<long long> elem(1, top);
  for (;;) {
    const std::size_t s = size(rng), r = size(rng);
    std::vector<Integer> pos, neg;
    Integer rest = 0;
    for (std::size_t i = 0; i < s; ++i) {
      pos.emplace_back(elem(rng));
      rest += pos.back();
    }
    for (std::size_t j = 0; j + 1 < r; ++j) {
      neg.emplace_back(elem(rng));
      rest -= neg.back();
    }
    if (rest < 1 || rest > top) continue;
    neg.push_back(rest);
    return BipartiteArray(pos, neg);
  }
}

inline oracle::Eq to_oracle(const BipartiteArray& a) {
  std::vector<oracle::I> pos, neg;
  for (const auto& c : a.pos()) pos.push_back(c.convert_to<oracle::I>());
  for (const auto& c : a.neg()) neg.push_back(c.convert_to<oracle::I>());
  return oracle::from_sides(pos, neg);
}

struct LinkCase {
  BipartiteArray array;
  Integer theta;
  int which = 1;
  BipartiteArray ancestor;
  Integer location;
  std::vector<Value> b_set;
};

inline SearchLimits link_limits() {
  SearchLimits l;
  l.max_arity = 8;  // a first-type ancestor of a (3, 3) array has 7 coefficients
  l.exact_cap = 64;
  return l;
}

/// Random array with sides of size 2..3 and elements <= 200, a valid theta and
/// type, and B = the exact maximum free set of the ancestor in [1, location].
/// Cases whose location falls outside [1, exact_cap] are redrawn.
inline LinkCase random_link_case(std::mt19937_64& rng, const SearchLimits& limits) {
  for (;;) {
    LinkCase c;
    c.array = random_invariant(rng, 2, 3, 200);
    if (c.array.alpha() == c.array.alpha_prime()) continue;
    c.which = std::uniform_int_distribution<int>(1, 2)(rng);
    const Integer gap = abs(c.array.alpha() - c.array.alpha_prime());
    const Integer low = smaller_maximum(c.array);
    const Integer top = c.which == 1 ? gap - 1 : low - 2;
    if (top < 1) continue;
    c.theta = std::uniform_int_distribution<long long>(1, top.convert_to<long long>())(rng);
    c.ancestor = ancestor(c.array, c.theta, c.which);
    c.location = low / c.ancestor.sum_pos();
    if (c.location < 1 || c.location > limits.exact_cap) continue;
    const BipartiteArray eq[] = {c.ancestor};
    c.b_set = max_solution_free_exact(c.location.convert_to<Value>(), eq, limits).set;
    return c;
  }
}

}  // namespace support
