#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "shfam/solfree.hpp"

using namespace shfam;

namespace {

BipartiteArray arr(std::initializer_list<long long> p, std::initializer_list<long long> n) { return BipartiteArray(p, n); }

const BipartiteArray kAP = arr({1, 1}, {2});

std::vector<BipartiteArray> ap_equations() { return equations_of(std::vector<Integer>{0, 1, 2}); }

std::vector<oracle::I> as_oracle(std::span<const Value> s) { return {s.begin(), s.end()}; }

bool naive_free(std::span<const BipartiteArray> eqs, std::span<const Value> set) {
  for (const auto& a : eqs)
    if (oracle::has_nontrivial_solution(support::to_oracle(a), as_oracle(set))) return false;
  return true;
}

// Sphere set computed from scratch: every digit vector, most common norm.
std::vector<Value> behrend_oracle(long long sigma, long long m) {
  const long long spread = static_cast<long long>(std::ceil(std::exp2(std::sqrt(std::log2(static_cast<double>(m))))));
  const long long d = std::max(2 * sigma, spread);
  long long D = (d - 1) / sigma;
  int n = 0;
  for (long long p = d; p <= m; p *= d) ++n;
  if (n == 0) {
    n = 1;
    D = std::min(D, m);
  }
  std::map<long long, std::vector<Value>> shells;
  std::vector<long long> digits(static_cast<std::size_t>(n), 0);
  for (;;) {
    long long norm = 0, value = 0;
    for (int c = n - 1; c >= 0; --c) {
      norm += digits[static_cast<std::size_t>(c)] * digits[static_cast<std::size_t>(c)];
      value = value * d + digits[static_cast<std::size_t>(c)];
    }
    if (norm > 0) shells[norm].push_back(value);
    int p = 0;
    while (p < n && ++digits[static_cast<std::size_t>(p)] > D) digits[static_cast<std::size_t>(p++)] = 0;
    if (p == n) break;
  }
  std::vector<Value> best;
  for (auto& [norm, vals] : shells)
    if (vals.size() > best.size()) best = vals;
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace

TEST_CASE("find_solution examples", "[solfree]") {
  const std::vector<Value> s123{1, 2, 3};
  const auto w = find_solution(kAP, s123);
  REQUIRE(w.has_value());
  // Lexicographically least by slot order: x1 = 1, x2 = 3 against y = 2.
  CHECK(w->assignment == std::vector<std::pair<std::size_t, Value>>{{0, 1}, {1, 3}, {2, 2}});
  CHECK(w->lhs_value == 4);
  CHECK(w->rhs_value == 4);

  const std::vector<Value> s1245{1, 2, 4, 5};
  CHECK_FALSE(find_solution(kAP, s1245).has_value());
  const std::vector<Value> seven{7};
  CHECK_FALSE(find_solution(arr({3, 4, 9}, {7, 9}), seven).has_value());
  CHECK_FALSE(find_solution(kAP, std::vector<Value>{}).has_value());
}

TEST_CASE("find_solution refuses equations above the arity cap", "[solfree]") {
  const std::vector<Value> s{1, 2};
  CHECK_THROWS_AS(find_solution(arr({1, 1, 1, 1}, {1, 1, 1, 1}), s), cap_exceeded);
  SearchLimits wide;
  wide.max_arity = 8;
  CHECK(find_solution(arr({1, 1, 1, 1}, {1, 1, 1, 1}), s, wide).has_value());
}

TEST_CASE("find_solution returns the oracle's least witness", "[solfree][oracle]") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long long> val(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const BipartiteArray a = support::random_invariant(rng, 1 + trial % 3, 3, 12);
    std::set<Value> pool;
    const std::size_t size = 2 + static_cast<std::size_t>(trial % 7);
    while (pool.size() < size) pool.insert(val(rng));
    const std::vector<Value> set(pool.begin(), pool.end());
    const auto ours = find_solution(a, set);
    const auto theirs = oracle::least_solution(support::to_oracle(a), as_oracle(set));
    REQUIRE(ours.has_value() == theirs.has_value());
    if (!ours) continue;
    std::vector<oracle::I> values;
    for (const auto& [slot, v] : ours->assignment) values.push_back(v);
    CHECK(values == *theirs);
    CHECK(ours->lhs_value == ours->rhs_value);
  }
}

TEST_CASE("verify_solution_free", "[solfree]") {
  const auto eqs = ap_equations();
  REQUIRE(eqs.size() == 1);
  const std::vector<Value> good{1, 2, 4, 5}, bad{1, 2, 3};
  const SolutionFreeCert ok = verify_solution_free(good, eqs);
  CHECK(ok.verified);
  CHECK_FALSE(ok.witness.has_value());
  const SolutionFreeCert fail = verify_solution_free(bad, eqs);
  CHECK_FALSE(fail.verified);
  REQUIRE(fail.witness.has_value());
  CHECK(fail.failing_equation == std::size_t{0});
  CHECK(verify_solution_free(std::vector<Value>{}, eqs).verified);
}

TEST_CASE("greedy examples", "[solfree]") {
  const auto eqs = ap_equations();
  CHECK(greedy_solution_free(20, eqs).set == std::vector<Value>{1, 2, 4, 5, 10, 11, 13, 14});
  CHECK(greedy_solution_free(1, eqs).set == std::vector<Value>{1});
  CHECK(greedy_solution_free(3, eqs).set == std::vector<Value>{1, 2});
  CHECK_THROWS_AS(greedy_solution_free(0, eqs), precondition_error);
  const BipartiteArray wide[] = {arr({1, 1, 1, 1}, {1, 1, 1, 1})};
  CHECK_THROWS_AS(greedy_solution_free(5, wide), cap_exceeded);
}

TEST_CASE("greedy matches the naive scans", "[solfree][oracle]") {
  const auto eqs = ap_equations();
  for (Value m : {10, 50, 200, 500}) {
    const auto ours = greedy_solution_free(m, eqs).set;
    CHECK(as_oracle(ours) == oracle::greedy_3ap(m));
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const BipartiteArray a = support::random_invariant(rng, 1, 2, 9);
    const BipartiteArray eq[] = {a};
    const Value lo = trial % 3, hi = 25;
    CHECK(as_oracle(greedy_solution_free_in(lo, hi, eq).set) ==
          oracle::greedy_recheck(lo, hi, {support::to_oracle(a)}));
  }
}

TEST_CASE("greedy output is a prefix-monotone family", "[solfree][property]") {
  const std::vector<BipartiteArray> eqs = equations_of(std::vector<Integer>{0, 1, 3, 7}, 4);
  std::vector<Value> prev;
  for (Value m = 1; m <= 60; ++m) {
    const auto cur = greedy_solution_free(m, eqs).set;
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
}

TEST_CASE("exact maximum examples", "[solfree]") {
  const auto eqs = ap_equations();
  CHECK(max_solution_free_exact(4, eqs).set == std::vector<Value>{1, 2, 4});
  CHECK(max_solution_free_exact(1, eqs).set == std::vector<Value>{1});
  CHECK(max_solution_free_exact(9, eqs).set == std::vector<Value>{1, 2, 4, 8, 9});
  CHECK(max_solution_free_exact(12, eqs).set.size() == 6);
  CHECK_THROWS_AS(max_solution_free_exact(100, eqs), cap_exceeded);
}

TEST_CASE("exact maximum agrees with subset enumeration", "[solfree][oracle]") {
  const auto eqs = ap_equations();
  for (int m = 1; m <= 14; ++m)
    CHECK(as_oracle(max_solution_free_exact(m, eqs).set) == oracle::max_free_bruteforce(m, {support::to_oracle(eqs[0])}));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const BipartiteArray a = support::random_invariant(rng, 1, 2, 7);
    const BipartiteArray eq[] = {a};
    const int m = 8 + trial % 5;
    CHECK(as_oracle(max_solution_free_exact(m, eq).set) == oracle::max_free_bruteforce(m, {support::to_oracle(a)}));
  }
}

TEST_CASE("exact maximum is at least greedy", "[solfree][property]") {
  const std::vector<BipartiteArray> eqs = equations_of(std::vector<Integer>{0, 2, 5}, 3);
  for (Value m = 1; m <= 40; ++m)
    CHECK(max_solution_free_exact(m, eqs).set.size() >= greedy_solution_free(m, eqs).set.size());
}

TEST_CASE("behrend base", "[solfree]") {
  const SolutionFreeCert c = behrend_base(kAP, 10000);
  CHECK(c.verified);
  CHECK(c.set == behrend_oracle(2, 10000));
  CHECK(c.set.size() == 15);
  CHECK(naive_free(c.equations, c.set));

  const BehrendParams p = behrend_parameters(kAP, 10000);
  CHECK(p.base == 13);
  CHECK(p.digit_bound == 6);
  CHECK(p.length == 3);
  CHECK(p.shell == 41);
  const Value d = p.base.convert_to<Value>();
  for (Value v : c.set) {
    CHECK((v >= 1 && v <= 10000));
    Value norm = 0;
    for (Value x = v; x > 0; x /= d) {
      CHECK(x % d <= 6);
      norm += (x % d) * (x % d);
    }
    CHECK(Integer(norm) == p.shell);
  }

  CHECK(behrend_base(kAP, 2).set == std::vector<Value>{1});
  CHECK_THROWS_AS(behrend_base(arr({1}, {1}), 100), precondition_error);
  CHECK_THROWS_AS(behrend_base(arr({2, 3}, {1, 4}), 100), precondition_error);
  CHECK_THROWS_AS(behrend_base(kAP, 1), precondition_error);
}

TEST_CASE("behrend base for wider one-sided equations", "[solfree][oracle]") {
  for (const auto& [a, sigma] : {std::pair{arr({1, 2}, {3}), 3LL}, std::pair{arr({4}, {1, 1, 2}), 4LL}}) {
    for (long long m : {50LL, 777LL, 5000LL}) {
      const SolutionFreeCert c = behrend_base(a, m);
      CHECK(c.set == behrend_oracle(sigma, m));
      CHECK(c.verified);
      for (Value v : c.set) CHECK(v <= m);
    }
  }
}

TEST_CASE("link construction", "[solfree]") {
  const BipartiteArray a = arr({2, 3, 95}, {1, 99});
  const BipartiteArray anc = ancestor(a, 2, 1);
  CHECK(anc == arr({2, 3}, {1, 2, 2}));
  const BipartiteArray anc_eq[] = {anc};
  const auto b = max_solution_free_exact(19, anc_eq).set;
  const SolutionFreeCert m2 = link_construct(b, a, 2, 1, 2);
  const bool zero_digit = std::find(b.begin(), b.end(), 1) != b.end();
  CHECK(m2.set.size() == b.size() * b.size() - (zero_digit ? 1 : 0));
  REQUIRE(m2.link.has_value());
  CHECK(m2.link->base == 97);
  CHECK(m2.link->location == 19);
  for (Value v : m2.set) CHECK((v >= 1 && v <= 97 * 97 - 1));
  CHECK(m2.verified);

  // Single digit: B - 1 without zero.
  const BipartiteArray a2 = arr({40, 7}, {45, 2});
  const BipartiteArray anc2[] = {ancestor(a2, 1, 2)};
  CHECK(anc2[0] == arr({1, 7}, {2, 6}));
  const auto b2 = max_solution_free_exact(5, anc2).set;
  std::vector<Value> shifted;
  for (Value v : b2)
    if (v > 1) shifted.push_back(v - 1);
  const SolutionFreeCert m1 = link_construct(b2, a2, 1, 2, 1);
  CHECK(m1.set == shifted);
  CHECK(m1.link->base == 39);
  CHECK(m1.verified);
  CHECK(link_construct(std::vector<Value>{1}, a, 2, 1, 3).set.empty());

  CHECK_THROWS_AS(link_construct(std::vector<Value>{20}, a, 2, 1, 1), precondition_error);
  CHECK_THROWS_AS(link_construct(std::vector<Value>{1, 2}, a, 2, 1, 1), precondition_error);
  CHECK_THROWS_AS(link_construct(std::vector<Value>{1}, arr({2, 3}, {2, 3}), 1, 1, 1), precondition_error);
}

TEST_CASE("link soundness on random arrays", "[solfree][property]") {
  std::mt19937_64 rng(424242);
  const SearchLimits limits = support::link_limits();
  int cases = 0, nonempty = 0;
  while (cases < 100) {
    const support::LinkCase c = support::random_link_case(rng, limits);
    for (unsigned ell : {1u, 2u}) {
      const SolutionFreeCert m = link_construct(c.b_set, c.array, c.theta, c.which, ell, limits);
      CHECK_FALSE(find_solution(c.array, m.set, limits).has_value());
      if (m.set.size() <= 12 && c.array.length() <= 5) CHECK(naive_free(m.equations, m.set));
      if (!m.set.empty()) ++nonempty;
    }
    ++cases;
  }
  CHECK(nonempty > 0);
}

TEST_CASE("verified certificates survive naive re-verification", "[solfree][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const BipartiteArray a = support::random_invariant(rng, 1, 2, 10);
    const BipartiteArray eq[] = {a};
    const SolutionFreeCert g = greedy_solution_free(60, eq);
    if (g.set.size() > 30) continue;
    CHECK(naive_free(eq, g.set));
    // Subset closure, spot-checked on every other element.
    std::vector<Value> half;
    for (std::size_t i = 0; i < g.set.size(); i += 2) half.push_back(g.set[i]);
    CHECK(verify_solution_free(half, eq).verified);
  }
}

TEST_CASE("pipeline", "[solfree]") {
  SECTION("monotonic sequence reduces to the base set") {
    const PermSeq u{1, 2, 4};
    const PipelineResult p = pipeline_single_equation(u, 0.5, 1000);
    CHECK(p.string.tau() == 0);
    CHECK(p.cert.set == behrend_base(array_from_sequence(u), 1000).set);
    CHECK(p.cert.verified);
  }
  SECTION("tower sequences yield verified subsets of [m]") {
    const PlasticSet r = plastic_tower(Integer(1) << 256, 4);
    int built = 0;
    for (const auto& u : enumerate_sequences(r.elements(), 4)) {
      PipelineResult p;
      try {
        p = pipeline_single_equation(u, 0.5, 100000);
      } catch (const step_failure&) {
        continue;
      }
      ++built;
      CHECK(p.cert.verified);
      for (Value v : p.cert.set) CHECK((v >= 1 && v <= 100000));
      CHECK(p.levels.size() == p.string.tau() + 1);
      CHECK(naive_free(p.cert.equations, p.cert.set));
    }
    CHECK(built > 0);
  }
  SECTION("step failures carry the step") {
    CHECK_THROWS_AS(pipeline_single_equation(PermSeq{65536, 2, 16, 4}, 0.5, 1000), step_failure);
  }
}
