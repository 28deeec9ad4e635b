#pragma once

// Solution-free sets: exhaustive and meet-in-the-middle verification, greedy
// and exact search, Behrend sphere sets for one-sided equations, the
// digit-expansion lift through an ancestor, and the per-equation pipeline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shfam/arrays.hpp"
#include "shfam/error.hpp"
#include "shfam/integer.hpp"
#include "shfam/sequences.hpp"

namespace shfam {

struct SearchLimits {
  std::size_t max_arity = 6;
  std::uint64_t max_checks = 1'000'000'000;  // elementary tuple evaluations per search
  std::size_t exact_cap = 64;                // largest m for max_solution_free_exact
  std::uint64_t max_output = 4'000'000;      // largest set a construction may materialize
};

/// A nontrivial solution: slot i < s is the i-th positive coefficient, slot
/// s + j the j-th negative one (both sides in ascending coefficient order).
struct SolutionWitness {
  std::vector<std::pair<std::size_t, Value>> assignment;
  Value lhs_value = 0;
  Value rhs_value = 0;

  friend bool operator==(const SolutionWitness&, const SolutionWitness&) = default;
};

enum class VerifyMethod { exhaustive, meet_in_middle, incremental, theorem };

inline const char* to_string(VerifyMethod m) {
  switch (m) {
    case VerifyMethod::exhaustive: return "exhaustive";
    case VerifyMethod::meet_in_middle: return "meet-in-middle";
    case VerifyMethod::incremental: return "incremental";
    case VerifyMethod::theorem: return "theorem";
  }
  return "?";
}

struct LinkParams {
  Integer base;
  unsigned digit_count = 0;
  std::vector<Value> digit_set;  // B - 1
  int side = 1;                  // ancestor type used
  Integer sigma;
  Integer location;
};

struct SolutionFreeCert {
  std::vector<Value> set;
  std::vector<BipartiteArray> equations;
  VerifyMethod method = VerifyMethod::exhaustive;
  bool verified = false;
  std::optional<SolutionWitness> witness;
  std::optional<std::size_t> failing_equation;
  std::string construction = "verify";
  std::vector<std::string> notes;
  std::optional<LinkParams> link;
};

namespace detail {

struct MachineEquation {
  std::vector<Value> pos;
  std::vector<Value> neg;
  std::size_t arity() const noexcept { return pos.size() + neg.size(); }
};

constexpr Value kSafeMagnitude = Value{1} << 61;

inline MachineEquation to_machine(const BipartiteArray& a, Value max_abs_value, const SearchLimits& limits) {
  if (a.length() < 2) throw precondition_error("equation needs at least two coefficients");
  if (a.length() > limits.max_arity)
    throw cap_exceeded("equation arity " + std::to_string(a.length()) + " exceeds cap " + std::to_string(limits.max_arity), a.length());
  const Integer bound = std::max(a.sum_pos(), a.sum_neg()) * Integer(std::max<Value>(max_abs_value, 1));
  if (bound >= kSafeMagnitude) throw precondition_error("equation too large for 64-bit search");
  MachineEquation e;
  for (const auto& c : a.pos()) e.pos.push_back(c.convert_to<Value>());
  for (const auto& c : a.neg()) e.neg.push_back(c.convert_to<Value>());
  return e;
}

inline Value max_abs(std::span<const Value> v) {
  Value m = 0;
  for (Value x : v) m = std::max(m, x < 0 ? -x : x);
  return m;
}

inline std::vector<Value> normalized(std::span<const Value> set) {
  std::vector<Value> v(set.begin(), set.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// n^k saturating at UINT64_MAX.
inline std::uint64_t sat_pow(std::uint64_t n, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && r > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    r *= n;
  }
  return r;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Odometer over index tuples in lexicographic order.
inline bool advance(std::vector<std::size_t>& idx, std::size_t radix) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < radix) return true;
    idx[i] = 0;
  }
  return false;
}

inline Value weighted(std::span<const Value> coef, std::span<const std::size_t> idx, std::span<const Value> vals) {
  Value s = 0;
  for (std::size_t i = 0; i < coef.size(); ++i) s += coef[i] * vals[idx[i]];
  return s;
}

inline SolutionWitness make_witness(const MachineEquation& e, std::span<const std::size_t> xs, std::span<const std::size_t> ys,
                                    std::span<const Value> vals) {
  SolutionWitness w;
  for (std::size_t i = 0; i < xs.size(); ++i) w.assignment.emplace_back(i, vals[xs[i]]);
  for (std::size_t j = 0; j < ys.size(); ++j) w.assignment.emplace_back(e.pos.size() + j, vals[ys[j]]);
  w.lhs_value = weighted(e.pos, xs, vals);
  w.rhs_value = weighted(e.neg, ys, vals);
  return w;
}

struct SearchOutcome {
  std::optional<SolutionWitness> witness;
  VerifyMethod method = VerifyMethod::exhaustive;
};

// Direct enumeration of all |vals|^k assignments.
inline std::optional<SolutionWitness> search_direct(const MachineEquation& e, std::span<const Value> vals) {
  const std::size_t s = e.pos.size(), k = e.arity();
  std::vector<std::size_t> idx(k, 0);
  do {
    const std::span<const std::size_t> xs(idx.data(), s), ys(idx.data() + s, k - s);
    if (weighted(e.pos, xs, vals) != weighted(e.neg, ys, vals)) continue;
    if (std::adjacent_find(idx.begin(), idx.end(), std::not_equal_to<>()) == idx.end()) continue;
    return make_witness(e, xs, ys, vals);
  } while (advance(idx, vals.size()));
  return std::nullopt;
}

// Hash the negative side's sums (keeping the two lexicographically smallest
// tuples per sum), then scan positive tuples in lexicographic order. The
// first hit is the lexicographically least witness, same as search_direct.
inline std::optional<SolutionWitness> search_mitm(const MachineEquation& e, std::span<const Value> vals) {
  const std::size_t n = vals.size(), s = e.pos.size(), r = e.neg.size();
  constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
  std::unordered_map<Value, std::pair<std::uint64_t, std::uint64_t>> table;
  std::vector<std::size_t> ys(r, 0);
  std::uint64_t rank = 0;
  do {
    auto [it, fresh] = table.try_emplace(weighted(e.neg, ys, vals), rank, none);
    if (!fresh && it->second.second == none) it->second.second = rank;
    ++rank;
  } while (advance(ys, n));

  // Rank of the constant tuple (c, ..., c) on the negative side.
  std::uint64_t repunit = 0;
  for (std::size_t j = 0; j < r; ++j) repunit = repunit * n + 1;
  auto decode = [&](std::uint64_t code) {
    std::vector<std::size_t> out(r);
    for (std::size_t j = r; j-- > 0;) {
      out[j] = static_cast<std::size_t>(code % n);
      code /= n;
    }
    return out;
  };

  std::vector<std::size_t> xs(s, 0);
  do {
    const auto it = table.find(weighted(e.pos, xs, vals));
    if (it == table.end()) continue;
    const bool constant = std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
    std::uint64_t pick = it->second.first;
    if (constant && pick == xs[0] * repunit) pick = it->second.second;
    if (pick == none) continue;
    return make_witness(e, xs, decode(pick), vals);
  } while (advance(xs, n));
  return std::nullopt;
}

inline SearchOutcome search(const BipartiteArray& a, std::span<const Value> set, const SearchLimits& limits) {
  const std::vector<Value> vals = normalized(set);
  const MachineEquation e = to_machine(a, max_abs(vals), limits);
  if (vals.size() <= 1) return {std::nullopt, VerifyMethod::exhaustive};
  const std::size_t k = e.arity();
  const std::uint64_t direct = sat_pow(vals.size(), k);
  constexpr std::uint64_t kDirectLimit = std::uint64_t{1} << 22;
  if (k <= 4 && direct <= kDirectLimit) return {search_direct(e, vals), VerifyMethod::exhaustive};
  const std::uint64_t split = sat_add(sat_pow(vals.size(), e.pos.size()), sat_pow(vals.size(), e.neg.size()));
  if (split > limits.max_checks) throw cap_exceeded("meet-in-the-middle search exceeds check cap", split);
  return {search_mitm(e, vals), VerifyMethod::meet_in_middle};
}

// Sums of side tuples over S u {x} that use x at least once. The tuple with
// every slot equal to x is excluded (its sum is sum(coef) * x).
inline void sums_with(std::span<const Value> coef, std::span<const Value> kept, Value x, std::vector<Value>& out,
                      std::uint64_t& work) {
  const std::size_t L = coef.size();
  const std::uint32_t full = (std::uint32_t{1} << L) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> free_slots;
    Value base = 0;
    for (std::size_t i = 0; i < L; ++i) {
      if (mask & (std::uint32_t{1} << i)) base += coef[i] * x;
      else free_slots.push_back(i);
    }
    if (kept.empty()) continue;
    std::vector<std::size_t> idx(free_slots.size(), 0);
    do {
      Value sum = base;
      for (std::size_t j = 0; j < free_slots.size(); ++j) sum += coef[free_slots[j]] * kept[idx[j]];
      out.push_back(sum);
      ++work;
    } while (advance(idx, kept.size()));
  }
}

// Solution tracking for one equation while a set grows by increasing
// elements: counts of every side sum over the kept set.
class IncrementalEquation {
 public:
  explicit IncrementalEquation(MachineEquation e) : e_(std::move(e)) {
    for (Value c : e_.pos) sigma_ += c;
  }

  // Whether S u {x} still has no nontrivial solution. Fills the sums that
  // committing x would add.
  bool admits(std::span<const Value> kept, Value x, std::vector<Value>& new_pos, std::vector<Value>& new_neg,
              std::uint64_t& work) const {
    new_pos.clear();
    new_neg.clear();
    sums_with(e_.pos, kept, x, new_pos, work);
    sums_with(e_.neg, kept, x, new_neg, work);
    const Value all_x = sigma_ * x;
    // A tuple using x against a tuple over S alone.
    if (neg_.contains(all_x) || pos_.contains(all_x)) return false;
    for (Value p : new_pos)
      if (neg_.contains(p) || p == all_x) return false;
    for (Value q : new_neg)
      if (pos_.contains(q) || q == all_x) return false;
    // Both sides use x; only the all-x pair is trivial.
    if (!new_pos.empty() && !new_neg.empty()) {
      const std::unordered_set<Value> neg_x(new_neg.begin(), new_neg.end());
      for (Value p : new_pos)
        if (neg_x.contains(p)) return false;
    }
    return true;
  }

  void commit(Value x, std::span<const Value> new_pos, std::span<const Value> new_neg) {
    add(pos_, sigma_ * x, 1);
    add(neg_, sigma_ * x, 1);
    for (Value p : new_pos) add(pos_, p, 1);
    for (Value q : new_neg) add(neg_, q, 1);
  }

  void rollback(Value x, std::span<const Value> new_pos, std::span<const Value> new_neg) {
    add(pos_, sigma_ * x, -1);
    add(neg_, sigma_ * x, -1);
    for (Value p : new_pos) add(pos_, p, -1);
    for (Value q : new_neg) add(neg_, q, -1);
  }

 private:
  struct Counts {
    std::unordered_map<Value, std::uint32_t> map;
    bool contains(Value v) const { return map.contains(v); }
  };

  static void add(Counts& c, Value v, int delta) {
    if (delta > 0) {
      ++c.map[v];
    } else if (auto it = c.map.find(v); it != c.map.end() && --it->second == 0) {
      c.map.erase(it);
    }
  }

  MachineEquation e_;
  Value sigma_ = 0;
  Counts pos_, neg_;
};

inline std::vector<IncrementalEquation> incremental_system(std::span<const BipartiteArray> equations, Value max_value,
                                                           const SearchLimits& limits) {
  std::vector<IncrementalEquation> out;
  for (const auto& a : equations) {
    if (!a.is_invariant()) throw precondition_error("incremental search needs invariant equations");
    out.emplace_back(to_machine(a, max_value, limits));
  }
  return out;
}

}  // namespace detail

/// The lexicographically least nontrivial solution of `a` over `set`, if any.
inline std::optional<SolutionWitness> find_solution(const BipartiteArray& a, std::span<const Value> set,
                                                    const SearchLimits& limits = {}) {
  return detail::search(a, set, limits).witness;
}

inline SolutionFreeCert verify_solution_free(std::span<const Value> set, std::span<const BipartiteArray> equations,
                                             const SearchLimits& limits = {}) {
  SolutionFreeCert cert;
  cert.set = detail::normalized(set);
  cert.equations.assign(equations.begin(), equations.end());
  cert.verified = true;
  for (std::size_t i = 0; i < equations.size(); ++i) {
    auto outcome = detail::search(equations[i], cert.set, limits);
    if (outcome.method == VerifyMethod::meet_in_middle) cert.method = VerifyMethod::meet_in_middle;
    if (outcome.witness) {
      cert.verified = false;
      cert.witness = std::move(outcome.witness);
      cert.failing_equation = i;
      break;
    }
  }
  return cert;
}

/// Verification that tolerates an oversized search: marks the certificate as
/// resting on the construction's proof instead of throwing.
inline void verify_or_mark(SolutionFreeCert& cert, const SearchLimits& limits) {
  try {
    SolutionFreeCert checked = verify_solution_free(cert.set, cert.equations, limits);
    cert.method = checked.method;
    cert.verified = checked.verified;
    cert.witness = std::move(checked.witness);
    cert.failing_equation = checked.failing_equation;
  } catch (const cap_exceeded& e) {
    cert.method = VerifyMethod::theorem;
    cert.verified = false;
    cert.notes.push_back(std::string("machine verification skipped: ") + e.what());
  }
}

/// Scans lo..hi and keeps x whenever no equation gains a nontrivial solution
/// that uses x together with earlier kept elements.
inline SolutionFreeCert greedy_solution_free_in(Value lo, Value hi, std::span<const BipartiteArray> equations,
                                                const SearchLimits& limits = {}) {
  if (lo > hi) throw precondition_error("greedy search needs a nonempty interval");
  auto system = detail::incremental_system(equations, std::max(lo < 0 ? -lo : lo, hi < 0 ? -hi : hi), limits);
  SolutionFreeCert cert;
  cert.equations.assign(equations.begin(), equations.end());
  cert.construction = "greedy";
  cert.method = VerifyMethod::incremental;

  std::uint64_t work = 0;
  std::vector<std::vector<Value>> new_pos(system.size()), new_neg(system.size());
  for (Value x = lo; x <= hi; ++x) {
    bool ok = true;
    for (std::size_t i = 0; i < system.size() && ok; ++i) ok = system[i].admits(cert.set, x, new_pos[i], new_neg[i], work);
    if (work > limits.max_checks) throw cap_exceeded("greedy search exceeds check cap", work);
    if (!ok) continue;
    for (std::size_t i = 0; i < system.size(); ++i) system[i].commit(x, new_pos[i], new_neg[i]);
    cert.set.push_back(x);
  }
  cert.verified = true;
  return cert;
}

/// Greedy scan of [1, m].
inline SolutionFreeCert greedy_solution_free(Value m, std::span<const BipartiteArray> equations,
                                             const SearchLimits& limits = {}) {
  if (m < 1) throw precondition_error("greedy search needs m >= 1");
  return greedy_solution_free_in(1, m, equations, limits);
}

namespace detail {

// Branch and bound for the largest free subset of [1, n]. Elements are tried
// in increasing order with inclusion first, so among maximum sets the first
// one found is lexicographically smallest. `best_below[L]` is the optimum for
// intervals of length L < n (equations are translation invariant).
class ExactSearch {
 public:
  ExactSearch(std::span<const BipartiteArray> equations, Value n, const std::vector<std::size_t>& best_below,
              std::vector<Value> incumbent, const SearchLimits& limits)
      : system_(incremental_system(equations, n, limits)),
        n_(n),
        best_below_(best_below),
        best_(std::move(incumbent)),
        limits_(limits) {}

  std::vector<Value> run() {
    // Extending the optimum for n - 1 by one element is the best possible.
    ceiling_ = n_ >= 2 ? best_below_[static_cast<std::size_t>(n_ - 1)] + 1 : 1;
    if (best_.size() < ceiling_) dfs(1);
    return best_;
  }

 private:
  void dfs(Value x) {
    if (done_) return;
    if (chosen_.size() > best_.size()) {
      best_ = chosen_;
      if (best_.size() >= ceiling_) {
        done_ = true;
        return;
      }
    }
    if (x > n_) return;
    const auto remaining = static_cast<std::size_t>(n_ - x + 1);
    const std::size_t room = remaining < best_below_.size() ? best_below_[remaining] : ceiling_;
    if (chosen_.size() + room <= best_.size()) return;

    std::vector<std::vector<Value>> np(system_.size()), nn(system_.size());
    bool ok = true;
    for (std::size_t i = 0; i < system_.size() && ok; ++i) ok = system_[i].admits(chosen_, x, np[i], nn[i], work_);
    if (work_ > limits_.max_checks) throw cap_exceeded("exact search exceeds check cap", work_);
    if (ok) {
      for (std::size_t i = 0; i < system_.size(); ++i) system_[i].commit(x, np[i], nn[i]);
      chosen_.push_back(x);
      dfs(x + 1);
      chosen_.pop_back();
      for (std::size_t i = 0; i < system_.size(); ++i) system_[i].rollback(x, np[i], nn[i]);
    }
    dfs(x + 1);
  }

  std::vector<IncrementalEquation> system_;
  Value n_;
  const std::vector<std::size_t>& best_below_;
  std::vector<Value> best_;
  std::vector<Value> chosen_;
  std::size_t ceiling_ = 0;
  bool done_ = false;
  std::uint64_t work_ = 0;
  const SearchLimits& limits_;
};

}  // namespace detail

/// A maximum-cardinality subset of [1, m] free of every equation; the
/// lexicographically smallest among maximum sets.
inline SolutionFreeCert max_solution_free_exact(Value m, std::span<const BipartiteArray> equations,
                                                const SearchLimits& limits = {}) {
  if (m < 1) throw precondition_error("exact search needs m >= 1");
  if (static_cast<std::uint64_t>(m) > limits.exact_cap)
    throw cap_exceeded("exact search over [1, " + std::to_string(m) + "] exceeds cap " + std::to_string(limits.exact_cap),
                       static_cast<std::uint64_t>(m));
  std::vector<std::size_t> best_below{0};
  std::vector<Value> best;
  for (Value n = 1; n <= m; ++n) {
    SolutionFreeCert greedy = greedy_solution_free(n, equations, limits);
    best = detail::ExactSearch(equations, n, best_below, std::move(greedy.set), limits).run();
    best_below.push_back(best.size());
  }
  SolutionFreeCert cert;
  cert.set = std::move(best);
  cert.equations.assign(equations.begin(), equations.end());
  cert.construction = "exact";
  cert.method = VerifyMethod::incremental;
  cert.verified = true;
  return cert;
}

/// Parameters of the sphere construction for  a_1 x_1 + ... + a_k x_k = sigma y.
struct BehrendParams {
  Integer sigma;
  std::vector<Integer> weights;  // the multi-coefficient side
  Integer base;                  // d
  Integer digit_bound;           // D, digits lie in [0, D]
  unsigned length = 0;           // n digits
  Integer shell;                 // squared norm shared by every digit vector
};

namespace detail {

/// reach[j][rho]: number of j-digit vectors over [0, D] with squared norm rho.
inline std::vector<std::vector<std::uint64_t>> shell_table(unsigned n, std::uint64_t D, const SearchLimits& limits) {
  const std::uint64_t max_norm = n * D * D;
  const std::uint64_t work = sat_add(max_norm, 1) * (D + 1) * n;
  if (work > limits.max_checks) throw cap_exceeded("Behrend shell count exceeds check cap", work);
  std::vector<std::vector<std::uint64_t>> reach(n + 1, std::vector<std::uint64_t>(max_norm + 1, 0));
  reach[0][0] = 1;
  for (unsigned j = 1; j <= n; ++j)
    for (std::uint64_t rho = 0; rho <= max_norm; ++rho)
      if (reach[j - 1][rho] != 0)
        for (std::uint64_t dgt = 0; dgt <= D && rho + dgt * dgt <= max_norm; ++dgt) reach[j][rho + dgt * dgt] += reach[j - 1][rho];
  return reach;
}

}  // namespace detail

/// Base, digit bound, length and the most populated shell (ties to the smallest).
inline BehrendParams behrend_parameters(const BipartiteArray& a, const Integer& m, const SearchLimits& limits = {}) {
  if (!a.is_invariant() || !a.is_monotonic()) throw precondition_error("Behrend base needs a monotonic invariant array");
  if (m < 2) throw precondition_error("Behrend base needs m >= 2");
  BehrendParams p;
  const bool single_pos = a.pos().size() == 1;
  p.sigma = single_pos ? a.pos().front() : a.neg().front();
  p.weights = single_pos ? a.neg() : a.pos();
  if (p.sigma < 2) throw precondition_error("Behrend base needs sigma >= 2");

  const double y = std::sqrt(log2_of(m));
  Integer spread = pow2_floor(y);
  if (y < 62.0 && std::exp2(y) != std::floor(std::exp2(y))) spread += 1;
  p.base = std::max(Integer(2 * p.sigma), spread);
  p.digit_bound = (p.base - 1) / p.sigma;
  p.length = floor_log(m, p.base);
  if (p.length == 0) {
    // d > m: a single digit no larger than m.
    p.length = 1;
    p.digit_bound = std::min(p.digit_bound, m);
  }
  if (ipow(p.base, p.length) >= detail::kSafeMagnitude) throw cap_exceeded("Behrend output exceeds 64-bit range", p.length);
  if (ipow(p.digit_bound + 1, p.length) >= Integer(std::numeric_limits<std::int64_t>::max()))
    throw cap_exceeded("Behrend digit space too large", p.length);

  const auto reach = detail::shell_table(p.length, p.digit_bound.convert_to<std::uint64_t>(), limits);
  const auto& last = reach[p.length];
  std::size_t shell = 1;
  for (std::size_t rho = 1; rho < last.size(); ++rho)
    if (last[rho] > last[shell]) shell = rho;
  p.shell = shell;
  return p;
}

/// Integers in [1, m] whose base-d digits (all <= D) lie on the most populated
/// squared-norm shell. Carry-free addition plus strict convexity of the norm
/// makes the set free of the one-sided equation.
inline SolutionFreeCert behrend_base(const BipartiteArray& a, const Integer& m, const SearchLimits& limits = {}) {
  const BehrendParams p = behrend_parameters(a, m, limits);
  const unsigned n = p.length;
  const auto D = p.digit_bound.convert_to<std::uint64_t>();
  const auto shell = p.shell.convert_to<std::uint64_t>();
  const auto reach = detail::shell_table(n, D, limits);
  if (reach[n][shell] > limits.max_output) throw cap_exceeded("Behrend shell exceeds output cap", reach[n][shell]);

  SolutionFreeCert cert;
  cert.construction = "behrend";
  cert.equations.push_back(a);
  const Value d = p.base.convert_to<Value>();
  // Most significant digit first with ascending digits: values come out sorted.
  std::function<void(unsigned, std::uint64_t, Value)> walk = [&](unsigned left, std::uint64_t need, Value acc) {
    if (left == 0) {
      if (need == 0 && acc != 0) cert.set.push_back(acc);
      return;
    }
    for (std::uint64_t dgt = 0; dgt <= D && dgt * dgt <= need; ++dgt)
      if (reach[left - 1][need - dgt * dgt] != 0) walk(left - 1, need - dgt * dgt, acc * d + static_cast<Value>(dgt));
  };
  walk(n, shell, 0);
  cert.notes.push_back("base " + p.base.str() + ", digits in [0, " + p.digit_bound.str() + "], length " + std::to_string(n) +
                       ", shell " + std::to_string(shell));
  verify_or_mark(cert, limits);
  return cert;
}

/// Lifts a set B free of ancestor(a, theta, which) to a set free of a: all
/// positive integers with digit_count base-(alpha_min +- theta) digits from B - 1.
inline SolutionFreeCert link_construct(std::span<const Value> b_set, const BipartiteArray& a, const Integer& theta, int which,
                                       unsigned digit_count, const SearchLimits& limits = {}) {
  const BipartiteArray anc = ancestor(a, theta, which);
  const Integer sigma = anc.sum_pos();
  const Integer low_max = smaller_maximum(a);
  const Integer location = low_max / sigma;
  const Integer base = link_base(a, theta, which);
  if (base < 2) throw precondition_error("link base " + base.str() + " is below 2");
  if (digit_count < 1) throw precondition_error("link needs at least one digit");
  if ((location - 1) * sigma >= base)
    throw precondition_error("carry-free condition fails: (" + location.str() + " - 1) * " + sigma.str() + " >= " + base.str());

  const std::vector<Value> b = detail::normalized(b_set);
  for (Value v : b)
    if (v < 1 || Integer(v) > location)
      throw precondition_error("b_set element " + std::to_string(v) + " outside [1, " + location.str() + "]");

  SolutionFreeCert cert;
  cert.construction = "link";
  cert.equations.push_back(a);
  try {
    if (auto w = find_solution(anc, b, limits)) throw precondition_error("b_set is not free of the ancestor");
  } catch (const cap_exceeded&) {
    cert.notes.push_back("ancestor freeness of b_set not machine-checked");
  }

  if (ipow(base, digit_count) >= detail::kSafeMagnitude) throw cap_exceeded("link output exceeds 64-bit range", digit_count);
  if (detail::sat_pow(b.size(), digit_count) > limits.max_output)
    throw cap_exceeded("link output exceeds output cap", detail::sat_pow(b.size(), digit_count));

  LinkParams params{base, digit_count, {}, which, sigma, location};
  for (Value v : b) params.digit_set.push_back(v - 1);
  const Value beta = base.convert_to<Value>();
  std::function<void(unsigned, Value)> walk = [&](unsigned left, Value acc) {
    if (left == 0) {
      if (acc != 0) cert.set.push_back(acc);
      return;
    }
    for (Value dgt : params.digit_set) walk(left - 1, acc * beta + dgt);
  };
  walk(digit_count, 0);
  cert.link = std::move(params);
  verify_or_mark(cert, limits);
  return cert;
}

struct PipelineLevel {
  std::size_t index = 0;  // position in the ancestor string
  Integer location;
  std::string construction;
  std::size_t size = 0;
  bool fallback = false;
};

struct PipelineResult {
  AncestorString string;
  std::vector<PipelineLevel> levels;  // from the monotonic end back to A(U)
  SolutionFreeCert cert;
};

/// Largest greedy fallback interval the pipeline will scan.
inline constexpr Value kPipelineGreedyCap = 200'000;

/// A set in [1, m] free of L(u): a base set at the monotonic end of the
/// ancestor string, lifted back link by link.
inline PipelineResult pipeline_single_equation(const PermSeq& u, double a, const Integer& m, const SearchLimits& limits = {}) {
  if (m < 1) throw precondition_error("pipeline needs m >= 1");
  PipelineResult out;
  out.string = algorithm1(u, a);
  const AncestorString& s = out.string;
  const std::size_t tau = s.tau();
  auto location_of = [&](std::size_t level) { return level == 0 ? m : s.locations[level - 1]; };

  auto greedy_at = [&](const BipartiteArray& arr, const Integer& loc, std::size_t level) {
    if (loc > kPipelineGreedyCap) throw step_failure(level, "location " + loc.str() + " too large for greedy fallback");
    const BipartiteArray eq[] = {arr};
    return greedy_solution_free(loc.convert_to<Value>(), eq, limits).set;
  };

  std::vector<Value> current;
  {
    const Integer loc = location_of(tau);
    PipelineLevel lvl{tau, loc, "behrend", 0, false};
    if (loc >= 2) {
      try {
        current = behrend_base(s.arrays[tau], loc, limits).set;
      } catch (const cap_exceeded& e) {
        throw step_failure(tau, std::string("base set: ") + e.what());
      }
    } else {
      lvl.construction = "greedy";
      lvl.fallback = true;
      if (loc == 1) current = {1};
    }
    lvl.size = current.size();
    out.levels.push_back(lvl);
  }

  for (std::size_t i = tau; i >= 1; --i) {
    const BipartiteArray& target = s.arrays[i - 1];
    const Integer loc = location_of(i - 1);
    const int which = s.ancestor_type(i);
    const Integer base = link_base(target, s.thetas[i - 1], which);
    const unsigned digits = base >= 2 ? floor_log(loc + 1, base) : 0;
    PipelineLevel lvl{i - 1, loc, "link", 0, false};
    if (digits >= 1) {
      try {
        current = link_construct(current, target, s.thetas[i - 1], which, digits, limits).set;
      } catch (const error& e) {
        throw step_failure(i, std::string("link: ") + e.what());
      }
    } else {
      lvl.construction = "greedy";
      lvl.fallback = true;
      current = greedy_at(target, loc, i);
    }
    lvl.size = current.size();
    out.levels.push_back(lvl);
  }

  out.cert.set = std::move(current);
  out.cert.equations.push_back(s.arrays.front());
  out.cert.construction = "pipeline";
  for (const auto& lvl : out.levels)
    if (lvl.fallback) out.cert.notes.push_back("greedy fallback at level " + std::to_string(lvl.index) + " (location " + lvl.location.str() + ")");
  verify_or_mark(out.cert, limits);
  return out;
}

}  // namespace shfam
