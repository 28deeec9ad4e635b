#pragma once

// Bipartite arrays (invariant linear equations written as two coefficient
// multisets), the equation of a permutation sequence, ancestors, theta
// schedules and the ancestor-string walk to a monotonic array.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "shfam/error.hpp"
#include "shfam/integer.hpp"
#include "shfam/sequences.hpp"

namespace shfam {

/// The equation  sum(pos_i x_i) = sum(neg_j y_j)  with strictly positive
/// coefficients. Both sides are kept sorted ascending.
class BipartiteArray {
 public:
  BipartiteArray() = default;

  BipartiteArray(std::vector<Integer> pos, std::vector<Integer> neg) : pos_(std::move(pos)), neg_(std::move(neg)) {
    for (const auto* side : {&pos_, &neg_})
      for (const auto& c : *side)
        if (c <= 0) throw precondition_error("array coefficients must be positive, got " + c.str());
    std::sort(pos_.begin(), pos_.end());
    std::sort(neg_.begin(), neg_.end());
  }

  BipartiteArray(std::initializer_list<long long> pos, std::initializer_list<long long> neg)
      : BipartiteArray(std::vector<Integer>(pos.begin(), pos.end()), std::vector<Integer>(neg.begin(), neg.end())) {}

  const std::vector<Integer>& pos() const noexcept { return pos_; }
  const std::vector<Integer>& neg() const noexcept { return neg_; }

  std::pair<std::size_t, std::size_t> type() const noexcept { return {pos_.size(), neg_.size()}; }
  std::size_t length() const noexcept { return pos_.size() + neg_.size(); }

  Integer sum_pos() const { return std::accumulate(pos_.begin(), pos_.end(), Integer(0)); }
  Integer sum_neg() const { return std::accumulate(neg_.begin(), neg_.end(), Integer(0)); }
  bool is_invariant() const { return sum_pos() == sum_neg(); }

  /// Type (s, 1) or (1, s): one side is a single coefficient.
  bool is_monotonic() const noexcept {
    return !pos_.empty() && !neg_.empty() && (pos_.size() == 1 || neg_.size() == 1);
  }

  const Integer& alpha() const { return require_side(pos_).back(); }
  const Integer& alpha_prime() const { return require_side(neg_).back(); }

  /// All coefficients as one multiset (sorted).
  std::vector<Integer> elements() const {
    std::vector<Integer> all(pos_);
    all.insert(all.end(), neg_.begin(), neg_.end());
    std::sort(all.begin(), all.end());
    return all;
  }

  BipartiteArray swapped() const { return BipartiteArray(neg_, pos_); }

  friend bool operator==(const BipartiteArray&, const BipartiteArray&) = default;
  friend std::strong_ordering operator<=>(const BipartiteArray& a, const BipartiteArray& b) {
    if (auto c = compare(a.pos_, b.pos_); c != 0) return c;
    return compare(a.neg_, b.neg_);
  }

 private:
  static const std::vector<Integer>& require_side(const std::vector<Integer>& side) {
    if (side.empty()) throw precondition_error("array side is empty");
    return side;
  }

  std::vector<Integer> pos_;
  std::vector<Integer> neg_;
};

/// Coefficients u_i - u_{i-1} (cyclically) split by sign.
inline BipartiteArray array_from_sequence(const PermSeq& u) {
  if (u.size() < 3) throw precondition_error("an equation needs a sequence of length >= 3");
  std::vector<Integer> pos, neg;
  const auto k = static_cast<std::ptrdiff_t>(u.size());
  for (std::ptrdiff_t i = 0; i < k; ++i) {
    Integer c = u.cyclic(i) - u.cyclic(i - 1);
    if (c > 0) pos.push_back(std::move(c));
    else neg.push_back(-c);
  }
  return BipartiteArray(std::move(pos), std::move(neg));
}

/// Distinct equations of every k-permutation sequence of r, 3 <= k <= |r|.
/// Arrays that differ only by swapping sides have the same solutions and are
/// listed once, in the orientation met first.
inline std::vector<BipartiteArray> equations_of(std::span<const Integer> r, std::size_t max_length = 0) {
  const std::size_t top = max_length == 0 ? r.size() : std::min(max_length, r.size());
  std::vector<BipartiteArray> out;
  std::set<BipartiteArray> seen;
  for (std::size_t k = 3; k <= top; ++k) {
    for (const auto& u : enumerate_sequences(r, k)) {
      BipartiteArray a = array_from_sequence(u);
      if (seen.contains(a) || seen.contains(a.swapped())) continue;
      seen.insert(a);
      out.push_back(std::move(a));
    }
  }
  return out;
}

struct ArrayDiagnostics {
  Integer alpha;
  Integer alpha_prime;
  Integer gap;
  Integer delta;
  std::vector<Integer> z_set;
  bool mutually_unequal = false;
};

/// alpha, alpha', their gap, the smallest element-or-difference delta and the
/// multiset Z(A) = A+ u A- u {gap} minus one copy each of alpha and alpha'.
inline ArrayDiagnostics diagnostics(const BipartiteArray& a) {
  if (a.pos().empty() || a.neg().empty()) throw precondition_error("diagnostics needs both sides nonempty");
  ArrayDiagnostics d;
  d.alpha = a.alpha();
  d.alpha_prime = a.alpha_prime();
  d.gap = abs(d.alpha - d.alpha_prime);

  const std::vector<Integer> all = a.elements();
  d.mutually_unequal = std::adjacent_find(all.begin(), all.end()) == all.end();
  d.delta = all.front();
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i] != all[j]) d.delta = std::min(d.delta, Integer(all[j] - all[i]));

  d.z_set = all;
  d.z_set.push_back(d.gap);
  d.z_set.erase(std::find(d.z_set.begin(), d.z_set.end(), d.alpha));
  d.z_set.erase(std::find(d.z_set.begin(), d.z_set.end(), d.alpha_prime));
  std::sort(d.z_set.begin(), d.z_set.end());
  return d;
}

/// Informational log-scale measurements of the (a, b)-feasibility conditions.
/// These are asymptotic conditions; the ratios only indicate the regime.
struct FeasibilityReport {
  bool mutually_unequal = false;
  double gap_over_alpha = 0;         // |alpha' - alpha| / alpha, should be small
  double log_alpha_over_loga_m = 0;  // log alpha / log^a m, should stay bounded
  double min_log_z_over_logb_m = 0;  // min over Z of log w / log^b m, bounded below
  double max_log_z_over_loga_alpha = 0;
};

inline FeasibilityReport feasibility_report(const BipartiteArray& arr, const Integer& m, double a, double b) {
  const ArrayDiagnostics d = diagnostics(arr);
  FeasibilityReport r;
  r.mutually_unequal = d.mutually_unequal;
  const Integer alpha = std::max(d.alpha, d.alpha_prime);
  r.gap_over_alpha = d.gap.convert_to<double>() / alpha.convert_to<double>();
  const double log_m = log2_of(m);
  const double log_alpha = log2_of(alpha);
  r.log_alpha_over_loga_m = log_alpha / std::pow(log_m, a);
  r.min_log_z_over_logb_m = std::numeric_limits<double>::infinity();
  for (const auto& w : d.z_set) {
    if (w <= 0) continue;
    const double lw = log2_of(w);
    r.min_log_z_over_logb_m = std::min(r.min_log_z_over_logb_m, lw / std::pow(log_m, b));
    r.max_log_z_over_loga_alpha = std::max(r.max_log_z_over_loga_alpha, lw / std::pow(log_alpha, a));
  }
  return r;
}

/// How strictly ancestor() validates theta.
enum class AncestorGate {
  positivity,    // every resulting coefficient is positive
  reproducible,  // additionally theta < delta(A), so theta is the smallest element
};

/// First (which = 1) or second (which = 2) type ancestor of an invariant array by theta.
inline BipartiteArray ancestor(const BipartiteArray& a, const Integer& theta, int which,
                               AncestorGate gate = AncestorGate::positivity) {
  if (which != 1 && which != 2) throw precondition_error("ancestor type must be 1 or 2");
  if (theta < 1) throw precondition_error("theta must be positive");
  if (a.pos().empty() || a.neg().empty()) throw precondition_error("ancestor needs both sides nonempty");
  if (!a.is_invariant()) throw precondition_error("ancestor needs an invariant array");
  const Integer alpha = a.alpha();
  const Integer alpha_p = a.alpha_prime();
  if (alpha == alpha_p) throw precondition_error("ancestor undefined when alpha == alpha' (" + alpha.str() + ")");
  if (gate == AncestorGate::reproducible) {
    const Integer delta = diagnostics(a).delta;
    if (theta >= delta) throw precondition_error("theta " + theta.str() + " is not below delta " + delta.str());
  }

  std::vector<Integer> pos(a.pos()), neg(a.neg());
  pos.pop_back();  // sorted, so back() is alpha
  neg.pop_back();
  // The larger maximum's side takes the gap; the branch mirrors across sides.
  auto& big_side = alpha_p > alpha ? neg : pos;
  auto& small_side = alpha_p > alpha ? pos : neg;
  const Integer gap = abs(alpha_p - alpha);
  if (which == 1) {
    if (gap - theta <= 0)
      throw precondition_error("first-type ancestor needs theta < |alpha - alpha'| (" + theta.str() + " >= " + gap.str() + ")");
    big_side.push_back(gap - theta);
    big_side.push_back(theta);
  } else {
    big_side.push_back(gap + theta);
    small_side.push_back(theta);
  }
  return BipartiteArray(std::move(pos), std::move(neg));
}

/// theta_1 = floor(2^{(log2 min_u)^a}), theta_{j+1} = floor(2^{(log2 theta_j)^a}).
/// Values reach the fixed point 2 and stay there.
inline std::vector<Integer> theta_schedule(const Integer& min_u, double a, std::size_t steps) {
  if (min_u < 2) throw precondition_error("theta schedule needs min_u >= 2");
  if (!(a > 0.0 && a < 1.0)) throw precondition_error("theta schedule exponent must lie in (0, 1)");
  if (steps < 1) throw precondition_error("theta schedule needs at least one step");
  std::vector<Integer> out;
  Integer x = min_u;
  for (std::size_t j = 0; j < steps; ++j) {
    x = tower_step(x, a);
    if (x < 2) throw step_failure(j + 1, "theta schedule fell below 2");
    out.push_back(x);
  }
  return out;
}

/// A string of arrays from A(U) to a monotonic array, each an ancestor of the
/// previous one. choices[i] is the deletion-character bit that selected the
/// ancestor type of step i+1 (0 -> first type, 1 -> second type).
struct AncestorString {
  std::vector<BipartiteArray> arrays;
  std::vector<Integer> thetas;
  std::vector<int> choices;
  std::vector<Integer> locations;  // m_i = floor(alpha_{i-1} / sigma_i), i = 1..tau
  std::vector<bool> reproducible;  // per step: theta_i < delta(A_[i-1])
  int epsilon = 0;

  std::size_t tau() const noexcept { return thetas.size(); }
  int ancestor_type(std::size_t step) const { return choices.at(step - 1) == 0 ? 1 : 2; }
};

/// The smaller of the two side maxima.
inline Integer smaller_maximum(const BipartiteArray& a) { return std::min(a.alpha(), a.alpha_prime()); }

/// Digit base of the link through the which-type ancestor by theta.
inline Integer link_base(const BipartiteArray& a, const Integer& theta, int which) {
  const Integer low = smaller_maximum(a);
  return which == 1 ? Integer(low + theta) : Integer(low - theta);
}

/// Walks A(U) through tau ancestors chosen by the deletion character. A
/// monotonic U yields the one-element string. Throws step_failure when an
/// ancestor coefficient would be nonpositive.
inline AncestorString algorithm1(const PermSeq& u, double a) {
  const SeqAnalysis an = analyze(u);
  AncestorString s;
  s.epsilon = an.epsilon;
  s.arrays.push_back(array_from_sequence(u));
  if (an.tau == 0) return s;

  s.thetas = theta_schedule(u.min(), a, an.tau);
  for (std::size_t i = 1; i <= an.tau; ++i) {
    const BipartiteArray prev = s.arrays.back();
    const int which = an.chi[i - 1] == 0 ? 1 : 2;
    try {
      s.reproducible.push_back(s.thetas[i - 1] < diagnostics(prev).delta);
      s.arrays.push_back(ancestor(prev, s.thetas[i - 1], which));
    } catch (const precondition_error& e) {
      throw step_failure(i, e.what());
    }
    s.choices.push_back(an.chi[i - 1]);
    s.locations.push_back(smaller_maximum(prev) / s.arrays.back().sum_pos());
  }
  return s;
}

}  // namespace shfam
