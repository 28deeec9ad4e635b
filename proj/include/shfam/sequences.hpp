#pragma once

// Cyclic permutation sequences: monotonicity, deletion of the maximum,
// terminating numbers and deletion characters.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "shfam/error.hpp"
#include "shfam/integer.hpp"

namespace shfam {

/// An ordered tuple of pairwise distinct nonnegative integers, read cyclically.
class PermSeq {
 public:
  PermSeq() = default;

  explicit PermSeq(std::vector<Integer> entries) : entries_(std::move(entries)) {
    std::set<Integer> seen;
    for (const auto& e : entries_) {
      if (e < 0) throw precondition_error("sequence entries must be nonnegative, got " + e.str());
      if (!seen.insert(e).second) throw precondition_error("repeated entry " + e.str() + " in sequence");
    }
  }

  PermSeq(std::initializer_list<long long> entries)
      : PermSeq(std::vector<Integer>(entries.begin(), entries.end())) {}

  std::size_t size() const noexcept { return entries_.size(); }
  const Integer& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Integer> entries() const noexcept { return entries_; }

  /// Entry at cyclic position i (any integer, wrapped into [0, size)).
  const Integer& cyclic(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(entries_.size());
    return entries_[static_cast<std::size_t>(((i % n) + n) % n)];
  }

  std::size_t argmax() const {
    return static_cast<std::size_t>(std::max_element(entries_.begin(), entries_.end()) - entries_.begin());
  }

  const Integer& max() const { return entries_[argmax()]; }
  const Integer& min() const { return *std::min_element(entries_.begin(), entries_.end()); }

  /// The rotation that starts at the maximum entry.
  PermSeq canonical_rotation() const {
    std::vector<Integer> r(entries_);
    std::rotate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(argmax()), r.end());
    return PermSeq(std::move(r), trusted{});
  }

  friend bool operator==(const PermSeq&, const PermSeq&) = default;
  friend auto operator<=>(const PermSeq& a, const PermSeq& b) {
    return compare(a.entries_, b.entries_);
  }

 private:
  struct trusted {};
  PermSeq(std::vector<Integer> entries, trusted) : entries_(std::move(entries)) {}
  friend PermSeq delete_max(const PermSeq&);
  friend std::vector<PermSeq> enumerate_sequences(std::span<const Integer>, std::size_t);

  std::vector<Integer> entries_;
};

struct MonotonicFlags {
  bool increasing = false;
  bool decreasing = false;

  bool any() const noexcept { return increasing || decreasing; }
  friend bool operator==(const MonotonicFlags&, const MonotonicFlags&) = default;
};

/// Cyclic monotonicity by counting cyclic descents: exactly one descent means
/// some rotation is strictly increasing, exactly one ascent means decreasing.
inline MonotonicFlags is_monotonic(const PermSeq& u) {
  if (u.size() < 2) throw precondition_error("monotonicity needs a sequence of length >= 2");
  std::size_t descents = 0;
  const std::size_t k = u.size();
  for (std::size_t i = 0; i < k; ++i)
    if (u[i] > u[(i + 1) % k]) ++descents;
  return {descents == 1, descents == k - 1};
}

/// Removes the unique maximum, keeping the order of the remaining entries.
inline PermSeq delete_max(const PermSeq& u) {
  if (u.size() < 2) throw precondition_error("delete_max needs a sequence of length >= 2");
  std::vector<Integer> out(u.entries().begin(), u.entries().end());
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(u.argmax()));
  return PermSeq(std::move(out), PermSeq::trusted{});
}

/// Terminating number, terminal direction, deletion character and the chain
/// of deletions U^(0) ... U^(tau).
struct SeqAnalysis {
  std::size_t tau = 0;
  int epsilon = 0;
  std::vector<int> chi;
  std::vector<PermSeq> deletions;
};

inline SeqAnalysis analyze(const PermSeq& u) {
  if (u.size() < 3) throw precondition_error("analyze needs a sequence of length >= 3");
  SeqAnalysis out;
  out.deletions.push_back(u);
  while (!is_monotonic(out.deletions.back()).any()) out.deletions.push_back(delete_max(out.deletions.back()));
  out.tau = out.deletions.size() - 1;
  out.epsilon = is_monotonic(out.deletions.back()).increasing ? 1 : 0;

  // chi_j compares the cyclic neighbours of the maximum of U^(j-1).
  for (std::size_t j = 1; j <= out.tau; ++j) {
    const PermSeq& prev = out.deletions[j - 1];
    const auto at = static_cast<std::ptrdiff_t>(prev.argmax());
    const bool before_smaller = prev.cyclic(at - 1) < prev.cyclic(at + 1);
    out.chi.push_back(before_smaller ? (1 + out.epsilon) % 2 : out.epsilon);
  }
  return out;
}

/// All k-permutation sequences of r, one per rotation class, each starting at
/// its maximum. Output is sorted lexicographically.
inline std::vector<PermSeq> enumerate_sequences(std::span<const Integer> r, std::size_t k) {
  std::vector<Integer> pool(r.begin(), r.end());
  std::sort(pool.begin(), pool.end());
  if (std::adjacent_find(pool.begin(), pool.end()) != pool.end()) throw precondition_error("set contains repeated elements");
  if (k < 3 || k > pool.size())
    throw precondition_error("sequence length " + std::to_string(k) + " must lie in [3, " + std::to_string(pool.size()) + "]");

  std::vector<PermSeq> out;
  // Pick the maximum, then an ordered (k-1)-arrangement of smaller elements.
  for (std::size_t top = k - 1; top < pool.size(); ++top) {
    std::vector<bool> choose(top, false);
    std::fill(choose.end() - static_cast<std::ptrdiff_t>(k - 1), choose.end(), true);
    do {
      std::vector<Integer> rest;
      for (std::size_t i = 0; i < top; ++i)
        if (choose[i]) rest.push_back(pool[i]);
      do {
        std::vector<Integer> seq{pool[top]};
        seq.insert(seq.end(), rest.begin(), rest.end());
        out.push_back(PermSeq(std::move(seq), PermSeq::trusted{}));
      } while (std::next_permutation(rest.begin(), rest.end()));
    } while (std::next_permutation(choose.begin(), choose.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace shfam
