#pragma once

// Plastic towers, hash-family matrices built from (R, M, q), exhaustive
// separation checks, rainbow-cycle certificates and the closed-form bounds.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "shfam/arrays.hpp"
#include "shfam/error.hpp"
#include "shfam/integer.hpp"
#include "shfam/sequences.hpp"
#include "shfam/solfree.hpp"

namespace shfam {

/// Sorted distinct nonnegative integers b_1 < ... < b_t.
class PlasticSet {
 public:
  PlasticSet() = default;

  explicit PlasticSet(std::vector<Integer> elements) : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    if (elements_.size() < 2) throw precondition_error("a hash-family row set needs at least two elements");
    if (elements_.front() < 0) throw precondition_error("row set elements must be nonnegative");
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
      throw precondition_error("row set contains repeated elements");
  }

  const std::vector<Integer>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  Integer rank() const { return elements_.back() - elements_.front(); }

  friend bool operator==(const PlasticSet&, const PlasticSet&) = default;

 private:
  std::vector<Integer> elements_;
};

/// b_t = floor(2^sqrt(log m)) and b_i = floor(2^sqrt(log b_{i+1})) below it.
/// Fails at the first level that does not stay strictly below its successor.
inline PlasticSet plastic_tower(const Integer& m, std::size_t t, LogBase base = LogBase::two) {
  if (t < 3) throw precondition_error("tower needs t >= 3");
  if (m < 2) throw precondition_error("tower needs m >= 2");
  std::vector<Integer> b(t);
  b[t - 1] = tower_step(m, 0.5, base);
  if (b[t - 1] < 2) throw step_failure(t, "top of tower " + b[t - 1].str() + " is below 2");
  for (std::size_t i = t - 1; i-- > 0;) {
    b[i] = tower_step(b[i + 1], 0.5, base);
    if (b[i] < 2 || b[i] >= b[i + 1])
      throw step_failure(i + 1, "tower level " + std::to_string(i + 1) + " value " + b[i].str() + " collides with level " +
                                    std::to_string(i + 2) + " value " + b[i + 1].str() + "; m too small for t = " + std::to_string(t));
  }
  return PlasticSet(std::move(b));
}

/// Multiset of part sizes {w_1, ..., w_t}; stored ascending.
class SHFType {
 public:
  SHFType() = default;

  explicit SHFType(std::vector<std::size_t> weights) : weights_(std::move(weights)) {
    std::sort(weights_.begin(), weights_.end());
    if (weights_.size() < 2) throw precondition_error("separation type needs t >= 2");
    if (weights_.front() < 1) throw precondition_error("separation weights must be positive");
  }

  static SHFType perfect(std::size_t t) { return SHFType(std::vector<std::size_t>(t, 1)); }

  const std::vector<std::size_t>& weights() const noexcept { return weights_; }
  std::size_t t() const noexcept { return weights_.size(); }
  std::size_t u() const noexcept {
    std::size_t s = 0;
    for (auto w : weights_) s += w;
    return s;
  }

 private:
  std::vector<std::size_t> weights_;
};

enum class MStatus { verified, violated, unchecked };

inline const char* to_string(MStatus s) {
  switch (s) {
    case MStatus::verified: return "verified";
    case MStatus::violated: return "violated";
    case MStatus::unchecked: return "unchecked";
  }
  return "?";
}

struct Provenance {
  std::vector<Integer> r;
  std::vector<Value> m;
  MStatus m_status = MStatus::unchecked;
};

/// N x n matrix over Z_q, row-major; row i is the i-th hash function.
class HashFamilyMatrix {
 public:
  HashFamilyMatrix() = default;

  HashFamilyMatrix(std::size_t rows, std::size_t cols, Value q, std::vector<Value> cells,
                   std::optional<Provenance> provenance = std::nullopt)
      : rows_(rows), cols_(cols), q_(q), cells_(std::move(cells)), provenance_(std::move(provenance)) {
    if (q_ < 1) throw precondition_error("alphabet size q must be positive");
    if (cells_.size() != rows_ * cols_) throw precondition_error("cell count does not match N x n");
    for (Value v : cells_)
      if (v < 0 || v >= q_) throw precondition_error("cell value " + std::to_string(v) + " outside [0, q-1]");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Value q() const noexcept { return q_; }
  Value at(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }
  const std::vector<Value>& cells() const noexcept { return cells_; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  /// For a built matrix: column index -> (m, y).
  std::pair<Value, Value> column_label(std::size_t col) const {
    if (!provenance_) throw precondition_error("matrix has no provenance");
    const auto per = static_cast<std::size_t>(q_);
    return {provenance_->m.at(col / per), static_cast<Value>(col % per)};
  }

  friend bool operator==(const HashFamilyMatrix& a, const HashFamilyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.q_ == b.q_ && a.cells_ == b.cells_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Value q_ = 1;
  std::vector<Value> cells_;
  std::optional<Provenance> provenance_;
};

struct BuildOptions {
  bool verify_m = true;
  SearchLimits limits{};
};

/// Largest admissible element of M: floor((q - 1) / rank(R)).
inline Integer m_range_limit(const PlasticSet& r, Value q) { return Integer(q - 1) / r.rank(); }

/// Rows indexed by b in R, columns by (m, y) in lexicographic order, cell (y + b m) mod q.
inline HashFamilyMatrix build_phf(const PlasticSet& r, std::span<const Value> m_set, Value q, const BuildOptions& opts = {}) {
  if (q < 2) throw precondition_error("q must be at least 2");
  for (const auto& b : r.elements())
    if (b >= q) throw precondition_error("row element " + b.str() + " outside [0, q-1] = [0, " + std::to_string(q - 1) + "]");
  const Integer limit = m_range_limit(r, q);
  std::vector<Value> m(m_set.begin(), m_set.end());
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  for (Value x : m)
    if (x < 0 || Integer(x) > limit)
      throw precondition_error("M element " + std::to_string(x) + " outside [0, floor((q-1)/rank)] = [0, " + limit.str() + "]");

  Provenance prov{r.elements(), m, MStatus::unchecked};
  if (opts.verify_m && r.size() >= 3) {
    try {
      const auto eqs = equations_of(r.elements(), r.size());
      prov.m_status = verify_solution_free(m, eqs, opts.limits).verified ? MStatus::verified : MStatus::violated;
    } catch (const cap_exceeded&) {
      prov.m_status = MStatus::unchecked;
    }
  }

  const std::size_t rows = r.size(), cols = m.size() * static_cast<std::size_t>(q);
  std::vector<Value> cells(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Value b = (r.elements()[i] % q).convert_to<Value>();
    for (std::size_t mi = 0; mi < m.size(); ++mi)
      for (Value y = 0; y < q; ++y) {
        const Value shift = static_cast<Value>((static_cast<__int128>(b) * m[mi]) % q);
        cells[i * cols + mi * static_cast<std::size_t>(q) + static_cast<std::size_t>(y)] = (y + shift) % q;
      }
  }
  return HashFamilyMatrix(rows, cols, q, std::move(cells), std::move(prov));
}

struct ShfOptions {
  unsigned jobs = 1;
  std::uint64_t max_families = 1'000'000'000;
};

/// Column groups C_1 ... C_t, each sorted, listed in ascending-weight order.
using ColumnFamily = std::vector<std::vector<std::size_t>>;

struct ShfResult {
  bool separating = true;
  std::optional<ColumnFamily> witness;
  std::uint64_t families = 0;  // families in the quotiented enumeration
};

namespace detail {

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Integer r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of families after ordering equal-weight groups by their minima.
inline Integer family_count(std::size_t n, const std::vector<std::size_t>& w) {
  Integer count = 1;
  std::uint64_t left = n;
  for (std::size_t i = 0; i < w.size(); ++i) {
    count *= binomial(left, w[i]);
    left -= w[i];
  }
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    for (std::size_t f = 2; f <= j - i; ++f) count /= f;
    i = j;
  }
  return count;
}

inline bool separated_by_some_row(const HashFamilyMatrix& a, const ColumnFamily& fam,
                                  std::vector<std::pair<Value, std::size_t>>& scratch) {
  for (std::size_t row = 0; row < a.rows(); ++row) {
    scratch.clear();
    for (std::size_t g = 0; g < fam.size(); ++g)
      for (std::size_t c : fam[g]) scratch.emplace_back(a.at(row, c), g);
    std::sort(scratch.begin(), scratch.end());
    bool ok = true;
    for (std::size_t i = 1; i < scratch.size() && ok; ++i)
      if (scratch[i].first == scratch[i - 1].first && scratch[i].second != scratch[i - 1].second) ok = false;
    if (ok) return true;
  }
  return false;
}

// Depth-first enumeration of families in lexicographic order of the
// concatenated groups. `first_filter` restricts the smallest column of C_1.
class FamilyWalker {
 public:
  FamilyWalker(const HashFamilyMatrix& a, const std::vector<std::size_t>& w, std::function<bool(std::size_t)> first_filter,
               const std::atomic<std::size_t>* best_first)
      : a_(a), w_(w), filter_(std::move(first_filter)), best_first_(best_first), fam_(w.size()), used_(a.cols(), false) {}

  std::optional<ColumnFamily> run() {
    group(0);
    return found_;
  }

  std::uint64_t visited() const noexcept { return visited_; }

 private:
  void group(std::size_t g) {
    if (found_) return;
    if (g == w_.size()) {
      ++visited_;
      if (!separated_by_some_row(a_, fam_, scratch_)) found_ = fam_;
      return;
    }
    // Equal-weight groups are ordered by their minima.
    const std::size_t lo = (g > 0 && w_[g] == w_[g - 1]) ? fam_[g - 1].front() + 1 : 0;
    pick(g, lo, 0);
  }

  void pick(std::size_t g, std::size_t from, std::size_t depth) {
    if (found_) return;
    if (depth == w_[g]) {
      group(g + 1);
      return;
    }
    for (std::size_t c = from; c < a_.cols(); ++c) {
      if (used_[c]) continue;
      if (g == 0 && depth == 0) {
        if (best_first_ && c > best_first_->load(std::memory_order_relaxed)) return;
        if (!filter_(c)) continue;
      }
      used_[c] = true;
      fam_[g].push_back(c);
      pick(g, c + 1, depth + 1);
      fam_[g].pop_back();
      used_[c] = false;
      if (found_) return;
    }
  }

  const HashFamilyMatrix& a_;
  const std::vector<std::size_t>& w_;
  std::function<bool(std::size_t)> filter_;
  const std::atomic<std::size_t>* best_first_;
  ColumnFamily fam_;
  std::vector<bool> used_;
  std::vector<std::pair<Value, std::size_t>> scratch_;
  std::optional<ColumnFamily> found_;
  std::uint64_t visited_ = 0;
};

inline std::vector<std::size_t> flatten(const ColumnFamily& f) {
  std::vector<std::size_t> out;
  for (const auto& g : f) out.insert(out.end(), g.begin(), g.end());
  return out;
}

}  // namespace detail

/// Exhaustive check that every family of disjoint column groups with the
/// given sizes is separated by some row. The witness on failure is the first
/// unseparated family in enumeration order, independent of `jobs`.
inline ShfResult verify_shf(const HashFamilyMatrix& a, const SHFType& type, const ShfOptions& opts = {}) {
  const auto& w = type.weights();
  if (type.u() > a.cols())
    throw precondition_error("type needs " + std::to_string(type.u()) + " columns, matrix has " + std::to_string(a.cols()));
  const Integer count = detail::family_count(a.cols(), w);
  if (count > opts.max_families)
    throw cap_exceeded("separation check exceeds family cap",
                       count > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                                          : count.convert_to<std::uint64_t>());
  ShfResult result;
  result.families = count.convert_to<std::uint64_t>();
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    detail::FamilyWalker walker(a, w, [](std::size_t) { return true; }, nullptr);
    result.witness = walker.run();
  } else {
    std::atomic<std::size_t> best_first{std::numeric_limits<std::size_t>::max()};
    std::vector<std::optional<ColumnFamily>> found(jobs);
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        detail::FamilyWalker walker(a, w, [j, jobs](std::size_t c) { return c % jobs == j; }, &best_first);
        found[j] = walker.run();
        if (found[j]) {
          std::size_t first = found[j]->front().front(), cur = best_first.load();
          while (first < cur && !best_first.compare_exchange_weak(cur, first)) {
          }
        }
      });
    for (auto& th : pool) th.join();
    for (auto& f : found)
      if (f && (!result.witness || detail::flatten(*f) < detail::flatten(*result.witness))) result.witness = f;
  }
  result.separating = !result.witness;
  return result;
}

/// Columns c_1..c_k and distinct rows j_1..j_k such that c_i and c_{i+1}
/// agree in row j_{i+1}, and c_k and c_1 agree in row j_1.
struct RainbowCycle {
  std::vector<std::size_t> columns;
  std::vector<std::size_t> rows;

  std::size_t k() const noexcept { return columns.size(); }
  friend bool operator==(const RainbowCycle&, const RainbowCycle&) = default;
};

inline bool is_rainbow_cycle(const HashFamilyMatrix& a, const RainbowCycle& c) {
  const std::size_t k = c.k();
  if (k < 2 || c.rows.size() != k) return false;
  std::vector<std::size_t> cols = c.columns, rows = c.rows;
  std::sort(cols.begin(), cols.end());
  std::sort(rows.begin(), rows.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) return false;
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) return false;
  if (cols.back() >= a.cols() || rows.back() >= a.rows()) return false;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t next = (i + 1) % k;
    if (a.at(c.rows[next], c.columns[i]) != a.at(c.rows[next], c.columns[next])) return false;
  }
  return true;
}

/// First rainbow cycle with k in [2, max_k]: smallest k, then c_1 = the
/// smallest column, then (j_2, c_2), ..., then j_1 in lexicographic order.
inline std::optional<RainbowCycle> find_rainbow_cycle(const HashFamilyMatrix& a, std::size_t max_k,
                                                      std::uint64_t max_steps = 1'000'000'000) {
  if (max_k > a.rows()) throw precondition_error("cycle length exceeds the number of rows");
  std::uint64_t steps = 0;
  RainbowCycle cur;
  std::vector<bool> row_used(a.rows(), false), col_used(a.cols(), false);

  std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
    if (++steps > max_steps) throw cap_exceeded("rainbow cycle search exceeds step cap", steps);
    const std::size_t last = cur.columns.back(), first = cur.columns.front();
    if (cur.columns.size() == k) {
      for (std::size_t j = 0; j < a.rows(); ++j)
        if (!row_used[j] && a.at(j, last) == a.at(j, first)) {
          cur.rows.insert(cur.rows.begin(), j);
          return true;
        }
      return false;
    }
    for (std::size_t j = 0; j < a.rows(); ++j) {
      if (row_used[j]) continue;
      for (std::size_t c = first + 1; c < a.cols(); ++c) {
        if (col_used[c] || a.at(j, c) != a.at(j, last)) continue;
        row_used[j] = col_used[c] = true;
        cur.rows.push_back(j);
        cur.columns.push_back(c);
        if (extend(k)) return true;
        cur.rows.pop_back();
        cur.columns.pop_back();
        row_used[j] = col_used[c] = false;
      }
    }
    return false;
  };

  for (std::size_t k = 2; k <= max_k; ++k)
    for (std::size_t c1 = 0; c1 < a.cols(); ++c1) {
      cur = RainbowCycle{{c1}, {}};
      col_used.assign(a.cols(), false);
      row_used.assign(a.rows(), false);
      col_used[c1] = true;
      if (extend(k)) return cur;
    }
  return std::nullopt;
}

/// The linear relation a rainbow cycle forces on a built matrix: with
/// U = (b_{j_2}, ..., b_{j_k}, b_{j_1}) and x_i the m-label of c_i,
/// sum_i (u_i - u_{i-1}) x_i vanishes mod q.
struct CycleEquation {
  std::vector<Integer> sequence;
  std::vector<Integer> coefficients;
  std::vector<Value> values;
  Integer residue;        // sum_i c_i x_i over the integers
  bool holds = false;     // residue == 0
  bool nontrivial = false;
};

inline CycleEquation cycle_equation(const HashFamilyMatrix& a, const RainbowCycle& c) {
  if (!a.provenance()) throw precondition_error("cycle equation needs a matrix with provenance");
  if (!is_rainbow_cycle(a, c)) throw precondition_error("not a rainbow cycle of this matrix");
  const auto& r = a.provenance()->r;
  const std::size_t k = c.k();
  CycleEquation eq;
  for (std::size_t i = 0; i < k; ++i) eq.sequence.push_back(r[c.rows[(i + 1) % k]]);
  for (std::size_t i = 0; i < k; ++i) {
    eq.coefficients.push_back(eq.sequence[i] - eq.sequence[(i + k - 1) % k]);
    eq.values.push_back(a.column_label(c.columns[i]).first);
    eq.residue += eq.coefficients.back() * eq.values.back();
  }
  eq.holds = eq.residue == 0;
  eq.nontrivial = std::adjacent_find(eq.values.begin(), eq.values.end(), std::not_equal_to<>()) != eq.values.end();
  if (Integer(eq.residue) % a.q() != 0) throw precondition_error("cycle relation does not vanish mod q");
  return eq;
}

/// gamma * q^ceil(N/(u-1)) with gamma = w1 w2 + u - w1 - w2 for the two smallest weights.
inline Integer bound_upper(std::uint64_t n_rows, const Integer& q, const SHFType& type) {
  const std::size_t u = type.u();
  if (u < 2) throw precondition_error("bound needs u >= 2");
  const Integer w1 = type.weights()[0], w2 = type.weights()[1];
  const Integer gamma = w1 * w2 + u - w1 - w2;
  const std::uint64_t e = (n_rows + u - 2) / (u - 1);
  return gamma * ipow(q, static_cast<unsigned>(e));
}

/// (1/2^u) (q / C(u,2))^{N/(u-1)}.
inline double bound_lower_lll(std::uint64_t n_rows, double q, std::size_t u) {
  if (u < 2) throw precondition_error("bound needs u >= 2");
  if (q < 1) throw precondition_error("bound needs q >= 1");
  const double pairs = static_cast<double>(u) * static_cast<double>(u - 1) / 2.0;
  return std::pow(q / pairs, static_cast<double>(n_rows) / static_cast<double>(u - 1)) / std::exp2(static_cast<double>(u));
}

}  // namespace shfam
