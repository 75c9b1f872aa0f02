#pragma once

// The extension construction: E-aggregates, Procedure E and the families it
// produces from Structure E matrices.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "configura/construct.hpp"
#include "configura/error.hpp"
#include "configura/matrix.hpp"
#include "configura/numeric.hpp"

namespace configura {

/// k-1 rows, k-1 columns; unit of row rows[u] inside the aggregate sits in column cols[pi[u]].
struct EAggregate {
  std::vector<std::uint32_t> rows, cols, pi;
  friend bool operator==(const EAggregate&, const EAggregate&) = default;
};

struct ExtensionPlan {
  std::vector<EAggregate> aggregates;
  bool complete = false;  // true only when Structure E guarantees the count
  std::string method;     // "trivial", "structure-e", "greedy"
  std::uint64_t nodes = 0;
};

/// Checks disjoint rows, non-collinear columns and the permutation condition independently.
inline ConfigCheck check_aggregate(const IncidenceMatrix& m, std::uint32_t k, const EAggregate& a) {
  ConfigCheck res;
  const std::size_t n = k ? k - 1 : 0;
  if (a.rows.size() != n || a.cols.size() != n || a.pi.size() != n) {
    res.diagnostic = "aggregate must have k-1 rows, columns and images";
    return res;
  }
  std::vector<char> seen(n, 0);
  for (auto x : a.pi) {
    if (x >= n || seen[x]) {
      res.diagnostic = "pi is not a permutation";
      return res;
    }
    seen[x] = 1;
  }
  for (auto r : a.rows)
    if (r >= m.nRows) {
      res.diagnostic = "row index out of range";
      return res;
    }
  for (auto c : a.cols)
    if (c >= m.nCols) {
      res.diagnostic = "column index out of range";
      return res;
    }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = u + 1; w < n; ++w) {
      if (a.rows[u] == a.rows[w] || m.rows[a.rows[u]].and_count(m.rows[a.rows[w]]) != 0) {
        res.diagnostic = "rows " + std::to_string(a.rows[u]) + " and " + std::to_string(a.rows[w]) + " meet";
        return res;
      }
      if (a.cols[u] == a.cols[w]) {
        res.diagnostic = "repeated column";
        return res;
      }
    }
  for (std::uint32_t i = 0; i < m.nRows; ++i) {
    std::uint32_t hits = 0;
    for (auto c : a.cols) hits += m.get(i, c);
    if (hits > 1) {
      res.diagnostic = "columns collinear on row " + std::to_string(i);
      return res;
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = 0; w < n; ++w)
      if (m.get(a.rows[u], a.cols[w]) != (a.pi[u] == w)) {
        res.diagnostic = "critical submatrix is not the stated permutation at row " + std::to_string(a.rows[u]);
        return res;
      }
  res.ok = true;
  return res;
}

/// theta = t floor(d/(k-1)), theta2 = floor(theta/(k-1)).
inline std::pair<std::uint64_t, std::uint64_t> structure_e_capacity(std::uint32_t t, std::uint32_t d,
                                                                    std::uint32_t k) {
  require(k >= 2 && t >= k && d + 1 >= k, ErrorCode::ShapeTooSmall, "need k >= 2, t >= k and d >= k-1");
  const std::uint64_t theta = static_cast<std::uint64_t>(t) * (d / (k - 1));
  return {theta, theta / (k - 1)};
}

namespace detail {

inline std::optional<std::pair<std::uint32_t, std::uint32_t>> structure_e_shape(const IncidenceMatrix& m,
                                                                               std::uint32_t k) {
  auto fits = [&](std::uint32_t t, std::uint32_t d) {
    if (static_cast<std::uint64_t>(t) * d != m.nRows || t < k || d + 1 < k) return false;
    return structure_e_check(m, t, d);
  };
  if (m.blockShape && fits(m.blockShape->first, m.blockShape->second)) return m.blockShape;
  for (auto d : num::divisors(m.nRows)) {
    const auto dd = static_cast<std::uint32_t>(d);
    if (dd < 2) continue;
    if (fits(m.nRows / dd, dd)) return std::make_pair(m.nRows / dd, dd);
  }
  return std::nullopt;
}

inline ExtensionPlan structure_e_plan(const IncidenceMatrix& m, std::uint32_t k, std::uint32_t t, std::uint32_t d,
                                      std::uint32_t maxCount) {
  ExtensionPlan plan;
  plan.method = "structure-e";
  plan.complete = true;
  // Nonzero block pattern is k-regular, so a block-level perfect matching exists.
  std::vector<std::vector<std::uint32_t>> adj(t);
  for (std::uint32_t I = 0; I < t; ++I) {
    for (auto c : m.rows[I * d].ones()) adj[I].push_back(c / d);
    std::sort(adj[I].begin(), adj[I].end());
  }
  auto match = Matcher(adj, t).run();
  require(match.has_value(), ErrorCode::MatchingFailed, "no block-level matching");
  const std::uint32_t per = d / (k - 1);
  for (std::uint32_t I = 0; I < t && plan.aggregates.size() < maxCount; ++I) {
    const std::uint32_t J = (*match)[I];
    for (std::uint32_t g = 0; g < per && plan.aggregates.size() < maxCount; ++g) {
      EAggregate a;
      for (std::uint32_t u = 0; u + 1 < k; ++u) {
        const std::uint32_t row = I * d + g * (k - 1) + u;
        std::uint32_t col = UINT32_MAX;
        for (auto c : m.rows[row].ones())
          if (c / d == J) col = c;
        a.rows.push_back(row);
        a.cols.push_back(col);
        a.pi.push_back(u);
      }
      plan.aggregates.push_back(std::move(a));
    }
  }
  return plan;
}

// Greedy over aggregates, backtracking inside one aggregate.
class GreedyAggregates {
 public:
  GreedyAggregates(const IncidenceMatrix& m, std::uint32_t k, std::uint64_t budget)
      : m_(m), n_(k - 1), budget_(budget), usedRow_(m.nRows, 0), usedCol_(m.nCols, 0),
        colSupp_(m.column_supports()), rowCover_(m.nRows, 0) {}

  ExtensionPlan run(std::uint32_t maxCount) {
    ExtensionPlan plan;
    plan.method = "greedy";
    while (plan.aggregates.size() < maxCount) {
      rows_.clear();
      cols_.clear();
      if (!pick_rows(0)) break;
      EAggregate a;
      a.rows = rows_;
      a.cols = cols_;
      for (std::uint32_t u = 0; u < n_; ++u) a.pi.push_back(u);
      for (auto r : a.rows) usedRow_[r] = 1;
      for (auto c : a.cols) usedCol_[c] = 1;
      std::fill(rowCover_.begin(), rowCover_.end(), 0);
      plan.aggregates.push_back(std::move(a));
    }
    plan.nodes = nodes_;
    return plan;
  }

 private:
  bool tick() { return ++nodes_ <= budget_; }

  bool pick_rows(std::uint32_t from) {
    if (rows_.size() == n_) return pick_cols(0);
    for (std::uint32_t r = from; r < m_.nRows; ++r) {
      if (!tick()) return false;
      if (usedRow_[r]) continue;
      bool disjoint = true;
      for (auto o : rows_)
        if (m_.rows[r].and_count(m_.rows[o]) != 0) {
          disjoint = false;
          break;
        }
      if (!disjoint) continue;
      rows_.push_back(r);
      if (pick_rows(r + 1)) return true;
      rows_.pop_back();
    }
    return false;
  }

  bool pick_cols(std::size_t u) {
    if (u == n_) return true;
    for (auto c : m_.rows[rows_[u]].ones()) {
      if (!tick()) return false;
      if (usedCol_[c]) continue;
      bool free = true;
      for (auto i : colSupp_[c])
        if (rowCover_[i]) {
          free = false;
          break;
        }
      if (!free) continue;
      for (auto i : colSupp_[c]) rowCover_[i] = 1;
      cols_.push_back(c);
      if (pick_cols(u + 1)) return true;
      cols_.pop_back();
      for (auto i : colSupp_[c]) rowCover_[i] = 0;
    }
    return false;
  }

  const IncidenceMatrix& m_;
  std::uint32_t n_;
  std::uint64_t budget_, nodes_ = 0;
  std::vector<char> usedRow_, usedCol_;
  std::vector<std::vector<std::uint32_t>> colSupp_;
  std::vector<char> rowCover_;
  std::vector<std::uint32_t> rows_, cols_;
};

}  // namespace detail

/// Structure E gives the constructive block method; anything else falls back to a bounded greedy search.
inline ExtensionPlan find_e_aggregates(const IncidenceMatrix& m, std::uint32_t k, std::uint32_t maxCount,
                                       std::uint64_t budget = 1'000'000) {
  if (k == 1) {
    ExtensionPlan plan;
    plan.method = "trivial";
    plan.complete = true;
    plan.aggregates.assign(maxCount, EAggregate{});
    return plan;
  }
  if (auto shape = detail::structure_e_shape(m, k)) {
    auto plan = detail::structure_e_plan(m, k, shape->first, shape->second, maxCount);
    require(plan.aggregates.size() >= std::min<std::uint32_t>(maxCount, shape->first),
            ErrorCode::InternalInvariantViolation, "Structure E gave fewer than t aggregates");
    return plan;
  }
  return detail::GreedyAggregates(m, k, budget).run(maxCount);
}

/// Procedure E: one new line and one new point.
inline IncidenceMatrix apply_extension(const IncidenceMatrix& m, std::uint32_t k, const EAggregate& a) {
  const auto check = check_aggregate(m, k, a);
  require(check.ok, ErrorCode::InvalidAggregate, check.diagnostic);
  IncidenceMatrix out = m;
  out.grow();
  const std::uint32_t v = m.nRows;
  out.set(v, v);
  for (std::size_t u = 0; u < a.rows.size(); ++u) {
    out.set(a.rows[u], v);
    out.set(v, a.cols[u]);
    out.set(a.rows[u], a.cols[a.pi[u]], false);
  }
  out.blockShape.reset();
  out.provenance.push_back("extend");
  return out;
}

struct ExtensionRun {
  IncidenceMatrix matrix;
  std::vector<EAggregate> applied;
  std::uint32_t recycled = 0;
};

/// Applies the plan, then keeps going with aggregates made of unused new rows and columns.
inline ExtensionRun extend_run(const IncidenceMatrix& m, std::uint32_t k, std::uint32_t theta,
                               std::optional<ExtensionPlan> plan = std::nullopt) {
  ExtensionRun run{m, {}, 0};
  if (theta == 0) return run;
  if (!plan) plan = find_e_aggregates(m, k, theta);
  const std::uint32_t v0 = m.nRows;
  std::vector<char> usedNew;
  auto mark = [&](const EAggregate& a) {
    for (auto r : a.rows)
      if (r >= v0) usedNew[r - v0] = 1;
    for (auto c : a.cols)
      if (c >= v0) usedNew[c - v0] = 1;
  };
  auto apply = [&](const EAggregate& a) {
    run.matrix = apply_extension(run.matrix, k, a);
    usedNew.push_back(0);
    mark(a);
    run.applied.push_back(a);
  };
  for (const auto& a : plan->aggregates) {
    if (run.applied.size() == theta) break;
    apply(a);
  }
  while (run.applied.size() < theta) {
    EAggregate a;
    for (std::uint32_t i = 0; i < usedNew.size() && a.rows.size() + 1 < k; ++i)
      if (!usedNew[i]) {
        a.rows.push_back(v0 + i);
        a.cols.push_back(v0 + i);
        a.pi.push_back(static_cast<std::uint32_t>(a.pi.size()));
      }
    if (a.rows.size() + 1 != k || !check_aggregate(run.matrix, k, a).ok)
      fail(ErrorCode::CapacityExceeded, "maximum achievable theta is " + std::to_string(run.applied.size()));
    apply(a);
    ++run.recycled;
  }
  return run;
}

inline IncidenceMatrix extend_many(const IncidenceMatrix& m, std::uint32_t k, std::uint32_t theta) {
  return extend_run(m, k, theta).matrix;
}

// ---------------------------------------------------------------------------
// Families

/// (0,1,...,1): k = c-1-delta, (1,...,1): k = c-delta; v = c d + theta with theta <= c+1.
struct WeightRecipe {
  std::uint32_t j = 0, c = 0, theta = 0, delta = 0;
  bool zeroClass = false;
  std::uint32_t base_k() const noexcept { return zeroClass ? c - 1 : c; }
};

struct FamilyEntry {
  std::uint32_t v = 0, k = 0;
  WeightRecipe recipe;
};

inline std::vector<FamilyEntry> family_from_weights(const BdcMatrix& b) {
  const auto w = weight_vector(b);
  std::uint32_t zeros = 0, zeroAt = 0;
  for (std::uint32_t h = 0; h < b.t; ++h) {
    require(w[h] <= 1, ErrorCode::WeightsNotBinary, "block weights must be 0 or 1");
    if (w[h] == 0) {
      ++zeros;
      zeroAt = h;
    }
  }
  require(zeros <= 1, ErrorCode::WeightsNotBinary, "at most one weight-0 class is allowed");
  std::vector<FamilyEntry> out;
  for (std::uint32_t c = 2; c <= b.t; ++c) {
    WeightRecipe r;
    r.zeroClass = zeros == 1;
    r.j = r.zeroClass ? zeroAt : 0;
    r.c = c;
    for (r.theta = 0; r.theta <= c + 1; ++r.theta)
      for (r.delta = 0; r.delta < r.base_k(); ++r.delta)
        out.push_back({c * b.d + r.theta, r.base_k() - r.delta, r});
  }
  return out;
}

inline IncidenceMatrix build_recipe(const BdcMatrix& b, const WeightRecipe& r) {
  const auto w = weight_vector(b);
  for (auto x : w) require(x <= 1, ErrorCode::WeightsNotBinary, "block weights must be 0 or 1");
  auto m = expand(select_blocks(b, r.j, r.c));
  const auto k = r.base_k();
  m = extend_many(m, k, r.theta);
  m = remove_permutations(m, k, r.delta);
  m.provenance.push_back("recipe c=" + std::to_string(r.c) + " theta=" + std::to_string(r.theta) +
                         " delta=" + std::to_string(r.delta));
  return m;
}

/// Lines x2 = w x1 + u against points (x1, x2) with w, x1 over the first q-s
/// field elements; block (w, x1) is a permutation. Blocks with (j-i) mod (q-s) < Delta are masked.
inline IncidenceMatrix ag_block_matrix(std::uint32_t q, std::uint32_t s, std::uint32_t delta) {
  const auto field = make_field(q);
  require(s < q, ErrorCode::BadS, "s must be below q");
  const std::uint32_t t = q - s;
  require(delta < t, ErrorCode::DeltaTooBig, "Delta must be below q-s");
  IncidenceMatrix m(t * q, t * q);
  for (std::uint32_t i = 0; i < t; ++i)
    for (std::uint32_t j = 0; j < t; ++j) {
      if ((j + t - i) % t < delta) continue;
      for (std::uint32_t u = 0; u < q; ++u) {
        const auto x2 = field->add(field->mul({i}, {j}), {u}).code;
        m.set(i * q + u, j * q + x2);
      }
    }
  m.blockShape = std::make_pair(t, q);
  m.provenance.push_back("ag q=" + std::to_string(q) + " s=" + std::to_string(s) + " Delta=" + std::to_string(delta));
  return m;
}

/// (q^2 - qs + theta)_{q-s-Delta}.
inline IncidenceMatrix extension_family_ag(std::uint32_t q, std::uint32_t s, std::uint32_t delta,
                                           std::uint32_t theta) {
  auto m = ag_block_matrix(q, s, delta);
  require(theta <= q - s + 1, ErrorCode::CapacityExceeded, "theta must not exceed q-s+1");
  return extend_many(m, q - s - delta, theta);
}

}  // namespace configura
