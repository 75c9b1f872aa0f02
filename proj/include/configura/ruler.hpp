#pragma once

// Golomb rulers and (v,k) modular Golomb rulers.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "configura/bits.hpp"
#include "configura/error.hpp"
#include "configura/numeric.hpp"
#include "configura/reference_data.hpp"

namespace configura {

using Marks = std::vector<std::uint32_t>;

inline void check_marks(const Marks& marks, std::uint64_t v) {
  require(v >= 1, ErrorCode::BadMarks, "modulus must be positive");
  for (std::size_t i = 0; i < marks.size(); ++i) {
    require(marks[i] < v, ErrorCode::BadMarks, "mark " + std::to_string(marks[i]) + " out of range");
    require(i == 0 || marks[i - 1] < marks[i], ErrorCode::BadMarks, "marks not strictly increasing");
  }
}

/// k sorted residues modulo v. Validity is a separate question.
struct ModularRuler {
  Marks marks;
  std::uint32_t v = 1;

  ModularRuler() = default;
  ModularRuler(Marks m, std::uint32_t modulus) : marks(std::move(m)), v(modulus) { check_marks(marks, v); }

  std::uint32_t k() const noexcept { return static_cast<std::uint32_t>(marks.size()); }
  friend bool operator==(const ModularRuler&, const ModularRuler&) = default;
};

struct GolombRuler {
  Marks marks;

  GolombRuler() = default;
  explicit GolombRuler(Marks m) : marks(std::move(m)) {
    require(!marks.empty(), ErrorCode::BadMarks, "empty ruler");
    std::sort(marks.begin(), marks.end());
    const auto base = marks.front();
    for (auto& a : marks) a -= base;
    for (std::size_t i = 1; i < marks.size(); ++i)
      require(marks[i - 1] < marks[i], ErrorCode::BadMarks, "repeated mark");
  }

  std::uint32_t length() const noexcept { return marks.back(); }

  bool distinct_differences() const {
    BitRow seen(length() + 1);
    for (std::size_t i = 0; i < marks.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const auto d = marks[i] - marks[j];
        if (seen.test(d)) return false;
        seen.set(d);
      }
    return true;
  }
};

struct DifferenceProfile {
  BitRow covered;  // index r in [1, v): residue r is some difference
  std::vector<std::uint32_t> collisions;
  std::uint32_t uncoveredCount = 0;
};

struct Validation {
  bool valid = false;
  DifferenceProfile profile;
};

inline Validation validate_modular(const Marks& marks, std::uint32_t v) {
  check_marks(marks, v);
  Validation out;
  out.profile.covered = BitRow(v);
  BitRow multi(v);
  bool valid = true;
  for (std::size_t i = 0; i < marks.size(); ++i)
    for (std::size_t j = 0; j < marks.size(); ++j) {
      if (i == j) continue;
      const std::uint32_t d = (marks[i] + v - marks[j]) % v;
      if (out.profile.covered.test(d)) {
        valid = false;
        if (!multi.test(d)) {
          multi.set(d);
          out.profile.collisions.push_back(d);
        }
      }
      out.profile.covered.set(d);
    }
  // d == 0 cannot occur for distinct residues.
  std::sort(out.profile.collisions.begin(), out.profile.collisions.end());
  std::uint32_t covered = 0;
  for (std::uint32_t r = 1; r < v; ++r) covered += out.profile.covered.test(r) ? 1 : 0;
  out.profile.uncoveredCount = (v - 1) - covered;
  out.valid = valid;
  return out;
}

inline bool is_valid(const ModularRuler& r) { return validate_modular(r.marks, r.v).valid; }

inline void require_valid(const ModularRuler& r) {
  require(is_valid(r), ErrorCode::InvalidRuler, "not a modular Golomb ruler mod " + std::to_string(r.v));
}

inline std::uint64_t plane_bound(std::uint64_t k) {
  require(k >= 1, ErrorCode::PreconditionFailed, "k must be >= 1");
  return k * k - k + 1;
}

inline std::uint32_t golomb_bound(std::uint32_t k) {
  require(k >= reference::kGolombMinK && k <= reference::kGolombMaxK, ErrorCode::OutOfTable,
          "no Golomb bound for k=" + std::to_string(k));
  return reference::kGolombBound[k - reference::kGolombMinK];
}

struct Deficiency {
  std::int64_t d = 0;
  std::vector<std::uint32_t> uncovered;
};

inline Deficiency deficiency(const ModularRuler& r) {
  auto res = validate_modular(r.marks, r.v);
  require(res.valid, ErrorCode::InvalidRuler, "deficiency needs a valid ruler");
  Deficiency out;
  const std::int64_t k = r.k();
  out.d = static_cast<std::int64_t>(r.v) - (k * k - k + 1);
  for (std::uint32_t x = 1; x < r.v; ++x)
    if (!res.profile.covered.test(x)) out.uncovered.push_back(x);
  return out;
}

inline ModularRuler from_residues(std::vector<std::uint64_t> residues, std::uint32_t v) {
  Marks m;
  m.reserve(residues.size());
  for (auto x : residues) m.push_back(static_cast<std::uint32_t>(x % v));
  std::sort(m.begin(), m.end());
  return ModularRuler(std::move(m), v);
}

inline ModularRuler affine_map(const ModularRuler& r, std::uint64_t m, std::uint64_t b) {
  require(std::gcd(m % r.v, static_cast<std::uint64_t>(r.v)) == 1 || r.v == 1, ErrorCode::NotCoprime,
          "multiplier " + std::to_string(m) + " not a unit mod " + std::to_string(r.v));
  std::vector<std::uint64_t> res;
  res.reserve(r.marks.size());
  for (auto a : r.marks) res.push_back((num::mulmod(m, a, r.v) + b % r.v) % r.v);
  return from_residues(std::move(res), r.v);
}

inline ModularRuler delete_marks(const ModularRuler& r, const Marks& subset) {
  Marks keep;
  for (auto s : subset)
    require(std::binary_search(r.marks.begin(), r.marks.end(), s), ErrorCode::NotASubset,
            std::to_string(s) + " is not a mark");
  for (auto a : r.marks)
    if (std::find(subset.begin(), subset.end(), a) == subset.end()) keep.push_back(a);
  return ModularRuler(std::move(keep), r.v);
}

/// Translate so the first mark is 0.
inline ModularRuler normalized(const ModularRuler& r) {
  if (r.marks.empty() || r.marks.front() == 0) return r;
  return affine_map(r, 1, r.v - r.marks.front());
}

/// Rotation whose largest cyclic gap is the closing one, so the integer span
/// of the marks is as small as possible. Ties go to the earliest gap.
inline ModularRuler min_span_rotation(const ModularRuler& r) {
  if (r.k() < 2) return normalized(r);
  std::size_t best = 0;
  std::uint32_t best_gap = 0;
  for (std::size_t i = 0; i < r.marks.size(); ++i) {
    const std::size_t j = (i + 1) % r.marks.size();
    const std::uint32_t gap = (r.marks[j] + r.v - r.marks[i]) % r.v;
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return affine_map(r, 1, r.v - r.marks[best]);
}

inline bool retest_modulus(const Marks& marks, std::uint32_t v) {
  require(!marks.empty(), ErrorCode::BadMarks, "empty mark list");
  require(*std::max_element(marks.begin(), marks.end()) < v, ErrorCode::ModulusTooSmall,
          "largest mark must be below " + std::to_string(v));
  return validate_modular(marks, v).valid;
}

/// Positive integer differences, or nullopt if two coincide.
inline std::optional<std::vector<std::uint32_t>> positive_differences(const Marks& marks) {
  std::vector<std::uint32_t> diffs;
  for (std::size_t i = 0; i < marks.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) diffs.push_back(marks[i] - marks[j]);
  std::sort(diffs.begin(), diffs.end());
  if (std::adjacent_find(diffs.begin(), diffs.end()) != diffs.end()) return std::nullopt;
  return diffs;
}

/// All v' in [vLow, vHigh] for which the sorted marks stay a modular Golomb
/// ruler. Two positive differences d, d' collide mod v' > max iff d + d' = v'
/// (d = d' allowed), so the answer is the complement of the sumset D + D.
inline std::vector<std::uint32_t> delta_scan(const Marks& marks, std::uint32_t vLow, std::uint32_t vHigh) {
  require(!marks.empty(), ErrorCode::BadMarks, "empty mark list");
  require(vLow <= vHigh, ErrorCode::EmptyRange, "empty modulus range");
  const auto top = *std::max_element(marks.begin(), marks.end());
  require(vLow > top, ErrorCode::ModulusTooSmall, "vLow must exceed the largest mark");
  Marks sorted = marks;
  std::sort(sorted.begin(), sorted.end());
  const auto diffs = positive_differences(sorted);
  std::vector<std::uint32_t> out;
  if (!diffs) return out;
  const std::uint32_t span = sorted.back() - sorted.front();
  BitRow sums(2 * static_cast<std::size_t>(span) + 1);
  for (std::size_t i = 0; i < diffs->size(); ++i)
    for (std::size_t j = i; j < diffs->size(); ++j) sums.set((*diffs)[i] + (*diffs)[j]);
  for (std::uint64_t x = vLow; x <= vHigh; ++x)
    if (x >= sums.size() || !sums.test(x)) out.push_back(static_cast<std::uint32_t>(x));
  return out;
}

inline ModularRuler modular_from_golomb(const GolombRuler& g, std::uint32_t v) {
  require(static_cast<std::uint64_t>(v) >= 2ULL * g.length() + 1, ErrorCode::ModulusBelowGolombBound,
          "modulus below 2L+1");
  ModularRuler r(g.marks, v);
#ifndef NDEBUG
  require(is_valid(r), ErrorCode::InternalInvariantViolation, "Golomb ruler did not lift");
#endif
  return r;
}

struct QuotientPart {
  ModularRuler ruler;  // modulo d = v / t
  std::uint32_t weight = 0;
};

/// B_h = {(a - h)/t : a = h mod t}.
inline std::vector<QuotientPart> quotient(const ModularRuler& r, std::uint32_t t) {
  require(t >= 1 && r.v % t == 0, ErrorCode::NotADivisor,
          std::to_string(t) + " does not divide " + std::to_string(r.v));
  const std::uint32_t d = r.v / t;
  std::vector<Marks> parts(t);
  for (auto a : r.marks) parts[a % t].push_back(a / t);
  std::vector<QuotientPart> out;
  out.reserve(t);
  for (auto& p : parts) {
    const auto w = static_cast<std::uint32_t>(p.size());
    out.push_back({ModularRuler(std::move(p), d), w});
  }
  return out;
}

inline std::vector<std::uint32_t> quotient_weights(const ModularRuler& r, std::uint32_t t) {
  std::vector<std::uint32_t> w;
  for (const auto& part : quotient(r, t)) w.push_back(part.weight);
  return w;
}

/// Lexicographically least image under translations, reflection and units.
inline ModularRuler canonical_form(const ModularRuler& r) {
  if (r.marks.empty()) return r;
  std::optional<Marks> best;
  for (auto m : num::units_mod(r.v)) {
    const auto scaled = affine_map(r, m, 0);
    for (auto a : scaled.marks) {
      Marks c;
      for (auto x : scaled.marks) c.push_back((x + r.v - a) % r.v);
      std::sort(c.begin(), c.end());
      if (!best || c < *best) best = c;
    }
  }
  return ModularRuler(*best, r.v);
}

// ---------------------------------------------------------------------------
// Exhaustive existence oracle.
//
// Canonical form searched: a_1 = 0, the first cyclic gap a_2 is the smallest
// of the k cyclic gaps (all gaps are differences, hence distinct), and the
// second gap is smaller than the closing gap v - a_k (reflection). When
// k(k-1) + phi(v) > v - 1 some unit is a difference; scaling by its inverse
// makes 1 a difference, which is then the smallest gap, so a_2 = 1.

enum class OracleOutcome { Exists, NotExists, BudgetExceeded };

struct OracleResult {
  OracleOutcome outcome = OracleOutcome::NotExists;
  std::optional<ModularRuler> witness;
  std::uint64_t nodes = 0;
};

struct OracleShard {
  std::uint32_t v = 0, k = 0;
  std::uint32_t firstGap = 0;  // value of a_2
};

inline bool oracle_trivially_impossible(std::uint32_t v, std::uint32_t k) {
  return static_cast<std::uint64_t>(k) * (k - 1) > static_cast<std::uint64_t>(v) - 1;
}

inline std::vector<OracleShard> oracle_shards(std::uint32_t v, std::uint32_t k) {
  std::vector<OracleShard> out;
  if (k < 2 || oracle_trivially_impossible(v, k)) return out;
  const bool forced = static_cast<std::uint64_t>(k) * (k - 1) + num::euler_phi(v) > v - 1ULL;
  // k distinct gaps, all >= g, summing to v.
  for (std::uint32_t g = 1; static_cast<std::uint64_t>(k) * g + static_cast<std::uint64_t>(k) * (k - 1) / 2 <= v;
       ++g) {
    out.push_back({v, k, g});
    if (forced) break;
  }
  return out;
}

namespace detail {

class OracleSearch {
 public:
  OracleSearch(std::uint32_t v, std::uint32_t k, std::uint32_t g, std::uint64_t budget)
      : v_(v), k_(k), g_(g), budget_(budget), used_(v), marks_(k, 0) {}

  OracleResult run() {
    OracleResult res;
    marks_[0] = 0;
    if (!place(1, g_)) {
      res.outcome = OracleOutcome::NotExists;
      res.nodes = nodes_;
      return res;
    }
    const bool found = dfs(2);
    res.nodes = nodes_;
    if (found) {
      res.outcome = OracleOutcome::Exists;
      res.witness = ModularRuler(marks_, v_);
    } else {
      res.outcome = exhausted_ ? OracleOutcome::BudgetExceeded : OracleOutcome::NotExists;
    }
    return res;
  }

 private:
  // Adds marks_[j] = x if all new differences are unused; records them.
  bool place(std::size_t j, std::uint32_t x) {
    std::size_t added = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const std::uint32_t d1 = x - marks_[i];
      const std::uint32_t d2 = v_ - d1;
      if (d1 == d2 || used_.test(d1) || used_.test(d2)) {
        undo(added);
        return false;
      }
      used_.set(d1);
      stack_.push_back(d1);
      used_.set(d2);
      stack_.push_back(d2);
      added += 2;
    }
    marks_[j] = x;
    return true;
  }

  void undo(std::size_t n) {
    while (n--) {
      used_.reset(stack_.back());
      stack_.pop_back();
    }
  }

  // Sum of the r smallest unused values above g.
  std::uint64_t min_gap_sum(std::size_t r) const {
    std::uint64_t s = 0;
    for (std::uint32_t x = g_ + 1; x < v_ && r; ++x)
      if (!used_.test(x)) {
        s += x;
        --r;
      }
    return r ? UINT64_MAX : s;
  }

  bool dfs(std::size_t j) {
    if (j == k_) return true;
    const std::uint32_t last = marks_[j - 1];
    const std::size_t remaining = k_ - j + 1;
    if (min_gap_sum(remaining) > v_ - last) return false;
    const bool final_mark = j + 1 == k_;
    for (std::uint32_t gap = g_ + 1; last + gap < v_; ++gap) {
      // Remaining gaps after this one each exceed g.
      if (static_cast<std::uint64_t>(last) + gap + (remaining - 1) * static_cast<std::uint64_t>(g_ + 1) > v_) break;
      if (final_mark) {
        // The closing gap must beat both the first and the second gap.
        const std::uint32_t closing = v_ - (last + gap);
        const std::uint32_t second = j == 2 ? gap : marks_[2] - marks_[1];
        if (closing <= g_ || closing <= second) break;
      }
      if (used_.test(gap)) continue;
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return false;
      }
      const std::size_t before = stack_.size();
      if (!place(j, last + gap)) continue;
      if (dfs(j + 1)) return true;
      undo(stack_.size() - before);
      if (exhausted_) return false;
    }
    return false;
  }

  std::uint32_t v_, k_, g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  BitRow used_;
  Marks marks_;
  std::vector<std::uint32_t> stack_;
};

}  // namespace detail

inline OracleResult oracle_run_shard(const OracleShard& s, std::uint64_t budget) {
  return detail::OracleSearch(s.v, s.k, s.firstGap, budget).run();
}

/// Merge shard results given in shard order: the first witness wins.
inline OracleResult oracle_merge(const std::vector<OracleResult>& parts) {
  OracleResult out;
  bool budget_hit = false;
  for (const auto& p : parts) {
    out.nodes += p.nodes;
    if (p.outcome == OracleOutcome::Exists && !out.witness) out.witness = p.witness;
    if (p.outcome == OracleOutcome::BudgetExceeded) budget_hit = true;
  }
  if (out.witness) {
    // A budget-exceeded shard ahead of the witness could hide a smaller one,
    // but existence itself is settled.
    out.outcome = OracleOutcome::Exists;
  } else {
    out.outcome = budget_hit ? OracleOutcome::BudgetExceeded : OracleOutcome::NotExists;
  }
  return out;
}

/// Sequential search over all shards with one shared node budget.
inline OracleResult oracle_exists(std::uint32_t v, std::uint32_t k, std::uint64_t budget) {
  require(v >= 1 && k >= 1, ErrorCode::PreconditionFailed, "oracle needs v >= 1 and k >= 1");
  OracleResult res;
  if (k == 1) {
    res.outcome = OracleOutcome::Exists;
    res.witness = ModularRuler({0}, v);
    return res;
  }
  std::uint64_t spent = 0;
  bool budget_hit = false;
  for (const auto& shard : oracle_shards(v, k)) {
    if (spent >= budget) {
      budget_hit = true;
      break;
    }
    auto part = oracle_run_shard(shard, budget - spent);
    spent += part.nodes;
    if (part.outcome == OracleOutcome::Exists) {
      part.nodes = spent;
      return part;
    }
    if (part.outcome == OracleOutcome::BudgetExceeded) {
      budget_hit = true;
      break;
    }
  }
  res.nodes = spent;
  res.outcome = budget_hit ? OracleOutcome::BudgetExceeded : OracleOutcome::NotExists;
  return res;
}

inline std::string to_string(OracleOutcome o) {
  switch (o) {
    case OracleOutcome::Exists: return "Exists";
    case OracleOutcome::NotExists: return "NotExists";
    case OracleOutcome::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

}  // namespace configura
