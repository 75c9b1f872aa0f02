#pragma once

// Parameter-spectrum searches: which (v, k) admit a configuration, with a
// replayable witness for every achieved pair.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "configura/construct.hpp"
#include "configura/error.hpp"
#include "configura/extend.hpp"
#include "configura/matrix.hpp"
#include "configura/numeric.hpp"
#include "configura/reference_data.hpp"
#include "configura/ruler.hpp"

namespace configura {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Witnesses

/// chain entries are objects {"op": name, ...params}.
struct Witness {
  std::uint32_t v = 0, k = 0;
  bool cyclic = false;
  std::string source;
  json chain = json::array();
};

inline json witness_to_json(const Witness& w) {
  return {{"v", w.v}, {"k", w.k}, {"cyclic", w.cyclic}, {"source", w.source}, {"chain", w.chain}};
}

inline Witness witness_from_json(const json& j) {
  try {
    Witness w;
    w.v = j.at("v").get<std::uint32_t>();
    w.k = j.at("k").get<std::uint32_t>();
    w.cyclic = j.at("cyclic").get<bool>();
    w.source = j.value("source", "");
    w.chain = j.at("chain");
    require(w.chain.is_array(), ErrorCode::ParseError, "chain must be an array");
    return w;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

struct ReplayResult {
  std::optional<ModularRuler> ruler;
  std::optional<IncidenceMatrix> matrix;
};

namespace detail {

inline PointSet named_point_set(const PlanePtr& plane, const std::string& name, std::uint32_t c) {
  if (name == "conic-internal") return conic_internal(plane);
  if (name == "conic-external") return conic_external(plane);
  if (name == "hermitian-complement") return hermitian_complement(plane);
  if (name == "baer-union") return baer_union(plane, c);
  fail(ErrorCode::ParseError, "unknown point set " + name);
}

inline void replay_step(const json& step, ReplayResult& st, std::optional<BdcMatrix>& bdc) {
  const auto op = step.at("op").get<std::string>();
  auto u32 = [&](const char* key) { return step.at(key).get<std::uint32_t>(); };
  auto need_ruler = [&]() -> ModularRuler& {
    require(st.ruler.has_value(), ErrorCode::ReplayMismatch, op + " needs a ruler");
    return *st.ruler;
  };
  auto need_matrix = [&]() -> IncidenceMatrix& {
    require(st.matrix.has_value(), ErrorCode::ReplayMismatch, op + " needs a matrix");
    return *st.matrix;
  };
  if (op == "singer") {
    st.ruler = singer_ruler(u32("q"));
  } else if (op == "bose") {
    st.ruler = bose_ruler(u32("q"));
  } else if (op == "ruzsa") {
    st.ruler = ruzsa_ruler(u32("p"), step.value("g", 0U));
  } else if (op == "ruler") {
    st.ruler = ModularRuler(step.at("marks").get<Marks>(), u32("v"));
  } else if (op == "delete") {
    st.ruler = delete_marks(need_ruler(), step.at("marks").get<Marks>());
  } else if (op == "affine") {
    st.ruler = affine_map(need_ruler(), step.at("m").get<std::uint64_t>(), step.value("b", std::uint64_t{0}));
  } else if (op == "normalize") {
    st.ruler = normalized(need_ruler());
  } else if (op == "rotate") {
    st.ruler = min_span_rotation(need_ruler());
  } else if (op == "retest") {
    const auto v = u32("v");
    const auto& r = need_ruler();
    require(retest_modulus(r.marks, v), ErrorCode::ReplayMismatch, "marks fail modulo " + std::to_string(v));
    st.ruler = ModularRuler(r.marks, v);
  } else if (op == "circulant") {
    st.matrix = circulant_from_ruler(need_ruler());
  } else if (op == "bdc") {
    bdc = bdc_assemble(need_ruler(), u32("t"));
  } else if (op == "recipe") {
    require(bdc.has_value(), ErrorCode::ReplayMismatch, "recipe needs a BDC matrix");
    WeightRecipe r;
    r.j = u32("j");
    r.c = u32("c");
    r.theta = u32("theta");
    r.delta = u32("delta");
    r.zeroClass = step.at("zero").get<bool>();
    st.matrix = build_recipe(*bdc, r);
  } else if (op == "removal_family") {
    st.matrix = removal_family(u32("q"), u32("s"), step.at("on").get<bool>());
  } else if (op == "ag_extension") {
    st.matrix = extension_family_ag(u32("q"), u32("s"), u32("delta"), u32("theta"));
  } else if (op == "construction_a") {
    const auto plane = pg_incidence(u32("q"));
    const auto ca = construction_a(named_point_set(plane, step.at("set").get<std::string>(), step.value("c", 0U)),
                                   u32("k"));
    require(ca.symmetric, ErrorCode::ReplayMismatch, "construction is not symmetric");
    st.matrix = ca.matrix;
  } else if (op == "remove_permutations") {
    st.matrix = remove_permutations(need_matrix(), u32("k"), u32("delta"));
  } else if (op == "extend") {
    st.matrix = extend_many(need_matrix(), u32("k"), u32("theta"));
  } else {
    fail(ErrorCode::ReplayMismatch, "unknown op " + op);
  }
}

}  // namespace detail

/// Replays the chain and validates the final structure; throws ReplayMismatch naming the step.
inline ReplayResult replay(const Witness& w) {
  ReplayResult st;
  std::optional<BdcMatrix> bdc;
  for (std::size_t i = 0; i < w.chain.size(); ++i) {
    try {
      detail::replay_step(w.chain[i], st, bdc);
    } catch (const Error& e) {
      fail(ErrorCode::ReplayMismatch, "step " + std::to_string(i) + ": " + e.what());
    } catch (const json::exception& e) {
      fail(ErrorCode::ReplayMismatch, "step " + std::to_string(i) + ": " + e.what());
    }
  }
  if (w.cyclic || !st.matrix) {
    require(st.ruler.has_value(), ErrorCode::ReplayMismatch, "chain produced no ruler");
    const auto& r = *st.ruler;
    require(r.v == w.v && r.k() == w.k, ErrorCode::ReplayMismatch,
            "ruler is (" + std::to_string(r.v) + "," + std::to_string(r.k()) + ")");
    require(is_valid(r), ErrorCode::ReplayMismatch, "final ruler is not a modular Golomb ruler");
  } else {
    const auto& m = *st.matrix;
    require(m.nRows == w.v, ErrorCode::ReplayMismatch, "matrix has " + std::to_string(m.nRows) + " rows");
    const auto check = is_configuration(m, w.k);
    require(check.ok, ErrorCode::ReplayMismatch, "final matrix: " + check.diagnostic);
  }
  return st;
}

struct WitnessCheck {
  bool ok = false;
  std::string message;
  explicit operator bool() const noexcept { return ok; }
};

inline WitnessCheck verify_witness(const Witness& w) {
  try {
    replay(w);
    return {true, {}};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

// ---------------------------------------------------------------------------
// Registry of imported facts

class KnownFacts {
 public:
  KnownFacts() {
    for (const auto& f : reference::facts()) facts_[{f.v, f.k}].push_back(f);
  }

  std::vector<reference::Fact> lookup(std::uint32_t v, std::uint32_t k) const {
    const auto it = facts_.find({v, k});
    return it == facts_.end() ? std::vector<reference::Fact>{} : it->second;
  }

  bool has(std::uint32_t v, std::uint32_t k, reference::FactStatus s) const {
    for (const auto& f : lookup(v, k))
      if (f.status == s) return true;
    return false;
  }

  bool forbids(std::uint32_t v, std::uint32_t k, bool cyclic) const {
    return has(v, k, reference::FactStatus::NoConfig) || (cyclic && has(v, k, reference::FactStatus::NoCyclicConfig));
  }

  /// A witness against a recorded nonexistence result means a bug; abort.
  void check(const Witness& w) const {
    if (forbids(w.v, w.k, w.cyclic))
      fail(ErrorCode::RegistryConflict, "witness for " + std::to_string(w.v) + "_" + std::to_string(w.k) +
                                            (w.cyclic ? " (cyclic)" : "") + " contradicts the registry");
  }

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<reference::Fact>> facts_;
};

inline bool deficiency_one_nonexistence(std::uint32_t k) {
  return (k >= 5 && k <= 10) || (!num::is_square(k) && !(k >= 2 && num::is_square(k - 2)));
}

// ---------------------------------------------------------------------------
// Scan configuration

struct ScanOptions {
  std::uint32_t vMax = 0;            // 0: G(k) - 1
  std::uint32_t maxDelta = 3;        // deletions from larger base rulers
  std::uint32_t deletionSamples = 64;
  std::uint32_t unitCap = 5000;      // all units below this modulus, a sample above
  std::uint32_t unitSample = 512;
  std::uint64_t seed = 20240601;
  bool allRotations = false;         // every translation instead of the min-span one
  std::uint64_t oracleBudget = 0;    // 0 disables the oracle fill
  std::uint32_t qMax = 128;
  std::uint32_t agDeltaMax = 3;
  std::uint32_t threads = 0;         // 0: CONFIGURA_THREADS or hardware
};

inline std::uint32_t worker_count(std::uint32_t requested = 0) {
  if (const char* env = std::getenv("CONFIGURA_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::uint32_t>(n);
  }
  if (requested) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on a worker pool; results keep index order.
template <class Fn>
auto parallel_map(std::size_t n, std::uint32_t threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out(n);
  const std::uint32_t workers = std::min<std::size_t>(std::max(1U, threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::uint32_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Base rulers

struct BaseRuler {
  ModularRuler ruler;  // already reduced to k marks
  json chain = json::array();
};

/// Subsets of marks to delete: all of them for delta <= 2; for larger delta the
/// cyclic windows plus a seeded sample.
inline std::vector<Marks> deletion_subsets(const Marks& marks, std::uint32_t delta, const ScanOptions& opt) {
  const auto n = static_cast<std::uint32_t>(marks.size());
  std::vector<Marks> out;
  if (delta == 0) return {Marks{}};
  if (delta > n) return out;
  if (delta <= 2) {
    for (std::uint32_t i = 0; i < n; ++i) {
      if (delta == 1) {
        out.push_back({marks[i]});
        continue;
      }
      for (std::uint32_t j = i + 1; j < n; ++j) out.push_back({marks[i], marks[j]});
    }
    return out;
  }
  std::set<Marks> seen;
  for (std::uint32_t i = 0; i < n; ++i) {
    Marks s;
    for (std::uint32_t e = 0; e < delta; ++e) s.push_back(marks[(i + e) % n]);
    std::sort(s.begin(), s.end());
    if (seen.insert(s).second) out.push_back(s);
  }
  std::mt19937_64 rng(opt.seed ^ (static_cast<std::uint64_t>(n) << 32) ^ delta);
  for (std::uint32_t trial = 0; trial < opt.deletionSamples; ++trial) {
    Marks s;
    std::sample(marks.begin(), marks.end(), std::back_inserter(s), delta, rng);
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

/// Singer (k' = q+1), Bose (k' = q) and Ruzsa (k' = p-1) rulers with
/// k <= k' <= k + maxDelta, each reduced to k marks in every enumerated way.
inline std::vector<BaseRuler> base_rulers(std::uint32_t k, const ScanOptions& opt = {}) {
  std::vector<BaseRuler> out;
  auto add = [&](const ModularRuler& r, json op) {
    for (const auto& del : deletion_subsets(r.marks, r.k() - k, opt)) {
      BaseRuler b{del.empty() ? r : delete_marks(r, del), json::array({op})};
      if (!del.empty()) b.chain.push_back({{"op", "delete"}, {"marks", del}});
      out.push_back(std::move(b));
    }
  };
  const std::uint32_t hi = std::min(opt.qMax, k + opt.maxDelta);
  for (std::uint32_t q = std::max(2U, k > 0 ? k - 1 : 0); q <= hi; ++q) {
    if (!num::prime_power(q)) continue;
    if (q + 1 >= k && q + 1 <= k + opt.maxDelta) add(singer_ruler(q), {{"op", "singer"}, {"q", q}});
    if (q >= k && q <= k + opt.maxDelta) add(bose_ruler(q), {{"op", "bose"}, {"q", q}});
  }
  for (std::uint32_t p = 3; p <= std::min(opt.qMax, k + opt.maxDelta + 1); ++p)
    if (num::is_prime(p) && p - 1 >= k) add(ruzsa_ruler(p), {{"op", "ruzsa"}, {"p", p}});
  return out;
}

// ---------------------------------------------------------------------------
// Records

struct SpectrumRecord {
  std::uint32_t k = 0, P = 0, G = 0;
  std::map<std::uint32_t, Witness> cyclic, any;
  std::set<std::uint32_t> provenNoCyclic;  // oracle NotExists
  std::uint32_t cyclicPopulatedTo = 0, anyPopulatedTo = 0;  // highest v scanned
};

inline SpectrumRecord make_record(std::uint32_t k) {
  SpectrumRecord r;
  r.k = k;
  r.P = static_cast<std::uint32_t>(plane_bound(k));
  r.G = golomb_bound(k);
  return r;
}

namespace detail {

inline bool shorter(const Witness& a, const Witness& b) { return a.chain.size() < b.chain.size(); }

inline std::uint32_t upper_bound_of(const std::map<std::uint32_t, Witness>& achieved, std::uint32_t P,
                                    std::uint32_t G) {
  std::uint32_t v0 = G;
  while (v0 > P && achieved.count(v0 - 1)) --v0;
  return v0;
}

}  // namespace detail

/// Keeps the shortest chain per v; checks the registry first.
inline bool record_witness(SpectrumRecord& rec, Witness w, const KnownFacts& facts) {
  facts.check(w);
  if (w.v < rec.P || w.v >= rec.G) return false;
  auto place = [&](std::map<std::uint32_t, Witness>& m) {
    auto it = m.find(w.v);
    if (it == m.end()) {
      m.emplace(w.v, w);
      return true;
    }
    if (detail::shorter(w, it->second)) it->second = w;
    return false;
  };
  bool fresh = false;
  if (w.cyclic) fresh = place(rec.cyclic);
  fresh = place(rec.any) || fresh;
  return fresh;
}

/// Smallest v0 with [v0, G) all achieved by cyclic witnesses.
inline std::uint32_t ec_upper_bound(const SpectrumRecord& rec) {
  require(rec.cyclicPopulatedTo + 1 >= rec.G, ErrorCode::NotPopulated, "cyclic scan did not reach G(k)");
  return detail::upper_bound_of(rec.cyclic, rec.P, rec.G);
}

inline std::uint32_t e_upper_bound(const SpectrumRecord& rec) {
  require(rec.anyPopulatedTo + 1 >= rec.G, ErrorCode::NotPopulated, "scan did not reach G(k)");
  return detail::upper_bound_of(rec.any, rec.P, rec.G);
}

inline std::vector<std::uint32_t> gaps(const SpectrumRecord& rec, bool cyclicOnly) {
  const auto& m = cyclicOnly ? rec.cyclic : rec.any;
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = rec.P; v < rec.G; ++v)
    if (!m.count(v)) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Cyclic scan

namespace detail {

inline std::vector<std::uint32_t> scan_units(std::uint32_t v, const ScanOptions& opt) {
  std::vector<std::uint32_t> units;
  // m and -m give mirror images with the same span and difference set.
  for (auto m : num::units_mod(v))
    if (m <= v / 2 || v <= 2) units.push_back(m);
  if (v <= opt.unitCap || units.size() <= opt.unitSample) return units;
  std::vector<std::uint32_t> pick{1};
  std::mt19937_64 rng(opt.seed ^ v);
  std::sample(units.begin() + 1, units.end(), std::back_inserter(pick), opt.unitSample - 1, rng);
  return pick;
}

inline std::vector<Witness> scan_base(const BaseRuler& base, std::uint32_t k, std::uint32_t P, std::uint32_t vMax,
                                      const ScanOptions& opt) {
  std::map<std::uint32_t, Witness> found;
  const auto& r = base.ruler;
  for (auto m : scan_units(r.v, opt)) {
    const auto scaled = affine_map(r, m, 0);
    std::vector<std::pair<ModularRuler, json>> shapes;
    if (opt.allRotations) {
      for (auto a : scaled.marks)
        shapes.emplace_back(affine_map(scaled, 1, r.v - a), json{{"op", "affine"}, {"m", 1}, {"b", r.v - a}});
    } else {
      shapes.emplace_back(min_span_rotation(scaled), json{{"op", "rotate"}});
    }
    for (const auto& [shape, op] : shapes) {
      const std::uint32_t span = shape.marks.back();
      const std::uint32_t lo = std::max(P, span + 1);
      if (lo > vMax) continue;
      for (auto v : delta_scan(shape.marks, lo, vMax)) {
        if (found.count(v)) continue;
        Witness w{v, k, true, "cyclic-scan", base.chain};
        if (m != 1) w.chain.push_back({{"op", "affine"}, {"m", m}, {"b", 0}});
        w.chain.push_back(op);
        if (v != r.v || shape.marks != r.marks) w.chain.push_back({{"op", "retest"}, {"v", v}});
        found.emplace(v, std::move(w));
      }
    }
  }
  std::vector<Witness> out;
  for (auto& [v, w] : found) out.push_back(std::move(w));
  return out;
}

}  // namespace detail

/// Multiplier x deletion x modulus rescans of the base rulers over [P(k), vMax].
inline void cyclic_scan(SpectrumRecord& rec, const ScanOptions& opt = {}, const KnownFacts& facts = {}) {
  const std::uint32_t vMax = opt.vMax ? std::min(opt.vMax, rec.G - 1) : rec.G - 1;
  const auto bases = base_rulers(rec.k, opt);
  const auto parts = parallel_map(bases.size(), worker_count(opt.threads), [&](std::size_t i) {
    return detail::scan_base(bases[i], rec.k, rec.P, vMax, opt);
  });
  for (const auto& part : parts)
    for (const auto& w : part) record_witness(rec, w, facts);
  if (opt.oracleBudget) {
    for (std::uint32_t v = rec.P; v <= vMax; ++v) {
      if (rec.cyclic.count(v) || facts.forbids(v, rec.k, true)) continue;
      const auto res = oracle_exists(v, rec.k, opt.oracleBudget);
      if (res.outcome == OracleOutcome::NotExists) rec.provenNoCyclic.insert(v);
      if (res.outcome != OracleOutcome::Exists) continue;
      Witness w{v, rec.k, true, "oracle", json::array({{{"op", "ruler"}, {"v", v}, {"marks", res.witness->marks}}})};
      record_witness(rec, w, facts);
    }
  }
  rec.cyclicPopulatedTo = std::max(rec.cyclicPopulatedTo, vMax);
}

// ---------------------------------------------------------------------------
// Non-cyclic scan

struct Candidate {
  std::uint32_t v = 0;
  json chain;
  std::string source;
};

/// Parameter-level enumeration of the matrix families for a given k; nothing is built here.
inline std::vector<Candidate> noncyclic_candidates(std::uint32_t k, std::uint32_t P, std::uint32_t G,
                                                   const ScanOptions& opt = {}) {
  std::vector<Candidate> out;
  auto in_range = [&](std::uint64_t v) { return v >= P && v < G; };
  auto push = [&](std::uint64_t v, json chain, const char* src) {
    if (in_range(v)) out.push_back({static_cast<std::uint32_t>(v), std::move(chain), src});
  };
  const std::uint32_t qTop = std::min<std::uint32_t>(opt.qMax, G / std::max(1U, k) + 2);

  // AG(2,q) blocks with masking and extensions.
  for (std::uint32_t q = std::max(2U, k); q <= qTop; ++q) {
    if (!num::prime_power(q)) continue;
    for (std::uint32_t delta = 0; delta <= opt.agDeltaMax && k + delta <= q; ++delta) {
      const std::uint32_t s = q - k - delta;
      for (std::uint32_t theta = 0; theta <= q - s + 1; ++theta)
        push(static_cast<std::uint64_t>(q) * (q - s) + theta,
             json::array({{{"op", "ag_extension"}, {"q", q}, {"s", s}, {"delta", delta}, {"theta", theta}}}),
             "ag-extension");
    }
  }
  // Removal families in PG(2,q), optionally thinned by permutation removal.
  for (std::uint32_t q = std::max(2U, k); q <= qTop; ++q) {
    if (!num::prime_power(q)) continue;
    for (std::uint32_t kk = k; kk <= std::min(q, k + 2); ++kk) {
      const std::uint32_t s = q - kk;
      for (bool on : {true, false}) {
        const std::uint64_t v = on ? static_cast<std::uint64_t>(q) * (q - s)
                                   : static_cast<std::uint64_t>(q) * q - static_cast<std::uint64_t>(q - 1) * s - 1;
        json chain = json::array({{{"op", "removal_family"}, {"q", q}, {"s", s}, {"on", on}}});
        if (kk > k) chain.push_back({{"op", "remove_permutations"}, {"k", kk}, {"delta", kk - k}});
        push(v, std::move(chain), "removal-family");
      }
    }
  }
  // Point sets of PG(2,q) under Construction A.
  for (std::uint32_t q = 3; q <= std::min<std::uint32_t>(opt.qMax, 2 * k + 2); ++q) {
    if (!num::prime_power(q)) continue;
    auto ca = [&](const char* set, std::uint64_t v, std::uint32_t c = 0) {
      json step = {{"op", "construction_a"}, {"q", q}, {"set", set}, {"k", k}};
      if (c) step["c"] = c;
      push(v, json::array({step}), "construction-a");
    };
    if (q % 2 == 1 && (q + 1) / 2 == k) ca("conic-internal", static_cast<std::uint64_t>(q) * (q - 1) / 2);
    if (q % 2 == 1 && (q - 1) / 2 == k) ca("conic-external", static_cast<std::uint64_t>(q) * (q + 1) / 2);
    if (num::is_square(q)) {
      const std::uint32_t r = static_cast<std::uint32_t>(num::isqrt(q));
      if (q - r == k) ca("hermitian-complement", static_cast<std::uint64_t>(q) * q + q - static_cast<std::uint64_t>(q) * r);
      if (k > r && k - r < q - r + 1) ca("baer-union", static_cast<std::uint64_t>(k - r) * (q + r + 1), k - r);
    }
  }
  // Binary-weight BDC matrices: select blocks, extend, thin.
  auto weights_family = [&](const ModularRuler& base, json op) {
    for (auto t : num::divisors(base.v)) {
      if (t < 2 || t == base.v) continue;
      const auto w = quotient_weights(base, t);
      std::uint32_t zeros = 0;
      bool binary = true;
      for (auto x : w) {
        binary = binary && x <= 1;
        zeros += x == 0;
      }
      if (!binary || zeros > 1) continue;
      const std::uint32_t d = base.v / t;
      const std::uint32_t j = zeros ? static_cast<std::uint32_t>(std::find(w.begin(), w.end(), 0U) - w.begin()) : 0;
      for (std::uint32_t c = 2; c <= t; ++c) {
        const std::uint32_t baseK = zeros ? c - 1 : c;
        if (baseK < k || baseK > k + 2) continue;
        for (std::uint32_t theta = 0; theta <= c + 1; ++theta)
          push(static_cast<std::uint64_t>(c) * d + theta,
               json::array({op, {{"op", "bdc"}, {"t", t}},
                            {{"op", "recipe"}, {"j", j}, {"c", c}, {"theta", theta}, {"delta", baseK - k},
                             {"zero", zeros == 1}}}),
               "weight-recipe");
      }
    }
  };
  for (std::uint32_t q = 2; q <= std::min(opt.qMax, qTop + 2); ++q) {
    if (!num::prime_power(q)) continue;
    if (static_cast<std::uint64_t>(q) * q <= 4ULL * G) weights_family(bose_ruler(q), {{"op", "bose"}, {"q", q}});
    if (num::is_prime(q) && q >= 3) weights_family(ruzsa_ruler(q), {{"op", "ruzsa"}, {"p", q}});
  }
  return out;
}

/// Adds matrix-family witnesses for every v not already achieved; cyclic witnesses count too.
inline void noncyclic_scan(SpectrumRecord& rec, const ScanOptions& opt = {}, const KnownFacts& facts = {}) {
  const std::uint32_t vMax = opt.vMax ? std::min(opt.vMax, rec.G - 1) : rec.G - 1;
  for (auto& c : noncyclic_candidates(rec.k, rec.P, vMax + 1, opt)) {
    if (rec.any.count(c.v) || facts.forbids(c.v, rec.k, false)) continue;
    Witness w{c.v, rec.k, false, c.source, c.chain};
    const auto check = verify_witness(w);
    if (!check.ok) continue;  // e.g. Construction A not symmetric for this q
    record_witness(rec, std::move(w), facts);
  }
  rec.anyPopulatedTo = std::max(rec.anyPopulatedTo, std::min(vMax, rec.cyclicPopulatedTo));
}

// ---------------------------------------------------------------------------
// Database: one witness per line

inline void save_db(const std::string& path, const std::vector<SpectrumRecord>& records) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::ParseError, "cannot write " + path);
  for (const auto& rec : records) {
    std::set<std::uint32_t> written;
    for (const auto& [v, w] : rec.cyclic) {
      os << witness_to_json(w).dump() << '\n';
      written.insert(v);
    }
    for (const auto& [v, w] : rec.any)
      if (!w.cyclic || !written.count(v)) os << witness_to_json(w).dump() << '\n';
  }
}

inline std::vector<Witness> load_db(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::ParseError, "cannot read " + path);
  std::vector<Witness> out;
  std::size_t lineNo = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(witness_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, "line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables and comparison

inline std::string format_intervals(const std::vector<std::uint32_t>& sorted) {
  std::string s;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[j] + 1) ++j;
    if (!s.empty()) s += ",";
    s += std::to_string(sorted[i]);
    if (j > i) s += "-" + std::to_string(sorted[j]);
    i = j + 1;
  }
  return s;
}

inline std::vector<std::uint32_t> keys(const std::map<std::uint32_t, Witness>& m) {
  std::vector<std::uint32_t> out;
  for (const auto& [v, w] : m) out.push_back(v);
  return out;
}

enum class TableFormat { Csv, Json, Markdown };

inline TableFormat parse_table_format(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  if (s == "md" || s == "markdown") return TableFormat::Markdown;
  fail(ErrorCode::ParseError, "unknown table format " + s);
}

inline std::string emit_tables(const std::vector<SpectrumRecord>& records, TableFormat fmt) {
  auto bound = [](const SpectrumRecord& r, bool cyc) -> std::string {
    try {
      return std::to_string(cyc ? ec_upper_bound(r) : e_upper_bound(r));
    } catch (const Error&) {
      return "";
    }
  };
  std::ostringstream os;
  if (fmt == TableFormat::Json) {
    json arr = json::array();
    for (const auto& r : records) {
      json row = {{"k", r.k}, {"P", r.P}, {"G", r.G}, {"cyclic", keys(r.cyclic)}, {"any", keys(r.any)}};
      const auto ec = bound(r, true), e = bound(r, false);
      row["Ec"] = ec.empty() ? json(nullptr) : json(std::stoul(ec));
      row["E"] = e.empty() ? json(nullptr) : json(std::stoul(e));
      arr.push_back(row);
    }
    os << arr.dump(2) << '\n';
  } else if (fmt == TableFormat::Csv) {
    os << "k,P,cyclic,any,Ec,E,G\n";
    for (const auto& r : records)
      os << r.k << ',' << r.P << ",\"" << format_intervals(keys(r.cyclic)) << "\",\""
         << format_intervals(keys(r.any)) << "\"," << bound(r, true) << ',' << bound(r, false) << ',' << r.G << '\n';
  } else {
    os << "| k | P(k) | cyclic v < G(k) | any v < G(k) | E_c(k) <= | E(k) <= | G(k) |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : records)
      os << "| " << r.k << " | " << r.P << " | " << format_intervals(keys(r.cyclic)) << " | "
         << format_intervals(keys(r.any)) << " | " << bound(r, true) << " | " << bound(r, false) << " | " << r.G
         << " |\n";
  }
  return os.str();
}

enum class DiffKind { MissingWitness, ExtraWitness, RegistryConflict };

inline std::string to_string(DiffKind d) {
  switch (d) {
    case DiffKind::MissingWitness: return "missing-witness";
    case DiffKind::ExtraWitness: return "extra-witness";
    case DiffKind::RegistryConflict: return "registry-conflict";
  }
  return "?";
}

struct Discrepancy {
  std::uint32_t k = 0, v = 0;
  DiffKind kind = DiffKind::MissingWitness;
  std::string what;  // "cyclic", "any" or "bound"
};

struct CompareReport {
  std::vector<Discrepancy> items;
  std::size_t count(DiffKind d) const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [&](const auto& x) { return x.kind == d; }));
  }
};

namespace detail {

inline std::set<std::uint32_t> expand_intervals(const std::vector<reference::Interval>& iv) {
  std::set<std::uint32_t> out;
  for (const auto& i : iv)
    for (auto v = i.lo; v <= i.hi; ++v) out.insert(v);
  return out;
}

}  // namespace detail

/// Diffs against the embedded reference rows and bounds.
inline CompareReport compare_reference(const std::vector<SpectrumRecord>& records, const KnownFacts& facts = {}) {
  CompareReport rep;
  for (const auto& r : records) {
    for (const auto& [v, w] : r.any)
      if (facts.forbids(v, r.k, w.cyclic)) rep.items.push_back({r.k, v, DiffKind::RegistryConflict, w.cyclic ? "cyclic" : "any"});
    std::optional<std::set<std::uint32_t>> ref;
    for (const auto& row : reference::small_k_cyclic_rows())
      if (row.k == r.k) ref = detail::expand_intervals(row.exists);
    if (r.k == 16) {
      ref = detail::expand_intervals(reference::k16_targets());
      for (auto v : reference::k16_known_cyclic()) ref->insert(v);
    }
    if (ref) {
      for (auto v : *ref)
        if (v <= r.cyclicPopulatedTo && !r.cyclic.count(v)) rep.items.push_back({r.k, v, DiffKind::MissingWitness, "cyclic"});
      for (const auto& [v, w] : r.cyclic)
        if (!ref->count(v)) rep.items.push_back({r.k, v, DiffKind::ExtraWitness, "cyclic"});
    }
    for (const auto& [kk, iv] : reference::any_config_targets())
      if (kk == r.k)
        for (auto v : detail::expand_intervals(iv))
          if (v <= r.anyPopulatedTo && !r.any.count(v)) rep.items.push_back({r.k, v, DiffKind::MissingWitness, "any"});
    if (r.k >= reference::kGolombMinK && r.k <= reference::kGolombMaxK && r.cyclicPopulatedTo + 1 >= r.G) {
      const auto printed = reference::kCyclicExistenceBound[r.k - reference::kGolombMinK];
      const auto ours = ec_upper_bound(r);
      if (ours > printed) rep.items.push_back({r.k, ours, DiffKind::MissingWitness, "bound"});
      if (ours < printed) rep.items.push_back({r.k, ours, DiffKind::ExtraWitness, "bound"});
    }
  }
  return rep;
}

inline std::string format_report(const CompareReport& rep) {
  std::ostringstream os;
  os << "missing-witness " << rep.count(DiffKind::MissingWitness) << ", extra-witness "
     << rep.count(DiffKind::ExtraWitness) << ", registry-conflict " << rep.count(DiffKind::RegistryConflict) << '\n';
  for (const auto& d : rep.items) os << "k=" << d.k << " v=" << d.v << ' ' << to_string(d.kind) << " (" << d.what << ")\n";
  return os.str();
}

}  // namespace configura
