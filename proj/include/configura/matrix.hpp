#pragma once

// Incidence matrices, block double-circulant (BDC) matrices and the weight
// surgery used to derive new configurations from them.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "configura/bits.hpp"
#include "configura/error.hpp"
#include "configura/ruler.hpp"

namespace configura {

/// Rows are lines, columns are points.
struct IncidenceMatrix {
  std::uint32_t nRows = 0, nCols = 0;
  std::vector<BitRow> rows;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> blockShape;  // (t, d)
  std::vector<std::string> provenance;

  IncidenceMatrix() = default;
  IncidenceMatrix(std::uint32_t r, std::uint32_t c) : nRows(r), nCols(c), rows(r, BitRow(c)) {}

  bool get(std::uint32_t i, std::uint32_t j) const { return rows[i].test(j); }
  void set(std::uint32_t i, std::uint32_t j, bool value = true) { rows[i].assign(j, value); }

  std::vector<std::uint32_t> row_support(std::uint32_t i) const { return rows[i].ones(); }

  std::vector<std::vector<std::uint32_t>> column_supports() const {
    std::vector<std::vector<std::uint32_t>> cols(nCols);
    for (std::uint32_t i = 0; i < nRows; ++i)
      for (auto j : rows[i].ones()) cols[j].push_back(i);
    return cols;
  }

  std::size_t ones() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.count();
    return n;
  }

  /// Appends one empty row and one empty column.
  void grow() {
    ++nCols;
    for (auto& r : rows) r.resize(nCols);
    rows.emplace_back(nCols);
    ++nRows;
  }

  friend bool operator==(const IncidenceMatrix& a, const IncidenceMatrix& b) {
    return a.nRows == b.nRows && a.nCols == b.nCols && a.rows == b.rows;
  }
};

struct ConfigCheck {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const noexcept { return ok; }
};

/// k-regular rows and columns and no 2x2 all-ones submatrix.
inline ConfigCheck is_configuration(const IncidenceMatrix& m, std::uint32_t k) {
  ConfigCheck res;
  if (m.nRows != m.nCols) {
    res.diagnostic = "matrix is not square";
    return res;
  }
  std::vector<std::uint32_t> colw(m.nCols, 0);
  std::vector<std::vector<std::uint32_t>> supports(m.nRows);
  for (std::uint32_t i = 0; i < m.nRows; ++i) {
    supports[i] = m.rows[i].ones();
    if (supports[i].size() != k) {
      res.diagnostic = "row " + std::to_string(i) + " has weight " + std::to_string(supports[i].size());
      return res;
    }
    for (auto j : supports[i]) ++colw[j];
  }
  for (std::uint32_t j = 0; j < m.nCols; ++j)
    if (colw[j] != k) {
      res.diagnostic = "column " + std::to_string(j) + " has weight " + std::to_string(colw[j]);
      return res;
    }
  const std::uint64_t n = m.nCols;
  const bool dense = n * n <= (1ULL << 31);
  BitRow seen(dense ? n * n : 0);
  std::unordered_set<std::uint64_t> seen_sparse;
  for (std::uint32_t i = 0; i < m.nRows; ++i) {
    const auto& s = supports[i];
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        const std::uint64_t key = s[a] * n + s[b];
        const bool dup = dense ? seen.test(key) : !seen_sparse.insert(key).second;
        if (dense) seen.set(key);
        if (dup) {
          std::uint32_t prev = 0;
          while (!(m.rows[prev].test(s[a]) && m.rows[prev].test(s[b]))) ++prev;
          res.diagnostic = "rows " + std::to_string(prev) + " and " + std::to_string(i) + " share columns " +
                           std::to_string(s[a]) + " and " + std::to_string(s[b]);
          return res;
        }
      }
  }
  res.ok = true;
  return res;
}

inline IncidenceMatrix circulant_from_ruler(const ModularRuler& r) {
  require_valid(r);
  IncidenceMatrix m(r.v, r.v);
  for (std::uint32_t i = 0; i < r.v; ++i)
    for (auto a : r.marks) m.set(i, (a + i) % r.v);
  m.provenance.push_back("circulant v=" + std::to_string(r.v) + " k=" + std::to_string(r.k()));
  return m;
}

/// Row i of a d x d circulant block has ones at {b + i mod d : b in firstRow}.
struct BdcMatrix {
  std::uint32_t t = 0, d = 0;
  std::vector<std::vector<Marks>> blocks;  // t x t first-row residue sets
  std::vector<std::string> provenance;

  std::uint32_t weight(std::uint32_t i, std::uint32_t j) const {
    return static_cast<std::uint32_t>(blocks[i][j].size());
  }
  std::uint32_t v() const noexcept { return t * d; }
  std::uint32_t row_weight() const {
    std::uint32_t w = 0;
    for (std::uint32_t j = 0; j < t; ++j) w += weight(0, j);
    return w;
  }
};

inline std::uint32_t block_class(std::uint32_t i, std::uint32_t j, std::uint32_t t) { return (j + t - i % t) % t; }

/// Index map x = a*d + b  ->  b*t + a.
inline std::uint32_t sigma(std::uint32_t t, std::uint32_t d, std::uint32_t x) { return (x % d) * t + x / d; }

/// Permutes rows and columns of circulant(r) by sigma_t. Block (i, j) is the
/// circulant with first row B_h when j >= i and B_h + 1 otherwise, h = j - i mod t.
inline BdcMatrix bdc_assemble(const ModularRuler& r, std::uint32_t t) {
  const auto parts = quotient(r, t);
  BdcMatrix b;
  b.t = t;
  b.d = r.v / t;
  b.blocks.assign(t, std::vector<Marks>(t));
  for (std::uint32_t i = 0; i < t; ++i)
    for (std::uint32_t j = 0; j < t; ++j) {
      const auto& base = parts[block_class(i, j, t)].ruler.marks;
      Marks row = base;
      if (j < i) {
        for (auto& x : row) x = (x + 1) % b.d;
        std::sort(row.begin(), row.end());
      }
      b.blocks[i][j] = std::move(row);
    }
  b.provenance.push_back("bdc t=" + std::to_string(t) + " of v=" + std::to_string(r.v));
  return b;
}

inline IncidenceMatrix expand(const BdcMatrix& b) {
  IncidenceMatrix m(b.v(), b.v());
  for (std::uint32_t i = 0; i < b.t; ++i)
    for (std::uint32_t j = 0; j < b.t; ++j)
      for (std::uint32_t r = 0; r < b.d; ++r)
        for (auto x : b.blocks[i][j]) m.set(i * b.d + r, j * b.d + (x + r) % b.d);
  m.blockShape = std::make_pair(b.t, b.d);
  m.provenance = b.provenance;
  return m;
}

inline std::vector<std::uint32_t> weight_vector(const BdcMatrix& b) {
  std::vector<std::uint32_t> w(b.t);
  for (std::uint32_t h = 0; h < b.t; ++h) w[h] = b.weight(0, h);
  return w;
}

inline std::vector<std::vector<std::uint32_t>> weight_matrix(const BdcMatrix& b) {
  std::vector<std::vector<std::uint32_t>> w(b.t, std::vector<std::uint32_t>(b.t));
  for (std::uint32_t i = 0; i < b.t; ++i)
    for (std::uint32_t j = 0; j < b.t; ++j) w[i][j] = b.weight(i, j);
  for (std::uint32_t i = 0; i < b.t; ++i)
    for (std::uint32_t j = 0; j < b.t; ++j)
      require(w[i][j] == w[0][block_class(i, j, b.t)], ErrorCode::InternalInvariantViolation,
              "weight matrix not circulant");
  return w;
}

/// Removes deltas[h] lowest residues from every block of class h.
inline BdcMatrix trim_uniform(const BdcMatrix& b, const std::vector<std::uint32_t>& deltas) {
  require(deltas.size() == b.t, ErrorCode::ShapeMismatch, "one delta per weight class");
  BdcMatrix out = b;
  for (std::uint32_t i = 0; i < b.t; ++i)
    for (std::uint32_t j = 0; j < b.t; ++j) {
      const auto h = block_class(i, j, b.t);
      auto& blk = out.blocks[i][j];
      require(deltas[h] <= blk.size(), ErrorCode::DeltaTooBig,
              "delta " + std::to_string(deltas[h]) + " exceeds weight " + std::to_string(blk.size()));
      blk.erase(blk.begin(), blk.begin() + deltas[h]);
    }
  std::string tag = "trim";
  for (auto x : deltas) tag += " " + std::to_string(x);
  out.provenance.push_back(tag);
  return out;
}

namespace detail {

// Relabels block columns so new (i, l) = old (i, l + j), keeps the top-left
// c x c grid and trims each kept block to the target weight of its class
// relative to the diagonal.
template <class Target>
BdcMatrix shifted_window(const BdcMatrix& b, std::uint32_t j, std::uint32_t c, Target target) {
  BdcMatrix out;
  out.t = c;
  out.d = b.d;
  out.blocks.assign(c, std::vector<Marks>(c));
  for (std::uint32_t i = 0; i < c; ++i)
    for (std::uint32_t l = 0; l < c; ++l) {
      Marks blk = b.blocks[i][(l + j) % b.t];
      const std::uint32_t rel = (l + b.t - i) % b.t;
      const std::uint32_t keep = target(rel);
      require(keep <= blk.size(), ErrorCode::InternalInvariantViolation, "trim target above weight");
      blk.erase(blk.begin(), blk.begin() + (blk.size() - keep));
      out.blocks[i][l] = std::move(blk);
    }
  out.provenance = b.provenance;
  return out;
}

}  // namespace detail

/// v' = c d, k' = w_j + (c-1) w_m with m the lightest class other than j.
inline BdcMatrix select_blocks(const BdcMatrix& b, std::uint32_t j, std::uint32_t c) {
  require(c >= 1 && c <= b.t, ErrorCode::BadC, "c must lie in [1, t]");
  require(j < b.t, ErrorCode::PreconditionFailed, "class index out of range");
  const auto w = weight_vector(b);
  std::uint32_t wm = UINT32_MAX;
  for (std::uint32_t h = 0; h < b.t; ++h)
    if (h != j) wm = std::min(wm, w[h]);
  if (b.t == 1) wm = 0;
  auto out = detail::shifted_window(b, j, c, [&](std::uint32_t rel) { return rel == 0 ? w[j] : wm; });
  out.provenance.push_back("select j=" + std::to_string(j) + " c=" + std::to_string(c));
  return out;
}

struct AlternatingWeights {
  std::uint32_t odd = 0, even = 0;
};

inline AlternatingWeights alternating_weights(const BdcMatrix& b, std::uint32_t j) {
  const auto w = weight_vector(b);
  AlternatingWeights a{UINT32_MAX, UINT32_MAX};
  for (std::uint32_t rel = 1; rel < b.t; ++rel) {
    const auto x = w[(j + rel) % b.t];
    if (rel % 2)
      a.odd = std::min(a.odd, x);
    else
      a.even = std::min(a.even, x);
  }
  if (a.even == UINT32_MAX) a.even = 0;
  return a;
}

/// Keeps a 2f x 2f grid; odd offsets trimmed to w_od, even ones to w_ev.
inline BdcMatrix select_blocks_alternating(const BdcMatrix& b, std::uint32_t j, std::uint32_t f) {
  require(b.t % 2 == 0, ErrorCode::TOdd, "t must be even");
  require(f >= 1 && 2 * f <= b.t, ErrorCode::BadF, "f must lie in [1, t/2]");
  require(j < b.t, ErrorCode::PreconditionFailed, "class index out of range");
  const auto w = weight_vector(b);
  const auto a = alternating_weights(b, j);
  auto out = detail::shifted_window(b, j, 2 * f, [&](std::uint32_t rel) {
    if (rel == 0) return w[j];
    return rel % 2 ? a.odd : a.even;
  });
  out.provenance.push_back("alternate j=" + std::to_string(j) + " f=" + std::to_string(f));
  return out;
}

// ---------------------------------------------------------------------------

/// perms[r][i] is the column of the unit in row i of the r-th permutation.
struct PermDecomposition {
  std::vector<std::vector<std::uint32_t>> perms;
};

namespace detail {

// Kuhn's augmenting paths; rows in index order, lowest free column first.
class Matcher {
 public:
  explicit Matcher(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t ncols)
      : adj_(adj), match_col_(ncols, UINT32_MAX), visited_(ncols, 0) {}

  std::optional<std::vector<std::uint32_t>> run() {
    const auto n = static_cast<std::uint32_t>(adj_.size());
    for (std::uint32_t i = 0; i < n; ++i) {
      ++stamp_;
      if (!augment(i)) return std::nullopt;
    }
    std::vector<std::uint32_t> row_to_col(n, UINT32_MAX);
    for (std::uint32_t c = 0; c < match_col_.size(); ++c)
      if (match_col_[c] != UINT32_MAX) row_to_col[match_col_[c]] = c;
    return row_to_col;
  }

 private:
  bool augment(std::uint32_t root) {
    // Iterative DFS to stay safe on long augmenting paths.
    struct Frame {
      std::uint32_t row;
      std::size_t next;
      std::uint32_t via;  // column that led here
    };
    std::vector<Frame> stack{{root, 0, UINT32_MAX}};
    auto flip = [&](std::uint32_t col) {
      for (std::size_t s = stack.size(); s-- > 0;) {
        match_col_[col] = stack[s].row;
        col = stack[s].via;
      }
    };
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto& cols = adj_[f.row];
      if (f.next == 0)
        for (auto c : cols)
          if (visited_[c] != stamp_ && match_col_[c] == UINT32_MAX) {
            flip(c);
            return true;
          }
      bool pushed = false;
      while (f.next < cols.size()) {
        const auto c = cols[f.next++];
        if (visited_[c] == stamp_) continue;
        visited_[c] = stamp_;
        stack.push_back({match_col_[c], 0, c});
        pushed = true;
        break;
      }
      if (!pushed) stack.pop_back();
    }
    return false;
  }

  const std::vector<std::vector<std::uint32_t>>& adj_;
  std::vector<std::uint32_t> match_col_;
  std::vector<std::uint32_t> visited_;
  std::uint32_t stamp_ = 0;
};

}  // namespace detail

inline PermDecomposition koenig_decompose(const IncidenceMatrix& m, std::uint32_t k) {
  require(m.nRows == m.nCols, ErrorCode::NotRegular, "matrix is not square");
  std::vector<std::vector<std::uint32_t>> adj(m.nRows);
  std::vector<std::uint32_t> colw(m.nCols, 0);
  for (std::uint32_t i = 0; i < m.nRows; ++i) {
    adj[i] = m.rows[i].ones();
    require(adj[i].size() == k, ErrorCode::NotRegular, "row " + std::to_string(i) + " is not of weight k");
    for (auto j : adj[i]) ++colw[j];
  }
  for (auto w : colw) require(w == k, ErrorCode::NotRegular, "column weights are not k");
  PermDecomposition out;
  for (std::uint32_t round = 0; round < k; ++round) {
    auto perm = detail::Matcher(adj, m.nCols).run();
    require(perm.has_value(), ErrorCode::MatchingFailed, "no perfect matching in a regular bipartite graph");
    for (std::uint32_t i = 0; i < m.nRows; ++i) {
      auto& a = adj[i];
      a.erase(std::find(a.begin(), a.end(), (*perm)[i]));
    }
    out.perms.push_back(std::move(*perm));
  }
  return out;
}

/// Subtracts the last delta permutations of the decomposition.
inline IncidenceMatrix remove_permutations(const IncidenceMatrix& m, std::uint32_t k, std::uint32_t delta) {
  require(delta < k || (delta == 0 && k == 0), ErrorCode::DeltaTooBig, "delta must be below k");
  if (delta == 0) return m;
  const auto dec = koenig_decompose(m, k);
  IncidenceMatrix out = m;
  out.blockShape.reset();
  for (std::uint32_t r = k - delta; r < k; ++r)
    for (std::uint32_t i = 0; i < m.nRows; ++i) out.set(i, dec.perms[r][i], false);
  out.provenance.push_back("remove " + std::to_string(delta) + " permutations");
  return out;
}

/// Every d x d block is a permutation matrix or zero.
inline bool structure_e_check(const IncidenceMatrix& m, std::uint32_t t, std::uint32_t d) {
  require(m.nRows == m.nCols && static_cast<std::uint64_t>(t) * d == m.nRows, ErrorCode::ShapeMismatch,
          "v must equal t*d");
  const auto k = m.nRows ? static_cast<std::uint32_t>(m.rows[0].count()) : 0;
  require(t >= k && d + 1 >= k, ErrorCode::ShapeMismatch, "Structure E needs t >= k and d >= k-1");
  // Per block: count of ones per block row and per block column.
  std::vector<std::uint32_t> rowhits(static_cast<std::size_t>(t) * t * d, 0);
  std::vector<std::uint32_t> colhits(static_cast<std::size_t>(t) * t * d, 0);
  std::vector<std::uint32_t> total(static_cast<std::size_t>(t) * t, 0);
  for (std::uint32_t i = 0; i < m.nRows; ++i)
    for (auto j : m.rows[i].ones()) {
      const std::size_t blk = static_cast<std::size_t>(i / d) * t + j / d;
      if (++rowhits[blk * d + i % d] > 1) return false;
      if (++colhits[blk * d + j % d] > 1) return false;
      ++total[blk];
    }
  for (auto x : total)
    if (x != 0 && x != d) return false;
  return true;
}

}  // namespace configura
