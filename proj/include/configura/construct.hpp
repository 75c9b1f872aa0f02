#pragma once

// Algebraic rulers (Singer, Bose, Ruzsa), projective and affine planes, and
// the geometric families built from them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "configura/error.hpp"
#include "configura/gf.hpp"
#include "configura/matrix.hpp"
#include "configura/numeric.hpp"
#include "configura/ruler.hpp"

namespace configura {

inline std::shared_ptr<const FiniteField> make_field(std::uint64_t q) {
  const auto [p, m] = num::require_prime_power(q);
  return std::make_shared<const FiniteField>(p, m);
}

/// GF(q) realised inside a larger field as {0} and the powers of xi^step.
/// Index 0 is zero and index i >= 1 is (xi^step)^(i-1).
class Subfield {
 public:
  Subfield(std::shared_ptr<const FiniteField> big, std::uint32_t q) : big_(std::move(big)), q_(q) {
    const std::uint64_t Q = big_->q();
    require(q >= 2 && (Q - 1) % (q - 1) == 0, ErrorCode::NotASubfield, "no subfield of that order");
    step_ = static_cast<std::uint32_t>((Q - 1) / (q - 1));
    codes_.resize(q);
    codes_[0] = 0;
    std::vector<std::int32_t> index_of(Q, -1);
    index_of[0] = 0;
    for (std::uint32_t i = 1; i < q; ++i) {
      codes_[i] = big_->antilog(static_cast<std::uint64_t>(i - 1) * step_).code;
      index_of[codes_[i]] = static_cast<std::int32_t>(i);
    }
    add_.resize(static_cast<std::size_t>(q) * q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        const auto s = big_->add({codes_[a]}, {codes_[b]}).code;
        require(index_of[s] >= 0, ErrorCode::InternalInvariantViolation, "subfield not closed under addition");
        add_[static_cast<std::size_t>(a) * q + b] = static_cast<std::uint32_t>(index_of[s]);
      }
    neg_.resize(q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b)
        if (add_[static_cast<std::size_t>(a) * q + b] == 0) neg_[a] = b;
  }

  std::uint32_t q() const noexcept { return q_; }
  const FiniteField& big() const noexcept { return *big_; }
  std::shared_ptr<const FiniteField> big_ptr() const noexcept { return big_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept { return add_[static_cast<std::size_t>(a) * q_ + b]; }
  std::uint32_t neg(std::uint32_t a) const noexcept { return neg_[a]; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return (a - 1 + b - 1) % (q_ - 1) + 1;
  }
  std::uint32_t inv(std::uint32_t a) const {
    require(a != 0, ErrorCode::ZeroElement, "inverse of zero");
    return (q_ - 1 - (a - 1)) % (q_ - 1) + 1;
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a - 1) * (e % (q_ - 1))) % (q_ - 1) + 1);
  }
  FieldElement embed(std::uint32_t a) const noexcept { return {codes_[a]}; }

 private:
  std::shared_ptr<const FiniteField> big_;
  std::uint32_t q_;
  std::uint32_t step_ = 1;
  std::vector<std::uint32_t> codes_;
  std::vector<std::uint32_t> add_;
  std::vector<std::uint32_t> neg_;
};

// ---------------------------------------------------------------------------
// Rulers

/// {i mod n : xi^i in span(1, xi)} over GF(q^3), n = q^2+q+1.
inline ModularRuler singer_ruler(std::uint32_t q) {
  const auto [p, m] = num::require_prime_power(q);
  require(q <= 128, ErrorCode::PreconditionFailed, "Singer ruler limited to q <= 128");
  auto big = std::make_shared<const FiniteField>(p, 3 * m);
  const Subfield sub(big, q);
  const std::uint32_t n = q * q + q + 1;
  const FieldElement xi = big->primitive();
  std::vector<std::uint64_t> res{0};
  for (std::uint32_t a = 0; a < q; ++a) res.push_back(big->dlog(big->add(sub.embed(a), xi)) % n);
  return from_residues(std::move(res), n);
}

/// {dlog(xi + a) : a in GF(q)} over GF(q^2), modulo q^2 - 1.
inline ModularRuler bose_ruler(std::uint32_t q) {
  const auto [p, m] = num::require_prime_power(q);
  require(q <= 128, ErrorCode::PreconditionFailed, "Bose ruler limited to q <= 128");
  auto big = std::make_shared<const FiniteField>(p, 2 * m);
  const Subfield sub(big, q);
  const FieldElement xi = big->primitive();
  std::vector<std::uint64_t> res;
  for (std::uint32_t a = 0; a < q; ++a) res.push_back(big->dlog(big->add(xi, sub.embed(a))));
  return from_residues(std::move(res), q * q - 1);
}

/// e_u = p u + (p-1) g^u mod p(p-1), u = 1..p-1. g = 0 picks the smallest primitive root.
inline ModularRuler ruzsa_ruler(std::uint32_t p, std::uint32_t g = 0) {
  require(num::is_prime(p) && p >= 3, ErrorCode::NotPrime, "Ruzsa ruler needs an odd prime");
  if (g == 0) g = num::smallest_primitive_root(p);
  require(num::is_primitive_root(g, p), ErrorCode::NotPrimitiveRoot,
          std::to_string(g) + " is not a primitive root mod " + std::to_string(p));
  const std::uint64_t v = static_cast<std::uint64_t>(p) * (p - 1);
  std::vector<std::uint64_t> res;
  for (std::uint64_t u = 1; u < p; ++u) res.push_back((p * u + (p - 1) * num::powmod(g, u, p)) % v);
  return from_residues(std::move(res), static_cast<std::uint32_t>(v));
}

// ---------------------------------------------------------------------------
// Planes

enum class PlaneKind { Projective, Affine, StarredAffine };

struct PlaneIncidence {
  PlaneKind kind = PlaneKind::Projective;
  std::uint32_t q = 0;
  std::uint32_t nPoints = 0;
  std::vector<std::vector<std::uint32_t>> lines;      // sorted point indices
  std::vector<std::array<std::uint32_t, 3>> coords;   // subfield indices; affine points are (x, y, 1)
  std::shared_ptr<const Subfield> field;
  Marks singerSet;  // projective: line i is singerSet + i, points indexed by Singer label
  std::string provenance;

  std::vector<std::vector<std::uint32_t>> lines_through() const {
    std::vector<std::vector<std::uint32_t>> out(nPoints);
    for (std::uint32_t l = 0; l < lines.size(); ++l)
      for (auto pt : lines[l]) out[pt].push_back(l);
    return out;
  }

  bool on_line(std::uint32_t line, std::uint32_t point) const {
    return std::binary_search(lines[line].begin(), lines[line].end(), point);
  }
};

using PlanePtr = std::shared_ptr<const PlaneIncidence>;

/// PG(2,q) with points indexed by Singer label dlog(a + b xi + c xi^2) mod n.
inline PlanePtr pg_incidence(std::uint32_t q) {
  const auto [p, m] = num::require_prime_power(q);
  require(q <= 128, ErrorCode::PreconditionFailed, "plane limited to q <= 128");
  auto big = std::make_shared<const FiniteField>(p, 3 * m);
  auto sub = std::make_shared<const Subfield>(big, q);
  auto plane = std::make_shared<PlaneIncidence>();
  plane->kind = PlaneKind::Projective;
  plane->q = q;
  const std::uint32_t n = q * q + q + 1;
  plane->nPoints = n;
  plane->field = sub;
  plane->coords.assign(n, {0, 0, 0});
  const FieldElement xi = big->primitive();
  const FieldElement xi2 = big->mul(xi, xi);
  auto label = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    auto z = big->add(sub->embed(a), big->add(big->mul(sub->embed(b), xi), big->mul(sub->embed(c), xi2)));
    return big->dlog(z) % n;
  };
  std::vector<char> seen(n, 0);
  auto put = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    const auto l = label(a, b, c);
    require(!seen[l], ErrorCode::InternalInvariantViolation, "Singer labels collide");
    seen[l] = 1;
    plane->coords[l] = {a, b, c};
    if (c == 0) plane->singerSet.push_back(l);
  };
  for (std::uint32_t b = 0; b < q; ++b)
    for (std::uint32_t c = 0; c < q; ++c) put(1, b, c);
  for (std::uint32_t c = 0; c < q; ++c) put(0, 1, c);
  put(0, 0, 1);
  std::sort(plane->singerSet.begin(), plane->singerSet.end());
  plane->lines.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto& line = plane->lines[i];
    for (auto d : plane->singerSet) line.push_back((d + i) % n);
    std::sort(line.begin(), line.end());
  }
  plane->provenance = "PG(2," + std::to_string(q) + ") over " + big->describe();
  return plane;
}

/// AG(2,q): points (x, y) indexed x*q + y; lines y = m x + b, then x = c.
/// The starred variant drops the origin and every line through it.
inline PlanePtr ag_incidence(std::uint32_t q, bool starred) {
  const auto [p, m] = num::require_prime_power(q);
  require(q <= 128, ErrorCode::PreconditionFailed, "plane limited to q <= 128");
  auto fld = std::make_shared<const FiniteField>(p, m);
  auto sub = std::make_shared<const Subfield>(fld, q);
  auto plane = std::make_shared<PlaneIncidence>();
  plane->kind = starred ? PlaneKind::StarredAffine : PlaneKind::Affine;
  plane->q = q;
  plane->field = sub;
  std::vector<std::int64_t> index(static_cast<std::size_t>(q) * q, -1);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y) {
      if (starred && x == 0 && y == 0) continue;
      index[static_cast<std::size_t>(x) * q + y] = plane->nPoints++;
      plane->coords.push_back({x, y, 1});
    }
  auto add_line = [&](std::vector<std::pair<std::uint32_t, std::uint32_t>> pts) {
    std::vector<std::uint32_t> line;
    for (auto [x, y] : pts) {
      const auto id = index[static_cast<std::size_t>(x) * q + y];
      if (id < 0) return;  // passes through the removed origin
      line.push_back(static_cast<std::uint32_t>(id));
    }
    std::sort(line.begin(), line.end());
    plane->lines.push_back(std::move(line));
  };
  for (std::uint32_t slope = 0; slope < q; ++slope)
    for (std::uint32_t b = 0; b < q; ++b) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> pts;
      for (std::uint32_t x = 0; x < q; ++x) pts.push_back({x, sub->add(sub->mul(slope, x), b)});
      add_line(std::move(pts));
    }
  for (std::uint32_t c = 0; c < q; ++c) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pts;
    for (std::uint32_t y = 0; y < q; ++y) pts.push_back({c, y});
    add_line(std::move(pts));
  }
  plane->provenance = std::string(starred ? "starred " : "") + "AG(2," + std::to_string(q) + ") over " + fld->describe();
  return plane;
}

/// Lines-by-points incidence matrix restricted to the given index lists.
inline IncidenceMatrix incidence_submatrix(const PlaneIncidence& plane, const std::vector<std::uint32_t>& lineIdx,
                                           const std::vector<std::uint32_t>& pointIdx) {
  std::vector<std::int64_t> col(plane.nPoints, -1);
  for (std::uint32_t j = 0; j < pointIdx.size(); ++j) col[pointIdx[j]] = j;
  IncidenceMatrix m(static_cast<std::uint32_t>(lineIdx.size()), static_cast<std::uint32_t>(pointIdx.size()));
  for (std::uint32_t i = 0; i < lineIdx.size(); ++i)
    for (auto pt : plane.lines[lineIdx[i]])
      if (col[pt] >= 0) m.set(i, static_cast<std::uint32_t>(col[pt]));
  return m;
}

// ---------------------------------------------------------------------------
// Removal families in PG(2,q)

/// Drops the s+1 selected points and lines, every line through a selected
/// point and every point on a selected line. With P on l this leaves (q^2 - qs)_{q-s}; otherwise
/// (q^2 - (q-1)s - 1)_{q-s}. Choices are the lowest valid indices.
inline IncidenceMatrix removal_family(std::uint32_t q, std::uint32_t s, bool pointOnLine) {
  require(s < q, ErrorCode::BadS, "s must be below q");
  const auto plane = pg_incidence(q);
  const auto through = plane->lines_through();
  const std::uint32_t P = 0;
  std::uint32_t ell = 0;
  while (plane->on_line(ell, P) != pointOnLine) ++ell;
  std::vector<std::uint32_t> points{P}, lines{ell};
  for (auto pt : plane->lines[ell]) {
    if (points.size() == s + 1) break;
    if (pt != P) points.push_back(pt);
  }
  if (pointOnLine) {
    for (auto l : through[P]) {
      if (lines.size() == s + 1) break;
      if (l != ell) lines.push_back(l);
    }
  } else {
    for (std::size_t i = 1; i < points.size(); ++i) {
      const auto& a = through[P];
      const auto& b = through[points[i]];
      std::uint32_t joint = UINT32_MAX;
      for (auto l : a)
        if (std::find(b.begin(), b.end(), l) != b.end()) joint = l;
      lines.push_back(joint);
    }
  }
  std::vector<char> drop_line(plane->lines.size(), 0), drop_point(plane->nPoints, 0);
  for (auto pt : points) {
    drop_point[pt] = 1;
    for (auto l : through[pt]) drop_line[l] = 1;
  }
  for (auto l : lines) {
    drop_line[l] = 1;
    for (auto pt : plane->lines[l]) drop_point[pt] = 1;
  }
  std::vector<std::uint32_t> keepL, keepP;
  for (std::uint32_t l = 0; l < plane->lines.size(); ++l)
    if (!drop_line[l]) keepL.push_back(l);
  for (std::uint32_t pt = 0; pt < plane->nPoints; ++pt)
    if (!drop_point[pt]) keepP.push_back(pt);
  auto m = incidence_submatrix(*plane, keepL, keepP);
  m.provenance.push_back("removal q=" + std::to_string(q) + " s=" + std::to_string(s) +
                         (pointOnLine ? " P on l" : " P off l"));
  return m;
}

// ---------------------------------------------------------------------------
// Point sets and Construction A

struct PointSet {
  PlanePtr plane;
  std::vector<std::uint32_t> points;  // sorted
  std::string tag;
};

inline std::uint32_t sqrt_order(std::uint32_t q) {
  require(num::is_square(q), ErrorCode::PreconditionFailed, std::to_string(q) + " is not a square");
  return static_cast<std::uint32_t>(num::isqrt(q));
}

inline void require_projective(const PlaneIncidence& plane) {
  require(plane.kind == PlaneKind::Projective, ErrorCode::PreconditionFailed, "needs a projective plane");
}

/// Points whose Singer label is j mod t.
inline PointSet singer_suborbit(const PlanePtr& plane, std::uint32_t t, std::uint32_t j) {
  require_projective(*plane);
  require(t >= 1 && plane->nPoints % t == 0, ErrorCode::PreconditionFailed, "t must divide q^2+q+1");
  PointSet ps{plane, {}, "singer-suborbit t=" + std::to_string(t) + " j=" + std::to_string(j)};
  for (std::uint32_t x = j % t; x < plane->nPoints; x += t) ps.points.push_back(x);
  return ps;
}

/// The q - sqrt(q) + 1 Baer subplanes given by Singer labels mod q - sqrt(q) + 1.
inline std::vector<PointSet> baer_partition(const PlanePtr& plane) {
  require_projective(*plane);
  const auto r = sqrt_order(plane->q);
  const std::uint32_t t = plane->q - r + 1;
  std::vector<PointSet> out;
  for (std::uint32_t j = 0; j < t; ++j) {
    auto ps = singer_suborbit(plane, t, j);
    ps.tag = "baer j=" + std::to_string(j);
    out.push_back(std::move(ps));
  }
  return out;
}

/// Union of the first c Baer subplanes.
inline PointSet baer_union(const PlanePtr& plane, std::uint32_t c) {
  const auto parts = baer_partition(plane);
  require(c >= 1 && c <= parts.size(), ErrorCode::PreconditionFailed, "c out of range");
  PointSet ps{plane, {}, "baer-union c=" + std::to_string(c)};
  for (std::uint32_t i = 0; i < c; ++i) ps.points.insert(ps.points.end(), parts[i].points.begin(), parts[i].points.end());
  std::sort(ps.points.begin(), ps.points.end());
  return ps;
}

/// Points of y^2 = xz.
inline std::vector<std::uint32_t> conic_points(const PlaneIncidence& plane) {
  require_projective(plane);
  require(plane.q % 2 == 1, ErrorCode::PreconditionFailed, "conic classes need q odd");
  const auto& F = *plane.field;
  std::vector<std::uint32_t> out;
  for (std::uint32_t pt = 0; pt < plane.nPoints; ++pt) {
    const auto [x, y, z] = plane.coords[pt];
    if (F.mul(y, y) == F.mul(x, z)) out.push_back(pt);
  }
  return out;
}

namespace detail {

// Number of tangent lines through each point (tangent = one conic point).
inline std::vector<std::uint32_t> tangent_counts(const PlaneIncidence& plane, const std::vector<std::uint32_t>& conic) {
  std::vector<char> on(plane.nPoints, 0);
  for (auto pt : conic) on[pt] = 1;
  std::vector<std::uint32_t> count(plane.nPoints, 0);
  for (const auto& line : plane.lines) {
    std::uint32_t hits = 0;
    for (auto pt : line) hits += on[pt];
    if (hits == 1)
      for (auto pt : line) ++count[pt];
  }
  for (auto pt : conic) count[pt] = UINT32_MAX;
  return count;
}

inline PointSet conic_class(const PlanePtr& plane, std::uint32_t tangents, const char* tag) {
  const auto conic = conic_points(*plane);
  const auto count = tangent_counts(*plane, conic);
  PointSet ps{plane, {}, tag};
  for (std::uint32_t pt = 0; pt < plane->nPoints; ++pt)
    if (count[pt] == tangents) ps.points.push_back(pt);
  return ps;
}

}  // namespace detail

/// Off-conic points on two tangents; q(q+1)/2 of them.
inline PointSet conic_external(const PlanePtr& plane) { return detail::conic_class(plane, 2, "conic-external"); }

/// Off-conic points on no tangent; q(q-1)/2 of them.
inline PointSet conic_internal(const PlanePtr& plane) { return detail::conic_class(plane, 0, "conic-internal"); }

/// Points of x^(r+1) + y^(r+1) + z^(r+1) = 0, r = sqrt(q).
inline std::vector<std::uint32_t> hermitian_points(const PlaneIncidence& plane) {
  require_projective(plane);
  const auto r = sqrt_order(plane.q);
  const auto& F = *plane.field;
  std::vector<std::uint32_t> out;
  for (std::uint32_t pt = 0; pt < plane.nPoints; ++pt) {
    const auto [x, y, z] = plane.coords[pt];
    if (F.add(F.add(F.pow(x, r + 1), F.pow(y, r + 1)), F.pow(z, r + 1)) == 0) out.push_back(pt);
  }
  return out;
}

inline PointSet hermitian_complement(const PlanePtr& plane) {
  const auto curve = hermitian_points(*plane);
  PointSet ps{plane, {}, "hermitian-complement"};
  std::size_t c = 0;
  for (std::uint32_t pt = 0; pt < plane->nPoints; ++pt) {
    if (c < curve.size() && curve[c] == pt) {
      ++c;
      continue;
    }
    ps.points.push_back(pt);
  }
  return ps;
}

struct ConstructionA {
  IncidenceMatrix matrix;  // lines meeting the set in k points, by points of the set
  bool symmetric = false;
  std::uint32_t rk = 0;    // lines through each point
  std::uint32_t v = 0, b = 0, k = 0;
};

/// Points of P with the lines meeting P in exactly k points.
inline ConstructionA construction_a(const PointSet& ps, std::uint32_t k) {
  const auto& plane = *ps.plane;
  std::vector<char> in(plane.nPoints, 0);
  for (auto pt : ps.points) in[pt] = 1;
  std::vector<std::uint32_t> chosen;
  for (std::uint32_t l = 0; l < plane.lines.size(); ++l) {
    std::uint32_t hits = 0;
    for (auto pt : plane.lines[l]) hits += in[pt];
    if (hits == k) chosen.push_back(l);
  }
  require(!chosen.empty(), ErrorCode::EmptyLineSet, "no line meets the set in exactly " + std::to_string(k) + " points");
  ConstructionA out;
  out.matrix = incidence_submatrix(plane, chosen, ps.points);
  const auto cols = out.matrix.column_supports();
  out.rk = static_cast<std::uint32_t>(cols.front().size());
  for (const auto& c : cols)
    require(c.size() == out.rk, ErrorCode::NotConstant, "lines per point vary; not an orbit");
  out.v = static_cast<std::uint32_t>(ps.points.size());
  out.b = static_cast<std::uint32_t>(chosen.size());
  out.k = k;
  out.symmetric = out.rk == k && out.v == out.b;
  out.matrix.provenance.push_back("construction-a " + ps.tag + " k=" + std::to_string(k) + " in " + plane.provenance);
  return out;
}

// ---------------------------------------------------------------------------

/// Orbit weights of the starred affine plane for t | q^2 - 1, read off the
/// line x = 1 in coordinates z = x + omega y, omega = xi^((q+1)/2):
/// w_h = #{y : dlog(1 + omega y) = h mod t}. q odd.
inline std::vector<std::uint32_t> starred_affine_line_weights(std::uint32_t q, std::uint32_t t) {
  const auto [p, m] = num::require_prime_power(q);
  require(q % 2 == 1, ErrorCode::PreconditionFailed, "needs q odd");
  require(t >= 1 && (q * q - 1) % t == 0, ErrorCode::NotADivisor, "t must divide q^2 - 1");
  auto big = std::make_shared<const FiniteField>(p, 2 * m);
  const Subfield sub(big, q);
  const auto omega = big->antilog((q + 1) / 2);
  std::vector<std::uint32_t> w(t, 0);
  for (std::uint32_t y = 0; y < q; ++y) {
    const auto z = big->add(big->one(), big->mul(omega, sub.embed(y)));
    ++w[big->dlog(z) % t];
  }
  return w;
}

}  // namespace configura
