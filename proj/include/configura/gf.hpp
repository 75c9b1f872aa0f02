#pragma once

// GF(p^m) with eagerly built log/antilog tables.
//
// Elements are packed as base-p integers: the coefficient of x^i is the i-th
// base-p digit. The primitive element is x for m > 1 and the smallest
// primitive root g for m = 1.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "configura/error.hpp"
#include "configura/numeric.hpp"

namespace configura {

struct FieldElement {
  std::uint32_t code = 0;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

namespace detail {

using Poly = std::vector<std::uint64_t>;  // low-to-high coefficients

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = *num::inverse_mod(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) a[shift + i] = (a[shift + i] + (p - c) * f[i]) % p;
    trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), f, p);
}

inline Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// No factor of degree <= m/2 means irreducible.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t m = f.size() - 1;
  Poly h{0, 1};
  for (std::size_t i = 1; i <= m / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    Poly g = h;
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;
    trim(g);
    if (g.empty()) return false;
    if (poly_gcd(f, g, p).size() > 1) return false;
  }
  return true;
}

}  // namespace detail

class FiniteField {
 public:
  FiniteField(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
    require(num::is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    require(m >= 1, ErrorCode::PreconditionFailed, "extension degree must be >= 1");
    const long double size = std::pow(static_cast<long double>(p), static_cast<long double>(m));
    require(size <= 2147483648.0L, ErrorCode::PreconditionFailed, "field larger than 2^31");
    q_ = static_cast<std::uint32_t>(num::ipow(p, m));
    pick_modulus();
    build_tables();
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t m() const noexcept { return m_; }
  std::uint32_t q() const noexcept { return q_; }
  /// Monic modulus, low-to-high, length m+1.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
  FieldElement primitive() const noexcept { return {antilog_.size() > 1 ? antilog_[1] : 1U}; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }
  FieldElement element(std::uint32_t code) const {
    require(code < q_, ErrorCode::PreconditionFailed, "element code out of range");
    return {code};
  }
  /// Embeds an integer of the prime field.
  FieldElement constant(std::uint64_t c) const noexcept { return {static_cast<std::uint32_t>(c % p_)}; }

  FieldElement from_coeffs(const std::vector<std::uint32_t>& c) const {
    require(c.size() <= m_, ErrorCode::PreconditionFailed, "too many coefficients");
    std::uint32_t code = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      require(c[i] < p_, ErrorCode::PreconditionFailed, "coefficient out of range");
      code = code * p_ + c[i];
    }
    return {code};
  }

  std::vector<std::uint32_t> coeffs(FieldElement x) const {
    std::vector<std::uint32_t> c(m_);
    for (std::uint32_t i = 0; i < m_; ++i) {
      c[i] = x.code % p_;
      x.code /= p_;
    }
    return c;
  }

  FieldElement add(FieldElement a, FieldElement b) const noexcept {
    if (p_ == 2) return {a.code ^ b.code};
    if (m_ == 1) return {(a.code + b.code) % p_};
    std::uint32_t out = 0, scale = 1;
    while (a.code || b.code) {
      out += ((a.code % p_ + b.code % p_) % p_) * scale;
      a.code /= p_;
      b.code /= p_;
      scale *= p_;
    }
    return {out};
  }

  FieldElement neg(FieldElement a) const noexcept {
    if (p_ == 2) return a;
    std::uint32_t out = 0, scale = 1;
    while (a.code) {
      out += ((p_ - a.code % p_) % p_) * scale;
      a.code /= p_;
      scale *= p_;
    }
    return {out};
  }

  FieldElement sub(FieldElement a, FieldElement b) const noexcept { return add(a, neg(b)); }

  FieldElement mul(FieldElement a, FieldElement b) const noexcept {
    if (a.code == 0 || b.code == 0) return {0};
    std::uint64_t e = static_cast<std::uint64_t>(log_[a.code]) + log_[b.code];
    if (e >= q_ - 1) e -= q_ - 1;
    return {antilog_[e]};
  }

  FieldElement inv(FieldElement a) const {
    require(a.code != 0, ErrorCode::ZeroElement, "inverse of zero");
    const std::uint32_t l = log_[a.code];
    return {antilog_[l == 0 ? 0 : q_ - 1 - l]};
  }

  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

  FieldElement pow(FieldElement a, std::uint64_t e) const noexcept {
    if (e == 0) return {1};
    if (a.code == 0) return {0};
    return {antilog_[(static_cast<std::uint64_t>(log_[a.code]) * (e % (q_ - 1))) % (q_ - 1)]};
  }

  std::uint32_t dlog(FieldElement x) const {
    require(x.code != 0 && x.code < q_, ErrorCode::ZeroElement, "discrete log of zero");
    return log_[x.code];
  }

  FieldElement antilog(std::uint64_t i) const noexcept { return {antilog_[i % (q_ - 1)]}; }

  /// Membership in the subfield GF(p^r).
  bool in_subfield(FieldElement x, std::uint32_t r) const {
    require(r >= 1 && m_ % r == 0, ErrorCode::NotASubfield,
            std::to_string(r) + " does not divide " + std::to_string(m_));
    if (x.code == 0) return true;
    const std::uint64_t step = (q_ - 1) / (num::ipow(p_, r) - 1);
    return log_[x.code] % step == 0;
  }

  std::string describe() const {
    std::string s = "GF(" + std::to_string(p_) + "^" + std::to_string(m_) + ") mod [";
    for (std::size_t i = 0; i < modulus_.size(); ++i) s += (i ? "," : "") + std::to_string(modulus_[i]);
    return s + "]";
  }

 private:
  void pick_modulus() {
    if (m_ == 1) {
      const std::uint32_t g = num::smallest_primitive_root(p_);
      modulus_ = {(p_ - g) % p_, 1};
      return;
    }
    const auto order_factors = num::prime_factors(q_ - 1);
    const std::uint64_t lo = num::ipow(p_, m_ - 1);
    const std::uint64_t hi = static_cast<std::uint64_t>(q_);
    for (std::uint64_t n = lo; n < hi; ++n) {
      // c0 is the most significant digit of n.
      detail::Poly f(m_ + 1, 0);
      std::uint64_t rest = n;
      for (std::uint32_t i = m_; i-- > 0;) {
        f[i] = rest % p_;
        rest /= p_;
      }
      f[m_] = 1;
      const detail::Poly x{0, 1};
      if (detail::poly_powmod(x, q_ - 1, f, p_) != detail::Poly{1}) continue;
      bool primitive = true;
      for (auto r : order_factors) {
        if (detail::poly_powmod(x, (q_ - 1) / r, f, p_) == detail::Poly{1}) {
          primitive = false;
          break;
        }
      }
      if (!primitive || !detail::is_irreducible(f, p_)) continue;
      modulus_.assign(f.begin(), f.end());
      return;
    }
    fail(ErrorCode::InternalInvariantViolation, "no primitive modulus found");
  }

  void build_tables() {
    log_.assign(q_, 0);
    antilog_.assign(q_ - 1, 0);
    std::vector<std::uint32_t> digits(m_, 0);
    digits[0] = 1;
    const std::uint32_t g = m_ == 1 ? (p_ - modulus_[0]) % p_ : 0;
    if (q_ == 2) {
      antilog_[0] = 1;
      log_[1] = 0;
      return;
    }
    for (std::uint32_t i = 0; i + 1 < q_; ++i) {
      std::uint32_t code = 0;
      for (std::uint32_t j = m_; j-- > 0;) code = code * p_ + digits[j];
      require(code != 0 && (i == 0 || code != 1), ErrorCode::InternalInvariantViolation,
              "primitive element has short order");
      antilog_[i] = code;
      log_[code] = i;
      if (m_ == 1) {
        digits[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(digits[0]) * g % p_);
      } else {
        const std::uint32_t top = digits[m_ - 1];
        for (std::uint32_t j = m_ - 1; j > 0; --j) digits[j] = digits[j - 1];
        digits[0] = 0;
        for (std::uint32_t j = 0; j < m_; ++j)
          digits[j] = static_cast<std::uint32_t>((digits[j] + static_cast<std::uint64_t>(p_ - modulus_[j]) * top) % p_);
      }
    }
  }

  std::uint32_t p_, m_, q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> antilog_;
};

inline FiniteField field_new(std::uint32_t p, std::uint32_t m) { return FiniteField(p, m); }

}  // namespace configura
