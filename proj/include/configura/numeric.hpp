#pragma once

// Small integer helpers shared by every module.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "configura/error.hpp"

namespace configura::num {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

/// Distinct prime factors in increasing order.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Returns (p, m) with q = p^m, or nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto fs = prime_factors(q);
  if (fs.size() != 1) return std::nullopt;
  std::uint32_t m = 0;
  while (q > 1) {
    q /= fs[0];
    ++m;
  }
  return std::make_pair(static_cast<std::uint32_t>(fs[0]), m);
}

inline std::pair<std::uint32_t, std::uint32_t> require_prime_power(std::uint64_t q) {
  auto pm = prime_power(q);
  if (!pm) fail(ErrorCode::NotPrimePower, std::to_string(q) + " is not a prime power");
  return *pm;
}

inline std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

inline std::uint64_t isqrt(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(std::uint64_t n) {
  auto r = isqrt(n);
  return r * r == n;
}

__extension__ using u128 = unsigned __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    t = std::exchange(nt, t - q * nt);
    r = std::exchange(nr, r - q * nr);
  }
  if (r != 1) return std::nullopt;
  return static_cast<std::uint64_t>(mod(t, static_cast<std::int64_t>(m)));
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (auto p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

inline std::vector<std::uint32_t> units_mod(std::uint32_t v) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 1; m < v; ++m)
    if (std::gcd(m, v) == 1) out.push_back(m);
  if (v == 1) out.push_back(0);
  return out;
}

inline std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline bool is_primitive_root(std::uint64_t g, std::uint64_t p) {
  if (g % p == 0) return false;
  if (p == 2) return g % 2 == 1;
  for (auto f : prime_factors(p - 1))
    if (powmod(g, (p - 1) / f, p) == 1) return false;
  return true;
}

inline std::uint32_t smallest_primitive_root(std::uint32_t p) {
  require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  for (std::uint32_t g = 1; g < p || p == 2; ++g)
    if (is_primitive_root(g, p)) return g;
  fail(ErrorCode::InternalInvariantViolation, "no primitive root mod " + std::to_string(p));
}

}  // namespace configura::num
