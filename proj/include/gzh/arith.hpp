#pragma once

// Elementary multiplicative number theory on 64-bit integers: prime sieve,
// trial-division factorization, divisor functions and the Kronecker symbol.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gzh/error.hpp"

namespace gzh {

using i64 = std::int64_t;

struct PrimePower {
  i64 prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  i64 n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing

  i64 product() const {
    i64 acc = 1;
    for (const auto& [p, e] : factors)
      for (int i = 0; i < e; ++i) acc *= p;
    return acc;
  }
  std::vector<i64> primes() const {
    std::vector<i64> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

inline std::vector<i64> primes_up_to(i64 x) {
  if (x < 2) return {};
  std::vector<bool> composite(static_cast<std::size_t>(x) + 1, false);
  std::vector<i64> out;
  for (i64 p = 2; p <= x; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (i64 q = p * p; q <= x; q += p) composite[q] = true;
  }
  return out;
}

namespace detail {

inline constexpr i64 kSieveLimit = i64{1} << 20;

// Built on first use, read-only afterwards (static-local init is thread safe).
inline const std::vector<i64>& small_primes() {
  static const std::vector<i64> primes = primes_up_to(kSieveLimit);
  return primes;
}

}  // namespace detail

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : detail::small_primes()) {
    if (p * p > n) return true;
    if (n % p == 0) return n == p;
  }
  for (i64 d = detail::kSieveLimit + 1; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline Factorization factorize(i64 n) {
  if (n <= 0) throw InvalidArgument("factorize: n must be positive, got " + std::to_string(n));
  Factorization f;
  f.n = n;
  auto take = [&](i64 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  };
  for (i64 p : detail::small_primes()) {
    if (p > n / p) break;
    take(p);
  }
  if (n > 1 && n > detail::kSieveLimit * detail::kSieveLimit) {
    // cofactor may still be composite with prime factors above the sieve
    for (i64 d = detail::kSieveLimit + 1; d <= n / d; d += 2) take(d);
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

inline std::vector<i64> divisors(const Factorization& f) {
  std::vector<i64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<i64> divisors(i64 n) { return divisors(factorize(n)); }

inline i64 tau(i64 n) {
  i64 t = 1;
  for (const auto& pe : factorize(n).factors) t *= pe.exponent + 1;
  return t;
}

inline i64 sigma1(i64 m) {
  i64 s = 1;
  for (const auto& [p, e] : factorize(m).factors) {
    i64 term = 1, pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      term += pk;
    }
    s *= term;
  }
  return s;
}

inline int omega(i64 n) { return static_cast<int>(factorize(n).factors.size()); }

inline bool is_squarefree(i64 n) {
  if (n == 0) return false;
  if (n < 0) n = -n;
  for (const auto& pe : factorize(n).factors)
    if (pe.exponent > 1) return false;
  return true;
}

// Jacobi symbol (a/n) for odd n > 0.
inline int jacobi(i64 a, i64 n) {
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const i64 r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// Kronecker symbol (a/b), completely multiplicative in b.
// Conventions: (a/0) = 1 if a = ±1 else 0; (a/-1) = -1 if a < 0 else 1;
// (a/2) = 0 for even a, +1 for a = ±1 mod 8, -1 for a = ±3 mod 8.
inline int kronecker(i64 a, i64 b) {
  if (a == 0 && b == 0) throw InvalidArgument("kronecker: (0/0) is undefined");
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (b < 0) {
    b = -b;
    if (a < 0) result = -result;
  }
  int twos = 0;
  while ((b & 1) == 0) {
    b >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((a & 1) == 0) return 0;
    const i64 r = ((a % 8) + 8) % 8;
    if ((twos & 1) && (r == 3 || r == 5)) result = -result;
  }
  if (b == 1) return result;
  return result * jacobi(a, b);
}

// floor(sqrt(n)) for n >= 0, exact for the whole int64 range.
inline i64 isqrt(i64 n) {
  if (n < 0) throw InvalidArgument("isqrt: negative argument");
  auto r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

inline bool is_square(i64 n, i64* root = nullptr) {
  if (n < 0) return false;
  const i64 r = isqrt(n);
  if (root) *root = r;
  return r * r == n;
}

inline i64 mod_floor(i64 a, i64 m) {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace gzh
