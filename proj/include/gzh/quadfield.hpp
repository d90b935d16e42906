#pragma once

// Imaginary quadratic fields of odd fundamental discriminant D < 0: reduced
// forms (one per ideal class), ideal-norm counts, and the genus-character
// divisor sums at the principal class.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gzh/arith.hpp"
#include "gzh/error.hpp"

namespace gzh {

struct QuadraticForm {
  i64 a = 1, b = 1, c = 1;

  i64 discriminant() const { return b * b - 4 * a * c; }
  i64 operator()(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
};

struct FundamentalDiscriminant {
  i64 D = -3;
  i64 h = 1;  // class number
  i64 u = 3;  // half the number of units

  i64 abs() const { return -D; }
  QuadraticForm principal_form() const { return {1, 1, (1 - D) / 4}; }
};

struct ClassGroupData {
  FundamentalDiscriminant disc;
  std::vector<QuadraticForm> forms;  // ascending (a, b)
  std::size_t principal_index = 0;
};

namespace detail {

inline std::vector<QuadraticForm> enumerate_reduced_forms(i64 D) {
  std::vector<QuadraticForm> out;
  const i64 a_max = isqrt(-D / 3);
  for (i64 a = 1; a <= a_max; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (mod_floor(b - D, 2) != 0) continue;
      const i64 num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

}  // namespace detail

inline FundamentalDiscriminant make_discriminant(i64 D) {
  if (D >= 0) throw InvalidArgument("D < 0 violated (D = " + std::to_string(D) + ")");
  if (mod_floor(D, 4) != 1)
    throw InvalidArgument("D ≡ 1 (mod 4) violated (D = " + std::to_string(D) + ")");
  if (!is_squarefree(D)) throw InvalidArgument("D squarefree violated (D = " + std::to_string(D) + ")");
  FundamentalDiscriminant disc;
  disc.D = D;
  disc.u = D == -3 ? 3 : 1;
  disc.h = static_cast<i64>(detail::enumerate_reduced_forms(D).size());
  return disc;
}

inline ClassGroupData reduced_forms(const FundamentalDiscriminant& disc) {
  ClassGroupData data;
  data.disc = disc;
  data.forms = detail::enumerate_reduced_forms(disc.D);
  const QuadraticForm principal = disc.principal_form();
  // reduced principal form is (1, 1, (1-D)/4) and a = 1 sorts it first
  for (std::size_t i = 0; i < data.forms.size(); ++i)
    if (data.forms[i] == principal) data.principal_index = i;
  if (static_cast<i64>(data.forms.size()) != disc.h || data.forms[data.principal_index] != principal)
    throw InternalError("reduced_forms: class data inconsistent with discriminant record");
  return data;
}

// Smallest |y| bound containing every solution of f(x, y) = n for a
// positive-definite form: 4a*n = (2ax + by)^2 + |D| y^2.
inline i64 rep_search_radius(const QuadraticForm& f, i64 n) {
  return isqrt(4 * f.a * n / (-f.discriminant()));
}

// Number of integer pairs (x, y) with f(x, y) = n. `y_radius` may be enlarged
// past the proven bound; the count must not change.
inline i64 rep_count(const QuadraticForm& f, i64 n, i64 y_radius = -1) {
  if (n < 0) return 0;
  if (n == 0) return 1;
  const i64 D = f.discriminant();
  if (y_radius < 0) y_radius = rep_search_radius(f, n);
  i64 count = 0;
  for (i64 y = -y_radius; y <= y_radius; ++y) {
    // a x^2 + (b y) x + (c y^2 - n) = 0  ->  disc = 4 a n + D y^2
    const i64 disc = 4 * f.a * n + D * y * y;
    i64 s = 0;
    if (!is_square(disc, &s)) continue;
    for (const i64 num : {-f.b * y + s, -f.b * y - s}) {
      if (num % (2 * f.a) == 0) ++count;
      if (s == 0) break;
    }
  }
  return count;
}

// r_{O_k}(n): ideals of norm n in the principal class.
inline i64 rep_count_principal(const FundamentalDiscriminant& disc, i64 n) {
  if (n < 1) throw InvalidArgument("rep_count_principal: n must be >= 1");
  const i64 solutions = rep_count(disc.principal_form(), n);
  if (solutions % (2 * disc.u) != 0)
    throw InternalError("rep_count_principal: automorph division not exact");
  return solutions / (2 * disc.u);
}

// Ideals of norm n summed over all classes.
inline i64 ideal_count_total(const ClassGroupData& cg, i64 n) {
  if (n < 1) throw InvalidArgument("ideal_count_total: n must be >= 1");
  i64 total = 0;
  for (const auto& f : cg.forms) {
    const i64 solutions = rep_count(f, n);
    if (solutions % (2 * cg.disc.u) != 0)
      throw InternalError("ideal_count_total: automorph division not exact");
    total += solutions / (2 * cg.disc.u);
  }
  return total;
}

inline i64 ideal_count_total(const FundamentalDiscriminant& disc, i64 n) {
  return ideal_count_total(reduced_forms(disc), n);
}

// Sign attached to the level inside ε_{D2}(∓N·n/d).
//  kResidueConsistent: ε_{D2}(+N·n/d). The mean of σ(n)·r(|D|+nN) then matches
//    the residue hκ of the spectral series (checked numerically in the tests).
//  kLiteral: ε_{D2}(−N·n/d), exactly as the pairing formula is usually typeset.
enum class EpsilonConvention { kResidueConsistent, kLiteral };

struct GenusSplit {
  i64 D1 = 1, D2 = 1;
};

// D = D1·D2 with |D2| = gcd(d, D) and D2 ≡ 1 (mod 4). D is odd, so exactly one
// sign of gcd(d, D) is ≡ 1 (mod 4).
inline GenusSplit genus_split(const FundamentalDiscriminant& disc, i64 d) {
  const i64 g = std::gcd(d, disc.abs());
  const i64 D2 = mod_floor(g, 4) == 1 ? g : -g;
  return {disc.D / D2, D2};
}

inline int eps_genus(const FundamentalDiscriminant& disc, i64 N, i64 n, i64 d,
                     EpsilonConvention conv = EpsilonConvention::kResidueConsistent) {
  if (d <= 0 || n <= 0 || n % d != 0)
    throw InvalidArgument("eps_genus: d must be a positive divisor of n");
  if (std::gcd(N < 0 ? -N : N, disc.abs()) != 1)
    throw InvalidArgument("eps_genus: N must be coprime to D");
  const i64 cofactor = n / d;
  if (std::gcd(std::gcd(d, cofactor), disc.abs()) > 1) return 0;
  const auto [D1, D2] = genus_split(disc, d);
  const i64 level = conv == EpsilonConvention::kLiteral ? -N : N;
  return kronecker(D1, d) * kronecker(D2, level * cofactor);
}

inline i64 sigma_principal(const FundamentalDiscriminant& disc, i64 N, i64 n,
                           EpsilonConvention conv = EpsilonConvention::kResidueConsistent) {
  i64 s = 0;
  for (i64 d : divisors(n)) s += eps_genus(disc, N, n, d, conv);
  return s;
}

inline double sigma_prime_principal(const FundamentalDiscriminant& disc, i64 N, i64 n,
                                    EpsilonConvention conv = EpsilonConvention::kResidueConsistent) {
  double s = 0.0;
  const double log_n = std::log(static_cast<double>(n));
  for (i64 d : divisors(n)) {
    const int e = eps_genus(disc, N, n, d, conv);
    if (e != 0) s += e * (log_n - 2.0 * std::log(static_cast<double>(d)));
  }
  return s;
}

}  // namespace gzh
