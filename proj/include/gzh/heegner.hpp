#pragma once

// Levels N admitting Heegner points for a fixed imaginary quadratic field:
// squarefree N prime to 6 with D a square mod 4N. Also the genus of X0(N) and
// the constant κ_N.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gzh/arith.hpp"
#include "gzh/error.hpp"
#include "gzh/quadfield.hpp"
#include "gzh/real_with_error.hpp"

namespace gzh {

inline bool is_admissible_level(i64 N) {
  return N >= 1 && std::gcd(N, i64{6}) == 1 && is_squarefree(N);
}

inline void require_admissible_level(i64 N, const char* who) {
  if (N < 1) throw InvalidArgument(std::string(who) + ": N must be positive");
  if (std::gcd(N, i64{6}) != 1)
    throw InvalidArgument(std::string(who) + ": N coprime to 6 violated (N = " + std::to_string(N) + ")");
  if (!is_squarefree(N))
    throw InvalidArgument(std::string(who) + ": N squarefree violated (N = " + std::to_string(N) + ")");
}

// κ_N = −12 / (N ∏_{p|N} (1 + 1/p)) = −12 / ∏_{p|N} (p + 1) for squarefree N.
inline Rational kappa(i64 N) {
  if (N < 1 || !is_squarefree(N)) throw InvalidArgument("kappa: N must be squarefree");
  i64 denom = 1;
  for (i64 p : factorize(N).primes()) denom *= p + 1;
  return Rational(-12, denom);
}

// Genus of X0(N) for squarefree N:
//   g = 1 + N/12 ∏(1+1/p) − 1/4 ∏(1+(−4/p)) − 1/3 ∏(1+(−3/p)) − τ(N)/2.
// (−4/p) agrees with (−1/p) for odd p and gives 0 at p = 2.
// Evaluated as 12g in integers.
inline i64 genus_X0(i64 N) {
  if (N < 1 || !is_squarefree(N)) throw InvalidArgument("genus_X0: N must be squarefree");
  i64 index = 1, nu2 = 1, nu3 = 1;
  for (i64 p : factorize(N).primes()) {
    index *= p + 1;
    nu2 *= 1 + kronecker(-4, p);
    nu3 *= 1 + kronecker(-3, p);
  }
  const i64 twelve_g = 12 + index - 3 * nu2 - 4 * nu3 - 6 * tau(N);
  if (twelve_g % 12 != 0)
    throw InternalError("genus_X0: non-integral genus for N = " + std::to_string(N));
  const i64 g = twelve_g / 12;
  if (g < 0) throw InternalError("genus_X0: negative genus for N = " + std::to_string(N));
  return g;
}

// ∏_{p|N} (1 + 1/p), the index factor in N/12 ∏(1+1/p).
inline double index_factor(i64 N) {
  double prod = 1.0;
  for (i64 p : factorize(N).primes()) prod *= 1.0 + 1.0 / static_cast<double>(p);
  return prod;
}

// Level data used by the height terms; carries no Heegner condition.
struct Level {
  i64 N = 1;
  std::vector<i64> primes;
  Rational kappa;
  i64 genus = 0;
};

inline Level make_level(const FundamentalDiscriminant& disc, i64 N) {
  require_admissible_level(N, "level");
  if (std::gcd(N, disc.abs()) != 1)
    throw InvalidArgument("level: gcd(N, D) = 1 violated (N = " + std::to_string(N) + ")");
  return {N, factorize(N).primes(), kappa(N), genus_X0(N)};
}

// All β in [0, 2N) with β² ≡ D (mod 4N). Throws on inadmissible N; an empty
// result means N is admissible but not a Heegner level.
inline std::vector<i64> solve_beta(const FundamentalDiscriminant& disc, i64 N) {
  require_admissible_level(N, "solve_beta");
  if (std::gcd(N, disc.abs()) != 1)
    throw InvalidArgument("solve_beta: gcd(N, D) = 1 violated (N = " + std::to_string(N) + ")");
  const i64 modulus = 4 * N;
  const i64 target = mod_floor(disc.D, modulus);
  std::vector<i64> out;
  for (i64 beta = 0; beta < 2 * N; ++beta)
    if ((beta * beta) % modulus == target) out.push_back(beta);
  return out;
}

inline bool is_heegner_level(const FundamentalDiscriminant& disc, i64 N) {
  if (!is_admissible_level(N) || std::gcd(N, disc.abs()) != 1) return false;
  return !solve_beta(disc, N).empty();
}

struct HeegnerLevel {
  Level level;
  FundamentalDiscriminant disc;
  std::vector<i64> betas;  // every square root of D mod 4N in [0, 2N)

  i64 N() const { return level.N; }
  i64 beta() const { return betas.front(); }
};

inline HeegnerLevel make_heegner_level(const FundamentalDiscriminant& disc, i64 N) {
  HeegnerLevel hl{make_level(disc, N), disc, solve_beta(disc, N)};
  if (hl.betas.empty())
    throw InvalidArgument("N = " + std::to_string(N) + " is not a Heegner level: D = " +
                          std::to_string(disc.D) + " is not a square mod 4N");
  for (i64 b : hl.betas)
    if (mod_floor(b * b - disc.D, 4 * N) != 0) throw InternalError("make_heegner_level: bad β");
  return hl;
}

// Heegner levels 2 <= N <= N_max in ascending order. N = 1 (trivial Jacobian)
// is left out.
inline std::vector<i64> enum_levels(const FundamentalDiscriminant& disc, i64 N_max) {
  std::vector<i64> out;
  for (i64 N = 2; N <= N_max; ++N)
    if (is_heegner_level(disc, N)) out.push_back(N);
  return out;
}

}  // namespace gzh
