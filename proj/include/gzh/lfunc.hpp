#pragma once

// Special functions and L-series numerics:
//  * Legendre function of the second kind Q_{s-1}(t) via its integral
//    representation (double-exponential quadrature) and via the
//    hypergeometric expansion in 1/t² (fast path for the spectral series);
//  * Dirichlet L(s, ε_D) with ε_D(n) = (D/n), and L'/L(1, ε_D);
//  * ζ(s), ζ'/ζ(2) and Euler's constant γ.
//
// L-series are summed per residue class mod |D| with an Euler–Maclaurin tail
// per class. Each full period of ε_D sums to zero, which cancels the divergent
// part of the per-class tail integrals; the cutoff is doubled until two
// consecutive values agree.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gzh/arith.hpp"
#include "gzh/error.hpp"
#include "gzh/quadfield.hpp"
#include "gzh/real_with_error.hpp"

namespace gzh {

namespace detail {

// B_{2j} / (2j)! for j = 1..6.
inline constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
};

// expm1(e·x)/e, continuous at e = 0.
inline double expm1_ratio(double e, double x) {
  if (e == 0.0) return x;
  return std::expm1(e * x) / e;
}

// r-th derivative of y^{-s} (log y)^L, L ∈ {0, 1}:
//   (−1)^r (s)_r y^{−s−r} [log y − Σ_{i<r} 1/(s+i)]  (L = 1)
//   (−1)^r (s)_r y^{−s−r}                            (L = 0)
inline double power_log_derivative(double y, double s, int r, bool with_log) {
  double poch = 1.0, harmonic = 0.0;
  for (int i = 0; i < r; ++i) {
    poch *= s + i;
    harmonic += 1.0 / (s + i);
  }
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  const double base = sign * poch * std::pow(y, -s - r);
  return with_log ? base * (std::log(y) - harmonic) : base;
}

// Euler–Maclaurin boundary correction for Σ_{k>=K} g(Y + (k−K) q) without the
// integral term: g(Y)/2 − Σ_j B_{2j}/(2j)! q^{2j−1} g^{(2j−1)}(Y).
inline double em_boundary(double Y, double q, double s, bool with_log) {
  const double g0 = with_log ? std::pow(Y, -s) * std::log(Y) : std::pow(Y, -s);
  double corr = 0.5 * g0;
  double qpow = q;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const int r = 2 * static_cast<int>(j) + 1;
    corr -= kBernoulliOverFactorial[j] * qpow * power_log_derivative(Y, s, r, with_log);
    qpow *= q * q;
  }
  return corr;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Legendre Q

// ∫_0^∞ f(u) du for f smooth on [0, ∞) with exponential decay, using the
// substitution u = exp(x − e^{−x}) and trapezoidal refinement until two
// consecutive levels agree to `rel_tol`.
inline RealWithError de_quad_half_line(const std::function<double(double)>& f, double rel_tol,
                                       int max_level = 12) {
  constexpr double kLo = -5.0, kHi = 6.5;
  auto node = [&](double x) {
    const double em = std::exp(-x);
    const double u = std::exp(x - em);
    return f(u) * u * (1.0 + em);
  };
  double step = 0.5;
  double sum = 0.0;
  for (double x = kLo; x <= kHi + 1e-12; x += step) sum += node(x);
  double estimate = sum * step;
  for (int level = 1; level <= max_level; ++level) {
    const double half = step / 2.0;
    for (double x = kLo + half; x < kHi; x += step) sum += node(x);
    step = half;
    const double refined = sum * step;
    const double diff = std::abs(refined - estimate);
    estimate = refined;
    if (level >= 3 && diff <= rel_tol * std::abs(refined))
      return {refined, std::max(diff, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(refined)),
              ErrorKind::kHeuristic};
  }
  throw NumericalError("de_quad_half_line: tolerance " + std::to_string(rel_tol) + " not reached");
}

inline void require_legendre_domain(double s, double t) {
  if (!(s > 0.0)) throw InvalidArgument("legendre_Q: s > 0 required");
  if (!(t > 1.0)) throw InvalidArgument("legendre_Q: t > 1 required");
}

// Q_{s−1}(t) = ∫_0^∞ (t + √(t²−1) cosh u)^{−s} du.
inline RealWithError legendre_Q(double s, double t, double rel_tol = 1e-12) {
  require_legendre_domain(s, t);
  const double root = std::sqrt((t - 1.0) * (t + 1.0));
  return de_quad_half_line([=](double u) { return std::pow(t + root * std::cosh(u), -s); }, rel_tol);
}

// Q_0(t) = ½ log((t+1)/(t−1)).
inline double legendre_Q0_closed(double t) { return 0.5 * std::log1p(2.0 / (t - 1.0)); }

namespace detail {

// √π Γ(s) / Γ(s + ½) 2^{−s}
inline double legendre_prefactor(double s) {
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(s) - std::lgamma(s + 0.5) -
                  s * std::numbers::ln2);
}

// Coefficients of ₂F₁(s/2, (s+1)/2; s+½; z) until they drop under `cutoff`·z^{-k}
// relative to the running sum. Calls visit(k, c_k) for every kept term.
template <class Visit>
inline void legendre_hypergeometric_terms(double s, double z, Visit&& visit) {
  double c = 1.0, zk = 1.0;
  for (int k = 0; k < 100000; ++k) {
    if (!visit(k, c, zk)) return;
    c *= (0.5 * s + k) * (0.5 * (s + 1.0) + k) / ((s + 0.5 + k) * (k + 1.0));
    zk *= z;
  }
  throw NumericalError("legendre hypergeometric series did not converge");
}

}  // namespace detail

// Large-t expansion:
//   Q_{s−1}(t) = √π Γ(s)/Γ(s+½) (2t)^{−s} ₂F₁(s/2, (s+1)/2; s+½; 1/t²).
// Converges for all t > 1; used for t >= 1.25 where it needs < 100 terms.
inline double legendre_Q_series(double s, double t) {
  require_legendre_domain(s, t);
  const double z = 1.0 / (t * t);
  double sum = 0.0;
  detail::legendre_hypergeometric_terms(s, z, [&](int, double c, double zk) {
    const double term = c * zk;
    sum += term;
    return term > 1e-17 * sum;
  });
  return detail::legendre_prefactor(s) * std::pow(t, -s) * sum;
}

// d/dt Q_{s−1}(t) from the same expansion.
inline double legendre_Q_series_derivative(double s, double t) {
  require_legendre_domain(s, t);
  const double z = 1.0 / (t * t);
  double sum = 0.0;
  detail::legendre_hypergeometric_terms(s, z, [&](int k, double c, double zk) {
    const double term = c * zk * (-s - 2.0 * k);
    sum += term;
    return std::abs(term) > 1e-17 * std::abs(sum);
  });
  return detail::legendre_prefactor(s) * std::pow(t, -s - 1.0) * sum;
}

// ∫_T^∞ Q_{s−1}(t) dt for s > 1, integrating the expansion term by term.
// Equals (T²−1)(−Q'_{s−1}(T)) / (s(s−1)) by the Legendre equation.
inline double legendre_Q_tail_integral(double s, double T) {
  if (!(s > 1.0)) throw InvalidArgument("legendre_Q_tail_integral: s > 1 required");
  require_legendre_domain(s, T);
  const double z = 1.0 / (T * T);
  double sum = 0.0;
  detail::legendre_hypergeometric_terms(s, z, [&](int k, double c, double zk) {
    const double term = c * zk / (s + 2.0 * k - 1.0);
    sum += term;
    return term > 1e-17 * sum;
  });
  return detail::legendre_prefactor(s) * std::pow(T, 1.0 - s) * sum;
}

// Chooses the expansion when it converges quickly, else quadrature.
inline double legendre_Q_fast(double s, double t, double rel_tol = 1e-12) {
  if (t >= 1.25) return legendre_Q_series(s, t);
  return legendre_Q(s, t, rel_tol).value;
}

// ---------------------------------------------------------------------------
// ζ and γ

// ζ(s) for real s > 0, s ≠ 1, by Euler–Maclaurin with cutoff K.
inline double zeta_em(double s, int K) {
  double sum = 0.0;
  for (int n = K - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double Kd = K;
  return sum + std::pow(Kd, 1.0 - s) / (s - 1.0) + detail::em_boundary(Kd, 1.0, s, false);
}

inline RealWithError zeta(double s, double tol = 1e-13) {
  if (!(s > 0.0) || s == 1.0) throw InvalidArgument("zeta: s > 0, s != 1 required");
  int K = 16;
  double prev = zeta_em(s, K);
  for (int iter = 0; iter < 12; ++iter) {
    K *= 2;
    const double cur = zeta_em(s, K);
    const double diff = std::abs(cur - prev);
    if (diff <= tol * std::max(1.0, std::abs(cur)))
      return {cur, diff + 1e-15 * std::abs(cur), ErrorKind::kHeuristic};
    prev = cur;
  }
  throw NumericalError("zeta: tolerance not reached");
}

// ζ'(2) = −Σ log n / n².
inline double zeta_prime_2_em(int K) {
  double sum = 0.0;
  for (int n = K - 1; n >= 2; --n) {
    const double nd = n;
    sum += std::log(nd) / (nd * nd);
  }
  const double Kd = K;
  const double integral = (std::log(Kd) + 1.0) / Kd;
  return -(sum + integral + detail::em_boundary(Kd, 1.0, 2.0, true));
}

inline RealWithError zeta_log_deriv_at_2(double tol = 1e-13) {
  int K = 16;
  double prev = zeta_prime_2_em(K);
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  for (int iter = 0; iter < 12; ++iter) {
    K *= 2;
    const double cur = zeta_prime_2_em(K);
    const double diff = std::abs(cur - prev);
    if (diff <= tol) return {cur / zeta2, (diff + 1e-15) / zeta2, ErrorKind::kHeuristic};
    prev = cur;
  }
  throw NumericalError("zeta_log_deriv_at_2: tolerance not reached");
}

// Brent–McMillan: γ = A/B − log n + O(π e^{−4n}),
//   A = Σ_k (n^k/k!)² H_k,  B = Σ_k (n^k/k!)².
inline RealWithError euler_gamma() {
  constexpr int n = 10;
  double a = 0.0, b = 0.0, term = 1.0, harmonic = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      term *= static_cast<double>(n) / k;
      term *= static_cast<double>(n) / k;
      harmonic += 1.0 / k;
    }
    a += term * harmonic;
    b += term;
    if (k > 4 * n && term < 1e-18 * b) break;
  }
  const double value = a / b - std::log(static_cast<double>(n));
  const double truncation = std::numbers::pi * std::exp(-4.0 * n);
  return {value, truncation + 1e-14, ErrorKind::kRigorous};
}

// ---------------------------------------------------------------------------
// Dirichlet L(s, ε_D), ε_D(n) = kronecker(D, n)

inline int character(const FundamentalDiscriminant& disc, i64 n) { return kronecker(disc.D, n); }

namespace detail {

// L(s, ε) with K terms per residue class before the Euler–Maclaurin tail.
inline double dirichlet_L_em(const FundamentalDiscriminant& disc, double s, int K) {
  const i64 q = disc.abs();
  const double qd = static_cast<double>(q);
  const double y_ref = K * qd;
  double total = 0.0, integral = 0.0;
  for (i64 a = 1; a <= q; ++a) {
    const int chi = character(disc, a);
    if (chi == 0) continue;
    double partial = 0.0;
    for (int k = K - 1; k >= 0; --k) partial += std::pow(static_cast<double>(a) + k * qd, -s);
    const double Y = static_cast<double>(a) + K * qd;
    partial += em_boundary(Y, qd, s, false);
    total += chi * partial;
    // ∫_K^∞ (a + kq)^{−s} dk = Y^{1−s} / (q(s−1)); the Y_ref part cancels over a period.
    integral -= chi * std::pow(y_ref, 1.0 - s) * expm1_ratio(1.0 - s, std::log(Y / y_ref)) / qd;
  }
  return total + integral;
}

// L'(1, ε) = −Σ ε(n) log n / n, same scheme.
inline double dirichlet_L_prime_at_1_em(const FundamentalDiscriminant& disc, int K) {
  const i64 q = disc.abs();
  const double qd = static_cast<double>(q);
  const double log_ref = std::log(K * qd);
  double total = 0.0, integral = 0.0;
  for (i64 a = 1; a <= q; ++a) {
    const int chi = character(disc, a);
    if (chi == 0) continue;
    double partial = 0.0;
    for (int k = K - 1; k >= 0; --k) {
      const double y = static_cast<double>(a) + k * qd;
      partial += std::log(y) / y;
    }
    const double Y = static_cast<double>(a) + K * qd;
    partial += em_boundary(Y, qd, 1.0, true);
    total -= chi * partial;
    // −∫_K^∞ log(y)/y dk contributes +log²(Y)/(2q) after cancellation over a period.
    const double lY = std::log(Y);
    integral += chi * (lY - log_ref) * (lY + log_ref) / (2.0 * qd);
  }
  return total + integral;
}

template <class Eval>
inline RealWithError doubling_limit(Eval&& eval, double tol, const char* who) {
  int K = 8;
  double prev = eval(K);
  for (int iter = 0; iter < 14; ++iter) {
    K *= 2;
    const double cur = eval(K);
    const double diff = std::abs(cur - prev);
    if (diff <= tol * std::max(1.0, std::abs(cur)))
      return {cur, diff + 1e-14 * std::max(1.0, std::abs(cur)), ErrorKind::kHeuristic};
    prev = cur;
  }
  throw NumericalError(std::string(who) + ": tolerance not reached");
}

}  // namespace detail

inline RealWithError dirichlet_L(const FundamentalDiscriminant& disc, double s, double tol = 1e-12) {
  if (!(s > 0.5)) throw InvalidArgument("dirichlet_L: s > 1/2 required");
  return detail::doubling_limit([&](int K) { return detail::dirichlet_L_em(disc, s, K); }, tol,
                                "dirichlet_L");
}

inline RealWithError dirichlet_L_prime_at_1(const FundamentalDiscriminant& disc, double tol = 1e-12) {
  return detail::doubling_limit([&](int K) { return detail::dirichlet_L_prime_at_1_em(disc, K); },
                                tol, "dirichlet_L_prime_at_1");
}

inline RealWithError L_log_deriv_at_1(const FundamentalDiscriminant& disc, double tol = 1e-12) {
  return dirichlet_L_prime_at_1(disc, tol) / dirichlet_L(disc, 1.0, tol);
}

// Class number formula h = u √|D| L(1, ε_D) / π, rounded.
inline i64 class_number_from_L(const FundamentalDiscriminant& disc) {
  const double L1 = dirichlet_L(disc, 1.0).value;
  return static_cast<i64>(std::llround(static_cast<double>(disc.u) *
                                       std::sqrt(static_cast<double>(disc.abs())) * L1 /
                                       std::numbers::pi));
}

}  // namespace gzh
