#pragma once

// Néron–Tate height of the Heegner divisor c_D on J0(N) from the four-term
// archimedean + finite decomposition at the principal class:
//
//   (i)   lim_{s→1} [ −2u² Σ_n σ(n) r(m|D|+nN) Q_{s−1}(1 + 2nN/(m|D|)) − hκσ₁(m)/(s−1) ]
//   (ii)  hκσ₁(m) ( log(N/|D|) + 2Σ_{p|N} log p/(p²−1) + 2 + 2ζ'/ζ(2) − 2L'/L(1,ε) )
//         plus, for m > 1, the Hecke sum hκ Σ_{d|m} d log(m/d²)  (hecke_term)
//   (iii) h u r(m) ( 2L'/L(1,ε) − 2γ − 2 log 2π + log|D| )
//   (iv)  −u² Σ_{1<=n<=m|D|/N} σ'(n) r(m|D|−nN) + h u r(m) log(N/m)
//
// Heights are in the 2Θ normalization.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "gzh/arith.hpp"
#include "gzh/error.hpp"
#include "gzh/heegner.hpp"
#include "gzh/lfunc.hpp"
#include "gzh/parallel.hpp"
#include "gzh/quadfield.hpp"
#include "gzh/real_with_error.hpp"

namespace gzh {

// How Σ_{n>M} of the spectral series is modelled.
//  kNone:          dropped; its estimated size goes into abs_error.
//  kEmpiricalMean: coefficients beyond M replaced by their mean over (M/2, M].
//  kResidueMean:   replaced by the mean forced by the pole residue hκσ₁(m).
enum class TailModel { kNone, kEmpiricalMean, kResidueMean };

inline std::string_view to_string(TailModel t) {
  switch (t) {
    case TailModel::kNone: return "none";
    case TailModel::kEmpiricalMean: return "empirical-mean";
    case TailModel::kResidueMean: return "residue-mean";
  }
  return "?";
}

inline TailModel parse_tail_model(std::string_view s) {
  if (s == "none") return TailModel::kNone;
  if (s == "empirical-mean") return TailModel::kEmpiricalMean;
  if (s == "residue-mean") return TailModel::kResidueMean;
  throw InvalidArgument("unknown tail model '" + std::string(s) + "'");
}

inline std::string_view to_string(EpsilonConvention c) {
  return c == EpsilonConvention::kLiteral ? "literal" : "residue-consistent";
}

inline EpsilonConvention parse_convention(std::string_view s) {
  if (s == "literal") return EpsilonConvention::kLiteral;
  if (s == "residue-consistent") return EpsilonConvention::kResidueConsistent;
  throw InvalidArgument("unknown sign convention '" + std::string(s) + "'");
}

class SpectralCache;

struct SpectralEvalConfig {
  std::vector<double> s_grid{1.5, 1.25, 1.125};
  i64 truncation = 100000;
  int extrapolation_degree = 2;
  double tail_exponent = 0.5;  // θ in the assumed |Σ_{n<=X} (a(n) − ā)| = O(X^θ)
  TailModel tail_model = TailModel::kResidueMean;
  double quad_tol = 1e-12;
  double max_tail_error = std::numeric_limits<double>::infinity();
  EpsilonConvention convention = EpsilonConvention::kResidueConsistent;
  unsigned threads = 0;  // 0: all cores
  SpectralCache* cache = nullptr;

  void validate() const {
    if (s_grid.empty()) throw InvalidArgument("s_grid must not be empty");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
      if (!(s_grid[i] > 1.0)) throw InvalidArgument("s_grid: every s must be > 1");
      if (i > 0 && !(s_grid[i] < s_grid[i - 1]))
        throw InvalidArgument("s_grid must be strictly decreasing toward 1");
    }
    if (truncation < 1000) throw InvalidArgument("truncation M >= 1000 required");
    if (extrapolation_degree < 0 || static_cast<std::size_t>(extrapolation_degree) >= s_grid.size())
      throw InvalidArgument("extrapolation degree must be < number of grid points");
    if (!(tail_exponent >= 0.0 && tail_exponent < 1.0))
      throw InvalidArgument("tail exponent must lie in [0, 1)");
    if (!(quad_tol > 0.0 && quad_tol <= 1e-10)) throw InvalidArgument("quad_tol must lie in (0, 1e-10]");
  }
};

// ---------------------------------------------------------------------------
// Result cache: one JSON object per line, values replayed from their bit
// patterns.

struct SpectralKey {
  i64 D = 0, N = 0, m = 1;
  double s = 0.0;
  i64 M = 0;
  double quad_tol = 0.0;
  TailModel tail = TailModel::kResidueMean;
  double tail_exponent = 0.5;
  EpsilonConvention convention = EpsilonConvention::kResidueConsistent;

  std::string str() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%lld|%lld|%lld|%016llx|%lld|%016llx|%s|%016llx|%s",
                  static_cast<long long>(D), static_cast<long long>(N), static_cast<long long>(m),
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(s)),
                  static_cast<long long>(M),
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(quad_tol)),
                  std::string(to_string(tail)).c_str(),
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(tail_exponent)),
                  std::string(to_string(convention)).c_str());
    return buf;
  }
};

namespace detail {

inline std::string hex_bits(double x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(x)));
  return buf;
}

inline double from_hex_bits(const std::string& s) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(std::stoull(s, nullptr, 16)));
}

}  // namespace detail

class SpectralCache {
 public:
  explicit SpectralCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        RealWithError v{detail::from_hex_bits(j.at("value_bits").get<std::string>()),
                        detail::from_hex_bits(j.at("abs_error_bits").get<std::string>()),
                        j.at("kind").get<std::string>() == "rigorous" ? ErrorKind::kRigorous
                                                                      : ErrorKind::kHeuristic};
        entries_[j.at("key").get<std::string>()] = v;
      } catch (const std::exception&) {
        ++skipped_;
      }
    }
  }

  std::optional<RealWithError> lookup(const SpectralKey& key) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key.str());
    if (it == entries_.end()) {
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return it->second;
  }

  void store(const SpectralKey& key, const RealWithError& v) {
    std::lock_guard lock(mutex_);
    const std::string k = key.str();
    if (!entries_.emplace(k, v).second) return;
    nlohmann::ordered_json j;
    j["key"] = k;
    j["D"] = key.D;
    j["N"] = key.N;
    j["m"] = key.m;
    j["s"] = key.s;
    j["M"] = key.M;
    j["quad_tol"] = key.quad_tol;
    j["tail_model"] = to_string(key.tail);
    j["value"] = v.value;
    j["abs_error"] = v.abs_error;
    j["value_bits"] = detail::hex_bits(v.value);
    j["abs_error_bits"] = detail::hex_bits(v.abs_error);
    j["kind"] = to_string(v.kind);
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << '\n';
    if (!out) throw NumericalError("cache: cannot write " + path_.string());
  }

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t skipped_lines() const { return skipped_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::map<std::string, RealWithError> entries_;
  std::size_t hits_ = 0, misses_ = 0, skipped_ = 0;
};

// ---------------------------------------------------------------------------
// Spectral series

inline void require_coprime_index(const Level& level, i64 m) {
  if (m < 1) throw InvalidArgument("m must be a positive integer");
  if (std::gcd(m, level.N) != 1) throw InvalidArgument("gcd(m, N) = 1 violated");
}

// hκσ₁(m), the coefficient of the pole at s = 1.
inline double pole_residue(const FundamentalDiscriminant& disc, const Level& level, i64 m) {
  return static_cast<double>(disc.h) * level.kappa.to_double() * static_cast<double>(sigma1(m));
}

// Coefficients a(n) = σ(n)·r(m|D| + nN), n = 1..M, and the kernel
// f_s(x) = Q_{s−1}(1 + 2xN/(m|D|)).
class SpectralSeries {
 public:
  SpectralSeries(const FundamentalDiscriminant& disc, const Level& level, i64 m, i64 M,
                 EpsilonConvention conv = EpsilonConvention::kResidueConsistent)
      : disc_(disc), level_(level), m_(m), M_(M) {
    require_coprime_index(level, m);
    if (M < 1) throw InvalidArgument("truncation M must be positive");
    scale_ = static_cast<double>(m * disc.abs()) / static_cast<double>(level.N);
    build_sigma(conv);
    build_rep_counts();
    a_.assign(static_cast<std::size_t>(M + 1), 0);
    for (i64 n = 1; n <= M; ++n) a_[n] = static_cast<i64>(sigma_[n]) * reps_[n];

    // mean of a(n) implied by the residue: −2u² ā ∫_0^∞ f_s = hκσ₁(m)/(s(s−1))
    const double u = static_cast<double>(disc.u);
    residue_mean_ = -pole_residue(disc, level, m) / (u * u * scale_);
    const i64 lo = M / 2;
    double acc = 0.0;
    for (i64 n = lo + 1; n <= M; ++n) acc += static_cast<double>(a_[n]);
    empirical_mean_ = acc / static_cast<double>(M - lo);
  }

  const FundamentalDiscriminant& disc() const { return disc_; }
  const Level& level() const { return level_; }
  i64 m() const { return m_; }
  i64 truncation() const { return M_; }
  double scale() const { return scale_; }  // m|D|/N
  double residue_mean() const { return residue_mean_; }
  double empirical_mean() const { return empirical_mean_; }
  i64 coefficient(i64 n) const { return a_.at(static_cast<std::size_t>(n)); }
  int sigma(i64 n) const { return sigma_.at(static_cast<std::size_t>(n)); }
  i64 rep(i64 n) const { return reps_.at(static_cast<std::size_t>(n)); }  // r(m|D| + nN)

  double kernel(double s, double x, double quad_tol = 1e-12) const {
    return legendre_Q_fast(s, 1.0 + 2.0 * x / scale_, quad_tol);
  }
  double kernel_derivative(double s, double x) const {
    return (2.0 / scale_) * legendre_Q_series_derivative(s, 1.0 + 2.0 * x / scale_);
  }

  // Σ_{n=1}^{upto} a(n) f_s(n)
  double partial_sum(double s, i64 upto, double quad_tol = 1e-12, unsigned threads = 0) const {
    if (upto > M_) throw InvalidArgument("partial_sum beyond truncation");
    return deterministic_sum(
        1, upto + 1,
        [&](i64 n) {
          const i64 a = a_[static_cast<std::size_t>(n)];
          return a == 0 ? 0.0 : static_cast<double>(a) * kernel(s, static_cast<double>(n), quad_tol);
        },
        threads);
  }

  // Σ_{n>M} f_s(n) by Euler–Maclaurin.
  double kernel_tail_sum(double s) const {
    const double Md = static_cast<double>(M_);
    const double T = 1.0 + 2.0 * Md / scale_;
    const double integral = 0.5 * scale_ * legendre_Q_tail_integral(s, T);
    return integral - 0.5 * kernel(s, Md) - kernel_derivative(s, Md) / 12.0;
  }

  // K = max over X in (M/2, M] of |Σ_{n<=X} (a(n) − ā)| / X^θ
  double discrepancy_constant(double mean, double theta) const {
    double E = 0.0, K = 0.0;
    for (i64 n = 1; n <= M_; ++n) {
      E += static_cast<double>(a_[n]) - mean;
      if (2 * n > M_) K = std::max(K, std::abs(E) / std::pow(static_cast<double>(n), theta));
    }
    return K;
  }

  double tail_mean(TailModel model) const {
    switch (model) {
      case TailModel::kNone: return 0.0;
      case TailModel::kEmpiricalMean: return empirical_mean_;
      case TailModel::kResidueMean: return residue_mean_;
    }
    return 0.0;
  }

  RealWithError evaluate(double s, const SpectralEvalConfig& config) const {
    if (!(s > 1.0)) throw InvalidArgument("spectral_series: s > 1 required");
    const double u2 = static_cast<double>(disc_.u * disc_.u);
    const double head = partial_sum(s, M_, config.quad_tol, config.threads);
    const double fM = kernel(s, static_cast<double>(M_));
    const double tail_sum = kernel_tail_sum(s);
    const double mean = tail_mean(config.tail_model);
    const double value = -2.0 * u2 * (head + mean * tail_sum);

    // Abel summation against the assumed discrepancy growth, with the
    // fluctuation measured around the mean actually used (empirical if none).
    const double theta = config.tail_exponent;
    const double ref_mean = config.tail_model == TailModel::kNone ? empirical_mean_ : mean;
    const double K = discrepancy_constant(ref_mean, theta);
    double err = 2.0 * u2 * 2.0 * K * std::pow(static_cast<double>(M_), theta) * fM *
                 (1.0 + s / (s - theta));
    if (config.tail_model == TailModel::kNone) err += 2.0 * u2 * std::abs(empirical_mean_) * tail_sum;
    const double Md = static_cast<double>(M_);
    err += 2.0 * u2 * std::abs(mean) * s * (s + 1.0) * (s + 2.0) * fM / (720.0 * Md * Md * Md);
    err += 16.0 * config.quad_tol * std::abs(value);
    if (err > config.max_tail_error)
      throw NumericalError("spectral_series: tail bound " + std::to_string(err) +
                           " exceeds tolerance at M = " + std::to_string(M_));
    return {value, err, ErrorKind::kHeuristic};
  }

 private:
  void build_sigma(EpsilonConvention conv) {
    sigma_.assign(static_cast<std::size_t>(M_ + 1), 0);
    for (i64 d = 1; d <= M_; ++d)
      for (i64 n = d; n <= M_; n += d) sigma_[n] += eps_genus(disc_, level_.N, n, d, conv);
  }

  // Solutions of x² + xy + ((1−D)/4) y² = m|D| + nN, binned by n. With
  // w = 2x + y: w² + |D| y² = 4(m|D| + nN), so w² ≡ D(y² − 4m) (mod N) and
  // w ≡ y (mod 2), which pins w to a few classes mod 2N.
  void build_rep_counts() {
    const i64 N = level_.N;
    const i64 aD = disc_.abs();
    const i64 base = m_ * aD;
    const i64 X = base + M_ * N;
    std::vector<i64> solutions(static_cast<std::size_t>(M_ + 1), 0);

    std::vector<std::vector<i64>> roots(static_cast<std::size_t>(N));
    for (i64 z = 0; z < N; ++z) roots[(z * z) % N].push_back(z);

    const i64 Y = isqrt(4 * X / aD);
    for (i64 y = -Y; y <= Y; ++y) {
      const i64 room = 4 * X - aD * y * y;
      if (room < 0) continue;
      const i64 W = isqrt(room);
      const i64 target = mod_floor(disc_.D * (y * y - 4 * m_), N);
      for (i64 z : roots[target]) {
        const i64 w0 = mod_floor(z - y, 2) == 0 ? z : z + N;  // class mod 2N
        const i64 period = 2 * N;
        i64 w = w0 - ((w0 + W) / period) * period;
        while (w < -W) w += period;
        for (; w <= W; w += period) {
          const i64 four_v = w * w + aD * y * y;
          if (four_v <= 4 * base) continue;
          const i64 n = (four_v / 4 - base) / N;
          if (n >= 1 && n <= M_) ++solutions[n];
        }
      }
    }
    reps_.assign(static_cast<std::size_t>(M_ + 1), 0);
    const i64 units = 2 * disc_.u;
    for (i64 n = 1; n <= M_; ++n) {
      if (solutions[n] % units != 0) throw InternalError("spectral coefficients: automorph division not exact");
      reps_[n] = solutions[n] / units;
    }
  }

  FundamentalDiscriminant disc_;
  Level level_;
  i64 m_, M_;
  double scale_ = 1.0;
  double residue_mean_ = 0.0, empirical_mean_ = 0.0;
  std::vector<int> sigma_;
  std::vector<i64> reps_;
  std::vector<i64> a_;
};

inline SpectralKey spectral_key(const FundamentalDiscriminant& disc, const Level& level, i64 m, double s,
                                const SpectralEvalConfig& config) {
  return {disc.D,           level.N,           m, s, config.truncation, config.quad_tol, config.tail_model,
          config.tail_exponent, config.convention};
}

// Truncated spectral series with tail model and error; consults the cache.
inline RealWithError spectral_series(const FundamentalDiscriminant& disc, const Level& level, i64 m,
                                     double s, const SpectralEvalConfig& config) {
  const SpectralKey key = spectral_key(disc, level, m, s, config);
  if (config.cache)
    if (auto hit = config.cache->lookup(key)) return *hit;
  const SpectralSeries series(disc, level, m, config.truncation, config.convention);
  const RealWithError v = series.evaluate(s, config);
  if (config.cache) config.cache->store(key, v);
  return v;
}

// ---------------------------------------------------------------------------
// Term (i): regularized limit by pole subtraction and polynomial extrapolation

struct GridPoint {
  double s = 0.0;
  RealWithError series;   // spectral_series(s)
  RealWithError regular;  // spectral_series(s) − hκσ₁(m)/(s−1)
};

struct SpectralLimit {
  RealWithError value;
  std::vector<GridPoint> points;
  std::vector<double> coefficients;  // fitted polynomial in (s − 1), constant first
  double fit_residual = 0.0;
  double model_error = 0.0;  // |P_deg(1) − P_{deg−1}(1)|
};

namespace detail {

// Least-squares polynomial of the given degree through (x_i, y_i); returns
// coefficients and the weights w with P(0) = Σ w_i y_i.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> poly_fit(const std::vector<double>& x,
                                                            const std::vector<double>& y, int degree) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd V(n, degree + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      V(i, k) = p;
      p *= x[i];
    }
  }
  const Eigen::VectorXd yy = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  const auto qr = V.colPivHouseholderQr();
  const Eigen::VectorXd coeffs = qr.solve(yy);
  // row 0 of the pseudo-inverse
  const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(n, n));
  return {coeffs, pinv.row(0).transpose()};
}

}  // namespace detail

inline SpectralLimit term_i_detailed(const FundamentalDiscriminant& disc, const Level& level, i64 m,
                                     const SpectralEvalConfig& config) {
  config.validate();
  require_coprime_index(level, m);
  const double residue = pole_residue(disc, level, m);

  std::optional<SpectralSeries> series;  // built only on a cache miss
  SpectralLimit out;
  std::vector<double> xs, ys;
  double point_error = 0.0;
  for (double s : config.s_grid) {
    const SpectralKey key = spectral_key(disc, level, m, s, config);
    std::optional<RealWithError> v;
    if (config.cache) v = config.cache->lookup(key);
    if (!v) {
      if (!series) series.emplace(disc, level, m, config.truncation, config.convention);
      v = series->evaluate(s, config);
      if (config.cache) config.cache->store(key, *v);
    }
    const RealWithError regular{v->value - residue / (s - 1.0), v->abs_error, v->kind};
    out.points.push_back({s, *v, regular});
    xs.push_back(s - 1.0);
    ys.push_back(regular.value);
    point_error = std::max(point_error, v->abs_error);
  }

  const int deg = config.extrapolation_degree;
  const auto [coeffs, weights] = detail::poly_fit(xs, ys, deg);
  out.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double p = 0.0;
    for (int k = deg; k >= 0; --k) p = p * xs[i] + coeffs[k];
    out.fit_residual = std::max(out.fit_residual, std::abs(ys[i] - p));
  }
  if (out.fit_residual > 10.0 * point_error)
    throw NumericalError("term_i: fit residual " + std::to_string(out.fit_residual) +
                         " exceeds 10x the per-point error; increase the truncation M");

  double propagated = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) propagated += std::abs(weights[i]) * out.points[i].series.abs_error;
  if (deg >= 1) out.model_error = std::abs(coeffs[0] - detail::poly_fit(xs, ys, deg - 1).first[0]);
  out.value = {coeffs[0], propagated + out.model_error, ErrorKind::kHeuristic};
  return out;
}

inline RealWithError term_i(const FundamentalDiscriminant& disc, const Level& level, i64 m,
                            const SpectralEvalConfig& config) {
  return term_i_detailed(disc, level, m, config).value;
}

// Same limit taken directly at s = 1: with f_1(x) = ½ log(1 + c/x), c = m|D|/N,
//   term_i = −2u² Σ_{n<=M} (a(n) − ā) f_1(n) − 2u² ā Reg − hκσ₁(m)
// where ā is the residue mean and Reg = lim (Σ_{n<=X} f_1(n) − ∫_0^X f_1).
inline RealWithError term_i_direct(const SpectralSeries& series, double tail_exponent = 0.5,
                                   unsigned threads = 0) {
  const double c = series.scale();
  const double u2 = static_cast<double>(series.disc().u * series.disc().u);
  const i64 M = series.truncation();
  const double Md = static_cast<double>(M);
  const double mean = series.residue_mean();
  auto f1 = [c](double x) { return 0.5 * std::log1p(c / x); };

  const double osc = deterministic_sum(
      1, M + 1, [&](i64 n) { return (static_cast<double>(series.coefficient(n)) - mean) * f1(static_cast<double>(n)); },
      threads);
  const double head = deterministic_sum(1, M + 1, [&](i64 n) { return f1(static_cast<double>(n)); }, threads);
  const double integral = 0.5 * (Md * std::log1p(c / Md) + c * std::log((Md + c) / c));
  const double f1p = -0.5 * c / (Md * (Md + c));
  const double reg = head - integral - 0.5 * f1(Md) - f1p / 12.0;
  const double residue = pole_residue(series.disc(), series.level(), series.m());
  const double value = -2.0 * u2 * osc - 2.0 * u2 * mean * reg - residue;

  const double K = series.discrepancy_constant(mean, tail_exponent);
  const double err = 2.0 * u2 * 2.0 * K * std::pow(Md, tail_exponent) * f1(Md) * (1.0 + 1.0 / (1.0 - tail_exponent));
  return {value, err, ErrorKind::kHeuristic};
}

// ---------------------------------------------------------------------------
// Terms (ii)–(iv)

struct AnalyticConstants {
  RealWithError zeta_log_deriv_2;  // ζ'/ζ(2)
  RealWithError L_log_deriv_1;     // L'/L(1, ε_D)
  RealWithError gamma;
};

inline AnalyticConstants analytic_constants(const FundamentalDiscriminant& disc) {
  return {zeta_log_deriv_at_2(), L_log_deriv_at_1(disc), euler_gamma()};
}

inline RealWithError term_ii(const FundamentalDiscriminant& disc, const Level& level, i64 m,
                             const AnalyticConstants& k) {
  require_coprime_index(level, m);
  double prime_sum = 0.0;
  for (i64 p : level.primes) {
    const double pd = static_cast<double>(p);
    prime_sum += std::log(pd) / (pd * pd - 1.0);
  }
  const double exact_part =
      std::log(static_cast<double>(level.N) / static_cast<double>(disc.abs())) + 2.0 * prime_sum + 2.0;
  const RealWithError bracket =
      RealWithError::exact(exact_part) + 2.0 * k.zeta_log_deriv_2 - 2.0 * k.L_log_deriv_1;
  return pole_residue(disc, level, m) * bracket;
}

inline RealWithError term_ii(const FundamentalDiscriminant& disc, const Level& level, i64 m = 1) {
  return term_ii(disc, level, m, analytic_constants(disc));
}

// hκ Σ_{d|m} d log(m/d²); vanishes at m = 1.
inline RealWithError hecke_term(const FundamentalDiscriminant& disc, const Level& level, i64 m) {
  require_coprime_index(level, m);
  double s = 0.0;
  const double md = static_cast<double>(m);
  for (i64 d : divisors(m)) {
    const double dd = static_cast<double>(d);
    s += dd * std::log(md / (dd * dd));
  }
  const double v = static_cast<double>(disc.h) * level.kappa.to_double() * s;
  return {v, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v), ErrorKind::kRigorous};
}

inline RealWithError term_iii(const FundamentalDiscriminant& disc, i64 m, const AnalyticConstants& k) {
  if (m < 1) throw InvalidArgument("m must be a positive integer");
  const i64 rm = rep_count_principal(disc, m);
  const double two_log_2pi = 2.0 * std::log(2.0 * std::numbers::pi);
  const RealWithError bracket = 2.0 * k.L_log_deriv_1 - 2.0 * k.gamma +
                                RealWithError::exact(std::log(static_cast<double>(disc.abs())) - two_log_2pi);
  return static_cast<double>(disc.h * disc.u * rm) * bracket;
}

inline RealWithError term_iii(const FundamentalDiscriminant& disc, const Level& level, i64 m,
                              const AnalyticConstants& k) {
  require_coprime_index(level, m);
  return term_iii(disc, m, k);
}

inline RealWithError term_iii(const FundamentalDiscriminant& disc, const Level& level, i64 m = 1) {
  return term_iii(disc, level, m, analytic_constants(disc));
}

inline RealWithError term_iv(const FundamentalDiscriminant& disc, const Level& level, i64 m = 1,
                             EpsilonConvention conv = EpsilonConvention::kResidueConsistent) {
  require_coprime_index(level, m);
  const i64 N = level.N;
  const i64 top = m * disc.abs();
  double finite = 0.0;
  for (i64 n = 1; n * N <= top; ++n) {
    const i64 norm = top - n * N;
    if (norm == 0) continue;  // no ideal of norm 0
    const i64 r = rep_count_principal(disc, norm);
    if (r != 0) finite += sigma_prime_principal(disc, N, n, conv) * static_cast<double>(r);
  }
  const double u = static_cast<double>(disc.u);
  const i64 rm = rep_count_principal(disc, m);
  const double v = -u * u * finite + static_cast<double>(disc.h * disc.u * rm) *
                                         std::log(static_cast<double>(N) / static_cast<double>(m));
  return {v, 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(v) + 1.0), ErrorKind::kRigorous};
}

// ---------------------------------------------------------------------------
// Assembly

struct HeightBreakdown {
  FundamentalDiscriminant disc;
  HeegnerLevel level;
  i64 m = 1;
  RealWithError term_i, term_ii, term_iii, term_iv, total;
  std::vector<std::string> warnings;
};

inline HeightBreakdown height(const FundamentalDiscriminant& disc, const HeegnerLevel& hl,
                              const SpectralEvalConfig& config) {
  if (hl.disc.D != disc.D) throw InvalidArgument("height: level was built for a different discriminant");
  const AnalyticConstants k = analytic_constants(disc);
  HeightBreakdown b;
  b.disc = disc;
  b.level = hl;
  b.m = 1;
  b.term_i = term_i(disc, hl.level, 1, config);
  b.term_ii = term_ii(disc, hl.level, 1, k);
  b.term_iii = term_iii(disc, hl.level, 1, k);
  b.term_iv = term_iv(disc, hl.level, 1, config.convention);
  b.total = b.term_i + b.term_ii + b.term_iii + b.term_iv;
  if (!(b.total.value > 0.0))
    b.warnings.push_back("nonpositive height " + std::to_string(b.total.value) + " at N = " +
                         std::to_string(hl.N()));
  return b;
}

}  // namespace gzh
