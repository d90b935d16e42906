#pragma once

// Scans of ĥ(c_D) over levels, the stable-height surrogate g·log N/3, the
// Lang–Silverman constant bound 3h/g, and the height/dimension scaling rows
// for division points and Weil restriction.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gzh/arith.hpp"
#include "gzh/error.hpp"
#include "gzh/gzheight.hpp"
#include "gzh/heegner.hpp"
#include "gzh/parallel.hpp"
#include "gzh/quadfield.hpp"
#include "gzh/real_with_error.hpp"

namespace gzh {

// Jorgenson–Kramer leading term of h_st(J0(N)).
inline double hst_surrogate(i64 genus, i64 N) {
  return static_cast<double>(genus) * std::log(static_cast<double>(N)) / 3.0;
}

struct LangSilvermanBound {
  double bound = 0.0;     // 3h/g
  double bound_hu = 0.0;  // 3hu/g, the constant in ĥ ∼ (3hu/g)·h_st
};

inline LangSilvermanBound lang_silverman_bound(const FundamentalDiscriminant& disc, i64 genus) {
  if (genus <= 0) throw InvalidArgument("lang_silverman_bound: genus > 0 required");
  const double g = static_cast<double>(genus);
  return {3.0 * static_cast<double>(disc.h) / g, 3.0 * static_cast<double>(disc.h * disc.u) / g};
}

inline LangSilvermanBound lang_silverman_bound(const FundamentalDiscriminant& disc, const Level& level) {
  return lang_silverman_bound(disc, level.genus);
}

struct ScanRow {
  i64 N = 0;
  double h_hat = 0.0;
  double h_hat_error = 0.0;
  double hu_log_N = 0.0;
  double ratio = 0.0;
  double excess = 0.0;
  i64 genus = 0;
  double hst_surrogate = 0.0;
  std::optional<double> ls_ratio;   // h_hat / hst_surrogate (genus > 0)
  std::optional<double> ls_bound;   // 3hu/g
  std::optional<double> ls_bound_h; // 3h/g
  double term_i = 0.0, term_ii = 0.0, term_iii = 0.0, term_iv = 0.0;
  std::vector<std::string> warnings;
  std::optional<std::string> error;
};

inline ScanRow make_scan_row(const FundamentalDiscriminant& disc, const HeegnerLevel& hl,
                             const SpectralEvalConfig& config) {
  ScanRow row;
  row.N = hl.N();
  row.genus = hl.level.genus;
  const double hu = static_cast<double>(disc.h * disc.u);
  row.hu_log_N = hu * std::log(static_cast<double>(row.N));
  row.hst_surrogate = hst_surrogate(row.genus, row.N);
  if (row.genus > 0) {
    const auto b = lang_silverman_bound(disc, row.genus);
    row.ls_bound = b.bound_hu;
    row.ls_bound_h = b.bound;
  }
  const HeightBreakdown hb = height(disc, hl, config);
  row.h_hat = hb.total.value;
  row.h_hat_error = hb.total.abs_error;
  row.ratio = row.h_hat / row.hu_log_N;
  row.excess = row.h_hat - row.hu_log_N;
  if (row.genus > 0) row.ls_ratio = row.h_hat / row.hst_surrogate;
  row.term_i = hb.term_i.value;
  row.term_ii = hb.term_ii.value;
  row.term_iii = hb.term_iii.value;
  row.term_iv = hb.term_iv.value;
  row.warnings = hb.warnings;
  return row;
}

// `count` levels spread evenly (by index) over the sorted list; all if 0 or
// count >= size. Always keeps both ends.
inline std::vector<i64> sample_levels(const std::vector<i64>& levels, std::size_t count) {
  if (count == 0 || count >= levels.size()) return levels;
  if (count == 1) return {levels.back()};
  std::vector<i64> out;
  const double step = static_cast<double>(levels.size() - 1) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(levels[static_cast<std::size_t>(std::llround(i * step))]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<i64> scan_levels(const FundamentalDiscriminant& disc, i64 N_min, i64 N_max,
                                    std::size_t sample = 0) {
  if (N_min < 5) throw InvalidArgument("scan: N_min >= 5 required");
  if (N_max < N_min) throw InvalidArgument("scan: N_max >= N_min required");
  std::vector<i64> levels;
  for (i64 N : enum_levels(disc, N_max))
    if (N >= N_min) levels.push_back(N);
  return sample_levels(levels, sample);
}

// Rows in ascending N. Each row is handed to `on_row` as soon as it and all
// smaller levels are done. Failures are recorded in the row.
inline std::vector<ScanRow> scan(const FundamentalDiscriminant& disc, const std::vector<i64>& levels,
                                 const SpectralEvalConfig& config,
                                 const std::function<void(const ScanRow&)>& on_row = {}) {
  std::vector<std::optional<ScanRow>> slots(levels.size());
  std::mutex emit_mutex;
  std::size_t next_emit = 0;
  SpectralEvalConfig inner = config;
  inner.threads = 1;  // parallel across rows instead

  parallel_for(
      levels.size(),
      [&](std::size_t i) {
        ScanRow row;
        try {
          row = make_scan_row(disc, make_heegner_level(disc, levels[i]), inner);
        } catch (const std::exception& e) {
          row = ScanRow{};
          row.N = levels[i];
          row.error = e.what();
          row.h_hat = row.ratio = row.excess = std::numeric_limits<double>::quiet_NaN();
        }
        std::lock_guard lock(emit_mutex);
        slots[i] = std::move(row);
        while (next_emit < slots.size() && slots[next_emit]) {
          if (on_row) on_row(*slots[next_emit]);
          ++next_emit;
        }
      },
      config.threads);

  std::vector<ScanRow> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::vector<ScanRow> scan(const FundamentalDiscriminant& disc, i64 N_min, i64 N_max,
                                 const SpectralEvalConfig& config, std::size_t sample = 0,
                                 const std::function<void(const ScanRow&)>& on_row = {}) {
  return scan(disc, scan_levels(disc, N_min, N_max, sample), config, on_row);
}

// ---------------------------------------------------------------------------
// Scaling rows

struct ScalingRow {
  i64 step = 1;              // N
  Rational height_factor;    // 1/N²
  double point_height = 0.0; // base_height / N²
  i64 degree = 1;            // m_N
  i64 dim = 1;               // m_N · g_base
  double hst = 0.0;          // m_N · hst_base
  i64 zariski_closure_dim = 1;
};

inline std::vector<ScalingRow> weil_scaling(double base_height, i64 g_base, double hst_base,
                                            const std::vector<i64>& degrees) {
  if (!(base_height > 0.0)) throw InvalidArgument("weil_scaling: base height must be positive");
  if (g_base < 1) throw InvalidArgument("weil_scaling: base dimension must be positive");
  if (degrees.empty() || degrees.front() != 1) throw InvalidArgument("weil_scaling: first degree must be 1");
  for (std::size_t i = 1; i < degrees.size(); ++i)
    if (degrees[i] < degrees[i - 1]) throw InvalidArgument("weil_scaling: degrees must be nondecreasing");
  std::vector<ScalingRow> rows;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    ScalingRow r;
    r.step = static_cast<i64>(i + 1);
    r.height_factor = Rational(1, r.step * r.step);
    r.point_height = base_height / static_cast<double>(r.step * r.step);
    r.degree = degrees[i];
    r.dim = degrees[i] * g_base;
    r.hst = static_cast<double>(degrees[i]) * hst_base;
    r.zariski_closure_dim = g_base;
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Miscellaneous bounds

// 1 <= ∏_{p|N}(1 + 1/p) <= α log log N over admissible 5 <= N <= N_max.
struct IndexFactorCheck {
  double alpha = 3.0;
  double worst_ratio = 0.0;  // max ∏(1+1/p) / log log N
  i64 worst_N = 0;
  bool holds = true;
};

inline IndexFactorCheck index_factor_check(i64 N_max, double alpha = 3.0) {
  IndexFactorCheck c;
  c.alpha = alpha;
  for (i64 N = 5; N <= N_max; ++N) {
    if (!is_admissible_level(N)) continue;
    const double f = index_factor(N);
    const double ratio = f / std::log(std::log(static_cast<double>(N)));
    if (ratio > c.worst_ratio) {
      c.worst_ratio = ratio;
      c.worst_N = N;
    }
    if (f < 1.0 || ratio > alpha) c.holds = false;
  }
  return c;
}

// Lower bound N^{7/6 − ε} on the modular degree of an optimal curve of conductor N.
inline double watkins_degree_lower_bound(i64 N, double epsilon) {
  return std::pow(static_cast<double>(N), 7.0 / 6.0 - epsilon);
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman: need two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace gzh
