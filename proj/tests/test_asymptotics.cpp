#include <gtest/gtest.h>

#include <cmath>

#include "gzh/asymptotics.hpp"

using namespace gzh;

namespace {

SpectralEvalConfig small_config() {
  SpectralEvalConfig c;
  c.truncation = 20000;
  return c;
}

}  // namespace

TEST(LangSilverman, Examples) {
  const auto d3 = make_discriminant(-3);
  const auto d23 = make_discriminant(-23);
  EXPECT_DOUBLE_EQ(lang_silverman_bound(d3, make_level(d3, 11)).bound, 3.0);
  EXPECT_DOUBLE_EQ(lang_silverman_bound(d3, make_level(d3, 11)).bound_hu, 9.0);
  EXPECT_DOUBLE_EQ(lang_silverman_bound(d23, make_level(d23, 11)).bound, 9.0);
  EXPECT_THROW(lang_silverman_bound(d3, make_level(d3, 13)), InvalidArgument);
  EXPECT_THROW(lang_silverman_bound(d3, 0), InvalidArgument);
  // 3h/g → 0 along levels
  EXPECT_LT(lang_silverman_bound(d3, make_level(d3, 9973)).bound, 0.005);
}

TEST(LangSilverman, SurrogateIdentity) {
  const auto disc = make_discriminant(-3);
  for (i64 N : enum_levels(disc, 3000)) {
    const auto level = make_level(disc, N);
    if (level.genus == 0) continue;
    const double lhs = lang_silverman_bound(disc, level).bound_hu * hst_surrogate(level.genus, N);
    const double rhs = 3.0 * std::log(static_cast<double>(N));
    ASSERT_NEAR(lhs, rhs, 1e-12 * rhs) << N;
  }
}

TEST(WeilScaling, FactorialDegrees) {
  const auto rows = weil_scaling(2.0, 3, 5.0, {1, 2, 6, 24});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const i64 N = static_cast<i64>(i + 1);
    EXPECT_EQ(rows[i].step, N);
    EXPECT_EQ(rows[i].height_factor, Rational(1, N * N));
    EXPECT_DOUBLE_EQ(rows[i].point_height, 2.0 / static_cast<double>(N * N));
    EXPECT_EQ(rows[i].dim, 3 * rows[i].degree);
    EXPECT_DOUBLE_EQ(rows[i].hst, 5.0 * static_cast<double>(rows[i].degree));
    EXPECT_EQ(rows[i].zariski_closure_dim, 3);
  }
  EXPECT_EQ(rows[3].dim, 72);
}

TEST(WeilScaling, Invariants) {
  const std::vector<i64> degrees{1, 1, 2, 4, 4, 9, 30};
  const auto rows = weil_scaling(1.0, 2, 1.5, degrees);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].point_height, rows[i - 1].point_height);
    EXPECT_GE(rows[i].dim, rows[i - 1].dim);
    EXPECT_EQ(rows[i].zariski_closure_dim, rows[0].zariski_closure_dim);
    // ĥ·N² is constant
    EXPECT_EQ(rows[i].height_factor * Rational(rows[i].step * rows[i].step), Rational(1));
  }
  EXPECT_THROW(weil_scaling(1.0, 2, 1.5, {2, 3}), InvalidArgument);
  EXPECT_THROW(weil_scaling(1.0, 2, 1.5, {1, 3, 2}), InvalidArgument);
  EXPECT_THROW(weil_scaling(0.0, 2, 1.5, {1}), InvalidArgument);
}

TEST(Scan, LevelsSampledAndSorted) {
  const auto disc = make_discriminant(-3);
  const auto all = scan_levels(disc, 500, 5000);
  const auto some = scan_levels(disc, 500, 5000, 24);
  EXPECT_EQ(some.size(), 24u);
  EXPECT_EQ(some.front(), all.front());
  EXPECT_EQ(some.back(), all.back());
  EXPECT_TRUE(std::is_sorted(some.begin(), some.end()));
  EXPECT_THROW(scan_levels(disc, 3, 100), InvalidArgument);
  EXPECT_THROW(scan_levels(disc, 100, 50), InvalidArgument);
}

TEST(Scan, RowInvariants) {
  const auto disc = make_discriminant(-7);
  std::vector<i64> emitted;
  const auto rows = scan(disc, 5, 400, small_config(), 8, [&](const ScanRow& r) { emitted.push_back(r.N); });
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    EXPECT_EQ(emitted[i], r.N);
    if (i) {
      EXPECT_LT(rows[i - 1].N, r.N);
    }
    ASSERT_FALSE(r.error) << *r.error;
    EXPECT_NEAR(r.h_hat, r.term_i + r.term_ii + r.term_iii + r.term_iv, 1e-12);
    EXPECT_NEAR(r.hu_log_N, std::log(static_cast<double>(r.N)), 1e-14);
    EXPECT_NEAR(r.excess, r.h_hat - r.hu_log_N, 1e-12);
    EXPECT_EQ(r.genus, genus_X0(r.N));
    if (r.genus > 0) {
      ASSERT_TRUE(r.ls_bound && r.ls_ratio && r.ls_bound_h);
      EXPECT_NEAR(*r.ls_bound * r.hst_surrogate, r.hu_log_N, 1e-12 * r.hu_log_N);
    }
  }
}

TEST(Scan, DeterministicAcrossThreads) {
  const auto disc = make_discriminant(-3);
  auto one = small_config(), many = small_config();
  one.threads = 1;
  many.threads = 4;
  const auto a = scan(disc, 5, 300, one, 6), b = scan(disc, 5, 300, many, 6);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].N, b[i].N);
    EXPECT_EQ(a[i].h_hat, b[i].h_hat);
    EXPECT_EQ(a[i].h_hat_error, b[i].h_hat_error);
  }
}

TEST(Scan, FailuresStayInTheirRow) {
  const auto disc = make_discriminant(-3);
  auto c = small_config();
  c.max_tail_error = 1e-9;
  const auto rows = scan(disc, std::vector<i64>{7, 13, 19}, c);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.error.has_value());
    EXPECT_NE(r.error->find("tail bound"), std::string::npos);
    EXPECT_TRUE(std::isnan(r.h_hat));
  }
  // a non-Heegner level also fails only its own row
  const auto mixed = scan(disc, std::vector<i64>{7, 11}, small_config());
  EXPECT_FALSE(mixed[0].error);
  EXPECT_TRUE(mixed[1].error);
}

TEST(Scan, RatioApproachesOneForMinusSeven) {
  const auto disc = make_discriminant(-7);
  const auto rows = scan(disc, 100, 4000, SpectralEvalConfig{}, 6);
  std::vector<double> dev, inv;
  for (const auto& r : rows) {
    ASSERT_FALSE(r.error);
    dev.push_back(std::abs(r.ratio - 1.0));
    inv.push_back(1.0 / static_cast<double>(r.N));
  }
  EXPECT_GT(spearman(dev, inv), 0.0);
  EXPECT_LT(dev.back(), dev.front());
}

TEST(IndexFactor, LogLogBound) {
  const auto c = index_factor_check(10000, 3.0);
  EXPECT_TRUE(c.holds);
  EXPECT_LE(c.worst_ratio, 3.0);
  EXPECT_GT(c.worst_N, 0);
  EXPECT_FALSE(index_factor_check(10000, 1.0).holds);
}

TEST(Spearman, Basics) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  // ties get average ranks: ranks of y are 1.5, 1.5, 3
  EXPECT_NEAR(spearman({1, 2, 3}, {5, 5, 7}), std::sqrt(0.75), 1e-12);
  EXPECT_THROW(spearman({1}, {1}), InvalidArgument);
}

TEST(Watkins, PowerLaw) {
  EXPECT_NEAR(watkins_degree_lower_bound(1000, 0.0), std::pow(1000.0, 7.0 / 6.0), 1e-9);
  EXPECT_LT(watkins_degree_lower_bound(1000, 0.1), watkins_degree_lower_bound(1000, 0.0));
}
