#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gzh/quadfield.hpp"

using namespace gzh;

namespace {

std::vector<i64> valid_discriminants(i64 max_abs) {
  std::vector<i64> out;
  for (i64 D = -3; D >= -max_abs; --D)
    if (mod_floor(D, 4) == 1 && is_squarefree(D)) out.push_back(D);
  return out;
}

// solutions of f(x, y) = n inside a generous box
i64 brute_rep(const QuadraticForm& f, i64 n, i64 box) {
  i64 count = 0;
  for (i64 x = -box; x <= box; ++x)
    for (i64 y = -box; y <= box; ++y) count += f(x, y) == n;
  return count;
}

std::string message_of(i64 D) {
  try {
    make_discriminant(D);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Discriminant, Examples) {
  const auto d3 = make_discriminant(-3);
  EXPECT_EQ(d3.h, 1);
  EXPECT_EQ(d3.u, 3);
  const auto d7 = make_discriminant(-7);
  EXPECT_EQ(d7.h, 1);
  EXPECT_EQ(d7.u, 1);
  const auto d23 = make_discriminant(-23);
  EXPECT_EQ(d23.h, 3);
  EXPECT_EQ(d23.u, 1);
}

TEST(Discriminant, RejectionsNameTheCondition) {
  EXPECT_NE(message_of(5).find("D < 0"), std::string::npos);
  EXPECT_NE(message_of(0).find("D < 0"), std::string::npos);
  EXPECT_NE(message_of(-4).find("D ≡ 1 (mod 4) violated"), std::string::npos);
  EXPECT_NE(message_of(-8).find("D ≡ 1 (mod 4)"), std::string::npos);
  EXPECT_NE(message_of(-27).find("squarefree"), std::string::npos);
}

TEST(ReducedForms, Examples) {
  auto cg = reduced_forms(make_discriminant(-3));
  EXPECT_EQ(cg.forms, (std::vector<QuadraticForm>{{1, 1, 1}}));
  cg = reduced_forms(make_discriminant(-15));
  EXPECT_EQ(cg.forms, (std::vector<QuadraticForm>{{1, 1, 4}, {2, 1, 2}}));
  cg = reduced_forms(make_discriminant(-23));
  EXPECT_EQ(cg.forms, (std::vector<QuadraticForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}}));
  EXPECT_EQ(cg.forms[cg.principal_index], (QuadraticForm{1, 1, 6}));
}

TEST(ReducedForms, InvariantsUpTo500) {
  for (i64 D : valid_discriminants(500)) {
    const auto cg = reduced_forms(make_discriminant(D));
    std::set<std::tuple<i64, i64, i64>> seen;
    for (const auto& f : cg.forms) {
      ASSERT_EQ(f.discriminant(), D);
      ASSERT_LE(std::abs(f.b), f.a);
      ASSERT_LE(f.a, f.c);
      if (std::abs(f.b) == f.a || f.a == f.c) {
        ASSERT_GE(f.b, 0);
      }
      ASSERT_EQ(std::gcd(std::gcd(f.a, std::abs(f.b)), f.c), 1);
      ASSERT_TRUE(seen.insert({f.a, f.b, f.c}).second);
    }
    ASSERT_EQ(static_cast<i64>(cg.forms.size()), cg.disc.h);
  }
}

TEST(RepCount, PrincipalExamples) {
  const auto d3 = make_discriminant(-3);
  EXPECT_EQ(rep_count_principal(d3, 1), 1);
  EXPECT_EQ(rep_count_principal(d3, 7), 2);
  EXPECT_EQ(rep_count(d3.principal_form(), 7), 12);
  EXPECT_EQ(rep_count_principal(d3, 5), 0);
  EXPECT_THROW(rep_count_principal(d3, 0), InvalidArgument);
}

TEST(RepCount, MatchesBoxEnumeration) {
  for (i64 D : {-3, -7, -15, -23, -47}) {
    const auto cg = reduced_forms(make_discriminant(D));
    for (const auto& f : cg.forms)
      for (i64 n = 1; n <= 150; ++n) ASSERT_EQ(rep_count(f, n), brute_rep(f, n, 30)) << D << " " << n;
  }
}

TEST(RepCount, RadiusInvariance) {
  for (i64 D : {-3, -7, -23, -71}) {
    const auto cg = reduced_forms(make_discriminant(D));
    for (const auto& f : cg.forms)
      for (i64 n = 1; n <= 400; ++n) {
        const i64 r = rep_search_radius(f, n);
        ASSERT_EQ(rep_count(f, n), rep_count(f, n, r + 7)) << D << " " << n;
        ASSERT_EQ(rep_count(f, n), rep_count(f, n, 3 * r + 50));
      }
  }
}

TEST(IdealCount, Examples) {
  EXPECT_EQ(ideal_count_total(make_discriminant(-3), 3), 1);
  for (i64 D : {-3, -7, -15, -23}) EXPECT_EQ(ideal_count_total(make_discriminant(D), 1), 1);
  const auto d15 = make_discriminant(-15);
  // 2 splits into two non-principal ideals
  EXPECT_EQ(ideal_count_total(d15, 2), 2);
  EXPECT_EQ(rep_count_principal(d15, 2), 0);
}

TEST(IdealCount, DivisorSumIdentity) {
  for (i64 D : {-3, -7, -15, -23, -31, -35}) {
    const auto cg = reduced_forms(make_discriminant(D));
    for (i64 n = 1; n <= 2000; ++n) {
      i64 expected = 0;
      for (i64 d : divisors(n)) expected += kronecker(D, d);
      ASSERT_EQ(ideal_count_total(cg, n), expected) << D << " " << n;
    }
  }
}

TEST(GenusCharacter, Examples) {
  const auto d3 = make_discriminant(-3);
  const auto d15 = make_discriminant(-15);
  for (auto conv : {EpsilonConvention::kResidueConsistent, EpsilonConvention::kLiteral}) {
    EXPECT_EQ(eps_genus(d3, 7, 1, 1, conv), 1);
    EXPECT_EQ(eps_genus(d15, 11, 1, 1, conv), 1);
    EXPECT_EQ(eps_genus(d3, 7, 2, 1, conv), kronecker(-3, -14));
    EXPECT_EQ(eps_genus(d15, 7, 5, 5, conv), kronecker(-3, 5) * kronecker(5, -7));
  }
  EXPECT_EQ(genus_split(d15, 5).D2, 5);
  EXPECT_EQ(genus_split(d15, 5).D1, -3);
  EXPECT_EQ(genus_split(d15, 3).D2, -3);
  EXPECT_THROW(eps_genus(d3, 7, 4, 3, EpsilonConvention::kLiteral), InvalidArgument);
  EXPECT_THROW(eps_genus(d3, 6, 4, 2, EpsilonConvention::kLiteral), InvalidArgument);
  // gcd(d, n/d, D) > 1 forces zero
  EXPECT_EQ(eps_genus(d3, 7, 9, 3), 0);
}

TEST(GenusCharacter, LiteralDefinitionByHand) {
  // ε(n, d) = (D1/d)(D2/(−N n/d)) evaluated independently of genus_split
  for (i64 D : {-3, -15, -35}) {
    const auto disc = make_discriminant(D);
    for (i64 N : {7, 11, 13}) {
      if (std::gcd(N, -D) != 1) continue;
      for (i64 n = 1; n <= 200; ++n)
        for (i64 d : divisors(n)) {
          const i64 g3 = std::gcd(std::gcd(d, n / d), -D);
          int expected = 0;
          if (g3 == 1) {
            const i64 g = std::gcd(d, -D);
            i64 D2 = 0;
            for (i64 cand : {g, -g})
              if (((cand % 4) + 4) % 4 == 1) D2 = cand;
            expected = kronecker(D / D2, d) * kronecker(D2, -N * (n / d));
          }
          ASSERT_EQ(eps_genus(disc, N, n, d, EpsilonConvention::kLiteral), expected);
        }
    }
  }
}

TEST(DivisorSums, Bounds) {
  for (i64 D : {-3, -7, -15}) {
    const auto disc = make_discriminant(D);
    const i64 N = D == -7 ? 11 : 7;
    for (i64 n = 1; n <= 10000; ++n) {
      const i64 s = sigma_principal(disc, N, n);
      ASSERT_LE(std::abs(s), tau(n));
      const double sp = sigma_prime_principal(disc, N, n);
      ASSERT_LE(std::abs(sp), static_cast<double>(tau(n)) * std::log(static_cast<double>(n)) + 1e-9);
    }
  }
}

TEST(DivisorSums, Examples) {
  const auto d3 = make_discriminant(-3);
  EXPECT_EQ(sigma_principal(d3, 7, 1), 1);
  EXPECT_EQ(sigma_prime_principal(d3, 7, 1), 0.0);
  i64 s4 = 0;
  for (i64 d : {1, 2, 4}) s4 += eps_genus(d3, 7, 4, d);
  EXPECT_EQ(sigma_principal(d3, 7, 4), s4);
  EXPECT_LE(std::abs(s4), 3);
  for (i64 p : {5, 11, 13, 17, 19}) EXPECT_EQ(sigma_principal(d3, 7, p), eps_genus(d3, 7, p, 1) + eps_genus(d3, 7, p, p));
}
