#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gzh/arith.hpp"

using namespace gzh;

TEST(Factorize, SmallExamples) {
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_EQ(factorize(12).factors, (std::vector<PrimePower>{{2, 2}, {3, 1}}));
  EXPECT_EQ(factorize(35).factors, (std::vector<PrimePower>{{5, 1}, {7, 1}}));
  EXPECT_THROW(factorize(0), InvalidArgument);
  EXPECT_THROW(factorize(-4), InvalidArgument);
}

TEST(Factorize, ReconstructsEveryNUpTo1e5) {
  for (i64 n = 1; n <= 100000; ++n) {
    const auto f = factorize(n);
    ASSERT_EQ(f.product(), n) << n;
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      ASSERT_TRUE(is_prime(f.factors[i].prime));
      if (i) {
        ASSERT_LT(f.factors[i - 1].prime, f.factors[i].prime);
      }
    }
  }
}

TEST(Factorize, LargeSemiprime) {
  // both factors sit above the sieve limit
  const i64 p = 1000003, q = 2000003;
  ASSERT_TRUE(is_prime(p));
  ASSERT_TRUE(is_prime(q));
  EXPECT_EQ(factorize(p * q).factors, (std::vector<PrimePower>{{p, 1}, {q, 1}}));
  EXPECT_EQ(factorize(i64{1} << 62).factors, (std::vector<PrimePower>{{2, 62}}));
}

TEST(Divisors, Examples) {
  EXPECT_EQ(divisors(1), (std::vector<i64>{1}));
  EXPECT_EQ(divisors(12), (std::vector<i64>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(35), (std::vector<i64>{1, 5, 7, 35}));
}

TEST(Divisors, TauMatchesBruteForce) {
  for (i64 n = 1; n <= 10000; ++n) {
    i64 brute = 0;
    for (i64 d = 1; d <= n; ++d) brute += n % d == 0;
    const auto ds = divisors(n);
    ASSERT_EQ(tau(n), static_cast<i64>(ds.size()));
    ASSERT_EQ(tau(n), brute);
    ASSERT_TRUE(std::is_sorted(ds.begin(), ds.end()));
  }
  EXPECT_EQ(tau(1), 1);
  EXPECT_EQ(tau(12), 6);
  EXPECT_EQ(tau(35), 4);
}

TEST(DivisorSums, Sigma1AndSquarefree) {
  EXPECT_EQ(sigma1(1), 1);
  EXPECT_EQ(sigma1(6), 12);
  EXPECT_EQ(sigma1(12), 28);
  for (i64 n = 1; n <= 500; ++n) {
    i64 s = 0;
    for (i64 d : divisors(n)) s += d;
    ASSERT_EQ(sigma1(n), s);
  }
  EXPECT_FALSE(is_squarefree(12));
  EXPECT_TRUE(is_squarefree(35));
  EXPECT_TRUE(is_squarefree(-3));
  EXPECT_FALSE(is_squarefree(-20));
  EXPECT_EQ(omega(30), 3);
  EXPECT_EQ(primes_up_to(10), (std::vector<i64>{2, 3, 5, 7}));
  EXPECT_TRUE(primes_up_to(1).empty());
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(-3, 7), 1);
  EXPECT_EQ(kronecker(-3, 5), -1);
  for (i64 a : {-100, -3, 0, 1, 17}) EXPECT_EQ(kronecker(a, 1), 1);
  EXPECT_THROW(kronecker(0, 0), InvalidArgument);
}

TEST(Kronecker, Conventions) {
  EXPECT_EQ(kronecker(1, 0), 1);
  EXPECT_EQ(kronecker(-1, 0), 1);
  EXPECT_EQ(kronecker(5, 0), 0);
  EXPECT_EQ(kronecker(-5, -1), -1);
  EXPECT_EQ(kronecker(5, -1), 1);
  // (a/2) by a mod 8
  EXPECT_EQ(kronecker(1, 2), 1);
  EXPECT_EQ(kronecker(7, 2), 1);
  EXPECT_EQ(kronecker(3, 2), -1);
  EXPECT_EQ(kronecker(5, 2), -1);
  EXPECT_EQ(kronecker(-3, 2), -1);
  EXPECT_EQ(kronecker(6, 2), 0);
  // (−3/−14) = (−3/−1)(−3/2)(−3/7) = (−1)(−1)(1)
  EXPECT_EQ(kronecker(-3, -14), 1);
}

TEST(Kronecker, QuadraticResiduesForSmallPrimes) {
  for (i64 p : primes_up_to(100)) {
    if (p == 2) continue;
    std::set<i64> squares;
    for (i64 x = 1; x < p; ++x) squares.insert(x * x % p);
    for (i64 a = 1; a < p; ++a) ASSERT_EQ(kronecker(a, p) == 1, squares.count(a) == 1) << a << " " << p;
    ASSERT_EQ(kronecker(0, p), 0);
    ASSERT_EQ(kronecker(-p, p), 0);
  }
}

TEST(Kronecker, MultiplicativeInTopArgument) {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<i64> a_dist(-100000, 100000);
  std::uniform_int_distribution<i64> b_dist(0, 50000);
  for (int i = 0; i < 1000; ++i) {
    const i64 a = a_dist(rng), a2 = a_dist(rng), b = 2 * b_dist(rng) + 1;
    ASSERT_EQ(kronecker(a, b) * kronecker(a2, b), kronecker(a * a2, b)) << a << " " << a2 << " " << b;
  }
}

TEST(Kronecker, MultiplicativeInBottomArgument) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<i64> dist(-3000, 3000);
  for (int i = 0; i < 1000; ++i) {
    const i64 a = dist(rng), b = dist(rng), b2 = dist(rng);
    if (b == 0 || b2 == 0) continue;
    ASSERT_EQ(kronecker(a, b) * kronecker(a, b2), kronecker(a, b * b2)) << a << " " << b << " " << b2;
  }
}

TEST(IntegerRoots, IsqrtExact) {
  for (i64 n = 0; n < 100000; ++n) {
    const i64 r = isqrt(n);
    ASSERT_LE(r * r, n);
    ASSERT_GT((r + 1) * (r + 1), n);
  }
  const i64 big = 3037000499;  // floor(sqrt(2^63 - 1))
  EXPECT_EQ(isqrt(big * big), big);
  EXPECT_EQ(isqrt(big * big - 1), big - 1);
  EXPECT_EQ(isqrt(INT64_MAX), big);
  EXPECT_THROW(isqrt(-1), InvalidArgument);
  EXPECT_TRUE(is_square(144));
  EXPECT_FALSE(is_square(-4));
  EXPECT_EQ(mod_floor(-7, 4), 1);
}
