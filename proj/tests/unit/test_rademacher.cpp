#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "berglab/rademacher.hpp"
#include "oracles.hpp"

using namespace berglab;

TEST(Rademacher, Eval) {
  EXPECT_EQ(rademacher_eval(1, 0.3), 1);
  EXPECT_EQ(rademacher_eval(2, 0.3), -1);
  for (int k = 1; k <= 8; ++k) {
    const double den = std::ldexp(1.0, k + 1);
    for (int j = 0; j < (1 << k); ++j) EXPECT_EQ(rademacher_eval(k, (2 * j + 1) / den), j % 2 ? -1 : 1);
  }
  const auto s = rademacher_signs(3, 0.3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 1);
  EXPECT_EQ(s[1], -1);
}

TEST(Rademacher, Combination) {
  std::vector<AnalyticFunction> f{AnalyticFunction::monomial(0), AnalyticFunction::monomial(1)};
  const std::vector<Complex> c{2.0, 3.0};
  const auto g = rademacher_combination(c, f, 0.3);  // signs +1, -1
  EXPECT_LT(std::abs(g(0.5) - Complex(2.0 - 1.5)), 1e-15);
  const auto atoms = rademacher_combination(c, std::vector{kernel_atom(0.2, 4).function, kernel_atom(0.4, 4).function}, 0.3);
  EXPECT_EQ(atoms.atom_list().size(), 2u);
  EXPECT_LT(std::abs(atoms.atom_list()[1].c + 3.0), 1e-15);
}

TEST(Rademacher, KhinchinSingleTerm) {
  for (double p : {0.5, 1.0, 3.0}) EXPECT_NEAR(khinchin_check(std::vector<Complex>{Complex(0.3, 2)}, p).ratio, 1.0, 1e-14);
}

TEST(Rademacher, KhinchinTwoEqualTerms) {
  // four sign patterns: |2|, |0|, |0|, |2| -> rhs 1, lhs sqrt 2
  const auto r = khinchin_check(std::vector<Complex>{1.0, 1.0}, 1);
  EXPECT_NEAR(r.rhs, 1.0, 1e-15);
  EXPECT_NEAR(r.ratio, std::sqrt(2.0), 1e-15);
}

TEST(Rademacher, KhinchinP2) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> n;
  for (int K = 1; K <= 16; K += 3) {
    std::vector<Complex> c(K);
    for (auto& x : c) x = Complex(n(g), n(g));
    EXPECT_NEAR(khinchin_check(c, 2).ratio, 1.0, 1e-12);
  }
}

TEST(Rademacher, KhinchinMatchesEnumeration) {
  std::mt19937_64 g(2);
  std::normal_distribution<double> n;
  for (double p : {1.0, 4.0})
    for (int K : {3, 8, 12}) {
      std::vector<Complex> c(K);
      for (auto& x : c) x = Complex(n(g), n(g));
      const auto r = khinchin_check(c, p);
      EXPECT_NEAR(r.rhs, oracle::khinchin_rhs(c, p), 1e-12 * r.rhs);
      EXPECT_NEAR(r.lhs, oracle::l2(c), 1e-14 * r.lhs);
    }
}

TEST(Rademacher, KhinchinTooLarge) {
  EXPECT_THROW(khinchin_check(std::vector<Complex>(kMaxEnumeration + 1, 1.0), 2), ParameterError);
}

TEST(Rademacher, Kahane) {
  // scalar case reduces to Khinchin moments
  std::vector<std::vector<Complex>> x{{1.0}, {2.0}, {Complex(0, 1)}};
  const std::vector<double> w{1.0};
  const auto k = kahane_check(x, w, 2.0, 4.0, 2.0);
  const std::vector<Complex> c{1.0, 2.0, Complex(0, 1)};
  EXPECT_NEAR(k.moment_p, oracle::khinchin_rhs(c, 4), 1e-12);
  EXPECT_NEAR(k.moment_q, oracle::khinchin_rhs(c, 2), 1e-12);
  EXPECT_GE(k.ratio, 1.0);
}
