#include <gtest/gtest.h>

#include <cmath>

#include "berglab/measures.hpp"
#include "oracles.hpp"

using namespace berglab;

TEST(Measures, AtomicMass) {
  const auto mu = Measure::atomic({0.0}, {1.0});
  EXPECT_DOUBLE_EQ(mu.mass(Region{disk_euclidean(DiskPoint(0.0), 1.0)}), 1.0);
  EXPECT_DOUBLE_EQ(mu.mass(carleson_square(DiskPoint(0.5))), 0.0);
  EXPECT_DOUBLE_EQ(mu.total_mass(), 1.0);
}

TEST(Measures, RadialMassMatchesSquareFixture) {
  const auto mu = Measure::radial(RadialWeight::standard(0));
  EXPECT_NEAR(mu.mass(carleson_square(DiskPoint(0.5))), oracle::square_area(0.5), 1e-12);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-12);
}

TEST(Measures, DensityMassMatchesRadial) {
  const auto d = Measure::density([](Complex z) { return 2.0 * (1 - std::norm(z)); }, "std1");
  const auto r = Measure::radial(RadialWeight::standard(1));
  const Region reg{disk_euclidean(DiskPoint(0.4, 0.3), 1.0)};
  EXPECT_NEAR(d.mass(reg), r.mass(reg), 1e-8 * r.mass(reg));
}

TEST(Measures, PowerMeasure) {
  // int (1-t)^{1/2} 2t dt = 8/15
  EXPECT_NEAR(Measure::power(0.5).total_mass(), 8.0 / 15.0, 1e-10);
}

TEST(Measures, RestrictTail) {
  const auto mu = Measure::atomic({0.3, 0.8}, {2.0, 5.0});
  const auto [hi0, lo0] = mu.restrict_tail(0.0);
  EXPECT_DOUBLE_EQ(hi0.total_mass(), 7.0);
  EXPECT_DOUBLE_EQ(lo0.total_mass(), 0.0);
  const auto [hi, lo] = mu.restrict_tail(0.5);
  ASSERT_EQ(hi.atoms().size(), 1u);
  EXPECT_EQ(hi.atoms()[0], Complex(0.8));
  EXPECT_DOUBLE_EQ(hi.atom_masses()[0], 5.0);
  EXPECT_DOUBLE_EQ(lo.total_mass(), 2.0);
  for (double s : {0.2, 0.5, 0.9}) {
    const auto [a, b] = Measure::radial(RadialWeight::standard(0)).restrict_tail(s);
    EXPECT_NEAR(a.total_mass(), 1 - s * s, 1e-12);
    EXPECT_NEAR(a.total_mass() + b.total_mass(), 1.0, 1e-12);
  }
}

TEST(Measures, Scale) {
  const auto mu = Measure::atomic({0.0}, {1.0});
  EXPECT_DOUBLE_EQ(mu.scale(3).total_mass(), 3.0);
  EXPECT_DOUBLE_EQ(mu.scale(1).total_mass(), 1.0);
  const auto r = Measure::radial(RadialWeight::standard(1));
  const auto S = carleson_square(DiskPoint(0.7));
  EXPECT_NEAR(r.scale(0.5).mass(S), 0.5 * r.mass(S), 1e-15);
}

TEST(Measures, MonotoneAndAdditive) {
  const auto mu = Measure::power(0.5);
  const auto inner = Region{disk_euclidean(DiskPoint(0.5), 0.5)};
  const auto outer = Region{disk_euclidean(DiskPoint(0.5), 1.0)};
  EXPECT_LE(mu.mass(inner), mu.mass(outer));
  const auto a = mu.restrict(0.0, 0.6), b = mu.restrict(0.6, 1.0);
  EXPECT_NEAR(a.mass(outer) + b.mass(outer), mu.mass(outer), 1e-10);
}

TEST(Measures, EvenMoments) {
  const auto mu = Measure::radial(RadialWeight::standard(0));
  const auto m = mu.even_moments(5);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(m[n], 1.0 / (n + 1), 1e-12);
  const auto at = Measure::atomic({Complex(0, 0.5)}, {2.0}).even_moments(3);
  EXPECT_DOUBLE_EQ(at[2], 2.0 * 0.0625);
}

TEST(Measures, Discretize) {
  const auto mu = Measure::power(0.5).restrict(0.0, 0.9);
  const auto d = mu.discretize();
  EXPECT_NEAR(d.total(), mu.total_mass(), 1e-8);
}

TEST(Measures, HashStable) {
  const auto a = Measure::atomic({0.1, 0.2}, {1.0, 2.0});
  const auto b = Measure::atomic({0.1, 0.2}, {1.0, 2.0});
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), a.scale(2).hash());
  EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
}

TEST(Measures, RejectsInvalid) {
  EXPECT_THROW(Measure::atomic({0.1}, {-1.0}), DomainError);
  EXPECT_THROW(Measure::atomic({1.0}, {1.0}), DomainError);
}
