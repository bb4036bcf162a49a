#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "berglab/geometry.hpp"
#include "berglab/regions.hpp"
#include "oracles.hpp"

using namespace berglab;

TEST(Geometry, DiskPointRejectsBoundary) {
  EXPECT_THROW(DiskPoint(1.0), DomainError);
  EXPECT_THROW(DiskPoint(0.6, 0.8), DomainError);
}

TEST(Geometry, Mobius) {
  const Complex a(0.3, -0.4);
  EXPECT_LT(std::abs(mobius(a, a)), 1e-15);
  EXPECT_LT(std::abs(mobius(a, Complex(0)) - a), 1e-15);
  EXPECT_NEAR(mobius(Complex(0.5), Complex(-0.5)).real(), 0.8, 1e-15);
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int i = 0; i < 100; ++i) {
    const Complex b(u(g), u(g)), z(u(g), u(g));
    EXPECT_LT(std::abs(mobius(b, mobius(b, z)) - z), 1e-13);
    EXPECT_LT(std::abs(mobius(b, z) - oracle::mobius(b, z)), 1e-14);
  }
}

TEST(Geometry, BergmanDistance) {
  EXPECT_EQ(bergman_distance(0.0, 0.0), 0.0);
  EXPECT_NEAR(bergman_distance(0.0, 0.5), 0.5 * std::log(3.0), 1e-15);
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int i = 0; i < 100; ++i) {
    const Complex a(u(g), u(g)), z(u(g), u(g)), c(u(g), u(g));
    EXPECT_NEAR(bergman_distance(a, z), bergman_distance(z, a), 1e-12);
    EXPECT_NEAR(bergman_distance(a, z), oracle::beta(a, z), 1e-12);
    EXPECT_NEAR(bergman_distance(mobius(c, a), mobius(c, z)), bergman_distance(a, z), 1e-10);
  }
}

TEST(Geometry, PseudoHyperbolicComplement) {
  const Complex a(0.999999, 0), z(0.9999995, 0);
  const double m = std::abs(oracle::mobius(a, z));
  EXPECT_NEAR(pseudo_hyperbolic_complement(a, z), (1 - m) * (1 + m), 1e-9);
  EXPECT_GT(pseudo_hyperbolic_complement(a, z), 0.0);
}

TEST(Geometry, DiskEuclidean) {
  const double r = std::atanh(0.5);
  const auto d0 = disk_euclidean(DiskPoint(0.0), r);
  EXPECT_LT(std::abs(d0.euclid_center), 1e-15);
  EXPECT_NEAR(d0.euclid_radius, 0.5, 1e-15);
  const auto d = disk_euclidean(DiskPoint(0.5), r);
  EXPECT_NEAR(d.euclid_center.real(), 0.4, 1e-15);
  EXPECT_NEAR(d.euclid_radius, 0.4, 1e-15);
  for (int k = 0; k < 64; ++k) {
    const Complex w = d.euclid_center + std::polar(d.euclid_radius, 2 * kPi * k / 64);
    EXPECT_NEAR(bergman_distance(0.5, w), r, 1e-12);
  }
  EXPECT_NEAR(disk_euclidean(DiskPoint(0.7), 1.0).euclid_radius, oracle::disk_radius(0.7, 1.0), 1e-15);
  EXPECT_TRUE(d.contains(0.6));
  EXPECT_FALSE(d.contains(0.85));
}

TEST(Geometry, CarlesonSquare) {
  const auto S = carleson_square(DiskPoint(0.5));
  EXPECT_TRUE(S.contains(0.7));
  EXPECT_FALSE(S.contains(0.3));
  EXPECT_FALSE(S.contains(std::polar(0.7, 0.3)));
  EXPECT_TRUE(S.contains(std::polar(0.7, 0.07)));
  EXPECT_NEAR(S.angular_width(), 0.5 / kPi, 1e-15);
  const auto S0 = carleson_square(DiskPoint(0.0));
  EXPECT_TRUE(S0.degenerate());
  EXPECT_TRUE(S0.contains(0.0));
  EXPECT_TRUE(S0.contains(Complex(-0.99, 0.01)));
}

TEST(Geometry, ArcLengthMatchesSampling) {
  const Region regions[] = {Region{disk_euclidean(DiskPoint(0.5, 0.2), 0.8)}, to_region(carleson_square(DiskPoint(0.6)))};
  for (const auto& reg : regions)
    for (double t : {0.3, 0.55, 0.7, 0.9}) {
      int inside = 0;
      const int n = 200000;
      for (int k = 0; k < n; ++k) inside += region_contains(reg, std::polar(t, 2 * kPi * (k + 0.5) / n));
      EXPECT_NEAR(arc_length_inside(reg, t), 2 * kPi * inside / n, 1e-4);
    }
}

TEST(Geometry, RegionIntegralCrossCheck) {
  const Region reg{disk_euclidean(DiskPoint(0.6, -0.1), 1.0)};
  auto v = [](double t) { return 1 + t * t; };
  const double one_d = radial_region_integral(v, reg);
  const double two_d = region_integral_2d([&](Complex w) { return v(std::abs(w)); }, reg);
  EXPECT_NEAR(one_d, two_d, 1e-9 * one_d);
}

TEST(Geometry, LatticeSingleRing) {
  const auto L = generate_lattice(0.5, 0.5, 1e-2);
  const auto rep = verify_lattice(L, 100);
  EXPECT_GE(rep.min_pairwise, 0.5 - 1e-9);
}

TEST(Geometry, LatticeRejectsBadParameters) {
  EXPECT_THROW(generate_lattice(1.0, 0.5), ParameterError);
  EXPECT_THROW(generate_lattice(0.0, 0.5), ParameterError);
}

TEST(Geometry, LatticeVerifies) {
  const auto L = generate_lattice(0.5, 1.0, 1e-2);
  const auto rep = verify_lattice(L, 10000);
  EXPECT_EQ(rep.probes, 10000u);
  EXPECT_TRUE(rep.separated);
  EXPECT_TRUE(rep.covering);
  EXPECT_GE(rep.min_pairwise, 0.5 - 1e-9);
  EXPECT_LE(rep.max_probe_distance, 1.0 + 1e-6);
}

TEST(Geometry, LatticeNested) {
  const auto coarse = generate_lattice(0.5, 1.0, 1e-2);
  const auto fine = generate_lattice(0.5, 1.0, 1e-3);
  ASSERT_GT(fine.size(), coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) EXPECT_EQ(coarse.points[i], fine.points[i]);
}

TEST(Geometry, LatticeTruncation) {
  const auto L = generate_lattice(0.5, 1.0, 1e-3);
  const auto T = L.truncated(0.9);
  EXPECT_LT(T.size(), L.size());
  for (auto z : T.points) EXPECT_LE(std::abs(z), 0.9);
}

TEST(Geometry, VerifyDegenerateLattices) {
  Lattice twin;
  twin.points = {Complex(0.2, 0.1), Complex(0.2, 0.1)};
  twin.ring = {0, 0};
  twin.separation = 0.5;
  twin.covering = 1.0;
  twin.cutoff = 0.5;
  const auto r1 = verify_lattice(twin, 100);
  EXPECT_EQ(r1.min_pairwise, 0.0);
  EXPECT_FALSE(r1.separated);

  Lattice empty;
  empty.separation = 0.5;
  empty.covering = 1.0;
  empty.cutoff = 1e-2;
  const auto r2 = verify_lattice(empty, 100);
  EXPECT_FALSE(r2.covering);
  EXPECT_TRUE(std::isinf(r2.max_probe_distance));
}

TEST(Geometry, HyperbolicProbes) {
  const auto probes = hyperbolic_probes(1000, 1e-2);
  EXPECT_EQ(probes.size(), 1000u);
  for (auto z : probes) EXPECT_LE(std::abs(z), 1 - 1e-2 + 1e-12);
}

TEST(Geometry, OverlapFinite) {
  const auto L = generate_lattice(0.5, 1.0, 1e-2);
  const auto n = max_overlap(L, 1.0);
  // packing: the disjoint disks D(a_i, s/2) of the meeting points fit in D(a_j, 2R + s/2),
  // and the invariant area of D(0, r) is proportional to sinh^2 r
  const double bound = std::pow(std::sinh(2.25) / std::sinh(0.25), 2);
  EXPECT_GT(n, 0u);
  EXPECT_LE(static_cast<double>(n), bound);
}

TEST(Geometry, GreedyLattice) {
  std::vector<Complex> cand;
  for (int i = 0; i < 40; ++i) cand.push_back(std::polar(0.5, 2 * kPi * i / 40));
  const auto L = greedy_lattice(cand, 0.4);
  const auto rep = verify_lattice(L, 10);
  EXPECT_GE(rep.min_pairwise, 0.4);
  EXPECT_EQ(L.points.front(), cand.front());
}
