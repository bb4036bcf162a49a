#include <gtest/gtest.h>

#include <cmath>

#include "berglab/carleson.hpp"
#include "oracles.hpp"

using namespace berglab;

namespace {

const RadialWeight w0 = RadialWeight::standard(0);
const RadialWeight w1 = RadialWeight::standard(1);

Measure omega_dA() { return Measure::radial(w0); }
Measure atom0(double m = 1.0) { return Measure::atomic({0.0}, {m}); }

OptimizerOptions quick() {
  OptimizerOptions o;
  o.budget = 400;
  return o;
}

}  // namespace

TEST(Carleson, Quotient) {
  for (auto kind : {RegionKind::Square, RegionKind::Disk})
    for (Complex z : {Complex(0.0), Complex(0.5), Complex(0.3, -0.8)})
      EXPECT_NEAR(carleson_quotient(Measure::radial(w1), w1, z, kind, 1.0), 1.0, 1e-12);
  EXPECT_EQ(carleson_quotient(atom0(), w0, 0.5, RegionKind::Square, 1.0), 0.0);
}

TEST(Carleson, M0IdentityExact) {
  for (double p : {2.0, 3.0}) {
    const auto rep = M0_sup(omega_dA(), w0, w0, w0, p, p);
    for (double v : rep.values) EXPECT_NEAR(v, 1.0, 1e-12);
    EXPECT_NEAR(rep.value, 1.0, 1e-12);
  }
}

TEST(Carleson, M0Homogeneous) {
  const auto mu = Measure::power(0.5);
  const double a = M0_sup(mu, w0, w0, w0, 2, 3).value;
  for (double c : {0.5, 3.0}) EXPECT_NEAR(M0_sup(mu.scale(c), w0, w0, w0, 2, 3).value, c * a, 1e-12 * c * a);
}

TEST(Carleson, M0AtomAtOrigin) {
  // sup of 1 / omega(D(z,1)) over grid points whose disk contains 0
  SupGrid grid;
  double oracle_sup = 0.0;
  for (double t : grid.radii)
    if (t < std::tanh(1.0)) oracle_sup = std::max(oracle_sup, 1.0 / std::pow(oracle::disk_radius(t, 1.0), 2));
  const double frozen = 4.0886094599314164;
  EXPECT_NEAR(oracle_sup, frozen, 1e-12);
  EXPECT_NEAR(M0_sup(atom0(), w0, w0, w0, 2, 2, 1.0, grid).value, frozen, 1e-9);
}

TEST(Carleson, VanishingProfileSupport) {
  const auto mu = Measure::atomic({0.5, Complex(0, -0.3)}, {1.0, 2.0});
  const auto rep = vanishing_profile(mu, w0, w0, w0, 2, 2, 0.5);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < rep.abscissa.size(); ++i) {
    const double t = rep.abscissa[i];
    // every point of the shell is farther than r from both atoms
    if (oracle::beta(t, 0.5) > 0.5 && oracle::beta(t, 0.3) > 0.5) {
      EXPECT_EQ(rep.values[i], 0.0) << t;
      ++zeros;
    }
  }
  EXPECT_GE(zeros, rep.abscissa.size() - 3);
  EXPECT_EQ(rep.verdict, "vanishing");
}

TEST(Carleson, VanishingProfileIdentity) {
  const auto rep = vanishing_profile(omega_dA(), w0, w0, w0, 2, 2, 1.0);
  for (double v : rep.values) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_EQ(rep.verdict, "not vanishing");
}

TEST(Carleson, VanishingProfilePowerDensity) {
  const auto rep = vanishing_profile(Measure::power(0.5), w0, w0, w0, 2, 2, 1.0);
  EXPECT_EQ(rep.verdict, "vanishing");
  for (std::size_t i = 1; i < rep.values.size(); ++i) EXPECT_LE(rep.values[i], rep.values[i - 1] * (1 + 1e-12));
}

TEST(Carleson, VanishingProfileNeedsPLeQ) {
  EXPECT_THROW(vanishing_profile(omega_dA(), w0, w0, w0, 3, 2, 1.0), ParameterError);
}

TEST(Carleson, SquareAndDiskSuprema) {
  const auto mu = Measure::power(0.5);
  const auto sq = carleson_sup(mu, w0, 2, 2, RegionKind::Square);
  const auto dk = carleson_sup(mu, w0, 2, 2, RegionKind::Disk);
  EXPECT_GT(sq.value, 0.0);
  EXPECT_LT(std::abs(std::log(sq.value / dk.value)), std::log(50.0));
  EXPECT_NEAR(carleson_sup(omega_dA(), w0, 2, 2, RegionKind::Square).value, 1.0, 1e-12);
}

TEST(Carleson, LambdaFiniteAtomic) {
  const auto L = generate_lattice(0.5, 1.0, 1e-2);
  const auto mu = Measure::atomic({0.2, Complex(0.1, 0.6)}, {1.0, 0.5});
  const auto rep = lambda_seq_norm(mu, w0, w0, w0, 3, 2, L, 1.0);
  EXPECT_TRUE(std::isfinite(rep.value));
  EXPECT_GT(rep.value, 0.0);
  EXPECT_FALSE(rep.diverging);
  const auto rep3 = lambda_seq_norm(mu.scale(3), w0, w0, w0, 3, 2, L, 1.0);
  EXPECT_NEAR(rep3.value, 3 * rep.value, 1e-12 * rep.value);
  EXPECT_THROW(lambda_seq_norm(mu, w0, w0, w0, 2, 2, L, 1.0), ParameterError);
}

TEST(Carleson, LambdaIdentityRefinement) {
  // equal weights, p = 3, q = 2: lambda_j = omega(D_j)^{1/6} and sum lambda_j^6 stays bounded
  const auto L = generate_lattice(0.5, 1.0, 1e-4);
  const auto rep = lambda_seq_norm(omega_dA(), w0, w0, w0, 3, 2, L, 1.0);
  ASSERT_GE(rep.partial_norms.size(), 3u);
  for (std::size_t i = 1; i < rep.partial_norms.size(); ++i) EXPECT_GE(rep.partial_norms[i], rep.partial_norms[i - 1]);
  EXPECT_FALSE(rep.diverging);
  EXPECT_TRUE(std::isfinite(rep.value));
}

TEST(Carleson, MuHat) {
  EXPECT_EQ(mu_hat_norm(Measure(), w0, w0, w0, 3, 2, 1.0).value, 0.0);
  const auto mu = Measure::power(0.5).restrict(0.0, 0.9);
  const double a = mu_hat_norm(mu, w0, w0, w0, 3, 2, 1.0).value;
  EXPECT_NEAR(mu_hat_norm(mu.scale(3), w0, w0, w0, 3, 2, 1.0).value, 3 * a, 1e-12 * a);
  EXPECT_THROW(mu_hat_norm(mu, w0, w0, w0, 2, 3, 1.0), ParameterError);
}

TEST(Carleson, PhiAndPsi) {
  EXPECT_NEAR(psi_norm(atom0(), w0, 4.0, 3, 2).value, 1.0, 1e-6);
  EXPECT_NEAR(psi_value(atom0(), w0, 4.0, Complex(0.3, 0.2)), 1.0, 1e-15);
  EXPECT_EQ(psi_norm(Measure(), w0, 4.0, 3, 2).value, 0.0);
  EXPECT_EQ(phi_norm(Measure(), w0, 3, 2, 1.0).value, 0.0);
  // identity measure: Phi == 1, norm 1 in L^3
  EXPECT_NEAR(phi_norm(omega_dA().restrict(0, 1), w0, 3, 2, 1.0).value, 1.0, 1e-4);
  const auto mu = Measure::power(0.5).restrict(0, 0.9);
  const double p = phi_norm(mu, w0, 3, 2, 1.0).value, s = psi_norm(mu, w0, 4.0, 3, 2).value;
  EXPECT_NEAR(phi_norm(mu.scale(0.5), w0, 3, 2, 1.0).value, 0.5 * p, 1e-12 * p);
  EXPECT_NEAR(psi_norm(mu.scale(0.5), w0, 4.0, 3, 2).value, 0.5 * s, 1e-12 * s);
}

TEST(Carleson, AngularKernelMean) {
  for (double x : {0.0, 0.3, 0.8}) {
    const double o = oracle::simpson([&](double t) { return std::pow(std::abs(1.0 - std::polar(x, t)), -4.0); }, 0, 2 * oracle::pi) /
                     (2 * oracle::pi);
    EXPECT_NEAR(angular_kernel_mean(4.0, x), o, 1e-9 * o);
  }
}

TEST(Carleson, EmbeddingAtom) {
  const auto e = embedding_norm(w0, 2, atom0(), 2, quick());
  EXPECT_GE(e.value, 0.99);
  EXPECT_LE(e.value, 1.0 + 1e-6);
  for (double m : {0.5, 3.0}) EXPECT_NEAR(embedding_norm(w0, 2, atom0(m), 2, quick()).value, std::sqrt(m), 0.01 * std::sqrt(m));
}

TEST(Carleson, EmbeddingIdentity) {
  const auto e = embedding_norm(w0, 2, omega_dA(), 2, quick());
  EXPECT_NEAR(e.value, 1.0, 0.01);
}

TEST(Carleson, EmbeddingMonotoneInMeasure) {
  const auto small = Measure::power(0.5).restrict(0, 0.5);
  const auto big = Measure::power(0.5).restrict(0, 0.9);
  EXPECT_LE(embedding_norm(w0, 2, small, 2, quick()).value, embedding_norm(w0, 2, big, 2, quick()).value * 1.02);
}

TEST(Carleson, MnSingle) {
  const std::vector<EmbeddingSpec> one{{w0, 2, 2}};
  const auto mu = Measure::atomic({0.0, 0.5}, {1.0, 0.5});
  const auto m = M_n_estimate(one, mu, quick(), 3, false);
  const double e = embedding_norm(w0, 2, mu, 2, quick()).value;
  EXPECT_NEAR(m.estimate.value, e * e, 0.02 * e * e);
  EXPECT_DOUBLE_EQ(m.lambda, 1.0);
}

TEST(Carleson, MnAtomExtremal) {
  const std::vector<EmbeddingSpec> two{{w0, 2, 2}, {w0, 2, 2}};
  const double m = 2.0;
  const auto r = M_n_estimate(two, atom0(m), quick());
  EXPECT_DOUBLE_EQ(r.lambda, 2.0);
  EXPECT_NEAR(r.product.eval(0.5), 1.0, 1e-12);
  EXPECT_GE(r.estimate.value, 0.95 * m);
  EXPECT_LE(r.estimate.value, m * (1 + 1e-6));
  EXPECT_GE(r.reference.value, 0.95 * m);
}

TEST(Carleson, VanishingF) {
  const std::vector<EmbeddingSpec> one{{w0, 2, 2}};
  const std::vector<int> ks{0, 4, 8, 12, 16, 20};
  const auto atom = vanishing_sequence_F(one, atom0(), ks, quick());
  EXPECT_NEAR(atom.values[0], 1.0, 1e-9);
  for (std::size_t i = 1; i < atom.values.size(); ++i) EXPECT_EQ(atom.values[i], 0.0);

  const auto compact = vanishing_sequence_F(one, Measure::atomic({0.5, Complex(0, 0.4)}, {1.0, 1.0}), ks, quick());
  EXPECT_EQ(compact.verdict, "vanishing");
  for (std::size_t i = 1; i < compact.values.size(); ++i)
    EXPECT_LE(compact.values[i], std::pow(0.25, ks[i]) * 2.0 * (ks[i] + 1) * (1 + 1e-9));

  const auto ident = vanishing_sequence_F(one, omega_dA(), ks, quick());
  EXPECT_EQ(ident.verdict, "not vanishing");
  for (double v : ident.values) EXPECT_NEAR(v, 1.0, 1e-6);
}
