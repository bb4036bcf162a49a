#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "berglab/toeplitz.hpp"

using namespace berglab;

namespace {

const RadialWeight w0 = RadialWeight::standard(0);

OptimizerOptions quick() {
  OptimizerOptions o;
  o.budget = 400;
  return o;
}

Measure sample_atoms() {
  return Measure::atomic({Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.1, -0.7)}, {1.0, 0.5, 2.0});
}

}  // namespace

TEST(Toeplitz, ApplyAtomAtOrigin) {
  const auto mu = Measure::atomic({0.0}, {2.5});
  const auto f = AnalyticFunction::monomials({Complex(1, 2), 3.0, Complex(0, -1)});
  for (Complex z : {Complex(0.0), Complex(0.4, 0.4), Complex(-0.8)})
    EXPECT_LT(std::abs(toeplitz_apply(mu, w0, f, z) - 2.5 * f(0.0)), 1e-14);
  EXPECT_EQ(toeplitz_apply(Measure(), w0, f, 0.3), Complex(0.0));
}

TEST(Toeplitz, ApplyIdentityReproduces) {
  std::mt19937_64 g(9);
  std::normal_distribution<double> n;
  std::vector<Complex> c(9);
  for (auto& x : c) x = Complex(n(g), n(g));
  const auto f = AnalyticFunction::monomials(c);
  const auto mu = Measure::radial(w0);
  for (Complex z : {Complex(0.0), Complex(0.6, 0.1), Complex(0, -0.9)})
    EXPECT_LT(std::abs(toeplitz_apply(mu, w0, f, z) - f(z)), 1e-6);
  const auto img = toeplitz_image(mu, w0, f);
  EXPECT_LT(std::abs(img(0.5) - f(0.5)), 1e-6);
}

TEST(Toeplitz, MatrixIdentity) {
  for (double a : {0.0, 1.0}) {
    const auto w = RadialWeight::standard(a);
    const auto T = toeplitz_matrix(Measure::radial(w), w, 24);
    EXPECT_LT((T.entries - Eigen::MatrixXcd::Identity(24, 24)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Toeplitz, MatrixAtomAtOrigin) {
  const auto T = toeplitz_matrix(Measure::atomic({0.0}, {1.0}), w0, 12);
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(12, 12);
  E(0, 0) = 1.0;
  EXPECT_LT((T.entries - E).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Toeplitz, MatrixHermitianPsd) {
  for (const auto& mu : {sample_atoms(), Measure::power(0.5).restrict(0, 0.9)}) {
    const auto T = toeplitz_matrix(mu, w0, 32);
    EXPECT_LT((T.entries - T.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T.entries);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(Toeplitz, MatrixCsvHeader) {
  const auto csv = matrix_csv(toeplitz_matrix(Measure::atomic({0.0}, {1.0}), w0, 2));
  EXPECT_EQ(csv.substr(0, 3), "# {");
  EXPECT_NE(csv.find("\"M\":2"), std::string::npos);
  EXPECT_NE(csv.find("\nrow,col,re,im\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Toeplitz, ExactNorm) {
  for (double m : {0.5, 1.0, 3.0}) EXPECT_NEAR(toeplitz_norm_exact_22(Measure::atomic({0.0}, {m}), w0).estimate.value, m, 1e-12);
  EXPECT_NEAR(toeplitz_norm_exact_22(Measure::radial(w0), w0).estimate.value, 1.0, 1e-8);
  const auto mu = sample_atoms();
  const double a = toeplitz_norm_exact_22(mu, w0).estimate.value;
  for (double c : {0.5, 3.0}) EXPECT_NEAR(toeplitz_norm_exact_22(mu.scale(c), w0).estimate.value, c * a, 1e-12 * c * a);
}

TEST(Toeplitz, ExactNormRefinement) {
  const auto mu = Measure::atomic({0.9}, {1.0});
  const auto s = toeplitz_norm_exact_22(mu, w0, 16);
  // single atom: norm m ||B_xi||^2 = 1 / (1 - |xi|^2)^2
  EXPECT_NEAR(s.estimate.value, 1.0 / std::pow(1 - 0.81, 2), 1e-6);
  EXPECT_TRUE(s.estimate.converged);
  EXPECT_GE(s.basis_size, s.recommended / 2);
}

TEST(Toeplitz, EstimateMatchesSpectral) {
  const std::vector<Measure> suite{Measure::atomic({0.0}, {1.0}), sample_atoms(),
                                   Measure::atomic({0.8, Complex(0, 0.8)}, {1.0, 1.0})};
  for (const auto& mu : suite) {
    const double exact = toeplitz_norm_exact_22(mu, w0).estimate.value;
    const auto e = toeplitz_norm_estimate(mu, w0, w0, w0, 2, 2, quick());
    EXPECT_GE(e.value, 0.98 * exact);
    EXPECT_LE(e.value, exact * (1 + 1e-6));
  }
}

TEST(Toeplitz, EstimateAtomAtOrigin) {
  for (auto [p, q] : {std::pair{2.0, 3.0}, {3.0, 2.0}}) {
    const auto e = toeplitz_norm_estimate(Measure::atomic({0.0}, {1.0}), w0, w0, w0, p, q, quick());
    EXPECT_GE(e.value, 0.99);
  }
  EXPECT_EQ(toeplitz_norm_estimate(Measure(), w0, w0, w0, 2, 2, quick()).value, 0.0);
}

TEST(Toeplitz, EstimateHomogeneous) {
  const auto mu = sample_atoms();
  const double a = toeplitz_norm_estimate(mu, w0, w0, w0, 2, 3, quick()).value;
  for (double c : {0.5, 3.0})
    EXPECT_NEAR(toeplitz_norm_estimate(mu.scale(c), w0, w0, w0, 2, 3, quick()).value, c * a, 0.02 * c * a);
}

TEST(Toeplitz, CompactnessProfile) {
  const std::vector<double> s{0.0, 0.5, 0.8, 0.9};
  const auto compact = compactness_profile(sample_atoms(), w0, w0, w0, 2, 2, s, quick());
  EXPECT_EQ(compact.norms[2], 0.0);
  EXPECT_EQ(compact.norms[3], 0.0);
  EXPECT_EQ(compact.verdict, "compact-consistent");
  const auto ident = compactness_profile(Measure::radial(w0), w0, w0, w0, 2, 2, s, quick());
  EXPECT_EQ(ident.verdict, "not-compact");
  for (double v : ident.norms) EXPECT_GT(v, 0.9);
  for (std::size_t i = 1; i < compact.norms.size(); ++i) EXPECT_LE(compact.norms[i], compact.norms[i - 1] * 1.02);
}

TEST(Toeplitz, SelfAdjoint) {
  const auto mu = sample_atoms();
  const auto f = AnalyticFunction::monomials({1.0, Complex(0, 2), 0.5});
  const auto g = AnalyticFunction::monomials({Complex(1, -1), 0.0, 3.0, 1.0});
  const auto Tf = toeplitz_image(mu, w0, f), Tg = toeplitz_image(mu, w0, g);
  const Complex a = inner_product_A2(Tf, g, w0).value, b = inner_product_A2(f, Tg, w0).value;
  EXPECT_LT(std::abs(a - b), 1e-9 * std::abs(a));
}

TEST(Toeplitz, GalerkinConsistency) {
  // the Galerkin quadratic form equals the direct integral of |f|^2 d mu
  const auto mu = sample_atoms();
  const auto T = toeplitz_matrix(mu, w0, 8);
  Eigen::VectorXcd v(8);
  for (int i = 0; i < 8; ++i) v(i) = Complex(1.0 / (i + 1), i % 2 ? 0.5 : -0.25);
  std::vector<Complex> c(8);
  for (int n = 0; n < 8; ++n) c[n] = v(n) * std::sqrt(n + 1.0);  // e_n = sqrt(n+1) z^n
  const auto f = AnalyticFunction::monomials(c);
  double direct = 0.0;
  for (std::size_t i = 0; i < mu.atoms().size(); ++i) direct += mu.atom_masses()[i] * std::norm(f(mu.atoms()[i]));
  const Complex form = v.dot(T.entries * v);
  EXPECT_NEAR(form.real(), direct, 1e-12 * direct);
  EXPECT_LT(std::abs(form.imag()), 1e-12 * direct);
}
