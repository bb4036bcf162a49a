#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "berglab/kernel.hpp"
#include "berglab/measures.hpp"
#include "berglab/optimize.hpp"

namespace berglab {

/// T f as a power series: the image of f under the Toeplitz operator.
AnalyticFunction toeplitz_image(const Measure& mu, const RadialWeight& omega, const AnalyticFunction& f,
                                double tol = 1e-12);

/// T f(z) = integral of f(xi) conj(B_z(xi)) d mu(xi) with the kernel truncated at order N.
/// Atoms are summed exactly; densities go through their quadrature rule.
Complex toeplitz_apply(const Measure& mu, const RadialWeight& omega, const AnalyticFunction& f, Complex z,
                       std::size_t N = 256);

/// Galerkin matrix in the orthonormal monomials e_n = z^n / (2 w_{2n+1})^{1/2}.
struct ToeplitzMatrix {
  Eigen::MatrixXcd entries;
  std::size_t size = 0;
  std::string weight;
  std::string measure;
  std::uint64_t measure_hash = 0;
};

ToeplitzMatrix toeplitz_matrix(const Measure& mu, const RadialWeight& omega, std::size_t M);

/// Smallest M with |xi_max|^M below tol, for atomic measures; 0 otherwise.
std::size_t recommended_basis_size(const Measure& mu, double tol = 1e-8);

struct SpectralNorm {
  NormEstimate estimate;
  std::size_t basis_size = 0;
  std::size_t recommended = 0;
  double last_change = 0.0;
};

/// Top eigenvalue of the Galerkin matrix, doubling M from M0 until it moves by less than tol.
SpectralNorm toeplitz_norm_exact_22(const Measure& mu, const RadialWeight& omega, std::size_t M0 = 64,
                                    double tol = 1e-8, std::size_t cap = 512);

/// Lower bound for ||T||_{A^p_eta -> A^q_upsilon} over the witness families.
NormEstimate toeplitz_norm_estimate(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                                    const RadialWeight& upsilon, double p, double q,
                                    const OptimizerOptions& opt = {});

struct CompactnessProfile {
  std::vector<double> s;
  std::vector<double> norms;
  std::string verdict;  // "compact-consistent" or "not-compact"
};

/// Norm estimates of the tail pieces mu_s over the list of s.
CompactnessProfile compactness_profile(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                                       const RadialWeight& upsilon, double p, double q,
                                       const std::vector<double>& s_list, const OptimizerOptions& opt = {});

/// CSV with real and imaginary parts, row-major, preceded by a JSON header line.
std::string matrix_csv(const ToeplitzMatrix& m);

}  // namespace berglab
