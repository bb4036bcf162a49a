#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "berglab/geometry.hpp"
#include "berglab/measures.hpp"
#include "berglab/optimize.hpp"
#include "berglab/weights.hpp"

namespace berglab {

enum class RegionKind { Square, Disk };

/// mu(R) / w(R)^e for R = S_z or D(z, r).
double carleson_quotient(const Measure& mu, const RadialWeight& w, Complex z, RegionKind kind, double e,
                         double r = 1.0);

struct CarlesonReport {
  std::string kind;
  std::vector<Complex> points;    // evaluation points (grid, lattice, shells)
  std::vector<double> abscissa;   // shell radii, truncation radii or k, when the report is a profile
  std::vector<double> values;     // per-point values, aligned with points or abscissa
  double value = 0.0;             // supremum, sequence norm or integral norm
  Complex witness{};
  std::string verdict;
  std::vector<double> partial_norms;  // lattice truncations
  bool converged = true;
  bool diverging = false;
  std::vector<std::pair<std::string, double>> meta;
};

/// Points at which suprema are taken: every radius times an angular sample.
struct SupGrid {
  std::vector<double> radii = geometric_grid(20);
  int angles = 64;          // ignored for rotation-invariant data
  bool include_atoms = true;
};

/// The factor mu(D)/omega(D) * upsilon(D)^{1/q} / eta(D)^{1/p} at one point.
double m0_integrand(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                    const RadialWeight& upsilon, double p, double q, Complex z, double r);

CarlesonReport M0_sup(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                      const RadialWeight& upsilon, double p, double q, double r = 1.0, const SupGrid& grid = {});

/// Radii 1 - 2^{-k}, k = 1..kmax.
std::vector<double> shell_radii(int kmax = 30);

/// Shell maxima of the M0 integrand with a three-shell verdict at relative tolerance tol.
CarlesonReport vanishing_profile(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                                 const RadialWeight& upsilon, double p, double q, double r,
                                 const std::vector<double>& radii = shell_radii(), int angles = 64,
                                 double tol = 1e-3);

/// Sup over the grid of mu(S_z) / w(S_z)^{q/p} or mu(D(z,r)) / w(D(z,r))^{q/p}.
CarlesonReport carleson_sup(const Measure& mu, const RadialWeight& w, double p, double q, RegionKind kind,
                            double r = 1.0, const SupGrid& grid = {});

/// l^{pq/(p-q)} norm of lambda_j over the lattice, with partial norms over the truncations
/// |z_j| <= 1 - 2^{-k}.
CarlesonReport lambda_seq_norm(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                               const RadialWeight& upsilon, double p, double q, const Lattice& lattice,
                               double r);

struct DiskNormOptions {
  double cutoff = 1e-6;        // integrate over |z| < 1 - cutoff
  int radial_nodes = 12;
  int angular_nodes = 64;      // starting count for non-radial integrands
  int max_angular = 4096;
  double rel_tol = 1e-4;
};

/// L_omega^{pq/(p-q)} norm of mu(D)/omega(D)^{1+1/q-1/p} * upsilon(D)^{1/q}/eta(D)^{1/p}.
CarlesonReport mu_hat_norm(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                           const RadialWeight& upsilon, double p, double q, double r,
                           const DiskNormOptions& opt = {});

/// L_omega^{p/(p-q)} norm of Phi = mu(D(z,r)) / omega(D(z,r)).
CarlesonReport phi_norm(const Measure& mu, const RadialWeight& omega, double p, double q, double r,
                        const DiskNormOptions& opt = {});

/// (1/2pi) integral over theta of |1 - x e^{i theta}|^{-gamma}.
double angular_kernel_mean(double gamma, double x);

/// Psi(z) = integral of ((1-|xi|)/|1-conj(z) xi|)^gamma d mu(xi) / omega(S_xi).
double psi_value(const Measure& mu, const RadialWeight& omega, double gamma, Complex z);

/// L_omega^{p/(p-q)} norm of Psi.
CarlesonReport psi_norm(const Measure& mu, const RadialWeight& omega, double gamma, double p, double q,
                        const DiskNormOptions& opt = {});

/// Lower bound for ||I_d : A^p_omega -> L^q_mu||.
NormEstimate embedding_norm(const RadialWeight& omega, double p, const Measure& mu, double q,
                            const OptimizerOptions& opt = {});

struct EmbeddingSpec {
  RadialWeight omega;
  double p = 2.0;
  double q = 2.0;
};

struct MultiEstimate {
  NormEstimate estimate;              // M_n with the first function as witness
  std::vector<AnalyticFunction> witnesses;
  double lambda = 0.0;
  RadialWeight product;
  NormEstimate reference;             // ||I_d : A^{1/lambda}_omega -> L^1_mu||
};

/// Alternating ascent for sup int prod |f_i|^{q_i} d mu / prod ||f_i||^{q_i}.
MultiEstimate M_n_estimate(const std::vector<EmbeddingSpec>& specs, const Measure& mu,
                           const OptimizerOptions& opt = {}, int rounds = 3, bool with_reference = true);

/// F(k) for f_{1,k} = z^k / ||z^k||, k in ks, with a three-point verdict and a geometric-decay fit.
CarlesonReport vanishing_sequence_F(const std::vector<EmbeddingSpec>& specs, const Measure& mu,
                                    const std::vector<int>& ks, const OptimizerOptions& opt = {},
                                    double tol = 1e-3);

}  // namespace berglab
