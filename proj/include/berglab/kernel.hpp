#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "berglab/geometry.hpp"
#include "berglab/quadrature.hpp"
#include "berglab/weights.hpp"

namespace berglab {

/// Truncated reproducing kernel B_z(xi) = sum_{n<=N} k_n (conj(z) xi)^n with
/// k_n = 1 / (2 w_{2n+1}).
class KernelSeries {
 public:
  KernelSeries(const RadialWeight& w, std::size_t order);

  const RadialWeight& weight() const { return weight_; }
  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(std::size_t n) const { return coeffs_.at(n); }

  /// Largest ratio k_{n+1}/k_n over the upper half of the series.
  double growth() const { return growth_; }

  /// Truncation error at |conj(z) xi| = rho relative to sum_n k_n rho^n.
  double relative_tail(double rho) const;
  /// Smallest order whose relative tail at rho is below tol (estimate).
  std::size_t required_order(double rho, double tol = 1e-8) const;
  /// Largest rho with relative_tail(rho) <= tol.
  double max_argument(double tol = 1e-8) const;

  /// Throws AccuracyError (with an order hint) beyond max_argument.
  Complex eval(Complex z, Complex xi, double tol = 1e-8) const;
  Complex eval_unchecked(Complex z, Complex xi) const;

 private:
  RadialWeight weight_;
  std::vector<double> coeffs_;
  double growth_ = 1.0;
};

KernelSeries kernel_coeffs(const RadialWeight& w, std::size_t order = 256);

/// Order large enough for |conj(z) xi| <= rho at the given relative accuracy.
KernelSeries kernel_for_radius(const RadialWeight& w, double rho, double tol = 1e-12,
                               std::size_t cap = 8192);

/// c ((1 - |a|^2) / (1 - conj(a) z))^gamma.
struct KernelAtom {
  Complex a{};
  Complex c{1.0, 0.0};
  double gamma = 4.0;
};

/// Polynomial part plus a finite sum of kernel atoms.
class AnalyticFunction {
 public:
  AnalyticFunction() = default;
  static AnalyticFunction monomials(std::vector<Complex> coeffs);
  static AnalyticFunction monomial(std::size_t n, Complex c = 1.0);
  static AnalyticFunction atoms(std::vector<KernelAtom> atoms);
  /// B_z of the series, as polynomial coefficients k_n conj(z)^n.
  static AnalyticFunction kernel(const KernelSeries& series, Complex z);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const std::vector<KernelAtom>& atom_list() const { return atoms_; }
  bool is_polynomial() const { return atoms_.empty(); }
  bool is_zero() const;

  Complex operator()(Complex z) const;
  /// Taylor coefficients 0..count-1.
  std::vector<Complex> taylor(std::size_t count) const;
  /// Number of Taylor coefficients after which the remainder is below tol on the disk.
  std::size_t taylor_length(double tol = 1e-13, std::size_t cap = 16384) const;
  /// Largest |a| among atoms, 0 without atoms.
  double atom_radius() const;

  AnalyticFunction& operator+=(const AnalyticFunction& other);
  AnalyticFunction scaled(Complex c) const;

 private:
  std::vector<Complex> coeffs_;
  std::vector<KernelAtom> atoms_;
};

AnalyticFunction operator+(AnalyticFunction a, const AnalyticFunction& b);

/// Values at every node of the grid; the polynomial part goes through FFT folding.
std::vector<Complex> grid_values(const AnalyticFunction& f, const PolarGrid& grid);

/// Polar grid carrying the weight density; angular resolution follows `angular_nodes`.
PolarGrid weight_grid(const RadialWeight& w, int angular_nodes = 256, int radial_nodes = 8,
                      int levels = 20);

/// (sum_i weight_i |v_i|^p)^{1/p}.
double grid_norm(std::span<const Complex> values, const PolarGrid& grid, double p);

struct QuadratureValue {
  double value = 0.0;
  bool converged = true;
  std::size_t nodes = 0;
};

struct NormOptions {
  double rel_tol = 1e-10;
  std::size_t node_cap = std::size_t{1} << 21;
  bool allow_parseval = true;
};

/// ||f||_{A^p_w}. Polynomials with p = 2 use sum |c_n|^2 2 w_{2n+1} unless
/// disabled; everything else refines a polar grid until stable.
QuadratureValue bergman_norm(const AnalyticFunction& f, const RadialWeight& w, double p,
                             const NormOptions& opt = {});

struct InnerProduct {
  Complex value{};
  bool converged = true;
  std::size_t nodes = 0;
};

/// <f, g> = integral of f conj(g) w dA, by quadrature.
InnerProduct inner_product_A2(const AnalyticFunction& f, const AnalyticFunction& g,
                              const RadialWeight& w, const NormOptions& opt = {});

struct KernelNormRatio {
  double ratio = 0.0;
  double kernel_norm = 0.0;
  double predicted = 0.0;  // eta(S_z)^{1/p} / omega(S_z)
  bool converged = true;
};

/// ||B_z^omega||_{A^p_eta} / (eta(S_z)^{1/p} / omega(S_z)).
KernelNormRatio kernel_norm_ratio(const RadialWeight& omega, const RadialWeight& eta, double p,
                                  Complex z);

struct AtomResult {
  AnalyticFunction function;
  double norm = 1.0;  // norm used for the normalization, 1 when none
  bool gamma_warning = false;
};

/// gamma_min = 2 + growth exponent of 1 / w-hat at 1, read off the doubling profile.
double gamma_min(const RadialWeight& w);

/// F_a, optionally divided by its A^p_w norm.
AtomResult kernel_atom(Complex a, double gamma,
                       std::optional<std::pair<RadialWeight, double>> normalize_in = std::nullopt);

struct ComparabilityWindow {
  double min = 0.0;
  double max = 0.0;
};

/// min and max of |B_z(xi)| / B_z(z) over sampled xi in D(z, r).
ComparabilityWindow kernel_local_comparability(const KernelSeries& series, Complex z, double r,
                                               int rings = 6, int angles = 64);

}  // namespace berglab
