#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "berglab/core.hpp"
#include "berglab/geometry.hpp"

namespace berglab {

/// Exponent bookkeeping shared by the derived weights.
struct DerivedExponents {
  double p = 2.0;
  double q = 2.0;

  double p_conj() const { return p / (p - 1.0); }
  /// pq / (p - q); only meaningful for q < p.
  std::optional<double> s() const;
  /// pq / (pq - p + q); equals 1 when p == q.
  double t() const { return p * q / (p * q - p + q); }
};

/// Aggregate exponent sum q_i / p_i.
double lambda_exponent(std::span<const double> p, std::span<const double> q);

/// Positive radial weight on [0, 1).
///
/// Power weights c (1-r^2)^a (1-r)^b cover every standard weight and are closed
/// under the products and powers used by the derived weights; moments come from
/// Beta functions where possible. Tables and profiles are sampled on
/// [0, 1 - kGenericCutoff] and continued by a power law fitted at the cut.
class RadialWeight {
 public:
  static constexpr double kGenericCutoff = 1e-6;

  /// (alpha + 1)(1 - r^2)^alpha, alpha > -1.
  static RadialWeight standard(double alpha);
  /// c (1-r^2)^a (1-r)^b.
  static RadialWeight power(double c, double a, double b = 0.0);
  /// Log-linear interpolation of positive samples on increasing radii.
  static RadialWeight table(std::vector<double> r, std::vector<double> w);
  static RadialWeight profile(std::function<double(double)> f, std::string label = "profile");

  RadialWeight();  // standard(0)

  double eval(double r) const;
  double operator()(double r) const { return eval(r); }

  /// Tail integral from r to 1; +inf when the weight is not integrable.
  double tail(double r) const;
  /// Integral of s^x w(s) over [0, 1).
  double moment(double x) const;
  /// Integral of s w(s) over [r, 1): the radial factor of w(S_z) and w(D(z,r)).
  double first_moment_tail(double r) const;

  bool integrable() const;
  bool is_power() const;
  std::optional<double> standard_alpha() const;
  /// (c, a, b) for power weights.
  std::optional<std::array<double, 3>> power_params() const;
  /// Exponent beta of the power-law behaviour (1-r)^beta near the boundary.
  double boundary_exponent() const;
  std::string label() const;

  /// prod w_i^{e_i}; stays a power weight when every factor is one.
  static RadialWeight product(std::span<const RadialWeight> factors, std::span<const double> exps);

 private:
  struct Impl;
  explicit RadialWeight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static RadialWeight make_generic(std::function<double(double)> f, std::string label,
                                   bool validate);
  std::shared_ptr<const Impl> impl_;
};

/// Default sup grid r_k = 1 - 2^{-k}, k = 0..kmax.
std::vector<double> geometric_grid(int kmax = 20);

struct RatioProfile {
  std::vector<double> grid;
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
  bool bounded = false;  // max / min <= bound
};

/// w-hat(r) / ((1 - r) w(r)) on the grid.
RatioProfile regularity_profile(const RadialWeight& w, std::span<const double> grid,
                                double bound = 100.0);
/// w-hat(r) / w-hat((1 + r) / 2) on the grid.
RatioProfile doubling_profile(const RadialWeight& w, std::span<const double> grid,
                              double bound = 100.0);

/// sigma_{p,eta} = (omega / eta^{1/p})^{p'}. Non-integrable results are returned
/// with integrable() == false.
RadialWeight sigma_weight(const RadialWeight& omega, const RadialWeight& eta, double p);

struct BergmanConstant {
  double value = 0.0;  // +inf when sigma is not integrable
  bool finite = false;
  double argmax = 0.0;
  std::vector<double> grid;
  std::vector<double> ratios;
};

/// Grid supremum of eta-hat^{1/p} sigma-hat^{1/p'} / omega-hat.
BergmanConstant bergman_const_A(const RadialWeight& omega, const RadialWeight& eta, double p,
                                std::span<const double> grid);
BergmanConstant bergman_const_A(const RadialWeight& omega, const RadialWeight& eta, double p);

/// W = eta^{q/(pq-p+q)} sigma_{q,upsilon}^{(pq-p)/(pq-p+q)}.
RadialWeight fusion_weight_W(const RadialWeight& eta, const RadialWeight& upsilon,
                             const RadialWeight& omega, double p, double q);

/// Product weight prod w_i^{q_i / (lambda p_i)} together with lambda.
std::pair<RadialWeight, double> product_weight(std::span<const RadialWeight> weights,
                                               std::span<const double> p,
                                               std::span<const double> q);

/// Integral of w dA over the region.
double region_weight(const RadialWeight& w, const Region& region);
double region_weight(const RadialWeight& w, const CarlesonSquare& square);

}  // namespace berglab
