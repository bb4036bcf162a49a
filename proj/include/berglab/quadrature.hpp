#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "berglab/core.hpp"

namespace berglab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule. Thread-safe.
const GaussRule& gauss_legendre(int n);

struct Integral {
  double value = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
};

/// Double-exponential (tanh-sinh) quadrature of f over [a, b]. Handles
/// integrable endpoint singularities such as (1-t)^{-1/2}.
Integral integrate_1d(const std::function<double(double)>& f, double a, double b,
                      double rel_tol = 1e-12);

/// Breakpoints {lo, hi} together with every 1 - 2^{-k} (k = 1..levels)
/// strictly inside (lo, hi): panels shrink geometrically toward the unit circle.
std::vector<double> graded_breakpoints(double lo, double hi, int levels);

struct PolarGridSpec {
  double r_lo = 0.0;
  double r_hi = 1.0;
  int levels = 20;
  int radial_nodes = 8;  // Gauss nodes per radial panel
  int angular_nodes = 128;
  double theta0 = 0.0;
};

/// Tensor grid on an annulus: composite Gauss-Legendre in r over graded panels,
/// periodic trapezoid in theta. Weights include the normalized area element
/// r dr dtheta / pi and the radial density.
struct PolarGrid {
  std::vector<double> radii;
  std::vector<double> radial_weights;
  int n_theta = 0;
  double theta0 = 0.0;
  std::vector<Complex> nodes;   // index = radial_index * n_theta + angular_index
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  double integrate(std::span<const double> values) const;
  Complex integrate(std::span<const Complex> values) const;
};

PolarGrid make_polar_grid(const std::function<double(double)>& radial_density,
                          const PolarGridSpec& spec);

/// Values of sum_n c_n z^n at every grid node, by folding the coefficients
/// modulo n_theta on each circle and applying one FFT per circle.
std::vector<Complex> evaluate_power_series(const PolarGrid& grid,
                                           std::span<const Complex> coeffs);

struct AdaptiveOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  std::size_t node_cap = std::size_t{1} << 20;
  int radial_nodes = 4;
  int angular_nodes = 32;
  int levels = 20;
};

/// Adaptive integration of f(z) * density(|z|) dA over r_lo <= |z| < r_hi.
/// Node counts double until successive estimates agree to rel_tol or the
/// node cap is reached, in which case `converged` is false.
template <class T>
struct DiskIntegral {
  T value{};
  bool converged = true;
  std::size_t nodes = 0;
};

template <class F>
auto integrate_disk(F&& f, const std::function<double(double)>& density, double r_lo,
                    double r_hi, const AdaptiveOptions& opt = {})
    -> DiskIntegral<std::decay_t<decltype(f(Complex{}))>> {
  using T = std::decay_t<decltype(f(Complex{}))>;
  DiskIntegral<T> out;
  PolarGridSpec spec{r_lo, r_hi, opt.levels, opt.radial_nodes, opt.angular_nodes};
  bool have_previous = false;
  T previous{};
  for (;;) {
    const PolarGrid grid = make_polar_grid(density, spec);
    T sum{};
    double scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const T v = f(grid.nodes[i]);
      sum += grid.weights[i] * v;
      scale += grid.weights[i] * std::abs(v);
    }
    out.value = sum;
    out.nodes = grid.size();
    if (have_previous) {
      const double diff = std::abs(sum - previous);
      if (diff <= opt.rel_tol * scale + opt.abs_tol) {
        out.converged = true;
        return out;
      }
    }
    if (grid.size() * 4 > opt.node_cap) {
      out.converged = false;
      return out;
    }
    previous = sum;
    have_previous = true;
    spec.radial_nodes *= 2;
    spec.angular_nodes *= 2;
  }
}

}  // namespace berglab
