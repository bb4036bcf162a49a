#include "berglab/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <unsupported/Eigen/FFT>

namespace berglab {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Integral integrate_1d(const std::function<double(double)>& f, double a, double b,
                      double rel_tol) {
  Integral out;
  if (!(b > a)) return out;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double error = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  std::size_t count = 0;
  // Integrate over u in [-1/4, 1/4] with x = mid + scale u: Boost's endpoint handling is only
  // free of rounding trouble when both limits are small in magnitude.
  const double mid = 0.5 * (a + b), scale = 2.0 * (b - a);
  const double inner_a = std::nextafter(a, b), inner_b = std::nextafter(b, a);
  auto counted = [&](double u) {
    ++count;
    const double x = std::clamp(mid + scale * u, inner_a, inner_b);
    return scale * f(x);
  };
  out.value = integrator.integrate(counted, -0.25, 0.25, rel_tol, &error, &l1, &levels);
  out.evaluations = count;
  out.converged = error <= std::max(1e3 * rel_tol * l1, 1e-300) || l1 == 0.0;
  return out;
}

std::vector<double> graded_breakpoints(double lo, double hi, int levels) {
  std::vector<double> pts{lo};
  double gap = 0.5;
  for (int k = 1; k <= levels; ++k, gap *= 0.5) {
    const double b = 1.0 - gap;
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  return pts;
}

double PolarGrid::integrate(std::span<const double> values) const {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
  return s;
}

Complex PolarGrid::integrate(std::span<const Complex> values) const {
  Complex s{};
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
  return s;
}

PolarGrid make_polar_grid(const std::function<double(double)>& radial_density,
                          const PolarGridSpec& spec) {
  if (!(spec.r_lo >= 0.0 && spec.r_hi <= 1.0 && spec.r_lo <= spec.r_hi))
    throw DomainError("make_polar_grid: annulus must satisfy 0 <= r_lo <= r_hi <= 1");
  PolarGrid grid;
  grid.n_theta = spec.angular_nodes;
  grid.theta0 = spec.theta0;
  const GaussRule& rule = gauss_legendre(spec.radial_nodes);
  const auto breaks = graded_breakpoints(spec.r_lo, spec.r_hi, spec.levels);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < spec.radial_nodes; ++i) {
      const double r = mid + half * rule.nodes[i];
      const double dens = radial_density ? radial_density(r) : 1.0;
      grid.radii.push_back(r);
      grid.radial_weights.push_back(half * rule.weights[i] * r * dens * 2.0 / spec.angular_nodes);
    }
  }
  const std::size_t nr = grid.radii.size();
  grid.nodes.resize(nr * grid.n_theta);
  grid.weights.resize(nr * grid.n_theta);
  const double step = 2.0 * kPi / grid.n_theta;
  std::vector<Complex> unit(grid.n_theta);
  for (int j = 0; j < grid.n_theta; ++j) unit[j] = std::polar(1.0, spec.theta0 + j * step);
  for (std::size_t i = 0; i < nr; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      grid.nodes[i * grid.n_theta + j] = grid.radii[i] * unit[j];
      grid.weights[i * grid.n_theta + j] = grid.radial_weights[i];
    }
  }
  return grid;
}

std::vector<Complex> evaluate_power_series(const PolarGrid& grid,
                                           std::span<const Complex> coeffs) {
  const int m = grid.n_theta;
  const std::size_t nr = grid.radii.size();
  std::vector<Complex> out(nr * m);
  if (coeffs.empty()) return out;
  Eigen::FFT<double> fft;
  std::vector<Complex> folded(m), values(m);
  for (std::size_t i = 0; i < nr; ++i) {
    std::fill(folded.begin(), folded.end(), Complex{});
    const double r = grid.radii[i];
    double rn = 1.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      if (rn == 0.0) break;
      // theta_j = theta0 + 2 pi j / m, so e^{i n theta_j} = e^{i n theta0} w^{n j}.
      const Complex phase = grid.theta0 == 0.0 ? Complex(1.0) : std::polar(1.0, n * grid.theta0);
      folded[n % m] += coeffs[n] * rn * phase;
      rn *= r;
    }
    // inverse FFT computes (1/m) sum_k X_k e^{+2 pi i k j / m}
    fft.inv(values, folded);
    for (int j = 0; j < m; ++j) out[i * m + j] = values[j] * static_cast<double>(m);
  }
  return out;
}

}  // namespace berglab
