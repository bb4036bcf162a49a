#include "berglab/regions.hpp"

#include <algorithm>
#include <cmath>

#include "berglab/quadrature.hpp"

namespace berglab {

namespace {

struct ExtentVisitor {
  std::pair<double, double> operator()(const WholeDisk&) const { return {0.0, 1.0}; }
  std::pair<double, double> operator()(const PolarBox& b) const {
    return {std::max(0.0, b.r0), std::min(1.0, b.r1)};
  }
  std::pair<double, double> operator()(const HyperbolicDisk& d) const {
    const double m = std::abs(d.euclid_center);
    return {std::max(0.0, m - d.euclid_radius), std::min(1.0, m + d.euclid_radius)};
  }
};

double disk_arc(double d, double rho, double t) {
  if (t <= 0.0) return d < rho ? 2.0 * kPi : 0.0;
  if (t <= rho - d) return 2.0 * kPi;
  if (t >= d + rho || t <= d - rho) return 0.0;
  // 1 - cos(phi) = (rho - t + d)(rho + t - d) / (2 t d), evaluated without cancellation
  const double u = (rho - t + d) * (rho + t - d) / (2.0 * t * d);
  const double half = std::asin(std::min(1.0, std::sqrt(std::max(0.0, 0.5 * u))));
  return 4.0 * half;
}

}  // namespace

std::pair<double, double> radial_extent(const Region& region) {
  return std::visit(ExtentVisitor{}, region);
}

double arc_length_inside(const Region& region, double t) {
  if (!(t < 1.0) || t < 0.0) return 0.0;
  if (std::holds_alternative<WholeDisk>(region)) return 2.0 * kPi;
  if (const auto* box = std::get_if<PolarBox>(&region)) {
    if (t < box->r0 || t > box->r1) return 0.0;
    return box->full_annulus() ? 2.0 * kPi : 2.0 * box->half_width;
  }
  const auto& disk = std::get<HyperbolicDisk>(region);
  return disk_arc(std::abs(disk.euclid_center), disk.euclid_radius, t);
}

double radial_region_integral(const std::function<double(double)>& v, const Region& region,
                              RadialSupport support, double rel_tol) {
  auto [a, b] = radial_extent(region);
  a = std::max(a, support.lo);
  b = std::min(b, support.hi);
  if (!(b > a)) return 0.0;

  auto radial_piece = [&](double lo, double hi) {
    return integrate_1d([&](double t) { return v(t) * t; }, lo, hi, rel_tol).value;
  };

  if (std::holds_alternative<WholeDisk>(region)) return 2.0 * radial_piece(a, b);
  if (const auto* box = std::get_if<PolarBox>(&region)) {
    const double arc = box->full_annulus() ? 2.0 * kPi : 2.0 * box->half_width;
    return arc / kPi * radial_piece(a, b);
  }

  const auto& disk = std::get<HyperbolicDisk>(region);
  const double d = std::abs(disk.euclid_center);
  const double rho = disk.euclid_radius;
  std::vector<double> cuts{a, b};
  if (rho > d) cuts.push_back(rho - d);
  cuts.push_back(std::abs(d - rho));
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(a, cuts[i]);
    const double hi = std::min(b, cuts[i + 1]);
    if (!(hi > lo)) continue;
    if (hi <= rho - d) {
      total += 2.0 * radial_piece(lo, hi);
      continue;
    }
    total += integrate_1d([&](double t) { return v(t) * t * disk_arc(d, rho, t); }, lo, hi, rel_tol)
                 .value /
             kPi;
  }
  return total;
}

double region_integral_2d(const std::function<double(Complex)>& f, const Region& region,
                          RadialSupport support, const RegionGridOptions& opt) {
  const GaussRule& gr = gauss_legendre(opt.radial_nodes);
  const GaussRule& ga = gauss_legendre(opt.angular_nodes);
  auto in_support = [&](Complex w) { return support.contains(std::abs(w)); };

  if (const auto* disk = std::get_if<HyperbolicDisk>(&region)) {
    const double rho = disk->euclid_radius;
    const Complex c = disk->euclid_center;
    const int m = opt.angular_nodes;
    double sum = 0.0;
    for (int i = 0; i < opt.radial_nodes; ++i) {
      const double s = 0.5 * rho * (1.0 + gr.nodes[i]);
      const double ws = 0.5 * rho * gr.weights[i] * s;
      double ring = 0.0;
      for (int j = 0; j < m; ++j) {
        const Complex w = c + std::polar(s, 2.0 * kPi * j / m);
        if (in_support(w)) ring += f(w);
      }
      sum += ws * ring * (2.0 / m);
    }
    return sum;
  }

  PolarBox box;
  if (const auto* b = std::get_if<PolarBox>(&region)) box = *b;
  const double lo = std::max(box.r0, support.lo);
  const double hi = std::min({box.r1, support.hi, 1.0});
  if (!(hi > lo)) return 0.0;
  const auto breaks = graded_breakpoints(lo, hi, 30);
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (int i = 0; i < opt.radial_nodes; ++i) {
      const double r = mid + half * gr.nodes[i];
      double ring = 0.0;
      if (box.full_annulus()) {
        const int m = opt.angular_nodes;
        for (int j = 0; j < m; ++j) ring += f(std::polar(r, 2.0 * kPi * j / m));
        ring *= 2.0 * kPi / m;
      } else {
        for (int j = 0; j < opt.angular_nodes; ++j) {
          const double th = box.theta_center + box.half_width * ga.nodes[j];
          ring += box.half_width * ga.weights[j] * f(std::polar(r, th));
        }
      }
      sum += half * gr.weights[i] * r * ring / kPi;
    }
  }
  return sum;
}

}  // namespace berglab
