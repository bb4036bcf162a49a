#pragma once

#include <functional>

#include "berglab/geometry.hpp"

namespace berglab {

/// Radial support window [lo, hi) used to restrict integrals to an annulus.
struct RadialSupport {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double t) const { return t >= lo && t < hi; }
  bool full() const { return lo <= 0.0 && hi >= 1.0; }
  bool empty() const { return !(hi > lo); }
};

/// Integral of v(|w|) dA(w) over region ∩ {lo <= |w| < hi}; dA has total mass 1.
/// Reduces to a one-dimensional integral in |w|: the angular measure of each
/// circle inside the region is known in closed form.
double radial_region_integral(const std::function<double(double)>& v, const Region& region,
                              RadialSupport support = {}, double rel_tol = 1e-10);

/// Angular length of {theta : t e^{i theta} in region}.
double arc_length_inside(const Region& region, double t);

/// Radial range [t_min, t_max] met by the region; breakpoints for 1-D quadrature.
std::pair<double, double> radial_extent(const Region& region);

struct RegionGridOptions {
  int radial_nodes = 24;
  int angular_nodes = 48;
};

/// Integral of f(w) dA(w) over region ∩ support with a tensor Gauss rule in
/// coordinates adapted to the region (local polar for Bergman disks).
/// Used for non-radial densities and as an independent cross-check.
double region_integral_2d(const std::function<double(Complex)>& f, const Region& region,
                          RadialSupport support = {}, const RegionGridOptions& opt = {});

}  // namespace berglab
