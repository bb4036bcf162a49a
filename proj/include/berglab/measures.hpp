#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "berglab/geometry.hpp"
#include "berglab/regions.hpp"
#include "berglab/weights.hpp"

namespace berglab {

/// Finitely many weighted nodes: either genuine atoms or a quadrature rule.
struct DiscreteMeasure {
  std::vector<Complex> points;
  std::vector<double> masses;

  std::size_t size() const { return points.size(); }
  double total() const;
};

struct DiscretizeOptions {
  int levels = 20;
  int radial_nodes = 8;
  int angular_nodes = 256;
};

/// Positive Borel measure on the disk.
///
/// Atomic, radial-density (d mu = w(|z|) dA) or general-density measures, each
/// optionally restricted to an annulus lo <= |z| < hi and multiplied by a factor.
class Measure {
 public:
  enum class Kind { Atomic, Radial, Density };

  Measure();  // the zero measure
  static Measure atomic(std::vector<Complex> points, std::vector<double> masses);
  static Measure radial(RadialWeight density);
  /// (1 - |z|)^a dA.
  static Measure power(double a);
  /// Non-radial density with an identifying name; hint = suggested extra
  /// radial refinement near the boundary.
  static Measure density(std::function<double(Complex)> f, std::string name, int radial_hint = 0);

  Kind kind() const { return kind_; }
  bool is_zero() const;
  bool is_radial() const { return kind_ == Kind::Radial; }
  double factor() const { return factor_; }
  RadialSupport support() const { return support_; }
  /// Largest |z| the measure can charge (exact for atoms).
  double outer_radius() const;

  const std::vector<Complex>& atoms() const { return points_; }
  const std::vector<double>& atom_masses() const { return masses_; }
  const RadialWeight& radial_density() const { return radial_; }
  /// Density value at z including factor and support; 0 for atomic measures.
  double density_at(Complex z) const;

  double mass(const Region& region) const;
  double mass(const CarlesonSquare& square) const { return mass(to_region(square)); }
  double total_mass() const { return mass(WholeDisk{}); }

  /// (mu_s, mu_{s,-}) with mu_s supported on |z| >= s.
  std::pair<Measure, Measure> restrict_tail(double s) const;
  /// Restriction to lo <= |z| < hi.
  Measure restrict(double lo, double hi) const;
  Measure scale(double c) const;

  /// Atoms as they are, densities through a graded polar rule over the support.
  DiscreteMeasure discretize(const DiscretizeOptions& opt = {}) const;

  /// Integral of |z|^{2n} d mu, n = 0..count-1.
  std::vector<double> even_moments(std::size_t count) const;

  /// Canonical text used for hashing and reports.
  std::string describe() const;
  std::uint64_t hash() const;

 private:
  Kind kind_ = Kind::Atomic;
  double factor_ = 1.0;
  RadialSupport support_{};
  std::vector<Complex> points_;
  std::vector<double> masses_;
  RadialWeight radial_;
  std::function<double(Complex)> density_;
  std::string name_;
  int radial_hint_ = 0;
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& text);

}  // namespace berglab
