#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "berglab/core.hpp"

namespace berglab {

/// A point of the open unit disk.
class DiskPoint {
 public:
  DiskPoint() = default;
  explicit DiskPoint(Complex z);
  DiskPoint(double re, double im = 0.0) : DiskPoint(Complex(re, im)) {}

  Complex value() const { return z_; }
  double modulus() const { return std::abs(z_); }
  operator Complex() const { return z_; }

 private:
  Complex z_{};
};

/// phi_a(z) = (a - z) / (1 - conj(a) z).
Complex mobius(Complex a, Complex z);
DiskPoint mobius(DiskPoint a, DiskPoint z);

/// 1 - |phi_a(z)|^2 = (1-|a|^2)(1-|z|^2)/|1-conj(a)z|^2, without cancellation.
double pseudo_hyperbolic_complement(Complex a, Complex z);

/// Bergman metric beta(a, z) = artanh |phi_a(z)|.
double bergman_distance(Complex a, Complex z);

/// Bergman disk D(z, r) together with its Euclidean description.
struct HyperbolicDisk {
  Complex center{};
  double radius = 0.0;
  Complex euclid_center{};
  double euclid_radius = 0.0;

  bool contains(Complex w) const;
};

/// Euclidean center and radius of D(z, r): with s = tanh r,
/// c = (1-s^2) z / (1-s^2|z|^2) and rho = s (1-|z|^2) / (1-s^2|z|^2).
HyperbolicDisk disk_euclidean(DiskPoint z, double r);

/// Annular sector {r0 <= |w| <= r1, |arg w - theta_center| <= half_width}.
/// A half_width of pi or more covers the full annulus.
struct PolarBox {
  double r0 = 0.0;
  double r1 = 1.0;
  double theta_center = 0.0;
  double half_width = kPi;

  bool contains(Complex w) const;
  bool full_annulus() const { return half_width >= kPi; }
};

struct WholeDisk {
  bool contains(Complex) const { return true; }
};

/// Carleson square S_z with the convention S_0 = the whole disk.
struct CarlesonSquare {
  Complex vertex{};

  bool degenerate() const { return vertex == Complex{}; }
  bool contains(Complex w) const;
  double angular_width() const;  // (1 - |z|) / pi, or 2 pi for S_0
  PolarBox box() const;
};

CarlesonSquare carleson_square(DiskPoint z);

using Region = std::variant<WholeDisk, PolarBox, HyperbolicDisk>;

Region to_region(const CarlesonSquare& square);
bool region_contains(const Region& region, Complex w);

/// Separated, covering point set of the disk, certified up to a cutoff annulus.
struct Lattice {
  std::vector<Complex> points;
  std::vector<int> ring;
  double separation = 0.0;
  double covering = 0.0;
  double cutoff = 0.0;

  std::size_t size() const { return points.size(); }
  /// Points with |z| <= radius, in generation order.
  Lattice truncated(double radius) const;
};

/// Concentric-ring lattice: ring k sits at Bergman radius k*s, neighbours on a
/// ring are at least s apart, rings stop after the first one beyond 1 - cutoff.
Lattice generate_lattice(double separation, double covering, double cutoff = 1e-3);

struct LatticeReport {
  double min_pairwise = 0.0;        // +inf when fewer than two points are close
  double max_probe_distance = 0.0;  // +inf when some probe has no point within 2r
  std::size_t probes = 0;
  bool separated = false;
  bool covering = false;
};

/// Quasi-uniform probes for the hyperbolic area measure on |z| <= 1 - cutoff.
std::vector<Complex> hyperbolic_probes(std::size_t count, double cutoff);

LatticeReport verify_lattice(const Lattice& lattice, std::span<const Complex> probes);
LatticeReport verify_lattice(const Lattice& lattice, std::size_t probe_count = 10000);

/// Largest number of other disks D(a_i, R) meeting one disk D(a_j, R),
/// over lattice points inside the cutoff radius.
std::size_t max_overlap(const Lattice& lattice, double R);

/// Greedy construction: keeps each candidate, in order, that is at least
/// `separation` away from every point kept so far.
Lattice greedy_lattice(std::span<const Complex> candidates, double separation);

std::string lattice_csv(const Lattice& lattice);

}  // namespace berglab
