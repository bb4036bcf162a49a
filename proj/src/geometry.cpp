#include "berglab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace berglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double one_minus_sq(double r) { return (1.0 - r) * (1.0 + r); }

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

// Points bucketed by Bergman distance from the origin, sorted by angle inside
// each bucket. A query visits exactly the points of the Euclidean disk that
// realizes D(z, R), plus a few boundary candidates that are filtered by the caller.
class LatticeIndex {
 public:
  explicit LatticeIndex(std::span<const Complex> pts, double band = 0.25)
      : pts_(pts.begin(), pts.end()), band_(band) {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      const std::size_t b = bucket_of(std::abs(pts_[i]));
      if (b >= buckets_.size()) buckets_.resize(b + 1);
      buckets_[b].push_back({std::arg(pts_[i]), i});
    }
    for (auto& bucket : buckets_) std::sort(bucket.begin(), bucket.end());
  }

  template <class Visit>
  void query(Complex z, double radius, Visit&& visit) const {
    if (buckets_.empty()) return;
    const HyperbolicDisk disk = disk_euclidean(DiskPoint(z), radius);
    const double d = std::abs(disk.euclid_center);
    const double lo = std::max(0.0, d - disk.euclid_radius);
    const double hi = std::min(std::nextafter(1.0, 0.0), d + disk.euclid_radius);
    const std::size_t b0 = bucket_of(lo);
    const std::size_t b1 = std::min(bucket_of(hi), buckets_.size() - 1);
    const bool all_angles = d <= disk.euclid_radius * 1.000001 || d == 0.0;
    const double c_arg = std::arg(disk.euclid_center);
    const double half = all_angles ? kPi : std::asin(std::min(1.0, disk.euclid_radius / d)) + 1e-12;
    for (std::size_t b = b0; b <= b1 && b < buckets_.size(); ++b) {
      const auto& bucket = buckets_[b];
      if (all_angles || half >= kPi) {
        for (const auto& e : bucket) visit(e.second);
        continue;
      }
      visit_window(bucket, c_arg - half, c_arg + half, visit);
    }
  }

  const std::vector<Complex>& points() const { return pts_; }

 private:
  using Entry = std::pair<double, std::size_t>;

  std::size_t bucket_of(double modulus) const {
    const double beta0 = std::atanh(std::min(modulus, std::nextafter(1.0, 0.0)));
    return static_cast<std::size_t>(beta0 / band_);
  }

  template <class Visit>
  static void visit_range(const std::vector<Entry>& bucket, double a, double b, Visit& visit) {
    auto it = std::lower_bound(bucket.begin(), bucket.end(), Entry{a, 0});
    for (; it != bucket.end() && it->first <= b; ++it) visit(it->second);
  }

  template <class Visit>
  static void visit_window(const std::vector<Entry>& bucket, double a, double b, Visit& visit) {
    // angles live in [-pi, pi]; split windows that wrap around
    if (a < -kPi) {
      visit_range(bucket, a + 2 * kPi, kPi, visit);
      visit_range(bucket, -kPi, b, visit);
    } else if (b > kPi) {
      visit_range(bucket, a, kPi, visit);
      visit_range(bucket, -kPi, b - 2 * kPi, visit);
    } else {
      visit_range(bucket, a, b, visit);
    }
  }

  std::vector<Complex> pts_;
  double band_;
  std::vector<std::vector<Entry>> buckets_;
};

}  // namespace

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!(std::norm(z) < 1.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("DiskPoint: |z| must be < 1");
}

Complex mobius(Complex a, Complex z) { return (a - z) / (1.0 - std::conj(a) * z); }

DiskPoint mobius(DiskPoint a, DiskPoint z) { return DiskPoint(mobius(a.value(), z.value())); }

double pseudo_hyperbolic_complement(Complex a, Complex z) {
  return one_minus_sq(std::abs(a)) * one_minus_sq(std::abs(z)) / std::norm(1.0 - std::conj(a) * z);
}

double bergman_distance(Complex a, Complex z) {
  const double x = std::abs(a - z) / std::abs(1.0 - std::conj(a) * z);
  if (x < 0.5) return std::atanh(x);
  const double d = pseudo_hyperbolic_complement(a, z);
  if (d <= 0.0) return kInf;
  return 0.5 * std::log((1.0 + x) * (1.0 + x) / d);
}

bool HyperbolicDisk::contains(Complex w) const {
  if (!(std::norm(w) < 1.0)) return false;
  return bergman_distance(center, w) <= radius;
}

HyperbolicDisk disk_euclidean(DiskPoint z, double r) {
  if (!(r > 0.0)) throw DomainError("disk_euclidean: radius must be positive");
  const double s = std::tanh(r);
  const double s2 = s * s;
  const double z2 = std::norm(z.value());
  const double denom = 1.0 - s2 * z2;
  HyperbolicDisk d;
  d.center = z.value();
  d.radius = r;
  d.euclid_center = (1.0 - s2) * z.value() / denom;
  d.euclid_radius = s * one_minus_sq(z.modulus()) / denom;
  return d;
}

bool PolarBox::contains(Complex w) const {
  const double m = std::abs(w);
  if (m < r0 || m > r1 || m >= 1.0) return false;
  if (full_annulus()) return true;
  return angle_gap(std::arg(w), theta_center) <= half_width;
}

bool CarlesonSquare::contains(Complex w) const {
  if (!(std::norm(w) < 1.0)) return false;
  if (degenerate()) return true;
  return box().contains(w);
}

double CarlesonSquare::angular_width() const {
  if (degenerate()) return 2.0 * kPi;
  return (1.0 - std::abs(vertex)) / kPi;
}

PolarBox CarlesonSquare::box() const {
  if (degenerate()) return PolarBox{0.0, 1.0, 0.0, kPi};
  const double m = std::abs(vertex);
  return PolarBox{m, 1.0, std::arg(vertex), (1.0 - m) / (2.0 * kPi)};
}

CarlesonSquare carleson_square(DiskPoint z) { return CarlesonSquare{z.value()}; }

Region to_region(const CarlesonSquare& square) {
  if (square.degenerate()) return WholeDisk{};
  return square.box();
}

bool region_contains(const Region& region, Complex w) {
  return std::visit([w](const auto& r) { return r.contains(w); }, region);
}

Lattice Lattice::truncated(double radius) const {
  Lattice out;
  out.separation = separation;
  out.covering = covering;
  out.cutoff = cutoff;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::abs(points[i]) <= radius) {
      out.points.push_back(points[i]);
      out.ring.push_back(ring[i]);
    }
  }
  return out;
}

Lattice generate_lattice(double separation, double covering, double cutoff) {
  if (!(separation > 0.0)) throw ParameterError("generate_lattice: separation must be positive");
  if (separation > covering) throw ParameterError("generate_lattice: separation exceeds covering radius");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw ParameterError("generate_lattice: cutoff must lie in (0,1)");
  Lattice lat;
  lat.separation = separation;
  lat.covering = covering;
  lat.cutoff = cutoff;
  lat.points.push_back(Complex{});
  lat.ring.push_back(0);
  const double t = std::tanh(separation) * std::tanh(separation);
  for (int k = 1;; ++k) {
    const double rho = std::tanh(k * separation);
    if (!(rho < 1.0)) break;  // beyond double resolution
    const double rho2 = rho * rho;
    // smallest angle at which two points of this ring are `separation` apart
    const double c = (2.0 * rho2 - t * (1.0 + rho2 * rho2)) / (2.0 * rho2 * (1.0 - t));
    int count = 1;
    if (c >= -1.0) {
      const double step = std::acos(std::min(1.0, c));
      count = std::max(1, static_cast<int>(std::floor(2.0 * kPi / step * (1.0 - 1e-12))));
    }
    const double offset = (k % 2 == 1) ? kPi / count : 0.0;
    for (int j = 0; j < count; ++j) {
      lat.points.push_back(std::polar(rho, offset + 2.0 * kPi * j / count));
      lat.ring.push_back(k);
    }
    if (rho > 1.0 - cutoff) break;
  }
  return lat;
}

std::vector<Complex> hyperbolic_probes(std::size_t count, double cutoff) {
  std::vector<Complex> out;
  out.reserve(count);
  const double R = 1.0 - cutoff;
  const double total = R * R / one_minus_sq(R);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (i + 0.5) / count;
    const double x = u * total;
    const double rho = std::sqrt(x / (1.0 + x));
    const double frac = std::fmod(i * golden, 1.0);
    out.push_back(std::polar(rho, 2.0 * kPi * frac));
  }
  return out;
}

LatticeReport verify_lattice(const Lattice& lattice, std::span<const Complex> probes) {
  LatticeReport rep;
  rep.probes = probes.size();
  rep.min_pairwise = kInf;
  rep.max_probe_distance = probes.empty() ? 0.0 : kInf;
  const double scale = std::max(lattice.separation, lattice.covering);
  const double reach = 2.0 * (scale > 0.0 ? scale : 1.0);
  LatticeIndex index(lattice.points);
  const auto& pts = index.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    index.query(pts[i], reach, [&](std::size_t j) {
      if (j != i) rep.min_pairwise = std::min(rep.min_pairwise, bergman_distance(pts[i], pts[j]));
    });
  }
  if (!pts.empty()) {
    double worst = 0.0;
    for (const Complex& z : probes) {
      double best = kInf;
      index.query(z, reach, [&](std::size_t j) { best = std::min(best, bergman_distance(z, pts[j])); });
      worst = std::max(worst, best);
    }
    rep.max_probe_distance = worst;
  }
  rep.separated = pts.size() < 2 || rep.min_pairwise >= lattice.separation - 1e-9;
  rep.covering = rep.max_probe_distance <= lattice.covering + 1e-6;
  return rep;
}

LatticeReport verify_lattice(const Lattice& lattice, std::size_t probe_count) {
  const auto probes = hyperbolic_probes(probe_count, lattice.cutoff > 0.0 ? lattice.cutoff : 1e-3);
  return verify_lattice(lattice, probes);
}

std::size_t max_overlap(const Lattice& lattice, double R) {
  LatticeIndex index(lattice.points);
  const auto& pts = index.points();
  const double limit = 1.0 - lattice.cutoff;
  std::size_t best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(pts[i]) > limit) continue;
    std::size_t count = 0;
    index.query(pts[i], 2.0 * R, [&](std::size_t j) {
      if (j != i && bergman_distance(pts[i], pts[j]) < 2.0 * R) ++count;
    });
    best = std::max(best, count);
  }
  return best;
}

Lattice greedy_lattice(std::span<const Complex> candidates, double separation) {
  Lattice lat;
  lat.separation = separation;
  lat.covering = separation;
  for (const Complex& c : candidates) {
    bool ok = true;
    for (const Complex& p : lat.points) {
      if (bergman_distance(c, p) < separation) {
        ok = false;
        break;
      }
    }
    if (ok) {
      lat.points.push_back(c);
      lat.ring.push_back(-1);
    }
  }
  return lat;
}

std::string lattice_csv(const Lattice& lattice) {
  std::ostringstream os;
  os << "re,im,ring_index\n";
  char buf[96];
  for (std::size_t i = 0; i < lattice.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", lattice.points[i].real(),
                  lattice.points[i].imag(), lattice.ring[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace berglab
