#include "berglab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "berglab/quadrature.hpp"

namespace berglab {

double DiscreteMeasure::total() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

Measure::Measure() = default;

Measure Measure::atomic(std::vector<Complex> points, std::vector<double> masses) {
  if (points.size() != masses.size()) throw DomainError("atomic measure: points and masses differ in length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(std::norm(points[i]) < 1.0)) throw DomainError("atomic measure: atoms must lie in the open disk");
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i]))
      throw DomainError("atomic measure: masses must be positive");
  }
  Measure m;
  m.kind_ = Kind::Atomic;
  m.points_ = std::move(points);
  m.masses_ = std::move(masses);
  return m;
}

Measure Measure::radial(RadialWeight density) {
  if (!density.integrable()) throw DomainError("radial measure: density is not integrable");
  Measure m;
  m.kind_ = Kind::Radial;
  m.radial_ = std::move(density);
  return m;
}

Measure Measure::power(double a) {
  if (!(a > -1.0)) throw DomainError("power density: exponent must exceed -1");
  return radial(RadialWeight::power(1.0, 0.0, a));
}

Measure Measure::density(std::function<double(Complex)> f, std::string name, int radial_hint) {
  if (!f) throw DomainError("density measure: empty function");
  Measure m;
  m.kind_ = Kind::Density;
  m.density_ = std::move(f);
  m.name_ = std::move(name);
  m.radial_hint_ = radial_hint;
  return m;
}

bool Measure::is_zero() const {
  if (factor_ == 0.0 || support_.empty()) return true;
  if (kind_ != Kind::Atomic) return false;
  return std::none_of(points_.begin(), points_.end(),
                      [&](Complex z) { return support_.contains(std::abs(z)); });
}

double Measure::outer_radius() const {
  if (kind_ != Kind::Atomic) return support_.empty() ? 0.0 : support_.hi;
  double r = 0.0;
  for (Complex z : points_)
    if (support_.contains(std::abs(z))) r = std::max(r, std::abs(z));
  return r;
}

double Measure::density_at(Complex z) const {
  const double m = std::abs(z);
  if (kind_ == Kind::Atomic || !support_.contains(m) || !(m < 1.0)) return 0.0;
  if (kind_ == Kind::Radial) return factor_ * radial_.eval(m);
  return factor_ * density_(z);
}

double Measure::mass(const Region& region) const {
  if (support_.empty()) return 0.0;
  switch (kind_) {
    case Kind::Atomic: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i)
        if (support_.contains(std::abs(points_[i])) && region_contains(region, points_[i])) s += masses_[i];
      return factor_ * s;
    }
    case Kind::Radial: {
      if (support_.full()) return factor_ * region_weight(radial_, region);
      if (const auto* box = std::get_if<PolarBox>(&region)) {
        const double lo = std::max(box->r0, support_.lo);
        const double hi = std::min({box->r1, support_.hi, 1.0});
        if (!(hi > lo)) return 0.0;
        const double arc = box->full_annulus() ? 2.0 * kPi : 2.0 * box->half_width;
        const double upper = hi < 1.0 ? radial_.first_moment_tail(hi) : 0.0;
        return factor_ * arc / kPi * (radial_.first_moment_tail(lo) - upper);
      }
      if (std::holds_alternative<WholeDisk>(region))
        return mass(Region{PolarBox{0.0, 1.0, 0.0, kPi}});
      return factor_ * radial_region_integral([&](double t) { return radial_.eval(t); }, region, support_);
    }
    case Kind::Density: {
      RegionGridOptions opt;
      opt.radial_nodes += 8 * radial_hint_;
      return factor_ * region_integral_2d(density_, region, support_, opt);
    }
  }
  return 0.0;
}

Measure Measure::restrict(double lo, double hi) const {
  if (!(lo >= 0.0 && hi <= 1.0)) throw DomainError("restrict: bounds must lie in [0, 1]");
  Measure m = *this;
  m.support_.lo = std::max(support_.lo, lo);
  m.support_.hi = std::min(support_.hi, hi);
  if (kind_ == Kind::Atomic) {
    m.points_.clear();
    m.masses_.clear();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double r = std::abs(points_[i]);
      if (r >= lo && r < hi) {
        m.points_.push_back(points_[i]);
        m.masses_.push_back(masses_[i]);
      }
    }
    m.support_ = support_;
  }
  return m;
}

std::pair<Measure, Measure> Measure::restrict_tail(double s) const {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("restrict_tail: s must lie in [0, 1)");
  return {restrict(s, 1.0), restrict(0.0, s)};
}

Measure Measure::scale(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("scale: factor must be positive");
  Measure m = *this;
  m.factor_ = factor_ * c;
  return m;
}

DiscreteMeasure Measure::discretize(const DiscretizeOptions& opt) const {
  DiscreteMeasure out;
  if (is_zero()) return out;
  if (kind_ == Kind::Atomic) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!support_.contains(std::abs(points_[i]))) continue;
      out.points.push_back(points_[i]);
      out.masses.push_back(factor_ * masses_[i]);
    }
    return out;
  }
  PolarGridSpec spec;
  spec.r_lo = support_.lo;
  spec.r_hi = support_.hi;
  spec.levels = opt.levels;
  spec.radial_nodes = opt.radial_nodes + (kind_ == Kind::Density ? 4 * radial_hint_ : 0);
  spec.angular_nodes = opt.angular_nodes;
  if (kind_ == Kind::Radial) {
    const RadialWeight w = radial_;
    const PolarGrid grid = make_polar_grid([&](double r) { return w.eval(r); }, spec);
    out.points = grid.nodes;
    out.masses = grid.weights;
    for (double& m : out.masses) m *= factor_;
  } else {
    const PolarGrid grid = make_polar_grid(nullptr, spec);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = factor_ * density_(grid.nodes[i]) * grid.weights[i];
      if (v > 0.0) {
        out.points.push_back(grid.nodes[i]);
        out.masses.push_back(v);
      }
    }
  }
  return out;
}

std::vector<double> Measure::even_moments(std::size_t count) const {
  std::vector<double> out(count, 0.0);
  if (is_zero() || count == 0) return out;
  if (kind_ == Kind::Radial && support_.full()) {
    for (std::size_t n = 0; n < count; ++n) out[n] = factor_ * 2.0 * radial_.moment(2.0 * n + 1.0);
    return out;
  }
  if (kind_ == Kind::Radial) {
    // composite Gauss rule graded toward the outer edge of the support
    const GaussRule& g = gauss_legendre(48);
    const auto breaks = graded_breakpoints(support_.lo, support_.hi, 40);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
      const double half = 0.5 * (breaks[p + 1] - breaks[p]), mid = 0.5 * (breaks[p + 1] + breaks[p]);
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double t = mid + half * g.nodes[i];
        const double t2 = t * t;
        double w = 2.0 * factor_ * half * g.weights[i] * t * radial_.eval(t);
        for (std::size_t n = 0; n < count && w > 0.0; ++n) {
          out[n] += w;
          w *= t2;
          if (w < 1e-300) break;
        }
      }
    }
    return out;
  }
  const DiscreteMeasure d = discretize();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double t2 = std::norm(d.points[k]);
    double w = d.masses[k];
    for (std::size_t n = 0; n < count && w > 0.0; ++n) {
      out[n] += w;
      w *= t2;
      if (w < 1e-300) break;
    }
  }
  return out;
}

std::string Measure::describe() const {
  std::string s;
  char buf[128];
  switch (kind_) {
    case Kind::Atomic:
      s = "atomic[";
      for (std::size_t i = 0; i < points_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s(%.17g,%.17g,%.17g)", i ? ";" : "", points_[i].real(),
                      points_[i].imag(), masses_[i]);
        s += buf;
      }
      s += "]";
      break;
    case Kind::Radial:
      s = "radial[" + radial_.label() + "]";
      break;
    case Kind::Density:
      s = "density[" + name_ + "]";
      break;
  }
  std::snprintf(buf, sizeof buf, "*%.17g|[%.17g,%.17g)", factor_, support_.lo, support_.hi);
  return s + buf;
}

std::uint64_t Measure::hash() const { return fnv1a(describe()); }

}  // namespace berglab
