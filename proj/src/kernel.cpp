#include "berglab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berglab/measures.hpp"

namespace berglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex atom_value(const KernelAtom& at, Complex z) {
  const Complex w = (1.0 - std::norm(at.a)) / (1.0 - std::conj(at.a) * z);
  const double g = at.gamma;
  if (g == std::floor(g) && g >= 0.0 && g <= 32.0) {
    Complex v = 1.0, base = w;
    for (unsigned e = static_cast<unsigned>(g); e; e >>= 1) {
      if (e & 1u) v *= base;
      base *= base;
    }
    return at.c * v;
  }
  return at.c * std::exp(g * std::log(w));
}

}  // namespace

KernelSeries::KernelSeries(const RadialWeight& w, std::size_t order) : weight_(w) {
  if (!w.integrable()) throw ParameterError("kernel: weight is not integrable");
  coeffs_.resize(order + 1);
  for (std::size_t n = 0; n <= order; ++n) coeffs_[n] = 1.0 / (2.0 * w.moment(2.0 * n + 1.0));
  growth_ = 1.0;
  for (std::size_t n = order / 2; n < order; ++n) growth_ = std::max(growth_, coeffs_[n + 1] / coeffs_[n]);
}

double KernelSeries::relative_tail(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (growth_ * rho >= 1.0) return kInf;
  const std::size_t N = order();
  double s = 0.0, rn = 1.0;
  for (std::size_t n = 0; n <= N; ++n, rn *= rho) s += coeffs_[n] * rn;
  const double tail = coeffs_[N] * std::pow(rho, static_cast<double>(N)) * growth_ * rho / (1.0 - growth_ * rho);
  return tail / s;
}

std::size_t KernelSeries::required_order(double rho, double tol) const {
  const std::size_t N = order();
  if (relative_tail(rho) <= tol) return N;
  if (growth_ * rho >= 1.0 || rho >= 1.0) return std::size_t{1} << 20;
  // continue the coefficients geometrically with ratio `growth`, which overestimates them
  double s = 0.0, rn = 1.0;
  for (std::size_t n = 0; n <= N; ++n, rn *= rho) s += coeffs_[n] * rn;
  double kn = coeffs_[N], term = kn * std::pow(rho, static_cast<double>(N));
  for (std::size_t n = N + 1; n < (std::size_t{1} << 20); ++n) {
    term *= growth_ * rho;
    s += term;
    if (term * growth_ * rho / (1.0 - growth_ * rho) <= tol * s) return n;
  }
  return std::size_t{1} << 20;
}

double KernelSeries::max_argument(double tol) const {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (relative_tail(mid) <= tol ? lo : hi) = mid;
  }
  return lo;
}

Complex KernelSeries::eval_unchecked(Complex z, Complex xi) const {
  const Complex x = std::conj(z) * xi;
  Complex s{};
  for (std::size_t n = coeffs_.size(); n-- > 0;) s = s * x + coeffs_[n];
  return s;
}

Complex KernelSeries::eval(Complex z, Complex xi, double tol) const {
  const double rho = std::abs(z) * std::abs(xi);
  if (relative_tail(rho) > tol)
    throw AccuracyError("kernel_eval: |z||xi| too close to 1 for this truncation", required_order(rho, tol));
  return eval_unchecked(z, xi);
}

KernelSeries kernel_coeffs(const RadialWeight& w, std::size_t order) { return KernelSeries(w, order); }

KernelSeries kernel_for_radius(const RadialWeight& w, double rho, double tol, std::size_t cap) {
  std::size_t order = 64;
  for (;;) {
    KernelSeries k(w, order);
    if (k.relative_tail(rho) <= tol || order >= cap) return k;
    order = std::min(cap, std::max(2 * order, k.required_order(rho, tol) + 8));
  }
}

AnalyticFunction AnalyticFunction::monomials(std::vector<Complex> coeffs) {
  AnalyticFunction f;
  f.coeffs_ = std::move(coeffs);
  return f;
}

AnalyticFunction AnalyticFunction::monomial(std::size_t n, Complex c) {
  std::vector<Complex> v(n + 1);
  v[n] = c;
  return monomials(std::move(v));
}

AnalyticFunction AnalyticFunction::atoms(std::vector<KernelAtom> atoms) {
  for (const auto& at : atoms)
    if (!(std::norm(at.a) < 1.0)) throw DomainError("kernel atom: a must lie in the open disk");
  AnalyticFunction f;
  f.atoms_ = std::move(atoms);
  return f;
}

AnalyticFunction AnalyticFunction::kernel(const KernelSeries& series, Complex z) {
  std::vector<Complex> c(series.order() + 1);
  Complex zn = 1.0;
  const Complex zc = std::conj(z);
  for (std::size_t n = 0; n < c.size(); ++n, zn *= zc) c[n] = series.coeff(n) * zn;
  return monomials(std::move(c));
}

bool AnalyticFunction::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; }) &&
         std::all_of(atoms_.begin(), atoms_.end(), [](const KernelAtom& a) { return a.c == Complex{}; });
}

Complex AnalyticFunction::operator()(Complex z) const {
  Complex s{};
  for (std::size_t n = coeffs_.size(); n-- > 0;) s = s * z + coeffs_[n];
  for (const auto& at : atoms_) s += atom_value(at, z);
  return s;
}

std::vector<Complex> AnalyticFunction::taylor(std::size_t count) const {
  std::vector<Complex> out(count);
  for (std::size_t n = 0; n < std::min(count, coeffs_.size()); ++n) out[n] = coeffs_[n];
  for (const auto& at : atoms_) {
    const Complex ac = std::conj(at.a);
    Complex term = at.c * std::pow(1.0 - std::norm(at.a), at.gamma);
    for (std::size_t n = 0; n < count; ++n) {
      out[n] += term;
      term *= ac * ((at.gamma + n) / (n + 1.0));
      if (std::abs(term) < 1e-300) break;
    }
  }
  return out;
}

std::size_t AnalyticFunction::taylor_length(double tol, std::size_t cap) const {
  std::size_t len = coeffs_.size();
  for (const auto& at : atoms_) {
    const double r = std::abs(at.a);
    double term = std::abs(at.c) * std::pow(1.0 - r * r, at.gamma);
    std::size_t n = 0;
    while (n < cap) {
      const double next_ratio = r * (at.gamma + n) / (n + 1.0);
      // geometric remainder bound once the ratios have dropped below one
      if (next_ratio < 1.0 && term * next_ratio / (1.0 - next_ratio) < tol) break;
      term *= next_ratio;
      ++n;
      if (term == 0.0) break;
    }
    len = std::max(len, n + 1);
  }
  return std::min(len, cap);
}

double AnalyticFunction::atom_radius() const {
  double r = 0.0;
  for (const auto& at : atoms_) r = std::max(r, std::abs(at.a));
  return r;
}

AnalyticFunction& AnalyticFunction::operator+=(const AnalyticFunction& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t n = 0; n < other.coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  return *this;
}

AnalyticFunction AnalyticFunction::scaled(Complex c) const {
  AnalyticFunction f = *this;
  for (auto& v : f.coeffs_) v *= c;
  for (auto& at : f.atoms_) at.c *= c;
  return f;
}

AnalyticFunction operator+(AnalyticFunction a, const AnalyticFunction& b) { return a += b; }

std::vector<Complex> grid_values(const AnalyticFunction& f, const PolarGrid& grid) {
  std::vector<Complex> out = f.coeffs().empty() ? std::vector<Complex>(grid.size())
                                                : evaluate_power_series(grid, f.coeffs());
  for (const auto& at : f.atom_list())
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] += atom_value(at, grid.nodes[i]);
  return out;
}

PolarGrid weight_grid(const RadialWeight& w, int angular_nodes, int radial_nodes, int levels) {
  PolarGridSpec spec;
  spec.levels = levels;
  spec.radial_nodes = radial_nodes;
  spec.angular_nodes = angular_nodes;
  return make_polar_grid([&](double r) { return w.eval(r); }, spec);
}

double grid_norm(std::span<const Complex> values, const PolarGrid& grid, double p) {
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * std::norm(values[i]);
    return std::sqrt(s);
  }
  for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * std::pow(std::abs(values[i]), p);
  return std::pow(s, 1.0 / p);
}

namespace {

int initial_angular(const AnalyticFunction& f) {
  int m = 64;
  const std::size_t need = std::max<std::size_t>(f.coeffs().size(), 1);
  while (static_cast<std::size_t>(m) < need && m < 4096) m *= 2;
  return m;
}

/// Integral of |f|^p w dA for functions with atoms. Each circle gets its own trapezoid
/// count, proportional to 1 / (1 - r |a|): the width of the strip where the atoms are analytic.
double atom_power_integral(const AnalyticFunction& f, const RadialWeight& w, double p, int radial,
                           double per_strip, int base, std::size_t& nodes) {
  const double rho = f.atom_radius();
  PolarGridSpec spec;
  spec.radial_nodes = radial;
  spec.angular_nodes = 1;
  const PolarGrid rings = make_polar_grid([&](double r) { return w.eval(r); }, spec);
  double s = 0.0;
  nodes = 0;
  for (std::size_t i = 0; i < rings.radii.size(); ++i) {
    const double r = rings.radii[i];
    const double need = per_strip / (1.0 - r * rho);
    int n = base;
    while (n < need && n < (1 << 20)) n *= 2;
    double ring = 0.0;
    for (int j = 0; j < n; ++j) ring += std::pow(std::abs(f(std::polar(r, 2.0 * kPi * j / n))), p);
    s += rings.radial_weights[i] * ring / n;
    nodes += static_cast<std::size_t>(n);
  }
  return s;
}

}  // namespace

QuadratureValue bergman_norm(const AnalyticFunction& f, const RadialWeight& w, double p,
                             const NormOptions& opt) {
  if (!(p > 0.0)) throw ParameterError("bergman_norm: p must be positive");
  QuadratureValue out;
  if (f.is_polynomial() && p == 2.0 && opt.allow_parseval) {
    double s = 0.0;
    for (std::size_t n = 0; n < f.coeffs().size(); ++n)
      if (f.coeffs()[n] != Complex{}) s += std::norm(f.coeffs()[n]) * 2.0 * w.moment(2.0 * n + 1.0);
    out.value = std::sqrt(s);
    return out;
  }
  int radial = 8, angular = initial_angular(f);
  double previous = -1.0;
  if (!f.is_polynomial()) {
    radial = 12;
    double per_strip = 40.0;
    for (;;) {
      const double s = atom_power_integral(f, w, p, radial, per_strip, angular, out.nodes);
      out.value = std::pow(s, 1.0 / p);
      if (previous >= 0.0 && std::abs(s - previous) <= opt.rel_tol * s) return out;
      // rings outside |a| need about 1 / (1 - |a|) nodes each, so the cap is looser here
      if (out.nodes > 4 * opt.node_cap) {
        out.converged = false;
        return out;
      }
      previous = s;
      radial += radial / 2;
      per_strip *= 1.5;
    }
  }
  for (;;) {
    const PolarGrid grid = weight_grid(w, angular, radial);
    const auto vals = grid_values(f, grid);
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) s += grid.weights[i] * std::pow(std::abs(vals[i]), p);
    out.nodes = grid.size();
    out.value = std::pow(s, 1.0 / p);
    if (previous >= 0.0 && std::abs(s - previous) <= opt.rel_tol * s) {
      out.converged = true;
      return out;
    }
    if (grid.size() * 4 > opt.node_cap) {
      out.converged = false;
      return out;
    }
    previous = s;
    radial *= 2;
    angular *= 2;
  }
}

InnerProduct inner_product_A2(const AnalyticFunction& f, const AnalyticFunction& g,
                              const RadialWeight& w, const NormOptions& opt) {
  if (f.is_polynomial() && g.is_polynomial() && f.coeffs().size() != g.coeffs().size()) {
    // monomials of different degree are orthogonal on every circle
    const std::size_t n = std::min(f.coeffs().size(), g.coeffs().size());
    auto cut = [n](const AnalyticFunction& h) {
      return AnalyticFunction::monomials({h.coeffs().begin(), h.coeffs().begin() + static_cast<std::ptrdiff_t>(n)});
    };
    return inner_product_A2(cut(f), cut(g), w, opt);
  }
  InnerProduct out;
  int radial = 8;
  int angular = std::max(initial_angular(f), initial_angular(g));
  Complex previous{};
  bool have = false;
  for (;;) {
    const PolarGrid grid = weight_grid(w, angular, radial);
    const auto fv = grid_values(f, grid);
    const auto gv = grid_values(g, grid);
    Complex s{};
    double scale = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
      s += grid.weights[i] * fv[i] * std::conj(gv[i]);
      scale += grid.weights[i] * std::abs(fv[i]) * std::abs(gv[i]);
    }
    out.value = s;
    out.nodes = grid.size();
    if (have && std::abs(s - previous) <= opt.rel_tol * scale) {
      out.converged = true;
      return out;
    }
    if (grid.size() * 4 > opt.node_cap) {
      out.converged = false;
      return out;
    }
    previous = s;
    have = true;
    radial *= 2;
    angular *= 2;
  }
}

KernelNormRatio kernel_norm_ratio(const RadialWeight& omega, const RadialWeight& eta, double p,
                                  Complex z) {
  KernelNormRatio out;
  const KernelSeries series = kernel_for_radius(omega, std::abs(z), 1e-13);
  const AnalyticFunction bz = AnalyticFunction::kernel(series, z);
  const QuadratureValue nv = bergman_norm(bz, eta, p);
  const CarlesonSquare sq{z};
  out.kernel_norm = nv.value;
  out.converged = nv.converged;
  out.predicted = std::pow(region_weight(eta, sq), 1.0 / p) / region_weight(omega, sq);
  out.ratio = out.kernel_norm / out.predicted;
  return out;
}

double gamma_min(const RadialWeight& w) {
  const double r = 1.0 - std::ldexp(1.0, -16);
  const double ratio = w.tail(r) / w.tail(0.5 * (1.0 + r));
  return 2.0 + std::log2(ratio);
}

AtomResult kernel_atom(Complex a, double gamma,
                       std::optional<std::pair<RadialWeight, double>> normalize_in) {
  if (!(gamma > 0.0)) throw ParameterError("kernel_atom: gamma must be positive");
  AtomResult out;
  out.function = AnalyticFunction::atoms({KernelAtom{a, 1.0, gamma}});
  if (normalize_in) {
    const auto& [w, p] = *normalize_in;
    out.gamma_warning = gamma < gamma_min(w);
    out.norm = bergman_norm(out.function, w, p).value;
    out.function = out.function.scaled(1.0 / out.norm);
  }
  return out;
}

ComparabilityWindow kernel_local_comparability(const KernelSeries& series, Complex z, double r,
                                               int rings, int angles) {
  const HyperbolicDisk d = disk_euclidean(DiskPoint(z), r);
  const double center = series.eval_unchecked(z, z).real();
  ComparabilityWindow out{kInf, 0.0};
  auto visit = [&](Complex xi) {
    const double v = std::abs(series.eval_unchecked(z, xi)) / center;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  };
  visit(d.euclid_center);
  for (int i = 1; i <= rings; ++i)
    for (int j = 0; j < angles; ++j)
      visit(d.euclid_center + std::polar(d.euclid_radius * i / rings, 2.0 * kPi * j / angles));
  return out;
}

}  // namespace berglab
