#include "berglab/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "berglab/parallel.hpp"
#include "berglab/quadrature.hpp"

namespace berglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double p, double q, const char* where) {
  if (!(p > 0.0 && q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
    throw ParameterError(std::string(where) + ": exponents must be positive and finite");
}

void require_p_le_q(double p, double q, const char* where) {
  require_positive(p, q, where);
  if (!(p <= q)) throw ParameterError(std::string(where) + ": requires p <= q");
}

double sequence_exponent(double p, double q, const char* where) {
  require_positive(p, q, where);
  if (!(q < p)) throw ParameterError(std::string(where) + ": requires q < p (p = q has no finite exponent)");
  return p * q / (p - q);
}

bool same_power(const RadialWeight& a, const RadialWeight& b) {
  const auto pa = a.power_params(), pb = b.power_params();
  return pa && pb && *pa == *pb;
}

// omega, eta, upsilon masses of one region; identical power weights share a single evaluation
struct WeightSet {
  const RadialWeight& omega;
  const RadialWeight& eta;
  const RadialWeight& upsilon;
  bool eta_is_omega, ups_is_omega, ups_is_eta;

  WeightSet(const RadialWeight& o, const RadialWeight& e, const RadialWeight& u)
      : omega(o), eta(e), upsilon(u), eta_is_omega(same_power(e, o)), ups_is_omega(same_power(u, o)),
        ups_is_eta(same_power(u, e)) {}

  struct Values {
    double omega = 0.0, eta = 0.0, upsilon = 0.0;
  };

  Values at(const Region& reg) const {
    Values v;
    v.omega = region_weight(omega, reg);
    v.eta = eta_is_omega ? v.omega : region_weight(eta, reg);
    v.upsilon = ups_is_omega ? v.omega : ups_is_eta ? v.eta : region_weight(upsilon, reg);
    return v;
  }
};

Region disk_region(Complex z, double r) { return Region{disk_euclidean(DiskPoint(z), r)}; }

double m0_factor(const WeightSet::Values& w, double p, double q) {
  return std::pow(w.upsilon, 1.0 / q) / std::pow(w.eta, 1.0 / p) / w.omega;
}

double mu_hat_factor(const WeightSet::Values& w, double p, double q) {
  return std::pow(w.upsilon, 1.0 / q) / std::pow(w.eta, 1.0 / p) / std::pow(w.omega, 1.0 + 1.0 / q - 1.0 / p);
}

std::string three_point_verdict(const std::vector<double>& v, double tol) {
  if (v.empty()) return "vanishing";
  const double top = *std::max_element(v.begin(), v.end());
  if (top == 0.0) return "vanishing";
  const std::size_t n = v.size();
  if (n < 3) return "not vanishing";
  const double slack = 1.0 + 1e-12;
  const bool decreasing = v[n - 1] <= v[n - 2] * slack && v[n - 2] <= v[n - 3] * slack;
  return decreasing && v[n - 1] <= tol * top ? "vanishing" : "not vanishing";
}

struct PointSet {
  std::vector<Complex> points;
  std::vector<std::size_t> radius_index;
  std::vector<double> radii;
};

PointSet sup_points(const Measure& mu, const std::vector<double>& radii, int angles, bool include_atoms) {
  PointSet ps;
  ps.radii = radii;
  const int m = mu.is_radial() ? 1 : std::max(1, angles);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0 && radii[i] < 1.0)) throw DomainError("grid radii must lie in [0, 1)");
    for (int j = 0; j < m; ++j) {
      ps.points.push_back(std::polar(radii[i], 2.0 * kPi * j / m));
      ps.radius_index.push_back(i);
    }
  }
  if (include_atoms && mu.kind() == Measure::Kind::Atomic) {
    for (Complex a : mu.discretize().points) {
      ps.radii.push_back(std::abs(a));
      ps.points.push_back(a);
      ps.radius_index.push_back(ps.radii.size() - 1);
    }
  }
  return ps;
}

std::vector<WeightSet::Values> weights_by_radius(const WeightSet& ws, const std::vector<double>& radii, double r) {
  std::vector<WeightSet::Values> out(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { out[i] = ws.at(disk_region(radii[i], r)); });
  return out;
}

// Evaluates f(|z|) * mu(D(z, r)) at every point of the set.
std::vector<double> disk_products(const Measure& mu, const PointSet& ps, double r,
                                  const std::vector<double>& radial_factor) {
  std::vector<double> out(ps.points.size());
  parallel_for(ps.points.size(), [&](std::size_t k) {
    const double f = radial_factor[ps.radius_index[k]];
    const double m = mu.mass(disk_region(ps.points[k], r));
    out[k] = m == 0.0 ? 0.0 : m * f;
  });
  return out;
}

void fill_sup(CarlesonReport& rep) {
  rep.value = 0.0;
  for (std::size_t k = 0; k < rep.values.size(); ++k)
    if (rep.values[k] > rep.value || k == 0) {
      rep.value = rep.values[k];
      if (k < rep.points.size()) rep.witness = rep.points[k];
    }
}

}  // namespace

double carleson_quotient(const Measure& mu, const RadialWeight& w, Complex z, RegionKind kind, double e, double r) {
  if (!(e > 0.0)) throw ParameterError("carleson_quotient: exponent must be positive");
  const Region reg = kind == RegionKind::Square ? to_region(carleson_square(DiskPoint(z))) : disk_region(z, r);
  const double wr = region_weight(w, reg);
  if (!(wr > 0.0)) throw DomainError("carleson_quotient: region has zero weight");
  const double m = mu.mass(reg);
  return m == 0.0 ? 0.0 : m / std::pow(wr, e);
}

double m0_integrand(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                    const RadialWeight& upsilon, double p, double q, Complex z, double r) {
  const WeightSet ws(omega, eta, upsilon);
  const Region reg = disk_region(z, r);
  const double m = mu.mass(reg);
  return m == 0.0 ? 0.0 : m * m0_factor(ws.at(reg), p, q);
}

CarlesonReport M0_sup(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                      const RadialWeight& upsilon, double p, double q, double r, const SupGrid& grid) {
  require_p_le_q(p, q, "M0_sup");
  const WeightSet ws(omega, eta, upsilon);
  const PointSet ps = sup_points(mu, grid.radii, grid.angles, grid.include_atoms);
  const auto w = weights_by_radius(ws, ps.radii, r);
  std::vector<double> factor(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) factor[i] = m0_factor(w[i], p, q);
  CarlesonReport rep;
  rep.kind = "M0";
  rep.points = ps.points;
  rep.values = disk_products(mu, ps, r, factor);
  fill_sup(rep);
  rep.meta = {{"r", r}, {"p", p}, {"q", q}, {"points", static_cast<double>(ps.points.size())}};
  return rep;
}

std::vector<double> shell_radii(int kmax) {
  std::vector<double> out;
  for (int k = 1; k <= kmax; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
  return out;
}

CarlesonReport vanishing_profile(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                                 const RadialWeight& upsilon, double p, double q, double r,
                                 const std::vector<double>& radii, int angles, double tol) {
  require_p_le_q(p, q, "vanishing_profile");
  const WeightSet ws(omega, eta, upsilon);
  const PointSet ps = sup_points(mu, radii, angles, false);
  const auto w = weights_by_radius(ws, ps.radii, r);
  std::vector<double> factor(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) factor[i] = m0_factor(w[i], p, q);
  const auto vals = disk_products(mu, ps, r, factor);
  CarlesonReport rep;
  rep.kind = "vanishing_profile";
  rep.abscissa = radii;
  rep.values.assign(radii.size(), 0.0);
  rep.points.assign(radii.size(), Complex{});
  std::vector<bool> seen(radii.size(), false);
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const std::size_t i = ps.radius_index[k];
    if (!seen[i] || vals[k] > rep.values[i]) {
      rep.values[i] = vals[k];
      rep.points[i] = ps.points[k];
      seen[i] = true;
    }
  }
  fill_sup(rep);
  rep.verdict = three_point_verdict(rep.values, tol);
  rep.meta = {{"r", r}, {"p", p}, {"q", q}, {"tol", tol}};
  return rep;
}

CarlesonReport carleson_sup(const Measure& mu, const RadialWeight& w, double p, double q, RegionKind kind, double r,
                            const SupGrid& grid) {
  require_positive(p, q, "carleson_sup");
  const PointSet ps = sup_points(mu, grid.radii, grid.angles, grid.include_atoms);
  CarlesonReport rep;
  rep.kind = kind == RegionKind::Square ? "square_sup" : "disk_sup";
  rep.points = ps.points;
  rep.values.resize(ps.points.size());
  std::vector<double> wr(ps.radii.size());
  parallel_for(ps.radii.size(), [&](std::size_t i) {
    const Region reg = kind == RegionKind::Square ? to_region(carleson_square(DiskPoint(ps.radii[i])))
                                                  : disk_region(ps.radii[i], r);
    wr[i] = region_weight(w, reg);
  });
  parallel_for(ps.points.size(), [&](std::size_t k) {
    const Complex z = ps.points[k];
    const Region reg = kind == RegionKind::Square ? to_region(carleson_square(DiskPoint(z))) : disk_region(z, r);
    const double m = mu.mass(reg);
    rep.values[k] = m == 0.0 ? 0.0 : m / std::pow(wr[ps.radius_index[k]], q / p);
  });
  fill_sup(rep);
  rep.meta = {{"r", r}, {"p", p}, {"q", q}};
  return rep;
}

CarlesonReport lambda_seq_norm(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                               const RadialWeight& upsilon, double p, double q, const Lattice& lattice, double r) {
  const double s = sequence_exponent(p, q, "lambda_seq_norm");
  const WeightSet ws(omega, eta, upsilon);
  const std::size_t n = lattice.size();
  // one weight (and radial-mass) evaluation per ring
  std::vector<long> key(n);
  std::map<long, std::size_t> first;
  for (std::size_t j = 0; j < n; ++j) {
    const int ring = j < lattice.ring.size() ? lattice.ring[j] : -1;
    key[j] = ring >= 0 ? ring : -static_cast<long>(j) - 1;
    first.emplace(key[j], j);
  }
  std::vector<std::size_t> reps;
  std::map<long, std::size_t> slot;
  for (const auto& [k, j] : first) {
    slot[k] = reps.size();
    reps.push_back(j);
  }
  std::vector<double> factor(reps.size()), ring_mass(reps.size(), 0.0);
  const bool radial = mu.is_radial();
  parallel_for(reps.size(), [&](std::size_t g) {
    const double rho = std::abs(lattice.points[reps[g]]);
    const Region reg = disk_region(rho, r);
    factor[g] = m0_factor(ws.at(reg), p, q);
    if (radial) ring_mass[g] = mu.mass(reg);
  });
  CarlesonReport rep;
  rep.kind = "lambda";
  rep.points = lattice.points;
  rep.values.resize(n);
  parallel_for(n, [&](std::size_t j) {
    const std::size_t g = slot.at(key[j]);
    const double m = radial ? ring_mass[g] : mu.mass(disk_region(lattice.points[j], r));
    rep.values[j] = m == 0.0 ? 0.0 : m * factor[g];
  });
  double rmax = 0.0;
  for (Complex z : lattice.points) rmax = std::max(rmax, std::abs(z));
  // partial sums over |z_j| <= 1 - 2^{-k}, accumulated in lattice order within each band
  std::vector<double> order_mod(n);
  for (std::size_t j = 0; j < n; ++j) order_mod[j] = std::abs(lattice.points[j]);
  double total = 0.0;
  for (double v : rep.values) total += std::pow(v, s);
  for (int k = 1;; ++k) {
    const double cut = 1.0 - std::ldexp(1.0, -k);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (order_mod[j] <= cut) acc += std::pow(rep.values[j], s);
    rep.abscissa.push_back(cut);
    rep.partial_norms.push_back(std::pow(acc, 1.0 / s));
    if (cut >= rmax || k >= 60) break;
  }
  rep.value = std::pow(total, 1.0 / s);
  rep.partial_norms.back() = rep.value;
  const std::size_t m = rep.partial_norms.size();
  rep.diverging = m >= 2 && rep.partial_norms[m - 2] > 0.0 && rep.partial_norms[m - 1] > 1.1 * rep.partial_norms[m - 2];
  for (std::size_t j = 0; j < n; ++j)
    if (rep.values[j] == *std::max_element(rep.values.begin(), rep.values.end())) {
      rep.witness = lattice.points[j];
      break;
    }
  rep.meta = {{"r", r}, {"p", p}, {"q", q}, {"exponent", s}, {"points", static_cast<double>(n)}};
  return rep;
}

namespace {

// (1/2pi) * integral over the circle |z| = rho of (g(rho) * mu(D(z, r)))^s, for atomic
// measures exactly: mu(D(z, r)) is piecewise constant in arg z.
double circle_mean_atomic(const std::vector<HyperbolicDisk>& disks, const std::vector<double>& masses, double rho,
                          double g, double s) {
  double base = 0.0;
  std::vector<std::pair<double, double>> events;
  for (std::size_t k = 0; k < disks.size(); ++k) {
    const double len = arc_length_inside(Region{disks[k]}, rho);
    if (len <= 0.0) continue;
    if (len >= 2.0 * kPi) {
      base += masses[k];
      continue;
    }
    double a = std::arg(disks[k].euclid_center) - 0.5 * len;
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    const double b = a + len;
    if (b <= 2.0 * kPi) {
      events.emplace_back(a, masses[k]);
      events.emplace_back(b, -masses[k]);
    } else {
      events.emplace_back(a, masses[k]);
      events.emplace_back(2.0 * kPi, -masses[k]);
      events.emplace_back(0.0, masses[k]);
      events.emplace_back(b - 2.0 * kPi, -masses[k]);
    }
  }
  auto val = [&](double m) { return m <= 0.0 ? 0.0 : std::pow(g * m, s); };
  if (events.empty()) return val(base);
  std::sort(events.begin(), events.end());
  double acc = 0.0, cur = 0.0, last = 0.0;
  for (const auto& [theta, dm] : events) {
    acc += val(base + cur) * (theta - last);
    cur += dm;
    last = theta;
  }
  acc += val(base + std::max(cur, 0.0)) * (2.0 * kPi - last);
  return acc / (2.0 * kPi);
}

struct RadialRule {
  std::vector<double> nodes, weights;  // weights include 2 rho omega(rho)
};

RadialRule radial_rule(const RadialWeight& omega, std::vector<double> breaks, int nodes_per_panel) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               breaks.end());
  RadialRule rule;
  const GaussRule& g = gauss_legendre(nodes_per_panel);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double half = 0.5 * (breaks[i + 1] - breaks[i]), mid = 0.5 * (breaks[i + 1] + breaks[i]);
    if (!(half > 0.0)) continue;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double t = mid + half * g.nodes[k];
      rule.nodes.push_back(t);
      rule.weights.push_back(half * g.weights[k] * 2.0 * t * omega.eval(t));
    }
  }
  return rule;
}

std::vector<double> base_breaks(double cutoff) {
  const double hi = 1.0 - cutoff;
  const int levels = static_cast<int>(std::ceil(std::log2(1.0 / cutoff)));
  return graded_breakpoints(0.0, hi, levels);
}

// integral over |z| < 1 - cutoff of (g(|z|) mu(D(z, r)))^s omega dA
struct DiskFunctional {
  double value = 0.0;
  bool converged = true;
};

DiskFunctional disk_functional(const Measure& mu, const RadialWeight& omega, double r, double s,
                               const std::function<double(double)>& g, const DiskNormOptions& opt) {
  DiskFunctional out;
  if (mu.is_zero()) return out;
  std::vector<double> breaks = base_breaks(opt.cutoff);
  const double hi = 1.0 - opt.cutoff;
  std::vector<HyperbolicDisk> disks;
  std::vector<double> masses;
  if (mu.kind() == Measure::Kind::Atomic) {
    const DiscreteMeasure d = mu.discretize();
    for (std::size_t k = 0; k < d.size(); ++k) {
      disks.push_back(disk_euclidean(DiskPoint(d.points[k]), r));
      masses.push_back(d.masses[k]);
      const double c = std::abs(disks.back().euclid_center), rho = disks.back().euclid_radius;
      for (double b : {c - rho, rho - c, c + rho})
        if (b > 0.0 && b < hi) breaks.push_back(b);
    }
  }
  auto evaluate = [&](int per_panel) {
    const RadialRule rule = radial_rule(omega, breaks, per_panel);
    std::vector<double> contrib(rule.nodes.size(), 0.0);
    bool ok = true;
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
      const double rho = rule.nodes[i];
      const double gr = g(rho);
      double mean = 0.0;
      if (mu.kind() == Measure::Kind::Atomic) {
        mean = circle_mean_atomic(disks, masses, rho, gr, s);
      } else if (mu.is_radial()) {
        const double m = mu.mass(disk_region(rho, r));
        mean = m > 0.0 ? std::pow(gr * m, s) : 0.0;
      } else {
        double prev = -1.0;
        for (int n = opt.angular_nodes;; n *= 2) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) {
            const double m = mu.mass(disk_region(std::polar(rho, 2.0 * kPi * j / n), r));
            if (m > 0.0) acc += std::pow(gr * m, s);
          }
          mean = acc / n;
          if (prev >= 0.0 && std::abs(mean - prev) <= opt.rel_tol * mean) break;
          if (2 * n > opt.max_angular) {
            ok = false;
            break;
          }
          prev = mean;
        }
      }
      contrib[i] = rule.weights[i] * mean;
    });
    double sum = 0.0;
    for (double c : contrib) sum += c;
    return std::make_pair(sum, ok);
  };
  const auto coarse = evaluate(opt.radial_nodes);
  const auto fine = evaluate(opt.radial_nodes + 4);
  out.value = fine.first;
  // compare the norms, not their s-th powers
  const double nf = std::pow(fine.first, 1.0 / s), nc = std::pow(coarse.first, 1.0 / s);
  out.converged = fine.second && std::abs(nf - nc) <= std::max(opt.rel_tol, 1e-3) * nf;
  return out;
}

}  // namespace

CarlesonReport mu_hat_norm(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                           const RadialWeight& upsilon, double p, double q, double r, const DiskNormOptions& opt) {
  const double s = sequence_exponent(p, q, "mu_hat_norm");
  const WeightSet ws(omega, eta, upsilon);
  const auto g = [&](double rho) { return mu_hat_factor(ws.at(disk_region(rho, r)), p, q); };
  const DiskFunctional f = disk_functional(mu, omega, r, s, g, opt);
  CarlesonReport rep;
  rep.kind = "mu_hat";
  rep.value = std::pow(f.value, 1.0 / s);
  rep.converged = f.converged;
  rep.meta = {{"r", r}, {"p", p}, {"q", q}, {"exponent", s}, {"cutoff", opt.cutoff}};
  return rep;
}

CarlesonReport phi_norm(const Measure& mu, const RadialWeight& omega, double p, double q, double r,
                        const DiskNormOptions& opt) {
  require_positive(p, q, "phi_norm");
  if (!(q < p)) throw ParameterError("phi_norm: requires q < p");
  const double s = p / (p - q);
  const auto g = [&](double rho) { return 1.0 / region_weight(omega, disk_region(rho, r)); };
  const DiskFunctional f = disk_functional(mu, omega, r, s, g, opt);
  CarlesonReport rep;
  rep.kind = "phi";
  rep.value = std::pow(f.value, 1.0 / s);
  rep.converged = f.converged;
  rep.meta = {{"r", r}, {"p", p}, {"q", q}, {"exponent", s}, {"cutoff", opt.cutoff}};
  return rep;
}

double angular_kernel_mean(double gamma, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("angular_kernel_mean: x must lie in [0, 1)");
  const double y = x * x;
  if (gamma == 4.0) return (1.0 + y) / ((1.0 - y) * (1.0 - y) * (1.0 - y));
  if (gamma == 2.0) return 1.0 / (1.0 - y);
  if (y <= 0.81) {
    // 2F1(g/2, g/2; 1; y) = sum ((g/2)_n / n!)^2 y^n
    const double a = 0.5 * gamma;
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 100000; ++n) {
      term *= (a + n) * (a + n) / ((n + 1.0) * (n + 1.0)) * y;
      sum += term;
      if (std::abs(term) < 1e-17 * sum) break;
    }
    return sum;
  }
  // peak of width 1 - x at theta = 0: graded panels
  const auto f = [&](double th) {
    const double d = 1.0 - 2.0 * x * std::cos(th) + y;
    return std::pow(d, -0.5 * gamma);
  };
  const double w = 1.0 - x;
  std::vector<double> cuts{0.0};
  for (double c = w; c < kPi; c *= 4.0) cuts.push_back(c);
  cuts.push_back(kPi);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += integrate_1d(f, cuts[i], cuts[i + 1], 1e-12).value;
  return acc / kPi;
}

double psi_value(const Measure& mu, const RadialWeight& omega, double gamma, Complex z) {
  if (std::abs(z) >= 1.0) throw DomainError("psi_value: z must lie in the disk");
  if (mu.is_zero()) return 0.0;
  if (mu.is_radial()) {
    const double rho = std::abs(z);
    const RadialSupport sup = mu.support();
    const auto f = [&](double t) {
      const double v = mu.density_at(Complex(t, 0.0));
      if (v == 0.0) return 0.0;
      const double ws = region_weight(omega, carleson_square(DiskPoint(t)));
      return 2.0 * t * v * std::pow(1.0 - t, gamma) * angular_kernel_mean(gamma, rho * t) / ws;
    };
    std::vector<double> cuts{sup.lo, sup.hi};
    for (double k : {4.0, 1.0, 0.25}) {
      const double c = 1.0 - k * (1.0 - rho);
      if (c > sup.lo && c < sup.hi) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i + 1] > cuts[i]) acc += integrate_1d(f, cuts[i], cuts[i + 1], 1e-10).value;
    return acc;
  }
  const DiscreteMeasure d = mu.discretize();
  double acc = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Complex xi = d.points[k];
    const double ws = region_weight(omega, carleson_square(DiskPoint(xi)));
    acc += d.masses[k] * std::pow((1.0 - std::abs(xi)) / std::abs(1.0 - std::conj(z) * xi), gamma) / ws;
  }
  return acc;
}

CarlesonReport psi_norm(const Measure& mu, const RadialWeight& omega, double gamma, double p, double q,
                        const DiskNormOptions& opt) {
  require_positive(p, q, "psi_norm");
  if (!(q < p)) throw ParameterError("psi_norm: requires q < p");
  if (!(gamma > 1.0)) throw ParameterError("psi_norm: gamma must exceed 1");
  const double s = p / (p - q);
  CarlesonReport rep;
  rep.kind = "psi";
  rep.meta = {{"gamma", gamma}, {"p", p}, {"q", q}, {"exponent", s}, {"cutoff", opt.cutoff}};
  if (mu.is_zero()) return rep;
  const std::vector<double> breaks = base_breaks(opt.cutoff);
  // atoms and quadrature nodes of mu are reused for every circle
  DiscreteMeasure d;
  std::vector<double> inv_square;
  if (!mu.is_radial()) {
    d = mu.discretize();
    inv_square.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k)
      inv_square[k] = d.masses[k] * std::pow(1.0 - std::abs(d.points[k]), gamma) /
                      region_weight(omega, carleson_square(DiskPoint(d.points[k])));
  }
  auto psi_at = [&](Complex z) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k)
      acc += inv_square[k] * std::pow(std::abs(1.0 - std::conj(z) * d.points[k]), -gamma);
    return acc;
  };
  auto evaluate = [&](int per_panel) {
    const RadialRule rule = radial_rule(omega, breaks, per_panel);
    std::vector<double> contrib(rule.nodes.size());
    std::vector<double> radial_psi(rule.nodes.size());
    bool ok = true;
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
      const double rho = rule.nodes[i];
      double mean = 0.0;
      if (mu.is_radial()) {
        radial_psi[i] = psi_value(mu, omega, gamma, rho);
        mean = std::pow(radial_psi[i], s);
      } else {
        double prev = -1.0;
        for (int n = opt.angular_nodes;; n *= 2) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += std::pow(psi_at(std::polar(rho, 2.0 * kPi * j / n)), s);
          mean = acc / n;
          if (prev >= 0.0 && std::abs(mean - prev) <= 1e-10 * mean) break;
          if (2 * n > opt.max_angular) {
            ok = false;
            break;
          }
          prev = mean;
        }
      }
      contrib[i] = rule.weights[i] * mean;
    });
    double sum = 0.0;
    for (double c : contrib) sum += c;
    return std::make_pair(sum, ok);
  };
  const auto coarse = evaluate(opt.radial_nodes);
  const auto fine = evaluate(opt.radial_nodes + 4);
  rep.value = std::pow(fine.first, 1.0 / s);
  rep.converged = fine.second && std::abs(rep.value - std::pow(coarse.first, 1.0 / s)) <= std::max(opt.rel_tol, 1e-3) * rep.value;
  return rep;
}

namespace {

// Nodes carrying mu: a polar grid for densities (fast evaluation), raw atoms otherwise.
struct Target {
  std::optional<PolarGrid> grid;
  std::vector<Complex> points;
  std::vector<double> weights;

  std::vector<Complex> values(const AnalyticFunction& f) const {
    if (grid) return grid_values(f, *grid);
    std::vector<Complex> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f(points[i]);
    return out;
  }
};

Target target_of(const Measure& mu, int angular, int radial, int levels) {
  Target t;
  if (mu.is_zero()) return t;
  if (mu.kind() == Measure::Kind::Atomic) {
    const DiscreteMeasure d = mu.discretize();
    t.points = d.points;
    t.weights = d.masses;
    return t;
  }
  PolarGridSpec spec;
  spec.r_lo = mu.support().lo;
  spec.r_hi = mu.support().hi;
  spec.levels = levels;
  spec.radial_nodes = radial;
  spec.angular_nodes = angular;
  if (mu.is_radial()) {
    t.grid = make_polar_grid([&](double r) { return mu.density_at(Complex(r, 0.0)); }, spec);
    t.weights = t.grid->weights;
  } else {
    t.grid = make_polar_grid(nullptr, spec);
    t.weights = t.grid->weights;
    for (std::size_t i = 0; i < t.weights.size(); ++i) t.weights[i] *= mu.density_at(t.grid->nodes[i]);
  }
  return t;
}

struct TargetPair {
  Target coarse, fine;
  bool rotation_invariant = false;
  std::vector<Complex> atoms;
};

TargetPair targets_for(const Measure& mu, const OptimizerOptions& opt) {
  TargetPair tp;
  tp.coarse = target_of(mu, opt.grid_angular, opt.grid_radial, opt.grid_levels);
  tp.fine = target_of(mu, opt.final_angular, opt.grid_radial + 2, opt.grid_levels + 2);
  tp.rotation_invariant = mu.is_radial();
  if (mu.kind() == Measure::Kind::Atomic) tp.atoms = tp.coarse.points;
  return tp;
}

double lq_norm(std::span<const Complex> v, std::span<const double> w, double q) {
  return std::pow(power_sum(v, w, q), 1.0 / q);
}

// Kernel atoms of exponent gamma lie in A^p_omega and peak at their centre only when
// gamma p exceeds 2 + beta, beta the boundary exponent of omega.
double atom_exponent(const RadialWeight& omega, double p, double gamma) {
  return std::max(gamma, (3.0 + omega.boundary_exponent()) / p);
}

NormEstimate embed_impl(const RadialWeight& omega, double p, const TargetPair& tp,
                        std::span<const double> coarse_w, std::span<const double> fine_w, double q,
                        const OptimizerOptions& opt_in) {
  OptimizerOptions opt = opt_in;
  opt.gamma = atom_exponent(omega, p, opt_in.gamma);
  if (opt.gamma > opt_in.gamma) {
    opt.grid_angular *= 2;
    opt.grid_radial += 2;
  }
  const PolarGrid den = weight_grid(omega, opt.grid_angular, opt.grid_radial, opt.grid_levels);
  const auto candidates = witness_family(opt, tp.rotation_invariant, tp.atoms);
  const ColumnMap columns = [&](const AnalyticFunction& f, std::vector<Complex>& num, std::vector<Complex>& den_v) {
    den_v = grid_values(f, den);
    num = tp.coarse.values(f);
  };
  NormEstimate est = optimize_witness(candidates, columns, coarse_w, den.weights, q, p, opt);
  if (est.witness.is_zero()) return est;
  const PolarGrid den_f = weight_grid(omega, opt.final_angular, opt.grid_radial + 2, opt.grid_levels + 2);
  const double dn = grid_norm(grid_values(est.witness, den_f), den_f, p);
  const double nn = lq_norm(tp.fine.values(est.witness), fine_w, q);
  est.value = dn > 0.0 ? nn / dn : 0.0;
  est.converged = std::abs(est.value - est.working_value) <= 0.01 * std::max(est.value, est.working_value);
  return est;
}

struct MultiResult {
  double value = 0.0;
  double working_value = 0.0;
  std::vector<AnalyticFunction> functions;
  std::size_t budget_used = 0;
  bool exhausted = false;
  bool converged = true;
};

// sup of int prod |f_i|^{q_i} w / prod ||f_i||^{q_i} on a target whose weights are given.
MultiResult multi_impl(const std::vector<EmbeddingSpec>& specs, const TargetPair& tp,
                       const std::vector<double>& coarse_w, const std::vector<double>& fine_w,
                       const OptimizerOptions& opt, int rounds) {
  const std::size_t n = specs.size();
  MultiResult res;
  res.functions.assign(n, AnalyticFunction::monomial(0));
  std::vector<std::vector<Complex>> vc(n), vf(n);
  std::vector<double> norm_c(n), norm_f(n);
  std::vector<PolarGrid> den_c, den_f;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = specs[i];
    require_positive(s.p, s.q, "M_n_estimate");
    den_c.push_back(weight_grid(s.omega, opt.grid_angular, opt.grid_radial, opt.grid_levels));
    den_f.push_back(weight_grid(s.omega, opt.final_angular, opt.grid_radial + 2, opt.grid_levels + 2));
  }
  auto refresh = [&](std::size_t i) {
    vc[i] = tp.coarse.values(res.functions[i]);
    vf[i] = tp.fine.values(res.functions[i]);
    norm_c[i] = grid_norm(grid_values(res.functions[i], den_c[i]), den_c[i], specs[i].p);
    norm_f[i] = grid_norm(grid_values(res.functions[i], den_f[i]), den_f[i], specs[i].p);
  };
  auto objective = [&](const std::vector<std::vector<Complex>>& v, const std::vector<double>& w,
                       const std::vector<double>& norms) {
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      double prod = w[k];
      for (std::size_t i = 0; i < n && prod != 0.0; ++i) prod *= std::pow(std::abs(v[i][k]) / norms[i], specs[i].q);
      acc += prod;
    }
    return acc;
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);
  if (n == 1) {
    rounds = 1;
  } else {
    // every function peaking at one common point; the ascent alone stays at constants
    std::vector<AnalyticFunction> best = res.functions;
    double best_value = objective(vc, coarse_w, norm_c);
    const auto starts = witness_family(opt, tp.rotation_invariant, tp.atoms);
    for (const auto& cand : starts) {
      if (cand.is_polynomial()) continue;
      const Complex a = cand.atom_list().front().a;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = atom_exponent(specs[i].omega, specs[i].p, opt.gamma);
        vc[i] = tp.coarse.values(AnalyticFunction::atoms({KernelAtom{a, 1.0, g}}));
        norm_c[i] = grid_norm(grid_values(AnalyticFunction::atoms({KernelAtom{a, 1.0, g}}), den_c[i]), den_c[i],
                              specs[i].p);
      }
      const double v = objective(vc, coarse_w, norm_c);
      if (v > best_value) {
        best_value = v;
        for (std::size_t i = 0; i < n; ++i)
          best[i] = AnalyticFunction::atoms({KernelAtom{a, 1.0, atom_exponent(specs[i].omega, specs[i].p, opt.gamma)}});
      }
    }
    res.functions = best;
    for (std::size_t i = 0; i < n; ++i) refresh(i);
  }
  for (int round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> wc = coarse_w, wf = fine_w;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double qj = specs[j].q;
        for (std::size_t k = 0; k < wc.size(); ++k) wc[k] *= std::pow(std::abs(vc[j][k]) / norm_c[j], qj);
        for (std::size_t k = 0; k < wf.size(); ++k) wf[k] *= std::pow(std::abs(vf[j][k]) / norm_f[j], qj);
      }
      OptimizerOptions o = opt;
      o.seed = opt.seed + 7919 * static_cast<std::uint64_t>(round * n + i);
      const NormEstimate est = embed_impl(specs[i].omega, specs[i].p, tp, wc, wf, specs[i].q, o);
      res.budget_used += est.budget_used;
      res.exhausted = res.exhausted || est.budget_exhausted;
      if (est.witness.is_zero()) continue;
      const double before = objective(vc, coarse_w, norm_c);
      const AnalyticFunction previous = res.functions[i];
      res.functions[i] = est.witness;
      refresh(i);
      if (objective(vc, coarse_w, norm_c) < before) {
        res.functions[i] = previous;
        refresh(i);
      }
    }
  }
  res.working_value = objective(vc, coarse_w, norm_c);
  res.value = objective(vf, fine_w, norm_f);
  res.converged = std::abs(res.value - res.working_value) <= 0.01 * std::max(res.value, res.working_value);
  return res;
}

}  // namespace

NormEstimate embedding_norm(const RadialWeight& omega, double p, const Measure& mu, double q,
                            const OptimizerOptions& opt) {
  require_positive(p, q, "embedding_norm");
  if (mu.is_zero()) {
    NormEstimate z;
    z.method = "optimizer";
    z.witness = AnalyticFunction::monomial(0);
    return z;
  }
  const TargetPair tp = targets_for(mu, opt);
  return embed_impl(omega, p, tp, tp.coarse.weights, tp.fine.weights, q, opt);
}

MultiEstimate M_n_estimate(const std::vector<EmbeddingSpec>& specs, const Measure& mu, const OptimizerOptions& opt,
                           int rounds, bool with_reference) {
  if (specs.empty()) throw ParameterError("M_n_estimate: needs at least one function");
  std::vector<RadialWeight> ws;
  std::vector<double> ps, qs;
  for (const auto& s : specs) {
    require_positive(s.p, s.q, "M_n_estimate");
    ws.push_back(s.omega);
    ps.push_back(s.p);
    qs.push_back(s.q);
  }
  MultiEstimate out;
  std::tie(out.product, out.lambda) = product_weight(ws, ps, qs);
  out.estimate.method = "optimizer";
  if (!mu.is_zero()) {
    const TargetPair tp = targets_for(mu, opt);
    const MultiResult r = multi_impl(specs, tp, tp.coarse.weights, tp.fine.weights, opt, rounds);
    out.estimate.value = r.value;
    out.estimate.working_value = r.working_value;
    out.estimate.witness = r.functions.front();
    out.estimate.budget_used = r.budget_used;
    out.estimate.budget_exhausted = r.exhausted;
    out.estimate.converged = r.converged;
    out.witnesses = r.functions;
  } else {
    out.witnesses.assign(specs.size(), AnalyticFunction::monomial(0));
    out.estimate.witness = out.witnesses.front();
  }
  if (with_reference) out.reference = embedding_norm(out.product, 1.0 / out.lambda, mu, 1.0, opt);
  return out;
}

CarlesonReport vanishing_sequence_F(const std::vector<EmbeddingSpec>& specs, const Measure& mu,
                                    const std::vector<int>& ks, const OptimizerOptions& opt, double tol) {
  if (specs.empty()) throw ParameterError("vanishing_sequence_F: needs at least one function");
  const auto& first = specs.front();
  require_positive(first.p, first.q, "vanishing_sequence_F");
  CarlesonReport rep;
  rep.kind = "F";
  const TargetPair tp = mu.is_zero() ? TargetPair{} : targets_for(mu, opt);
  const std::vector<EmbeddingSpec> rest(specs.begin() + 1, specs.end());
  for (int k : ks) {
    if (k < 0) throw ParameterError("vanishing_sequence_F: k must be nonnegative");
    rep.abscissa.push_back(k);
    if (mu.is_zero()) {
      rep.values.push_back(0.0);
      continue;
    }
    // |f_{1,k}|^{q_1} = |z|^{k q_1} / (2 w_{k p_1 + 1})^{q_1 / p_1}
    const double norm_q = std::pow(2.0 * first.omega.moment(k * first.p + 1.0), first.q / first.p);
    const double x = k * first.q;
    if (rest.empty()) {
      double integral;
      if (mu.is_radial() && mu.support().full()) {
        integral = mu.factor() * 2.0 * mu.radial_density().moment(x + 1.0);
      } else if (mu.kind() == Measure::Kind::Atomic) {
        integral = 0.0;
        for (std::size_t i = 0; i < tp.fine.points.size(); ++i)
          integral += tp.fine.weights[i] * (x == 0.0 ? 1.0 : std::pow(std::abs(tp.fine.points[i]), x));
      } else {
        integral = 0.0;
        for (std::size_t i = 0; i < tp.fine.weights.size(); ++i)
          integral += tp.fine.weights[i] * std::pow(std::abs(tp.fine.grid->nodes[i]), x);
      }
      rep.values.push_back(integral / norm_q);
      continue;
    }
    auto modulated = [&](const Target& t) {
      std::vector<double> w = t.weights;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const Complex z = t.grid ? t.grid->nodes[i] : t.points[i];
        w[i] *= (x == 0.0 ? 1.0 : std::pow(std::abs(z), x)) / norm_q;
      }
      return w;
    };
    OptimizerOptions o = opt;
    o.seed = opt.seed + static_cast<std::uint64_t>(k);
    const MultiResult r = multi_impl(rest, tp, modulated(tp.coarse), modulated(tp.fine), o, 2);
    rep.values.push_back(r.value);
    rep.converged = rep.converged && r.converged;
  }
  fill_sup(rep);
  rep.verdict = three_point_verdict(rep.values, tol);
  const std::size_t n = rep.values.size();
  if (n >= 3 && rep.values[n - 3] > 0.0 && rep.values[n - 1] > 0.0) {
    const double rate = std::pow(rep.values[n - 1] / rep.values[n - 3], 1.0 / (rep.abscissa[n - 1] - rep.abscissa[n - 3]));
    rep.meta.emplace_back("decay_rate", rate);
  } else if (n >= 3) {
    rep.meta.emplace_back("decay_rate", 0.0);
  }
  rep.meta.emplace_back("tol", tol);
  return rep;
}

}  // namespace berglab
