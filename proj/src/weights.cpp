#include "berglab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "berglab/quadrature.hpp"
#include "berglab/regions.hpp"

namespace berglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-13;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void check_radius(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radial weight: r must lie in [0, 1)");
}

}  // namespace

std::optional<double> DerivedExponents::s() const {
  if (!(q < p)) return std::nullopt;
  return p * q / (p - q);
}

double lambda_exponent(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty()) throw ParameterError("lambda_exponent: size mismatch");
  double lam = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && q[i] > 0.0)) throw ParameterError("lambda_exponent: exponents must be positive");
    lam += q[i] / p[i];
  }
  return lam;
}

struct RadialWeight::Impl {
  bool is_power = true;
  // power kind: c (1-r^2)^a (1-r)^b
  double c = 1.0, a = 0.0, b = 0.0;
  std::optional<double> alpha;
  // generic kind
  std::function<double(double)> raw;
  double cut = 1.0 - kGenericCutoff;
  double w_cut = 1.0;
  double beta = 0.0;
  std::vector<double> knots;
  std::vector<double> tail_at_knot;
  std::vector<double> fm_at_knot;  // tail of s * w(s)

  bool integrable = true;
  std::string label;

  mutable std::mutex mutex;
  mutable std::map<double, double> moments;

  double eval(double r) const {
    if (is_power) {
      const double u = 1.0 - r;
      double v = c;
      if (a != 0.0) v *= std::pow(u * (1.0 + r), a);
      if (b != 0.0) v *= std::pow(u, b);
      return v;
    }
    if (r <= cut) return raw(r);
    return extension(r);
  }

  double extension(double r) const { return w_cut * std::pow((1.0 - r) / (1.0 - cut), beta); }

  double extension_tail(double r) const {
    const double u = 1.0 - std::max(r, cut);
    return w_cut * (1.0 - cut) / (beta + 1.0) * std::pow(u / (1.0 - cut), beta + 1.0);
  }

  // integral of s w(s) over [max(r, cut), 1) for the power-law continuation
  double extension_first_moment(double r) const {
    const double u0 = 1.0 - std::max(r, cut);
    const double scale = w_cut / std::pow(1.0 - cut, beta);
    return scale * (std::pow(u0, beta + 1.0) / (beta + 1.0) - std::pow(u0, beta + 2.0) / (beta + 2.0));
  }

  double power_tail(double r) const {
    const double u0 = 1.0 - r;
    if (a == 0.0) return c * std::pow(u0, b + 1.0) / (b + 1.0);
    return integrate_1d([&](double u) { return c * std::pow(u, a + b) * std::pow(2.0 - u, a); }, 0.0,
                        u0, kQuadTol)
        .value;
  }

  double power_first_moment(double r) const {
    const double u0 = 1.0 - r;
    if (b == 0.0) return c * std::pow(u0 * (1.0 + r), a + 1.0) / (2.0 * (a + 1.0));
    if (a == 0.0)
      return c * (std::pow(u0, b + 1.0) / (b + 1.0) - std::pow(u0, b + 2.0) / (b + 2.0));
    return integrate_1d(
               [&](double u) { return (1.0 - u) * c * std::pow(u, a + b) * std::pow(2.0 - u, a); },
               0.0, u0, kQuadTol)
        .value;
  }

  double power_moment(double x) const {
    if (b == 0.0) return 0.5 * c * boost::math::beta((x + 1.0) / 2.0, a + 1.0);
    if (a == 0.0) return c * boost::math::beta(x + 1.0, b + 1.0);
    return integrate_1d(
               [&](double u) {
                 return std::pow(1.0 - u, x) * c * std::pow(u, a + b) * std::pow(2.0 - u, a);
               },
               0.0, 1.0, kQuadTol)
        .value;
  }

  std::size_t knot_index(double r) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), r);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - knots.begin()) - 1));
  }

  double generic_tail(double r) const {
    if (r >= cut) return extension_tail(r);
    const std::size_t i = knot_index(r);
    return integrate_1d(raw, r, knots[i + 1], kQuadTol).value + tail_at_knot[i + 1];
  }

  double generic_first_moment(double r) const {
    if (r >= cut) return extension_first_moment(r);
    const std::size_t i = knot_index(r);
    return integrate_1d([&](double s) { return s * raw(s); }, r, knots[i + 1], kQuadTol).value +
           fm_at_knot[i + 1];
  }

  double generic_moment(double x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
      sum += integrate_1d([&](double s) { return std::pow(s, x) * raw(s); }, knots[i], knots[i + 1],
                          kQuadTol)
                 .value;
    const double scale = w_cut / std::pow(1.0 - cut, beta);
    sum += integrate_1d([&](double u) { return std::pow(1.0 - u, x) * scale * std::pow(u, beta); },
                        0.0, 1.0 - cut, kQuadTol)
               .value;
    return sum;
  }
};

RadialWeight::RadialWeight() : RadialWeight(standard(0.0)) {}

RadialWeight RadialWeight::standard(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha))
    throw ParameterError("standard weight: alpha must exceed -1");
  auto impl = std::make_shared<Impl>();
  impl->c = alpha + 1.0;
  impl->a = alpha;
  impl->alpha = alpha;
  impl->label = "standard(" + fmt(alpha) + ")";
  return RadialWeight(std::move(impl));
}

RadialWeight RadialWeight::power(double c, double a, double b) {
  if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(a) || !std::isfinite(b))
    throw ParameterError("power weight: scale must be positive and exponents finite");
  auto impl = std::make_shared<Impl>();
  impl->c = c;
  impl->a = a;
  impl->b = b;
  impl->integrable = a + b > -1.0;
  if (a == c - 1.0 && b == 0.0 && a > -1.0) impl->alpha = a;
  impl->label = "power(" + fmt(c) + "," + fmt(a) + "," + fmt(b) + ")";
  return RadialWeight(std::move(impl));
}

RadialWeight RadialWeight::make_generic(std::function<double(double)> f, std::string label,
                                        bool validate) {
  auto impl = std::make_shared<Impl>();
  impl->is_power = false;
  impl->raw = std::move(f);
  impl->label = std::move(label);
  const double cut = impl->cut;
  const double probe = 1.0 - 16.0 * (1.0 - cut);
  impl->w_cut = impl->raw(cut);
  const double w_probe = impl->raw(probe);
  bool positive = std::isfinite(impl->w_cut) && impl->w_cut > 0.0 && std::isfinite(w_probe) &&
                  w_probe > 0.0;
  impl->knots = graded_breakpoints(0.0, cut, 24);
  for (double r : impl->knots) {
    const double v = impl->raw(r);
    if (!(std::isfinite(v) && v > 0.0)) positive = false;
  }
  if (!positive) throw DomainError("radial weight: profile must be positive and finite on [0, 1)");
  impl->beta = std::log(impl->w_cut / w_probe) / std::log((1.0 - cut) / (1.0 - probe));
  impl->integrable = impl->beta > -1.0 + 1e-6;
  if (validate && !impl->integrable)
    throw DomainError("radial weight: profile is not integrable near r = 1");

  const std::size_t n = impl->knots.size();
  impl->tail_at_knot.assign(n, kInf);
  impl->fm_at_knot.assign(n, kInf);
  if (impl->integrable) {
    impl->tail_at_knot[n - 1] = impl->extension_tail(cut);
    impl->fm_at_knot[n - 1] = impl->extension_first_moment(cut);
    for (std::size_t i = n - 1; i-- > 0;) {
      const double lo = impl->knots[i], hi = impl->knots[i + 1];
      impl->tail_at_knot[i] = impl->tail_at_knot[i + 1] + integrate_1d(impl->raw, lo, hi, kQuadTol).value;
      impl->fm_at_knot[i] =
          impl->fm_at_knot[i + 1] +
          integrate_1d([&](double s) { return s * impl->raw(s); }, lo, hi, kQuadTol).value;
    }
  }
  return RadialWeight(std::move(impl));
}

RadialWeight RadialWeight::table(std::vector<double> r, std::vector<double> w) {
  if (r.size() != w.size() || r.size() < 2) throw DomainError("table weight: need >= 2 matching samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0 && r[i] < 1.0)) throw DomainError("table weight: radii must lie in [0, 1)");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("table weight: radii must increase");
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw DomainError("table weight: values must be positive");
  }
  std::vector<double> logw(w.size());
  std::transform(w.begin(), w.end(), logw.begin(), [](double v) { return std::log(v); });
  auto interp = [r = std::move(r), logw = std::move(logw)](double x) {
    if (x <= r.front()) return std::exp(logw.front());
    const std::size_t n = r.size();
    if (x >= r.back()) {
      // power law through the last two samples, in log(1 - r)
      const double s = (logw[n - 1] - logw[n - 2]) / (std::log1p(-r[n - 1]) - std::log1p(-r[n - 2]));
      return std::exp(logw[n - 1] + s * (std::log1p(-x) - std::log1p(-r[n - 1])));
    }
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(r.begin(), r.end(), x) - r.begin()) - 1;
    const double t = (x - r[i]) / (r[i + 1] - r[i]);
    return std::exp((1.0 - t) * logw[i] + t * logw[i + 1]);
  };
  return make_generic(std::move(interp), "table", true);
}

RadialWeight RadialWeight::profile(std::function<double(double)> f, std::string label) {
  if (!f) throw DomainError("profile weight: empty function");
  return make_generic(std::move(f), std::move(label), true);
}

double RadialWeight::eval(double r) const {
  check_radius(r);
  return impl_->eval(r);
}

double RadialWeight::tail(double r) const {
  check_radius(r);
  if (!impl_->integrable) return kInf;
  return impl_->is_power ? impl_->power_tail(r) : impl_->generic_tail(r);
}

double RadialWeight::first_moment_tail(double r) const {
  check_radius(r);
  if (!impl_->integrable) return kInf;
  return impl_->is_power ? impl_->power_first_moment(r) : impl_->generic_first_moment(r);
}

double RadialWeight::moment(double x) const {
  if (!(x >= 0.0)) throw DomainError("moment: exponent must be >= 0");
  if (!impl_->integrable) return kInf;
  {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    auto it = impl_->moments.find(x);
    if (it != impl_->moments.end()) return it->second;
  }
  const double v = impl_->is_power ? impl_->power_moment(x) : impl_->generic_moment(x);
  std::lock_guard<std::mutex> lock(impl_->mutex);
  impl_->moments.emplace(x, v);
  return v;
}

bool RadialWeight::integrable() const { return impl_->integrable; }
bool RadialWeight::is_power() const { return impl_->is_power; }
std::optional<double> RadialWeight::standard_alpha() const { return impl_->alpha; }

std::optional<std::array<double, 3>> RadialWeight::power_params() const {
  if (!impl_->is_power) return std::nullopt;
  return std::array<double, 3>{impl_->c, impl_->a, impl_->b};
}

double RadialWeight::boundary_exponent() const {
  return impl_->is_power ? impl_->a + impl_->b : impl_->beta;
}

std::string RadialWeight::label() const { return impl_->label; }

RadialWeight RadialWeight::product(std::span<const RadialWeight> factors,
                                   std::span<const double> exps) {
  if (factors.size() != exps.size() || factors.empty())
    throw ParameterError("weight product: size mismatch");
  const bool all_power =
      std::all_of(factors.begin(), factors.end(), [](const RadialWeight& w) { return w.is_power(); });
  if (all_power) {
    double c = 1.0, a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& f = *factors[i].impl_;
      c *= std::pow(f.c, exps[i]);
      a += f.a * exps[i];
      b += f.b * exps[i];
    }
    return power(c, a, b);
  }
  std::vector<RadialWeight> fs(factors.begin(), factors.end());
  std::vector<double> es(exps.begin(), exps.end());
  std::string label = "product(";
  for (std::size_t i = 0; i < fs.size(); ++i)
    label += (i ? "," : "") + fs[i].label() + "^" + fmt(es[i]);
  label += ")";
  auto f = [fs, es](double r) {
    double v = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) v *= std::pow(fs[i].impl_->eval(r), es[i]);
    return v;
  };
  return make_generic(std::move(f), std::move(label), false);
}

std::vector<double> geometric_grid(int kmax) {
  std::vector<double> g;
  for (int k = 0; k <= kmax; ++k) g.push_back(1.0 - std::ldexp(1.0, -k));
  return g;
}

namespace {

RatioProfile finish_profile(std::span<const double> grid, std::vector<double> ratios, double bound) {
  RatioProfile out;
  out.grid.assign(grid.begin(), grid.end());
  out.ratios = std::move(ratios);
  if (!out.ratios.empty()) {
    out.min = *std::min_element(out.ratios.begin(), out.ratios.end());
    out.max = *std::max_element(out.ratios.begin(), out.ratios.end());
    out.bounded = out.min > 0.0 && std::isfinite(out.max) && out.max / out.min <= bound;
  }
  return out;
}

bool same_power(const RadialWeight& x, const RadialWeight& y) {
  const auto px = x.power_params(), py = y.power_params();
  return px && py && *px == *py;
}

}  // namespace

RatioProfile regularity_profile(const RadialWeight& w, std::span<const double> grid, double bound) {
  std::vector<double> ratios;
  for (double r : grid) ratios.push_back(w.tail(r) / ((1.0 - r) * w.eval(r)));
  return finish_profile(grid, std::move(ratios), bound);
}

RatioProfile doubling_profile(const RadialWeight& w, std::span<const double> grid, double bound) {
  std::vector<double> ratios;
  for (double r : grid) ratios.push_back(w.tail(r) / w.tail(0.5 * (1.0 + r)));
  return finish_profile(grid, std::move(ratios), bound);
}

RadialWeight sigma_weight(const RadialWeight& omega, const RadialWeight& eta, double p) {
  if (!(p > 1.0)) throw ParameterError("sigma_weight: p must exceed 1");
  if (same_power(omega, eta)) return omega;
  const double pc = p / (p - 1.0);
  const RadialWeight fs[] = {omega, eta};
  const double es[] = {pc, -pc / p};
  return RadialWeight::product(fs, es);
}

BergmanConstant bergman_const_A(const RadialWeight& omega, const RadialWeight& eta, double p,
                                std::span<const double> grid) {
  BergmanConstant out;
  out.grid.assign(grid.begin(), grid.end());
  const RadialWeight sigma = sigma_weight(omega, eta, p);
  if (!sigma.integrable()) {
    out.value = kInf;
    out.finite = false;
    out.ratios.assign(grid.size(), kInf);
    return out;
  }
  const double pc = p / (p - 1.0);
  out.finite = true;
  for (double r : grid) {
    const double et = eta.tail(r), st = sigma.tail(r), wt = omega.tail(r);
    const double v = same_power(omega, eta) ? 1.0 : std::pow(et, 1.0 / p) * std::pow(st, 1.0 / pc) / wt;
    out.ratios.push_back(v);
    if (v > out.value) {
      out.value = v;
      out.argmax = r;
    }
  }
  return out;
}

BergmanConstant bergman_const_A(const RadialWeight& omega, const RadialWeight& eta, double p) {
  const auto grid = geometric_grid();
  return bergman_const_A(omega, eta, p, grid);
}

RadialWeight fusion_weight_W(const RadialWeight& eta, const RadialWeight& upsilon,
                             const RadialWeight& omega, double p, double q) {
  if (!(p > 1.0 && q > 1.0)) throw ParameterError("fusion_weight_W: p and q must exceed 1");
  const RadialWeight sigma = sigma_weight(omega, upsilon, q);
  if (!sigma.integrable()) throw ParameterError("fusion_weight_W: sigma_{q,upsilon} is not integrable");
  const double den = p * q - p + q;
  const double e1 = q / den, e2 = (p * q - p) / den;
  const double qc = q / (q - 1.0);
  if (std::abs(e1 - qc / (p + qc)) > 1e-14 || std::abs(e2 - p / (p + qc)) > 1e-14)
    throw Error("fusion_weight_W: exponent identities failed");
  if (same_power(eta, sigma)) return eta;
  const RadialWeight fs[] = {eta, sigma};
  const double es[] = {e1, e2};
  return RadialWeight::product(fs, es);
}

std::pair<RadialWeight, double> product_weight(std::span<const RadialWeight> weights,
                                               std::span<const double> p,
                                               std::span<const double> q) {
  if (weights.size() != p.size()) throw ParameterError("product_weight: size mismatch");
  const double lam = lambda_exponent(p, q);
  std::vector<double> es;
  for (std::size_t i = 0; i < p.size(); ++i) es.push_back(q[i] / (lam * p[i]));
  bool all_same = true;
  for (const auto& w : weights) all_same = all_same && same_power(w, weights[0]);
  if (all_same) return {weights[0], lam};
  return {RadialWeight::product(weights, es), lam};
}

double region_weight(const RadialWeight& w, const Region& region) {
  if (const auto* box = std::get_if<PolarBox>(&region)) {
    const double arc = box->full_annulus() ? 2.0 * kPi : 2.0 * box->half_width;
    const double lo = std::max(0.0, box->r0);
    const double hi = std::min(1.0, box->r1);
    if (!(hi > lo)) return 0.0;
    const double upper = hi < 1.0 ? w.first_moment_tail(hi) : 0.0;
    return arc / kPi * (w.first_moment_tail(lo) - upper);
  }
  if (std::holds_alternative<WholeDisk>(region)) return 2.0 * w.first_moment_tail(0.0);
  return radial_region_integral([&](double t) { return w.eval(t); }, region);
}

double region_weight(const RadialWeight& w, const CarlesonSquare& square) {
  return region_weight(w, to_region(square));
}

}  // namespace berglab
