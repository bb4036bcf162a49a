#include "berglab/rademacher.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace berglab {

int rademacher_eval(int k, double t) {
  if (k < 1) throw ParameterError("rademacher_eval: k must be >= 1");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("rademacher_eval: t must lie in (0, 1)");
  // sin(2^k pi t) = sin(2 pi x) with x = 2^{k-1} t mod 1; scaling by 2^{k-1} is exact
  const double x = std::fmod(std::ldexp(t, k - 1), 1.0);
  return x <= 0.5 ? 1 : -1;
}

std::vector<int> rademacher_signs(int K, double t) {
  std::vector<int> s(K);
  for (int k = 1; k <= K; ++k) s[k - 1] = rademacher_eval(k, t);
  return s;
}

AnalyticFunction rademacher_combination(std::span<const Complex> c,
                                        std::span<const AnalyticFunction> functions,
                                        std::span<const int> signs) {
  if (c.size() != functions.size() || c.size() != signs.size())
    throw ParameterError("rademacher_combination: size mismatch");
  AnalyticFunction out;
  for (std::size_t k = 0; k < c.size(); ++k) out += functions[k].scaled(c[k] * static_cast<double>(signs[k]));
  return out;
}

AnalyticFunction rademacher_combination(std::span<const Complex> c,
                                        std::span<const AnalyticFunction> functions, double t) {
  const auto s = rademacher_signs(static_cast<int>(c.size()), t);
  return rademacher_combination(c, functions, s);
}

namespace {

// Visits every sign pattern in Gray-code order, flipping one coordinate per step.
template <class Flip, class Visit>
void gray_walk(int K, Flip&& flip, Visit&& visit) {
  visit();
  const std::uint64_t total = std::uint64_t{1} << K;
  for (std::uint64_t i = 1; i < total; ++i) {
    flip(std::countr_zero(i));
    visit();
  }
}

}  // namespace

KhinchinResult khinchin_check(std::span<const Complex> c, double p) {
  const int K = static_cast<int>(c.size());
  if (K > kMaxEnumeration) throw ParameterError("khinchin_check: at most 20 coefficients");
  if (!(p > 0.0)) throw ParameterError("khinchin_check: p must be positive");
  KhinchinResult out;
  double l2 = 0.0;
  for (Complex v : c) l2 += std::norm(v);
  out.lhs = std::sqrt(l2);
  if (K == 0) return out;
  const std::uint64_t total = std::uint64_t{1} << K;
  double acc = 0.0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Complex sum{};
    for (int k = 0; k < K; ++k) sum += ((mask >> k) & 1u) ? -c[k] : c[k];
    acc += p == 2.0 ? std::norm(sum) : std::pow(std::abs(sum), p);
  }
  out.rhs = std::pow(std::ldexp(acc, -K), 1.0 / p);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

KahaneResult kahane_check(std::span<const std::vector<Complex>> x, std::span<const double> node_weights,
                          double r, double p, double q) {
  const int K = static_cast<int>(x.size());
  if (K > kMaxEnumeration) throw ParameterError("kahane_check: at most 20 vectors");
  if (!(p > 0.0 && q > 0.0 && r > 0.0)) throw ParameterError("kahane_check: exponents must be positive");
  KahaneResult out;
  if (K == 0) return out;
  const std::size_t dim = node_weights.size();
  for (const auto& v : x)
    if (v.size() != dim) throw ParameterError("kahane_check: vector length mismatch");
  std::vector<int> eps(K, 1);
  std::vector<Complex> sum(dim);
  for (const auto& v : x)
    for (std::size_t i = 0; i < dim; ++i) sum[i] += v[i];
  double ap = 0.0, aq = 0.0;
  gray_walk(
      K,
      [&](int k) {
        const double s = 2.0 * eps[k];
        for (std::size_t i = 0; i < dim; ++i) sum[i] -= s * x[k][i];
        eps[k] = -eps[k];
      },
      [&] {
        double n = 0.0;
        for (std::size_t i = 0; i < dim; ++i) n += node_weights[i] * std::pow(std::abs(sum[i]), r);
        n = std::pow(n, 1.0 / r);
        ap += std::pow(n, p);
        aq += std::pow(n, q);
      });
  out.moment_p = std::pow(std::ldexp(ap, -K), 1.0 / p);
  out.moment_q = std::pow(std::ldexp(aq, -K), 1.0 / q);
  out.ratio = out.moment_q > 0.0 ? out.moment_p / out.moment_q : 0.0;
  return out;
}

}  // namespace berglab
