#pragma once

// Reference computations written independently of the library: closed forms,
// brute-force enumeration and plain composite quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Binomial C(n + a + 1, n) through the Gamma function.
inline double binomial_coeff(int n, double alpha) {
  return std::exp(std::lgamma(n + alpha + 2.0) - std::lgamma(n + 1.0) - std::lgamma(alpha + 2.0));
}

/// (1 - u)^{-(2 + alpha)}.
inline cd kernel_closed(cd u, double alpha) { return std::pow(1.0 - u, -(2.0 + alpha)); }

/// Tail integral of (alpha+1)(1-t^2)^alpha over [r, 1], after t = 1 - u^2.
inline double standard_tail(double alpha, double r) {
  return simpson(
      [&](double u) {
        const double t = 1.0 - u * u;
        return (alpha + 1.0) * std::pow(u * u * (1.0 + t), alpha) * 2.0 * u;
      },
      0.0, std::sqrt(1.0 - r));
}

/// ||F_a||^2 in A^2 of dA for F_a = ((1-|a|^2)/(1-conj(a)z))^4, from the Taylor series.
inline double atom_norm_sq(double t) {
  const long double x = static_cast<long double>(t) * t;
  long double s = 0.0L, xn = 1.0L;
  for (long n = 0;; ++n) {
    const long double c = (n + 1.0L) * (n + 2.0L) * (n + 3.0L) / 6.0L;
    const long double term = c * c * xn / (n + 1.0L);
    s += term;
    if (n > 100 && term < 1e-25L * s) break;
    xn *= x;
  }
  return static_cast<double>(s * std::pow(1.0L - x, 8));
}

/// Normalized area of the square sector {t <= |w| < 1, |arg w| < (1-t)/(2 pi)}.
inline double square_area(double t) { return (1.0 - t) * (1.0 - t) * (1.0 + t) / (2.0 * pi * pi); }

inline cd mobius(cd a, cd z) { return (a - z) / (1.0 - std::conj(a) * z); }

inline double beta(cd a, cd z) {
  const double m = std::abs(mobius(a, z));
  return 0.5 * std::log((1.0 + m) / (1.0 - m));
}

/// Euclidean radius of D(z, r).
inline double disk_radius(double z, double r) {
  const double s = std::tanh(r);
  return s * (1.0 - z * z) / (1.0 - s * s * z * z);
}

/// Khinchin right-hand side by listing every sign pattern.
inline double khinchin_rhs(const std::vector<cd>& c, double p) {
  const int K = static_cast<int>(c.size());
  double acc = 0.0;
  for (long mask = 0; mask < (1L << K); ++mask) {
    cd s = 0.0;
    for (int k = 0; k < K; ++k) s += ((mask >> k) & 1 ? -1.0 : 1.0) * c[k];
    acc += std::pow(std::abs(s), p);
  }
  return std::pow(acc / static_cast<double>(1L << K), 1.0 / p);
}

inline double l2(const std::vector<cd>& c) {
  double s = 0.0;
  for (auto x : c) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace oracle
