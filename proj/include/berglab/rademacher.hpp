#pragma once

#include <span>
#include <vector>

#include "berglab/kernel.hpp"

namespace berglab {

/// r_k(t) = sign(sin(2^k pi t)), with the zeros sent to +1.
int rademacher_eval(int k, double t);

/// r_1(t), ..., r_K(t).
std::vector<int> rademacher_signs(int K, double t);

/// sum_k c_k r_k(t) f_k.
AnalyticFunction rademacher_combination(std::span<const Complex> c,
                                        std::span<const AnalyticFunction> functions, double t);
AnalyticFunction rademacher_combination(std::span<const Complex> c,
                                        std::span<const AnalyticFunction> functions,
                                        std::span<const int> signs);

inline constexpr int kMaxEnumeration = 20;

struct KhinchinResult {
  double lhs = 0.0;  // (sum |c_k|^2)^{1/2}
  double rhs = 0.0;  // (int_0^1 |sum c_k r_k(t)|^p dt)^{1/p}
  double ratio = 0.0;
};

/// Exact: the integral over t is the average over all 2^K sign patterns.
KhinchinResult khinchin_check(std::span<const Complex> c, double p);

struct KahaneResult {
  double moment_p = 0.0;
  double moment_q = 0.0;
  double ratio = 0.0;  // moment_p / moment_q
};

/// (E ||sum eps_k x_k||^p)^{1/p} / (E ||sum eps_k x_k||^q)^{1/q} for vectors x_k
/// under the weighted norm (sum_i w_i |v_i|^r)^{1/r}, by exact enumeration.
KahaneResult kahane_check(std::span<const std::vector<Complex>> x, std::span<const double> node_weights,
                          double r, double p, double q);

}  // namespace berglab
