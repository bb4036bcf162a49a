#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "berglab/kernel.hpp"
#include "berglab/measures.hpp"

namespace berglab {

/// A point set with nonnegative weights on which a weighted L^p functional is taken.
struct NodeSet {
  std::vector<Complex> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  static NodeSet from_grid(const PolarGrid& grid);
  static NodeSet from_measure(const DiscreteMeasure& m);
};

/// sum_i w_i |v_i|^p.
double power_sum(std::span<const Complex> values, std::span<const double> weights, double p);

struct OptimizerOptions {
  std::size_t budget = 1500;  // objective evaluations
  int restarts = 2;
  std::uint64_t seed = 20240611;
  std::size_t active = 16;       // coordinates moved by the ascent
  std::size_t gram_active = 40;  // columns entering the quadratic surrogate
  double gamma = 4.0;            // kernel atom exponent
  int max_degree = 24;           // monomial family
  int grid_angular = 256;        // working grids
  int grid_radial = 6;
  int grid_levels = 18;
  int final_angular = 1024;      // certification grids
};

/// Candidate witnesses: kernel atoms on a polar a-grid, monomials, and extra
/// functions supplied by the caller (kernels at atoms of mu, ...).
std::vector<AnalyticFunction> witness_family(const OptimizerOptions& opt, bool rotation_invariant,
                                             std::span<const Complex> extra_atoms = {});

/// Maximizes (sum_num |L f|^{qn})^{1/qn} / (sum_den |f|^{pd})^{1/pd} over the span of
/// the candidate columns. Columns are values of the candidates on the denominator nodes
/// and of their images on the numerator nodes.
struct SpanProblem {
  std::vector<std::vector<Complex>> num_cols;
  std::vector<std::vector<Complex>> den_cols;
  std::span<const double> num_weights;
  std::span<const double> den_weights;
  double num_p = 2.0;
  double den_p = 2.0;
};

struct SpanResult {
  std::vector<Complex> coeffs;  // one per column
  double value = 0.0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

SpanResult maximize_span_ratio(const SpanProblem& problem, const OptimizerOptions& opt);

/// Estimated norm with the function that realizes it.
struct NormEstimate {
  double value = 0.0;
  double working_value = 0.0;  // value on the optimization grids
  AnalyticFunction witness;
  std::string method;          // "spectral" or "optimizer"
  bool lower_bound = true;
  bool budget_exhausted = false;
  bool converged = true;
  std::size_t budget_used = 0;
  std::size_t basis_size = 0;
};

/// Column builder: maps a candidate to its values on both node sets.
using ColumnMap = std::function<void(const AnalyticFunction&, std::vector<Complex>& num,
                                     std::vector<Complex>& den)>;

/// Shared driver: evaluates every candidate, keeps the best columns, runs
/// maximize_span_ratio and returns the witness as a combination of candidates.
NormEstimate optimize_witness(std::span<const AnalyticFunction> candidates, const ColumnMap& columns,
                              std::span<const double> num_weights, std::span<const double> den_weights,
                              double num_p, double den_p, const OptimizerOptions& opt);

AnalyticFunction combine(std::span<const AnalyticFunction> basis, std::span<const Complex> coeffs);

}  // namespace berglab
