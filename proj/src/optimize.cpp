#include "berglab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

namespace berglab {

NodeSet NodeSet::from_grid(const PolarGrid& grid) { return NodeSet{grid.nodes, grid.weights}; }

NodeSet NodeSet::from_measure(const DiscreteMeasure& m) { return NodeSet{m.points, m.masses}; }

namespace {

inline double abs_pow(double n2, double p) {
  // n2 = |v|^2
  if (p == 2.0) return n2;
  if (p == 1.0) return std::sqrt(n2);
  if (p == 4.0) return n2 * n2;
  if (p == 3.0) return n2 * std::sqrt(n2);
  if (p == 0.5) return std::sqrt(std::sqrt(n2));
  return n2 > 0.0 ? std::pow(n2, 0.5 * p) : 0.0;
}

double norm_from_sum(double s, double p) { return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p); }

}  // namespace

double power_sum(std::span<const Complex> values, std::span<const double> weights, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * abs_pow(std::norm(values[i]), p);
  return s;
}

std::vector<AnalyticFunction> witness_family(const OptimizerOptions& opt, bool rotation_invariant,
                                             std::span<const Complex> extra_atoms) {
  std::vector<AnalyticFunction> out;
  for (int n = 0; n <= opt.max_degree; ++n) out.push_back(AnalyticFunction::monomial(n));
  const double radii[] = {0.25, 0.5, 0.7, 0.8, 0.88, 0.93, 0.96};
  const int angles[] = {6, 8, 12, 16, 24, 32, 32};
  for (std::size_t i = 0; i < std::size(radii); ++i) {
    const int m = rotation_invariant ? 1 : angles[i];
    for (int j = 0; j < m; ++j)
      out.push_back(AnalyticFunction::atoms({KernelAtom{std::polar(radii[i], 2.0 * kPi * j / m), 1.0, opt.gamma}}));
  }
  for (Complex a : extra_atoms) out.push_back(AnalyticFunction::atoms({KernelAtom{a, 1.0, opt.gamma}}));
  return out;
}

AnalyticFunction combine(std::span<const AnalyticFunction> basis, std::span<const Complex> coeffs) {
  AnalyticFunction f;
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (coeffs[j] != Complex{}) f += basis[j].scaled(coeffs[j]);
  return f;
}

namespace {

class SpanState {
 public:
  SpanState(const SpanProblem& pr, std::size_t budget)
      : pr_(pr), budget_(budget), u_(pr.num_weights.size()), v_(pr.den_weights.size()),
        c_(pr.num_cols.size()) {}

  double ratio_of(double su, double sv) const {
    if (!(sv > 0.0)) return 0.0;
    return norm_from_sum(su, pr_.num_p) / norm_from_sum(sv, pr_.den_p);
  }

  void set(const std::vector<Complex>& c) {
    c_ = c;
    std::fill(u_.begin(), u_.end(), Complex{});
    std::fill(v_.begin(), v_.end(), Complex{});
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == Complex{}) continue;
      for (std::size_t i = 0; i < u_.size(); ++i) u_[i] += c[j] * pr_.num_cols[j][i];
      for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += c[j] * pr_.den_cols[j][i];
    }
    value_ = ratio_of(power_sum(u_, pr_.num_weights, pr_.num_p), power_sum(v_, pr_.den_weights, pr_.den_p));
    ++evals_;
  }

  // ratio after c_j += d, without committing
  double trial(std::size_t j, Complex d) {
    ++evals_;
    const auto& U = pr_.num_cols[j];
    const auto& V = pr_.den_cols[j];
    double su = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) su += pr_.num_weights[i] * abs_pow(std::norm(u_[i] + d * U[i]), pr_.num_p);
    for (std::size_t i = 0; i < v_.size(); ++i) sv += pr_.den_weights[i] * abs_pow(std::norm(v_[i] + d * V[i]), pr_.den_p);
    return ratio_of(su, sv);
  }

  void commit(std::size_t j, Complex d, double value) {
    const auto& U = pr_.num_cols[j];
    const auto& V = pr_.den_cols[j];
    for (std::size_t i = 0; i < u_.size(); ++i) u_[i] += d * U[i];
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += d * V[i];
    c_[j] += d;
    value_ = value;
  }

  bool exhausted() const { return evals_ >= budget_; }
  double value() const { return value_; }
  const std::vector<Complex>& coeffs() const { return c_; }
  std::size_t evaluations() const { return evals_; }
  void add_evaluations(std::size_t n) { evals_ += n; }

 private:
  const SpanProblem& pr_;
  std::size_t budget_;
  std::vector<Complex> u_, v_, c_;
  double value_ = 0.0;
  std::size_t evals_ = 0;
};

void coordinate_ascent(SpanState& st, const std::vector<std::size_t>& active) {
  static const double levels[] = {0.5, 0.15, 0.05, 0.015, 0.005};
  static const Complex dirs[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double scale = 0.0;
  for (std::size_t j : active) scale = std::max(scale, std::abs(st.coeffs()[j]));
  if (scale == 0.0) scale = 1.0;
  for (double level : levels) {
    const double step = level * scale;
    bool improved = true;
    while (improved && !st.exhausted()) {
      improved = false;
      for (std::size_t j : active) {
        for (Complex dir : dirs) {
          if (st.exhausted()) return;
          const double v = st.trial(j, step * dir);
          if (v > st.value() * (1.0 + 1e-12)) {
            st.commit(j, step * dir, v);
            improved = true;
          }
        }
      }
    }
  }
}

// Top generalized eigenvector of (A, G) for Hermitian A and positive semidefinite G.
std::vector<Complex> gram_start(const SpanProblem& pr) {
  const std::size_t B = pr.num_cols.size();
  const std::size_t nn = pr.num_weights.size(), nd = pr.den_weights.size();
  Eigen::MatrixXcd U(nn, B), V(nd, B);
  for (std::size_t j = 0; j < B; ++j) {
    for (std::size_t i = 0; i < nn; ++i) U(i, j) = pr.num_cols[j][i] * std::sqrt(pr.num_weights[i]);
    for (std::size_t i = 0; i < nd; ++i) V(i, j) = pr.den_cols[j][i] * std::sqrt(pr.den_weights[i]);
  }
  const Eigen::MatrixXcd A = U.adjoint() * U;
  const Eigen::MatrixXcd G = V.adjoint() * V;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ge(G);
  const auto& lam = ge.eigenvalues();
  const double top = lam.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (lam(k) > 1e-10 * top) keep.push_back(k);
  std::vector<Complex> c(B);
  if (keep.empty()) return c;
  Eigen::MatrixXcd P(B, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k)
    P.col(k) = ge.eigenvectors().col(keep[k]) / std::sqrt(lam(keep[k]));
  const Eigen::MatrixXcd R = P.adjoint() * A * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> re(R);
  const Eigen::VectorXcd y = re.eigenvectors().col(re.eigenvalues().size() - 1);
  const Eigen::VectorXcd x = P * y;
  for (std::size_t j = 0; j < B; ++j) c[j] = x(j);
  return c;
}

}  // namespace

SpanResult maximize_span_ratio(const SpanProblem& pr, const OptimizerOptions& opt) {
  SpanResult best;
  const std::size_t B = pr.num_cols.size();
  best.coeffs.assign(B, Complex{});
  if (B == 0) return best;
  SpanState st(pr, opt.budget);

  // single columns
  std::vector<double> single(B, 0.0);
  for (std::size_t j = 0; j < B; ++j) {
    single[j] = st.ratio_of(power_sum(pr.num_cols[j], pr.num_weights, pr.num_p),
                            power_sum(pr.den_cols[j], pr.den_weights, pr.den_p));
  }
  st.add_evaluations(B);
  const std::size_t jbest = static_cast<std::size_t>(std::max_element(single.begin(), single.end()) - single.begin());
  auto record = [&](const SpanState& s) {
    if (s.value() > best.value) {
      best.value = s.value();
      best.coeffs = s.coeffs();
    }
  };
  std::vector<Complex> start(B);
  start[jbest] = 1.0;
  st.set(start);
  record(st);
  if (best.value == 0.0) {
    best.evaluations = st.evaluations();
    return best;
  }

  // quadratic surrogate
  if (B > 1) {
    std::vector<Complex> g = gram_start(pr);
    const double gn = std::sqrt(std::accumulate(g.begin(), g.end(), 0.0, [](double s, Complex v) { return s + std::norm(v); }));
    if (gn > 0.0) {
      for (auto& v : g) v /= gn;
      st.set(g);
      record(st);
    }
  }

  // active coordinates: largest coefficients of the incumbent, then best single columns
  std::vector<std::size_t> order(B);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> active;
  {
    std::vector<std::size_t> by_coeff = order;
    std::sort(by_coeff.begin(), by_coeff.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(best.coeffs[a]) > std::abs(best.coeffs[b]);
    });
    std::vector<std::size_t> by_single = order;
    std::sort(by_single.begin(), by_single.end(), [&](std::size_t a, std::size_t b) { return single[a] > single[b]; });
    const std::size_t cap = std::min(opt.active, B);
    for (std::size_t j : by_coeff) {
      if (active.size() >= (cap + 1) / 2 || best.coeffs[j] == Complex{}) break;
      active.push_back(j);
    }
    for (std::size_t j : by_single) {
      if (active.size() >= cap) break;
      if (std::find(active.begin(), active.end(), j) == active.end()) active.push_back(j);
    }
  }

  st.set(best.coeffs);
  coordinate_ascent(st, active);
  record(st);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < opt.restarts && !st.exhausted(); ++r) {
    std::vector<Complex> c = best.coeffs;
    double scale = 0.0;
    for (std::size_t j : active) scale = std::max(scale, std::abs(c[j]));
    for (std::size_t j : active) c[j] += 0.5 * scale * Complex(gauss(rng), gauss(rng));
    st.set(c);
    coordinate_ascent(st, active);
    record(st);
  }
  best.evaluations = st.evaluations();
  best.budget_exhausted = st.exhausted();
  return best;
}

NormEstimate optimize_witness(std::span<const AnalyticFunction> candidates, const ColumnMap& columns,
                              std::span<const double> num_weights, std::span<const double> den_weights,
                              double num_p, double den_p, const OptimizerOptions& opt) {
  struct Kept {
    double ratio;
    std::size_t index;
    double scale;
    std::vector<Complex> num, den;
  };
  std::vector<Kept> kept;
  std::vector<Complex> num, den;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    columns(candidates[j], num, den);
    const double sd = power_sum(den, den_weights, den_p);
    if (!(sd > 0.0)) continue;
    // normalize so every column has unit denominator norm
    const double scale = 1.0 / norm_from_sum(sd, den_p);
    for (auto& v : num) v *= scale;
    for (auto& v : den) v *= scale;
    const double ratio = norm_from_sum(power_sum(num, num_weights, num_p), num_p);
    kept.push_back(Kept{ratio, j, scale, num, den});
    std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
      return a.ratio > b.ratio || (a.ratio == b.ratio && a.index < b.index);
    });
    if (kept.size() > opt.gram_active) kept.pop_back();
  }
  NormEstimate est;
  est.method = "optimizer";
  est.basis_size = candidates.size();
  if (kept.empty()) return est;

  SpanProblem pr;
  for (auto& k : kept) {
    pr.num_cols.push_back(std::move(k.num));
    pr.den_cols.push_back(std::move(k.den));
  }
  pr.num_weights = num_weights;
  pr.den_weights = den_weights;
  pr.num_p = num_p;
  pr.den_p = den_p;
  const SpanResult res = maximize_span_ratio(pr, opt);

  // undo the column normalization when assembling the witness
  std::vector<AnalyticFunction> basis;
  std::vector<Complex> coeffs;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    basis.push_back(candidates[kept[k].index]);
    coeffs.push_back(res.coeffs[k] * kept[k].scale);
  }
  est.witness = combine(basis, coeffs);
  est.value = est.working_value = res.value;
  est.budget_used = res.evaluations;
  est.budget_exhausted = res.budget_exhausted;
  return est;
}

}  // namespace berglab
