#include "berglab/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace berglab {

namespace {

constexpr std::size_t kImageCap = 8192;

// Nodes and masses for the non-radial formulas; radial measures never get here.
DiscreteMeasure nodes_of(const Measure& mu) { return mu.discretize(); }

double max_modulus(const DiscreteMeasure& d) {
  double r = 0.0;
  for (Complex z : d.points) r = std::max(r, std::abs(z));
  return r;
}

// d_n = k_n sum_i g_i conj(xi_i)^n for n <= order.
std::vector<Complex> moment_image(const DiscreteMeasure& d, std::span<const Complex> g,
                                  const std::vector<double>& k) {
  std::vector<Complex> out(k.size());
  std::vector<Complex> pw(g.begin(), g.end());
  std::vector<Complex> cx(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) cx[i] = std::conj(d.points[i]);
  for (std::size_t n = 0; n < k.size(); ++n) {
    Complex s{};
    for (std::size_t i = 0; i < pw.size(); ++i) {
      s += pw[i];
      pw[i] *= cx[i];
    }
    out[n] = k[n] * s;
  }
  return out;
}

KernelSeries image_series(const RadialWeight& omega, double rho, double tol) {
  if (rho >= 1.0 - 1e-9) return KernelSeries(omega, kImageCap);
  try {
    return kernel_for_radius(omega, rho, tol, kImageCap);
  } catch (const AccuracyError&) {
    return KernelSeries(omega, kImageCap);
  }
}

}  // namespace

AnalyticFunction toeplitz_image(const Measure& mu, const RadialWeight& omega, const AnalyticFunction& f,
                                double tol) {
  if (mu.is_zero() || f.is_zero()) return {};
  if (mu.is_radial()) {
    const std::size_t len = f.taylor_length(tol);
    const auto fc = f.taylor(len);
    const auto m = mu.even_moments(len);
    const KernelSeries ks(omega, len == 0 ? 0 : len - 1);
    std::vector<Complex> d(len);
    for (std::size_t n = 0; n < len; ++n) d[n] = ks.coeff(n) * m[n] * fc[n];
    return AnalyticFunction::monomials(std::move(d));
  }
  const DiscreteMeasure d = nodes_of(mu);
  if (d.size() == 0) return {};
  std::vector<Complex> g(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) g[i] = d.masses[i] * f(d.points[i]);
  const KernelSeries ks = image_series(omega, max_modulus(d), tol);
  return AnalyticFunction::monomials(moment_image(d, g, ks.coeffs()));
}

Complex toeplitz_apply(const Measure& mu, const RadialWeight& omega, const AnalyticFunction& f, Complex z,
                       std::size_t N) {
  if (std::abs(z) >= 1.0) throw DomainError("toeplitz_apply: z must lie in the disk");
  if (mu.is_zero()) return {};
  const KernelSeries ks(omega, N);
  if (mu.kind() == Measure::Kind::Atomic) {
    const DiscreteMeasure d = nodes_of(mu);
    Complex s{};
    for (std::size_t i = 0; i < d.size(); ++i)
      s += d.masses[i] * f(d.points[i]) * std::conj(ks.eval(z, d.points[i]));
    return s;
  }
  if (mu.is_radial()) {
    const auto fc = f.taylor(N + 1);
    const auto m = mu.even_moments(N + 1);
    Complex s{}, zn{1.0, 0.0};
    for (std::size_t n = 0; n <= N; ++n) {
      s += ks.coeff(n) * m[n] * fc[n] * zn;
      zn *= z;
    }
    const double rho = std::abs(z);
    if (ks.relative_tail(rho) > 1e-8) throw AccuracyError("toeplitz_apply: kernel order too small", ks.required_order(rho));
    return s;
  }
  const DiscreteMeasure d = nodes_of(mu);
  Complex s{};
  for (std::size_t i = 0; i < d.size(); ++i)
    s += d.masses[i] * f(d.points[i]) * std::conj(ks.eval_unchecked(z, d.points[i]));
  return s;
}

ToeplitzMatrix toeplitz_matrix(const Measure& mu, const RadialWeight& omega, std::size_t M) {
  if (M == 0) throw ParameterError("toeplitz_matrix: M must be >= 1");
  ToeplitzMatrix out;
  out.size = M;
  out.weight = omega.label();
  out.measure = mu.describe();
  out.measure_hash = mu.hash();
  out.entries = Eigen::MatrixXcd::Zero(M, M);
  if (mu.is_zero()) return out;
  const KernelSeries ks(omega, M - 1);
  if (mu.is_radial()) {
    const auto m = mu.even_moments(M);
    for (std::size_t n = 0; n < M; ++n) out.entries(n, n) = ks.coeff(n) * m[n];
    return out;
  }
  const DiscreteMeasure d = nodes_of(mu);
  Eigen::MatrixXcd V(d.size(), M);
  for (std::size_t i = 0; i < d.size(); ++i) {
    Complex pw = std::sqrt(d.masses[i]);
    for (std::size_t n = 0; n < M; ++n) {
      V(i, n) = pw * std::sqrt(ks.coeff(n));
      pw *= d.points[i];
    }
  }
  out.entries = V.adjoint() * V;
  return out;
}

std::size_t recommended_basis_size(const Measure& mu, double tol) {
  if (mu.kind() != Measure::Kind::Atomic || mu.is_zero()) return 0;
  const double rho = max_modulus(mu.discretize());
  if (rho == 0.0) return 1;
  return static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(rho)));
}

namespace {

struct TopEigen {
  double value = 0.0;
  Eigen::VectorXcd vector;
};

TopEigen top_eigen(const ToeplitzMatrix& t, bool diagonal) {
  TopEigen out;
  const Eigen::Index M = t.entries.rows();
  if (diagonal) {
    Eigen::Index arg = 0;
    out.value = t.entries.diagonal().real().maxCoeff(&arg);
    out.vector = Eigen::VectorXcd::Zero(M);
    out.vector(arg) = 1.0;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.entries);
  out.value = es.eigenvalues()(M - 1);
  out.vector = es.eigenvectors().col(M - 1);
  return out;
}

}  // namespace

SpectralNorm toeplitz_norm_exact_22(const Measure& mu, const RadialWeight& omega, std::size_t M0, double tol,
                                    std::size_t cap) {
  SpectralNorm out;
  out.estimate.method = "spectral";
  out.estimate.lower_bound = false;
  out.recommended = recommended_basis_size(mu, tol);
  const bool diagonal = mu.is_radial();
  if (diagonal) cap = std::max<std::size_t>(cap, 8192);
  std::size_t M = std::max<std::size_t>(M0, 1);
  TopEigen prev;
  bool have_prev = false;
  for (;;) {
    const ToeplitzMatrix t = toeplitz_matrix(mu, omega, M);
    TopEigen cur = top_eigen(t, diagonal);
    out.basis_size = M;
    if (have_prev) {
      out.last_change = std::abs(cur.value - prev.value);
      if (out.last_change <= tol * std::max(cur.value, 0.0) || cur.value == 0.0) {
        prev = std::move(cur);
        out.estimate.converged = true;
        break;
      }
    }
    prev = std::move(cur);
    have_prev = true;
    if (M * 2 > cap) {
      out.estimate.converged = false;
      break;
    }
    M *= 2;
  }
  out.estimate.value = out.estimate.working_value = std::max(prev.value, 0.0);
  out.estimate.basis_size = out.basis_size;
  // eigenvector in e_n coordinates back to monomial coefficients
  const KernelSeries ks(omega, out.basis_size - 1);
  std::vector<Complex> c(out.basis_size);
  for (std::size_t n = 0; n < out.basis_size; ++n) c[n] = prev.vector(n) * std::sqrt(ks.coeff(n));
  out.estimate.witness = AnalyticFunction::monomials(std::move(c));
  return out;
}

namespace {

NormEstimate estimate_with(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                           const RadialWeight& upsilon, double p, double q, const OptimizerOptions& opt,
                           std::span<const Complex> extra) {
  if (!(p > 1.0 && q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw ParameterError("toeplitz_norm_estimate: requires 1 < p, q < inf");
  if (!bergman_const_A(omega, eta, p).finite)
    throw ParameterError("toeplitz_norm_estimate: A(p, eta) is infinite for this weight pair");
  if (mu.is_zero()) {
    NormEstimate z;
    z.method = "optimizer";
    z.witness = AnalyticFunction::monomial(0);
    return z;
  }
  const PolarGrid den_grid = weight_grid(eta, opt.grid_angular, opt.grid_radial, opt.grid_levels);
  const PolarGrid num_grid = weight_grid(upsilon, opt.grid_angular, opt.grid_radial, opt.grid_levels);

  std::vector<Complex> atoms_at(extra.begin(), extra.end());
  std::vector<AnalyticFunction> candidates = witness_family(opt, mu.is_radial(), atoms_at);
  if (mu.kind() == Measure::Kind::Atomic) {
    // T has range span{B_xi}: kernels at the atoms are natural inputs
    const DiscreteMeasure d = mu.discretize();
    const KernelSeries ks = image_series(omega, max_modulus(d), 1e-12);
    for (Complex xi : d.points) {
      candidates.push_back(AnalyticFunction::atoms({KernelAtom{xi, 1.0, opt.gamma}}));
      candidates.push_back(AnalyticFunction::kernel(ks, xi));
    }
  }
  const ColumnMap columns = [&](const AnalyticFunction& f, std::vector<Complex>& num, std::vector<Complex>& den) {
    den = grid_values(f, den_grid);
    num = grid_values(toeplitz_image(mu, omega, f), num_grid);
  };
  NormEstimate est = optimize_witness(candidates, columns, num_grid.weights, den_grid.weights, q, p, opt);
  if (est.witness.is_zero()) return est;

  // certify on finer grids
  const PolarGrid den_f = weight_grid(eta, opt.final_angular, opt.grid_radial + 2, opt.grid_levels + 2);
  const PolarGrid num_f = weight_grid(upsilon, opt.final_angular, opt.grid_radial + 2, opt.grid_levels + 2);
  const double dn = grid_norm(grid_values(est.witness, den_f), den_f, p);
  const double nn = grid_norm(grid_values(toeplitz_image(mu, omega, est.witness), num_f), num_f, q);
  est.value = dn > 0.0 ? nn / dn : 0.0;
  est.converged = std::abs(est.value - est.working_value) <= 0.01 * std::max(est.value, est.working_value);
  return est;
}

}  // namespace

NormEstimate toeplitz_norm_estimate(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                                    const RadialWeight& upsilon, double p, double q, const OptimizerOptions& opt) {
  return estimate_with(mu, omega, eta, upsilon, p, q, opt, {});
}

CompactnessProfile compactness_profile(const Measure& mu, const RadialWeight& omega, const RadialWeight& eta,
                                       const RadialWeight& upsilon, double p, double q,
                                       const std::vector<double>& s_list, const OptimizerOptions& opt) {
  CompactnessProfile out;
  out.s = s_list;
  for (double s : s_list) {
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("compactness_profile: s must lie in [0, 1)");
    const Measure tail = mu.restrict_tail(s).first;
    // inputs concentrated just outside |z| = s
    const Complex extra[] = {Complex(1.0 - 0.5 * (1.0 - s), 0.0), Complex(1.0 - 0.25 * (1.0 - s), 0.0)};
    out.norms.push_back(estimate_with(tail, omega, eta, upsilon, p, q, opt, extra).value);
  }
  out.verdict = "not-compact";
  if (out.norms.empty()) return out;
  const double top = *std::max_element(out.norms.begin(), out.norms.end());
  const double last = out.norms.back();
  if (top == 0.0 || last <= 1e-3 * top) {
    out.verdict = "compact-consistent";
    return out;
  }
  // otherwise require a power-law decay in 1 - s over the last three points
  const std::size_t n = out.norms.size();
  if (n >= 3) {
    bool decreasing = true;
    for (std::size_t i = n - 2; i < n; ++i) decreasing &= out.norms[i] <= out.norms[i - 1] * 1.02;
    const double slope = std::log(out.norms[n - 3] / last) / std::log((1.0 - s_list[n - 3]) / (1.0 - s_list[n - 1]));
    if (decreasing && slope >= 0.25) out.verdict = "compact-consistent";
  }
  return out;
}

std::string matrix_csv(const ToeplitzMatrix& m) {
  nlohmann::ordered_json header;
  header["M"] = m.size;
  header["weight"] = m.weight;
  header["measure"] = m.measure;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.measure_hash));
  header["measure_hash"] = hash;
  std::ostringstream os;
  os << "# " << header.dump() << "\n";
  os << "row,col,re,im\n";
  char line[128];
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      std::snprintf(line, sizeof line, "%lld,%lld,%.17g,%.17g\n", static_cast<long long>(i),
                    static_cast<long long>(j), m.entries(i, j).real(), m.entries(i, j).imag());
      os << line;
    }
  return os.str();
}

}  // namespace berglab
