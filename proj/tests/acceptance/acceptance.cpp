// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "berglab/carleson.hpp"
#include "berglab/rademacher.hpp"
#include "berglab/suite.hpp"
#include "berglab/toeplitz.hpp"

using namespace berglab;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double time_limit, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.note << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs > time_limit) {
    c.ok = false;
    c.note << " [time " << secs << " s > " << time_limit << " s]";
  }
  if (!c.ok) ++failures;
  std::printf("criterion %2d: %s  %s (%.2f s)%s\n", n, c.ok ? "PASS" : "FAIL", title.c_str(), secs, c.note.str().c_str());
  std::fflush(stdout);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const RadialWeight w0 = RadialWeight::standard(0);

std::vector<Complex> random_complex(std::mt19937_64& g, int K) {
  std::normal_distribution<double> n;
  std::vector<Complex> c(K);
  for (auto& x : c) x = Complex(n(g), n(g));
  return c;
}

}  // namespace

int main() {
  criterion(1, "kernel series against closed form", 1.0, [](Check& c) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0.0;
    for (double a : {0.0, 1.0, 2.0}) {
      const KernelSeries K = kernel_coeffs(RadialWeight::standard(a), 256);
      for (int i = 0; i < 2000; ++i) {
        const double rho = 0.9 * std::sqrt(u(g));
        const Complex z = std::polar(std::sqrt(rho), 2 * kPi * u(g)), xi = std::polar(std::sqrt(rho), 2 * kPi * u(g));
        const Complex exact = std::pow(1.0 - std::conj(z) * xi, -(2.0 + a));
        worst = std::max(worst, std::abs(K.eval(z, xi) - exact) / std::pow(1 - rho, -(2 + a)));
      }
    }
    c.note << "max error relative to majorant " << worst;
    c.require(worst <= 1e-8, "error <= 1e-8");
  });

  criterion(2, "reproducing property", 10.0, [](Check& c) {
    std::mt19937_64 g(2);
    double worst = 0.0;
    for (double a : {0.0, 1.0, 2.0}) {
      const RadialWeight w = RadialWeight::standard(a);
      const KernelSeries K = kernel_for_radius(w, 0.9, 1e-12);
      for (int deg = 0; deg <= 10; deg += 2) {
        const auto f = AnalyticFunction::monomials(random_complex(g, deg + 1));
        for (Complex z : {Complex(0.0), Complex(0.45, -0.3), Complex(-0.9), Complex(0.0, 0.9), std::polar(0.9, 2.0)})
          worst = std::max(worst, std::abs(inner_product_A2(f, AnalyticFunction::kernel(K, z), w).value - f(z)));
      }
    }
    c.note << "max |<f,B_z> - f(z)| " << worst;
    c.require(worst <= 1e-6, "error <= 1e-6");
  });

  criterion(3, "atom at the origin", 0, [](Check& c) {
    for (double m : {0.5, 1.0, 3.0}) {
      const Measure mu = Measure::atomic({0.0}, {m});
      const double exact = toeplitz_norm_exact_22(mu, w0).estimate.value;
      const double est = toeplitz_norm_estimate(mu, w0, w0, w0, 2, 2).value;
      const double emb = embedding_norm(w0, 2, mu, 2).value;
      c.note << " m=" << m << ": exact " << exact << ", estimate " << est << ", embedding " << emb << ";";
      c.require(std::abs(exact - m) <= 1e-6, "exact norm = m");
      c.require(est >= 0.98 * m, "estimate >= 0.98 m");
      c.require(rel(emb, std::sqrt(m)) <= 0.02, "embedding = sqrt(m)");
    }
  });

  criterion(4, "two-function atom extremal", 0, [](Check& c) {
    const double m = 2.0;
    const std::vector<EmbeddingSpec> specs{{w0, 2, 2}, {w0, 2, 2}};
    const MultiEstimate r = M_n_estimate(specs, Measure::atomic({0.0}, {m}));
    const double ratio = r.estimate.value / r.reference.value;
    c.note << "lambda " << r.lambda << ", M_2 " << r.estimate.value << ", reference " << r.reference.value << ", ratio "
           << ratio;
    c.require(r.estimate.value >= 0.95 * m, "M_2 >= 0.95 m");
    c.require(r.reference.value >= 0.95 * m, "reference >= 0.95 m");
    c.require(ratio >= 0.9 && ratio <= 1.1, "ratio in [0.9, 1.1]");
  });

  criterion(5, "homogeneity in the measure", 0, [](Check& c) {
    const Measure dens = Measure::power(0.5).restrict(0.0, 0.9);
    const Measure atoms = Measure::atomic({Complex(0.3, 0.1), Complex(-0.5, 0.4), Complex(0.1, -0.8)}, {1.0, 0.5, 2.0});
    const Lattice lat = generate_lattice(0.5, 1.0, 1e-3);
    struct Q {
      std::string name;
      std::function<double(const Measure&)> f;
      double tol;
    };
    const std::vector<Q> qs{
        {"M0", [](const Measure& m) { return M0_sup(m, w0, w0, w0, 2, 3).value; }, 1e-12},
        {"square sup", [](const Measure& m) { return carleson_sup(m, w0, 2, 2, RegionKind::Square).value; }, 1e-12},
        {"disk sup", [](const Measure& m) { return carleson_sup(m, w0, 2, 2, RegionKind::Disk).value; }, 1e-12},
        {"lambda", [&](const Measure& m) { return lambda_seq_norm(m, w0, w0, w0, 3, 2, lat, 1.0).value; }, 1e-12},
        {"muhat", [](const Measure& m) { return mu_hat_norm(m, w0, w0, w0, 3, 2, 1.0).value; }, 1e-12},
        {"phi", [](const Measure& m) { return phi_norm(m, w0, 3, 2, 1.0).value; }, 1e-12},
        {"psi", [](const Measure& m) { return psi_norm(m, w0, 4.0, 3, 2).value; }, 1e-12},
        {"spectral", [](const Measure& m) { return toeplitz_norm_exact_22(m, w0).estimate.value; }, 1e-12},
        {"embed^q", [](const Measure& m) { return std::pow(embedding_norm(w0, 2, m, 3).value, 3); }, 0.02},
        {"toeplitz", [](const Measure& m) { return toeplitz_norm_estimate(m, w0, w0, w0, 2, 3).value; }, 0.02},
    };
    for (const auto& q : qs) {
      double worst = 0.0;
      for (const Measure* mu : {&dens, &atoms}) {
        if (q.name == "spectral" && mu == &dens) continue;
        const double base = q.f(*mu);
        for (double s : {0.5, 3.0}) worst = std::max(worst, rel(q.f(mu->scale(s)), s * base));
      }
      c.note << " " << q.name << " " << worst << ";";
      c.require(worst <= q.tol, q.name);
    }
  });

  criterion(6, "identity operator", 0, [](Check& c) {
    for (double a : {0.0, 1.0}) {
      const RadialWeight w = RadialWeight::standard(a);
      const Measure mu = Measure::radial(w);
      for (double p : {2.0, 3.0}) {
        const CarlesonReport m0 = M0_sup(mu, w, w, w, p, p);
        double dev = 0.0;
        for (double v : m0.values) dev = std::max(dev, std::abs(v - 1.0));
        c.require(dev <= 1e-12, "M0 == 1");
        c.require(vanishing_profile(mu, w, w, w, p, p, 1.0).verdict == "not vanishing", "profile not vanishing");
      }
      const ToeplitzMatrix T = toeplitz_matrix(mu, w, 32);
      const double err = (T.entries - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff();
      c.note << " alpha " << a << ": |T - I| " << err << ";";
      c.require(err <= 1e-8, "matrix = identity");
      const std::vector<EmbeddingSpec> one{{w, 2, 2}};
      c.require(vanishing_sequence_F(one, mu, {0, 8, 16, 24, 32, 40}).verdict == "not vanishing", "F not vanishing");
    }
  });

  // 7 and 8 share the equivalence runs
  const WindowSet windows = load_windows(BERGLAB_WINDOWS_FIXTURE);
  SuiteOptions sopt;
  std::vector<EquivalenceReport> reports;
  criterion(7, "equivalence windows over the default family", 0, [&](Check& c) {
    const auto rows = default_suite();
    for (Experiment e : {Experiment::Thm1, Experiment::ThmA}) {
      reports.push_back(run_experiment(e, rows, sopt, &windows));
      const EquivalenceReport& r = reports.back();
      c.note << " " << r.experiment << ": " << r.rows.size() << " rows, max width " << r.max_width << ", scale change "
             << r.max_scale_change << ";";
      for (const auto& p : r.pairs)
        if (p.gated) c.require(p.width_ok && p.window_ok, r.experiment + " " + p.name);
      c.require(r.width_ok && r.window_ok, r.experiment + " windows");
      c.require(r.scale_ok, r.experiment + " scale invariance");
    }
  });

  criterion(8, "vanishing detection on every row", 0, [&](Check& c) {
    c.require(!reports.empty(), "equivalence runs available");
    std::size_t rows = 0;
    for (const auto& r : reports) {
      if (r.experiment != "thm1") continue;
      for (const auto& row : r.rows) {
        ++rows;
        if (!row.vanishing_ok)
          c.require(false, row.row.id + " (" + row.compact_profile + ", " + row.compact_F + ", " + row.identity_profile +
                               ", " + row.identity_F + ")");
      }
    }
    c.note << rows << " rows checked";
    c.require(rows == 18, "18 rows");
  });

  criterion(9, "lattice certification", 5.0, [](Check& c) {
    const Lattice L = generate_lattice(0.5, 1.0);
    const LatticeReport r = verify_lattice(L, 10000);
    c.note << L.size() << " points, min beta " << r.min_pairwise << ", max probe distance " << r.max_probe_distance;
    c.require(r.probes == 10000, "10^4 probes");
    c.require(r.min_pairwise >= 0.5 - 1e-9, "separation");
    c.require(r.max_probe_distance <= 1.0 + 1e-6, "covering");
  });

  criterion(10, "Khinchin and Kahane enumeration", 0, [](Check& c) {
    std::mt19937_64 g(10);
    double dev2 = 0.0;
    double lo1 = 1e300, hi1 = 0, lo4 = 1e300, hi4 = 0;
    for (int d = 0; d < 100; ++d) {
      const int K = 1 + d % 16;
      const auto cs = random_complex(g, K);
      dev2 = std::max(dev2, std::abs(khinchin_check(cs, 2).ratio - 1.0));
      const double r1 = khinchin_check(cs, 1).ratio, r4 = khinchin_check(cs, 4).ratio;
      lo1 = std::min(lo1, r1), hi1 = std::max(hi1, r1);
      lo4 = std::min(lo4, r4), hi4 = std::max(hi4, r4);
    }
    c.note << "p=2 deviation " << dev2 << "; p=1 ratios [" << lo1 << ", " << hi1 << "]; p=4 ratios [" << lo4 << ", " << hi4
           << "];";
    c.require(dev2 <= 1e-12, "p=2 ratio 1");
    // ratio = l2 / L^p moment: [1, sqrt 2] for p = 1, [3^{-1/4}, 1] for p = 4
    c.require(lo1 >= 1 - 1e-12 && hi1 <= std::sqrt(2.0) + 1e-12, "p=1 window");
    c.require(lo4 >= std::pow(3.0, -0.25) - 1e-12 && hi4 <= 1 + 1e-12, "p=4 window");

    const PolarGrid grid = weight_grid(w0, 32, 4, 6);
    const NodeSet nodes = NodeSet::from_grid(grid);
    std::uniform_real_distribution<double> u(0, 1);
    double klo = 1e300, khi = 0;
    for (int d = 0; d < 100; ++d) {
      std::vector<std::vector<Complex>> x;
      for (int k = 0; k < 8; ++k) {
        const auto f = kernel_atom(std::polar(0.8 * u(g), 2 * kPi * u(g)), 4.0).function;
        x.push_back(grid_values(f, grid));
      }
      const double r = kahane_check(x, nodes.weights, 1.0, 4.0, 2.0).ratio;
      klo = std::min(klo, r), khi = std::max(khi, r);
    }
    c.note << " Kahane (4,2) ratios [" << klo << ", " << khi << "]";
    c.require(klo >= 1 - 1e-12 && khi <= std::sqrt(3.0), "Kahane window");
  });

  criterion(11, "weight identities", 0, [](Check& c) {
    const auto grid = geometric_grid(20);
    double worst = 0.0;
    for (double a : {0.0, 1.0, 2.0, 0.5}) {
      const RadialWeight w = RadialWeight::standard(a);
      for (double p : {1.5, 2.0, 3.0}) {
        const RadialWeight s = sigma_weight(w, w, p);
        const BergmanConstant A = bergman_const_A(w, w, p, grid);
        for (double x : A.ratios) worst = std::max(worst, std::abs(x - 1.0));
        for (double q : {1.5, 2.0, 3.0}) {
          const RadialWeight W = fusion_weight_W(w, w, w, p, q);
          for (double r : grid) {
            worst = std::max(worst, rel(s.eval(r), w.eval(r)));
            worst = std::max(worst, rel(W.eval(r), w.eval(r)));
          }
        }
      }
    }
    c.note << "max deviation " << worst << ";";
    c.require(worst <= 1e-12, "identities to 1e-12");
    const RadialWeight w1 = RadialWeight::standard(1);
    const BergmanConstant good = bergman_const_A(w1, w0, 2, grid);
    const RadialWeight sg = sigma_weight(w1, w0, 2);
    const RatioProfile reg = regularity_profile(sg, grid);
    c.note << " A(standard(1), standard(0), 2) = " << good.value << ", sigma regularity [" << reg.min << ", " << reg.max
           << "]";
    c.require(good.finite && sg.integrable() && reg.bounded, "finite constant with regular sigma");
    c.require(!bergman_const_A(w0, w1, 2, grid).finite && !sigma_weight(w0, w1, 2).integrable(),
              "infinite constant with non-integrable sigma");
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
