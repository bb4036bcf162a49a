#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "berglab/carleson.hpp"
#include "berglab/config.hpp"
#include "berglab/kernel.hpp"
#include "berglab/report.hpp"
#include "berglab/suite.hpp"
#include "berglab/toeplitz.hpp"

#ifndef BERGLAB_DEFAULT_WINDOWS
#define BERGLAB_DEFAULT_WINDOWS ""
#endif

using namespace berglab;

namespace {

enum Exit { kOk = 0, kConfig = 2, kAccuracy = 3, kWindow = 4 };

struct Flags {
  std::string config;
  std::string out;
  std::string format = "json";
  std::string windows = BERGLAB_DEFAULT_WINDOWS;
  std::string record_windows;
  std::optional<std::uint64_t> seed;
  std::optional<double> radius;
  std::optional<std::size_t> budget;
  bool no_rescale = false;
};

struct Outcome {
  std::string name;
  Json json;
  std::string csv;
  bool accuracy_ok = true;
  bool window_ok = true;
};

Scenario scenario_from(const Flags& f) {
  Scenario s = f.config.empty() ? Scenario{} : load_scenario(f.config);
  if (f.seed) s.seed = *f.seed;
  if (f.radius) s.r = *f.radius;
  if (f.budget) s.budget = *f.budget;
  return s;
}

OptimizerOptions optimizer_from(const Scenario& s) {
  OptimizerOptions o;
  o.budget = s.budget;
  o.seed = s.seed;
  o.restarts = s.restarts;
  o.gamma = s.gamma;
  return o;
}

std::vector<EmbeddingSpec> specs_from(const Scenario& s) {
  std::vector<EmbeddingSpec> out;
  for (const auto& e : s.specs) out.push_back({e.weight.build(), e.p, e.q});
  if (out.empty()) out = {{s.omega_weight(), s.p, s.q}, {s.omega_weight(), s.p, s.q}};
  return out;
}

Outcome carleson_outcome(const std::string& name, const CarlesonReport& r, bool profile) {
  Outcome o{name, report_json(r), profile ? profile_csv(r) : points_csv(r)};
  o.accuracy_ok = r.converged;
  return o;
}

Outcome weights_check(const Scenario& s) {
  const RadialWeight w = s.omega_weight(), eta = s.eta_weight(), ups = s.upsilon_weight();
  const auto grid = geometric_grid(20);
  const RatioProfile reg = regularity_profile(w, grid);
  const RatioProfile dbl = doubling_profile(w, grid);
  const RadialWeight sigma = sigma_weight(w, eta, s.p);
  const BergmanConstant A = bergman_const_A(w, eta, s.p, grid);
  Json j{{"omega", w.label()},
         {"boundary_exponent", number_json(w.boundary_exponent())},
         {"regularity", {{"min", number_json(reg.min)}, {"max", number_json(reg.max)}, {"bounded", reg.bounded}}},
         {"doubling", {{"min", number_json(dbl.min)}, {"max", number_json(dbl.max)}, {"bounded", dbl.bounded}}},
         {"sigma", {{"label", sigma.label()}, {"integrable", sigma.integrable()}}},
         {"A", {{"value", number_json(A.value)}, {"finite", A.finite}, {"argmax", A.argmax}}}};
  if (sigma_weight(w, ups, s.q).integrable()) j["W"] = fusion_weight_W(eta, ups, w, s.p, s.q).label();
  std::string csv = "r,regularity,doubling,A\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid[i], reg.ratios[i], dbl.ratios[i],
                  i < A.ratios.size() ? A.ratios[i] : NAN);
    csv += buf;
  }
  return {"weights_check", j, csv};
}

Outcome geometry_lattice(const Scenario& s) {
  const Lattice lat = generate_lattice(s.lattice.s, s.lattice.r, s.lattice.cutoff);
  const LatticeReport rep = verify_lattice(lat, 10000);
  Json j{{"separation", lat.separation},
         {"covering", lat.covering},
         {"cutoff", lat.cutoff},
         {"points", lat.size()},
         {"min_pairwise", number_json(rep.min_pairwise)},
         {"max_probe_distance", number_json(rep.max_probe_distance)},
         {"probes", rep.probes},
         {"separated", rep.separated},
         {"covers", rep.covering}};
  Outcome o{"lattice", j, lattice_csv(lat)};
  o.accuracy_ok = rep.separated && rep.covering;
  return o;
}

Outcome kernel_validate(const Scenario& s) {
  const RadialWeight w = s.omega_weight();
  const KernelSeries ks = kernel_coeffs(w, 256);
  const auto alpha = w.standard_alpha();
  double closed_err = 0.0;
  std::string csv = "re_z,re_xi,kernel_re,kernel_im,closed_form_error\n";
  if (alpha) {
    for (int i = 0; i <= 9; ++i) {
      for (int j = 0; j < 16; ++j) {
        const Complex z = 0.9 * i / 9.0;
        const Complex xi = std::polar(1.0, 2.0 * kPi * j / 16.0);
        const Complex u = std::conj(z) * xi;
        const Complex exact = std::pow(1.0 - u, -(2.0 + *alpha));
        const Complex got = ks.eval_unchecked(z, xi);
        const double err = std::abs(got - exact) / std::pow(1.0 - std::abs(u), -(2.0 + *alpha));
        closed_err = std::max(closed_err, err);
        char buf[200];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.3e\n", z.real(), xi.real(), got.real(), got.imag(), err);
        csv += buf;
      }
    }
  }
  double repro_err = 0.0;
  for (int deg = 0; deg <= 10; deg += 2) {
    std::vector<Complex> c(deg + 1);
    for (int n = 0; n <= deg; ++n) c[n] = Complex(1.0 / (n + 1), 0.5 * n / (deg + 1));
    const AnalyticFunction f = AnalyticFunction::monomials(c);
    for (Complex z : {Complex(0.3, 0.2), Complex(-0.6, 0.5), Complex(0.0, 0.9)}) {
      const AnalyticFunction B = AnalyticFunction::kernel(ks, z);
      const Complex ip = inner_product_A2(f, B, w).value;
      repro_err = std::max(repro_err, std::abs(ip - f(z)));
    }
  }
  Json j{{"omega", w.label()},
         {"order", ks.order()},
         {"max_argument", ks.max_argument(1e-8)},
         {"reproducing_error", number_json(repro_err)}};
  if (alpha) j["closed_form_error"] = number_json(closed_err);
  Outcome o{"kernel_validate", j, csv};
  o.accuracy_ok = repro_err <= 1e-6 && closed_err <= 1e-8;
  return o;
}

Outcome toeplitz_norm(const Scenario& s, const Flags& f) {
  const Measure mu = s.measure.build();
  const RadialWeight w = s.omega_weight();
  const OptimizerOptions opt = optimizer_from(s);
  const NormEstimate est = toeplitz_norm_estimate(mu, w, s.eta_weight(), s.upsilon_weight(), s.p, s.q, opt);
  Json j{{"estimate", estimate_json(est)}};
  bool ok = est.converged;
  std::string csv;
  if (s.p == 2.0 && s.q == 2.0 && !s.eta && !s.upsilon) {
    const SpectralNorm sn = toeplitz_norm_exact_22(mu, w);
    j["spectral"] = spectral_json(sn);
    ok = ok && sn.estimate.converged;
    csv = matrix_csv(toeplitz_matrix(mu, w, std::max<std::size_t>(sn.basis_size, 1)));
  }
  Outcome o{"toeplitz_norm", j, csv};
  o.accuracy_ok = ok;
  return o;
}

Outcome toeplitz_compactness(const Scenario& s) {
  const std::vector<double> s_list =
      s.s_list.empty() ? std::vector<double>{0.0, 0.5, 0.7, 0.8, 0.9, 0.95} : s.s_list;
  const CompactnessProfile c = compactness_profile(s.measure.build(), s.omega_weight(), s.eta_weight(),
                                                   s.upsilon_weight(), s.p, s.q, s_list, optimizer_from(s));
  return {"compactness", compactness_json(c), compactness_csv(c)};
}

Outcome verify(Experiment e, const Scenario& s, const Flags& f) {
  SuiteOptions opt;
  opt.r = s.r;
  opt.lattice = s.lattice;
  opt.gamma = s.gamma;
  opt.opt = optimizer_from(s);
  opt.rescale = !f.no_rescale;
  if (!s.ks.empty()) opt.ks = s.ks;
  std::optional<WindowSet> windows;
  if (!f.windows.empty() && std::filesystem::exists(f.windows)) windows = load_windows(f.windows);
  const auto t0 = std::chrono::steady_clock::now();
  const EquivalenceReport rep = run_experiment(e, default_suite(), opt, windows ? &*windows : nullptr);
  std::cerr << experiment_name(e) << ": " << rep.rows.size() << " scenarios in "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
  if (!f.record_windows.empty()) {
    WindowSet merged;
    if (std::filesystem::exists(f.record_windows)) merged = load_windows(f.record_windows);
    const WindowSet fresh = windows_from_report(rep, std::log(50.0));
    merged.max_width = fresh.max_width;
    for (const auto& [k, v] : fresh.pairs) merged.pairs[k] = v;
    write_text(f.record_windows, dump_json(windows_json(merged)));
  }
  Outcome o{"verify_" + experiment_name(e), equivalence_json(rep), suite_csv(rep)};
  o.accuracy_ok = rep.accuracy_ok;
  o.window_ok = rep.passed();
  return o;
}

int emit(const Outcome& o, const Flags& f) {
  if (f.format == "csv" && !o.csv.empty())
    std::cout << o.csv;
  else
    std::cout << dump_json(o.json);
  if (!f.out.empty()) {
    std::filesystem::create_directories(f.out);
    const std::filesystem::path dir(f.out);
    write_text((dir / (o.name + ".json")).string(), dump_json(o.json));
    if (!o.csv.empty()) write_text((dir / (o.name + ".csv")).string(), o.csv);
  }
  if (!o.window_ok) return kWindow;
  if (!o.accuracy_ok) return kAccuracy;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Bergman space laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Optimizer seed");
  app.add_option("--out", flags.out, "Directory for JSON and CSV artifacts");
  app.add_option("--radius", flags.radius, "Bergman disk radius r");
  app.add_option("--budget", flags.budget, "Optimizer budget (objective evaluations)");
  app.add_option("--format", flags.format, "Output on stdout")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--windows", flags.windows, "Equivalence window fixture");
  app.add_option("--record-windows", flags.record_windows, "Write windows centred on this run");
  app.add_flag("--no-rescale", flags.no_rescale, "Skip the scaled rerun in verify");

  std::function<Outcome()> action;
  Scenario scenario;
  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help, auto body) {
    auto* sub = group->add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&, body] { action = [&, body] { return body(); }; });
  };
  auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };

  auto* weights = group("weights", "Weight diagnostics");
  leaf(weights, "check", "Regularity, doubling, sigma and the A constant", [&] { return weights_check(scenario); });

  auto* geometry = group("geometry", "Hyperbolic geometry");
  leaf(geometry, "lattice", "Generate and verify a separated covering lattice", [&] { return geometry_lattice(scenario); });

  auto* kernel = group("kernel", "Reproducing kernels");
  leaf(kernel, "validate", "Closed form and reproducing checks", [&] { return kernel_validate(scenario); });

  auto* carleson = group("carleson", "Carleson testing quantities");
  auto mu = [&] { return scenario.measure.build(); };
  leaf(carleson, "m0", "Supremum of the M0 integrand", [&] {
    const RadialWeight w = scenario.omega_weight();
    return carleson_outcome("m0", M0_sup(mu(), w, scenario.eta_weight(), scenario.upsilon_weight(), scenario.p,
                                         scenario.q, scenario.r), false);
  });
  leaf(carleson, "vanish", "Shell maxima of the M0 integrand", [&] {
    const RadialWeight w = scenario.omega_weight();
    const auto radii = scenario.radii.empty() ? shell_radii() : scenario.radii;
    return carleson_outcome("vanish", vanishing_profile(mu(), w, scenario.eta_weight(), scenario.upsilon_weight(),
                                                        scenario.p, scenario.q, scenario.r, radii), true);
  });
  leaf(carleson, "lambda", "Lattice sequence norm", [&] {
    const Lattice lat = generate_lattice(scenario.lattice.s, scenario.lattice.r, scenario.lattice.cutoff);
    const RadialWeight w = scenario.omega_weight();
    auto rep = lambda_seq_norm(mu(), w, scenario.eta_weight(), scenario.upsilon_weight(), scenario.p, scenario.q,
                               lat, scenario.r);
    return carleson_outcome("lambda", rep, true);
  });
  leaf(carleson, "muhat", "Integral norm of the averaged quotient", [&] {
    const RadialWeight w = scenario.omega_weight();
    return carleson_outcome("muhat", mu_hat_norm(mu(), w, scenario.eta_weight(), scenario.upsilon_weight(),
                                                 scenario.p, scenario.q, scenario.r), false);
  });
  leaf(carleson, "psi", "Integral norm of the kernel average Psi", [&] {
    return carleson_outcome("psi", psi_norm(mu(), scenario.omega_weight(), scenario.gamma, scenario.p, scenario.q),
                            false);
  });
  leaf(carleson, "embed", "Embedding norm A^p -> L^q(mu)", [&] {
    const NormEstimate e = embedding_norm(scenario.omega_weight(), scenario.p, mu(), scenario.q,
                                          optimizer_from(scenario));
    Outcome o{"embed", estimate_json(e), ""};
    o.accuracy_ok = e.converged;
    return o;
  });
  leaf(carleson, "mn", "Multi-function supremum against its reference embedding", [&] {
    const MultiEstimate m = M_n_estimate(specs_from(scenario), mu(), optimizer_from(scenario));
    Outcome o{"mn", multi_json(m), ""};
    o.accuracy_ok = m.estimate.converged && m.reference.converged;
    return o;
  });
  leaf(carleson, "thm3", "F(k) along normalized monomials", [&] {
    auto specs = specs_from(scenario);
    if (scenario.specs.empty()) specs.resize(1);
    const std::vector<int> ks = scenario.ks.empty() ? std::vector<int>{0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40}
                                                    : scenario.ks;
    return carleson_outcome("thm3", vanishing_sequence_F(specs, mu(), ks, optimizer_from(scenario)), true);
  });

  auto* toeplitz = group("toeplitz", "Toeplitz operators");
  leaf(toeplitz, "norm", "Norm estimate (and spectral norm for p = q = 2)", [&] { return toeplitz_norm(scenario, flags); });
  leaf(toeplitz, "compactness", "Norms of the tail pieces", [&] { return toeplitz_compactness(scenario); });

  auto* verify_cmd = group("verify", "Equivalence runs over the default scenario family");
  for (Experiment e : {Experiment::Thm1, Experiment::Thm1iii, Experiment::Thm2, Experiment::ThmA}) {
    leaf(verify_cmd, experiment_name(e), "Paired quantities for " + experiment_name(e),
         [&, e] { return verify(e, scenario, flags); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kConfig;
  }
  try {
    scenario = scenario_from(flags);
    return emit(action(), flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy: " << e.what() << "\n";
    return kAccuracy;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAccuracy;
  }
}
