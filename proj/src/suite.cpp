#include "berglab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "berglab/carleson.hpp"
#include "berglab/parallel.hpp"
#include "berglab/toeplitz.hpp"

namespace berglab {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Value {
  std::string name;
  double value = 0.0;
  bool converged = true;
};

using PairList = std::vector<std::pair<std::string, std::string>>;

std::vector<Value> thm1_values(const SuiteRow& row, const Measure& mu, const SuiteOptions& opt,
                               const Lattice& lattice) {
  const RadialWeight w = RadialWeight::standard(row.alpha);
  const double p = row.p, q = row.q;
  std::vector<Value> out;
  const NormEstimate T = toeplitz_norm_estimate(mu, w, w, w, p, q, opt.opt);
  out.push_back({"norm", T.value, T.converged});
  const RadialWeight W = fusion_weight_W(w, w, w, p, q);
  const double t = DerivedExponents{p, q}.t();
  const NormEstimate e = embedding_norm(W, t, mu, 1.0, opt.opt);
  out.push_back({"embed_W", e.value, e.converged});
  if (p <= q) {
    const CarlesonReport m0 = M0_sup(mu, w, w, w, p, q, opt.r);
    out.push_back({"M0", m0.value, m0.converged});
  } else {
    const CarlesonReport l = lambda_seq_norm(mu, w, w, w, p, q, lattice, opt.r);
    out.push_back({"lambda", l.value, l.converged && !l.diverging});
    const CarlesonReport mh = mu_hat_norm(mu, w, w, w, p, q, opt.r);
    out.push_back({"muhat", mh.value, mh.converged});
    const CarlesonReport ps = psi_norm(mu, W, opt.gamma, t, 1.0);
    out.push_back({"psi", ps.value, ps.converged});
  }
  return out;
}

PairList thm1_pairs(const SuiteRow& row) {
  if (row.p <= row.q) return {{"norm", "M0"}, {"norm", "embed_W"}};
  return {{"norm", "lambda"}, {"norm", "muhat"}, {"norm", "psi"}, {"norm", "embed_W"}};
}

std::vector<Value> thmA_values(const SuiteRow& row, const Measure& mu, const SuiteOptions& opt) {
  const RadialWeight w = RadialWeight::standard(row.alpha);
  const double p = row.p, q = row.q;
  std::vector<Value> out;
  const NormEstimate e = embedding_norm(w, p, mu, q, opt.opt);
  out.push_back({"embed^q", std::pow(e.value, q), e.converged});
  if (p <= q) {
    const CarlesonReport sq = carleson_sup(mu, w, p, q, RegionKind::Square, opt.r);
    out.push_back({"square", sq.value, sq.converged});
    const CarlesonReport dk = carleson_sup(mu, w, p, q, RegionKind::Disk, opt.r);
    out.push_back({"disk", dk.value, dk.converged});
  } else {
    const CarlesonReport ph = phi_norm(mu, w, p, q, opt.r);
    out.push_back({"phi", ph.value, ph.converged});
    const CarlesonReport ps = psi_norm(mu, w, opt.gamma, p, q);
    out.push_back({"psi", ps.value, ps.converged});
  }
  return out;
}

PairList thmA_pairs(const SuiteRow& row) {
  if (row.p <= row.q) return {{"square", "disk"}, {"embed^q", "disk"}, {"embed^q", "square"}};
  return {{"phi", "psi"}, {"embed^q", "phi"}, {"embed^q", "psi"}};
}

std::vector<Value> thm2_values(const SuiteRow& row, const Measure& mu, const SuiteOptions& opt) {
  const RadialWeight w = RadialWeight::standard(row.alpha);
  const std::vector<EmbeddingSpec> specs{{w, row.p, row.q}, {w, row.p, row.q}};
  const MultiEstimate m = M_n_estimate(specs, mu, opt.opt);
  return {{"M_n", m.estimate.value, m.estimate.converged}, {"reference", m.reference.value, m.reference.converged}};
}

std::vector<Value> row_values(Experiment e, const SuiteRow& row, const Measure& mu, const SuiteOptions& opt,
                              const Lattice& lattice) {
  switch (e) {
    case Experiment::Thm1:
    case Experiment::Thm1iii:
      return thm1_values(row, mu, opt, lattice);
    case Experiment::ThmA:
      return thmA_values(row, mu, opt);
    case Experiment::Thm2:
      return thm2_values(row, mu, opt);
  }
  return {};
}

PairList row_pairs(Experiment e, const SuiteRow& row) {
  switch (e) {
    case Experiment::Thm1:
      return thm1_pairs(row);
    case Experiment::Thm1iii:
      return {{"norm", "lambda"}, {"norm", "muhat"}, {"lambda", "muhat"}};
    case Experiment::ThmA:
      return thmA_pairs(row);
    case Experiment::Thm2:
      return {{"M_n", "reference"}};
  }
  return {};
}

// Reported without entering the verdict: with the narrow square S_z a single atom at the
// vertex dominates mu(S_z)/omega(S_z)^{q/p} when q > p.
bool gated(Experiment e, const std::string& pair) { return !(e == Experiment::ThmA && pair == "embed^q/square"); }

double lookup(const std::vector<Quantity>& qs, const std::string& name, bool scaled) {
  for (const auto& q : qs)
    if (q.name == name) return scaled ? q.scaled : q.value;
  throw Error("suite: missing quantity " + name);
}

MeasureSpec compact_variant(const MeasureSpec& spec, double radius) {
  MeasureSpec out = spec;
  if (out.type == "lattice_atoms") out.lattice.r_max = std::min(out.lattice.r_max, radius);
  out.support_hi = std::min(out.support_hi, radius);
  return out;
}

void vanishing_checks(RowResult& res, const SuiteOptions& opt) {
  const SuiteRow& row = res.row;
  const RadialWeight w = RadialWeight::standard(row.alpha);
  const Measure compact = compact_variant(row.measure, opt.compact_radius).build();
  bool ok = true;
  if (row.p <= row.q) {
    const CarlesonReport v = vanishing_profile(compact, w, w, w, row.p, row.q, opt.r);
    res.compact_profile = v.verdict;
    ok = ok && v.verdict == "vanishing";
  }
  const CarlesonReport F = vanishing_sequence_F({{w, row.p, row.q}}, compact, opt.ks, opt.opt);
  res.compact_F = F.verdict;
  res.compact_F_rate = 0.0;
  for (const auto& [k, v] : F.meta)
    if (k == "decay_rate") res.compact_F_rate = v;
  ok = ok && F.verdict == "vanishing" && res.compact_F_rate < 1.0;

  const Measure identity = Measure::radial(w);
  const CarlesonReport vi = vanishing_profile(identity, w, w, w, row.p, row.p, opt.r);
  res.identity_profile = vi.verdict;
  const CarlesonReport Fi = vanishing_sequence_F({{w, row.p, row.p}}, identity, opt.ks, opt.opt);
  res.identity_F = Fi.verdict;
  ok = ok && vi.verdict == "not vanishing" && Fi.verdict == "not vanishing";
  res.vanishing_ok = ok;
}

RowResult run_row(Experiment e, const SuiteRow& row, const SuiteOptions& opt, const Lattice& lattice) {
  const auto t0 = Clock::now();
  RowResult res;
  res.row = row;
  const Measure mu = row.measure.build();
  const auto base = row_values(e, row, mu, opt, lattice);
  std::vector<Value> scaled;
  if (opt.rescale) scaled = row_values(e, row, mu.scale(opt.scale), opt, lattice);
  for (std::size_t i = 0; i < base.size(); ++i) {
    Quantity q;
    q.name = base[i].name;
    q.value = base[i].value;
    q.converged = base[i].converged;
    q.scaled = opt.rescale ? scaled[i].value / opt.scale : q.value;
    if (opt.rescale) q.converged = q.converged && scaled[i].converged;
    res.accuracy_ok = res.accuracy_ok && q.converged && std::isfinite(q.value);
    res.quantities.push_back(q);
  }
  for (const auto& [a, b] : row_pairs(e, row)) {
    const double va = lookup(res.quantities, a, false), vb = lookup(res.quantities, b, false);
    const std::string name = a + "/" + b;
    res.log_ratios[name] = std::log(va / vb);
    if (opt.rescale) {
      const double sa = lookup(res.quantities, a, true), sb = lookup(res.quantities, b, true);
      const double change = std::abs((sa / sb) / (va / vb) - 1.0);
      res.max_scale_change = std::max(res.max_scale_change, std::isfinite(change) ? change : 1.0);
    }
  }
  if (opt.vanishing && (e == Experiment::Thm1 || e == Experiment::Thm1iii)) vanishing_checks(res, opt);
  res.seconds = since(t0);
  return res;
}

double stdev(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Thm1:
      return "thm1";
    case Experiment::Thm1iii:
      return "thm1-iii";
    case Experiment::Thm2:
      return "thm2";
    case Experiment::ThmA:
      return "thmA";
  }
  return "";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::Thm1, Experiment::Thm1iii, Experiment::Thm2, Experiment::ThmA})
    if (experiment_name(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<SuiteRow> default_suite(double support_radius) {
  std::vector<SuiteRow> rows;
  const std::vector<std::pair<double, double>> exps{{2.0, 2.0}, {2.0, 3.0}, {3.0, 2.0}};
  for (double alpha : {0.0, 1.0}) {
    for (const auto& [p, q] : exps) {
      for (const std::string label : {"omega", "power-half", "lattice"}) {
        SuiteRow row;
        row.alpha = alpha;
        row.p = p;
        row.q = q;
        row.measure_label = label;
        if (label == "omega") {
          row.measure.type = "radial";
          row.measure.weight = WeightSpec::standard(alpha);
          row.measure.support_hi = support_radius;
        } else if (label == "power-half") {
          row.measure.type = "density";
          row.measure.a = 0.5;
          row.measure.support_hi = support_radius;
        } else {
          row.measure.type = "lattice_atoms";
          row.measure.lattice.r_max = support_radius;
        }
        std::ostringstream id;
        id << "a" << alpha << "-p" << p << "-q" << q << "-" << label;
        row.id = id.str();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<SuiteRow> experiment_rows(Experiment e, const std::vector<SuiteRow>& rows) {
  if (e != Experiment::Thm1iii) return rows;
  std::vector<SuiteRow> out;
  for (const auto& r : rows)
    if (r.q < r.p) out.push_back(r);
  return out;
}

Json windows_json(const WindowSet& w) {
  Json pairs = Json::object();
  for (const auto& [name, win] : w.pairs) pairs[name] = Json{{"lo", win.lo}, {"hi", win.hi}};
  return Json{{"version", w.version}, {"max_width", w.max_width}, {"scale_tolerance", w.scale_tolerance},
              {"pairs", pairs}};
}

WindowSet windows_from_json(const Json& j) {
  WindowSet w;
  try {
    w.version = j.at("version").get<int>();
    w.max_width = j.at("max_width").get<double>();
    w.scale_tolerance = j.value("scale_tolerance", 0.02);
    for (const auto& [name, win] : j.at("pairs").items())
      w.pairs[name] = Window{win.at("lo").get<double>(), win.at("hi").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("windows: ") + e.what());
  }
  return w;
}

WindowSet load_windows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open windows file " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("windows: ") + e.what());
  }
  return windows_from_json(j);
}

EquivalenceReport run_experiment(Experiment e, const std::vector<SuiteRow>& rows_in, const SuiteOptions& opt,
                                 const WindowSet* windows) {
  const auto t0 = Clock::now();
  const std::vector<SuiteRow> rows = experiment_rows(e, rows_in);
  bool need_lattice = false;
  for (const auto& r : rows) need_lattice = need_lattice || (r.q < r.p && e != Experiment::ThmA && e != Experiment::Thm2);
  const Lattice lattice = need_lattice ? generate_lattice(opt.lattice.s, opt.lattice.r, opt.lattice.cutoff) : Lattice{};

  EquivalenceReport rep;
  rep.experiment = experiment_name(e);
  rep.rows.resize(rows.size());
  parallel_for(rows.size(), [&](std::size_t i) { rep.rows[i] = run_row(e, rows[i], opt, lattice); });

  const double width_limit = windows && windows->max_width > 0.0 ? windows->max_width : std::log(50.0);
  const double scale_tol = windows ? windows->scale_tolerance : 0.02;
  rep.max_width = width_limit;
  std::map<std::string, PairStats> stats;
  std::vector<std::string> order;
  for (const auto& r : rep.rows) {
    for (const auto& [name, lr] : r.log_ratios) {
      if (!stats.count(name)) {
        order.push_back(name);
        stats[name].name = name;
      }
      stats[name].rows.push_back(r.row.id);
      stats[name].log_ratios.push_back(lr);
    }
    rep.max_scale_change = std::max(rep.max_scale_change, r.max_scale_change);
    rep.vanishing_ok = rep.vanishing_ok && r.vanishing_ok;
    rep.accuracy_ok = rep.accuracy_ok && r.accuracy_ok;
  }
  rep.scale_ok = !opt.rescale || rep.max_scale_change <= scale_tol;
  std::sort(order.begin(), order.end());
  for (const auto& name : order) {
    PairStats s = stats[name];
    const auto& v = s.log_ratios;
    bool finite = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / v.size();
    s.log_stdev = stdev(v, s.mean);
    s.width = s.max - s.min;
    s.gated = gated(e, name);
    s.width_ok = finite && s.width <= width_limit;
    if (windows) {
      auto it = windows->pairs.find(rep.experiment + ":" + name);
      if (it != windows->pairs.end()) {
        s.window = it->second;
        s.window_ok = finite && s.min >= it->second.lo && s.max <= it->second.hi;
      }
    }
    if (s.gated) {
      rep.width_ok = rep.width_ok && s.width_ok;
      rep.window_ok = rep.window_ok && s.window_ok;
    }
    rep.pairs.push_back(s);
  }
  rep.seconds = since(t0);
  return rep;
}

WindowSet windows_from_report(const EquivalenceReport& rep, double max_width) {
  WindowSet w;
  w.max_width = max_width;
  for (const auto& s : rep.pairs) {
    const double centre = 0.5 * (s.min + s.max);
    w.pairs[rep.experiment + ":" + s.name] = Window{centre - 0.5 * max_width, centre + 0.5 * max_width};
  }
  return w;
}

}  // namespace berglab
