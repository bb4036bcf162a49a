#include "berglab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace berglab {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json meta_json(const std::vector<std::pair<std::string, double>>& meta) {
  Json j = Json::object();
  for (const auto& [k, v] : meta) j[k] = number_json(v);
  return j;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

}  // namespace

Json number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json complex_json_value(Complex z) { return Json::array({number_json(z.real()), number_json(z.imag())}); }

Json report_json(const CarlesonReport& r) {
  Json j{{"kind", r.kind},
         {"value", number_json(r.value)},
         {"witness", complex_json_value(r.witness)},
         {"converged", r.converged},
         {"diverging", r.diverging},
         {"meta", meta_json(r.meta)}};
  if (!r.verdict.empty()) j["verdict"] = r.verdict;
  if (!r.abscissa.empty()) {
    j["abscissa"] = numbers(r.abscissa);
    j["values"] = numbers(r.values);
  }
  if (!r.partial_norms.empty()) j["partial_norms"] = numbers(r.partial_norms);
  j["points"] = r.points.size();
  return j;
}

Json estimate_json(const NormEstimate& e) {
  Json w;
  to_json(w, FunctionSpec::from(e.witness));
  return Json{{"value", number_json(e.value)},
              {"working_value", number_json(e.working_value)},
              {"method", e.method},
              {"lower_bound", e.lower_bound},
              {"converged", e.converged},
              {"budget_exhausted", e.budget_exhausted},
              {"budget_used", e.budget_used},
              {"basis_size", e.basis_size},
              {"witness", w}};
}

Json spectral_json(const SpectralNorm& s) {
  Json j = estimate_json(s.estimate);
  j["recommended_basis_size"] = s.recommended;
  j["last_change"] = number_json(s.last_change);
  return j;
}

Json compactness_json(const CompactnessProfile& c) {
  return Json{{"s", numbers(c.s)}, {"norms", numbers(c.norms)}, {"verdict", c.verdict}};
}

Json multi_json(const MultiEstimate& m) {
  Json j{{"estimate", estimate_json(m.estimate)}, {"lambda", number_json(m.lambda)}, {"product_weight", m.product.label()}};
  if (m.reference.method.size()) j["reference"] = estimate_json(m.reference);
  j["ratio"] = m.reference.value > 0.0 ? number_json(m.estimate.value / m.reference.value) : Json(nullptr);
  return j;
}

Json equivalence_json(const EquivalenceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json qs = Json::object();
    for (const auto& q : row.quantities)
      qs[q.name] = Json{{"value", number_json(q.value)}, {"scaled", number_json(q.scaled)}, {"converged", q.converged}};
    Json lr = Json::object();
    for (const auto& [k, v] : row.log_ratios) lr[k] = number_json(v);
    Json jr{{"id", row.row.id},
            {"alpha", row.row.alpha},
            {"p", row.row.p},
            {"q", row.row.q},
            {"measure", row.row.measure_label},
            {"quantities", qs},
            {"log_ratios", lr},
            {"max_scale_change", number_json(row.max_scale_change)},
            {"accuracy_ok", row.accuracy_ok}};
    if (!row.compact_F.empty()) {
      jr["vanishing"] = Json{{"compact_profile", row.compact_profile},
                             {"compact_F", row.compact_F},
                             {"compact_F_rate", number_json(row.compact_F_rate)},
                             {"identity_profile", row.identity_profile},
                             {"identity_F", row.identity_F},
                             {"ok", row.vanishing_ok}};
    }
    rows.push_back(jr);
  }
  Json pairs = Json::array();
  for (const auto& s : r.pairs) {
    Json jp{{"name", s.name},
            {"min", number_json(s.min)},
            {"max", number_json(s.max)},
            {"mean", number_json(s.mean)},
            {"log_stdev", number_json(s.log_stdev)},
            {"width", number_json(s.width)},
            {"gated", s.gated},
            {"width_ok", s.width_ok},
            {"window_ok", s.window_ok}};
    if (s.window) jp["window"] = Json::array({s.window->lo, s.window->hi});
    pairs.push_back(jp);
  }
  return Json{{"experiment", r.experiment},
              {"rows", rows},
              {"pairs", pairs},
              {"max_width", number_json(r.max_width)},
              {"max_scale_change", number_json(r.max_scale_change)},
              {"width_ok", r.width_ok},
              {"window_ok", r.window_ok},
              {"scale_ok", r.scale_ok},
              {"vanishing_ok", r.vanishing_ok},
              {"accuracy_ok", r.accuracy_ok},
              {"passed", r.passed()}};
}

std::string profile_csv(const CarlesonReport& r) {
  std::ostringstream out;
  out << "x,value\n";
  for (std::size_t i = 0; i < r.abscissa.size() && i < r.values.size(); ++i)
    out << num(r.abscissa[i]) << ',' << num(r.values[i]) << '\n';
  return out.str();
}

std::string points_csv(const CarlesonReport& r) {
  std::ostringstream out;
  out << "re,im,value\n";
  for (std::size_t i = 0; i < r.points.size() && i < r.values.size(); ++i)
    out << num(r.points[i].real()) << ',' << num(r.points[i].imag()) << ',' << num(r.values[i]) << '\n';
  return out.str();
}

std::string compactness_csv(const CompactnessProfile& c) {
  std::ostringstream out;
  out << "s,norm\n";
  for (std::size_t i = 0; i < c.s.size(); ++i) out << num(c.s[i]) << ',' << num(c.norms[i]) << '\n';
  return out.str();
}

std::string suite_csv(const EquivalenceReport& r) {
  std::ostringstream out;
  out << "id,alpha,p,q,measure,pair,log_ratio,ratio,max_scale_change\n";
  for (const auto& row : r.rows) {
    for (const auto& [name, lr] : row.log_ratios) {
      out << row.row.id << ',' << num(row.row.alpha) << ',' << num(row.row.p) << ',' << num(row.row.q) << ','
          << row.row.measure_label << ',' << name << ',' << num(lr) << ',' << num(std::exp(lr)) << ','
          << num(row.max_scale_change) << '\n';
    }
  }
  return out.str();
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace berglab
