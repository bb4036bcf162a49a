#include "berglab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace berglab {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex numbers are written [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

template <class T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(std::string(what) + ": unknown field '" + it.key() + "'");
  }
}

}  // namespace

WeightSpec WeightSpec::standard(double alpha) {
  WeightSpec s;
  s.alpha = alpha;
  return s;
}

RadialWeight WeightSpec::build() const {
  try {
    if (type == "standard") return RadialWeight::standard(alpha);
    if (type == "power") return RadialWeight::power(c, a, b);
    if (type == "table") return RadialWeight::table(r, w);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("weight: ") + e.what());
  }
  throw ConfigError("weight: unknown type '" + type + "'");
}

void to_json(Json& j, const WeightSpec& s) {
  if (s.type == "standard") {
    j = Json{{"type", "standard"}, {"alpha", s.alpha}};
  } else if (s.type == "power") {
    j = Json{{"type", "power"}, {"c", s.c}, {"a", s.a}, {"b", s.b}};
  } else {
    j = Json{{"type", s.type}, {"r", s.r}, {"w", s.w}};
  }
}

void from_json(const Json& j, WeightSpec& s) {
  if (!j.is_object()) throw ConfigError("weight: expected an object");
  s = WeightSpec{};
  s.type = j.value("type", std::string("standard"));
  if (s.type == "standard") {
    reject_unknown(j, {"type", "alpha"}, "weight");
    read_opt(j, "alpha", s.alpha);
  } else if (s.type == "power") {
    reject_unknown(j, {"type", "c", "a", "b"}, "weight");
    read_opt(j, "c", s.c);
    read_opt(j, "a", s.a);
    read_opt(j, "b", s.b);
  } else if (s.type == "table") {
    reject_unknown(j, {"type", "r", "w"}, "weight");
    s.r = j.at("r").get<std::vector<double>>();
    s.w = j.at("w").get<std::vector<double>>();
  } else {
    throw ConfigError("weight: unknown type '" + s.type + "'");
  }
}

Measure MeasureSpec::build() const {
  Measure mu;
  try {
    if (type == "atomic") {
      mu = Measure::atomic(points, masses);
    } else if (type == "radial") {
      mu = Measure::radial(weight.build());
    } else if (type == "density") {
      if (name != "power") throw ConfigError("measure: unknown density '" + name + "'");
      mu = Measure::power(a);
    } else if (type == "lattice_atoms") {
      if (!(lattice.r_max < 1.0)) throw ConfigError("measure: lattice_atoms needs r_max < 1");
      const double cutoff = std::min(1e-3, 0.5 * (1.0 - lattice.r_max));
      const Lattice lat = generate_lattice(lattice.s, lattice.r, cutoff);
      std::vector<Complex> pts;
      std::vector<double> ms;
      for (Complex z : lat.points) {
        const double m = std::abs(z);
        if (m < lattice.r_min || m > lattice.r_max) continue;
        pts.push_back(z);
        ms.push_back(std::pow(1.0 - m, lattice.mass_exponent));
      }
      mu = Measure::atomic(pts, ms);
    } else {
      throw ConfigError("measure: unknown type '" + type + "'");
    }
    if (support_lo > 0.0 || support_hi < 1.0) mu = mu.restrict(support_lo, support_hi);
    if (scale != 1.0) mu = mu.scale(scale);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
  return mu;
}

void to_json(Json& j, const MeasureSpec& s) {
  j = Json{{"type", s.type}};
  if (s.type == "atomic") {
    Json pts = Json::array();
    for (Complex z : s.points) pts.push_back(complex_json(z));
    j["points"] = pts;
    j["masses"] = s.masses;
  } else if (s.type == "radial") {
    j["weight"] = s.weight;
  } else if (s.type == "density") {
    j["name"] = s.name;
    j["a"] = s.a;
  } else if (s.type == "lattice_atoms") {
    j["s"] = s.lattice.s;
    j["r"] = s.lattice.r;
    j["r_min"] = s.lattice.r_min;
    j["r_max"] = s.lattice.r_max;
    j["mass_exponent"] = s.lattice.mass_exponent;
  }
  j["scale"] = s.scale;
  j["support"] = Json::array({s.support_lo, s.support_hi});
}

void from_json(const Json& j, MeasureSpec& s) {
  if (!j.is_object()) throw ConfigError("measure: expected an object");
  s = MeasureSpec{};
  s.type = j.at("type").get<std::string>();
  if (s.type == "atomic") {
    reject_unknown(j, {"type", "points", "masses", "scale", "support"}, "measure");
    for (const auto& p : j.at("points")) s.points.push_back(complex_from(p));
    s.masses = j.at("masses").get<std::vector<double>>();
    if (s.points.size() != s.masses.size()) throw ConfigError("measure: points and masses differ in length");
  } else if (s.type == "radial") {
    reject_unknown(j, {"type", "weight", "scale", "support"}, "measure");
    s.weight = j.at("weight").get<WeightSpec>();
  } else if (s.type == "density") {
    reject_unknown(j, {"type", "name", "a", "scale", "support"}, "measure");
    s.name = j.value("name", std::string("power"));
    read_opt(j, "a", s.a);
  } else if (s.type == "lattice_atoms") {
    reject_unknown(j, {"type", "s", "r", "r_min", "r_max", "mass_exponent", "scale", "support"}, "measure");
    read_opt(j, "s", s.lattice.s);
    read_opt(j, "r", s.lattice.r);
    read_opt(j, "r_min", s.lattice.r_min);
    read_opt(j, "r_max", s.lattice.r_max);
    read_opt(j, "mass_exponent", s.lattice.mass_exponent);
  } else {
    throw ConfigError("measure: unknown type '" + s.type + "'");
  }
  read_opt(j, "scale", s.scale);
  if (j.contains("support")) {
    const auto& sup = j.at("support");
    if (!sup.is_array() || sup.size() != 2) throw ConfigError("measure: support is [lo, hi]");
    s.support_lo = sup.at(0).get<double>();
    s.support_hi = sup.at(1).get<double>();
  }
  if (!(s.scale > 0.0)) throw ConfigError("measure: scale must be positive");
}

AnalyticFunction FunctionSpec::build() const {
  if (type == "monomial") return AnalyticFunction::monomials(coeffs);
  if (type == "atoms") {
    for (const auto& at : atoms)
      if (!(std::abs(at.a) < 1.0)) throw ConfigError("function: atom centers must lie in the disk");
    AnalyticFunction f = AnalyticFunction::atoms(atoms);
    if (!coeffs.empty()) f += AnalyticFunction::monomials(coeffs);
    return f;
  }
  throw ConfigError("function: unknown type '" + type + "'");
}

FunctionSpec FunctionSpec::from(const AnalyticFunction& f) {
  FunctionSpec s;
  if (f.is_polynomial()) {
    s.type = "monomial";
    s.coeffs = f.coeffs();
  } else {
    s.type = "atoms";
    s.atoms = f.atom_list();
    s.coeffs = f.coeffs();
  }
  return s;
}

void to_json(Json& j, const FunctionSpec& s) {
  j = Json{{"type", s.type}};
  if (s.type == "monomial") {
    Json c = Json::array();
    for (Complex z : s.coeffs) c.push_back(complex_json(z));
    j["coeffs"] = c;
  } else {
    Json a = Json::array();
    for (const auto& at : s.atoms) a.push_back(Json{{"a", complex_json(at.a)}, {"c", complex_json(at.c)}, {"gamma", at.gamma}});
    j["atoms"] = a;
    if (!s.coeffs.empty()) {
      Json c = Json::array();
      for (Complex z : s.coeffs) c.push_back(complex_json(z));
      j["coeffs"] = c;
    }
  }
}

void from_json(const Json& j, FunctionSpec& s) {
  if (!j.is_object()) throw ConfigError("function: expected an object");
  s = FunctionSpec{};
  s.type = j.at("type").get<std::string>();
  if (s.type == "monomial") {
    for (const auto& c : j.at("coeffs")) s.coeffs.push_back(complex_from(c));
  } else if (s.type == "atoms") {
    for (const auto& a : j.at("atoms")) {
      KernelAtom at;
      at.a = complex_from(a.at("a"));
      if (a.contains("c")) at.c = complex_from(a.at("c"));
      at.gamma = a.value("gamma", 4.0);
      s.atoms.push_back(at);
    }
    if (j.contains("coeffs"))
      for (const auto& c : j.at("coeffs")) s.coeffs.push_back(complex_from(c));
  } else {
    throw ConfigError("function: unknown type '" + s.type + "'");
  }
}

void to_json(Json& j, const Scenario& s) {
  j = Json::object();
  j["id"] = s.id;
  Json w{{"omega", s.omega}};
  if (s.eta) w["eta"] = *s.eta;
  if (s.upsilon) w["upsilon"] = *s.upsilon;
  j["weights"] = w;
  j["p"] = s.p;
  j["q"] = s.q;
  Json specs = Json::array();
  for (const auto& e : s.specs) specs.push_back(Json{{"weight", e.weight}, {"p", e.p}, {"q", e.q}});
  j["specs"] = specs;
  j["measure"] = s.measure;
  j["r"] = s.r;
  j["lattice"] = Json{{"s", s.lattice.s}, {"r", s.lattice.r}, {"cutoff", s.lattice.cutoff}};
  j["gamma"] = s.gamma;
  j["budget"] = s.budget;
  j["seed"] = s.seed;
  j["restarts"] = s.restarts;
  j["radii"] = s.radii;
  j["s_list"] = s.s_list;
  j["ks"] = s.ks;
  if (s.function) j["function"] = *s.function;
}

void from_json(const Json& j, Scenario& s) {
  if (!j.is_object()) throw ConfigError("scenario: expected an object");
  reject_unknown(j, {"id", "weights", "p", "q", "specs", "measure", "r", "lattice", "gamma", "budget", "seed",
                     "restarts", "radii", "s_list", "ks", "function"},
                 "scenario");
  s = Scenario{};
  read_opt(j, "id", s.id);
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    reject_unknown(w, {"omega", "eta", "upsilon"}, "weights");
    if (w.contains("omega")) s.omega = w.at("omega").get<WeightSpec>();
    if (w.contains("eta")) s.eta = w.at("eta").get<WeightSpec>();
    if (w.contains("upsilon")) s.upsilon = w.at("upsilon").get<WeightSpec>();
  }
  read_opt(j, "p", s.p);
  read_opt(j, "q", s.q);
  if (j.contains("specs")) {
    for (const auto& e : j.at("specs")) {
      ExponentSpec x;
      if (e.contains("weight")) x.weight = e.at("weight").get<WeightSpec>();
      read_opt(e, "p", x.p);
      read_opt(e, "q", x.q);
      s.specs.push_back(x);
    }
  }
  if (j.contains("measure")) s.measure = j.at("measure").get<MeasureSpec>();
  read_opt(j, "r", s.r);
  if (j.contains("lattice")) {
    const auto& l = j.at("lattice");
    read_opt(l, "s", s.lattice.s);
    read_opt(l, "r", s.lattice.r);
    read_opt(l, "cutoff", s.lattice.cutoff);
  }
  read_opt(j, "gamma", s.gamma);
  read_opt(j, "budget", s.budget);
  read_opt(j, "seed", s.seed);
  read_opt(j, "restarts", s.restarts);
  read_opt(j, "radii", s.radii);
  read_opt(j, "s_list", s.s_list);
  read_opt(j, "ks", s.ks);
  if (j.contains("function")) s.function = j.at("function").get<FunctionSpec>();
  if (!(s.p > 0.0 && s.q > 0.0)) throw ConfigError("scenario: p and q must be positive");
  if (!(s.r > 0.0)) throw ConfigError("scenario: r must be positive");
}

Scenario parse_scenario(const Json& j) {
  try {
    if (j.is_object() && j.contains("scenario")) {
      if (j.size() != 1) throw ConfigError("config: only the 'scenario' key is allowed at top level");
      return j.at("scenario").get<Scenario>();
    }
    return j.get<Scenario>();
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

Scenario parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

Json scenario_json(const Scenario& s) { return Json{{"scenario", s}}; }

}  // namespace berglab
