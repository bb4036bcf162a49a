#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "berglab/geometry.hpp"
#include "berglab/kernel.hpp"
#include "berglab/measures.hpp"
#include "berglab/weights.hpp"

namespace berglab {

using Json = nlohmann::json;

/// {"type":"standard","alpha":a} | {"type":"power","c":c,"a":a,"b":b} | {"type":"table","r":[...],"w":[...]}
struct WeightSpec {
  std::string type = "standard";
  double alpha = 0.0;
  double c = 1.0, a = 0.0, b = 0.0;
  std::vector<double> r, w;

  RadialWeight build() const;
  static WeightSpec standard(double alpha);
};

/// Atoms of measure (1 - |z|)^mass_exponent at the points of a lattice with r_min <= |z| <= r_max.
struct LatticeAtomsSpec {
  double s = 0.5;
  double r = 1.0;
  double r_min = 0.0;
  double r_max = 0.9;
  double mass_exponent = 2.0;
};

/// atomic | radial | density (name "power": (1-|z|)^a dA) | lattice_atoms, with optional
/// "scale" and "support":[lo,hi].
struct MeasureSpec {
  std::string type = "radial";
  std::vector<Complex> points;
  std::vector<double> masses;
  WeightSpec weight;
  std::string name = "power";
  double a = 0.5;
  LatticeAtomsSpec lattice;
  double scale = 1.0;
  double support_lo = 0.0;
  double support_hi = 1.0;

  Measure build() const;
};

/// {"type":"monomial","coeffs":[[re,im],...]} | {"type":"atoms","atoms":[{"a":[re,im],"c":[re,im],"gamma":g},...],
/// "coeffs":[...]} where the optional coeffs add a polynomial part.
struct FunctionSpec {
  std::string type = "monomial";
  std::vector<Complex> coeffs;
  std::vector<KernelAtom> atoms;

  AnalyticFunction build() const;
  static FunctionSpec from(const AnalyticFunction& f);
};

struct ExponentSpec {
  WeightSpec weight;
  double p = 2.0;
  double q = 2.0;
};

struct LatticeSpec {
  double s = 0.5;
  double r = 1.0;
  double cutoff = 1e-3;
};

struct Scenario {
  std::string id = "scenario";
  WeightSpec omega;
  std::optional<WeightSpec> eta;      // defaults to omega
  std::optional<WeightSpec> upsilon;  // defaults to omega
  double p = 2.0;
  double q = 2.0;
  std::vector<ExponentSpec> specs;    // multi-function experiments
  MeasureSpec measure;
  double r = 1.0;
  LatticeSpec lattice;
  double gamma = 4.0;
  std::size_t budget = 1500;
  std::uint64_t seed = 20240611;
  int restarts = 2;
  std::vector<double> radii;          // empty = defaults of each operation
  std::vector<double> s_list;
  std::vector<int> ks;
  std::optional<FunctionSpec> function;

  RadialWeight omega_weight() const { return omega.build(); }
  RadialWeight eta_weight() const { return (eta ? *eta : omega).build(); }
  RadialWeight upsilon_weight() const { return (upsilon ? *upsilon : omega).build(); }
};

void to_json(Json& j, const WeightSpec& s);
void from_json(const Json& j, WeightSpec& s);
void to_json(Json& j, const MeasureSpec& s);
void from_json(const Json& j, MeasureSpec& s);
void to_json(Json& j, const FunctionSpec& s);
void from_json(const Json& j, FunctionSpec& s);
void to_json(Json& j, const Scenario& s);
void from_json(const Json& j, Scenario& s);

/// Accepts {"scenario": {...}} or the bare scenario object. Throws ConfigError.
Scenario parse_scenario(const Json& j);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);
/// {"scenario": {...}} with every field explicit.
Json scenario_json(const Scenario& s);

}  // namespace berglab
