#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "berglab/config.hpp"
#include "berglab/optimize.hpp"

namespace berglab {

enum class Experiment { Thm1, Thm1iii, Thm2, ThmA };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

/// One scenario of a family: standard weight alpha used for every weight slot.
struct SuiteRow {
  std::string id;
  double alpha = 0.0;
  double p = 2.0;
  double q = 2.0;
  std::string measure_label;
  MeasureSpec measure;
};

/// alpha in {0, 1} x (p, q) in {(2,2), (2,3), (3,2)} x mu in {omega dA, (1-|z|)^{1/2} dA,
/// lattice atoms}; densities are cut at support_radius so every operator is bounded.
std::vector<SuiteRow> default_suite(double support_radius = 0.9);

struct SuiteOptions {
  double r = 1.0;
  LatticeSpec lattice{0.5, 1.0, 1e-3};
  double gamma = 4.0;
  double scale = 3.0;              // rerun with c * mu
  bool rescale = true;
  bool vanishing = true;           // compact and identity checks per row
  double compact_radius = 0.7;
  std::vector<int> ks{0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
  OptimizerOptions opt;
};

struct Quantity {
  std::string name;
  double value = 0.0;
  double scaled = 0.0;             // value for c * mu divided by c
  bool converged = true;
};

struct RowResult {
  SuiteRow row;
  std::vector<Quantity> quantities;
  std::map<std::string, double> log_ratios;
  double max_scale_change = 0.0;   // relative change of every ratio under c * mu
  bool accuracy_ok = true;
  // vanishing checks
  std::string compact_profile;     // verdict of the M0 profile for mu cut at compact_radius (p <= q)
  std::string compact_F;           // F(k) verdict for the same measure
  double compact_F_rate = 0.0;
  std::string identity_profile;    // omega dA with exponents (p, p)
  std::string identity_F;
  bool vanishing_ok = true;
  double seconds = 0.0;
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct WindowSet {
  int version = 1;
  double max_width = 0.0;          // allowed spread of log ratios per pair
  double scale_tolerance = 0.02;
  std::map<std::string, Window> pairs;  // keyed "experiment:A/B"
};

WindowSet load_windows(const std::string& path);
Json windows_json(const WindowSet& w);
WindowSet windows_from_json(const Json& j);

struct PairStats {
  std::string name;
  std::vector<std::string> rows;
  std::vector<double> log_ratios;
  double min = 0.0, max = 0.0, mean = 0.0, log_stdev = 0.0, width = 0.0;
  std::optional<Window> window;
  bool gated = true;               // false: reported only
  bool width_ok = true;
  bool window_ok = true;
};

struct EquivalenceReport {
  std::string experiment;
  std::vector<RowResult> rows;
  std::vector<PairStats> pairs;
  double max_width = 0.0;
  double max_scale_change = 0.0;
  bool width_ok = true;
  bool window_ok = true;
  bool scale_ok = true;
  bool vanishing_ok = true;
  bool accuracy_ok = true;
  double seconds = 0.0;

  bool passed() const { return width_ok && window_ok && scale_ok && vanishing_ok; }
};

/// Rows of a family that apply to the experiment (q < p only for Thm1iii).
std::vector<SuiteRow> experiment_rows(Experiment e, const std::vector<SuiteRow>& rows);

EquivalenceReport run_experiment(Experiment e, const std::vector<SuiteRow>& rows, const SuiteOptions& opt,
                                 const WindowSet* windows = nullptr);

/// Windows centred on the observed log-ratio range, each of total width max_width.
WindowSet windows_from_report(const EquivalenceReport& rep, double max_width);

}  // namespace berglab
