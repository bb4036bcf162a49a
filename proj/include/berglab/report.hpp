#pragma once

#include <string>

#include "berglab/carleson.hpp"
#include "berglab/config.hpp"
#include "berglab/suite.hpp"
#include "berglab/toeplitz.hpp"

namespace berglab {

/// Finite numbers as numbers, everything else as "inf", "-inf" or "nan".
Json number_json(double x);
Json complex_json_value(Complex z);

Json report_json(const CarlesonReport& r);
Json estimate_json(const NormEstimate& e);
Json spectral_json(const SpectralNorm& s);
Json compactness_json(const CompactnessProfile& c);
Json multi_json(const MultiEstimate& m);
/// Timings are left out so that reruns with one seed are byte-identical.
Json equivalence_json(const EquivalenceReport& r);

/// "x,value" rows of a profile (abscissa against values).
std::string profile_csv(const CarlesonReport& r);
/// "re,im,value" rows of the evaluation points.
std::string points_csv(const CarlesonReport& r);
std::string compactness_csv(const CompactnessProfile& c);
/// One line per scenario and pair with the log ratio and its change under scaling.
std::string suite_csv(const EquivalenceReport& r);

std::string dump_json(const Json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace berglab
