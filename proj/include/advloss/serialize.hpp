#pragma once

// File formats: JSON for structured objects, CSV for tabular data, SVG for
// the log-log risk plots. All JSON documents carry "schema_version": 1.

#include <filesystem>
#include <string>

#include "advloss/bounds.hpp"
#include "advloss/dataset.hpp"
#include "advloss/density.hpp"
#include "advloss/montecarlo.hpp"

namespace advloss::serialize {

inline constexpr int kSchemaVersion = 1;

// SeriesDensity <-> {"schema_version", "d", "basis", "coeffs": [[[z...], c]]}
std::string density_to_json(const density::SeriesDensity& p);
density::SeriesDensity density_from_json(const std::string& text);

// Dataset <-> CSV with header "x1,...,xd". Values must lie in [0,1];
// offending rows are reported by number.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);

// ExperimentConfig from JSON (schema checked; see README for the fields).
montecarlo::ExperimentConfig experiment_config_from_json(
    const std::string& text);
std::string experiment_config_to_json(const montecarlo::ExperimentConfig& cfg);

// RiskCurve outputs: CSV (n, mean_risk, stderr, replications), a JSON
// summary {slope, intercept, residual_rms}, and a log-log SVG plot.
std::string risk_curve_to_csv(const montecarlo::RiskCurve& curve);
std::string risk_curve_summary_json(const montecarlo::RiskCurve& curve,
                                    const std::string& regime);
std::string risk_curve_to_svg(const montecarlo::RiskCurve& curve,
                              const std::string& title);

std::string upper_bound_to_json(const bounds::UpperBoundReport& rep);
std::string lower_bound_to_json(const bounds::LowerBoundReport& rep);
std::string rate_to_json(const bounds::RateSpec& rate);

// File helpers. Reading a missing file throws input_error naming the path;
// write failures throw std::runtime_error (an OS-level problem, not bad
// input).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace advloss::serialize
