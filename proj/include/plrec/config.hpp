#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plrec/quantum.hpp"
#include "plrec/resonance.hpp"
#include "plrec/spectrum.hpp"

namespace plrec {

// Experiment description parsed from a single JSON document. Unknown keys are
// rejected with the offending key echoed; `--set a.b=v` dotted overrides are
// applied to the document before parsing.
struct GridConfig {
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::optional<int> n_points;
};

struct RunConfig {
    std::optional<double> dt;
    std::optional<int> steps_per_period;   // drive period 2*pi
    std::optional<double> total_time;
    std::optional<double> periods;         // drive periods
    std::optional<int> sample_stride;
    std::optional<int> snapshot_stride;    // in samples; 0 = none
};

struct SpectrumConfig {
    int n_min = 0;
    int n_max = 20;
    bool numeric = false;
    std::optional<int> n_levels;
};

struct SweepConfig {
    std::string parameter;          // dotted path, e.g. "drive.lambda"
    std::vector<double> values;
};

struct OutputConfig {
    std::string trajectory = "trajectory.csv";
    std::string report = "report.json";
    std::string snapshots;          // empty = no snapshot file
};

struct ExperimentConfig {
    PotentialSpec potential;
    double kbar = 1.0;
    double n_bar = 0.0;
    double sigma_n = 1.0;
    std::optional<DriveSpec> drive;
    DriveShape drive_shape = DriveShape::potential;
    std::optional<GridConfig> grid;
    RunConfig run;
    SpectrumConfig spectrum;
    std::optional<SweepConfig> sweep;
    OutputConfig outputs;

    nlohmann::ordered_json document;  // provenance echo
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path,
                                  const std::vector<std::string>& overrides);

// Applies one "dotted.path=value" override; the value is parsed as JSON when
// possible, kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Serialization helpers shared by the CLI and the report writer: every double
// is written with up to 17 significant digits, infinities as the string "inf"
// (JSON has no infinity literal).
std::string format_double(double value);
nlohmann::ordered_json json_number(double value);

}  // namespace plrec
