#include "plrec/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "plrec/errors.hpp"

namespace plrec {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw ConfigError("config: '" + where + "' must be an object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("config: unknown key '" + where + item.key() + "'");
        }
    }
}

template <typename T>
T require(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError("config: missing required key '" + where + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value type for '" + where + key + "'");
    }
}

template <typename T>
std::optional<T> maybe(const json& obj, const std::string& where,
                       const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value type for '" + where + key + "'");
    }
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    reject_unknown_keys(doc, "", {"potential", "kbar", "n_bar", "sigma_n", "drive",
                                  "grid", "run", "spectrum", "sweep", "outputs"});

    ExperimentConfig cfg;
    cfg.document = doc;

    if (!doc.contains("potential")) {
        throw ConfigError("config: missing required key 'potential'");
    }
    const json& pot = doc.at("potential");
    reject_unknown_keys(pot, "potential.", {"V0", "k", "gamma", "domain"});
    const auto domain_name =
        maybe<std::string>(pot, "potential.", "domain").value_or("symmetric");
    DomainKind domain;
    try {
        domain = domain_kind_from_string(domain_name);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const int gamma = maybe<int>(pot, "potential.", "gamma").value_or(-1);
    try {
        cfg.potential = make_potential(require<double>(pot, "potential.", "V0"),
                                       require<double>(pot, "potential.", "k"),
                                       domain, gamma);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    cfg.kbar = maybe<double>(doc, "", "kbar").value_or(1.0);
    if (!(cfg.kbar > 0.0)) throw ConfigError("config: kbar must be positive");
    cfg.n_bar = maybe<double>(doc, "", "n_bar").value_or(0.0);
    cfg.sigma_n = maybe<double>(doc, "", "sigma_n").value_or(1.0);

    if (doc.contains("drive")) {
        const json& drv = doc.at("drive");
        reject_unknown_keys(drv, "drive.", {"lambda", "V", "N", "shape"});
        DriveSpec drive;
        drive.lambda = require<double>(drv, "drive.", "lambda");
        drive.V_coupling = maybe<double>(drv, "drive.", "V").value_or(0.0);
        drive.N = maybe<int>(drv, "drive.", "N").value_or(1);
        try {
            drive.validate();
            cfg.drive_shape = drive_shape_from_string(
                maybe<std::string>(drv, "drive.", "shape").value_or("potential"));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.drive = drive;
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown_keys(g, "grid.", {"x_min", "x_max", "n_points"});
        GridConfig gc;
        gc.x_min = maybe<double>(g, "grid.", "x_min");
        gc.x_max = maybe<double>(g, "grid.", "x_max");
        gc.n_points = maybe<int>(g, "grid.", "n_points");
        cfg.grid = gc;
    }

    if (doc.contains("run")) {
        const json& r = doc.at("run");
        reject_unknown_keys(r, "run.",
                            {"dt", "steps_per_period", "total_time", "periods",
                             "sample_stride", "snapshot_stride"});
        cfg.run.dt = maybe<double>(r, "run.", "dt");
        cfg.run.steps_per_period = maybe<int>(r, "run.", "steps_per_period");
        cfg.run.total_time = maybe<double>(r, "run.", "total_time");
        cfg.run.periods = maybe<double>(r, "run.", "periods");
        cfg.run.sample_stride = maybe<int>(r, "run.", "sample_stride");
        cfg.run.snapshot_stride = maybe<int>(r, "run.", "snapshot_stride");
        if (cfg.run.dt && cfg.run.steps_per_period) {
            throw ConfigError("config: give either 'run.dt' or 'run.steps_per_period'");
        }
        if (cfg.run.total_time && cfg.run.periods) {
            throw ConfigError("config: give either 'run.total_time' or 'run.periods'");
        }
    }

    if (doc.contains("spectrum")) {
        const json& s = doc.at("spectrum");
        reject_unknown_keys(s, "spectrum.", {"n_min", "n_max", "numeric", "n_levels"});
        cfg.spectrum.n_min = maybe<int>(s, "spectrum.", "n_min").value_or(0);
        cfg.spectrum.n_max = maybe<int>(s, "spectrum.", "n_max").value_or(20);
        cfg.spectrum.numeric = maybe<bool>(s, "spectrum.", "numeric").value_or(false);
        cfg.spectrum.n_levels = maybe<int>(s, "spectrum.", "n_levels");
        if (cfg.spectrum.n_min < 0 || cfg.spectrum.n_max < cfg.spectrum.n_min) {
            throw ConfigError("config: need 0 <= spectrum.n_min <= spectrum.n_max");
        }
    }

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        reject_unknown_keys(s, "sweep.", {"parameter", "values"});
        SweepConfig sweep;
        sweep.parameter = require<std::string>(s, "sweep.", "parameter");
        sweep.values = require<std::vector<double>>(s, "sweep.", "values");
        if (sweep.values.empty()) throw ConfigError("config: sweep.values is empty");
        cfg.sweep = sweep;
    }

    if (doc.contains("outputs")) {
        const json& o = doc.at("outputs");
        reject_unknown_keys(o, "outputs.", {"trajectory", "report", "snapshots"});
        cfg.outputs.trajectory =
            maybe<std::string>(o, "outputs.", "trajectory").value_or("trajectory.csv");
        cfg.outputs.report =
            maybe<std::string>(o, "outputs.", "report").value_or("report.json");
        cfg.outputs.snapshots =
            maybe<std::string>(o, "outputs.", "snapshots").value_or("");
    }

    return cfg;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("config: override '" + assignment + "' is not key=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception&) {
        value = raw;  // unquoted strings pass through
    }

    json* node = &doc;
    std::stringstream keys(path);
    std::string key, next;
    if (!std::getline(keys, key, '.')) {
        throw ConfigError("config: empty override path");
    }
    while (std::getline(keys, next, '.')) {
        node = &(*node)[key];
        key = next;
    }
    (*node)[key] = value;
}

ExperimentConfig load_config_file(const std::string& path,
                                  const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in '" + path + "': " + e.what());
    }
    for (const auto& assignment : overrides) apply_override(doc, assignment);
    return parse_config(doc);
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

nlohmann::ordered_json json_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

}  // namespace plrec
