// plrec — recurrence time scales of periodically driven power-law wells.
//
// Subcommands: spectrum, times, mathieu, evolve, sweep. One JSON config via
// --config, dotted overrides via --set key=value. Exit codes: 0 success,
// 2 config error, 3 numerical/singularity error, 4 no recurrence detected.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "plrec/analysis.hpp"
#include "plrec/config.hpp"
#include "plrec/errors.hpp"
#include "plrec/quantum.hpp"
#include "plrec/recurrence.hpp"
#include "plrec/resonance.hpp"
#include "plrec/spectrum.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace plrec;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoRecurrence = 4;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    std::string format;
    int jobs = 1;
};

Grid grid_from_config(const ExperimentConfig& cfg, int n_levels) {
    if (cfg.grid && cfg.grid->x_max) {
        Grid grid;
        grid.x_max = *cfg.grid->x_max;
        grid.x_min = cfg.grid->x_min.value_or(
            cfg.potential.domain == DomainKind::truncated ? 0.0 : -grid.x_max);
        grid.n_points = cfg.grid->n_points.value_or(512);
        grid.validate(cfg.potential.domain);
        return grid;
    }
    Grid grid = auto_grid(cfg.potential, cfg.kbar, n_levels,
                          cfg.grid && cfg.grid->n_points ? *cfg.grid->n_points : 256);
    if (cfg.grid && cfg.grid->n_points) grid.n_points = *cfg.grid->n_points;
    return grid;
}

ordered_json times_to_json(const ExperimentConfig& cfg) {
    const SpectrumModel model =
        build_spectrum_model(cfg.potential, cfg.kbar, cfg.n_bar);
    ordered_json out;
    out["k"] = cfg.potential.exponent_k;
    out["rho"] = cfg.potential.rho();
    out["kbar"] = cfg.kbar;
    out["n_bar"] = cfg.n_bar;
    out["E_nbar"] = json_number(model.E_nbar);
    out["omega"] = json_number(model.omega);
    out["zeta"] = json_number(model.zeta);
    if (cfg.drive) {
        const RecurrenceTimes t = driven_times(model, *cfg.drive);
        out["regime"] = to_string(t.regime);
        out["zeta_sign"] = t.zeta_sign;
        out["T0_cl"] = json_number(t.T0_cl);
        out["T0_Q"] = json_number(t.T0_Q);
        out["Delta"] = json_number(t.Delta);
        out["mu"] = json_number(t.mu);
        out["M0_cl"] = json_number(t.M0_cl);
        out["M0_Q"] = json_number(t.M0_Q);
        out["Tlam_cl"] = json_number(t.Tlam_cl);
        out["Tlam_Q"] = json_number(t.Tlam_Q);
        const SumRuleResiduals res = sum_rule_check(model, *cfg.drive);
        out["sum_rule_tight_residual"] = json_number(res.tight);
        out["sum_rule_loose_residual"] = json_number(res.loose);
    } else {
        const UndrivenTimes t = undriven_times(model);
        out["regime"] = to_string(t.regime);
        out["zeta_sign"] = t.zeta_sign;
        out["T0_cl"] = json_number(t.T0_cl);
        out["T0_Q"] = json_number(t.T0_Q);
    }
    return out;
}

int cmd_times(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config_file(args.config_path, args.overrides);
    const ordered_json out = times_to_json(cfg);
    if (args.format == "csv") {
        std::ostringstream header, row;
        bool first = true;
        for (const auto& item : out.items()) {
            if (!first) {
                header << ",";
                row << ",";
            }
            first = false;
            header << item.key();
            if (item.value().is_number_float()) {
                row << format_double(item.value().get<double>());
            } else if (item.value().is_string()) {
                row << item.value().get<std::string>();
            } else {
                row << item.value().dump();
            }
        }
        std::cout << header.str() << "\n" << row.str() << "\n";
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_spectrum(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config_file(args.config_path, args.overrides);
    const int n_min = cfg.spectrum.n_min;
    const int n_max = cfg.spectrum.n_max;

    std::vector<double> e_num;
    if (cfg.spectrum.numeric) {
        const int levels = cfg.spectrum.n_levels.value_or(n_max + 3);
        const Grid grid = grid_from_config(cfg, levels + 2);
        const EigenBasis basis = solve_eigen(cfg.potential, cfg.kbar, grid, levels);
        e_num.assign(basis.energies.data(), basis.energies.data() + levels);
    }

    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "n,E_wkb" << (cfg.spectrum.numeric ? ",E_numeric" : "") << ",dE_n\n";
    for (int n = n_min; n <= n_max; ++n) {
        const double e = wkb_energy(cfg.potential, cfg.kbar, n);
        ordered_json row;
        row["n"] = n;
        row["E_wkb"] = json_number(e);
        csv << n << "," << format_double(e);
        if (cfg.spectrum.numeric) {
            const double en = n < static_cast<int>(e_num.size())
                                  ? e_num[n]
                                  : std::numeric_limits<double>::quiet_NaN();
            row["E_numeric"] = json_number(en);
            csv << "," << format_double(en);
        }
        const double previous_level = n - 1 + cfg.potential.maslov_gamma / 4.0;
        if (previous_level > 0.0) {
            const double de = e - wkb_energy(cfg.potential, cfg.kbar, n - 1);
            row["dE_n"] = json_number(de);
            csv << "," << format_double(de) << "\n";
        } else {
            row["dE_n"] = nullptr;
            csv << ",\n";
        }
        rows.push_back(row);
    }
    if (args.format == "json") {
        std::cout << rows.dump(2) << "\n";
    } else {
        std::cout << csv.str();
    }
    return kExitOk;
}

int cmd_mathieu(double nu, double q, int basis) {
    const MathieuResult result = mathieu_char_value(nu, q, basis);
    ordered_json out;
    out["nu"] = result.nu;
    out["q"] = result.q;
    out["a_nu"] = json_number(result.a_nu);
    out["basis_size"] = result.basis_size;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

void write_snapshot(std::ofstream& out, const WaveState& state) {
    const int64_t n = state.grid.n_points;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    const double header[3] = {state.grid.x_min, state.grid.x_max, state.t};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (int j = 0; j < state.grid.n_points; ++j) {
        const double re = state.psi[j].real();
        const double im = state.psi[j].imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(re));
        out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

ordered_json report_to_json(const RecurrenceReport& report) {
    ordered_json out;
    out["T_cl_status"] = to_string(report.classical.status);
    out["T_cl_detected"] = json_number(report.classical.time);
    out["T_cl_uncertainty"] = json_number(report.classical.uncertainty);
    out["T_cl_peak_height"] = json_number(report.classical.height);
    out["T_Q_status"] = to_string(report.revival.status);
    out["T_Q_detected"] = json_number(report.revival.time);
    out["T_Q_uncertainty"] = json_number(report.revival.uncertainty);
    out["T_Q_peak_height"] = json_number(report.revival.height);
    out["mirror_reassigned"] = report.revival.mirror_reassigned;
    out["mirror_time"] = json_number(report.revival.mirror_time);
    out["mirror_height"] = json_number(report.revival.mirror_height);
    out["T_cl_predicted"] = json_number(report.T_cl_predicted);
    out["T_Q_predicted"] = json_number(report.T_Q_predicted);
    out["Tlam_cl_predicted"] = json_number(report.Tlam_cl_predicted);
    out["Tlam_Q_predicted"] = json_number(report.Tlam_Q_predicted);
    out["T_cl_relative_error"] = json_number(report.classical_relative_error);
    out["T_Q_relative_error"] = json_number(report.revival_relative_error);
    out["T_Q_prediction_infinite"] = report.revival_prediction_infinite;
    out["classical_shift_sign"] = report.classical_shift_sign;
    out["revival_shift_sign"] = report.revival_shift_sign;
    out["regime"] = to_string(report.regime);
    out["notes"] = report.notes;
    return out;
}

int cmd_evolve(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config_file(args.config_path, args.overrides);
    const SpectrumModel model =
        build_spectrum_model(cfg.potential, cfg.kbar, cfg.n_bar);
    const UndrivenTimes undriven = undriven_times(model);
    const int n_bar = static_cast<int>(std::lround(cfg.n_bar));

    const int levels =
        n_bar + std::max(static_cast<int>(std::ceil(6.5 * cfg.sigma_n)) + 3, 9);
    const Grid grid = grid_from_config(cfg, levels + 2);
    const EigenBasis basis = solve_eigen(cfg.potential, cfg.kbar, grid, levels);
    const WaveState packet = build_wavepacket(basis, n_bar, cfg.sigma_n);

    PropagationOptions opts;
    opts.shape = cfg.drive_shape;
    if (cfg.run.dt) {
        opts.dt = *cfg.run.dt;
    } else {
        const int steps_per_period = cfg.run.steps_per_period.value_or(512);
        if (steps_per_period < 200) {
            throw ConfigError("config: run.steps_per_period must be >= 200");
        }
        opts.dt = 2.0 * M_PI / steps_per_period;
    }
    double total_time;
    if (cfg.run.total_time) {
        total_time = *cfg.run.total_time;
    } else if (cfg.run.periods) {
        total_time = *cfg.run.periods * 2.0 * M_PI;
    } else {
        total_time = std::isinf(undriven.T0_Q) ? 12.0 * undriven.T0_cl
                                               : 1.35 * undriven.T0_Q;
    }
    opts.n_steps = static_cast<long>(std::ceil(total_time / opts.dt));
    opts.sample_stride = cfg.run.sample_stride.value_or(std::max(
        1, static_cast<int>(std::floor(undriven.T0_cl / (64.0 * opts.dt)))));

    const DriveSpec drive = cfg.drive.value_or(DriveSpec{0.0, 0.0, 1});

    std::filesystem::create_directories(args.out_dir);
    const auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(args.out_dir) / name).string();
    };

    Trajectory traj;
    const int snapshot_stride = cfg.run.snapshot_stride.value_or(0);
    if (!cfg.outputs.snapshots.empty() && snapshot_stride > 0) {
        // segmented run: one snapshot record at the end of each segment
        std::ofstream snap(out_path(cfg.outputs.snapshots), std::ios::binary);
        WaveState state = packet;
        write_snapshot(snap, state);
        long remaining = opts.n_steps;
        const long seg = static_cast<long>(snapshot_stride) * opts.sample_stride;
        PropagationOptions seg_opts = opts;
        bool first = true;
        while (remaining > 0) {
            seg_opts.t0 = state.t;
            seg_opts.n_steps = std::min(seg, remaining);
            Trajectory part =
                propagate(state, cfg.potential, drive, cfg.kbar, seg_opts, &packet);
            state = part.final_state;
            write_snapshot(snap, state);
            const size_t skip = first ? 0 : 1;  // segment start repeats the last sample
            traj.times.insert(traj.times.end(), part.times.begin() + skip,
                              part.times.end());
            traj.autocorr.insert(traj.autocorr.end(), part.autocorr.begin() + skip,
                                 part.autocorr.end());
            traj.norms.insert(traj.norms.end(), part.norms.begin() + skip,
                              part.norms.end());
            traj.max_norm_drift = std::max(traj.max_norm_drift, part.max_norm_drift);
            first = false;
            remaining -= seg_opts.n_steps;
        }
        traj.final_state = std::move(state);
    } else {
        traj = propagate(packet, cfg.potential, drive, cfg.kbar, opts);
    }

    const Autocorrelation ac = autocorrelate(traj);
    const PeakDetection classical = detect_classical_period(ac);
    const double hint =
        classical.status == DetectionStatus::found ? classical.time : undriven.T0_cl;

    RevivalDetection revival;
    const double t_end = ac.times.back();
    if (std::isinf(undriven.T0_Q) || t_end >= 1.3 * undriven.T0_Q) {
        revival = detect_revival(ac, hint);
    } else {
        revival.status = DetectionStatus::none;
    }

    RecurrenceReport report = compare(classical, revival, model, drive);
    if (!std::isinf(undriven.T0_Q) && t_end < 1.3 * undriven.T0_Q) {
        if (!report.notes.empty()) report.notes += "; ";
        report.notes += "run shorter than 1.3*T0_Q, revival search skipped";
    }

    {
        std::ofstream csv(out_path(cfg.outputs.trajectory));
        csv << "t,re_A,im_A,abs2_A,norm\n";
        for (size_t i = 0; i < traj.times.size(); ++i) {
            csv << format_double(traj.times[i]) << ","
                << format_double(traj.autocorr[i].real()) << ","
                << format_double(traj.autocorr[i].imag()) << ","
                << format_double(std::norm(traj.autocorr[i])) << ","
                << format_double(traj.norms[i]) << "\n";
        }
    }
    const ordered_json report_json = report_to_json(report);
    {
        std::ofstream rep(out_path(cfg.outputs.report));
        rep << report_json.dump(2) << "\n";
        std::ofstream meta(out_path("metadata.json"));
        ordered_json m;
        m["config"] = cfg.document;
        m["n_levels"] = levels;
        m["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max},
                     {"n_points", grid.n_points}};
        m["dt"] = json_number(opts.dt);
        m["n_steps"] = opts.n_steps;
        m["sample_stride"] = opts.sample_stride;
        m["max_norm_drift"] = json_number(traj.max_norm_drift);
        meta << m.dump(2) << "\n";
    }
    std::cout << report_json.dump(2) << "\n";

    const bool recurrence_found = classical.status == DetectionStatus::found ||
                                  revival.status == DetectionStatus::found;
    return recurrence_found ? kExitOk : kExitNoRecurrence;
}

int cmd_sweep(const CommonArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("config: cannot open '" + args.config_path + "'");
    json base;
    try {
        base = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    for (const auto& o : args.overrides) apply_override(base, o);
    const ExperimentConfig cfg = parse_config(base);
    if (!cfg.sweep) throw ConfigError("config: sweep requires a 'sweep' block");

    const auto run_point = [&](double value) -> ordered_json {
        json doc = base;
        apply_override(doc, cfg.sweep->parameter + "=" + format_double(value));
        ExperimentConfig point = parse_config(doc);
        ordered_json row = times_to_json(point);
        row.erase("sum_rule_tight_residual");
        row.erase("sum_rule_loose_residual");
        ordered_json out;
        out["parameter"] = cfg.sweep->parameter;
        out["value"] = json_number(value);
        for (auto& item : row.items()) out[item.key()] = item.value();
        return out;
    };

    // bounded concurrency, results gathered in input order
    const int jobs = std::max(1, args.jobs);
    std::vector<ordered_json> rows(cfg.sweep->values.size());
    for (size_t i = 0; i < cfg.sweep->values.size(); i += jobs) {
        std::vector<std::future<ordered_json>> batch;
        const size_t end = std::min(cfg.sweep->values.size(), i + jobs);
        for (size_t j = i; j < end; ++j) {
            batch.push_back(std::async(std::launch::async, run_point,
                                       cfg.sweep->values[j]));
        }
        for (size_t j = i; j < end; ++j) rows[j] = batch[j - i].get();
    }

    if (args.format == "json") {
        ordered_json all = ordered_json::array();
        for (auto& r : rows) all.push_back(r);
        std::cout << all.dump(2) << "\n";
        return kExitOk;
    }
    bool header_done = false;
    std::ostringstream csv;
    for (const auto& row : rows) {
        if (!header_done) {
            bool first = true;
            for (const auto& item : row.items()) {
                csv << (first ? "" : ",") << item.key();
                first = false;
            }
            csv << "\n";
            header_done = true;
        }
        bool first = true;
        for (const auto& item : row.items()) {
            csv << (first ? "" : ",");
            first = false;
            if (item.value().is_number_float()) {
                csv << format_double(item.value().get<double>());
            } else if (item.value().is_string()) {
                csv << item.value().get<std::string>();
            } else {
                csv << item.value().dump();
            }
        }
        csv << "\n";
    }
    std::cout << csv.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recurrence time scales in periodically driven power-law wells"};
    app.require_subcommand(1);

    CommonArgs args;
    double nu = 0.0, q = 0.0;
    int basis = 0;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", args.config_path, "JSON config file");
        if (needs_config) opt->required();
        sub->add_option("--set", args.overrides, "dotted overrides key=value");
        sub->add_option("--out-dir", args.out_dir, "output directory");
        sub->add_option("--jobs", args.jobs, "max concurrent sweep points");
        sub->add_option("--format", args.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* spectrum = app.add_subcommand("spectrum", "WKB (and numeric) level table");
    add_common(spectrum, true);
    auto* times = app.add_subcommand("times", "closed-form recurrence times");
    add_common(times, true);
    auto* mathieu = app.add_subcommand("mathieu", "Mathieu characteristic value");
    mathieu->add_option("--nu", nu, "characteristic index")->required();
    mathieu->add_option("--q", q, "Mathieu parameter")->required();
    mathieu->add_option("--basis", basis, "Fourier basis size (0 = auto)");
    auto* evolve = app.add_subcommand("evolve", "split-operator run + detection");
    add_common(evolve, true);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep of the times");
    add_common(sweep, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(args);
        if (times->parsed()) return cmd_times(args);
        if (mathieu->parsed()) return cmd_mathieu(nu, q, basis);
        if (evolve->parsed()) return cmd_evolve(args);
        if (sweep->parsed()) return cmd_sweep(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
