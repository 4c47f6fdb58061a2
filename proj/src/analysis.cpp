#include "plrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "plrec/errors.hpp"

namespace plrec {

namespace {

// Quadratic refinement of a sampled peak position.
double refine_peak(const std::vector<double>& t, const std::vector<double>& p,
                   int i) {
    if (i <= 0 || i + 1 >= static_cast<int>(p.size())) return t[i];
    const double denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
    if (denom >= 0.0) return t[i];
    const double dt = 0.5 * (t[i + 1] - t[i - 1]);
    return t[i] + 0.5 * dt * (p[i - 1] - p[i + 1]) / denom;
}

// Sliding-window maximum (monotonic deque), window of half-width w samples.
std::vector<double> window_max(const std::vector<double>& p, int w) {
    const int n = static_cast<int>(p.size());
    std::vector<double> env(n);
    std::deque<int> dq;
    int right = -1;
    for (int i = 0; i < n; ++i) {
        while (right < std::min(n - 1, i + w)) {
            ++right;
            while (!dq.empty() && p[dq.back()] <= p[right]) dq.pop_back();
            dq.push_back(right);
        }
        while (!dq.empty() && dq.front() < i - w) dq.pop_front();
        env[i] = p[dq.front()];
    }
    return env;
}

int raw_peak_near(const std::vector<double>& p, int center, int halfwidth,
                  int lo, int hi) {
    int best = std::clamp(center, lo, hi - 1);
    const int a = std::max(lo, center - halfwidth);
    const int b = std::min(hi, center + halfwidth + 1);
    for (int i = a; i < b; ++i) {
        if (p[i] > p[best]) best = i;
    }
    return best;
}

}  // namespace

double Autocorrelation::dt() const {
    if (times.size() < 2) throw DomainError("Autocorrelation: need >= 2 samples");
    return times[1] - times[0];
}

void Autocorrelation::validate() const {
    if (times.size() != A.size() || times.empty()) {
        throw DomainError("Autocorrelation: inconsistent record");
    }
    if (std::abs(std::abs(A[0]) - 1.0) > 1e-10) {
        throw DomainError("Autocorrelation: |A(0)| must be 1 within 1e-10");
    }
    for (const auto& a : A) {
        if (std::abs(a) > 1.0 + 1e-8) {
            throw DomainError("Autocorrelation: |A| exceeds 1 + 1e-8");
        }
    }
}

Autocorrelation autocorrelate(const Trajectory& trajectory) {
    Autocorrelation ac;
    ac.times = trajectory.times;
    ac.A = trajectory.autocorr;
    ac.validate();
    return ac;
}

Autocorrelation autocorrelate(const WaveState& reference,
                              const std::vector<WaveState>& samples) {
    Autocorrelation ac;
    ac.times.reserve(samples.size());
    ac.A.reserve(samples.size());
    for (const auto& s : samples) {
        ac.times.push_back(s.t);
        ac.A.push_back(inner_product(reference, s));
    }
    ac.validate();
    return ac;
}

PeakDetection detect_classical_period(const Autocorrelation& ac,
                                      const ClassicalPeriodOptions& options) {
    ac.validate();
    const int n = static_cast<int>(ac.times.size());
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = std::norm(ac.A[i]);

    PeakDetection det;
    det.uncertainty = ac.dt();
    double valley = p[0];
    for (int i = 1; i + 1 < n; ++i) {
        valley = std::min(valley, p[i]);
        if (p[i] >= p[i - 1] && p[i] >= p[i + 1] &&
            p[i] - valley >= options.prominence) {
            det.status = DetectionStatus::found;
            det.time = refine_peak(ac.times, p, i);
            det.height = p[i];
            return det;
        }
    }
    det.status = DetectionStatus::none;
    return det;
}

RevivalDetection detect_revival(const Autocorrelation& ac, double T_cl_hint,
                                const RevivalOptions& options) {
    ac.validate();
    if (!(T_cl_hint > 0.0)) throw DomainError("detect_revival: T_cl_hint must be > 0");
    const int n = static_cast<int>(ac.times.size());
    const double dt = ac.dt();
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = std::norm(ac.A[i]);

    const double window = options.window_factor * T_cl_hint;
    const int w = std::max(1, static_cast<int>(std::round(0.5 * window / dt)));
    const std::vector<double> env = window_max(p, w);

    RevivalDetection det;
    det.uncertainty = window;

    const double t0 = ac.times.front();
    int start = std::min(
        n - 1, static_cast<int>(std::ceil(
                   (options.search_start_factor * T_cl_hint - t0) / dt)));
    start = std::max(start, 0);

    // Degenerate (linear-spectrum) case: the envelope never collapses and is
    // essentially flat — every classical period is a full reconstruction.
    double env_max = 0.0, env_min = std::numeric_limits<double>::infinity();
    for (int i = start; i < n; ++i) {
        env_max = std::max(env_max, env[i]);
        env_min = std::min(env_min, env[i]);
    }
    if (env_max - env_min < options.flat_tolerance * env_max) {
        const PeakDetection classical = detect_classical_period(ac);
        det.status = DetectionStatus::degenerate;
        det.time = classical.time;
        det.height = classical.height;
        return det;
    }

    // Start the search after the packet has actually collapsed; 3*T_cl alone
    // still sits on the early classical reconstructions.
    int collapsed = start;
    while (collapsed < n && env[collapsed] >= options.collapse_threshold) ++collapsed;
    if (collapsed < n) start = collapsed;

    int g = start;
    for (int i = start; i < n; ++i) {
        if (env[i] > env[g]) g = i;
    }
    int peak = raw_peak_near(p, g, w, start, n);
    double t1 = refine_peak(ac.times, p, peak);
    double h1 = p[peak];

    // A comparable hump at ~2x the location marks this maximum as the 1/2
    // fractional (mirror) revival; the time is assigned to the 2x hump.
    const int lo =
        std::max(0, static_cast<int>(std::floor((1.8 * t1 - t0) / dt)));
    const int hi =
        std::min(n, static_cast<int>(std::ceil((2.2 * t1 - t0) / dt)) + 1);
    if (lo < n && lo < hi) {
        int peak2 = lo;
        for (int i = lo; i < hi; ++i) {
            if (p[i] > p[peak2]) peak2 = i;
        }
        const double h2 = p[peak2];
        if (h2 >= options.mirror_ratio_min * h1 &&
            h2 <= options.mirror_ratio_max * h1) {
            det.mirror_reassigned = true;
            det.mirror_time = t1;
            det.mirror_height = h1;
            t1 = refine_peak(ac.times, p, peak2);
            h1 = h2;
        }
    }

    det.time = t1;
    det.height = h1;
    det.status =
        h1 >= options.weak_threshold ? DetectionStatus::found : DetectionStatus::weak;
    return det;
}

RecurrenceReport compare(const PeakDetection& classical,
                         const RevivalDetection& revival,
                         const SpectrumModel& spectrum, const DriveSpec& drive) {
    RecurrenceReport report;
    report.classical = classical;
    report.revival = revival;

    const UndrivenTimes undriven = undriven_times(spectrum);
    report.regime = undriven.regime;
    report.T_cl_predicted = undriven.T0_cl;
    report.T_Q_predicted = undriven.T0_Q;
    report.revival_prediction_infinite = std::isinf(undriven.T0_Q);

    if (drive.lambda > 0.0) {
        const RecurrenceTimes driven = driven_times(spectrum, drive);
        report.Tlam_cl_predicted = driven.Tlam_cl;
        report.Tlam_Q_predicted = driven.Tlam_Q;
        report.classical_shift_sign =
            std::abs(driven.Tlam_cl) > std::abs(driven.T0_cl * driven.Delta) ? 1 : -1;
        report.revival_shift_sign =
            std::isinf(driven.Tlam_Q) ? 0 : (driven.Tlam_Q < driven.T0_Q ? -1 : 1);
        report.notes =
            "driven run: detections are lab-frame autocorrelation times; "
            "predicted shifts refer to the resonance band";
    } else {
        report.Tlam_cl_predicted = undriven.T0_cl;
        report.Tlam_Q_predicted = undriven.T0_Q;
    }

    if (classical.status == DetectionStatus::found && report.T_cl_predicted > 0.0) {
        report.classical_relative_error =
            std::abs(classical.time - report.T_cl_predicted) / report.T_cl_predicted;
    }
    if (report.revival_prediction_infinite) {
        if (!report.notes.empty()) report.notes += "; ";
        report.notes += "revival prediction infinite (linear spectrum), comparison skipped";
    } else if (revival.status == DetectionStatus::found ||
               revival.status == DetectionStatus::weak) {
        report.revival_relative_error =
            std::abs(revival.time - report.T_Q_predicted) / report.T_Q_predicted;
    }
    return report;
}

std::string to_string(DetectionStatus status) {
    switch (status) {
        case DetectionStatus::found: return "found";
        case DetectionStatus::none: return "no-recurrence";
        case DetectionStatus::weak: return "weak-revival";
        case DetectionStatus::degenerate: return "degenerate-linear-spectrum";
    }
    return "unknown";
}

}  // namespace plrec
