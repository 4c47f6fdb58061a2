#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "plrec/quantum.hpp"
#include "plrec/recurrence.hpp"

namespace plrec {

// Autocorrelation A(t) = <psi(0)|psi(t)>; peaks of |A|^2 mark recurrences.
struct Autocorrelation {
    std::vector<double> times;
    std::vector<std::complex<double>> A;

    double dt() const;
    void validate() const;  // |A(0)| = 1 within 1e-10, |A| <= 1 + 1e-8
};

enum class DetectionStatus {
    found,
    none,        // no peak above the prominence threshold
    weak,        // envelope maximum below the weak-revival threshold
    degenerate,  // flat envelope: linear spectrum, every period reconstructs
};

struct PeakDetection {
    DetectionStatus status = DetectionStatus::none;
    double time = 0.0;
    double uncertainty = 0.0;
    double height = 0.0;
};

struct ClassicalPeriodOptions {
    double prominence = 0.1;  // on |A|^2 in [0,1]
};

struct RevivalOptions {
    double window_factor = 1.5;       // envelope window, units of T_cl
    double search_start_factor = 3.0; // earliest search time, units of T_cl
    double collapse_threshold = 0.3;  // envelope level marking the collapse
    double weak_threshold = 0.5;      // below this the revival is "weak"
    double flat_tolerance = 0.05;     // envelope spread for the degenerate case
    // A hump at ~2x the envelope maximum with height ratio inside
    // [mirror_ratio_min, mirror_ratio_max] marks the maximum as the 1/2
    // fractional (mirror) revival; the 2x hump is assigned instead.
    double mirror_ratio_min = 0.55;
    double mirror_ratio_max = 0.98;
};

struct RevivalDetection {
    DetectionStatus status = DetectionStatus::none;
    double time = 0.0;
    double uncertainty = 0.0;
    double height = 0.0;
    // Diagnostics: the 1/2 fractional revival when one was identified.
    bool mirror_reassigned = false;
    double mirror_time = 0.0;
    double mirror_height = 0.0;
};

// Detected vs predicted recurrence times for one run.
struct RecurrenceReport {
    PeakDetection classical;
    RevivalDetection revival;
    double T_cl_predicted = 0.0;
    double T_Q_predicted = 0.0;
    double Tlam_cl_predicted = 0.0;
    double Tlam_Q_predicted = 0.0;
    double classical_relative_error = 0.0;  // |detected-predicted|/predicted
    double revival_relative_error = 0.0;
    bool revival_prediction_infinite = false;
    int classical_shift_sign = 0;  // sign of the predicted drive shift in |T_cl|
    int revival_shift_sign = 0;    // sign of the predicted drive shift in T_Q
    Regime regime = Regime::harmonic;
    std::string notes;
};

// Wraps the trajectory record (which already holds <psi(0)|psi(t_i)>) and
// checks the invariants.
Autocorrelation autocorrelate(const Trajectory& trajectory);

// Recomputes overlaps of a reference state against sampled states; grids must
// match (GridError otherwise).
Autocorrelation autocorrelate(const WaveState& reference,
                              const std::vector<WaveState>& samples);

// First local maximum of |A|^2 after the initial decay whose prominence
// (height above the preceding valley) exceeds the threshold; the peak time is
// refined by quadratic interpolation, uncertainty = sampling interval.
PeakDetection detect_classical_period(const Autocorrelation& ac,
                                      const ClassicalPeriodOptions& options = {});

// Sliding-window maximum envelope of |A|^2 (window 1.5*T_cl_hint). The search
// starts after the envelope has collapsed (first drop below
// collapse_threshold, never earlier than 3*T_cl_hint). The revival is the
// global envelope maximum, except that a maximum identified as the 1/2
// fractional (mirror) revival — a hump of comparable height sits at twice its
// time — yields to that hump. Flat envelopes report the degenerate
// linear-spectrum case; envelope maxima below weak_threshold report status
// weak with the best candidate. Uncertainty = window width.
RevivalDetection detect_revival(const Autocorrelation& ac, double T_cl_hint,
                                const RevivalOptions& options = {});

// Fills the report with predictions from driven_times (undriven for
// lambda = 0) and the relative detection errors.
RecurrenceReport compare(const PeakDetection& classical,
                         const RevivalDetection& revival,
                         const SpectrumModel& spectrum, const DriveSpec& drive);

std::string to_string(DetectionStatus status);

}  // namespace plrec
