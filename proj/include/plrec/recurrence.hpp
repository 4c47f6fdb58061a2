#pragma once

#include <functional>
#include <string>

#include "plrec/resonance.hpp"
#include "plrec/spectrum.hpp"

namespace plrec {

// Spectrum class by the nonlinearity measure rho = k - 2.
enum class Regime { tight, harmonic, loose, free_particle };

// All closed-form recurrence time scales. T0_* are the undriven ones,
// Tlam_* include the drive through the modification factors M0_*:
//   Tlam_cl = (1 - M0_cl) T0_cl Delta,   Tlam_Q = (1 - M0_Q) T0_Q,
//   Delta = (1 - 1/(N omega))^(-1),      mu = N kbar zeta Delta / (2 omega).
// T0_Q uses |zeta| so revival times stay positive; the sign of zeta is
// reported separately. Harmonic spectra give T0_Q = +infinity.
struct RecurrenceTimes {
    double T0_cl = 0.0;
    double T0_Q = 0.0;
    double Tlam_cl = 0.0;
    double Tlam_Q = 0.0;
    double Delta = 1.0;
    double mu = 0.0;
    double M0_cl = 0.0;
    double M0_Q = 0.0;
    Regime regime = Regime::harmonic;
    int zeta_sign = 0;
};

struct UndrivenTimes {
    double T0_cl = 0.0;
    double T0_Q = 0.0;
    Regime regime = Regime::harmonic;
    int zeta_sign = 0;
};

// First/second derivative times extracted from the quasienergy band,
// T^(j) = 2 pi / omega^(j), omega^(j) = (j! kbar)^(-1) d^j eps / dn^j.
// T1 keeps the sign of omega^(1); T2 is reported positive.
struct DerivativeTimes {
    double T1 = 0.0;
    double T2 = 0.0;
};

// Diagnostic residuals of the small-|rho| relations:
//   tight: 3 Tlam_cl/(4 T0_cl) + Tlam_Q/(4 T0_Q) - 1
//   loose: Tlam_cl/T0_cl - Tlam_Q/(4 T0_Q)
// Reported, never asserted: both hold only under extra approximations
// (Delta ~ 1, mu ~ 0) the source leaves unstated.
struct SumRuleResiduals {
    double tight = 0.0;
    double loose = 0.0;
};

// T0_cl = 2 pi / omega, T0_Q = 2 pi / ((1/2) kbar |zeta|).
UndrivenTimes undriven_times(const SpectrumModel& spectrum);

// Full driven time set. Raises SingularityError when omega = 1/N (Delta
// diverges) or mu^2 = 1 (resonant denominator of the modification factors).
RecurrenceTimes driven_times(const SpectrumModel& spectrum, const DriveSpec& drive);

// Derivative route: central finite differences of eps(n_offset) over the
// integer stencil {-1, 0, +1}.
DerivativeTimes times_from_quasienergy(
    const std::function<double(int)>& epsilon_of_offset, double kbar);

// Convenience overload evaluating the Mathieu-route quasienergy.
DerivativeTimes times_from_quasienergy(const SpectrumModel& spectrum,
                                       const DriveSpec& drive);

SumRuleResiduals sum_rule_check(const SpectrumModel& spectrum,
                                const DriveSpec& drive);

Regime classify_regime(double rho);
std::string to_string(Regime regime);

}  // namespace plrec
