#include "plrec/recurrence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plrec/errors.hpp"

namespace plrec {

namespace {

constexpr double kSingularTol = 1e-9;
const double kInf = std::numeric_limits<double>::infinity();

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

Regime classify_regime(double rho) {
    if (rho <= -2.0) return Regime::free_particle;
    if (rho == 0.0) return Regime::harmonic;
    return rho > 0.0 ? Regime::tight : Regime::loose;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::tight: return "tight";
        case Regime::harmonic: return "harmonic";
        case Regime::loose: return "loose";
        case Regime::free_particle: return "free";
    }
    return "unknown";
}

UndrivenTimes undriven_times(const SpectrumModel& spectrum) {
    const double rho = spectrum.potential.rho();
    if (rho <= -2.0) {
        throw RangeError(
            "undriven_times: rho <= -2 is the free-particle degeneracy, both "
            "times are infinite");
    }
    UndrivenTimes times;
    times.regime = classify_regime(rho);
    times.zeta_sign = sign_of(spectrum.zeta);
    times.T0_cl = 2.0 * M_PI / spectrum.omega;
    times.T0_Q = spectrum.zeta == 0.0
                     ? kInf
                     : 2.0 * M_PI / (0.5 * spectrum.kbar * std::abs(spectrum.zeta));
    return times;
}

RecurrenceTimes driven_times(const SpectrumModel& spectrum, const DriveSpec& drive) {
    drive.validate();
    const UndrivenTimes undriven = undriven_times(spectrum);
    const double omega = spectrum.omega;
    const double omega_n = 1.0 / drive.N;

    if (std::abs(1.0 - omega_n / omega) < kSingularTol) {
        std::ostringstream msg;
        msg << "driven_times: omega = " << omega << " equals omega_N = " << omega_n
            << " (N = " << drive.N << "), the detuning factor Delta diverges";
        throw SingularityError(msg.str());
    }

    RecurrenceTimes times;
    times.regime = undriven.regime;
    times.zeta_sign = undriven.zeta_sign;
    times.T0_cl = undriven.T0_cl;
    times.T0_Q = undriven.T0_Q;
    times.Delta = 1.0 / (1.0 - omega_n / omega);
    times.mu = drive.N * spectrum.kbar * spectrum.zeta * times.Delta / (2.0 * omega);

    const double mu2 = times.mu * times.mu;
    if (std::abs(1.0 - mu2) < kSingularTol) {
        std::ostringstream msg;
        msg << "driven_times: mu^2 = " << mu2
            << " hits the resonant denominator (mu = " << times.mu << ")";
        throw SingularityError(msg.str());
    }

    const double drive_factor = drive.lambda * drive.V_coupling * spectrum.zeta *
                                times.Delta * times.Delta / (omega * omega);
    const double g = drive_factor * drive_factor;
    times.M0_cl = -0.5 * g / ((1.0 - mu2) * (1.0 - mu2));
    times.M0_Q = 0.5 * g * (3.0 + mu2) / ((1.0 - mu2) * (1.0 - mu2) * (1.0 - mu2));
    times.Tlam_cl = (1.0 - times.M0_cl) * times.T0_cl * times.Delta;
    times.Tlam_Q = std::isinf(times.T0_Q) ? kInf : (1.0 - times.M0_Q) * times.T0_Q;
    return times;
}

DerivativeTimes times_from_quasienergy(
    const std::function<double(int)>& epsilon_of_offset, double kbar) {
    if (!(kbar > 0.0)) throw DomainError("times_from_quasienergy: kbar must be positive");
    const double e_minus = epsilon_of_offset(-1);
    const double e_zero = epsilon_of_offset(0);
    const double e_plus = epsilon_of_offset(+1);

    const double omega1 = (e_plus - e_minus) / (2.0 * kbar);
    const double omega2 = (e_plus - 2.0 * e_zero + e_minus) / (2.0 * kbar);
    if (omega1 == 0.0) {
        throw SingularityError("times_from_quasienergy: flat band, omega^(1) = 0");
    }
    if (omega2 == 0.0) {
        throw SingularityError(
            "times_from_quasienergy: linear band, omega^(2) = 0 (no revival)");
    }
    DerivativeTimes times;
    times.T1 = 2.0 * M_PI / omega1;
    times.T2 = 2.0 * M_PI / std::abs(omega2);
    return times;
}

DerivativeTimes times_from_quasienergy(const SpectrumModel& spectrum,
                                       const DriveSpec& drive) {
    return times_from_quasienergy(
        [&](int offset) { return quasienergy(spectrum, drive, offset).epsilon; },
        spectrum.kbar);
}

SumRuleResiduals sum_rule_check(const SpectrumModel& spectrum,
                                const DriveSpec& drive) {
    const RecurrenceTimes times = driven_times(spectrum, drive);
    SumRuleResiduals residuals;
    const double cl_ratio = times.Tlam_cl / times.T0_cl;
    const double q_ratio =
        std::isinf(times.T0_Q) ? 1.0 : times.Tlam_Q / times.T0_Q;
    residuals.tight = 0.75 * cl_ratio + 0.25 * q_ratio - 1.0;
    residuals.loose = cl_ratio - 0.25 * q_ratio;
    return residuals;
}

}  // namespace plrec
