#include "plrec/spectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plrec/errors.hpp"

namespace plrec {

namespace {

constexpr double kMinExponent = 1e-3;
constexpr double kMaxExponent = 1e6;
constexpr double kPotentialClamp = 1e8;
constexpr double kLogExpLimit = 700.0;  // exp() overflow guard for doubles

}  // namespace

double PotentialSpec::turning_point(double energy) const {
    if (!(energy > 0.0)) {
        throw DomainError("turning_point: energy must be positive");
    }
    return std::exp(std::log(energy / V0) / exponent_k);
}

double PotentialSpec::value(double x) const {
    const double ax = std::abs(x);
    if (ax == 0.0) return 0.0;
    // log-space evaluation; clamp keeps huge exponents (box surrogates)
    // finite and the grid Hamiltonian well conditioned.
    const double log_v = std::log(V0) + exponent_k * std::log(ax);
    if (log_v > std::log(kPotentialClamp)) return kPotentialClamp;
    return std::exp(log_v);
}

void PotentialSpec::validate() const {
    if (!(V0 > 0.0)) throw DomainError("PotentialSpec: V0 must be positive");
    if (!(exponent_k >= kMinExponent) || !(exponent_k <= kMaxExponent)) {
        std::ostringstream msg;
        msg << "PotentialSpec: exponent k = " << exponent_k
            << " outside the supported window [1e-3, 1e6]";
        throw RangeError(msg.str());
    }
    if (maslov_gamma < 1 || maslov_gamma > 4) {
        throw DomainError("PotentialSpec: Maslov index must be in {1,2,3,4}");
    }
    if (domain == DomainKind::truncated && maslov_gamma != 3) {
        throw DomainError(
            "PotentialSpec: a truncated well has one hard wall and one soft "
            "turning point, gamma = 3");
    }
}

PotentialSpec make_potential(double V0, double exponent_k, DomainKind domain,
                             int maslov_gamma) {
    PotentialSpec spec;
    spec.V0 = V0;
    spec.exponent_k = exponent_k;
    spec.domain = domain;
    spec.maslov_gamma =
        maslov_gamma > 0 ? maslov_gamma : (domain == DomainKind::truncated ? 3 : 2);
    spec.validate();
    return spec;
}

double wkb_energy(const PotentialSpec& potential, double kbar, double n) {
    potential.validate();
    if (!(kbar > 0.0)) throw DomainError("wkb_energy: kbar must be positive");
    const double k = potential.exponent_k;
    const double level = n + potential.maslov_gamma / 4.0;
    if (!(level > 0.0)) {
        throw DomainError("wkb_energy: n + gamma/4 must be positive");
    }

    // Action coefficient per unit (n + gamma/4): pi/(2 sqrt2) on the full
    // line, doubled for the half-line hard-wall problem.
    const double base = potential.domain == DomainKind::truncated
                            ? M_PI / std::sqrt(2.0)
                            : M_PI / (2.0 * std::sqrt(2.0));
    const double log_gamma_ratio =
        std::lgamma(1.0 / k + 1.5) - std::lgamma(1.0 / k + 1.0) - std::lgamma(1.5);
    const double log_inner = std::log(level) + std::log(kbar * base) +
                             std::log(potential.V0) / k + log_gamma_ratio;
    const double log_energy = log_inner * (2.0 * k / (k + 2.0));
    if (std::abs(log_energy) > kLogExpLimit) {
        std::ostringstream msg;
        msg << "wkb_energy: overflow (k = " << k << ", n = " << n
            << ", log E = " << log_energy << ")";
        throw RangeError(msg.str());
    }
    return std::exp(log_energy);
}

double frequency_omega(const PotentialSpec& potential, double kbar, double n_bar) {
    const double energy = wkb_energy(potential, kbar, n_bar);
    const double k = potential.exponent_k;
    const double level = n_bar + potential.maslov_gamma / 4.0;
    return (2.0 * k / (k + 2.0)) * energy / (kbar * level);
}

double nonlinearity_zeta(const PotentialSpec& potential, double kbar, double n_bar) {
    const double energy = wkb_energy(potential, kbar, n_bar);
    const double k = potential.exponent_k;
    if (k == 2.0) return 0.0;  // linear spectrum, exactly
    const double level = n_bar + potential.maslov_gamma / 4.0;
    return (2.0 * k * (k - 2.0) / ((k + 2.0) * (k + 2.0))) * energy /
           (kbar * kbar * level * level);
}

SpectrumModel build_spectrum_model(const PotentialSpec& potential, double kbar,
                                   double n_bar) {
    SpectrumModel model;
    model.potential = potential;
    model.kbar = kbar;
    model.n_bar = n_bar;
    model.E_nbar = wkb_energy(potential, kbar, n_bar);
    model.omega = frequency_omega(potential, kbar, n_bar);
    model.zeta = nonlinearity_zeta(potential, kbar, n_bar);
    return model;
}

std::string to_string(DomainKind kind) {
    return kind == DomainKind::truncated ? "truncated" : "symmetric";
}

DomainKind domain_kind_from_string(const std::string& name) {
    if (name == "symmetric") return DomainKind::symmetric;
    if (name == "truncated") return DomainKind::truncated;
    throw DomainError("unknown domain kind: " + name);
}

}  // namespace plrec
