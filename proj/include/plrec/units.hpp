#pragma once

#include <optional>

namespace plrec {

// Dimensionless scaling of the driven problem. Position is measured in units
// of the potential length a, momentum in sqrt(m*hbar*Omega), time in 1/Omega;
// the commutator then reads [x,p] = i*kbar with kbar = (1/a)*sqrt(hbar/(m*Omega)).
// All downstream code consumes kbar directly; the physical fields are optional
// provenance only.
struct ScaledUnits {
    double kbar;
    std::optional<double> omega_drive;   // physical drive frequency, record only
    std::optional<double> length_scale;  // a
    std::optional<double> mass;          // m
    std::optional<double> hbar;          // physical hbar
};

// kbar = (1/a) * sqrt(hbar / (m * omega)). All inputs strictly positive.
double derive_kbar(double a, double m, double hbar, double omega);

// E_physical / (hbar * omega). hbar, omega strictly positive.
double scale_energy(double e_physical, double hbar, double omega);

// Builds ScaledUnits from physical constants, keeping them as provenance.
ScaledUnits make_scaled_units(double a, double m, double hbar, double omega);

}  // namespace plrec
