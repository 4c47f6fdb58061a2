#include "plrec/units.hpp"

#include <cmath>

#include "plrec/errors.hpp"

namespace plrec {

double derive_kbar(double a, double m, double hbar, double omega) {
    if (!(a > 0.0) || !(m > 0.0) || !(hbar > 0.0) || !(omega > 0.0)) {
        throw DomainError("derive_kbar: all inputs must be strictly positive");
    }
    return std::sqrt(hbar / (m * omega)) / a;
}

double scale_energy(double e_physical, double hbar, double omega) {
    if (!(hbar > 0.0) || !(omega > 0.0)) {
        throw DomainError("scale_energy: hbar and omega must be strictly positive");
    }
    return e_physical / (hbar * omega);
}

ScaledUnits make_scaled_units(double a, double m, double hbar, double omega) {
    ScaledUnits units;
    units.kbar = derive_kbar(a, m, hbar, omega);
    units.omega_drive = omega;
    units.length_scale = a;
    units.mass = m;
    units.hbar = hbar;
    return units;
}

}  // namespace plrec
