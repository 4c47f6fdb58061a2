#pragma once

#include <string>

namespace plrec {

// Support of the power-law well V0*|x|^k.
//   symmetric: |x|^k on the whole line, soft turning points on both sides.
//   truncated: x >= 0 with a hard wall at the origin (gravitational cavity).
enum class DomainKind { symmetric, truncated };

// Power-law potential V(x) = V0*|x|^k in scaled units.
// The Maslov index gamma encodes the turning-point boundary conditions:
// 2 = two soft turning points, 3 = one hard wall + one soft, 4 = box.
struct PotentialSpec {
    double V0 = 1.0;
    double exponent_k = 2.0;
    int maslov_gamma = 2;
    DomainKind domain = DomainKind::symmetric;

    double rho() const { return exponent_k - 2.0; }
    // Turning point (E/V0)^(1/k) for energy E > 0.
    double turning_point(double energy) const;
    // Potential value with overflow clamp (large k blows up past |x| = 1).
    double value(double x) const;

    void validate() const;
};

// Defaults gamma by domain: 2 for symmetric wells, 3 for a hard wall.
PotentialSpec make_potential(double V0, double exponent_k, DomainKind domain,
                             int maslov_gamma = -1);

// Local WKB description of the unmodulated spectrum around a mean level n_bar:
// energy, level-spacing frequency omega = dE/(kbar dn), and the nonlinearity
// zeta = d2E/(kbar dn)^2. zeta vanishes exactly at k = 2 and carries sign(k-2).
struct SpectrumModel {
    PotentialSpec potential;
    double kbar = 1.0;
    double n_bar = 0.0;
    double E_nbar = 0.0;
    double omega = 0.0;
    double zeta = 0.0;
};

// WKB level energy of the unmodulated well. The quantization condition is
//   symmetric:  closed-orbit action,  4*I(E) = 2*pi*kbar*(n + gamma/4)
//   truncated:  half-line action,       I(E) =   pi*kbar*(n + gamma/4)
// with I(E) = int_0^xt sqrt(2(E - V0 x^k)) dx, which evaluates to
//   E = [ (n + gamma/4) * C * kbar*pi/sqrt(2) * V0^(1/k)
//         * Gamma(1/k+3/2) / (Gamma(1/k+1)*Gamma(3/2)) ]^(2k/(k+2)),
// C = 1/2 on the full line, 1 on the half line. Accepts real n (the formula
// is smooth in n); requires n + gamma/4 > 0.
double wkb_energy(const PotentialSpec& potential, double kbar, double n);

// omega = (1/kbar) * (2k/(k+2)) * (n_bar + gamma/4)^(-1) * E_nbar.
double frequency_omega(const PotentialSpec& potential, double kbar, double n_bar);

// zeta = (1/kbar^2) * (2k(k-2)/(k+2)^2) * (n_bar + gamma/4)^(-2) * E_nbar.
double nonlinearity_zeta(const PotentialSpec& potential, double kbar, double n_bar);

SpectrumModel build_spectrum_model(const PotentialSpec& potential, double kbar,
                                   double n_bar);

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

}  // namespace plrec
