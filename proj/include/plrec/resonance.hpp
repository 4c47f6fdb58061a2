#pragma once

#include <vector>

#include "plrec/spectrum.hpp"

namespace plrec {

// Periodic drive lambda*V(x)*sin(t) reduced to the N-th nonlinear resonance.
// V_coupling is the near-constant off-diagonal matrix element
// V_{n,n+N} ~ V_{n,n-N} = V around the mean level.
struct DriveSpec {
    double lambda = 0.0;
    double V_coupling = 0.0;
    int N = 1;

    void validate() const;
};

// Characteristic value a_nu(q) of the Mathieu equation
//   chi'' + (a - 2q cos 2z) chi = 0
// for the Floquet solution chi = e^{i nu z} * (pi-periodic factor).
struct MathieuResult {
    double q = 0.0;
    double nu = 0.0;
    double a_nu = 0.0;
    int basis_size = 0;
};

// Quasienergy of one resonance band state,
//   eps_nu = (N^2 kbar^2 zeta / 8) a_nu - (omega - 1/N)^2 / (2 zeta),
// with nu = 2(n - n_bar)/N + 2(omega - 1/N)/(N kbar zeta).
struct QuasiEnergy {
    double epsilon = 0.0;
    double nu = 0.0;
    double q = 0.0;
    double a_nu = 0.0;
    int n_offset = 0;
};

// Brute-force diagonalization of the resonance amplitude equations over the
// levels n in [n_bar - span, n_bar + span]: the independent oracle for the
// Mathieu route.
struct PendulumBands {
    std::vector<double> values;        // sorted ascending
    std::vector<int> dominant_offset;  // n - n_bar of the dominant component
    int span = 0;
};

// Solves the Fourier-space tridiagonal eigenproblem
//   a c_m = (nu + 2m)^2 c_m + q (c_{m+1} + c_{m-1}),  |m| <= (basis_size-1)/2,
// selecting the eigenvalue whose eigenvector is dominated by the m = 0 mode.
// basis_size <= 0 picks 2*(ceil|nu| + ceil(3 sqrt|q|)) + 21. At integer nu the
// cosine-type branch (sign c_0 = sign c_{-nu}) is returned, matching the
// analytic a_nu(q) series; a near-integer nu with two comparable m = 0 weights
// raises AmbiguityError carrying both candidates. Non-convergence between
// basis_size and basis_size + 10 raises ConvergenceError.
MathieuResult mathieu_char_value(double nu, double q, int basis_size = 0);

// Quasienergy of the N-th resonance for level offset n_offset = n - n_bar.
// Requires zeta != 0 (the harmonic case has no pendulum reduction and is
// handled analytically in the recurrence module).
QuasiEnergy quasienergy(const SpectrumModel& spectrum, const DriveSpec& drive,
                        int n_offset);

// Same quasienergy with the offset treated as a real number via nu; used for
// derivative checks on the band.
QuasiEnergy quasienergy_real_offset(const SpectrumModel& spectrum,
                                    const DriveSpec& drive, double n_offset);

// Hermitian matrix of the amplitude equations: diagonal
//   kbar (n-n_bar)(omega - 1/N) + (kbar^2 zeta / 2)(n-n_bar)^2,
// off-diagonal -i lambda V/2 coupling n -> n+N (+h.c.). span <= 0 picks
// max(10 N, 8 sqrt|q| N + 20). Band states localized in the core must not
// reach the level cutoff (boundary weight > 1e-6 raises SpanError).
PendulumBands pendulum_matrix_eigs(const SpectrumModel& spectrum,
                                   const DriveSpec& drive, int span = 0);

// Mathieu parameter q = 4 lambda V / (N^2 kbar^2 zeta).
double mathieu_q(const SpectrumModel& spectrum, const DriveSpec& drive);

}  // namespace plrec
