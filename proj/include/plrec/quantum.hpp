#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "plrec/resonance.hpp"
#include "plrec/spectrum.hpp"

namespace plrec {

// Uniform spatial grid. Stored nodes are x_j = x_min + j*dx, j = 0..n-1 with
// dx = (x_max - x_min)/n; x_max itself is the implicit Dirichlet node of the
// sine representation (truncated domain) or the periodic image (symmetric).
// Truncated potentials require x_min = 0; psi[0] is pinned to the hard wall.
struct Grid {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_points = 0;

    double dx() const { return (x_max - x_min) / n_points; }
    double x(int j) const { return x_min + j * dx(); }
    void validate(DomainKind domain) const;
};

// Auto-sized grid: x_max = 1.6 * turning point of the WKB energy at the
// highest requested level, resolution covering ~3x the classical momentum.
Grid auto_grid(const PotentialSpec& potential, double kbar, int n_levels,
               int min_points = 256);

// Complex wavefunction on a grid plus its time stamp.
struct WaveState {
    Grid grid;
    DomainKind domain = DomainKind::symmetric;
    Eigen::VectorXcd psi;
    double t = 0.0;

    double norm() const;  // integral |psi|^2 dx (rectangle rule)
};

// Lowest eigenpairs of H0 = -(kbar^2/2) d2/dx2 + V0|x|^k on the grid,
// sine-spectral (Dirichlet box) discretization. states columns are
// orthonormal under the grid quadrature; energies ascend strictly.
struct EigenBasis {
    Grid grid;
    PotentialSpec potential;
    double kbar = 1.0;
    Eigen::VectorXd energies;
    Eigen::MatrixXd states;  // n_points x n_levels, row 0 pinned to 0

    int n_levels() const { return static_cast<int>(energies.size()); }
};

// Spatial profile of the drive term V(x):
//   potential: V0*|x|^k (modulating the well itself)
//   linear:    x (driven gravitational cavity)
enum class DriveShape { potential, linear };

struct PropagationOptions {
    double dt = 1e-3;
    long n_steps = 0;
    int sample_stride = 1;       // record every sample_stride-th step
    DriveShape shape = DriveShape::potential;
    double t0 = 0.0;             // drive phase origin, evolution uses sin(t)
    bool check_boundary = true;  // error if amplitude reaches the outer 5%
    double norm_tolerance = 1e-6;
    double boundary_tolerance = 1e-4;
};

// Sampled record of one run: autocorrelation against the initial state and
// the norm at every sample, plus the final state.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::complex<double>> autocorr;
    std::vector<double> norms;
    WaveState final_state;
    double max_norm_drift = 0.0;
    double max_boundary_amplitude = 0.0;
};

// Diagonalizes H0 with Dirichlet boundaries; returns the lowest n_levels
// states. The grid must keep the top requested turning point inside
// 0.7*x_max (GridError with a suggested x_max otherwise).
EigenBasis solve_eigen(const PotentialSpec& potential, double kbar,
                       const Grid& grid, int n_levels);

// Gaussian population over levels, c_n ~ exp(-(n - n_bar)^2/(4 sigma_n^2)),
// normalized on the grid. Requires n_bar + 4 sigma_n < n_levels and at least
// 1 - 1e-8 of the weight inside the available levels.
WaveState build_wavepacket(const EigenBasis& basis, int n_bar, double sigma_n);

// Second-order Strang splitting for
//   i kbar dpsi/dt = [-(kbar^2/2) d2/dx2 + V0|x|^k + lambda V(x) sin t] psi
// with the kinetic step in the sine (truncated) or Fourier (symmetric) basis
// and the drive evaluated at the half-step midpoint. The autocorrelation is
// taken against autocorr_reference when given (segmented runs), otherwise
// against the initial state.
Trajectory propagate(const WaveState& initial, const PotentialSpec& potential,
                     const DriveSpec& drive, double kbar,
                     const PropagationOptions& options,
                     const WaveState* autocorr_reference = nullptr);

// Average of |<n_bar|V|n_bar+N>| and |<n_bar|V|n_bar-N>| by grid quadrature;
// feeds DriveSpec.V_coupling.
double coupling_estimate(const EigenBasis& basis, DriveShape shape, int n_bar,
                         int N);

// H0 psi on the grid (sine-spectral kinetic + pointwise potential); test and
// diagnostics helper.
Eigen::VectorXcd apply_h0(const WaveState& state, const PotentialSpec& potential,
                          double kbar);

// Grid inner product <a|b> = sum conj(a_j) b_j dx.
std::complex<double> inner_product(const WaveState& a, const WaveState& b);

std::string to_string(DriveShape shape);
DriveShape drive_shape_from_string(const std::string& name);

}  // namespace plrec
