#include "plrec/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include "plrec/errors.hpp"

namespace plrec {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Kinetic propagator over one grid, sine basis (Dirichlet walls) for
// truncated domains, plane-wave basis (periodic box) for symmetric ones.
class KineticStepper {
  public:
    KineticStepper(const Grid& grid, DomainKind domain, double kbar, double dt)
        : n_(grid.n_points), domain_(domain) {
        const double length = grid.x_max - grid.x_min;
        if (domain == DomainKind::truncated) {
            const int m = n_ - 1;  // interior nodes
            re_.resize(m);
            im_.resize(m);
            phase_.resize(m);
            for (int j = 1; j <= m; ++j) {
                const double kappa = M_PI * j / length;
                phase_[j - 1] = std::polar(1.0 / (2.0 * n_),
                                           -0.5 * kbar * kappa * kappa * dt);
            }
            std::lock_guard<std::mutex> lock(fftw_mutex());
            plan_re_ = fftw_plan_r2r_1d(m, re_.data(), re_.data(), FFTW_RODFT00,
                                        FFTW_ESTIMATE);
            plan_im_ = fftw_plan_r2r_1d(m, im_.data(), im_.data(), FFTW_RODFT00,
                                        FFTW_ESTIMATE);
        } else {
            buf_.resize(n_);
            phase_.resize(n_);
            for (int j = 0; j < n_; ++j) {
                const int wrapped = j < n_ / 2 ? j : j - n_;
                const double kappa = 2.0 * M_PI * wrapped / length;
                phase_[j] =
                    std::polar(1.0 / n_, -0.5 * kbar * kappa * kappa * dt);
            }
            std::lock_guard<std::mutex> lock(fftw_mutex());
            plan_fwd_ = fftw_plan_dft_1d(
                n_, reinterpret_cast<fftw_complex*>(buf_.data()),
                reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_FORWARD,
                FFTW_ESTIMATE);
            plan_bwd_ = fftw_plan_dft_1d(
                n_, reinterpret_cast<fftw_complex*>(buf_.data()),
                reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_BACKWARD,
                FFTW_ESTIMATE);
        }
    }

    ~KineticStepper() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (plan_re_) fftw_destroy_plan(plan_re_);
        if (plan_im_) fftw_destroy_plan(plan_im_);
        if (plan_fwd_) fftw_destroy_plan(plan_fwd_);
        if (plan_bwd_) fftw_destroy_plan(plan_bwd_);
    }

    KineticStepper(const KineticStepper&) = delete;
    KineticStepper& operator=(const KineticStepper&) = delete;

    void apply(Eigen::VectorXcd& psi) {
        if (domain_ == DomainKind::truncated) {
            const int m = n_ - 1;
            for (int j = 0; j < m; ++j) {
                re_[j] = psi[j + 1].real();
                im_[j] = psi[j + 1].imag();
            }
            fftw_execute(plan_re_);
            fftw_execute(plan_im_);
            for (int j = 0; j < m; ++j) {
                const std::complex<double> c(re_[j], im_[j]);
                const std::complex<double> r = c * phase_[j];
                re_[j] = r.real();
                im_[j] = r.imag();
            }
            fftw_execute(plan_re_);
            fftw_execute(plan_im_);
            psi[0] = 0.0;
            for (int j = 0; j < m; ++j) psi[j + 1] = {re_[j], im_[j]};
        } else {
            std::copy(psi.data(), psi.data() + n_, buf_.begin());
            fftw_execute(plan_fwd_);
            for (int j = 0; j < n_; ++j) buf_[j] *= phase_[j];
            fftw_execute(plan_bwd_);
            std::copy(buf_.begin(), buf_.end(), psi.data());
        }
    }

  private:
    int n_;
    DomainKind domain_;
    std::vector<double> re_, im_;
    std::vector<std::complex<double>> buf_;
    std::vector<std::complex<double>> phase_;  // includes round-trip 1/N
    fftw_plan plan_re_ = nullptr;
    fftw_plan plan_im_ = nullptr;
    fftw_plan plan_fwd_ = nullptr;
    fftw_plan plan_bwd_ = nullptr;
};

Eigen::VectorXd drive_profile(const Grid& grid, const PotentialSpec& potential,
                              DriveShape shape) {
    Eigen::VectorXd v(grid.n_points);
    for (int j = 0; j < grid.n_points; ++j) {
        v[j] = shape == DriveShape::linear ? grid.x(j) : potential.value(grid.x(j));
    }
    return v;
}

}  // namespace

void Grid::validate(DomainKind domain) const {
    if (!(x_min < x_max)) throw GridError("Grid: x_min must be below x_max");
    if (n_points < 256 || !is_power_of_two(n_points)) {
        throw GridError("Grid: n_points must be a power of two >= 256");
    }
    if (domain == DomainKind::truncated && x_min != 0.0) {
        throw GridError("Grid: truncated potentials require x_min = 0");
    }
}

Grid auto_grid(const PotentialSpec& potential, double kbar, int n_levels,
               int min_points) {
    potential.validate();
    if (n_levels < 1) throw DomainError("auto_grid: n_levels must be >= 1");
    const double e_max = wkb_energy(potential, kbar, n_levels);
    const double x_edge = 1.6 * potential.turning_point(e_max);
    const double p_max = std::sqrt(2.0 * e_max);
    const double dx_target = M_PI * kbar / (3.0 * p_max);

    Grid grid;
    grid.x_min = potential.domain == DomainKind::truncated ? 0.0 : -x_edge;
    grid.x_max = x_edge;
    int n = std::max(min_points, 256);
    while ((grid.x_max - grid.x_min) / n > dx_target && n < (1 << 22)) n *= 2;
    while (!is_power_of_two(n)) ++n;
    grid.n_points = n;
    grid.validate(potential.domain);
    return grid;
}

double WaveState::norm() const {
    double s = 0.0;
    for (int j = 0; j < psi.size(); ++j) s += std::norm(psi[j]);
    return s * grid.dx();
}

std::complex<double> inner_product(const WaveState& a, const WaveState& b) {
    if (a.grid.n_points != b.grid.n_points || a.grid.x_min != b.grid.x_min ||
        a.grid.x_max != b.grid.x_max) {
        throw GridError("inner_product: mismatched grids");
    }
    std::complex<double> s = 0.0;
    for (int j = 0; j < a.psi.size(); ++j) s += std::conj(a.psi[j]) * b.psi[j];
    return s * a.grid.dx();
}

EigenBasis solve_eigen(const PotentialSpec& potential, double kbar,
                       const Grid& grid, int n_levels) {
    potential.validate();
    grid.validate(potential.domain);
    if (!(kbar > 0.0)) throw DomainError("solve_eigen: kbar must be positive");
    const int m = grid.n_points - 1;  // interior nodes
    if (n_levels < 1 || n_levels > m) {
        throw DomainError("solve_eigen: n_levels outside [1, n_points-1]");
    }

    const double e_top = wkb_energy(potential, kbar, n_levels);
    const double x_tp = potential.turning_point(e_top);
    if (x_tp > 0.7 * grid.x_max) {
        std::ostringstream msg;
        msg << "solve_eigen: turning point " << x_tp << " exceeds 0.7*x_max; "
            << "suggested x_max >= " << 1.6 * x_tp;
        throw GridError(msg.str());
    }

    // H = S diag(kbar^2 kappa^2 / 2) S^T + diag(V) on the interior nodes;
    // S is the orthonormal sine transform, so the kinetic part is exactly the
    // Dirichlet-box spectral operator the propagator uses.
    const double length = grid.x_max - grid.x_min;
    Eigen::MatrixXd sine(m, m);
    const double scale = std::sqrt(2.0 / grid.n_points);
    for (int j = 1; j <= m; ++j) {
        for (int mu = 1; mu <= m; ++mu) {
            sine(j - 1, mu - 1) =
                scale * std::sin(M_PI * static_cast<double>(j) * mu / grid.n_points);
        }
    }
    Eigen::VectorXd kin(m);
    for (int mu = 1; mu <= m; ++mu) {
        const double kappa = M_PI * mu / length;
        kin[mu - 1] = 0.5 * kbar * kbar * kappa * kappa;
    }
    Eigen::MatrixXd h = sine * kin.asDiagonal() * sine.transpose();
    for (int j = 1; j <= m; ++j) h(j - 1, j - 1) += potential.value(grid.x(j));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("solve_eigen: dense eigensolver failed");
    }

    EigenBasis basis;
    basis.grid = grid;
    basis.potential = potential;
    basis.kbar = kbar;
    basis.energies = solver.eigenvalues().head(n_levels);
    basis.states = Eigen::MatrixXd::Zero(grid.n_points, n_levels);
    const double renorm = 1.0 / std::sqrt(grid.dx());
    for (int lv = 0; lv < n_levels; ++lv) {
        basis.states.col(lv).tail(m) = solver.eigenvectors().col(lv) * renorm;
        // fix a global sign: positive slope at the left edge
        if (basis.states(1, lv) < 0.0) basis.states.col(lv) *= -1.0;
    }
    for (int lv = 1; lv < n_levels; ++lv) {
        if (!(basis.energies[lv] > basis.energies[lv - 1])) {
            throw ConvergenceError("solve_eigen: energies not strictly increasing");
        }
    }
    return basis;
}

WaveState build_wavepacket(const EigenBasis& basis, int n_bar, double sigma_n) {
    if (!(sigma_n > 0.0)) throw DomainError("build_wavepacket: sigma_n must be > 0");
    const int levels = basis.n_levels();
    if (n_bar < 0 || n_bar + 4.0 * sigma_n >= levels) {
        throw DomainError(
            "build_wavepacket: need n_bar + 4 sigma_n < n_levels of the basis");
    }

    auto weight = [&](double n) {
        const double d = (n - n_bar) / (2.0 * sigma_n);
        return std::exp(-d * d);
    };
    double captured = 0.0;
    for (int n = 0; n < levels; ++n) captured += weight(n) * weight(n);
    double full = captured;
    const int n_ext = n_bar + static_cast<int>(std::ceil(12.0 * sigma_n)) + 5;
    for (int n = levels; n <= n_ext; ++n) full += weight(n) * weight(n);
    if (captured < (1.0 - 1e-8) * full) {
        throw TruncationError(
            "build_wavepacket: available levels capture less than 1 - 1e-8 of "
            "the packet weight");
    }

    WaveState state;
    state.grid = basis.grid;
    state.domain = basis.potential.domain;
    state.t = 0.0;
    state.psi = Eigen::VectorXcd::Zero(basis.grid.n_points);
    for (int n = 0; n < levels; ++n) {
        state.psi += weight(n) * basis.states.col(n).cast<std::complex<double>>();
    }
    state.psi /= std::sqrt(state.norm());
    return state;
}

Trajectory propagate(const WaveState& initial, const PotentialSpec& potential,
                     const DriveSpec& drive, double kbar,
                     const PropagationOptions& options,
                     const WaveState* autocorr_reference) {
    potential.validate();
    drive.validate();
    initial.grid.validate(potential.domain);
    if (initial.domain != potential.domain) {
        throw GridError("propagate: state and potential domains disagree");
    }
    const WaveState& reference = autocorr_reference ? *autocorr_reference : initial;
    if (!(kbar > 0.0)) throw DomainError("propagate: kbar must be positive");
    if (options.dt == 0.0) throw DomainError("propagate: dt must be nonzero");
    if (options.n_steps < 0) throw DomainError("propagate: n_steps must be >= 0");
    if (options.sample_stride < 1) {
        throw DomainError("propagate: sample_stride must be >= 1");
    }

    const Grid& grid = initial.grid;
    const int n = grid.n_points;
    Eigen::VectorXd v_well(n);
    for (int j = 0; j < n; ++j) v_well[j] = potential.value(grid.x(j));
    const Eigen::VectorXd v_drive = drive_profile(grid, potential, options.shape);

    KineticStepper kinetic(grid, potential.domain, kbar, options.dt);

    WaveState state = initial;
    const double initial_norm = state.norm();

    Trajectory traj;
    const long n_samples = options.n_steps / options.sample_stride + 1;
    traj.times.reserve(n_samples + 1);
    traj.autocorr.reserve(n_samples + 1);
    traj.norms.reserve(n_samples + 1);

    const int edge = std::max(1, n / 20);  // outer 5% of the grid
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.autocorr.push_back(inner_product(reference, state));
        const double norm_now = state.norm();
        traj.norms.push_back(norm_now);
        const double drift = std::abs(norm_now - initial_norm);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > options.norm_tolerance) {
            std::ostringstream msg;
            msg << "propagate: norm drift " << drift << " at t = " << t;
            throw StabilityError(msg.str());
        }
        if (options.check_boundary) {
            double amp = 0.0;
            for (int j = n - edge; j < n; ++j)
                amp = std::max(amp, std::abs(state.psi[j]));
            if (potential.domain == DomainKind::symmetric) {
                for (int j = 0; j < edge; ++j)
                    amp = std::max(amp, std::abs(state.psi[j]));
            }
            traj.max_boundary_amplitude = std::max(traj.max_boundary_amplitude, amp);
            if (amp > options.boundary_tolerance) {
                std::ostringstream msg;
                msg << "propagate: boundary amplitude " << amp << " at t = " << t
                    << ", enlarge the grid";
                throw GridError(msg.str());
            }
        }
    };

    record(options.t0);

    Eigen::VectorXd phase_arg(n);
    for (long step = 0; step < options.n_steps; ++step) {
        const double t = options.t0 + step * options.dt;
        const double t_mid = t + 0.5 * options.dt;
        const double drive_amp = drive.lambda * std::sin(t_mid);
        const double half = -0.5 * options.dt / kbar;
        for (int j = 0; j < n; ++j) {
            phase_arg[j] = half * (v_well[j] + drive_amp * v_drive[j]);
        }
        for (int j = 0; j < n; ++j) {
            state.psi[j] *= std::polar(1.0, phase_arg[j]);
        }
        kinetic.apply(state.psi);
        for (int j = 0; j < n; ++j) {
            state.psi[j] *= std::polar(1.0, phase_arg[j]);
        }
        state.t = options.t0 + (step + 1) * options.dt;
        if ((step + 1) % options.sample_stride == 0 || step + 1 == options.n_steps) {
            record(state.t);
        }
    }

    traj.final_state = std::move(state);
    return traj;
}

double coupling_estimate(const EigenBasis& basis, DriveShape shape, int n_bar,
                         int N) {
    if (N < 1) throw DomainError("coupling_estimate: N must be >= 1");
    if (n_bar - N < 0 || n_bar + N >= basis.n_levels()) {
        throw DomainError("coupling_estimate: n_bar +- N outside the basis");
    }
    const Eigen::VectorXd profile =
        drive_profile(basis.grid, basis.potential, shape);
    const double dx = basis.grid.dx();
    auto element = [&](int a, int b) {
        return (basis.states.col(a).array() * profile.array() *
                basis.states.col(b).array())
                   .sum() *
               dx;
    };
    return 0.5 * (std::abs(element(n_bar, n_bar + N)) +
                  std::abs(element(n_bar, n_bar - N)));
}

Eigen::VectorXcd apply_h0(const WaveState& state, const PotentialSpec& potential,
                          double kbar) {
    const Grid& grid = state.grid;
    const int n = grid.n_points;
    const double length = grid.x_max - grid.x_min;

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    if (potential.domain == DomainKind::truncated) {
        const int m = n - 1;
        // sine coefficients by plain summation; diagnostics path, not hot
        for (int mu = 1; mu <= m; ++mu) {
            std::complex<double> c = 0.0;
            for (int j = 1; j <= m; ++j) {
                c += state.psi[j] * std::sin(M_PI * static_cast<double>(j) * mu / n);
            }
            const double kappa = M_PI * mu / length;
            const std::complex<double> amp =
                c * (2.0 / n) * 0.5 * kbar * kbar * kappa * kappa;
            for (int j = 1; j <= m; ++j) {
                out[j] += amp * std::sin(M_PI * static_cast<double>(j) * mu / n);
            }
        }
    } else {
        Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(n);
        for (int mu = 0; mu < n; ++mu) {
            std::complex<double> c = 0.0;
            for (int j = 0; j < n; ++j) {
                c += state.psi[j] *
                     std::exp(std::complex<double>(0.0, -2.0 * M_PI * mu * j / n));
            }
            coeff[mu] = c / static_cast<double>(n);
        }
        for (int mu = 0; mu < n; ++mu) {
            const int wrapped = mu < n / 2 ? mu : mu - n;
            const double kappa = 2.0 * M_PI * wrapped / length;
            const double kin = 0.5 * kbar * kbar * kappa * kappa;
            for (int j = 0; j < n; ++j) {
                out[j] += kin * coeff[mu] *
                          std::exp(std::complex<double>(0.0, 2.0 * M_PI * mu * j / n));
            }
        }
    }
    for (int j = 0; j < n; ++j) out[j] += potential.value(grid.x(j)) * state.psi[j];
    return out;
}

std::string to_string(DriveShape shape) {
    return shape == DriveShape::linear ? "linear" : "potential";
}

DriveShape drive_shape_from_string(const std::string& name) {
    if (name == "potential") return DriveShape::potential;
    if (name == "linear") return DriveShape::linear;
    throw DomainError("unknown drive shape: " + name);
}

}  // namespace plrec
