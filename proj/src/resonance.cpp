#include "plrec/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "plrec/errors.hpp"

namespace plrec {

namespace {

constexpr double kIntegerNuTol = 1e-9;
constexpr double kConvergenceTol = 1e-9;
constexpr double kBoundaryWeightTol = 1e-6;

struct TridiagonalPick {
    double value = 0.0;
    Eigen::VectorXd vector;
    int index = 0;
};

// One step of Rayleigh-quotient refinement in extended precision: a few ulps
// on the characteristic value matter when the drive shift sits ten orders
// below it.
double refine_tridiagonal_eigenvalue(const Eigen::VectorXd& diag, double q,
                                     double a, const Eigen::VectorXd& v) {
    const int n = static_cast<int>(diag.size());
    std::vector<long double> w(v.data(), v.data() + n);
    for (int pass = 0; pass < 2; ++pass) {
        // (T - a) x = w by the Thomas algorithm with a tiny diagonal floor.
        std::vector<long double> c(n, 0.0L), d(n, 0.0L);
        const long double qe = q;
        long double beta = static_cast<long double>(diag[0]) - static_cast<long double>(a);
        if (std::abs(static_cast<double>(beta)) < 1e-300) beta = 1e-300L;
        c[0] = qe / beta;
        d[0] = w[0] / beta;
        for (int i = 1; i < n; ++i) {
            beta = static_cast<long double>(diag[i]) - static_cast<long double>(a) -
                   qe * c[i - 1];
            if (std::abs(static_cast<double>(beta)) < 1e-300) beta = 1e-300L;
            c[i] = qe / beta;
            d[i] = (w[i] - qe * d[i - 1]) / beta;
        }
        std::vector<long double> x(n);
        x[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
        long double nrm = 0.0L;
        for (int i = 0; i < n; ++i) nrm += x[i] * x[i];
        nrm = std::sqrt(nrm);
        if (!(static_cast<double>(nrm) > 0.0) || !std::isfinite(static_cast<double>(nrm)))
            return a;
        for (int i = 0; i < n; ++i) x[i] /= nrm;
        // Rayleigh quotient x^T T x
        long double rq = 0.0L;
        for (int i = 0; i < n; ++i) {
            long double tx = static_cast<long double>(diag[i]) * x[i];
            if (i > 0) tx += qe * x[i - 1];
            if (i + 1 < n) tx += qe * x[i + 1];
            rq += x[i] * tx;
        }
        a = static_cast<double>(rq);
        w = std::move(x);
    }
    return a;
}

// Characteristic value from the Fourier tridiagonal at a given truncation.
//
// Selection: the tridiagonal operator has simple spectrum, so its eigenvalues
// never cross as q varies; the branch through a = nu^2 at q = 0 is the p-th
// smallest eigenvalue, p = rank of |nu| among the mode frequencies |nu + 2m|.
// This coincides with m = 0 dominance wherever dominance is unambiguous and
// stays well defined in the deep bound regime |q| >> nu^2. At integer nu the
// m = 0 / m = -nu pair is rank-degenerate at q = 0 and the cosine-type
// combination (sign c_0 = sign c_{-nu}) continues the analytic a_nu(q)
// series; within rounding distance of an integer the two gap edges are
// genuinely indistinguishable and are both reported via AmbiguityError.
TridiagonalPick solve_mathieu_tridiagonal(double nu, double q, int basis_size) {
    const int half = basis_size / 2;
    const int n = 2 * half + 1;  // modes m = -half .. half
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) {
        const double mode = nu + 2.0 * (i - half);
        diag[i] = mode * mode;
    }
    sub.setConstant(q);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("mathieu_char_value: tridiagonal eigensolver failed");
    }
    const auto& vectors = solver.eigenvectors();
    const int center = half;  // row of the m = 0 mode

    const double nu_rounded = std::round(nu);
    const double delta = std::abs(nu - nu_rounded);
    const bool exact_integer = delta < 1e-12;
    const double anu = std::abs(nu);

    int best;
    if (!exact_integer) {
        // nu ~ 0 sits at the band bottom, not a gap: a_nu -> a_0 smoothly
        if (q != 0.0 && nu_rounded != 0.0 &&
            delta < kIntegerNuTol * std::max(1.0, anu)) {
            // rounding-scale distance to a band gap: surface both edges
            int p0 = 0;
            for (int i = 0; i < n; ++i) {
                if (i != center && std::abs(diag[i]) < nu_rounded * nu_rounded - 0.5)
                    ++p0;
            }
            std::ostringstream msg;
            msg << "mathieu_char_value: nu = " << nu
                << " is within rounding distance of an integer, branch "
                   "selection ambiguous (q = "
                << q << ")";
            throw AmbiguityError(msg.str(), solver.eigenvalues()[p0],
                                 solver.eigenvalues()[std::min(p0 + 1, n - 1)]);
        }
        int p = 0;
        for (int i = 0; i < n; ++i) {
            if (i != center && std::abs(nu + 2.0 * (i - half)) < anu) ++p;
        }
        best = p;
    } else if (nu_rounded == 0.0 || q == 0.0) {
        // nu = 0: a_0 is the lowest characteristic value
        int p = 0;
        for (int i = 0; i < n; ++i) {
            if (i != center && std::abs(nu + 2.0 * (i - half)) < anu - 0.5) ++p;
        }
        best = p;
    } else {
        // integer nu: pick the cosine-type edge of the rank-degenerate pair
        int p0 = 0;
        for (int i = 0; i < n; ++i) {
            if (i != center && std::abs(nu + 2.0 * (i - half)) < anu - 0.5) ++p0;
        }
        const int partner = center - static_cast<int>(nu_rounded);
        best = p0;
        if (partner >= 0 && partner < n && p0 + 1 < n) {
            const double s0 = vectors(center, p0) * vectors(partner, p0);
            const double s1 = vectors(center, p0 + 1) * vectors(partner, p0 + 1);
            if (s1 > s0) best = p0 + 1;
        }
    }

    TridiagonalPick pick;
    pick.index = best;
    pick.vector = vectors.col(best);
    pick.value = refine_tridiagonal_eigenvalue(diag, q, solver.eigenvalues()[best],
                                               pick.vector);
    return pick;
}

int default_basis_size(double nu, double q) {
    const int from_nu = static_cast<int>(std::ceil(std::abs(nu)));
    const int from_q = static_cast<int>(std::ceil(3.0 * std::sqrt(std::abs(q))));
    return 2 * (from_nu + from_q) + 21;
}

}  // namespace

void DriveSpec::validate() const {
    if (lambda < 0.0) throw DomainError("DriveSpec: lambda must be >= 0");
    if (N < 1) throw DomainError("DriveSpec: resonance order N must be >= 1");
}

MathieuResult mathieu_char_value(double nu, double q, int basis_size) {
    if (basis_size <= 0) basis_size = default_basis_size(nu, q);
    const int required = 2 * static_cast<int>(std::ceil(std::abs(nu))) + 20;
    if (basis_size < required) {
        std::ostringstream msg;
        msg << "mathieu_char_value: basis_size " << basis_size << " < required "
            << required << " for nu = " << nu;
        throw DomainError(msg.str());
    }

    const TridiagonalPick a = solve_mathieu_tridiagonal(nu, q, basis_size);
    const TridiagonalPick check = solve_mathieu_tridiagonal(nu, q, basis_size + 10);
    const double tol = kConvergenceTol * std::max(1.0, std::abs(a.value));
    if (std::abs(a.value - check.value) > tol) {
        std::ostringstream msg;
        msg << "mathieu_char_value: not converged at basis_size " << basis_size
            << " (shift " << std::abs(a.value - check.value) << ")";
        throw ConvergenceError(msg.str());
    }

    MathieuResult result;
    result.q = q;
    result.nu = nu;
    result.a_nu = check.value;
    result.basis_size = basis_size;
    return result;
}

double mathieu_q(const SpectrumModel& spectrum, const DriveSpec& drive) {
    if (spectrum.zeta == 0.0) {
        throw DomainError(
            "mathieu_q: zeta = 0 (harmonic spectrum), the Mathieu reduction is "
            "degenerate");
    }
    const double n2k2 = drive.N * drive.N * spectrum.kbar * spectrum.kbar;
    return 4.0 * drive.lambda * drive.V_coupling / (n2k2 * spectrum.zeta);
}

QuasiEnergy quasienergy_real_offset(const SpectrumModel& spectrum,
                                    const DriveSpec& drive, double n_offset) {
    drive.validate();
    if (spectrum.zeta == 0.0) {
        throw DomainError(
            "quasienergy: zeta = 0 (harmonic spectrum), use the analytic "
            "harmonic limit in the recurrence module");
    }
    const double kbar = spectrum.kbar;
    const int N = drive.N;
    const double w = spectrum.omega - 1.0 / N;
    const double q = mathieu_q(spectrum, drive);
    const double nu =
        2.0 * n_offset / N + 2.0 * w / (N * kbar * spectrum.zeta);

    QuasiEnergy result;
    result.q = q;
    result.nu = nu;
    result.n_offset = static_cast<int>(std::lround(n_offset));
    result.a_nu = mathieu_char_value(nu, q).a_nu;
    result.epsilon = (N * N * kbar * kbar * spectrum.zeta / 8.0) * result.a_nu -
                     w * w / (2.0 * spectrum.zeta);
    return result;
}

QuasiEnergy quasienergy(const SpectrumModel& spectrum, const DriveSpec& drive,
                        int n_offset) {
    return quasienergy_real_offset(spectrum, drive, static_cast<double>(n_offset));
}

PendulumBands pendulum_matrix_eigs(const SpectrumModel& spectrum,
                                   const DriveSpec& drive, int span) {
    drive.validate();
    const int N = drive.N;
    if (span <= 0) {
        double q_est = 0.0;
        if (spectrum.zeta != 0.0) q_est = mathieu_q(spectrum, drive);
        span = std::max(10 * N,
                        static_cast<int>(std::ceil(8.0 * std::sqrt(std::abs(q_est)) * N)) + 20);
    }
    if (span < 10 * N) throw DomainError("pendulum_matrix_eigs: span must be >= 10 N");

    const int dim = 2 * span + 1;
    const double kbar = spectrum.kbar;
    const double w = spectrum.omega - 1.0 / N;
    const std::complex<double> hop(0.0, -0.5 * drive.lambda * drive.V_coupling);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = static_cast<double>(i - span);
        h(i, i) = kbar * m * w + 0.5 * kbar * kbar * spectrum.zeta * m * m;
        if (i + N < dim) {
            h(i, i + N) = hop;              // couples n -> n+N
            h(i + N, i) = std::conj(hop);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("pendulum_matrix_eigs: eigensolver failed");
    }

    PendulumBands bands;
    bands.span = span;
    bands.values.resize(dim);
    bands.dominant_offset.resize(dim);
    const int core = std::max(2 * N, span / 4);
    for (int j = 0; j < dim; ++j) {
        bands.values[j] = solver.eigenvalues()[j];
        int arg = 0;
        double best = -1.0;
        double edge = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double wgt = std::norm(solver.eigenvectors()(i, j));
            if (wgt > best) {
                best = wgt;
                arg = i;
            }
            if (i < N || i >= dim - N) edge += wgt;
        }
        bands.dominant_offset[j] = arg - span;
        if (std::abs(bands.dominant_offset[j]) <= core && edge > kBoundaryWeightTol) {
            std::ostringstream msg;
            msg << "pendulum_matrix_eigs: span " << span
                << " too small, core band state leaks to the boundary (weight "
                << edge << ")";
            throw SpanError(msg.str());
        }
    }
    return bands;
}

}  // namespace plrec
