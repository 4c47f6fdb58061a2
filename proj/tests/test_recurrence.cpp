#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "plrec/errors.hpp"
#include "plrec/recurrence.hpp"
#include "plrec/spectrum.hpp"

using namespace plrec;

namespace {

SpectrumModel bouncer_model(double n_bar, double kbar = 1.0) {
    return build_spectrum_model(make_potential(1.0, 1.0, DomainKind::truncated),
                                kbar, n_bar);
}

SpectrumModel harmonic_model(double n_bar = 10.0) {
    return build_spectrum_model(make_potential(0.5, 2.0, DomainKind::symmetric),
                                1.0, n_bar);
}

// Closed forms of the linear gravitational well, written out independently of
// the general rho expressions.
struct LinearWellTimes {
    double T0_cl, T0_Q, mu, Tlam_cl, Tlam_Q;
};

LinearWellTimes linear_well_times(double kbar, double n_bar, double gamma,
                                  double E, double lambda_V, int N,
                                  double delta) {
    LinearWellTimes t;
    const double level = n_bar + gamma / 4.0;
    t.T0_cl = 3.0 * M_PI * kbar * level / E;
    t.T0_Q = 18.0 * M_PI * kbar * level * level / E;
    t.mu = -N * delta / (6.0 * level);
    const double g = lambda_V * delta * delta / (2.0 * E);
    const double m2 = t.mu * t.mu;
    t.Tlam_cl = (1.0 + 0.5 * g * g / ((1.0 - m2) * (1.0 - m2))) * t.T0_cl * delta;
    t.Tlam_Q = (1.0 - 0.5 * g * g * (3.0 + m2) / std::pow(1.0 - m2, 3)) * t.T0_Q;
    return t;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("harmonic undriven times: T0_cl = 2 pi, T0_Q infinite") {
    const UndrivenTimes t = undriven_times(harmonic_model());
    CHECK(t.T0_cl == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(std::isinf(t.T0_Q));
    CHECK(t.regime == Regime::harmonic);
    CHECK(t.zeta_sign == 0);
}

TEST_CASE("linear well undriven times match the specialized closed forms") {
    const SpectrumModel model = bouncer_model(20.0);
    const UndrivenTimes t = undriven_times(model);
    CHECK(t.T0_cl ==
          doctest::Approx(3.0 * M_PI * 20.75 / model.E_nbar).epsilon(1e-12));
    CHECK(t.T0_Q ==
          doctest::Approx(18.0 * M_PI * 20.75 * 20.75 / model.E_nbar).epsilon(1e-12));
    CHECK(t.regime == Regime::loose);
    CHECK(t.zeta_sign == -1);
}

TEST_CASE("T0_Q / T0_cl = 2 (4+rho) (n_bar + gamma/4) / |rho|") {
    struct Point {
        double k, n_bar;
    };
    for (const Point& p : std::vector<Point>{{1.0, 20}, {1.5, 15}, {3.0, 40},
                                             {4.0, 12}, {6.0, 33}}) {
        const DomainKind dom =
            p.k == 1.0 ? DomainKind::truncated : DomainKind::symmetric;
        const SpectrumModel model =
            build_spectrum_model(make_potential(1.0, p.k, dom), 1.0, p.n_bar);
        const UndrivenTimes t = undriven_times(model);
        const double rho = p.k - 2.0;
        const double level = p.n_bar + model.potential.maslov_gamma / 4.0;
        CHECK(t.T0_Q / t.T0_cl ==
              doctest::Approx(2.0 * (4.0 + rho) * level / std::abs(rho))
                  .epsilon(1e-12));
    }
}

TEST_CASE("lambda = 0: Tlam_cl = T0_cl * Delta and Tlam_Q = T0_Q") {
    const SpectrumModel model = bouncer_model(20.0);
    const RecurrenceTimes t = driven_times(model, DriveSpec{0.0, 0.0, 2});
    CHECK(t.M0_cl == 0.0);
    CHECK(t.M0_Q == 0.0);
    CHECK(t.Tlam_cl == doctest::Approx(t.T0_cl * t.Delta).epsilon(1e-14));
    CHECK(t.Tlam_Q == doctest::Approx(t.T0_Q).epsilon(1e-14));
}

TEST_CASE("harmonic driven times are lambda independent") {
    const SpectrumModel model = harmonic_model();
    for (double lambda : {0.0, 0.05, 0.3}) {
        const RecurrenceTimes t = driven_times(model, DriveSpec{lambda, 1.0, 2});
        CHECK(t.Tlam_cl == doctest::Approx(t.T0_cl * t.Delta).epsilon(1e-14));
        CHECK(std::isinf(t.Tlam_Q));
        CHECK(t.regime == Regime::harmonic);
    }
}

TEST_CASE("general rho forms reduce to the linear-well closed forms") {
    const SpectrumModel model = bouncer_model(20.0);
    const DriveSpec drive{0.05, 1.0, 1};
    const RecurrenceTimes t = driven_times(model, drive);
    const LinearWellTimes ref = linear_well_times(
        1.0, 20.0, 3.0, model.E_nbar, drive.lambda * drive.V_coupling, 1, t.Delta);
    CHECK(t.T0_cl == doctest::Approx(ref.T0_cl).epsilon(1e-12));
    CHECK(t.T0_Q == doctest::Approx(ref.T0_Q).epsilon(1e-12));
    CHECK(t.mu == doctest::Approx(ref.mu).epsilon(1e-12));
    CHECK(t.Tlam_cl == doctest::Approx(ref.Tlam_cl).epsilon(1e-12));
    CHECK(t.Tlam_Q == doctest::Approx(ref.Tlam_Q).epsilon(1e-12));
}

TEST_CASE("shift directions: |Tlam_cl| grows and Tlam_Q shrinks with lambda") {
    const SpectrumModel model = bouncer_model(20.0);
    double prev_cl = -std::numeric_limits<double>::infinity();
    double prev_q = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        const double lambda = 0.01 * (i + 1);
        const RecurrenceTimes t = driven_times(model, DriveSpec{lambda, 1.0, 3});
        CHECK(t.mu * t.mu < 1.0);
        CHECK(std::abs(t.Tlam_cl) > prev_cl);
        CHECK(t.Tlam_Q < prev_q);
        prev_cl = std::abs(t.Tlam_cl);
        prev_q = t.Tlam_Q;
    }
}

TEST_CASE("n_bar scaling laws of the undriven times") {
    std::vector<double> levels, t_cl, t_q;
    const PotentialSpec bouncer = make_potential(1.0, 1.0, DomainKind::truncated);
    for (double n = 10; n <= 200; n += 10) {
        const UndrivenTimes t =
            undriven_times(build_spectrum_model(bouncer, 1.0, n));
        levels.push_back(n + 0.75);
        t_cl.push_back(t.T0_cl);
        t_q.push_back(t.T0_Q);
    }
    CHECK(std::abs(loglog_slope(levels, t_cl) - 1.0 / 3.0) < 0.05);
    CHECK(std::abs(loglog_slope(levels, t_q) - 4.0 / 3.0) < 0.05);

    // tight representative: k = 4, slopes -rho/(4+rho) = -1/3 and 4/(4+rho) = 2/3
    const PotentialSpec quartic = make_potential(1.0, 4.0, DomainKind::symmetric);
    levels.clear();
    t_cl.clear();
    t_q.clear();
    for (double n = 10; n <= 200; n += 10) {
        const UndrivenTimes t =
            undriven_times(build_spectrum_model(quartic, 1.0, n));
        levels.push_back(n + 0.5);
        t_cl.push_back(t.T0_cl);
        t_q.push_back(t.T0_Q);
    }
    CHECK(std::abs(loglog_slope(levels, t_cl) + 1.0 / 3.0) < 0.05);
    CHECK(std::abs(loglog_slope(levels, t_q) - 2.0 / 3.0) < 0.05);
}

TEST_CASE("kbar scaling of the undriven times") {
    std::vector<double> kbars, t_cl_tight, t_cl_loose, t_q_tight;
    const PotentialSpec quartic = make_potential(1.0, 4.0, DomainKind::symmetric);
    const PotentialSpec bouncer = make_potential(1.0, 1.0, DomainKind::truncated);
    for (double kbar = 0.5; kbar <= 2.0; kbar += 0.25) {
        kbars.push_back(kbar);
        const UndrivenTimes tq =
            undriven_times(build_spectrum_model(quartic, kbar, 30.0));
        const UndrivenTimes tb =
            undriven_times(build_spectrum_model(bouncer, kbar, 30.0));
        t_cl_tight.push_back(tq.T0_cl);
        t_q_tight.push_back(tq.T0_Q);
        t_cl_loose.push_back(tb.T0_cl);
    }
    // rho > 0: T ~ kbar^(-rho/(4+rho)); rho < 0: T ~ kbar^(|rho|/(4-|rho|))
    CHECK(std::abs(loglog_slope(kbars, t_cl_tight) + 1.0 / 3.0) < 0.02);
    CHECK(std::abs(loglog_slope(kbars, t_q_tight) + 1.0 / 3.0) < 0.02);
    CHECK(std::abs(loglog_slope(kbars, t_cl_loose) - 1.0 / 3.0) < 0.02);
}

TEST_CASE("box asymptote: T0_Q loses its n_bar dependence as rho grows") {
    double prev_sensitivity = std::numeric_limits<double>::infinity();
    for (double rho : {10.0, 100.0, 1000.0}) {
        const PotentialSpec pot =
            make_potential(1.0, 2.0 + rho, DomainKind::symmetric, 4);
        const double t1 =
            undriven_times(build_spectrum_model(pot, 1.0, 20.0)).T0_Q;
        const double t2 =
            undriven_times(build_spectrum_model(pot, 1.0, 40.0)).T0_Q;
        const double sensitivity = std::abs(t2 - t1) / t1;
        CHECK(sensitivity < prev_sensitivity);
        prev_sensitivity = sensitivity;
    }
    // the limit itself: 16 / (pi kbar) for the width-2 box
    const PotentialSpec pot = make_potential(1.0, 1002.0, DomainKind::symmetric, 4);
    CHECK(undriven_times(build_spectrum_model(pot, 1.0, 20.0)).T0_Q ==
          doctest::Approx(16.0 / M_PI).epsilon(0.02));
}

TEST_CASE("mu is inversely proportional to n_bar + gamma/4 at fixed Delta ratio") {
    const PotentialSpec quartic = make_potential(1.0, 4.0, DomainKind::symmetric);
    double reference = 0.0;
    for (double n : {15.0, 30.0, 60.0, 120.0}) {
        const SpectrumModel model = build_spectrum_model(quartic, 1.0, n);
        const RecurrenceTimes t = driven_times(model, DriveSpec{0.01, 1.0, 1});
        const double product = t.mu * (n + 0.5) / t.Delta;
        if (reference == 0.0) {
            reference = product;
        } else {
            CHECK(product == doctest::Approx(reference).epsilon(1e-10));
        }
        // explicit rho form: mu = N rho Delta / (2 (4+rho) (n+gamma/4))
        CHECK(t.mu ==
              doctest::Approx(2.0 * t.Delta / (2.0 * 6.0 * (n + 0.5))).epsilon(1e-12));
    }
}

TEST_CASE("derivative route at lambda = 0 reproduces the closed forms") {
    const SpectrumModel model = bouncer_model(20.0);
    const DriveSpec drive{0.0, 0.0, 1};
    const RecurrenceTimes closed = driven_times(model, drive);
    const DerivativeTimes fd = times_from_quasienergy(model, drive);
    CHECK(std::abs(fd.T1 - closed.T0_cl * closed.Delta) /
              std::abs(closed.T0_cl * closed.Delta) <
          0.01);
    CHECK(std::abs(fd.T2 - closed.T0_Q) / closed.T0_Q < 0.01);
}

TEST_CASE("derivative route rejects the harmonic band") {
    const SpectrumModel model = harmonic_model();
    CHECK_THROWS_AS(times_from_quasienergy(model, DriveSpec{0.01, 1.0, 2}),
                    DomainError);
}

TEST_CASE("sum rule residuals") {
    // lambda = 0: tight residual is exactly 3(Delta-1)/4 and shrinks as
    // Delta -> 1 (N omega >> 1)
    const SpectrumModel model =
        build_spectrum_model(make_potential(1.0, 4.0, DomainKind::symmetric), 1.0, 50.0);
    for (int N : {5, 20, 50}) {
        const DriveSpec drive{0.0, 0.0, N};
        const RecurrenceTimes t = driven_times(model, drive);
        const SumRuleResiduals res = sum_rule_check(model, drive);
        CHECK(res.tight ==
              doctest::Approx(0.75 * (t.Delta - 1.0)).epsilon(1e-12));
        CHECK(res.loose == doctest::Approx(t.Delta - 0.25).epsilon(1e-12));
    }
    const SumRuleResiduals res50 =
        sum_rule_check(model, DriveSpec{0.0, 0.0, 50});
    CHECK(std::abs(res50.tight) < 0.01);
}

TEST_CASE("singularity and regime guards") {
    // harmonic with N = 1: omega = 1 = omega_N exactly
    CHECK_THROWS_AS(driven_times(harmonic_model(), DriveSpec{0.1, 1.0, 1}),
                    SingularityError);

    // fabricated spectrum with mu^2 = 1
    SpectrumModel rigged;
    rigged.potential = make_potential(1.0, 4.0, DomainKind::symmetric);
    rigged.kbar = 1.0;
    rigged.n_bar = 10.0;
    rigged.E_nbar = 1.0;
    rigged.omega = 2.0;   // Delta = 2 for N = 1
    rigged.zeta = 2.0;    // mu = 1*1*2*2/(2*2) = 1
    CHECK_THROWS_AS(driven_times(rigged, DriveSpec{0.1, 1.0, 1}), SingularityError);

    // free-particle degeneracy rho <= -2
    SpectrumModel free_like = rigged;
    free_like.potential.exponent_k = -0.1;  // bypasses validate: rho = -2.1
    CHECK_THROWS_AS(undriven_times(free_like), RangeError);
    CHECK(classify_regime(-2.0) == Regime::free_particle);
}
