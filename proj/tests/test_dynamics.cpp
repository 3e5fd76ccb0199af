#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qnoise/dynamics.hpp"
#include "qnoise/sampler.hpp"

using namespace qnoise;
using fixtures::rel;

namespace {

OscillatorParams unit_osc(double gamma_m = 0.0) {
    OscillatorParams o;
    o.mass = Mass(1.0);
    o.bare_frequency = Rate(1.0);
    o.damping_rate = Rate(gamma_m);
    return o;
}

}  // namespace

TEST_CASE("zero force gives zero trajectory") {
    auto o = unit_osc(0.01);
    TimeGrid g = TimeGrid::spanning(0.0, 20.0, 2001);
    SamplePath f{g, std::vector<double>(g.n_steps, 0.0)};
    auto tr = integrate_langevin(o, {f}, {}, g);
    for (double q : tr[0].position) CHECK(q == 0.0);
}

TEST_CASE("constant force step response") {
    auto o = unit_osc();
    o.mass = Mass(2.0);
    o.bare_frequency = Rate(3.0);
    const double F = 0.7, m = 2.0, w = 3.0;
    TimeGrid g = TimeGrid::spanning(0.0, 10.0, 4001);
    SamplePath f{g, std::vector<double>(g.n_steps, F)};
    auto tr = integrate_langevin(o, {f}, {}, g)[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_steps; ++i) {
        double t = g.time(i);
        worst = std::max(worst, std::fabs(tr.position[i] - F / (m * w * w) * (1.0 - std::cos(w * t))));
    }
    CHECK(worst < 1e-5 * 2.0 * F / (m * w * w));

    // deterministic force alone takes the same route
    auto det = integrate_langevin(o, {}, [&](double) { return F; }, g)[0];
    CHECK(det.position == tr.position);
}

TEST_CASE("Green's function convolution agrees with the stepper") {
    auto o = unit_osc(0.02);
    const double period = kTwoPi;
    TimeGrid g{0.0, 1e-3 * period, 20001};
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N(0.0, 1.0);
    SamplePath f{g, {}};
    for (std::size_t i = 0; i < g.n_steps; ++i) f.values.push_back(N(rng));
    auto a = integrate_langevin(o, {f}, {}, g)[0];
    auto b = step_langevin(o, f);
    double amax = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < g.n_steps; ++i) {
        amax = std::max(amax, std::fabs(a.position[i]));
        dmax = std::max(dmax, std::fabs(a.position[i] - b.position[i]));
    }
    CHECK(dmax < 1e-3 * amax);
}

TEST_CASE("trajectory variance is quadratic in the force scale") {
    auto o = unit_osc(0.05);
    TimeGrid g = TimeGrid::spanning(0.0, 30.0, 3001);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> N(0.0, 1.0);
    SamplePath f{g, {}};
    for (std::size_t i = 0; i < g.n_steps; ++i) f.values.push_back(N(rng));
    SamplePath f2 = f;
    for (double& v : f2.values) v *= 2.0;
    auto a = integrate_langevin(o, {f}, {}, g)[0], b = integrate_langevin(o, {f2}, {}, g)[0];
    for (std::size_t i = 0; i < g.n_steps; i += 250)
        CHECK(b.position[i] * b.position[i] == doctest::Approx(4.0 * a.position[i] * a.position[i]).epsilon(1e-12));
}

TEST_CASE("integrator preconditions") {
    TimeGrid g = TimeGrid::spanning(0.0, 10.0, 2001);
    SamplePath f{g, std::vector<double>(g.n_steps, 1.0)};
    CHECK_THROWS_AS(integrate_langevin(unit_osc(1.0), {f}, {}, g), OverdampedUnsupported);
    TimeGrid coarse = TimeGrid::spanning(0.0, 10.0, 20);
    SamplePath fc{coarse, std::vector<double>(coarse.n_steps, 1.0)};
    CHECK_THROWS_AS(integrate_langevin(unit_osc(), {fc}, {}, coarse), GridTooCoarse);
}

TEST_CASE("excess variance of trivial and white kernels") {
    auto o = unit_osc(0.01);
    CHECK(excess_variance_integral(KernelDecomposition{}, o, 50.0) == 0.0);

    // Ornstein-Uhlenbeck oscillator: c / (4 m^2 gamma_m omega^2) in the long-time limit
    KernelDecomposition white;
    white.delta_coeff = 0.3;
    double v = excess_variance_integral(white, o, 4000.0);
    double expect = 0.3 / (4.0 * 0.01);
    CHECK(rel(v, expect) < 3.0 * 0.01);
}

TEST_CASE("analytic and quadrature variance routes agree") {
    auto dp = fixtures::scaled_cavity(0.05);
    auto o = unit_osc();
    o.bare_frequency = Rate(2e6);
    o.damping_rate = Rate(1e3);
    o.mass = dp.osc.mass;
    SqueezedCoherent s{0.4, 0.3, 0.0, 0.0};
    for (auto b : {Branch::Stationary, Branch::NonStationary}) {
        auto k = cavity_squeezed_kernel(dp, s, b);
        // drop the distributional parts: the quadrature route adds them identically
        k.delta_coeff = k.delta2_coeff = 0.0;
        double t = 3e-6;
        VarianceOptions q;
        q.method = VarianceMethod::Quadrature;
        q.points = 6001;
        double a = excess_variance_integral(k, o, t);
        double n = excess_variance_integral(k, o, t, q);
        CHECK(std::fabs(a - n) < 1e-5 * std::fabs(excess_variance(k, o, t).scale));
    }
}

TEST_CASE("h and h_phi closed forms") {
    CHECK(closed_form_h(1.3, 2.0, 1.7, 0.0) == 0.0);
    for (double phi : {0.0, 0.4, 2.1}) CHECK(closed_form_h_phi(1.3, 2.0, 1.7, phi, 0.0) == 0.0);
    // kappa = 1 with equal frequencies decouples; with Omega_a = 2 Omega_b, t = pi/Omega_b: (1 + 1)^2
    CHECK(closed_form_h(1.0, 1.5, 1.5, 0.8) == doctest::Approx(0.0));
    CHECK(closed_form_h(1.0, 2.0, 1.0, kPi) == doctest::Approx(4.0).epsilon(1e-14));

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.0, 200.0);
    for (int i = 0; i < 10; ++i) {
        double t = U(rng);
        CHECK(closed_form_h_phi(1.1, 2.0, 1.8, 0.7, t) ==
              doctest::Approx(closed_form_h_phi(1.1, 2.0, 1.8, 0.7 + kPi, t)).epsilon(1e-9));
    }
    const double kappa = 1.098;
    double hmax = 0.0, hpmax = 0.0;
    for (int i = 0; i < 200000; ++i) {
        double t = 0.001 * i;
        hmax = std::max(hmax, std::fabs(closed_form_h(kappa, kappa, 1.0, t)));
        hpmax = std::max(hpmax, std::fabs(closed_form_h_phi(kappa, kappa, 1.0, 0.3, t)));
    }
    CHECK(hmax <= (2 + kappa) * (2 + kappa));
    CHECK(hpmax <= (2 + kappa) * (2 + kappa) + 2);
}

TEST_CASE("optical quadrature variance") {
    auto dp = fixtures::table1();
    CHECK(optical_quadrature_variance(dp, 0.0) == 0.0);
    double peak = 0.0;
    const double wm = dp.osc.bare_frequency.value();
    for (int i = 0; i < 20000; ++i) peak = std::max(peak, optical_quadrature_variance(dp, i * 2e-3 * kTwoPi / wm));
    // frozen from tests/oracles/oracles.py [table1] light_peak
    CHECK(rel(std::sqrt(peak), 3.6314427722439134e-10) < 1e-4);

    PhysicalConstants k;
    auto c = fixtures::table1_cavity(k);
    c.tweezer_field = EField(0.0);
    auto off = derive_cavity(k, fixtures::table1_oscillator(), c);
    CHECK(optical_quadrature_variance(off, 1e-6) == 0.0);

    auto res = fixtures::table1_cavity(k);
    res.central_frequency = fixtures::table1_oscillator().bare_frequency;
    res.linewidth = Rate(1.0);
    CHECK_THROWS_AS(optical_quadrature_variance(derive_cavity(k, fixtures::table1_oscillator(), res), 1e-6),
                    ResonanceSingularity);
}

TEST_CASE("steady-state rms") {
    auto dp = fixtures::table1();
    const double q0 = dp.q0.value();
    // frozen from tests/oracles/oracles.py [table1]
    CHECK(rel(steady_state_rms(Vacuum{}, dp) / q0, 5.8044675758608798e-6) < 1e-12);
    CHECK(rel(steady_state_rms(SqueezedCoherent{14.0, 0.0, 0.0, 0.0}, dp) / q0, 4.935943028514285) < 1e-12);
    SqueezedThermal th{squeezing_r_from_db(12.0), 0.0, 1e-5};
    CHECK(rel(steady_state_rms(th, dp) / q0, 0.0073219229103724851) < 1e-9);

    PhysicalConstants k2;
    k2.hbar = Action(2.0 * k2.hbar.value());
    auto d2 = derive_cavity(k2, fixtures::table1_oscillator(), fixtures::table1_cavity());
    CHECK(steady_state_rms(Vacuum{}, d2) / d2.q0.value() ==
          doctest::Approx(steady_state_rms(Vacuum{}, dp) / q0).epsilon(1e-14));
}

TEST_CASE("variance trace radicand") {
    VarianceTrace tr;
    tr.grid = TimeGrid{0.0, 1.0, 3};
    tr.sigma0_sq = {1.0, 1.0, 1.0};
    tr.delta_sigma_st_sq = {0.0, 3.0, 0.5};
    tr.delta_sigma_nst_sq = {0.0, 0.0, -0.75};
    tr.finalize();
    CHECK(tr.total_sigma[1] == 2.0);
    CHECK(tr.total_sigma[2] == doctest::Approx(std::sqrt(0.75)));
    tr.delta_sigma_nst_sq[2] = -2.0;
    CHECK_THROWS_AS(tr.finalize(), NegativeVariance);
}
