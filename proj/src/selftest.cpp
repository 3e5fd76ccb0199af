#include "qnoise/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qnoise/dynamics.hpp"
#include "qnoise/kernels.hpp"
#include "qnoise/rng.hpp"
#include "qnoise/sampler.hpp"

namespace qnoise {

namespace {

DerivedCavityParams demo_cavity() {
    PhysicalConstants k;
    OscillatorParams o;
    o.mass = Mass(2.8e-18);
    o.bare_frequency = Rate(kTwoPi * 190e3);
    o.damping_rate = Rate(5e-6);
    CavityParams c;
    c.length = Length(0.03);
    c.central_frequency = Rate(1.22e15);
    c.linewidth = Rate(kTwoPi * 193e3);
    c.tweezer_field = EField(1.257e7);
    c.polarizability = polarizability_from_volume(k, Volume(2.8e-18 / 2200.0));
    return derive_cavity(k, o, c);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

std::vector<CheckResult> run_selftest(int threads) {
    std::vector<CheckResult> out;
    auto check = [&](std::string name, bool ok, std::string detail) { out.push_back({std::move(name), ok, std::move(detail)}); };

    auto dp = demo_cavity();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 5.0 / dp.gamma());

    {
        SqueezedCoherent sq{1.3, 0.4, 0.0, 0.0};
        auto kv = cavity_vacuum_kernel(dp);
        auto ks = cavity_squeezed_kernel(dp, sq, Branch::Stationary);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            double t = U(rng), tp = U(rng);
            double a = ks.smooth(t, tp), b = std::cosh(2.6) * kv.smooth(t, tp);
            worst = std::max(worst, std::fabs(a - b) / std::max(std::fabs(b), 1e-300));
        }
        worst = std::max(worst, std::fabs(ks.delta_coeff / (std::cosh(2.6) * kv.delta_coeff) - 1.0));
        check("squeezing factorization", worst < 1e-12, "max rel " + num(worst));
    }
    {
        SqueezedCoherent sq{0.8, 0.7, 0.0, 0.0};
        SqueezedCoherent sq2 = sq;
        sq2.phi += kPi;
        auto k1 = cavity_squeezed_kernel(dp, sq, Branch::NonStationary);
        auto k2 = cavity_squeezed_kernel(dp, sq2, Branch::NonStationary);
        double worst = 0.0, scale = k1.sum_terms.at(0).c * k1.sum_terms[0].c + k1.sum_terms[0].s * k1.sum_terms[0].s;
        scale = std::sqrt(scale);
        for (int i = 0; i < 50; ++i) {
            double t = U(rng), tp = U(rng);
            worst = std::max(worst, std::fabs(k1.smooth(t, tp) - k1.smooth(tp, t)) / scale);
            worst = std::max(worst, std::fabs(k1.smooth(t, tp) - k2.smooth(t, tp)) / scale);
        }
        check("non-stationary symmetry and phi period", worst < 1e-12, "max rel " + num(worst));
    }
    {
        double worst = 0.0;
        for (double tau : {0.0, 0.3 / dp.gamma(), 2.0 / dp.gamma()}) {
            auto j = lorentzian_J(tau, 1e6, 1e3);
            auto q = lorentzian_J_quadrature(tau, 1e6, 1e3, JDomain::FullLine);
            double env = kPi / 1e3 * std::exp(-1e3 * tau);
            worst = std::max({worst, std::fabs(j.J1 - q.J1) / env, std::fabs(j.J2 - q.J2) / env});
        }
        check("J closed forms vs quadrature", worst < 1e-6, "max rel " + num(worst));
    }
    {
        auto rep = fdt_check(dp, SqueezedThermal{0.0, 0.0, 1e-5}, 5.0 / dp.gamma(), 200);
        check("fluctuation-dissipation", rep.max_rel_dev < 1e-6 && rep.delta_rel_dev < 1e-12,
              "smooth " + num(rep.max_rel_dev) + ", delta " + num(rep.delta_rel_dev));
    }
    {
        bool ok = closed_form_h(1.1, 2.0, 1.8, 0.0) == 0.0 && closed_form_h_phi(1.1, 2.0, 1.8, 0.6, 0.0) == 0.0;
        check("h(0) = h_phi(0) = 0", ok, "");
    }
    {
        Philox4x32 g(0);
        auto w = g({0, 0, 0, 0});
        bool ok = w[0] == 0x6627e8d5u && w[1] == 0xe169c58du && w[2] == 0xbc57ac4cu && w[3] == 0x9b00dbd8u;
        check("Philox4x32-10 known answer", ok, "");
    }
    {
        TimeGrid g = TimeGrid::spanning(0.0, 10.0 * kTwoPi / dp.omega_c(), 128);
        auto C = assemble_covariance({cavity_vacuum_kernel(dp)}, g, threads);
        bool toe = true;
        for (Eigen::Index i = 1; i < C.m.rows(); ++i)
            for (Eigen::Index j = 1; j < C.m.cols(); ++j)
                if (C.m(i, j) != C.m(i - 1, j - 1)) toe = false;
        auto f = factorize(C);
        auto a = sample_paths(f, 3, 42, 1), b = sample_paths(f, 3, 42, std::max(2, threads));
        bool same = true;
        for (std::size_t p = 0; p < 3; ++p) same = same && a[p].values == b[p].values;
        check("Toeplitz stationary covariance", toe, "");
        check("sampling independent of worker count", same, "jitter/maxdiag " + num(f.jitter / f.max_diag));
    }
    {
        OscillatorParams o;
        o.mass = Mass(1.0);
        o.bare_frequency = Rate(1.0);
        KernelDecomposition k;
        k.diff_terms.push_back({0.0, 1.3, 1.0, 0.0});
        double t = 7.0;
        double an = excess_variance_integral(k, o, t);
        VarianceOptions q;
        q.method = VarianceMethod::Quadrature;
        q.points = 4001;
        double qu = excess_variance_integral(k, o, t, q);
        double rel = std::fabs(an - qu) / std::fabs(an);
        check("analytic vs quadrature variance", rel < 1e-5, "rel " + num(rel));
    }
    return out;
}

}  // namespace qnoise
