/**
 * Acceptance suite: one PASS/FAIL line per criterion 1-16.
 *
 *   acceptance            run all criteria, exit 1 if any fails
 *   acceptance --only N   run criterion N alone (used by ctest)
 *
 * Tolerances are pinned below and never widened to make a criterion pass;
 * a FAIL line carries the measured value so the gap is visible.
 */

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qnoise/cli_io.hpp"
#include "qnoise/dynamics.hpp"
#include "qnoise/kernels.hpp"
#include "qnoise/scenarios.hpp"

using namespace qnoise;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kC1_gc = 0.10, kC1_eps = 0.10, kC1_q0 = 0.15, kC1_f0_factor = 3.0;
constexpr double kC2_tol = 0.30;
constexpr double kC3_tol = 0.30;
constexpr double kC4_factor = 2.0;
constexpr double kC5_omega = 0.05, kC5_ge = 0.10, kC5_f0 = 0.20;
constexpr double kC6_peak = 0.15;
constexpr double kC7_tol = 0.20;
constexpr double kC8_tol = 0.05;
constexpr double kC9_tol = 1e-8;
constexpr double kC10_tol = 1e-6;
constexpr double kC11_tol = 1e-5;
constexpr double kC12_tol = 1e-6;
constexpr double kC13_tol = 1e-12;
constexpr double kC14_tol = 1e-6;
constexpr double kC15_maxz = 4.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::string cfg_path(const std::string& name) { return std::string(QNOISE_SOURCE_DIR) + "/configs/" + name; }

RunSummary run(const std::string& name) { return run_scenario(parse_config(cfg_path(name))); }

Outcome c1() {
    auto s = run("table1_vacuum.cfg");
    double gc = s.at("g_c"), eps = s.at("epsilon"), q0 = s.at("q0"), f0 = s.at("f0");
    bool ok = rel(gc, kTwoPi * 18e3) <= kC1_gc && rel(eps, 0.1) <= kC1_eps && rel(q0, 3.6e-12) <= kC1_q0 &&
              f0 >= 1e-18 / kC1_f0_factor && f0 <= 1e-18 * kC1_f0_factor;
    return {ok, "g_c/2pi=" + fmt(gc / kTwoPi) + " Hz, eps=" + fmt(eps) + ", q0=" + fmt(q0) + " m, f0=" + fmt(f0) + " N"};
}

Outcome c2() {
    double v = run("table1_vacuum.cfg").at("steady_sigma_over_q0");
    return {rel(v, 2e-6) <= kC2_tol, "dsigma/q0=" + fmt(v) + " (target 2e-6 +-30%)"};
}

Outcome c3() {
    double a = run("table1_squeezed_r14.cfg").at("steady_sigma_over_q0");
    double b = run("table1_thermal_12db.cfg").at("steady_sigma_over_q0");
    bool ok = rel(a, 2.0) <= kC3_tol && rel(b, 2.0) <= kC3_tol;
    return {ok, "r=14: " + fmt(a) + ", 12 dB + kT/hw=1e5: " + fmt(b) + " (targets 2 +-30%)"};
}

Outcome c4() {
    double p = run("light_probe.cfg").at("peak_delta_sigma_x");
    double ratio = p / 1e-10;
    return {ratio <= kC4_factor && ratio >= 1.0 / kC4_factor, "peak dsigma_X=" + fmt(p) + " (target 1e-10 within x2)"};
}

Outcome c5() {
    auto s = run("table2_fig2.cfg");
    double Oa = s.at("Omega_a") / kTwoPi, Ob = s.at("Omega_b") / kTwoPi, ge = std::fabs(s.at("g_e")) / kTwoPi,
           f0 = s.at("f0");
    bool ok = rel(Oa, 147e3) <= kC5_omega && rel(Ob, 134e3) <= kC5_omega && rel(ge, 51e3) <= kC5_ge &&
              rel(f0, 7e-18) <= kC5_f0;
    return {ok, "Omega_a/2pi=" + fmt(Oa) + ", Omega_b/2pi=" + fmt(Ob) + ", |g_e|/2pi=" + fmt(ge) + " Hz, f0=" + fmt(f0)};
}

Outcome c6() {
    auto s = run("table2_fig2.cfg");
    double s0 = s.at("sigma0_over_q0"), peak = s.at("max_sigma_over_q0"), below = s.at("points_below_sigma0");
    bool exact = std::fabs(s0 - std::sqrt(21.0)) <= 4.0 * std::numeric_limits<double>::epsilon() * std::sqrt(21.0);
    bool a = exact, b = rel(peak, 9.0) <= kC6_peak, c = below > 0.0;
    return {a && b && c, std::string("sigma0/q0b=") + fmt(s0) + (a ? " ok" : " MISMATCH") + "; peak/q0b=" + fmt(peak) +
                             (b ? " ok" : " out of 15%") + "; points below sigma0=" + fmt(below) +
                             (c ? " ok" : " (none)")};
}

Outcome c7() {
    double n30 = run("fig7_30db.cfg").at("effective_nbar");
    double n10 = run("fig7_10db.cfg").at("effective_nbar");
    bool ok = rel(n30, 220.0) <= kC7_tol && rel(n10, 71.0) <= kC7_tol;
    return {ok, "n'(r=3)=" + fmt(n30) + " (target 220), n'(10 dB)=" + fmt(n10) + " (target 71)"};
}

Outcome c8() {
    double c = run("thermal_nbar05.cfg").at("coth_factor");
    return {rel(c, 2.12) <= kC8_tol, "coth factor=" + fmt(c) + " (target 2.12 +-5%)"};
}

// Distribution identities as printed: f(tau) delta^(k)(tau) -> sum c_j delta^(j).
struct Identity {
    const char* text;
    int order;
    bool use_sin;
    std::function<std::vector<DistTerm>(double)> rhs;
};

// Gaussian bump and its derivatives at 0.
struct Bump {
    double mu, s;
    double operator()(double x) const { return std::exp(-(x - mu) * (x - mu) / (2 * s * s)); }
    double d(int j) const {
        double p = (*this)(0.0), u = mu / (s * s);
        if (j == 0) return p;
        if (j == 1) return u * p;
        return (u * u - 1.0 / (s * s)) * p;
    }
};

// <delta_eps^(k), g> for the Gaussian mollifier, Richardson-extrapolated in eps^2.
double mollified(int k, const std::function<double(double)>& g, double eps) {
    auto at = [&](double e) {
        auto kern = [&](double x) {
            double d = std::exp(-x * x / (2 * e * e)) / (e * std::sqrt(kTwoPi));
            if (k == 1) d *= -x / (e * e);
            if (k == 2) d *= x * x / (e * e * e * e) - 1.0 / (e * e);
            return d * g(x);
        };
        double total = 0.0;
        for (int p = -10; p < 10; ++p)
            total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(kern, p * e, (p + 1) * e, 10, 1e-15);
        return total;
    };
    return (4.0 * at(eps / 2) - at(eps)) / 3.0;
}

Outcome c9() {
    std::vector<Identity> ids = {
        {"delta cos -> delta", 0, false, [](double) { return std::vector<DistTerm>{{1.0, 0}}; }},
        {"delta' sin -> -w delta", 1, true, [](double w) { return std::vector<DistTerm>{{-w, 0}}; }},
        {"delta' cos -> -delta'", 1, false, [](double) { return std::vector<DistTerm>{{-1.0, 1}}; }},
        {"delta'' sin -> 2w delta'", 2, true, [](double w) { return std::vector<DistTerm>{{2.0 * w, 1}}; }},
        {"delta'' cos -> delta'' - w^2 delta", 2, false,
         [](double w) { return std::vector<DistTerm>{{1.0, 2}, {-w * w, 0}}; }},
    };
    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> Uw(0.5, 5.0), Us(0.5, 2.0), Uu(-1.0, 1.0);
    std::vector<double> worst(ids.size(), 0.0);
    for (int n = 0; n < 20; ++n) {
        double w = Uw(rng), s = Us(rng);
        Bump phi{Uu(rng) * s, s};
        double eps = 1e-3 * std::min(s, 1.0 / w);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto& id = ids[i];
            auto g = [&](double x) { return (id.use_sin ? std::sin(w * x) : std::cos(w * x)) * phi(x); };
            double lhs = mollified(id.order, g, eps);
            double rhs = 0.0, scale = std::fabs(lhs);
            for (const auto& t : id.rhs(w)) {
                double v = t.coeff * ((t.order % 2) ? -1.0 : 1.0) * phi.d(t.order);
                rhs += v;
                scale += std::fabs(v);
            }
            worst[i] = std::max(worst[i], std::fabs(lhs - rhs) / scale);
        }
    }
    bool ok = true;
    std::string d;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        ok = ok && worst[i] < kC9_tol;
        d += std::string(i ? "; " : "") + ids[i].text + ": " + fmt(worst[i]);
    }
    return {ok, d};
}

Outcome c10() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        double wc = std::pow(10.0, 3.0 + 6.0 * U(rng));
        double nu = std::pow(10.0, -6.0 + 4.0 * U(rng));
        double gam = nu * wc;
        double tau = 5.0 * U(rng) / gam;
        auto j = lorentzian_J(tau, wc, gam);
        auto q = lorentzian_J_quadrature(tau, wc, gam, JDomain::FullLine);
        double env = kPi / gam * std::exp(-gam * tau);
        worst = std::max({worst, std::fabs(j.J1 - q.J1) / env, std::fabs(j.J2 - q.J2) / env});
    }
    return {worst < kC10_tol, "max relative error (envelope-normalised) " + fmt(worst) + " over 50 points"};
}

Outcome c11() {
    auto cfg = parse_config(cfg_path("table1_vacuum.cfg"));
    auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
    const double wc = dp.omega_c(), gam = dp.gamma(), f0sq = dp.f0.value() * dp.f0.value();
    auto kv = cavity_vacuum_kernel(dp);
    const double r = 0.5;
    auto kn = cavity_squeezed_kernel(dp, SqueezedCoherent{r, kPi / 4.0, 0.0, 0.0}, Branch::NonStationary);
    double worst = 0.0;
    for (double tau0 : {1.0 / gam, 3.0 / gam, 10.0 / gam}) {
        // Closed forms in a local coordinate x = tau - tau0 so the fast phase keeps full precision.
        const double c = std::cos(wc * tau0), s = std::sin(wc * tau0);
        auto J1 = [&](double x) {
            return kPi / gam * std::exp(-gam * (tau0 + x)) * (c * std::cos(wc * x) - s * std::sin(wc * x));
        };
        auto J2 = [&](double x) {
            return kPi / gam * std::exp(-gam * (tau0 + x)) * (s * std::cos(wc * x) + c * std::sin(wc * x));
        };
        auto d4 = [](const std::function<double(double)>& f, double h) {
            return (f(-2 * h) - 4 * f(-h) + 6 * f(0.0) - 4 * f(h) + f(2 * h)) / std::pow(h, 4);
        };
        // h omega_c = 0.1 balances rounding (~1e-10) against the Richardson remainder (~3e-7)
        const double h = 0.1 / wc;
        double fd1 = (4.0 * d4(J1, h / 2) - d4(J1, h)) / 3.0;
        double fd2 = (4.0 * d4(J2, h / 2) - d4(J2, h)) / 3.0;
        double env = std::exp(-gam * tau0);
        double a1 = kv.smooth_tau(tau0) / f0sq;
        double a2 = kn.smooth(tau0 / 2.0, tau0 / 2.0) / (std::sinh(2 * r) * f0sq);
        worst = std::max(worst, std::fabs(gam / kPi * fd1 / std::pow(wc, 4) - a1) / env);
        worst = std::max(worst, std::fabs(gam / kPi * fd2 / std::pow(wc, 4) - a2) / env);
    }
    return {worst < kC11_tol, "max relative error " + fmt(worst) + " at tau in {1,3,10}/gamma"};
}

Outcome c12() {
    auto cfg = parse_config(cfg_path("table1_vacuum.cfg"));
    auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
    auto rep = fdt_check(dp, SqueezedThermal{0.0, 0.0, 1e-5}, 5.0 / dp.gamma(), 2000);
    bool ok = rep.max_rel_dev < kC12_tol && rep.delta_rel_dev < kC12_tol;
    return {ok, "smooth " + fmt(rep.max_rel_dev) + ", delta " + fmt(rep.delta_rel_dev) + " over " +
                    std::to_string(rep.points) + " tau points"};
}

Outcome c13() {
    auto cfg = parse_config(cfg_path("table1_vacuum.cfg"));
    auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
    std::mt19937_64 rng(1313);
    std::uniform_real_distribution<double> U(0.0, 5.0 / dp.gamma()), R(0.0, 3.0);
    double worst = 0.0;
    auto kv = cavity_vacuum_kernel(dp);
    for (int i = 0; i < 100; ++i) {
        double r = R(rng), t = U(rng), tp = U(rng);
        auto ks = cavity_squeezed_kernel(dp, SqueezedCoherent{r, 0.3, 0.0, 0.0}, Branch::Stationary);
        double c = std::cosh(2 * r);
        worst = std::max({worst, rel(ks.smooth(t, tp), c * kv.smooth(t, tp)), rel(ks.delta_coeff, c * kv.delta_coeff),
                          rel(ks.delta2_coeff, c * kv.delta2_coeff)});
    }
    return {worst < kC13_tol, "max relative deviation " + fmt(worst) + " at 100 points"};
}

Outcome c14() {
    auto s = run("table2_fig2.cfg");
    const double Oa = s.at("Omega_a"), Ob = s.at("Omega_b"), kappa = s.at("kappa");
    const double norm = Ob * Ob * (kappa * kappa - 1.0) * (kappa * kappa - 1.0);
    using GL = boost::math::quadrature::gauss<double, 30>;
    // int_0^t int_0^t sin(Ob(t-s)) sin(Ob(t-s')) K(s,s') ds ds', 30-point Gauss on half-period panels
    auto dbl = [&](double t, const std::function<double(double, double)>& K) {
        double P = 0.5 * kTwoPi / std::max(Oa, Ob);
        int panels = static_cast<int>(std::ceil(t / P));
        auto span = [&](const std::function<double(double)>& f) {
            double acc = 0.0;
            for (int p = 0; p < panels; ++p) acc += GL::integrate(f, t * p / panels, t * (p + 1) / panels);
            return acc;
        };
        return span([&](double u) {
            return std::sin(Ob * (t - u)) * span([&](double v) { return std::sin(Ob * (t - v)) * K(u, v); });
        });
    };
    std::mt19937_64 rng(1414);
    std::uniform_real_distribution<double> U(0.05, 10.0), Phi(0.0, kPi);
    double worst_h = 0.0, worst_p = 0.0;
    for (int i = 0; i < 10; ++i) {
        double t = U(rng) * kTwoPi / Ob;
        double q = dbl(t, [&](double u, double v) { return std::cos(Oa * (u - v)); });
        worst_h = std::max(worst_h, rel(closed_form_h(kappa, Oa, Ob, t) / norm, q));
    }
    for (int i = 0; i < 10; ++i) {
        double t = U(rng) * kTwoPi / Ob, phi = Phi(rng);
        double q = dbl(t, [&](double u, double v) { return std::cos(Oa * (u + v) - 2.0 * phi); });
        worst_p = std::max(worst_p, rel(closed_form_h_phi(kappa, Oa, Ob, phi, t) / norm, q));
    }
    bool zero = closed_form_h(kappa, Oa, Ob, 0.0) == 0.0 && closed_form_h_phi(kappa, Oa, Ob, 0.7, 0.0) == 0.0 &&
                closed_form_h_phi(kappa, Oa, Ob, 2.3, 0.0) == 0.0;
    bool ok = worst_h < kC14_tol && worst_p < kC14_tol && zero;
    return {ok, "h " + fmt(worst_h) + ", h_phi " + fmt(worst_p) + ", h(0)=h_phi(0)=0 " + (zero ? "exact" : "NOT exact")};
}

Outcome c15() {
    auto cfg = parse_config(cfg_path("validate_mc.cfg"));
    auto rep = monte_carlo_validate(cfg);
    return {rep.n_paths == 10000 && rep.max_abs_z < kC15_maxz,
            "N=" + std::to_string(rep.n_paths) + ", max|z|=" + fmt(rep.max_abs_z) + " over " +
                std::to_string(rep.z.size()) + " grid points"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome c16() {
    // Every emitted file except the wall-clock sidecar must match byte for byte.
    auto root = fs::temp_directory_path() / "qnoise_acceptance_c16";
    fs::remove_all(root);
    std::size_t compared = 0, mismatched = 0;
    std::string which;
    for (const char* name : {"validate_mc.cfg", "fig4_sweep.cfg", "table1_squeezed_r14.cfg"}) {
        auto cfg = parse_config(cfg_path(name));
        std::vector<std::vector<std::string>> sets;
        int k = 0;
        for (int threads : {1, 4, 1}) {
            ExecOptions ex{threads, "default"};
            auto s = cfg.sweep ? run_sweep(cfg, ex) : run_scenario(cfg, ex);
            sets.push_back(emit_outputs(s, cfg, (root / (std::string(name) + std::to_string(k++))).string()));
        }
        for (std::size_t r = 1; r < sets.size(); ++r)
            for (std::size_t i = 0; i < sets[0].size(); ++i) {
                if (sets[0][i].find("_timing.txt") != std::string::npos) continue;
                ++compared;
                if (i >= sets[r].size() || slurp(sets[0][i]) != slurp(sets[r][i])) {
                    ++mismatched;
                    which = fs::path(sets[0][i]).filename().string();
                }
            }
    }
    fs::remove_all(root);
    return {compared > 0 && mismatched == 0,
            std::to_string(compared) + " file comparisons across threads {1,4,1}, " + std::to_string(mismatched) +
                " differ" + (which.empty() ? "" : " (" + which + ")")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
        {"cavity-particle derived parameters", c1},
        {"vacuum cavity dsigma/q0", c2},
        {"squeezed and squeezed-thermal cavity dsigma/q0", c3},
        {"light-probe peak dsigma_X", c4},
        {"Coulomb pair derived parameters", c5},
        {"pair trace sigma0, peak, dips below sigma0", c6},
        {"effective occupation anchors", c7},
        {"thermal source coth factor", c8},
        {"distribution identities", c9},
        {"J1/J2 closed forms vs quadrature", c10},
        {"4th derivative of J1/J2 vs smooth kernels", c11},
        {"fluctuation-dissipation relation", c12},
        {"squeezing factorization", c13},
        {"h and h_phi vs nested quadrature", c14},
        {"Monte Carlo vs analytic variance", c15},
        {"byte-identical outputs across thread counts", c16},
    };
    int only = 0;
    if (argc == 3 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);
    if (argc != 1 && (only < 1 || only > static_cast<int>(criteria.size()))) {
        std::fprintf(stderr, "usage: acceptance [--only N]\n");
        return 2;
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("C%02zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
