#include "qnoise/kernels.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "qnoise/grid.hpp"

namespace qnoise {

double ExpTrig::eval(double x) const {
    double env = lambda == 0.0 ? 1.0 : std::exp(-lambda * x);
    return env * (c * std::cos(omega * x) + s * std::sin(omega * x));
}

double KernelDecomposition::smooth_tau(double tau) const {
    double x = std::fabs(tau);
    double acc = 0.0;
    for (const auto& term : diff_terms) acc += term.eval(x);
    return acc;
}

double KernelDecomposition::smooth(double t, double tp) const {
    double acc = smooth_tau(t - tp);
    double sum = t + tp;
    for (const auto& term : sum_terms) acc += term.eval(sum);
    return acc;
}

double KernelDecomposition::max_frequency() const {
    double w = 0.0;
    for (const auto& term : diff_terms) w = std::max(w, std::fabs(term.omega));
    for (const auto& term : sum_terms) w = std::max(w, std::fabs(term.omega));
    return w;
}

bool KernelDecomposition::empty() const {
    return diff_terms.empty() && sum_terms.empty() && delta_coeff == 0.0 && delta2_coeff == 0.0;
}

KernelDecomposition KernelDecomposition::scaled(double k) const {
    KernelDecomposition out = *this;
    for (auto& term : out.diff_terms) {
        term.c *= k;
        term.s *= k;
    }
    for (auto& term : out.sum_terms) {
        term.c *= k;
        term.s *= k;
    }
    out.delta_coeff *= k;
    out.delta2_coeff *= k;
    return out;
}

KernelDecomposition& KernelDecomposition::operator+=(const KernelDecomposition& o) {
    if (!empty() && !o.empty() && units != o.units)
        throw UnitMismatch("cannot add kernels in " + units + " and " + o.units);
    if (empty()) units = o.units;
    diff_terms.insert(diff_terms.end(), o.diff_terms.begin(), o.diff_terms.end());
    sum_terms.insert(sum_terms.end(), o.sum_terms.begin(), o.sum_terms.end());
    delta_coeff += o.delta_coeff;
    delta2_coeff += o.delta2_coeff;
    provenance.insert(provenance.end(), o.provenance.begin(), o.provenance.end());
    return *this;
}

ForceScale force_scale(const QuantumState& s, double f0) {
    return {f0, enhancement_st(s), enhancement_nst(s)};
}

double single_mode_stationary(const QuantumState& s, double g, double omega, double t, double tp) {
    return enhancement_st(s) * g * g * std::cos(omega * (t - tp));
}

double single_mode_nonstationary(const QuantumState& s, double g, double omega, double t, double tp) {
    double e = enhancement_nst(s);
    if (e == 0.0) return 0.0;
    return e * g * g * std::cos(omega * (t + tp) - 2.0 * squeezing_phi(s));
}

KernelDecomposition single_mode_kernel(const QuantumState& s, double f0, double omega, Branch b) {
    KernelDecomposition k;
    double f0sq = f0 * f0;
    if (b == Branch::Stationary) {
        k.diff_terms.push_back({0.0, omega, enhancement_st(s) * f0sq, 0.0});
        k.provenance.push_back("single-mode stationary");
    } else {
        double e = enhancement_nst(s);
        if (e == 0.0) return k;
        double p2 = 2.0 * squeezing_phi(s);
        k.sum_terms.push_back({0.0, omega, e * f0sq * std::cos(p2), e * f0sq * std::sin(p2)});
        k.provenance.push_back("single-mode non-stationary");
    }
    return k;
}

LorentzianJ lorentzian_J(double tau, double omega_c, double gamma) {
    double pref = kPi / gamma * std::exp(-gamma * std::fabs(tau));
    return {pref * std::cos(omega_c * tau), pref * std::sin(omega_c * tau)};
}

namespace {

// int_a^b cos(y tau)/y^2 dy and int_a^b sin(y tau)/y^2 dy for 0 < a < b <= inf, tau >= 0.
double tail_cos(double a, double tau) {
    if (tau == 0.0) return 1.0 / a;
    return std::cos(a * tau) / a - tau * (0.5 * kPi - gsl_sf_Si(a * tau));
}

double tail_sin(double a, double tau) {
    if (tau == 0.0) return 0.0;
    return std::sin(a * tau) / a - tau * gsl_sf_Ci(a * tau);
}

// int_lo^hi weight(tau x) / (x^2 + gamma^2) dx with GSL QAWO on cuts at +-gamma 2^k,
// absolute tolerance tied to the Lorentzian peak area pi/gamma.
double lorentz_weighted(bool use_sin, double lo, double hi, double gamma, double tau) {
    std::vector<double> cuts{lo, hi};
    for (double w = gamma; w < std::max(std::fabs(lo), std::fabs(hi)); w *= 2.0) {
        if (w > lo && w < hi) cuts.push_back(w);
        if (-w > lo && -w < hi) cuts.push_back(-w);
    }
    if (0.0 > lo && 0.0 < hi) cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    const std::size_t limit = 4096;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(limit);
    gsl_integration_qawo_table* tab =
        gsl_integration_qawo_table_alloc(tau, 1.0, use_sin ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 50);
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    auto lor = [](double x, void* p) {
        double g = *static_cast<double*>(p);
        return 1.0 / (x * x + g * g);
    };
    gsl_function F{+lor, &gamma};
    const double epsabs = 1e-15 * kPi / gamma / static_cast<double>(cuts.size());
    double total = 0.0;
    int status = GSL_SUCCESS;
    for (std::size_t i = 0; i + 1 < cuts.size() && status == GSL_SUCCESS; ++i) {
        double r = 0.0, err = 0.0;
        gsl_integration_qawo_table_set_length(tab, cuts[i + 1] - cuts[i]);
        status = gsl_integration_qawo(&F, cuts[i], epsabs, 1e-13, limit, ws, tab, &r, &err);
        if (status == GSL_EROUND) status = GSL_SUCCESS;  // err is at the rounding floor
        total += r;
    }
    gsl_set_error_handler(old);
    gsl_integration_qawo_table_free(tab);
    gsl_integration_workspace_free(ws);
    if (status != GSL_SUCCESS) throw QuadratureFailure(std::string("Lorentzian quadrature: ") + gsl_strerror(status));
    return total;
}

}  // namespace

LorentzianJ lorentzian_J_quadrature(double tau, double omega_c, double gamma, JDomain domain, double window) {
    // Detuning variable x = omega - omega_c.
    double at = std::fabs(tau);
    double sgn = tau < 0.0 ? -1.0 : 1.0;
    double W = window * gamma;
    double cw = std::cos(omega_c * at), sw = std::sin(omega_c * at);
    // carrier factored out so the integrand phase stays O(W tau)

    double lo = -W;
    if (domain == JDomain::HalfLine) lo = std::max(-omega_c, -W);
    double Ic = lorentz_weighted(false, lo, W, gamma, at);
    double Is = lo == -W ? 0.0 : lorentz_weighted(true, lo, W, gamma, at);
    double J1 = cw * Ic - sw * Is;
    double J2 = sw * Ic + cw * Is;

    // x > W: 1/(x^2+gamma^2) -> 1/x^2, error O(gamma^2/W^3).
    double C = tail_cos(W, at), S = tail_sin(W, at);
    if (at == 0.0) C = (0.5 * kPi - std::atan(W / gamma)) / gamma;
    J1 += cw * C - sw * S;
    J2 += sw * C + cw * S;

    // x < -W, with x = -y.
    if (domain == JDomain::FullLine) {
        J1 += cw * C + sw * S;
        J2 += sw * C - cw * S;
    } else if (omega_c > W) {
        double Cl = C - tail_cos(omega_c, at);
        double Sl = S - tail_sin(omega_c, at);
        if (at == 0.0) Cl = (std::atan(omega_c / gamma) - std::atan(W / gamma)) / gamma;
        J1 += cw * Cl + sw * Sl;
        J2 += sw * Cl - cw * Sl;
    }
    return {J1, sgn * J2};
}

namespace {

void require_nu(const DerivedCavityParams& dp) {
    if (!(dp.nu < 0.1)) throw RangeError("nu = gamma/omega_c must be < 0.1");
}

// f0^2 e^{-gamma|tau|}[A cos - B sin], A = 1 - 6nu^2 + nu^4, B = 4(nu - nu^3)
KernelDecomposition vacuum_unit(const DerivedCavityParams& dp) {
    require_nu(dp);
    double nu = dp.nu, wc = dp.omega_c();
    double f0sq = dp.f0.value() * dp.f0.value();
    double A = 1.0 - 6.0 * nu * nu + std::pow(nu, 4);
    double B = 4.0 * (nu - nu * nu * nu);
    KernelDecomposition k;
    k.diff_terms.push_back({dp.gamma(), wc, f0sq * A, -f0sq * B});
    k.delta_coeff = 2.0 * f0sq * (3.0 * nu - nu * nu * nu) / wc;
    k.delta2_coeff = -2.0 * f0sq * nu / (wc * wc * wc);
    return k;
}

// f0^2 e^{-gamma S}[A cos(wc S - 2phi) - B sin(wc S - 2phi)]
ExpTrig phased_sum_term(double gamma, double wc, double A, double B, double phi, double scale) {
    double c2 = std::cos(2.0 * phi), s2 = std::sin(2.0 * phi);
    return {gamma, wc, scale * (A * c2 + B * s2), scale * (A * s2 - B * c2)};
}

}  // namespace

KernelDecomposition cavity_vacuum_kernel(const DerivedCavityParams& dp) {
    KernelDecomposition k = vacuum_unit(dp);
    k.provenance.push_back("cavity vacuum");
    return k;
}

KernelDecomposition cavity_squeezed_kernel(const DerivedCavityParams& dp, const SqueezedCoherent& st, Branch b) {
    QuantumState s = st;
    validate_state(s);
    if (b == Branch::Stationary) {
        KernelDecomposition k = vacuum_unit(dp).scaled(std::cosh(2.0 * st.r));
        k.provenance.push_back("cavity squeezed stationary");
        return k;
    }
    require_nu(dp);
    KernelDecomposition k;
    double sh = std::sinh(2.0 * st.r);
    if (sh == 0.0) return k;
    double nu = dp.nu;
    double A = 1.0 - 6.0 * nu * nu + std::pow(nu, 4);
    double B = 4.0 * (nu - nu * nu * nu);
    double f0sq = dp.f0.value() * dp.f0.value();
    k.sum_terms.push_back(phased_sum_term(dp.gamma(), dp.omega_c(), A, B, st.phi, sh * f0sq));
    k.provenance.push_back("cavity squeezed non-stationary");
    return k;
}

KernelDecomposition cavity_squeezed_thermal_kernel(const DerivedCavityParams& dp, const SqueezedThermal& st,
                                                   Branch b) {
    QuantumState s = st;
    validate_state(s);
    require_nu(dp);
    if (!(st.beta_hw < 0.1))
        throw NotHighTemperature("beta hbar omega_c = " + std::to_string(st.beta_hw) + " must be < 0.1");
    double P = 1.0 / st.beta_hw;  // k_B T / (hbar omega_c)
    double nu = dp.nu, wc = dp.omega_c();
    double f0sq = dp.f0.value() * dp.f0.value();
    double A = 1.0 - 3.0 * nu * nu;
    double B = 3.0 * nu - nu * nu * nu;
    KernelDecomposition k;
    if (b == Branch::Stationary) {
        double pre = std::cosh(2.0 * st.r) * P * f0sq;
        k.diff_terms.push_back({dp.gamma(), wc, 2.0 * pre * A, -2.0 * pre * B});
        k.delta_coeff = pre * 8.0 * nu / wc;
        k.provenance.push_back("cavity squeezed-thermal stationary (high T)");
    } else {
        double sh = std::sinh(2.0 * st.r);
        if (sh == 0.0) return k;
        k.sum_terms.push_back(phased_sum_term(dp.gamma(), wc, A, B, st.phi, 2.0 * sh * P * f0sq));
        k.provenance.push_back("cavity squeezed-thermal non-stationary (high T)");
    }
    return k;
}

KernelDecomposition cavity_kernel(const DerivedCavityParams& dp, const QuantumState& s, Branch b) {
    if (std::holds_alternative<Vacuum>(s)) {
        if (b == Branch::Stationary) return cavity_vacuum_kernel(dp);
        require_nu(dp);
        return {};
    }
    if (auto* c = std::get_if<SqueezedCoherent>(&s)) return cavity_squeezed_kernel(dp, *c, b);
    return cavity_squeezed_thermal_kernel(dp, std::get<SqueezedThermal>(s), b);
}

double deterministic_force(const QuantumState& s, const DerivedCavityParams& dp, bool single_mode, double t) {
    auto* st = std::get_if<SqueezedCoherent>(&s);
    if (!st || st->alpha_mag == 0.0) return 0.0;
    double f0 = dp.f0.value();
    double ch = std::cosh(st->r), sh = std::sinh(st->r);
    double w = dp.omega_c();
    double th = st->theta, p2 = 2.0 * st->phi;
    if (single_mode)
        return -2.0 * st->alpha_mag * f0 * (std::sin(w * t - th - p2) * sh + std::cos(w * t + th) * ch);
    double nu = dp.nu;
    double a = 1.0 - nu * nu, b = 2.0 * nu;
    double x = w * t;
    double cpart = a * std::cos(x + th) - b * std::sin(x + th);
    double spart = a * std::sin(x - th - p2) + b * std::cos(x - th - p2);
    return -2.0 * st->alpha_mag * f0 * std::exp(-dp.gamma() * t) * (ch * cpart + sh * spart);
}

namespace {

void check_resolution(const TimeGrid& g, double omega) {
    if (g.dt > 0.05 * kTwoPi / omega)
        throw GridTooCoarse("grid spacing " + std::to_string(g.dt) + " s exceeds 0.05 periods at " +
                            std::to_string(omega) + " rad/s");
}

// Trapezoid of w(t - t_i) q_i over the path up to t, with a partial last panel.
template <class W>
double causal_trapezoid(const SamplePath& path, double t, W weight) {
    const auto& g = path.grid;
    if (path.values.size() != g.n_steps) throw ValidationError("path length does not match grid");
    if (t <= g.t_start || g.n_steps == 0) return 0.0;
    double pos = (t - g.t_start) / g.dt;
    auto k = static_cast<std::size_t>(std::floor(pos + 1e-9));
    if (k >= g.n_steps) throw ValidationError("time lies beyond the path grid");
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        double w = (i == 0 || i == k) ? 0.5 : 1.0;
        if (k == 0) w = 0.0;
        acc += w * weight(t - g.time(i)) * path.values[i];
    }
    acc *= g.dt;
    double frac = pos - static_cast<double>(k);
    if (frac > 1e-9 && k + 1 < g.n_steps) {
        double h = frac * g.dt;
        double q_end = path.values[k] + frac * (path.values[k + 1] - path.values[k]);
        acc += 0.5 * h * (weight(t - g.time(k)) * path.values[k] + weight(0.0) * q_end);
    }
    return acc;
}

}  // namespace

double single_mode_dissipation(double hbar, double g, double omega, double q0, const SamplePath& path, double t) {
    check_resolution(path.grid, omega);
    double I = causal_trapezoid(path, t, [omega](double tau) { return std::sin(omega * tau); });
    return 2.0 * hbar * g * g / (q0 * q0) * I;
}

double dissipation_force(const DerivedCavityParams& dp, const SamplePath& path, double t, bool cavity) {
    double hbar = dp.k.hbar.value(), q0 = dp.q0.value();
    if (!cavity) return single_mode_dissipation(hbar, dp.g_c.value(), dp.omega_c(), q0, path, t);

    double wc = dp.omega_c(), gam = dp.gamma(), nu = dp.nu;
    check_resolution(path.grid, wc);
    double A = 1.0 - 6.0 * nu * nu + std::pow(nu, 4);
    double B = 4.0 * (nu - nu * nu * nu);
    double wm = dp.osc.bare_frequency.value();
    auto mem = [=](double tau) { return std::exp(-gam * tau) * (A * std::sin(wc * tau) + B * std::cos(wc * tau)); };
    double u = 2.0 * wm * causal_trapezoid(path, t, mem) / q0;

    // velocity at t from the path by finite differences
    const auto& g = path.grid;
    double pos = (t - g.t_start) / g.dt;
    auto i = static_cast<std::size_t>(std::lround(pos));
    i = std::min(i, g.n_steps - 1);
    double qdot = 0.0;
    if (g.n_steps >= 2) {
        if (i == 0)
            qdot = (path.values[1] - path.values[0]) / g.dt;
        else if (i + 1 == g.n_steps)
            qdot = (path.values[i] - path.values[i - 1]) / g.dt;
        else
            qdot = (path.values[i + 1] - path.values[i - 1]) / (2.0 * g.dt);
    }
    double f0 = dp.f0.value();
    return f0 * (12.0 * nu * (dp.g_c.value() / wc) * (qdot / q0) / wc + dp.epsilon * u);
}

double dissipation_kernel_T(const DerivedCavityParams& dp, double tau) {
    using cd = std::complex<double>;
    double wc = dp.omega_c();
    double f0sq = dp.f0.value() * dp.f0.value();
    double at = std::fabs(tau);
    cd z(-dp.gamma(), wc);
    cd v = z * z * z * std::exp(z * at);
    return 2.0 * f0sq / (dp.k.hbar.value() * std::pow(wc, 4)) * (-v.imag());
}

FdtReport fdt_check(const DerivedCavityParams& dp, const SqueezedThermal& st, double tau_max, std::size_t points) {
    if (st.r != 0.0) throw ValidationError("fdt_check requires r = 0");
    if (points == 0 || !(tau_max > 0.0)) throw ValidationError("fdt_check needs a non-empty tau grid");
    KernelDecomposition k = cavity_squeezed_thermal_kernel(dp, st, Branch::Stationary);
    double hbar = dp.k.hbar.value(), wc = dp.omega_c();
    double kT = hbar * wc / st.beta_hw;
    double f0sq = dp.f0.value() * dp.f0.value();
    FdtReport rep;
    rep.points = points;
    for (std::size_t i = 1; i <= points; ++i) {
        double tau = tau_max * static_cast<double>(i) / static_cast<double>(points);
        double lhs = k.smooth_tau(tau);
        double rhs = kT * dissipation_kernel_T(dp, tau);
        double env = 2.0 * kT / (hbar * wc) * f0sq * std::exp(-dp.gamma() * tau);
        rep.max_rel_dev = std::max(rep.max_rel_dev, std::fabs(lhs - rhs) / env);
    }
    // delta part of -d^3/dtau^3 [e^{-gamma|tau|} sin(wc tau)] is 4 gamma wc delta
    double t_delta = 2.0 * f0sq / (hbar * std::pow(wc, 4)) * 4.0 * dp.gamma() * wc;
    rep.delta_rel_dev = std::fabs(k.delta_coeff - kT * t_delta) / std::fabs(kT * t_delta);
    return rep;
}

std::vector<DistTerm> reduce_product(int order, Multiplier m, double omega_c) {
    if (order < 0) throw ValidationError("derivative order must be >= 0");
    static const int cos_pat[4] = {1, 0, -1, 0};
    static const int sin_pat[4] = {0, 1, 0, -1};
    std::vector<DistTerm> out;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        if (j > 0) binom = binom * (order - j + 1) / j;
        int pat = (m == Multiplier::Cos ? cos_pat : sin_pat)[j % 4];
        if (pat == 0) continue;
        double deriv = pat * std::pow(omega_c, j);
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        out.push_back({binom * sign * deriv, order - j});
    }
    return out;
}

}  // namespace qnoise
