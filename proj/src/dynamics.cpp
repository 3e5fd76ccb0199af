#include "qnoise/dynamics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <limits>

#include "qnoise/parallel.hpp"

namespace qnoise {

using cd = std::complex<double>;

namespace {

struct Probe {
    double m, gm, W;  // mass, amplitude decay, damped frequency
    cd a;             // -gamma_m + i W
};

Probe make_probe(const OscillatorParams& osc) {
    osc.validate();
    double w = osc.bare_frequency.value(), gm = osc.damping_rate.value();
    if (gm >= w) throw OverdampedUnsupported("gamma_m >= omega_m");
    double W = std::sqrt((w - gm) * (w + gm));
    return {osc.mass.value(), gm, W, cd(-gm, W)};
}

double green(const Probe& p, double u) { return std::exp(-p.gm * u) * std::sin(p.W * u) / (p.m * p.W); }

cd cexpm1(cd z) {
    double x = z.real(), y = z.imag();
    double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// (e^z - 1)/z
cd phi1(cd z) {
    if (std::abs(z) < 0.25) {
        cd term(1.0, 0.0), acc(1.0, 0.0);
        for (int k = 2; k <= 20; ++k) {
            term *= z / static_cast<double>(k);
            acc += term;
        }
        return acc;
    }
    return cexpm1(z) / z;
}

// int_0^t e^{z u} du
cd F1(cd z, double t) { return t * phi1(z * t); }

// int_0^t du int_0^u du' e^{p u + q u'}
cd D(cd p, cd q, double t) {
    if (std::abs(q) * t > 0.5) return (F1(p + q, t) - F1(p, t)) / q;
    auto part = [&](bool im) {
        auto f = [&](double u) {
            cd v = std::exp(p * u) * u * phi1(q * u);
            return im ? v.imag() : v.real();
        };
        double cycles = std::abs(p.imag()) * t / kTwoPi;
        auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(cycles / 2.0)));
        double h = t / static_cast<double>(pieces), acc = 0.0;
        for (std::size_t i = 0; i < pieces; ++i)
            acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, h * i, h * (i + 1), 10, 1e-14);
        return acc;
    };
    return {part(false), part(true)};
}

struct Acc {
    double value = 0.0, scale = 0.0;
    void add(double v) {
        value += v;
        scale += std::fabs(v);
    }
};

// Analytic route. G(u)G(u') = Re[e^{a u + conj(a) u'} - e^{a(u + u')}] / (2 m^2 W^2).
VarianceValue analytic_variance(const KernelDecomposition& k, const Probe& p, double t) {
    Acc acc;
    if (t <= 0.0) return {};
    const cd a = p.a, ab = std::conj(a);
    const double pre = 1.0 / (2.0 * p.m * p.m * p.W * p.W);

    for (const auto& term : k.diff_terms) {
        cd kap(term.c, -term.s);
        cd b(-term.lambda, term.omega);
        // the square is twice the triangle u' < u
        for (int conjugate = 0; conjugate < 2; ++conjugate) {
            cd bb = conjugate ? std::conj(b) : b;
            cd kk = conjugate ? std::conj(kap) : kap;
            acc.add(pre * (kk * D(a + bb, ab - bb, t)).real());
            acc.add(-pre * (kk * D(a + bb, a - bb, t)).real());
        }
    }
    for (const auto& term : k.sum_terms) {
        // K = Re[kap e^{b (s + s')}], s = t - u; separable in s and s'.
        cd kap(term.c, -term.s);
        cd b(-term.lambda, term.omega);
        for (int conjugate = 0; conjugate < 2; ++conjugate) {
            cd bb = conjugate ? std::conj(b) : b;
            cd kk = conjugate ? std::conj(kap) : kap;
            // int_0^t G(t - s) e^{bb s} ds = Im-part split of (e^{x t} - e^{bb t})/(x - bb), x = a, conj(a)
            auto dd = [&](cd x) {
                cd d = x - bb;
                if (x.real() >= bb.real()) return std::exp(bb * t) * t * phi1(d * t);
                return std::exp(x * t) * t * phi1(-d * t);
            };
            cd H = (dd(a) - dd(ab)) / (cd(0.0, 2.0) * p.m * p.W);
            acc.add(0.5 * (kk * H * H).real());
        }
    }
    if (k.delta_coeff != 0.0) {
        acc.add(k.delta_coeff * pre * F1(cd(-2.0 * p.gm, 0.0), t).real());
        acc.add(-k.delta_coeff * pre * F1(2.0 * a, t).real());
    }
    if (k.delta2_coeff != 0.0) {
        // int_0^t G G'' du, G'' = Im(a^2 e^{a u}) / (m W)
        acc.add(k.delta2_coeff * pre * (ab * ab * F1(cd(-2.0 * p.gm, 0.0), t)).real());
        acc.add(-k.delta2_coeff * pre * (a * a * F1(2.0 * a, t)).real());
    }
    return {acc.value, acc.scale};
}

VarianceValue quadrature_variance(const KernelDecomposition& k, const Probe& p, double t, const VarianceOptions& opt) {
    if (t <= 0.0) return {};
    std::size_t n = std::max<std::size_t>(opt.points, 3);
    double h = t / static_cast<double>(n - 1);
    double wmax = std::max(k.max_frequency(), p.W);
    if (h > 0.05 * kTwoPi / wmax)
        throw GridTooCoarse("quadrature step " + std::to_string(h) + " s does not resolve " + std::to_string(wmax) +
                            " rad/s");
    std::vector<double> s(n), wG(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = h * static_cast<double>(i);
        double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
        wG[i] = w * green(p, t - s[i]);
    }
    std::vector<double> rows(n, 0.0), rows_abs(n, 0.0);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        double acc = 0.0, acc_abs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = wG[j] * k.smooth(s[i], s[j]);
            acc += v;
            acc_abs += std::fabs(v);
        }
        rows[i] = wG[i] * acc;
        rows_abs[i] = std::fabs(wG[i]) * acc_abs;
    });
    Acc total;
    for (std::size_t i = 0; i < n; ++i) {
        total.value += rows[i];
        total.scale += rows_abs[i];
    }
    // distributional parts through their reduced single integrals
    KernelDecomposition dist;
    dist.delta_coeff = k.delta_coeff;
    dist.delta2_coeff = k.delta2_coeff;
    VarianceValue d = analytic_variance(dist, p, t);
    return {total.value + d.value, total.scale + d.scale};
}

}  // namespace

void VarianceTrace::finalize() {
    const std::size_t n = grid.n_steps;
    if (sigma0_sq.size() != n || delta_sigma_st_sq.size() != n || delta_sigma_nst_sq.size() != n)
        throw ValidationError("variance trace components do not match the grid");
    if (rounding_scale.size() != n) rounding_scale.assign(n, 0.0);
    total_sigma.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double rad = sigma0_sq[i] + delta_sigma_st_sq[i] + delta_sigma_nst_sq[i];
        double tol = 64.0 * std::numeric_limits<double>::epsilon() *
                     (rounding_scale[i] + std::fabs(sigma0_sq[i]) + std::fabs(delta_sigma_st_sq[i]) +
                      std::fabs(delta_sigma_nst_sq[i]));
        if (rad < -tol)
            throw NegativeVariance("total variance " + std::to_string(rad) + " m^2 < 0 at t = " +
                                   std::to_string(grid.time(i)) + " s");
        total_sigma[i] = std::sqrt(std::max(rad, 0.0));
    }
}

std::vector<Trajectory> integrate_langevin(const OscillatorParams& osc, const std::vector<SamplePath>& force_paths,
                                           const ForceFn& deterministic, const TimeGrid& grid, int threads) {
    Probe p = make_probe(osc);
    grid.validate();
    if (grid.dt > 0.05 * kTwoPi / osc.bare_frequency.value())
        throw GridTooCoarse("grid does not resolve the mechanical frequency");
    const std::size_t n = grid.n_steps;
    std::vector<double> det(n, 0.0);
    if (deterministic)
        for (std::size_t i = 0; i < n; ++i) det[i] = deterministic(grid.time(i));

    std::size_t count = force_paths.empty() ? 1 : force_paths.size();
    for (const auto& fp : force_paths)
        if (fp.values.size() != n || fp.grid.dt != grid.dt || fp.grid.t_start != grid.t_start)
            throw ValidationError("force path grid does not match the integration grid");

    const cd step = std::exp(p.a * grid.dt);
    std::vector<Trajectory> out(count);
    parallel_for(count, threads, [&](std::size_t k) {
        Trajectory& tr = out[k];
        tr.grid = grid;
        tr.position.assign(n, 0.0);
        tr.velocity.assign(n, 0.0);
        auto force = [&](std::size_t i) { return det[i] + (force_paths.empty() ? 0.0 : force_paths[k].values[i]); };
        // R_i = sum_{j<=i} e^{a (t_i - t_j)} F_j
        double F0 = force(0);
        cd R(F0, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            double Fi = force(i);
            R = step * R + Fi;
            cd trap = grid.dt * (R - 0.5 * Fi - 0.5 * std::exp(p.a * (grid.dt * static_cast<double>(i))) * F0);
            tr.position[i] = trap.imag() / (p.m * p.W);
            tr.velocity[i] = (p.a * trap).imag() / (p.m * p.W);
        }
    });
    return out;
}

Trajectory step_langevin(const OscillatorParams& osc, const SamplePath& force, const ForceFn& deterministic) {
    Probe p = make_probe(osc);
    const auto& g = force.grid;
    g.validate();
    const std::size_t n = g.n_steps;
    if (force.values.size() != n) throw ValidationError("force path length does not match its grid");
    double w2 = osc.bare_frequency.value() * osc.bare_frequency.value();
    double dt = g.dt;
    auto F = [&](std::size_t i) { return force.values[i] + (deterministic ? deterministic(g.time(i)) : 0.0); };
    Trajectory tr;
    tr.grid = g;
    tr.position.assign(n, 0.0);
    tr.velocity.assign(n, 0.0);
    double q = 0.0, v = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double acc = F(i) / p.m - 2.0 * p.gm * v - w2 * q;
        double vh = v + 0.5 * dt * acc;
        q += dt * vh;
        // damping implicit in the closing half step
        v = (vh + 0.5 * dt * (F(i + 1) / p.m - w2 * q)) / (1.0 + p.gm * dt);
        tr.position[i + 1] = q;
        tr.velocity[i + 1] = v;
    }
    return tr;
}

VarianceValue excess_variance(const KernelDecomposition& kernel, const OscillatorParams& osc, double t,
                              const VarianceOptions& opt) {
    Probe p = make_probe(osc);
    if (!(t >= 0.0)) throw ValidationError("time must be >= 0");
    if (kernel.units != "N^2") throw UnitMismatch("excess variance needs a force kernel in N^2, got " + kernel.units);
    if (opt.method == VarianceMethod::Quadrature) return quadrature_variance(kernel, p, t, opt);
    return analytic_variance(kernel, p, t);
}

double excess_variance_integral(const KernelDecomposition& kernel, const OscillatorParams& osc, double t,
                                const VarianceOptions& opt) {
    return excess_variance(kernel, osc, t, opt).value;
}

double closed_form_h(double kappa, double Omega_a, double Omega_b, double t) {
    double c = std::cos(Omega_a * t) - std::cos(Omega_b * t);
    double s = std::sin(Omega_a * t) - kappa * std::sin(Omega_b * t);
    return c * c + s * s;
}

double closed_form_h_phi(double kappa, double Omega_a, double Omega_b, double phi, double t) {
    double a = Omega_a * t, b = Omega_b * t;
    double c2 = std::cos(2.0 * phi), s2 = std::sin(2.0 * phi);
    double sb = std::sin(b), cb = std::cos(b);
    return std::cos(2.0 * (phi - a)) + cb * (c2 * cb - 2.0 * std::cos(2.0 * phi - a)) +
           2.0 * kappa * sb * (s2 * cb - std::sin(2.0 * phi - a)) - kappa * kappa * c2 * sb * sb;
}

double optical_quadrature_variance(const DerivedCavityParams& dp, double t) {
    double w = dp.omega_c(), wm = dp.osc.bare_frequency.value();
    if (std::fabs(w - wm) / w < 1e-12) throw ResonanceSingularity("probe and particle frequencies coincide");
    double g = dp.g_c.value();
    double den = (w - wm) * (w + wm);
    return 4.0 * g * g * w * w / (den * den) * closed_form_h(wm / w, wm, w, t);
}

double steady_state_rms(const QuantumState& s, const DerivedCavityParams& dp) {
    Probe p = make_probe(dp.osc);
    double base = dp.f0.value() / (p.m * std::sqrt(p.W * p.W * p.W * dp.omega_c()));
    return base * std::sqrt(enhancement_st(s));
}

}  // namespace qnoise
