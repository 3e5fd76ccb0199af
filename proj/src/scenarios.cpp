#include "qnoise/scenarios.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qnoise/parallel.hpp"
#include "qnoise/sampler.hpp"
#include "qnoise/version.hpp"

namespace qnoise {

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::CavityParticle: return "cavity_particle";
        case ScenarioKind::LightProbe: return "light_probe";
        case ScenarioKind::ParticleParticle: return "particle_particle";
        case ScenarioKind::GravityAnalogy: return "gravity_analogy";
    }
    return "unknown";
}

const Scalar* RunSummary::find(const std::string& n) const {
    for (const auto& s : scalars)
        if (s.name == n) return &s;
    return nullptr;
}

double RunSummary::at(const std::string& n) const {
    const Scalar* s = find(n);
    if (!s) throw ValidationError("summary has no scalar '" + n + "'");
    return s->value;
}

namespace {

using Clock = std::chrono::steady_clock;

RunSummary start_summary(const ScenarioConfig& cfg, const ExecOptions& ex) {
    RunSummary s;
    s.name = cfg.name;
    s.kind = cfg.kind;
    s.manifest.version = kVersion;
    s.manifest.seed = cfg.monte_carlo.seed;
    s.manifest.tolerance_profile = ex.tolerance_profile;
    s.manifest.tolerances = {{"mc_max_abs_z", 4.0},
                             {"jitter_cap_rel", 1e-6},
                             {"jitter_floor_rel", 1e-12},
                             {"radicand_rounding_eps", 64.0}};
    return s;
}

void add(RunSummary& s, std::string name, double v, std::string units, std::string source) {
    s.scalars.push_back({std::move(name), v, std::move(units), std::move(source)});
}

// Derived per-point column of a trace.
double column(const VarianceTrace& tr, const std::string& col, std::size_t i) {
    double q0 = tr.q0 > 0.0 ? tr.q0 : 1.0;
    if (col == "total_sigma") return tr.total_sigma[i];
    if (col == "total_sigma_over_q0") return tr.total_sigma[i] / q0;
    if (col == "sigma0") return std::sqrt(tr.sigma0_sq[i]);
    if (col == "sigma0_over_q0") return std::sqrt(tr.sigma0_sq[i]) / q0;
    if (col == "excess_sq") return tr.delta_sigma_st_sq[i] + tr.delta_sigma_nst_sq[i];
    if (col == "effective_nbar") {
        double r = tr.total_sigma[i] / q0;
        return 0.5 * (r * r - 1.0);
    }
    throw ValidationError("unknown trace column " + col);
}

double reduce_trace(const VarianceTrace& tr, const std::string& col, const std::string& red) {
    const std::size_t n = tr.grid.n_steps;
    if (n == 0) throw ValidationError("empty trace");
    if (red == "first") return column(tr, col, 0);
    if (red == "last") return column(tr, col, n - 1);
    if (red == "below_sigma0") {
        double count = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (tr.total_sigma[i] < std::sqrt(tr.sigma0_sq[i])) count += 1.0;
        return count;
    }
    double best = column(tr, col, 0);
    for (std::size_t i = 1; i < n; ++i) {
        double v = column(tr, col, i);
        best = red == "max" ? std::max(best, v) : std::min(best, v);
    }
    if (red != "max" && red != "min") throw ValidationError("unknown reduction " + red);
    return best;
}

void add_trace_scalar(RunSummary& s, const std::string& name, const std::string& units, const std::string& label,
                      const std::string& col, const std::string& red) {
    Scalar sc{name, 0.0, units, "trace:" + label + ":" + col + ":" + red};
    sc.value = recompute_from_traces(s, sc);
    s.scalars.push_back(sc);
}

TimeGrid resolve_grid(const ScenarioConfig& cfg, std::size_t def_points, double def_horizon) {
    std::size_t n = cfg.grid_points ? cfg.grid_points : def_points;
    double span = cfg.grid_horizon > 0.0 ? cfg.grid_horizon : def_horizon;
    return TimeGrid::spanning(0.0, span, n);
}

void finish(RunSummary& s, Clock::time_point t0) {
    s.manifest.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

OscillatorParams probe_b(const ScenarioConfig& cfg, const DerivedCoulombParams& dc) {
    OscillatorParams o;
    o.mass = cfg.coulomb.mass_b;
    o.bare_frequency = dc.Omega_b;
    return o;
}

// Closed-form particle-particle trace pieces.
struct PairModel {
    DerivedCoulombParams dc;
    double A = 0.0;  // (f0 / (m Omega_b^2))^2 / (kappa^2 - 1)^2
    double est = 1.0, enst = 0.0, phi = 0.0;
    double sigma0_sq = 0.0;

    double dst(double t) const {
        return est * A * closed_form_h(dc.kappa, dc.Omega_a.value(), dc.Omega_b.value(), t);
    }
    double dnst(double t) const {
        if (enst == 0.0) return 0.0;
        return enst * A * closed_form_h_phi(dc.kappa, dc.Omega_a.value(), dc.Omega_b.value(), phi, t);
    }
};

PairModel pair_model(const ScenarioConfig& cfg) {
    PairModel pm;
    validate_state(cfg.state);
    if (!(cfg.nbar_b >= 0.0)) throw ValidationError("semiclassical.nbar must be >= 0");
    pm.dc = derive_coulomb(cfg.constants, resolved_coulomb(cfg));
    if (std::fabs(pm.dc.kappa - 1.0) < 1e-12)
        throw ResonanceSingularity("Omega_a = Omega_b: the closed forms diverge");
    double mb = cfg.coulomb.mass_b.value(), Wb = pm.dc.Omega_b.value();
    double x = pm.dc.f0.value() / (mb * Wb * Wb);
    double k2 = pm.dc.kappa * pm.dc.kappa - 1.0;
    pm.A = x * x / (k2 * k2);
    pm.est = enhancement_st(cfg.state);
    pm.enst = enhancement_nst(cfg.state);
    pm.phi = squeezing_phi(cfg.state);
    double q0b = pm.dc.q0b.value();
    pm.sigma0_sq = (2.0 * cfg.nbar_b + 1.0) * q0b * q0b;
    return pm;
}

VarianceTrace pair_trace(const PairModel& pm, const TimeGrid& grid) {
    VarianceTrace tr;
    tr.grid = grid;
    tr.q0 = pm.dc.q0b.value();
    const std::size_t n = grid.n_steps;
    tr.sigma0_sq.assign(n, pm.sigma0_sq);
    tr.delta_sigma_st_sq.resize(n);
    tr.delta_sigma_nst_sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = grid.time(i);
        tr.delta_sigma_st_sq[i] = pm.dst(t);
        tr.delta_sigma_nst_sq[i] = pm.dnst(t);
    }
    tr.finalize();
    return tr;
}

TimeGrid pair_grid(const ScenarioConfig& cfg, const PairModel& pm) {
    double period = kTwoPi / pm.dc.Omega_b.value();
    return resolve_grid(cfg, 4096, 20.0 * period);
}

void horizon_warning(const ScenarioConfig& cfg, const TimeGrid& g, RunSummary& s) {
    double gm = cfg.oscillator.damping_rate.value();
    if (gm > 0.0 && g.t_end() > 0.01 / gm)
        s.manifest.warnings.push_back("horizon exceeds 0.01/gamma_m; undamped closed forms are out of range");
}

}  // namespace

double recompute_from_traces(const RunSummary& s, const Scalar& sc) {
    if (sc.source.rfind("trace:", 0) != 0) throw ValidationError(sc.name + " is not a trace scalar");
    std::vector<std::string> parts;
    std::stringstream ss(sc.source.substr(6));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("bad scalar source " + sc.source);
    for (const auto& nt : s.traces)
        if (nt.label == parts[0]) return reduce_trace(nt.trace, parts[1], parts[2]);
    throw ValidationError("no trace labelled " + parts[0]);
}

double charge_for_coupling_ratio(const PhysicalConstants& k, CoulombPairParams pair, double ratio) {
    if (!(ratio > 0.0)) throw ValidationError("coulomb.target_ge_over_omega_b must be > 0");
    double d3 = std::pow(pair.separation.value(), 3);
    double stiff = std::min(pair.mass_a.value() * std::pow(pair.bare_freq_a.value(), 2),
                            pair.mass_b.value() * std::pow(pair.bare_freq_b.value(), 2));
    double qmax = std::sqrt(4.0 * kPi * k.eps0.value() * d3 * stiff) * (1.0 - 1e-9);
    auto f = [&](double q) {
        pair.charge_a = Charge(q);
        pair.charge_b = Charge(q);
        auto dc = derive_coulomb(k, pair);
        return std::fabs(dc.g_e.value()) / dc.Omega_b.value() - ratio;
    };
    double lo = qmax * 1e-9;
    if (f(qmax) < 0.0) throw RangeError("requested coupling ratio is beyond the stability limit");
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, qmax, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

CoulombPairParams resolved_coulomb(const ScenarioConfig& cfg) {
    CoulombPairParams p = cfg.coulomb;
    if (cfg.target_ge_over_omega_b) {
        double q = charge_for_coupling_ratio(cfg.constants, p, *cfg.target_ge_over_omega_b);
        p.charge_a = Charge(q);
        p.charge_b = Charge(q);
    }
    return p;
}

RunSummary run_cavity_particle(const ScenarioConfig& cfg, const ExecOptions& ex) {
    if (cfg.kind != ScenarioKind::CavityParticle) throw ValidationError("scenario kind is not cavity_particle");
    auto t0 = Clock::now();
    RunSummary s = start_summary(cfg, ex);
    validate_state(cfg.state);
    auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
    auto kst = cavity_kernel(dp, cfg.state, Branch::Stationary);
    auto knst = cavity_kernel(dp, cfg.state, Branch::NonStationary);

    TimeGrid grid = resolve_grid(cfg, 2048, 10.0 / dp.gamma());
    KernelDecomposition thermal;
    double T = cfg.oscillator.bath_temperature.value();
    double cth = 4.0 * cfg.oscillator.mass.value() * cfg.oscillator.damping_rate.value() *
                 cfg.constants.kB.value() * T;
    thermal.delta_coeff = cth;

    VarianceTrace tr;
    tr.grid = grid;
    tr.q0 = dp.q0.value();
    const std::size_t n = grid.n_steps;
    tr.sigma0_sq.resize(n);
    tr.delta_sigma_st_sq.resize(n);
    tr.delta_sigma_nst_sq.resize(n);
    tr.rounding_scale.resize(n);
    parallel_for(n, ex.threads, [&](std::size_t i) {
        double t = grid.time(i);
        auto a = excess_variance(thermal, cfg.oscillator, t);
        auto b = excess_variance(kst, cfg.oscillator, t);
        auto c = excess_variance(knst, cfg.oscillator, t);
        tr.sigma0_sq[i] = a.value;
        tr.delta_sigma_st_sq[i] = b.value;
        tr.delta_sigma_nst_sq[i] = c.value;
        tr.rounding_scale[i] = a.scale + b.scale + c.scale;
    });
    tr.finalize();
    s.traces.push_back({"main", tr});

    double steady = steady_state_rms(cfg.state, dp);
    add(s, "f0", dp.f0.value(), "N", "derived");
    add(s, "g_c", dp.g_c.value(), "rad/s", "derived");
    add(s, "q0", dp.q0.value(), "m", "derived");
    add(s, "epsilon", dp.epsilon, "1", "derived");
    add(s, "nu", dp.nu, "1", "derived");
    add(s, "enhancement_st", enhancement_st(cfg.state), "1", "derived");
    add(s, "enhancement_nst", enhancement_nst(cfg.state), "1", "derived");
    add(s, "steady_sigma", steady, "m", "closed-form");
    add(s, "steady_sigma_over_q0", steady / dp.q0.value(), "1", "closed-form");
    add_trace_scalar(s, "sigma0", "m", "main", "sigma0", "last");
    add_trace_scalar(s, "max_sigma", "m", "main", "total_sigma", "max");
    add_trace_scalar(s, "excess_sq_final", "m^2", "main", "excess_sq", "last");
    if (auto* c = std::get_if<SqueezedCoherent>(&cfg.state)) {
        double peak = 0.0;
        for (std::size_t i = 0; i < 256; ++i) {
            double t = kTwoPi / dp.omega_c() * static_cast<double>(i) / 256.0;
            peak = std::max(peak, std::fabs(deterministic_force(cfg.state, dp, false, t)));
        }
        (void)c;
        add(s, "deterministic_force_peak", peak, "N", "closed-form");
    }
    s.manifest.counts["grid_points"] = static_cast<double>(n);
    if (cfg.monte_carlo.enabled) {
        s.monte_carlo = monte_carlo_validate(cfg, ex);
        s.manifest.jitters.push_back(s.monte_carlo->jitter);
    }
    finish(s, t0);
    return s;
}

RunSummary run_light_probe(const ScenarioConfig& cfg, const ExecOptions& ex) {
    if (cfg.kind != ScenarioKind::LightProbe) throw ValidationError("scenario kind is not light_probe");
    auto t0 = Clock::now();
    RunSummary s = start_summary(cfg, ex);
    validate_state(cfg.state);
    auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
    double w = dp.omega_c(), wm = dp.osc.bare_frequency.value();
    double g = dp.g_c.value();
    (void)optical_quadrature_variance(dp, 0.0);  // resonance guard
    double den = (w - wm) * (w + wm);
    double amp = 4.0 * g * g * w * w / (den * den);
    double est = enhancement_st(cfg.state), enst = enhancement_nst(cfg.state), phi = squeezing_phi(cfg.state);

    TimeGrid grid = resolve_grid(cfg, 4096, 20.0 * kTwoPi / wm);
    VarianceTrace tr;
    tr.grid = grid;
    tr.q0 = 1.0;
    tr.units = "1";
    const std::size_t n = grid.n_steps;
    tr.sigma0_sq.assign(n, 0.5);  // coherent-state quadrature variance
    tr.delta_sigma_st_sq.resize(n);
    tr.delta_sigma_nst_sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = grid.time(i);
        tr.delta_sigma_st_sq[i] = est * optical_quadrature_variance(dp, t);
        tr.delta_sigma_nst_sq[i] = enst == 0.0 ? 0.0 : enst * amp * closed_form_h_phi(wm / w, wm, w, phi, t);
    }
    tr.finalize();
    s.traces.push_back({"main", tr});

    // sup_t h = 4, reached as the fast and slow phases line up
    double peak = std::sqrt(est * amp * 4.0);
    add(s, "g_c", g, "rad/s", "derived");
    add(s, "g_over_omega", g / w, "1", "derived");
    add(s, "characteristic_amplitude", std::sqrt(amp), "1", "closed-form");
    add(s, "peak_delta_sigma_x", peak, "1", "closed-form");
    add(s, "log_enhancement_to_half", std::log(0.5 / (g / w)), "1", "closed-form");
    add(s, "coth_factor", thermal_factor(cfg.state), "1", "derived");
    add_trace_scalar(s, "max_sigma", "1", "main", "total_sigma", "max");
    s.manifest.counts["grid_points"] = static_cast<double>(n);
    finish(s, t0);
    return s;
}

RunSummary run_particle_particle(const ScenarioConfig& cfg, const ExecOptions& ex) {
    if (cfg.kind != ScenarioKind::ParticleParticle) throw ValidationError("scenario kind is not particle_particle");
    auto t0 = Clock::now();
    RunSummary s = start_summary(cfg, ex);
    PairModel pm = pair_model(cfg);
    TimeGrid grid = pair_grid(cfg, pm);
    horizon_warning(cfg, grid, s);
    s.traces.push_back({"main", pair_trace(pm, grid)});

    double q0b = pm.dc.q0b.value();
    auto pair = resolved_coulomb(cfg);
    add(s, "Omega_a", pm.dc.Omega_a.value(), "rad/s", "derived");
    add(s, "Omega_b", pm.dc.Omega_b.value(), "rad/s", "derived");
    add(s, "g_e", pm.dc.g_e.value(), "rad/s", "derived");
    add(s, "g_e_over_omega_b", std::fabs(pm.dc.g_e.value()) / pm.dc.Omega_b.value(), "1", "derived");
    add(s, "kappa", pm.dc.kappa, "1", "derived");
    add(s, "f0", pm.dc.f0.value(), "N", "derived");
    add(s, "q0b", q0b, "m", "derived");
    add(s, "charge_e", pair.charge_b.value() / cfg.constants.e_charge.value(), "e", "derived");
    add(s, "coth_factor", thermal_factor(cfg.state), "1", "derived");
    add(s, "squeezing_db", squeezing_db(squeezing_r(cfg.state)), "dB", "derived");
    add_trace_scalar(s, "sigma0", "m", "main", "sigma0", "first");
    add_trace_scalar(s, "sigma0_over_q0", "1", "main", "sigma0_over_q0", "first");
    add_trace_scalar(s, "max_sigma", "m", "main", "total_sigma", "max");
    add_trace_scalar(s, "max_sigma_over_q0", "1", "main", "total_sigma_over_q0", "max");
    add_trace_scalar(s, "min_sigma_over_q0", "1", "main", "total_sigma_over_q0", "min");
    add_trace_scalar(s, "points_below_sigma0", "1", "main", "total_sigma", "below_sigma0");
    add_trace_scalar(s, "effective_nbar", "1", "main", "effective_nbar", "max");
    s.manifest.counts["grid_points"] = static_cast<double>(grid.n_steps);
    if (cfg.monte_carlo.enabled) {
        s.monte_carlo = monte_carlo_validate(cfg, ex);
        s.manifest.jitters.push_back(s.monte_carlo->jitter);
    }
    finish(s, t0);
    return s;
}

RunSummary run_gravity_analogy(const ScenarioConfig& cfg, const ExecOptions& ex) {
    if (cfg.kind != ScenarioKind::GravityAnalogy) throw ValidationError("scenario kind is not gravity_analogy");
    auto t0 = Clock::now();
    RunSummary s = start_summary(cfg, ex);
    GravityPairParams gp = cfg.gravity;
    gp.squeezing_r = squeezing_r(cfg.state);
    auto dg = derive_gravity(cfg.constants, gp);
    double gN = std::fabs(dg.g_N.value()), ge = dg.Gamma_ent.value();
    double force = cfg.constants.hbar.value() * ge / dg.q0b.value();
    double consistency = ge > 0.0 ? std::fabs(std::exp(gp.squeezing_r) * gN - ge) / ge : 0.0;
    add(s, "Omega_a", dg.Omega_a.value(), "rad/s", "derived");
    add(s, "Omega_b", dg.Omega_b.value(), "rad/s", "derived");
    add(s, "g_N", dg.g_N.value(), "rad/s", "derived");
    add(s, "gamma_ent", ge, "rad/s", "derived");
    add(s, "noise_force_scale", force, "N", "derived");
    add(s, "ent_consistency", consistency, "1", "derived");
    finish(s, t0);
    return s;
}

RunSummary run_scenario(const ScenarioConfig& cfg, const ExecOptions& ex) {
    switch (cfg.kind) {
        case ScenarioKind::CavityParticle: return run_cavity_particle(cfg, ex);
        case ScenarioKind::LightProbe: return run_light_probe(cfg, ex);
        case ScenarioKind::ParticleParticle: return run_particle_particle(cfg, ex);
        case ScenarioKind::GravityAnalogy: return run_gravity_analogy(cfg, ex);
    }
    throw ValidationError("unknown scenario kind");
}

namespace {

// Applies one sweep coordinate; returns the value reported in the table column.
std::string column_name(const std::string& axis) {
    if (axis == "coulomb.charge_e" || axis == "coulomb.target_ge_over_omega_b") return "g_e_over_omega_b";
    if (axis == "state.squeezing_db") return "squeezing_db";
    if (axis == "semiclassical.nbar") return "nbar_b";
    if (axis == "state.phi") return "phi";
    throw ValidationError("sweep axis '" + axis + "' is not a sweepable config field");
}

void apply_axis(ScenarioConfig& c, const std::string& axis, double v) {
    if (axis == "coulomb.charge_e") {
        c.coulomb.charge_a = Charge(v * c.constants.e_charge.value());
        c.coulomb.charge_b = c.coulomb.charge_a;
        c.target_ge_over_omega_b.reset();
    } else if (axis == "coulomb.target_ge_over_omega_b") {
        c.target_ge_over_omega_b = v;
    } else if (axis == "state.squeezing_db" || axis == "state.phi") {
        double r = squeezing_r(c.state), phi = squeezing_phi(c.state);
        if (axis == "state.squeezing_db") {
            if (v < 0.0) throw ValidationError("squeezing dB must be >= 0");
            r = squeezing_r_from_db(v);
        } else {
            phi = v;
        }
        if (auto* t = std::get_if<SqueezedThermal>(&c.state)) {
            t->r = r;
            t->phi = phi;
        } else if (auto* sc = std::get_if<SqueezedCoherent>(&c.state)) {
            sc->r = r;
            sc->phi = phi;
        } else {
            c.state = SqueezedCoherent{r, phi, 0.0, 0.0};
        }
    } else if (axis == "semiclassical.nbar") {
        if (v < 0.0) throw ValidationError("semiclassical.nbar must be >= 0");
        c.nbar_b = v;
    } else {
        column_name(axis);
    }
}

}  // namespace

RunSummary run_sweep(const ScenarioConfig& cfg, const ExecOptions& ex) {
    if (!cfg.sweep) throw ValidationError("config has no sweep section");
    if (cfg.kind != ScenarioKind::ParticleParticle) throw ValidationError("sweeps are defined for particle_particle");
    auto t0 = Clock::now();
    RunSummary s = start_summary(cfg, ex);
    const auto& sw = *cfg.sweep;
    std::string c1 = column_name(sw.axis1.name), c2 = column_name(sw.axis2.name);
    const std::size_t n1 = sw.axis1.values.size(), n2 = sw.axis2.values.size();
    if (n1 == 0 || n2 == 0) throw ValidationError("sweep axes need at least one value");
    std::vector<std::vector<double>> rows(n1 * n2);
    parallel_for(n1 * n2, ex.threads, [&](std::size_t idx) {
        ScenarioConfig c = cfg;
        double v1 = sw.axis1.values[idx / n2], v2 = sw.axis2.values[idx % n2];
        apply_axis(c, sw.axis1.name, v1);
        apply_axis(c, sw.axis2.name, v2);
        PairModel pm = pair_model(c);
        VarianceTrace tr = pair_trace(pm, pair_grid(c, pm));
        double best = *std::max_element(tr.total_sigma.begin(), tr.total_sigma.end()) / tr.q0;
        double x1 = v1, x2 = v2;
        double ratio = std::fabs(pm.dc.g_e.value()) / pm.dc.Omega_b.value();
        if (c1 == "g_e_over_omega_b") x1 = ratio;
        if (c2 == "g_e_over_omega_b") x2 = ratio;
        rows[idx] = {x1, x2, best};
    });
    s.sweep = SweepTable{{c1, c2, "max_sigma_over_q0"}, std::move(rows)};
    s.manifest.counts["sweep_cells"] = static_cast<double>(n1 * n2);
    finish(s, t0);
    return s;
}

McReport monte_carlo_validate(const ScenarioConfig& cfg, const ExecOptions& ex, double force_scale) {
    const auto& mc = cfg.monte_carlo;
    if (mc.n_paths == 0) throw ValidationError("monte_carlo.paths must be >= 1");
    McReport rep;
    rep.n_paths = mc.n_paths;
    rep.seed = mc.seed;
    rep.force_scale = force_scale;

    std::vector<KernelDecomposition> kernels;
    OscillatorParams probe;
    TimeGrid grid;
    std::function<double(double)> analytic;
    double s2 = force_scale * force_scale;

    if (cfg.kind == ScenarioKind::ParticleParticle) {
        PairModel pm = pair_model(cfg);
        probe = probe_b(cfg, pm.dc);
        double f0 = pm.dc.f0.value();
        kernels.push_back(single_mode_kernel(cfg.state, f0, pm.dc.Omega_a.value(), Branch::Stationary));
        kernels.push_back(single_mode_kernel(cfg.state, f0, pm.dc.Omega_a.value(), Branch::NonStationary));
        grid = TimeGrid::spanning(0.0, mc.periods * kTwoPi / pm.dc.Omega_b.value(), mc.points);
        analytic = [pm, s2](double t) { return s2 * (pm.dst(t) + pm.dnst(t)); };
    } else if (cfg.kind == ScenarioKind::CavityParticle) {
        auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
        probe = cfg.oscillator;
        kernels.push_back(cavity_kernel(dp, cfg.state, Branch::Stationary));
        kernels.push_back(cavity_kernel(dp, cfg.state, Branch::NonStationary));
        grid = resolve_grid(cfg, 2048, 10.0 / dp.gamma());
        auto ks = kernels;
        analytic = [ks, probe, s2](double t) {
            return s2 * (excess_variance_integral(ks[0], probe, t) + excess_variance_integral(ks[1], probe, t));
        };
    } else {
        throw ValidationError("Monte Carlo validation is defined for cavity_particle and particle_particle");
    }
    for (auto& k : kernels) k = k.scaled(s2);

    rep.grid = grid;
    auto C = assemble_covariance(kernels, grid, ex.threads);
    auto L = factorize(C);
    rep.jitter = L.jitter;
    auto paths = sample_paths(L, mc.n_paths, mc.seed, ex.threads);
    auto traj = integrate_langevin(probe, paths, {}, grid, ex.threads);

    const std::size_t n = grid.n_steps;
    const double N = static_cast<double>(mc.n_paths);
    std::size_t over = 0, counted = 0;
    for (std::size_t i = 1; i < n; ++i) {
        double m1 = 0.0, m2 = 0.0;
        for (const auto& tr : traj) {
            double q2 = tr.position[i] * tr.position[i];
            m1 += q2;
            m2 += q2 * q2;
        }
        m1 /= N;
        m2 /= N;
        double se = std::sqrt(std::max(m2 - m1 * m1, 0.0) / N);
        double ref = analytic(grid.time(i));
        double z = se > 0.0 ? (m1 - ref) / se : 0.0;
        rep.t.push_back(grid.time(i));
        rep.ensemble_var.push_back(m1);
        rep.analytic_var.push_back(ref);
        rep.z.push_back(z);
        rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(z));
        ++counted;
        if (std::fabs(z) > 4.0) ++over;
    }
    rep.frac_over_4 = counted ? static_cast<double>(over) / static_cast<double>(counted) : 0.0;
    return rep;
}

}  // namespace qnoise
