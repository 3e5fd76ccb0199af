#include "qnoise/params.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

namespace qnoise {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void PhysicalConstants::validate() const {
    require(finite_pos(hbar.value()) && finite_pos(kB.value()) && finite_pos(c.value()) &&
                finite_pos(eps0.value()) && finite_pos(G.value()) && finite_pos(e_charge.value()),
            "physical constants must be strictly positive");
}

void OscillatorParams::validate() const {
    require(finite_pos(mass.value()), "oscillator.mass must be > 0");
    require(finite_pos(bare_frequency.value()), "oscillator.frequency must be > 0");
    require(std::isfinite(damping_rate.value()) && damping_rate.value() >= 0.0,
            "oscillator.damping must be >= 0");
    require(std::isfinite(bath_temperature.value()) && bath_temperature.value() >= 0.0,
            "oscillator.temperature must be >= 0");
}

Length zero_point(const PhysicalConstants& k, Mass m, Rate omega) {
    return sqrt(k.hbar / (2.0 * m * omega));
}

void CavityParams::validate() const {
    require(finite_pos(length.value()), "cavity.length must be > 0");
    require(finite_pos(central_frequency.value()), "cavity.omega_c must be > 0");
    require(finite_pos(linewidth.value()), "cavity.gamma must be > 0");
    require(std::isfinite(tweezer_field.value()) && tweezer_field.value() >= 0.0,
            "cavity.tweezer_field must be >= 0");
    require(std::isfinite(polarizability.value()) && polarizability.value() >= 0.0,
            "cavity.polarizability must be >= 0");
}

Polarizability polarizability_from_volume(const PhysicalConstants& k, Volume v, double eps_r) {
    if (!(v.value() > 0.0) || !(eps_r >= 1.0)) throw ValidationError("particle volume > 0 and eps_r >= 1 required");
    return 3.0 * k.eps0 * v * ((eps_r - 1.0) / (eps_r + 2.0));
}

DerivedCavityParams derive_cavity(const PhysicalConstants& k, const OscillatorParams& osc,
                                  const CavityParams& cav) {
    k.validate();
    osc.validate();
    cav.validate();

    DerivedCavityParams d;
    d.k = k;
    d.osc = osc;
    d.cav = cav;
    d.q0 = zero_point(k, osc.mass, osc.bare_frequency);
    auto denom = sqrt(kPi * k.eps0 * (k.c * k.c * k.c) * (cav.length * cav.length) * osc.mass *
                      osc.bare_frequency);
    d.a = (cav.polarizability * cav.tweezer_field) / denom;
    d.g_c = d.a * cav.central_frequency * cav.central_frequency;
    d.f0 = k.hbar * d.g_c / d.q0;

    Dimensionless eps = d.g_c / osc.bare_frequency;
    Dimensionless nu = cav.linewidth / cav.central_frequency;
    d.epsilon = eps.value();
    d.nu = nu.value();
    if (!std::isfinite(d.epsilon) || !std::isfinite(d.nu) || !std::isfinite(d.f0.value()))
        throw DimensionError("derived frequency ratio is not finite");
    if (d.nu >= 0.1) throw RangeError("nu = gamma/omega_c = " + std::to_string(d.nu) + " must be < 0.1");
    return d;
}

void CoulombPairParams::validate() const {
    require(finite_pos(separation.value()), "coulomb.separation must be > 0");
    require(finite_pos(mass_a.value()) && finite_pos(mass_b.value()), "coulomb masses must be > 0");
    require(finite_pos(bare_freq_a.value()) && finite_pos(bare_freq_b.value()),
            "coulomb bare frequencies must be > 0");
    require(std::isfinite(charge_a.value()) && std::isfinite(charge_b.value()), "charges must be finite");
}

DerivedCoulombParams derive_coulomb(const PhysicalConstants& k, const CoulombPairParams& p) {
    k.validate();
    p.validate();
    auto d3 = p.separation * p.separation * p.separation;
    auto coupling = (p.charge_a * p.charge_b) / (4.0 * kPi * k.eps0 * d3);  // N/m

    auto shifted = [&](Rate w, Mass m, const char* which) {
        auto w2 = w * w - coupling / m;
        if (!(w2.value() > 0.0))
            throw ImaginaryFrequency(std::string("Coulomb term exceeds trap stiffness for particle ") + which);
        return sqrt(w2);
    };

    DerivedCoulombParams d;
    d.Omega_a = shifted(p.bare_freq_a, p.mass_a, "a");
    d.Omega_b = shifted(p.bare_freq_b, p.mass_b, "b");
    d.q0a = zero_point(k, p.mass_a, d.Omega_a);
    d.q0b = zero_point(k, p.mass_b, d.Omega_b);
    d.g_e = -1.0 * (coupling * d.q0a * d.q0b) / k.hbar;
    d.f0 = k.hbar * Rate(std::fabs(d.g_e.value())) / d.q0b;
    d.kappa = (d.Omega_a / d.Omega_b).value();
    return d;
}

void GravityPairParams::validate() const {
    require(finite_pos(mass.value()), "gravity.mass must be > 0");
    require(finite_pos(separation.value()), "gravity.separation must be > 0");
    require(finite_pos(bare_freq_a.value()) && finite_pos(bare_freq_b.value()),
            "gravity bare frequencies must be > 0");
    require(std::isfinite(squeezing_r) && squeezing_r >= 0.0, "gravity squeezing r must be >= 0");
}

DerivedGravityParams derive_gravity(const PhysicalConstants& k, const GravityPairParams& p) {
    p.validate();
    auto d3 = p.separation * p.separation * p.separation;
    auto shift = 2.0 * k.G * p.mass / d3;  // 1/s^2

    DerivedGravityParams d;
    d.Omega_a = sqrt(p.bare_freq_a * p.bare_freq_a + shift);
    d.Omega_b = sqrt(p.bare_freq_b * p.bare_freq_b + shift);
    d.q0a = zero_point(k, p.mass, d.Omega_a);
    d.q0b = zero_point(k, p.mass, d.Omega_b);
    auto pref = 2.0 * k.G / k.hbar * (p.mass * p.mass) / d3;
    d.g_N = -1.0 * pref * d.q0a * d.q0b;
    Length dqa = d.q0a * std::exp(p.squeezing_r);
    d.Gamma_ent = pref * dqa * d.q0b;
    return d;
}

void validate_state(const QuantumState& s) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SqueezedCoherent>) {
                require(std::isfinite(v.r) && v.r >= 0.0, "state.r must be >= 0");
                require(std::isfinite(v.alpha_mag) && v.alpha_mag >= 0.0, "state.alpha must be >= 0");
                require(std::isfinite(v.phi) && std::isfinite(v.theta), "state phases must be finite");
            } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
                require(std::isfinite(v.r) && v.r >= 0.0, "state.r must be >= 0");
                require(v.beta_hw > 0.0, "state.beta_hw must be > 0");
                require(std::isfinite(v.phi), "state.phi must be finite");
            }
        },
        s);
}

double squeezing_r(const QuantumState& s) {
    if (auto* c = std::get_if<SqueezedCoherent>(&s)) return c->r;
    if (auto* t = std::get_if<SqueezedThermal>(&s)) return t->r;
    return 0.0;
}

double squeezing_phi(const QuantumState& s) {
    if (auto* c = std::get_if<SqueezedCoherent>(&s)) return c->phi;
    if (auto* t = std::get_if<SqueezedThermal>(&s)) return t->phi;
    return 0.0;
}

double thermal_factor(const QuantumState& s) {
    auto* t = std::get_if<SqueezedThermal>(&s);
    if (!t) return 1.0;
    double x = 0.5 * t->beta_hw;
    if (x > 40.0) return 1.0;  // coth saturates below double resolution
    return 1.0 / std::tanh(x);
}

double enhancement_st(const QuantumState& s) { return std::cosh(2.0 * squeezing_r(s)) * thermal_factor(s); }

double enhancement_nst(const QuantumState& s) { return std::sinh(2.0 * squeezing_r(s)) * thermal_factor(s); }

double squeezing_db(double r) { return 10.0 * std::log10(std::exp(2.0 * r)); }

double squeezing_r_from_db(double db) { return 0.5 * db * std::log(10.0) / 10.0; }

double beta_hw_from_occupation(double nbar) {
    if (!(nbar > 0.0)) throw ValidationError("occupation must be > 0");
    return std::log1p(1.0 / nbar);
}

}  // namespace qnoise
