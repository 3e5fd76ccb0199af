// Shared parameter sets for the tests. Values are raw inputs only; derived
// numbers are pinned in the individual tests against tests/oracles/oracles.py.
#pragma once

#include <cmath>
#include <random>

#include "qnoise/params.hpp"

namespace qnoise::fixtures {

inline OscillatorParams table1_oscillator() {
    OscillatorParams o;
    o.mass = Mass(2.8e-18);
    o.bare_frequency = Rate(kTwoPi * 190e3);
    o.damping_rate = Rate(5e-6);
    return o;
}

inline CavityParams table1_cavity(const PhysicalConstants& k = {}) {
    CavityParams c;
    c.length = Length(0.03);
    c.central_frequency = Rate(1.22e15);
    c.linewidth = Rate(kTwoPi * 193e3);
    const double P = 0.17, wx = 0.67e-6, wy = 0.77e-6;
    c.tweezer_field = EField(std::sqrt(4.0 * P / (kPi * wx * wy * k.eps0.value() * k.c.value())));
    c.polarizability = polarizability_from_volume(k, Volume(2.8e-18 / 2200.0));
    return c;
}

inline DerivedCavityParams table1(const PhysicalConstants& k = {}) {
    return derive_cavity(k, table1_oscillator(), table1_cavity(k));
}

// Same geometry with a broad, slow line (nu = 1e-3) so kernels can be gridded.
inline DerivedCavityParams scaled_cavity(double nu = 1e-3) {
    PhysicalConstants k;
    OscillatorParams o = table1_oscillator();
    CavityParams c = table1_cavity(k);
    c.central_frequency = Rate(1e7);
    c.linewidth = Rate(nu * 1e7);
    return derive_cavity(k, o, c);
}

inline double sphere_mass(double radius, double rho = 2200.0) { return 4.0 / 3.0 * kPi * radius * radius * radius * rho; }

inline CoulombPairParams table2_pair(const PhysicalConstants& k = {}, double charge_e = 250.0) {
    CoulombPairParams p;
    p.charge_a = Charge(charge_e * k.e_charge.value());
    p.charge_b = p.charge_a;
    p.separation = Length(2e-6);
    p.mass_a = p.mass_b = Mass(sphere_mass(70e-9));
    p.bare_freq_a = Rate(kTwoPi * 190e3);
    p.bare_freq_b = Rate(kTwoPi * 180e3);
    return p;
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace qnoise::fixtures
