#pragma once

#include <variant>

#include "qnoise/errors.hpp"
#include "qnoise/units.hpp"

namespace qnoise {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct PhysicalConstants {
    Action hbar{1.054571817e-34};
    EntropyUnit kB{1.380649e-23};
    Speed c{2.99792458e8};
    Permittivity eps0{8.8541878128e-12};
    GravityConstant G{6.67430e-11};
    Charge e_charge{1.602176634e-19};

    static PhysicalConstants codata() { return {}; }
    void validate() const;
};

struct OscillatorParams {
    Mass mass{};
    Rate bare_frequency{};
    Rate damping_rate{};  // amplitude decay gamma_m = Gamma_m / (2m)
    Temperature bath_temperature{};

    void validate() const;
};

// Zero-point spread sqrt(hbar / (2 m omega)).
Length zero_point(const PhysicalConstants& k, Mass m, Rate omega);

struct CavityParams {
    Length length{};
    Rate central_frequency{};
    Rate linewidth{};
    EField tweezer_field{};
    Polarizability polarizability{};

    void validate() const;
};

// Dielectric sphere polarizability 3 eps0 V (eps_r - 1)/(eps_r + 2).
Polarizability polarizability_from_volume(const PhysicalConstants& k, Volume v, double eps_r = 2.07);

struct DerivedCavityParams {
    PhysicalConstants k;
    OscillatorParams osc;
    CavityParams cav;

    Length q0;
    Time a;      // g(omega) = a omega^2
    Rate g_c;
    Force f0;
    double epsilon = 0.0;
    double nu = 0.0;

    double omega_c() const { return cav.central_frequency.value(); }
    double gamma() const { return cav.linewidth.value(); }
    double g_at(double omega) const { return a.value() * omega * omega; }
};

DerivedCavityParams derive_cavity(const PhysicalConstants& k, const OscillatorParams& osc,
                                  const CavityParams& cav);

struct CoulombPairParams {
    Charge charge_a{}, charge_b{};
    Length separation{};
    Mass mass_a{}, mass_b{};
    Rate bare_freq_a{}, bare_freq_b{};

    void validate() const;
};

struct DerivedCoulombParams {
    Rate Omega_a, Omega_b;
    Length q0a, q0b;
    Rate g_e;
    Force f0;
    double kappa = 1.0;
};

DerivedCoulombParams derive_coulomb(const PhysicalConstants& k, const CoulombPairParams& pair);

struct GravityPairParams {
    Mass mass{};
    Length separation{};
    Rate bare_freq_a{}, bare_freq_b{};
    double squeezing_r = 0.0;

    void validate() const;
};

struct DerivedGravityParams {
    Rate Omega_a, Omega_b;
    Length q0a, q0b;
    Rate g_N;
    Rate Gamma_ent;
};

DerivedGravityParams derive_gravity(const PhysicalConstants& k, const GravityPairParams& pair);

struct Vacuum {};

struct SqueezedCoherent {
    double r = 0.0;
    double phi = 0.0;
    double alpha_mag = 0.0;
    double theta = 0.0;
};

struct SqueezedThermal {
    double r = 0.0;
    double phi = 0.0;
    double beta_hw = 1.0;  // beta hbar omega of the traced-out mode
};

using QuantumState = std::variant<Vacuum, SqueezedCoherent, SqueezedThermal>;

void validate_state(const QuantumState& s);
double squeezing_r(const QuantumState& s);
double squeezing_phi(const QuantumState& s);
// coth(beta hbar omega / 2); 1 for non-thermal states.
double thermal_factor(const QuantumState& s);
double enhancement_st(const QuantumState& s);
double enhancement_nst(const QuantumState& s);

// S = 10 log10(e^{2r}) and its inverse.
double squeezing_db(double r);
double squeezing_r_from_db(double db);

// beta hbar omega for a mode of mean occupation nbar.
double beta_hw_from_occupation(double nbar);

}  // namespace qnoise
