#pragma once

#include <string>
#include <vector>

#include "qnoise/params.hpp"

namespace qnoise {

// e^{-lambda x} [c cos(omega x) + s sin(omega x)], x >= 0.
struct ExpTrig {
    double lambda = 0.0;
    double omega = 0.0;
    double c = 0.0;
    double s = 0.0;

    double eval(double x) const;
};

// Two-time covariance: smooth part plus delta and delta'' coefficients.
// diff_terms are functions of |t - t'|, sum_terms of t + t'.
struct KernelDecomposition {
    std::vector<ExpTrig> diff_terms;
    std::vector<ExpTrig> sum_terms;
    double delta_coeff = 0.0;
    double delta2_coeff = 0.0;
    std::string units = "N^2";
    std::vector<std::string> provenance;

    bool stationary() const { return sum_terms.empty(); }
    double smooth(double t, double tp) const;
    double smooth_tau(double tau) const;  // diff part only
    double max_frequency() const;
    bool empty() const;

    KernelDecomposition scaled(double k) const;
    KernelDecomposition& operator+=(const KernelDecomposition& o);
};

enum class Branch { Stationary, NonStationary };

struct ForceScale {
    double f0 = 0.0;
    double enhancement_st = 1.0;
    double enhancement_nst = 0.0;
};

ForceScale force_scale(const QuantumState& s, double f0);

// Dimensionless single-mode correlators (units of g^2).
double single_mode_stationary(const QuantumState& s, double g, double omega, double t, double tp);
double single_mode_nonstationary(const QuantumState& s, double g, double omega, double t, double tp);

// Single-mode force kernel with scale f0 = hbar g / q0 (N^2).
KernelDecomposition single_mode_kernel(const QuantumState& s, double f0, double omega, Branch b);

struct LorentzianJ {
    double J1 = 0.0;
    double J2 = 0.0;
};

// Closed forms of int cos/sin(w tau) / ((w - wc)^2 + gamma^2) dw over the Lorentzian line.
LorentzianJ lorentzian_J(double tau, double omega_c, double gamma);

enum class JDomain { FullLine, HalfLine };

// Adaptive Gauss-Kronrod over omega_c +- window*gamma with the outer tails added analytically.
// HalfLine integrates from 0 (the defining integral); FullLine from -inf.
LorentzianJ lorentzian_J_quadrature(double tau, double omega_c, double gamma, JDomain domain,
                                    double window = 1e4);

KernelDecomposition cavity_vacuum_kernel(const DerivedCavityParams& dp);
KernelDecomposition cavity_squeezed_kernel(const DerivedCavityParams& dp, const SqueezedCoherent& st, Branch b);
KernelDecomposition cavity_squeezed_thermal_kernel(const DerivedCavityParams& dp, const SqueezedThermal& st,
                                                   Branch b);
KernelDecomposition cavity_kernel(const DerivedCavityParams& dp, const QuantumState& s, Branch b);

// Coherent drive of the traced-out field. Zero for vacuum and thermal states.
double deterministic_force(const QuantumState& s, const DerivedCavityParams& dp, bool single_mode, double t);

struct SamplePath;

double single_mode_dissipation(double hbar, double g, double omega, double q0, const SamplePath& path, double t);
double dissipation_force(const DerivedCavityParams& dp, const SamplePath& path, double t, bool cavity);

struct FdtReport {
    double max_rel_dev = 0.0;      // smooth parts, relative to the kernel envelope
    double delta_rel_dev = 0.0;
    std::size_t points = 0;
};

// Compares the high-T stationary kernel with T(t,t')/beta on tau in (0, tau_max].
FdtReport fdt_check(const DerivedCavityParams& dp, const SqueezedThermal& st, double tau_max, std::size_t points);

// Dissipation memory kernel T(tau) per unit f0^2 route, evaluated independently of the kernel tables.
double dissipation_kernel_T(const DerivedCavityParams& dp, double tau);

// coeff * delta^{(order)}(tau)
struct DistTerm {
    double coeff = 0.0;
    int order = 0;
};

enum class Multiplier { Cos, Sin };

// f(tau) delta^{(k)}(tau) = sum_j C(k,j) (-1)^j f^{(j)}(0) delta^{(k-j)}(tau), f = cos/sin(omega_c tau).
std::vector<DistTerm> reduce_product(int order, Multiplier m, double omega_c);

}  // namespace qnoise
