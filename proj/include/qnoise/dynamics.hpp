#pragma once

#include <functional>
#include <vector>

#include "qnoise/grid.hpp"
#include "qnoise/kernels.hpp"

namespace qnoise {

struct Trajectory {
    TimeGrid grid;
    std::vector<double> position;  // m
    std::vector<double> velocity;  // m/s
};

struct VarianceTrace {
    TimeGrid grid;
    std::vector<double> sigma0_sq;
    std::vector<double> delta_sigma_st_sq;
    std::vector<double> delta_sigma_nst_sq;
    std::vector<double> total_sigma;
    std::vector<double> rounding_scale;  // magnitude of the summands before cancellation, m^2
    double q0 = 0.0;                     // reference length for the *_over_q0 column
    std::string units = "m";

    // Fills total_sigma; NegativeVariance if a radicand is negative beyond rounding.
    void finalize();
};

using ForceFn = std::function<double(double)>;

// Green's-function convolution with trapezoidal weights; one trajectory per path.
// With no paths, integrates the deterministic force alone on `grid`.
std::vector<Trajectory> integrate_langevin(const OscillatorParams& osc, const std::vector<SamplePath>& force_paths,
                                           const ForceFn& deterministic, const TimeGrid& grid, int threads = 1);

// Semi-implicit velocity-Verlet stepper, kept as an independent cross-check.
Trajectory step_langevin(const OscillatorParams& osc, const SamplePath& force, const ForceFn& deterministic = {});

enum class VarianceMethod { Analytic, Quadrature };

struct VarianceOptions {
    VarianceMethod method = VarianceMethod::Analytic;
    std::size_t points = 2001;  // quadrature nodes on [0, t]
    int threads = 1;
};

struct VarianceValue {
    double value = 0.0;  // m^2
    double scale = 0.0;  // sum of |summands|, bounds the rounding error
};

VarianceValue excess_variance(const KernelDecomposition& kernel, const OscillatorParams& osc, double t,
                              const VarianceOptions& opt = {});

double excess_variance_integral(const KernelDecomposition& kernel, const OscillatorParams& osc, double t,
                                const VarianceOptions& opt = {});

// (cos Oa t - cos Ob t)^2 + (sin Oa t - kappa sin Ob t)^2
double closed_form_h(double kappa, double Omega_a, double Omega_b, double t);
double closed_form_h_phi(double kappa, double Omega_a, double Omega_b, double phi, double t);

// Excess variance of the optical quadrature with the particle as the quantum system.
double optical_quadrature_variance(const DerivedCavityParams& dp, double t);

// Characteristic steady-state excess rms of the cavity scenario.
double steady_state_rms(const QuantumState& s, const DerivedCavityParams& dp);

}  // namespace qnoise
