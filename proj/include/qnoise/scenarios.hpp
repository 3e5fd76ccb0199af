#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/dynamics.hpp"
#include "qnoise/params.hpp"

namespace qnoise {

enum class ScenarioKind { CavityParticle, LightProbe, ParticleParticle, GravityAnalogy };

const char* to_string(ScenarioKind k);

struct MonteCarloSpec {
    bool enabled = false;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    std::size_t points = 1024;
    double periods = 10.0;  // horizon in probe periods
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct SweepSpec {
    SweepAxis axis1, axis2;
};

struct ScenarioConfig {
    std::string name = "run";
    ScenarioKind kind = ScenarioKind::CavityParticle;
    QuantumState state = Vacuum{};
    PhysicalConstants constants;
    OscillatorParams oscillator;
    CavityParams cavity;
    CoulombPairParams coulomb;
    GravityPairParams gravity;
    std::optional<double> target_ge_over_omega_b;
    double nbar_b = 0.0;  // semiclassical particle occupation
    std::size_t grid_points = 0;  // 0 selects the scenario default
    double grid_horizon = 0.0;    // s; 0 selects the scenario default
    MonteCarloSpec monte_carlo;
    std::optional<SweepSpec> sweep;
    std::string canonical;  // normalized key=value text, hashed for file names
};

struct ExecOptions {
    int threads = 1;
    std::string tolerance_profile = "default";
};

struct Scalar {
    std::string name;
    double value = 0.0;
    std::string units;
    std::string source;  // "closed-form", "derived", or "trace:<column>:<reduction>"
};

struct NamedTrace {
    std::string label;
    VarianceTrace trace;
};

struct SweepTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct McReport {
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double max_abs_z = 0.0;
    double frac_over_4 = 0.0;
    double jitter = 0.0;
    double force_scale = 1.0;
    TimeGrid grid;
    std::vector<double> t, ensemble_var, analytic_var, z;
};

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::string tolerance_profile;
    std::map<std::string, double> tolerances;
    std::vector<double> jitters;
    std::map<std::string, double> counts;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
};

struct RunSummary {
    std::string name;
    ScenarioKind kind = ScenarioKind::CavityParticle;
    std::vector<Scalar> scalars;
    std::vector<NamedTrace> traces;
    std::optional<SweepTable> sweep;
    std::optional<McReport> monte_carlo;
    RunManifest manifest;

    const Scalar* find(const std::string& name) const;
    double at(const std::string& name) const;  // throws if missing
};

RunSummary run_cavity_particle(const ScenarioConfig& cfg, const ExecOptions& ex = {});
RunSummary run_light_probe(const ScenarioConfig& cfg, const ExecOptions& ex = {});
RunSummary run_particle_particle(const ScenarioConfig& cfg, const ExecOptions& ex = {});
RunSummary run_gravity_analogy(const ScenarioConfig& cfg, const ExecOptions& ex = {});
RunSummary run_scenario(const ScenarioConfig& cfg, const ExecOptions& ex = {});

// Max sigma / q0 tables over the configured sweep axes.
RunSummary run_sweep(const ScenarioConfig& cfg, const ExecOptions& ex = {});

McReport monte_carlo_validate(const ScenarioConfig& cfg, const ExecOptions& ex = {}, double force_scale = 1.0);

// Charge (C, equal on both particles) giving |g_e| / Omega_b = ratio.
double charge_for_coupling_ratio(const PhysicalConstants& k, CoulombPairParams pair, double ratio);

// Coulomb parameters with the target ratio applied, if any.
CoulombPairParams resolved_coulomb(const ScenarioConfig& cfg);

// Recomputes a trace-sourced scalar from the summary's own traces.
double recompute_from_traces(const RunSummary& s, const Scalar& sc);

}  // namespace qnoise
