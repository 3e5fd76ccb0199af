// qnoise: command-line front end for the quantum-noise scenarios.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "qnoise/cli_io.hpp"
#include "qnoise/kernels.hpp"
#include "qnoise/selftest.hpp"
#include "qnoise/version.hpp"

#ifndef QNOISE_CONFIG_DIR
#define QNOISE_CONFIG_DIR "configs"
#endif

namespace {

using namespace qnoise;

struct Globals {
    std::string out = "qnoise_out";
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string profile = "default";
};

std::uint64_t parse_seed_env() {
    const char* env = std::getenv("QNOISE_SEED");
    if (!env) return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0' || end == env) throw ValidationError("QNOISE_SEED is not an unsigned integer");
    return v;
}

ScenarioConfig load(const std::string& path, const Globals& g) {
    ScenarioConfig cfg = parse_config(path);
    if (std::getenv("QNOISE_SEED")) cfg.monte_carlo.seed = parse_seed_env();
    if (g.seed) cfg.monte_carlo.seed = *g.seed;
    return cfg;
}

void print_summary(const RunSummary& s, const std::vector<std::string>& files) {
    std::cout << "scenario " << s.name << " (" << to_string(s.kind) << ")\n";
    for (const auto& sc : s.scalars)
        std::cout << "  " << sc.name << " = " << format_number(sc.value) << ' ' << sc.units << '\n';
    if (s.monte_carlo)
        std::cout << "  monte_carlo: paths=" << s.monte_carlo->n_paths
                  << " max|z|=" << format_number(s.monte_carlo->max_abs_z) << '\n';
    for (const auto& w : s.manifest.warnings) std::cout << "  warning: " << w << '\n';
    for (const auto& f : files) std::cout << "  wrote " << f << '\n';
}

int list_examples() {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (fs::is_directory(QNOISE_CONFIG_DIR))
        for (const auto& e : fs::directory_iterator(QNOISE_CONFIG_DIR))
            if (e.path().extension() == ".cfg") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::string line, covers = " -";
        while (std::getline(in, line))
            if (line.rfind("# covers:", 0) == 0) covers = line.substr(9);
        std::cout << f.string() << "  criteria:" << covers << '\n';
    }
    return 0;
}

int cmd_kernels(const ScenarioConfig& cfg, const Globals& g) {
    if (cfg.kind != ScenarioKind::CavityParticle && cfg.kind != ScenarioKind::LightProbe)
        throw ValidationError("kernel tables are defined for cavity scenarios");
    auto dp = derive_cavity(cfg.constants, cfg.oscillator, cfg.cavity);
    namespace fs = std::filesystem;
    fs::create_directories(g.out);
    std::string hash = config_hash(cfg);
    for (auto b : {Branch::Stationary, Branch::NonStationary}) {
        auto k = cavity_kernel(dp, cfg.state, b);
        std::string tag = b == Branch::Stationary ? "st" : "nst";
        fs::path p = fs::path(g.out) / (cfg.name + "_" + hash.substr(0, 12) + "_kernel_" + tag + ".csv");
        std::ofstream os(p, std::ios::binary);
        if (!os) throw IoError("cannot write " + p.string());
        os << "tau_s,smooth_n2,delta_coeff_n2s,delta2_coeff_n2s3\n";
        const std::size_t n = 1001;
        double span = 5.0 / dp.gamma();
        for (std::size_t i = 0; i < n; ++i) {
            double tau = span * static_cast<double>(i) / static_cast<double>(n - 1);
            // non-stationary tables are evaluated on the diagonal t = t' = tau / 2
            double v = b == Branch::Stationary ? k.smooth_tau(tau) : k.smooth(0.5 * tau, 0.5 * tau);
            os << format_number(tau) << ',' << format_number(v) << ',' << format_number(k.delta_coeff) << ','
               << format_number(k.delta2_coeff) << '\n';
        }
        if (!os) throw IoError("write failed for " + p.string());
        std::cout << "wrote " << p.string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qnoise: semiclassical quantum-noise simulator"};
    app.set_version_flag("--version", qnoise::kVersion);
    Globals g;
    bool list = false;
    app.add_flag("--list-examples", list, "List shipped configs and the criteria they cover");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Override the Monte Carlo seed (wins over QNOISE_SEED)");
    app.add_option("--threads", g.threads, "Worker threads; never changes output bytes")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    app.add_option("--tolerance-profile", g.profile, "Tolerance profile")
        ->check(CLI::IsMember({"strict", "default"}))
        ->capture_default_str();

    std::string cfg_path;
    auto* run = app.add_subcommand("run", "Run a scenario and write traces + manifest");
    run->add_option("config", cfg_path, "Config file")->required();
    auto* sweep = app.add_subcommand("sweep", "Run the config's sweep table");
    sweep->add_option("config", cfg_path, "Config file")->required();
    auto* validate = app.add_subcommand("validate", "Monte Carlo cross-check against the analytic variance");
    validate->add_option("config", cfg_path, "Config file")->required();
    auto* kernels = app.add_subcommand("kernels", "Dump kernel tables as CSV");
    kernels->add_option("config", cfg_path, "Config file")->required();
    auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (list) return list_examples();
        ExecOptions ex{g.threads, g.profile};
        if (*run || *sweep || *validate) {
            ScenarioConfig cfg = load(cfg_path, g);
            RunSummary s;
            if (*run) {
                s = run_scenario(cfg, ex);
            } else if (*sweep) {
                s = run_sweep(cfg, ex);
            } else {
                s = run_scenario(cfg, ex);
                if (!s.monte_carlo) {
                    s.monte_carlo = monte_carlo_validate(cfg, ex);
                    s.manifest.jitters.push_back(s.monte_carlo->jitter);
                }
            }
            auto files = emit_outputs(s, cfg, g.out);
            print_summary(s, files);
            if (*validate && s.monte_carlo->max_abs_z >= s.manifest.tolerances.at("mc_max_abs_z")) {
                std::cerr << "validate: max |z| = " << s.monte_carlo->max_abs_z << " exceeds 4\n";
                return 3;
            }
            return 0;
        }
        if (*kernels) return cmd_kernels(load(cfg_path, g), g);
        if (*selftest) {
            int failed = 0;
            for (const auto& r : run_selftest(g.threads)) {
                std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
                if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
                std::cout << '\n';
                failed += r.pass ? 0 : 1;
            }
            return failed ? 3 : 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const qnoise::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
