#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnoise/cli_io.hpp"

using namespace qnoise;
namespace fs = std::filesystem;

namespace {

std::string cfg_path(const std::string& name) { return std::string(QNOISE_SOURCE_DIR) + "/configs/" + name; }

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("qnoise_cli_io_" + tag);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("shipped cavity-particle config") {
    auto cfg = parse_config(cfg_path("table1_vacuum.cfg"));
    CHECK(cfg.kind == ScenarioKind::CavityParticle);
    CHECK(std::holds_alternative<Vacuum>(cfg.state));
    CHECK(cfg.oscillator.mass.value() == doctest::Approx(2.8e-18).epsilon(1e-15));
    CHECK(cfg.oscillator.bare_frequency.value() == doctest::Approx(kTwoPi * 190e3).epsilon(1e-15));
    CHECK(cfg.cavity.central_frequency.value() == doctest::Approx(1.22e15).epsilon(1e-15));
    CHECK(cfg.cavity.tweezer_field.value() == doctest::Approx(12572221.956219386).epsilon(1e-12));
}

TEST_CASE("every shipped config parses") {
    for (const auto& e : fs::directory_iterator(std::string(QNOISE_SOURCE_DIR) + "/configs"))
        if (e.path().extension() == ".cfg") CHECK_NOTHROW(parse_config(e.path().string()));
}

TEST_CASE("broad cavity line is a validation error naming nu") {
    std::string text = "scenario.kind = cavity_particle\n"
                       "oscillator.mass_fg = 2.8\noscillator.frequency_khz = 190\n"
                       "cavity.length = 0.03\ncavity.omega_c = 1e6\ncavity.gamma = 2e5\n"
                       "cavity.tweezer_field = 1e7\ncavity.polarizability = 1e-32\n";
    try {
        parse_config_text(text, "inline");
        FAIL("accepted nu = 0.2");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("nu") != std::string::npos);
    }
}

TEST_CASE("unknown and malformed keys carry a position") {
    std::string text = "scenario.kind = cavity_particle\n  cavity.finesse = 1e5\n";
    try {
        parse_config_text(text, "inline");
        FAIL("accepted cavity.finesse");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 3);
    }
    CHECK_THROWS_AS(parse_config_text("scenario.kind = gravity_analogy\nscenario.kind = gravity_analogy\n", "x"),
                    ParseError);
    CHECK_THROWS_AS(parse_config_text("scenario.kind gravity_analogy\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_config_text("scenario.kind = gravity_analogy\ngravity.mass = 1e-14kg\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_config(cfg_path("does_not_exist.cfg")), IoError);
}

TEST_CASE("a run without a sweep writes trace and manifest") {
    auto cfg = parse_config(cfg_path("table2_fig2.cfg"));
    auto dir = scratch("plain");
    auto files = emit_outputs(run_scenario(cfg), cfg, dir.string());
    std::string stem = cfg.name + "_" + config_hash(cfg).substr(0, 12);
    std::vector<std::string> expect = {(dir / (stem + "_trace.csv")).string(), (dir / (stem + "_manifest.txt")).string(),
                                       (dir / (stem + "_timing.txt")).string()};
    CHECK(files == expect);
    auto trace = slurp(expect[0]);
    CHECK(trace.rfind("t_s,sigma0_sq_m2,dst_sq_m2,dnst_sq_m2,sigma_total_m,sigma_total_over_q0\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("coupling-squeezing sweep CSV schema") {
    auto cfg = parse_config(cfg_path("fig4_sweep.cfg"));
    auto dir = scratch("sweep");
    auto files = emit_outputs(run_sweep(cfg), cfg, dir.string());
    std::string sweep;
    for (const auto& f : files)
        if (f.size() > 10 && f.substr(f.size() - 10) == "_sweep.csv") sweep = slurp(f);
    CHECK(sweep.rfind("g_e_over_omega_b,squeezing_db,max_sigma_over_q0\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("re-running a config reproduces its bytes") {
    auto cfg = parse_config(cfg_path("validate_mc.cfg"));
    cfg.monte_carlo.n_paths = 300;
    auto d1 = scratch("rerun1"), d2 = scratch("rerun2");
    auto f1 = emit_outputs(run_scenario(cfg, {1, "default"}), cfg, d1.string());
    auto f2 = emit_outputs(run_scenario(cfg, {3, "default"}), cfg, d2.string());
    REQUIRE(f1.size() == f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) {
        if (f1[i].find("_timing.txt") != std::string::npos) continue;
        CHECK_MESSAGE(slurp(f1[i]) == slurp(f2[i]), f1[i]);
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("config hash follows content, not layout") {
    auto a = parse_config_text("scenario.kind = gravity_analogy\ngravity.mass = 1e-14\ngravity.separation_um = 10\n"
                               "gravity.omega_a_khz = 1\ngravity.omega_b_khz = 1\n",
                               "a");
    auto b = parse_config_text("# comment\ngravity.omega_b_khz=1\ngravity.omega_a_khz = 1\n\ngravity.separation_um = 10\n"
                               "gravity.mass = 1e-14\nscenario.kind = gravity_analogy\n",
                               "b");
    CHECK(config_hash(a) == config_hash(b));
    b.monte_carlo.seed = 99;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("numbers print with 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
