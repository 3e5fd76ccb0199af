#include "qnoise/cli_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace qnoise {

namespace {

enum class Suffix { None, KHz, PHz, Um, Fg, E };

struct KeySpec {
    std::vector<Suffix> suffixes;
    bool text = false;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> t = {
        {"scenario.kind", {{}, true}},
        {"scenario.name", {{}, true}},
        {"constants.hbar", {}},
        {"constants.G", {}},
        {"oscillator.mass", {{Suffix::Fg}}},
        {"oscillator.frequency", {{Suffix::KHz, Suffix::PHz}}},
        {"oscillator.damping", {}},
        {"oscillator.temperature", {}},
        {"cavity.length", {{Suffix::Um}}},
        {"cavity.omega_c", {{Suffix::PHz, Suffix::KHz}}},
        {"cavity.gamma", {{Suffix::KHz, Suffix::PHz}}},
        {"cavity.tweezer_field", {}},
        {"cavity.tweezer_power", {}},
        {"cavity.waist_x", {{Suffix::Um}}},
        {"cavity.waist_y", {{Suffix::Um}}},
        {"cavity.polarizability", {}},
        {"cavity.particle_volume", {}},
        {"cavity.particle_density", {}},
        {"cavity.permittivity", {}},
        {"coulomb.charge", {{Suffix::E}}},
        {"coulomb.charge_a", {{Suffix::E}}},
        {"coulomb.charge_b", {{Suffix::E}}},
        {"coulomb.separation", {{Suffix::Um}}},
        {"coulomb.mass", {{Suffix::Fg}}},
        {"coulomb.mass_a", {{Suffix::Fg}}},
        {"coulomb.mass_b", {{Suffix::Fg}}},
        {"coulomb.particle_radius", {{Suffix::Um}}},
        {"coulomb.particle_density", {}},
        {"coulomb.omega_a", {{Suffix::KHz}}},
        {"coulomb.omega_b", {{Suffix::KHz}}},
        {"coulomb.target_ge_over_omega_b", {}},
        {"semiclassical.nbar", {}},
        {"gravity.mass", {{Suffix::Fg}}},
        {"gravity.separation", {{Suffix::Um}}},
        {"gravity.omega_a", {{Suffix::KHz}}},
        {"gravity.omega_b", {{Suffix::KHz}}},
        {"state.kind", {{}, true}},
        {"state.r", {}},
        {"state.squeezing_db", {}},
        {"state.phi", {}},
        {"state.alpha", {}},
        {"state.theta", {}},
        {"state.beta_hw", {}},
        {"state.nbar", {}},
        {"state.kt_over_hw", {}},
        {"grid.points", {}},
        {"grid.horizon", {}},
        {"mc.enabled", {{}, true}},
        {"mc.paths", {}},
        {"mc.seed", {{}, true}},
        {"mc.points", {}},
        {"mc.periods", {}},
        {"sweep.axis1", {{}, true}},
        {"sweep.axis1_values", {{}, true}},
        {"sweep.axis2", {{}, true}},
        {"sweep.axis2_values", {{}, true}},
    };
    return t;
}

const char* suffix_text(Suffix s) {
    switch (s) {
        case Suffix::KHz: return "_khz";
        case Suffix::PHz: return "_phz";
        case Suffix::Um: return "_um";
        case Suffix::Fg: return "_fg";
        case Suffix::E: return "_e";
        case Suffix::None: return "";
    }
    return "";
}

double suffix_factor(Suffix s, double e_charge) {
    switch (s) {
        case Suffix::KHz: return 2.0 * 3.14159265358979323846 * 1e3;
        case Suffix::PHz: return 1e15;
        case Suffix::Um: return 1e-6;
        case Suffix::Fg: return 1e-18;
        case Suffix::E: return e_charge;
        case Suffix::None: return 1.0;
    }
    return 1.0;
}

struct Entry {
    std::string raw;
    Suffix suffix = Suffix::None;
    int line = 0, column = 0;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    Reader(std::map<std::string, Entry> e, std::string origin) : entries_(std::move(e)), origin_(std::move(origin)) {}

    bool has(const std::string& k) const { return entries_.count(k) != 0; }

    double num(const std::string& k, double e_charge) const {
        const Entry& en = entries_.at(k);
        double v = 0.0;
        const char* b = en.raw.data();
        const char* end = b + en.raw.size();
        auto res = std::from_chars(b, end, v);
        if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
            throw ParseError(origin_ + ": '" + en.raw + "' is not a number for " + k, en.line, en.column);
        return v * suffix_factor(en.suffix, e_charge);
    }

    double num_or(const std::string& k, double def, double e_charge) const { return has(k) ? num(k, e_charge) : def; }

    const std::string& text(const std::string& k) const { return entries_.at(k).raw; }

    std::uint64_t u64(const std::string& k) const {
        const Entry& en = entries_.at(k);
        std::uint64_t v = 0;
        auto res = std::from_chars(en.raw.data(), en.raw.data() + en.raw.size(), v);
        if (res.ec != std::errc() || res.ptr != en.raw.data() + en.raw.size())
            throw ParseError(origin_ + ": '" + en.raw + "' is not an unsigned integer for " + k, en.line, en.column);
        return v;
    }

    std::size_t count(const std::string& k) const { return static_cast<std::size_t>(u64(k)); }

    bool flag(const std::string& k) const {
        const Entry& en = entries_.at(k);
        if (en.raw == "true" || en.raw == "1" || en.raw == "yes") return true;
        if (en.raw == "false" || en.raw == "0" || en.raw == "no") return false;
        throw ParseError(origin_ + ": '" + en.raw + "' is not a boolean for " + k, en.line, en.column);
    }

    std::vector<double> list(const std::string& k) const {
        const Entry& en = entries_.at(k);
        auto bad = [&] { return ParseError(origin_ + ": bad value list for " + k, en.line, en.column); };
        auto parse1 = [&](const std::string& s) {
            double v;
            std::string t = trim(s);
            auto res = std::from_chars(t.data(), t.data() + t.size(), v);
            if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw bad();
            return v;
        };
        std::vector<double> out;
        if (en.raw.find(':') != std::string::npos) {
            // start:stop:count, inclusive
            std::vector<std::string> parts;
            std::stringstream ss(en.raw);
            for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
            if (parts.size() != 3) throw bad();
            double a = parse1(parts[0]), b = parse1(parts[1]), c = parse1(parts[2]);
            if (c < 1 || c != std::floor(c)) throw bad();
            auto n = static_cast<std::size_t>(c);
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
            return out;
        }
        std::stringstream ss(en.raw);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(parse1(p));
        if (out.empty()) throw bad();
        return out;
    }

private:
    std::map<std::string, Entry> entries_;
    std::string origin_;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

ScenarioKind kind_from(const std::string& s) {
    if (s == "cavity_particle") return ScenarioKind::CavityParticle;
    if (s == "light_probe") return ScenarioKind::LightProbe;
    if (s == "particle_particle") return ScenarioKind::ParticleParticle;
    if (s == "gravity_analogy") return ScenarioKind::GravityAnalogy;
    throw ValidationError("scenario.kind '" + s +
                          "' must be one of cavity_particle, light_probe, particle_particle, gravity_analogy");
}

QuantumState state_from(const Reader& r, double e) {
    std::string kind = r.has("state.kind") ? r.text("state.kind") : "vacuum";
    require(!(r.has("state.r") && r.has("state.squeezing_db")), "give either state.r or state.squeezing_db");
    double sq = r.has("state.squeezing_db") ? squeezing_r_from_db(r.num("state.squeezing_db", e))
                                            : r.num_or("state.r", 0.0, e);
    double phi = r.num_or("state.phi", 0.0, e);
    QuantumState s;
    if (kind == "vacuum") {
        require(sq == 0.0 && !r.has("state.alpha"), "vacuum state takes no squeezing or displacement");
        s = Vacuum{};
    } else if (kind == "squeezed_coherent") {
        s = SqueezedCoherent{sq, phi, r.num_or("state.alpha", 0.0, e), r.num_or("state.theta", 0.0, e)};
    } else if (kind == "squeezed_thermal") {
        int given = r.has("state.beta_hw") + r.has("state.nbar") + r.has("state.kt_over_hw");
        require(given == 1, "squeezed_thermal needs exactly one of state.beta_hw, state.nbar, state.kt_over_hw");
        double beta = 0.0;
        if (r.has("state.beta_hw")) beta = r.num("state.beta_hw", e);
        if (r.has("state.nbar")) beta = beta_hw_from_occupation(r.num("state.nbar", e));
        if (r.has("state.kt_over_hw")) {
            double x = r.num("state.kt_over_hw", e);
            require(x > 0.0, "state.kt_over_hw must be > 0");
            beta = 1.0 / x;
        }
        s = SqueezedThermal{sq, phi, beta};
    } else {
        throw ValidationError("state.kind '" + kind + "' must be vacuum, squeezed_coherent or squeezed_thermal");
    }
    validate_state(s);
    return s;
}

std::string canonical_text(const std::map<std::string, Entry>& entries) {
    std::ostringstream os;
    for (const auto& [k, en] : entries) os << k << suffix_text(en.suffix) << '=' << en.raw << '\n';
    return os.str();
}

}  // namespace

std::vector<std::string> known_config_keys() {
    std::vector<std::string> out;
    for (const auto& [k, spec] : key_table()) {
        out.push_back(k);
        for (auto s : spec.suffixes) out.push_back(k + suffix_text(s));
    }
    return out;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        std::string body = hash == std::string::npos ? line : line.substr(0, hash);
        if (trim(body).empty()) continue;
        auto eq = body.find('=');
        int key_col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
        if (eq == std::string::npos) throw ParseError(origin + ": expected key = value", lineno, key_col);
        std::string key = trim(body.substr(0, eq));
        std::string val = trim(body.substr(eq + 1));
        int val_col = static_cast<int>(eq) + 2;
        auto vpos = body.find_first_not_of(" \t", eq + 1);
        if (vpos != std::string::npos) val_col = static_cast<int>(vpos) + 1;
        if (key.empty()) throw ParseError(origin + ": missing key", lineno, key_col);
        if (val.empty()) throw ParseError(origin + ": missing value for " + key, lineno, val_col);

        std::string base = key;
        Suffix suf = Suffix::None;
        if (!key_table().count(key)) {
            bool found = false;
            for (Suffix s : {Suffix::KHz, Suffix::PHz, Suffix::Um, Suffix::Fg, Suffix::E}) {
                std::string st = suffix_text(s);
                if (key.size() > st.size() && key.compare(key.size() - st.size(), st.size(), st) == 0) {
                    std::string b = key.substr(0, key.size() - st.size());
                    auto it = key_table().find(b);
                    if (it != key_table().end() &&
                        std::find(it->second.suffixes.begin(), it->second.suffixes.end(), s) !=
                            it->second.suffixes.end()) {
                        base = b;
                        suf = s;
                        found = true;
                        break;
                    }
                }
            }
            if (!found) throw ParseError(origin + ": unknown key '" + key + "'", lineno, key_col);
        }
        if (entries.count(base)) throw ParseError(origin + ": duplicate key '" + base + "'", lineno, key_col);
        entries[base] = Entry{val, suf, lineno, val_col};
    }

    ScenarioConfig cfg;
    cfg.canonical = canonical_text(entries);
    Reader r(entries, origin);
    auto& k = cfg.constants;
    if (r.has("constants.hbar")) k.hbar = Action(r.num("constants.hbar", 0.0));
    if (r.has("constants.G")) k.G = GravityConstant(r.num("constants.G", 0.0));
    const double e = k.e_charge.value();

    require(r.has("scenario.kind"), "scenario.kind is required");
    cfg.kind = kind_from(r.text("scenario.kind"));
    if (r.has("scenario.name")) cfg.name = r.text("scenario.name");
    for (char c : cfg.name)
        require(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-',
                "scenario.name may contain only letters, digits, '_' and '-'");
    cfg.state = state_from(r, e);

    auto& o = cfg.oscillator;
    o.mass = Mass(r.num_or("oscillator.mass", 0.0, e));
    o.bare_frequency = Rate(r.num_or("oscillator.frequency", 0.0, e));
    o.damping_rate = Rate(r.num_or("oscillator.damping", 0.0, e));
    o.bath_temperature = Temperature(r.num_or("oscillator.temperature", 0.0, e));

    if (cfg.kind == ScenarioKind::CavityParticle || cfg.kind == ScenarioKind::LightProbe) {
        auto& c = cfg.cavity;
        c.length = Length(r.num_or("cavity.length", 0.0, e));
        c.central_frequency = Rate(r.num_or("cavity.omega_c", 0.0, e));
        c.linewidth = Rate(r.num_or("cavity.gamma", 0.0, e));
        if (r.has("cavity.tweezer_field")) {
            require(!r.has("cavity.tweezer_power"), "give either cavity.tweezer_field or cavity.tweezer_power");
            c.tweezer_field = EField(r.num("cavity.tweezer_field", e));
        } else {
            require(r.has("cavity.tweezer_power") && r.has("cavity.waist_x") && r.has("cavity.waist_y"),
                    "cavity needs tweezer_field or tweezer_power with waist_x and waist_y");
            double P = r.num("cavity.tweezer_power", e);
            double wx = r.num("cavity.waist_x", e), wy = r.num("cavity.waist_y", e);
            require(P >= 0.0 && wx > 0.0 && wy > 0.0, "tweezer power >= 0 and waists > 0 required");
            // peak field of a Gaussian focus, P = (pi wx wy / 4) eps0 c E0^2
            c.tweezer_field = EField(std::sqrt(4.0 * P / (kPi * wx * wy * k.eps0.value() * k.c.value())));
        }
        if (r.has("cavity.polarizability")) {
            c.polarizability = Polarizability(r.num("cavity.polarizability", e));
        } else {
            double eps_r = r.num_or("cavity.permittivity", 2.07, e);
            double V = 0.0;
            if (r.has("cavity.particle_volume")) {
                V = r.num("cavity.particle_volume", e);
            } else {
                require(r.has("cavity.particle_density"),
                        "cavity needs polarizability, particle_volume or particle_density");
                double rho = r.num("cavity.particle_density", e);
                require(rho > 0.0, "cavity.particle_density must be > 0");
                V = o.mass.value() / rho;
            }
            c.polarizability = polarizability_from_volume(k, Volume(V), eps_r);
        }
        try {
            (void)derive_cavity(k, o, c);
        } catch (const RangeError& ex) {
            throw ValidationError(std::string("invalid cavity parameters: ") + ex.what());
        } catch (const DimensionError& ex) {
            throw ValidationError(std::string("invalid cavity parameters: ") + ex.what());
        }
        if (cfg.kind == ScenarioKind::CavityParticle && std::holds_alternative<SqueezedThermal>(cfg.state))
            require(std::get<SqueezedThermal>(cfg.state).beta_hw < 0.1,
                    "cavity squeezed_thermal requires beta hbar omega_c < 0.1 (high temperature)");
    }

    if (cfg.kind == ScenarioKind::ParticleParticle) {
        auto& p = cfg.coulomb;
        auto charge = [&](const char* one) {
            if (r.has(one)) return r.num(one, e);
            require(r.has("coulomb.charge") || r.has("coulomb.target_ge_over_omega_b"),
                    std::string(one) + " (or coulomb.charge / coulomb.target_ge_over_omega_b) is required");
            return r.num_or("coulomb.charge", 0.0, e);
        };
        p.charge_a = Charge(charge("coulomb.charge_a"));
        p.charge_b = Charge(charge("coulomb.charge_b"));
        p.separation = Length(r.num_or("coulomb.separation", 0.0, e));
        double m = 0.0;
        if (r.has("coulomb.mass")) {
            m = r.num("coulomb.mass", e);
        } else if (r.has("coulomb.particle_radius")) {
            double rad = r.num("coulomb.particle_radius", e);
            double rho = r.num_or("coulomb.particle_density", 2200.0, e);
            m = 4.0 / 3.0 * kPi * rad * rad * rad * rho;
        }
        p.mass_a = Mass(r.num_or("coulomb.mass_a", m, e));
        p.mass_b = Mass(r.num_or("coulomb.mass_b", m, e));
        p.bare_freq_a = Rate(r.num_or("coulomb.omega_a", 0.0, e));
        p.bare_freq_b = Rate(r.num_or("coulomb.omega_b", 0.0, e));
        if (r.has("coulomb.target_ge_over_omega_b")) cfg.target_ge_over_omega_b = r.num("coulomb.target_ge_over_omega_b", e);
        cfg.nbar_b = r.num_or("semiclassical.nbar", 0.0, e);
        require(cfg.nbar_b >= 0.0, "semiclassical.nbar must be >= 0");
        try {
            (void)derive_coulomb(k, resolved_coulomb(cfg));
        } catch (const ImaginaryFrequency& ex) {
            throw ValidationError(std::string("invalid Coulomb parameters: ") + ex.what());
        } catch (const RangeError& ex) {
            throw ValidationError(std::string("invalid Coulomb parameters: ") + ex.what());
        }
    }

    if (cfg.kind == ScenarioKind::GravityAnalogy) {
        auto& g = cfg.gravity;
        g.mass = Mass(r.num_or("gravity.mass", 0.0, e));
        g.separation = Length(r.num_or("gravity.separation", 0.0, e));
        g.bare_freq_a = Rate(r.num_or("gravity.omega_a", 0.0, e));
        g.bare_freq_b = Rate(r.num_or("gravity.omega_b", 0.0, e));
        g.squeezing_r = squeezing_r(cfg.state);
        g.validate();
    }

    if (r.has("grid.points")) {
        cfg.grid_points = r.count("grid.points");
        require(cfg.grid_points >= 2, "grid.points must be >= 2");
    }
    if (r.has("grid.horizon")) {
        cfg.grid_horizon = r.num("grid.horizon", e);
        require(cfg.grid_horizon > 0.0, "grid.horizon must be > 0");
    }

    auto& mc = cfg.monte_carlo;
    if (r.has("mc.enabled")) mc.enabled = r.flag("mc.enabled");
    if (r.has("mc.paths")) mc.n_paths = r.count("mc.paths");
    if (r.has("mc.seed")) mc.seed = r.u64("mc.seed");
    if (r.has("mc.points")) mc.points = r.count("mc.points");
    if (r.has("mc.periods")) mc.periods = r.num("mc.periods", e);
    require(mc.n_paths >= 1, "mc.paths must be >= 1");
    require(mc.points >= 2, "mc.points must be >= 2");
    require(mc.periods > 0.0, "mc.periods must be > 0");

    bool any_sweep = r.has("sweep.axis1") || r.has("sweep.axis2") || r.has("sweep.axis1_values") ||
                     r.has("sweep.axis2_values");
    if (any_sweep) {
        require(r.has("sweep.axis1") && r.has("sweep.axis2") && r.has("sweep.axis1_values") &&
                    r.has("sweep.axis2_values"),
                "a sweep needs axis1, axis2, axis1_values and axis2_values");
        SweepSpec sw;
        sw.axis1 = {r.text("sweep.axis1"), r.list("sweep.axis1_values")};
        sw.axis2 = {r.text("sweep.axis2"), r.list("sweep.axis2_values")};
        static const std::set<std::string> axes = {"coulomb.charge_e", "coulomb.target_ge_over_omega_b",
                                                   "state.squeezing_db", "semiclassical.nbar", "state.phi"};
        for (const auto* ax : {&sw.axis1, &sw.axis2}) {
            require(axes.count(ax->name) != 0, "sweep axis '" + ax->name + "' is not a sweepable config field");
            for (double v : ax->values)
                require(ax->name == "state.phi" || v >= 0.0, "sweep values for " + ax->name + " must be >= 0");
        }
        cfg.sweep = sw;
    }
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    std::string text = cfg.canonical + "effective_seed=" + std::to_string(cfg.monte_carlo.seed) + "\n";
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    return os;
}

void close_out(std::ofstream& os, const std::filesystem::path& p) {
    os.flush();
    if (!os) throw IoError("write failed for " + p.string());
}

}  // namespace

std::vector<std::string> emit_outputs(RunSummary summary, const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir);
    std::string hash = config_hash(cfg);
    summary.manifest.config_hash = hash;
    std::string stem = cfg.name + "_" + hash.substr(0, 12);
    std::vector<std::string> written;

    for (const auto& nt : summary.traces) {
        fs::path p = fs::path(out_dir) / (stem + (nt.label == "main" ? "" : "_" + nt.label) + "_trace.csv");
        auto os = open_out(p);
        const auto& tr = nt.trace;
        double q0 = tr.q0 > 0.0 ? tr.q0 : 1.0;
        os << "t_s,sigma0_sq_m2,dst_sq_m2,dnst_sq_m2,sigma_total_m,sigma_total_over_q0\n";
        for (std::size_t i = 0; i < tr.grid.n_steps; ++i)
            os << format_number(tr.grid.time(i)) << ',' << format_number(tr.sigma0_sq[i]) << ','
               << format_number(tr.delta_sigma_st_sq[i]) << ',' << format_number(tr.delta_sigma_nst_sq[i]) << ','
               << format_number(tr.total_sigma[i]) << ',' << format_number(tr.total_sigma[i] / q0) << '\n';
        close_out(os, p);
        written.push_back(p.string());
    }
    if (summary.sweep) {
        fs::path p = fs::path(out_dir) / (stem + "_sweep.csv");
        auto os = open_out(p);
        const auto& sw = *summary.sweep;
        for (std::size_t i = 0; i < sw.header.size(); ++i) os << (i ? "," : "") << sw.header[i];
        os << '\n';
        for (const auto& row : sw.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
            os << '\n';
        }
        close_out(os, p);
        written.push_back(p.string());
    }
    if (summary.monte_carlo) {
        fs::path p = fs::path(out_dir) / (stem + "_mc.csv");
        auto os = open_out(p);
        const auto& mc = *summary.monte_carlo;
        os << "t_s,ensemble_var_m2,analytic_var_m2,z\n";
        for (std::size_t i = 0; i < mc.t.size(); ++i)
            os << format_number(mc.t[i]) << ',' << format_number(mc.ensemble_var[i]) << ','
               << format_number(mc.analytic_var[i]) << ',' << format_number(mc.z[i]) << '\n';
        close_out(os, p);
        written.push_back(p.string());
    }

    fs::path p = fs::path(out_dir) / (stem + "_manifest.txt");
    auto os = open_out(p);
    const auto& m = summary.manifest;
    os << "[run]\nname=" << cfg.name << "\nkind=" << to_string(summary.kind) << "\nconfig_hash=" << hash
       << "\nseed=" << m.seed << "\nversion=" << m.version << "\ntolerance_profile=" << m.tolerance_profile << "\n";
    os << "\n[tolerances]\n";
    for (const auto& [k, v] : m.tolerances) os << k << '=' << format_number(v) << '\n';
    os << "\n[jitter]\n";
    for (std::size_t i = 0; i < m.jitters.size(); ++i) os << "factor" << i << '=' << format_number(m.jitters[i]) << '\n';
    os << "\n[counts]\n";
    for (const auto& [k, v] : m.counts) os << k << '=' << format_number(v) << '\n';
    if (summary.monte_carlo) {
        const auto& mc = *summary.monte_carlo;
        os << "\n[monte_carlo]\npaths=" << mc.n_paths << "\nmax_abs_z=" << format_number(mc.max_abs_z)
           << "\nfrac_over_4=" << format_number(mc.frac_over_4) << '\n';
    }
    os << "\n[scalars]\n# name,value,units,source\n";
    for (const auto& s : summary.scalars)
        os << s.name << ',' << format_number(s.value) << ',' << s.units << ',' << s.source << '\n';
    os << "\n[warnings]\n";
    for (const auto& w : m.warnings) os << w << '\n';
    os << "\n[config]\n" << cfg.canonical;
    close_out(os, p);
    written.push_back(p.string());

    // Wall-clock time is the one run-dependent quantity, so it lives beside the
    // manifest rather than inside it.
    fs::path tp = fs::path(out_dir) / (stem + "_timing.txt");
    auto ts = open_out(tp);
    ts << "[timing]\nwall_seconds=" << format_number(m.wall_seconds) << '\n';
    close_out(ts, tp);
    written.push_back(tp.string());
    return written;
}

}  // namespace qnoise
