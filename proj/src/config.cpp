#include "fluxread/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <boost/program_options.hpp>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "fluxread/errors.hpp"

namespace po = boost::program_options;

namespace fluxread {

std::string to_string(Engine e) {
    switch (e) {
        case Engine::Lattice: return "lattice";
        case Engine::CC: return "cc";
        case Engine::MQC: return "mqc";
        case Engine::Adiabatic: return "adiabatic";
    }
    return "lattice";
}

namespace {

double parse_double(const std::string& key, const std::string& s) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(fmt::format("{}: '{}' is not a finite number", key, s));
    }
}

int parse_int(const std::string& key, const std::string& s) {
    try {
        size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ValidationError(fmt::format("{}: '{}' is not an integer", key, s));
    }
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ValidationError(fmt::format("{}: '{}' is not a boolean", key, s));
}

std::string num(double v) { return fmt::format("{}", v); }

std::optional<double> parse_optional(const std::string& key, const std::string& s, const char* unset) {
    if (s == unset) return std::nullopt;
    return parse_double(key, s);
}

struct KeySpec {
    bool numeric;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

using Table = std::map<std::string, KeySpec>;

template <typename Field>
KeySpec real(Field field, double scale = 1.0) {
    return {true,
            [field, scale](ScenarioConfig& c, const std::string& s) {
                field(c) = parse_double("value", s) * scale;
            },
            [field, scale](const ScenarioConfig& c) {
                return num(field(const_cast<ScenarioConfig&>(c)) / scale);
            }};
}

const Table& table() {
    static const Table t = [] {
        Table k;
        k["discreteness"] = real([](ScenarioConfig& c) -> double& { return c.params.discreteness; });
        k["beta2"] = real([](ScenarioConfig& c) -> double& { return c.params.beta2; });
        k["ic_term_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.ic_term; });
        k["cj_term_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.cj_term; });
        k["ic_rail_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.ic_rail; });
        k["cj_rail_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.cj_rail; });
        k["ic_q_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.ic_q; });
        k["cj_q_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.cj_q; });
        k["lq_ratio"] = real([](ScenarioConfig& c) -> double& { return c.params.lq; });
        k["phi_ext_over_pi"] = real([](ScenarioConfig& c) -> double& { return c.params.phi_ext; }, pi);
        k["phi_q_offset_over_pi"] = real([](ScenarioConfig& c) -> double& { return c.phi_q_offset; }, pi);
        k["v_over_c"] = real([](ScenarioConfig& c) -> double& { return c.v; });
        k["x0"] = real([](ScenarioConfig& c) -> double& { return c.x0; });
        k["t_end"] = real([](ScenarioConfig& c) -> double& { return c.t_end; });
        k["xi_over_a"] = real([](ScenarioConfig& c) -> double& { return c.xi_over_a; });
        k["l_over_a"] = real([](ScenarioConfig& c) -> double& { return c.l_over_a; });
        k["sample_every"] = real([](ScenarioConfig& c) -> double& { return c.sample_every; });
        k["snapshot_every"] = real([](ScenarioConfig& c) -> double& { return c.snapshot_every; });
        k["sigma"] = {true,
                      [](ScenarioConfig& c, const std::string& s) { c.params.sigma = parse_int("sigma", s); },
                      [](const ScenarioConfig& c) { return std::to_string(c.params.sigma); }};
        k["n_cells"] = {true,
                        [](ScenarioConfig& c, const std::string& s) { c.params.n_cells = parse_int("n_cells", s); },
                        [](const ScenarioConfig& c) { return std::to_string(c.params.n_cells); }};
        k["qubit_state"] = {true,
                            [](ScenarioConfig& c, const std::string& s) {
                                c.qubit_state = parse_int("qubit_state", s);
                                if (c.qubit_state < 0) throw ValidationError("qubit_state must be >= 0");
                            },
                            [](const ScenarioConfig& c) { return std::to_string(c.qubit_state); }};
        k["tracked_levels"] = {true,
                               [](ScenarioConfig& c, const std::string& s) {
                                   c.tracked_levels = parse_int("tracked_levels", s);
                               },
                               [](const ScenarioConfig& c) { return std::to_string(c.tracked_levels); }};
        k["grid_points"] = {true,
                            [](ScenarioConfig& c, const std::string& s) {
                                c.grid_points = parse_int("grid_points", s);
                                if (c.grid_points < 128) throw ValidationError("grid_points must be >= 128");
                            },
                            [](const ScenarioConfig& c) { return std::to_string(c.grid_points); }};
        k["dt"] = {true,
                   [](ScenarioConfig& c, const std::string& s) { c.dt = parse_optional("dt", s, "default"); },
                   [](const ScenarioConfig& c) { return c.dt ? num(*c.dt) : std::string("default"); }};
        k["jc"] = {true,
                   [](ScenarioConfig& c, const std::string& s) { c.jc = parse_optional("jc", s, "none"); },
                   [](const ScenarioConfig& c) { return c.jc ? num(*c.jc) : std::string("none"); }};
        k["cj_area"] = {true,
                        [](ScenarioConfig& c, const std::string& s) { c.cj_area = parse_optional("cj_area", s, "none"); },
                        [](const ScenarioConfig& c) { return c.cj_area ? num(*c.cj_area) : std::string("none"); }};
        k["engine"] = {false,
                       [](ScenarioConfig& c, const std::string& s) {
                           if (s == "lattice") c.engine = Engine::Lattice;
                           else if (s == "cc") c.engine = Engine::CC;
                           else if (s == "mqc") c.engine = Engine::MQC;
                           else if (s == "adiabatic") c.engine = Engine::Adiabatic;
                           else throw ValidationError(fmt::format("engine: unknown engine '{}'", s));
                       },
                       [](const ScenarioConfig& c) { return to_string(c.engine); }};
        k["flux_term"] = {false,
                          [](ScenarioConfig& c, const std::string& s) {
                              if (s == "circuit") c.shifted_flux_term = false;
                              else if (s == "shifted") c.shifted_flux_term = true;
                              else throw ValidationError("flux_term must be 'circuit' or 'shifted'");
                          },
                          [](const ScenarioConfig& c) {
                              return std::string(c.shifted_flux_term ? "shifted" : "circuit");
                          }};
        k["backaction"] = {false,
                           [](ScenarioConfig& c, const std::string& s) { c.backaction = parse_bool("backaction", s); },
                           [](const ScenarioConfig& c) { return std::string(c.backaction ? "true" : "false"); }};
        k["fab_case"] = {false,
                         [](ScenarioConfig& c, const std::string& s) {
                             if (s == "A") c.fab_case = FabCase::A;
                             else if (s == "B") c.fab_case = FabCase::B;
                             else throw ValidationError("fab_case must be A or B");
                         },
                         [](const ScenarioConfig& c) { return std::string(c.fab_case == FabCase::A ? "A" : "B"); }};
        k["scenario"] = {false,
                         [](ScenarioConfig&, const std::string&) {
                             throw ValidationError("the scenario is chosen on the command line");
                         },
                         [](const ScenarioConfig& c) { return c.scenario; }};
        k["out_dir"] = {false, [](ScenarioConfig& c, const std::string& s) { c.out_dir = s; },
                        [](const ScenarioConfig& c) { return c.out_dir; }};
        return k;
    }();
    return t;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "caseA-n0",          "caseA-n1",           "caseA-cc",           "caseB-n0",
        "caseB-n1",          "spectrum-caseA",     "boundstate-caseA",   "fabrication-tableI",
        "coherence-check",   "halfflux-failure"};
    return names;
}

bool is_preset(const std::string& name) {
    const auto& n = preset_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

ScenarioConfig preset_config(const std::string& name) {
    if (!is_preset(name))
        throw ValidationError(fmt::format("unknown scenario '{}' (known: {})", name,
                                          fmt::join(preset_names(), ", ")));
    ScenarioConfig c;
    c.scenario = name;
    if (name == "caseA-n1") c.qubit_state = 1;
    if (name == "caseA-cc") c.engine = Engine::CC;
    if (name == "caseB-n0" || name == "caseB-n1") {
        c.params = preset_case_b();
        c.qubit_state = name == "caseB-n1" ? 1 : 0;
    }
    if (name == "fabrication-tableI") c.params = preset_table_a();
    if (name == "halfflux-failure") {
        c.params.phi_ext = 0.8 * pi;
        c.qubit_state = 1;
        c.engine = Engine::MQC;
        c.tracked_levels = 24;
    }
    return c;
}

void apply_config_text(ScenarioConfig& cfg, const std::string& text) {
    po::options_description desc;
    for (const auto& [key, spec] : table()) desc.add_options()(key.c_str(), po::value<std::string>());
    std::istringstream in(text);
    po::parsed_options parsed(&desc);
    try {
        parsed = po::parse_config_file(in, desc, false);
    } catch (const po::error& e) {
        throw ValidationError(fmt::format("config: {}", e.what()));
    }
    for (const auto& opt : parsed.options) {
        if (opt.value.empty()) throw ValidationError(fmt::format("config: '{}' has no value", opt.string_key));
        const auto& spec = table().at(opt.string_key);
        try {
            spec.set(cfg, opt.value.front());
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}: {}", opt.string_key, e.what()));
        }
    }
    validate(cfg.params);
}

void apply_config_file(ScenarioConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError(fmt::format("cannot read config file '{}'", path));
    std::stringstream ss;
    ss << f.rdbuf();
    apply_config_text(cfg, ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError(fmt::format("--set expects key=value (got '{}')", key_eq_value));
    apply_config_text(cfg, key_eq_value + "\n");
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, spec] : table()) keys.push_back(k);
    return keys;
}

bool is_numeric_key(const std::string& key) {
    const auto it = table().find(key);
    return it != table().end() && it->second.numeric;
}

std::string canonical_text(const ScenarioConfig& cfg) {
    std::string out;
    for (const auto& [k, spec] : table()) {
        if (k == "out_dir") continue;
        out += k + " = " + spec.get(cfg) + "\n";
    }
    return out;
}

std::string input_hash(const ScenarioConfig& cfg) {
    const std::string text = canonical_text(cfg);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("SHA-256 digest failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

}  // namespace fluxread
