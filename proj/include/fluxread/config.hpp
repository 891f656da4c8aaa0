#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fluxread/params.hpp"

namespace fluxread {

enum class Engine { Lattice, CC, MQC, Adiabatic };

std::string to_string(Engine e);

struct ScenarioConfig {
    std::string scenario = "caseA-n0";
    CircuitParams params = preset_case_a();
    Engine engine = Engine::Lattice;
    int qubit_state = 0;
    double phi_q_offset = 0;  // radians, added to <phi_q>_n
    double v = 0.6;
    double x0 = -10.0;
    double t_end = 70.0;
    std::optional<double> dt;  // engine default when empty
    double sample_every = 0.1;
    double snapshot_every = 0;
    bool shifted_flux_term = false;
    bool backaction = true;
    int tracked_levels = 8;
    int grid_points = 1024;
    std::optional<double> jc;       // uA / um^2, enables physical units
    std::optional<double> cj_area;  // fF / um^2
    FabCase fab_case = FabCase::A;
    double xi_over_a = 30.0;  // wave-packet width for the coherence checks
    double l_over_a = 50.0;   // LJJ length entering the time-delay bound
    std::string out_dir = "out";
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);

// Defaults for a named preset. Throws ValidationError for unknown names.
ScenarioConfig preset_config(const std::string& name);

// Flat key = value text, '#' comments. Unknown keys and malformed values throw
// ValidationError. Later assignments win.
void apply_config_text(ScenarioConfig& cfg, const std::string& text);
void apply_config_file(ScenarioConfig& cfg, const std::string& path);
void apply_override(ScenarioConfig& cfg, const std::string& key_eq_value);

std::vector<std::string> config_keys();
bool is_numeric_key(const std::string& key);

// Canonical sorted key = value listing of every setting except out_dir.
std::string canonical_text(const ScenarioConfig& cfg);
// SHA-256 of the canonical text, hex encoded.
std::string input_hash(const ScenarioConfig& cfg);

}  // namespace fluxread
