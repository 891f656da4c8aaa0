#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "fluxread/config.hpp"

namespace fluxread {

struct RunSummary {
    std::string scenario;
    std::string engine;
    std::string input_hash;
    double wall_time_s = 0;
    std::vector<std::string> artifacts;
    nlohmann::json result;
};

// Runs the configured scenario. With write_artifacts the CSV/JSON files go to
// cfg.out_dir, alongside summary.json (deterministic) and timing.json.
RunSummary run_scenario(const ScenarioConfig& cfg, bool write_artifacts = true);

struct SweepRow {
    double value = 0;
    bool ok = false;
    std::string error;
    nlohmann::json result;
};

// Independent runs over one numeric config key on a bounded worker pool. Rows
// come back in input order; per-run failures are recorded, not thrown.
std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& axis,
                            const std::vector<double>& values, int workers);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& axis,
                     const std::string& path);

// Table-I style fabrication rows (A and B) as CSV text.
std::string fabrication_csv(const std::vector<std::pair<std::string, PhysicalCharacteristics>>& rows);

}  // namespace fluxread
