#include <algorithm>
#include <atomic>
#include <fmt/format.h>
#include <fstream>
#include <thread>

#include "fluxread/errors.hpp"
#include "fluxread/scenario.hpp"

namespace fluxread {

std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& axis,
                            const std::vector<double>& values, int workers) {
    if (!is_numeric_key(axis))
        throw ValidationError(fmt::format("sweep axis '{}' is not a numeric config key", axis));
    std::vector<SweepRow> rows(values.size());
    if (values.empty()) return rows;
    const int pool = std::clamp(workers, 1, static_cast<int>(values.size()));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next++; i < values.size(); i = next++) {
            auto& row = rows[i];
            row.value = values[i];
            try {
                auto cfg = base;
                apply_override(cfg, fmt::format("{}={}", axis, values[i]));
                row.result = run_scenario(cfg, false).result;
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    std::vector<std::jthread> threads;
    for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
    return rows;
}

namespace {

std::string field(const nlohmann::json& r, const char* key) {
    if (!r.contains(key) || r[key].is_null()) return "";
    const auto& v = r[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long>());
    if (v.is_number()) return fmt::format("{:.10g}", v.get<double>());
    return v.dump();
}

std::string quoted(std::string s) {
    for (auto& c : s)
        if (c == '"' || c == '\n') c = '\'';
    return "\"" + s + "\"";
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& axis,
                     const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError(fmt::format("cannot write '{}'", path));
    f << axis
      << ",status,channel,bounce_count,max_phi_b_over_pi,energy_retention,"
         "measurement_time_periods,final_infidelity,error\n";
    for (const auto& row : rows) {
        const auto& r = row.result;
        std::string infid;
        if (r.contains("backaction")) infid = field(r["backaction"], "final_infidelity");
        else infid = field(r, "final_infidelity");
        f << fmt::format("{:.10g},{},{},{},{},{},{},{},{}\n", row.value, row.ok ? "ok" : "failed",
                         field(r, "channel"), field(r, "bounce_count"), field(r, "max_phi_b_over_pi"),
                         field(r, "energy_retention"), field(r, "measurement_time_periods"), infid,
                         row.ok ? "" : quoted(row.error));
    }
}

}  // namespace fluxread
