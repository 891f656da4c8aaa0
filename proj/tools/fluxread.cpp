#include <CLI11.hpp>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <thread>

#include "fluxread/errors.hpp"
#include "fluxread/quantum1d.hpp"
#include "fluxread/scenario.hpp"

using namespace fluxread;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_file;
    std::vector<std::string> sets;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_file, "flat key = value configuration file");
    cmd->add_option("--set", o.sets, "override a config key (key=value), repeatable");
    cmd->add_option("--out", o.out_dir, "output directory");
}

ScenarioConfig build_config(const std::string& name, const CommonOpts& o) {
    auto cfg = preset_config(name);
    if (!o.config_file.empty()) apply_config_file(cfg, o.config_file);
    for (const auto& s : o.sets) apply_override(cfg, s);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    return cfg;
}

std::vector<double> parse_values(const std::vector<std::string>& raw) {
    std::vector<double> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            try {
                size_t used = 0;
                out.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ValidationError(fmt::format("sweep value '{}' is not a number", tok));
            }
        }
    }
    return out;
}

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw ValidationError(fmt::format("cannot write into '{}'", dir));
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fluxon readout simulations of a fluxonium at a two-LJJ interface"};
    app.require_subcommand(1);

    CommonOpts scen_opts;
    std::string scen_name = "caseA-n0";
    auto* scen = app.add_subcommand("scenario", "run a preset scenario");
    scen->add_option("name", scen_name, "preset name")->check(CLI::IsMember(preset_names()));
    add_common(scen, scen_opts);

    CommonOpts sweep_opts;
    std::string sweep_name = "caseA-n0", axis;
    std::vector<std::string> raw_values;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* sw = app.add_subcommand("sweep", "sweep one numeric config key over a list of values");
    sw->add_option("name", sweep_name, "preset name")->check(CLI::IsMember(preset_names()));
    sw->add_option("--axis", axis, "config key to vary")->required();
    sw->add_option("--values", raw_values, "comma separated values (may be empty)");
    sw->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    add_common(sw, sweep_opts);

    CommonOpts fab_opts;
    std::string fab_case = "A";
    std::optional<double> jc, cj_area, jcq;
    auto* fab = app.add_subcommand("fabricate", "physical characteristics from fabrication inputs");
    fab->add_option("--case", fab_case, "A (shunted LJJ) or B (dense qubit JJ)")
        ->check(CLI::IsMember({"A", "B"}));
    fab->add_option("--jc", jc, "critical current density, uA/um^2");
    fab->add_option("--cj-area", cj_area, "capacitance per area, fF/um^2");
    fab->add_option("--jcq-ratio", jcq, "j_c^q / j_c (case B)");
    add_common(fab, fab_opts);

    CommonOpts spec_opts;
    double bias_lo = -0.2, bias_hi = 1.8;
    int points = 201, levels = 6;
    auto* spec = app.add_subcommand("spectrum", "fluxonium levels versus interface phase");
    spec->add_option("--bias-min-over-pi", bias_lo);
    spec->add_option("--bias-max-over-pi", bias_hi);
    spec->add_option("--points", points)->check(CLI::Range(2, 100000));
    spec->add_option("--levels", levels)->check(CLI::Range(1, 64));
    add_common(spec, spec_opts);

    CommonOpts coh_opts;
    auto* coh = app.add_subcommand("check-coherence", "wave-packet and velocity constraints");
    add_common(coh, coh_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*scen) {
            const auto cfg = build_config(scen_name, scen_opts);
            const auto sum = run_scenario(cfg);
            std::cout << json{{"scenario", sum.scenario},
                              {"engine", sum.engine},
                              {"input_hash", sum.input_hash},
                              {"wall_time_s", sum.wall_time_s},
                              {"artifacts", sum.artifacts},
                              {"result", sum.result}}
                             .dump(2)
                      << "\n";
        } else if (*sw) {
            const auto cfg = build_config(sweep_name, sweep_opts);
            const auto values = parse_values(raw_values);
            const auto rows = sweep(cfg, axis, values, workers);
            std::filesystem::create_directories(cfg.out_dir);
            const auto path = (std::filesystem::path(cfg.out_dir) / "sweep.csv").string();
            write_sweep_csv(rows, axis, path);
            std::ifstream f(path);
            std::cout << f.rdbuf();
        } else if (*fab) {
            auto cfg = build_config("fabrication-tableI", fab_opts);
            if (fab_case == "B" && fab_opts.sets.empty() && fab_opts.config_file.empty())
                cfg.params = preset_table_b();
            FabricationInputs in;
            in.fab_case = fab_case == "A" ? FabCase::A : FabCase::B;
            if (jc) in.jc = *jc;
            else if (cfg.jc) in.jc = *cfg.jc;
            if (cj_area) in.cj_area = *cj_area;
            else if (cfg.cj_area) in.cj_area = *cfg.cj_area;
            in.jcq_ratio = jcq;
            const auto pc = fabricate(in, cfg.params);
            const auto csv = fabrication_csv({{fab_case, pc}});
            json j;
            const auto cols = table_columns();
            const auto row = table_row(pc);
            for (size_t i = 0; i < cols.size(); ++i) j[cols[i]] = row[i];
            j["beta2_check"] = pc.beta2_check;
            if (!fab_opts.out_dir.empty()) {
                write_text(fab_opts.out_dir, "fabrication.csv", csv);
                write_text(fab_opts.out_dir, "fabrication.json", j.dump(2) + "\n");
            }
            std::cout << j.dump(2) << "\n";
        } else if (*spec) {
            const auto cfg = build_config("spectrum-caseA", spec_opts);
            if (!(bias_hi > bias_lo)) throw ValidationError("bias range must be increasing");
            quantum::PhaseGrid grid;
            grid.n = cfg.grid_points;
            std::vector<double> bias;
            for (int i = 0; i < points; ++i)
                bias.push_back(pi * (bias_lo + (bias_hi - bias_lo) * i / (points - 1)));
            const auto tab = quantum::spectrum_vs_bias(quantum::FluxoniumModel::from(cfg.params), grid,
                                                       bias, levels);
            std::string csv = "phi_b";
            for (int m = 0; m < levels; ++m) csv += fmt::format(",e{}", m);
            csv += "\n";
            for (size_t i = 0; i < bias.size(); ++i) {
                csv += fmt::format("{:.10g}", bias[i]);
                for (double e : tab.energies[i]) csv += fmt::format(",{:.10g}", e);
                csv += "\n";
            }
            if (!spec_opts.out_dir.empty()) write_text(spec_opts.out_dir, "spectrum.csv", csv);
            std::cout << csv;
            std::cerr << fmt::format("0-1 gap minimum {:.6g} E_0 at phi_b = {:.6f} pi\n", tab.min_gap,
                                     tab.crossing_bias / pi);
        } else if (*coh) {
            auto cfg = build_config("coherence-check", coh_opts);
            if (coh_opts.out_dir.empty()) cfg.out_dir = "out";
            const auto sum = run_scenario(cfg, !coh_opts.out_dir.empty());
            std::cout << sum.result.dump(2) << "\n";
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
