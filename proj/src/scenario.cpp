#include "fluxread/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>

#include "fluxread/boundstate.hpp"
#include "fluxread/ccmodel.hpp"
#include "fluxread/errors.hpp"
#include "fluxread/lattice.hpp"
#include "fluxread/mqc.hpp"
#include "fluxread/quantum1d.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fluxread {

namespace {

class Artifacts {
public:
    Artifacts(const ScenarioConfig& cfg, bool enabled) : dir_(cfg.out_dir), enabled_(enabled) {
        if (enabled_) {
            std::error_code ec;
            fs::create_directories(dir_, ec);
            if (ec) throw ValidationError(fmt::format("cannot create output directory '{}'", dir_));
        }
    }

    void write(const std::string& name, const std::string& content) {
        if (!enabled_) return;
        const auto path = (fs::path(dir_) / name).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ValidationError(fmt::format("cannot write '{}'", path));
        f << content;
        files_.push_back(path);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    std::string dir_;
    bool enabled_;
    std::vector<std::string> files_;
};

std::string g(double v) { return fmt::format("{:.10g}", v); }

quantum::PhaseGrid phase_grid(const ScenarioConfig& cfg) {
    quantum::PhaseGrid grid;
    grid.n = cfg.grid_points;
    return grid;
}

std::optional<PhysicalCharacteristics> physical(const ScenarioConfig& cfg) {
    if (!cfg.jc && !cfg.cj_area) return std::nullopt;
    FabricationInputs in;
    if (cfg.jc) in.jc = *cfg.jc;
    if (cfg.cj_area) in.cj_area = *cfg.cj_area;
    in.fab_case = cfg.fab_case;
    return fabricate(in, cfg.params);
}

json physical_json(const PhysicalCharacteristics& pc) {
    json j;
    const auto cols = table_columns();
    const auto row = table_row(pc);
    for (size_t i = 0; i < cols.size(); ++i) j[cols[i]] = row[i];
    j["beta2_check"] = pc.beta2_check;
    j["ns_per_omegaJ_t"] = 1.0 / (two_pi * pc.fj);
    return j;
}

struct QubitStart {
    double phi_q0;
    double mean_phase;
};

QubitStart qubit_start(const ScenarioConfig& cfg) {
    const auto sol = quantum::fluxonium_states(cfg.params, cfg.qubit_state + 1, phase_grid(cfg));
    const double mean = sol.mean_phase[cfg.qubit_state];
    return {mean + cfg.phi_q_offset, mean};
}

cc::CCModel cc_model(const ScenarioConfig& cfg) {
    return cc::CCModel::from(cfg.params, cfg.v,
                             cfg.shifted_flux_term ? cc::FluxTerm::ShiftedByBias
                                                   : cc::FluxTerm::CircuitConsistent);
}

json run_lattice(const ScenarioConfig& cfg, Artifacts& out) {
    const auto start = qubit_start(cfg);
    auto state = lattice::init_state(cfg.params, cfg.v, cfg.x0, start.phi_q0);
    lattice::RunOptions opt;
    opt.t_end = cfg.t_end;
    opt.dt = cfg.dt.value_or(0.005);
    opt.sample_every = cfg.sample_every;
    opt.snapshot_every = cfg.snapshot_every;
    opt.v_in = cfg.v;
    const auto traj = lattice::run(std::move(state), cfg.params, opt);
    const auto phys = physical(cfg);
    const auto outcome =
        lattice::classify_outcome(traj, cfg.params, phys ? std::optional(phys->fj) : std::nullopt);

    std::string csv = "t_omegaJ,phi_b,phi_q,energy_E0,xl_fit,xr_fit\n";
    for (const auto& s : traj.samples)
        csv += fmt::format("{},{},{},{},{},{}\n", g(s.t), g(s.phi_b), g(s.phi_q), g(s.energy),
                           g(s.xl_fit), g(s.xr_fit));
    out.write("trajectory.csv", csv);
    if (!traj.snapshots.empty()) {
        std::string snap = "t_omegaJ,side,k,phi,dphi\n";
        for (const auto& st : traj.snapshots)
            for (int k = 0; k < static_cast<int>(st.phi_left.size()); ++k) {
                snap += fmt::format("{},L,{},{},{}\n", g(st.t), k, g(st.phi_left[k]), g(st.dphi_left[k]));
                snap += fmt::format("{},R,{},{},{}\n", g(st.t), k, g(st.phi_right[k]), g(st.dphi_right[k]));
            }
        out.write("snapshots.csv", snap);
    }

    json r;
    r["channel"] = lattice::to_string(outcome.channel);
    r["bounce_count"] = outcome.bounce_count;
    r["excursion_peaks"] = outcome.excursion_peaks;
    r["time_above_activity_periods"] = outcome.time_above_activity;
    r["v_in_fitted"] = outcome.v_in_fitted;
    r["max_phi_b_over_pi"] = outcome.max_phi_b / pi;
    r["t_max_phi_b"] = outcome.t_max_phi_b;
    r["nu_j_t_max_phi_b"] = outcome.t_max_phi_b / two_pi;
    r["energy_retention"] = outcome.energy_retention ? json(*outcome.energy_retention) : json(nullptr);
    r["measurement_time_periods"] = outcome.measurement_time;
    r["measurement_time_ns"] =
        outcome.measurement_time_ns ? json(*outcome.measurement_time_ns) : json(nullptr);
    r["winding_left"] = outcome.winding_left;
    r["winding_right"] = outcome.winding_right;
    r["max_energy_drift"] = traj.max_energy_drift;
    r["phi_q0_over_pi"] = start.phi_q0 / pi;
    r["final_phi_b_over_pi"] = traj.samples.back().phi_b / pi;

    if (cfg.backaction) {
        quantum::DriveTrace drive;
        drive.dt = traj.samples[1].t - traj.samples[0].t;
        for (const auto& s : traj.samples) drive.values.push_back(s.phi_b);
        const auto grid = phase_grid(cfg);
        const auto model = quantum::FluxoniumModel::from(cfg.params);
        const int tracked = std::max(cfg.tracked_levels, cfg.qubit_state + 2);
        const auto sol = quantum::fluxonium_states(cfg.params, cfg.qubit_state + 1, grid);
        quantum::BackactionOptions bo;
        bo.initial_state = cfg.qubit_state;
        bo.tracked = tracked;
        bo.sample_every = cfg.sample_every;
        const auto rep = quantum::propagate_driven(quantum::to_wavefunction(sol.states[cfg.qubit_state]),
                                                   drive, model, grid, bo);
        std::string bcsv = "t_omegaJ,phi_b,mean_phi_q,infidelity";
        for (int m = 0; m < tracked; ++m) bcsv += fmt::format(",w{}", m);
        bcsv += "\n";
        size_t imax = 0;
        for (size_t i = 0; i < rep.t.size(); ++i) {
            bcsv += fmt::format("{},{},{},{}", g(rep.t[i]), g(rep.drive[i]), g(rep.mean_phase[i]),
                                g(rep.infidelity[i]));
            for (double w : rep.weights[i]) bcsv += "," + g(w);
            bcsv += "\n";
            if (std::abs(rep.drive[i]) > std::abs(rep.drive[imax])) imax = i;
        }
        out.write("backaction.csv", bcsv);
        const int other = cfg.qubit_state == 0 ? 1 : 0;
        double max_dev = 0;
        for (size_t i = 0; i < rep.t.size(); ++i) {
            const size_t li = std::min(traj.samples.size() - 1,
                                       static_cast<size_t>(std::llround(rep.t[i] / opt.sample_every)));
            max_dev = std::max(max_dev, std::abs(rep.mean_phase[i] - traj.samples[li].phi_q));
        }
        r["backaction"] = {
            {"final_infidelity", rep.final_infidelity},
            {"peak_infidelity", rep.peak_infidelity},
            {"weight_ratio_at_max_phi_b", rep.weights[imax][other] / rep.weights[imax][cfg.qubit_state]},
            {"max_norm_drift", rep.max_norm_drift},
            {"min_completeness", rep.min_completeness},
            {"max_quantum_classical_phase_gap_over_pi", max_dev / pi},
        };
    }
    return r;
}

json cc_branch(const ScenarioConfig& cfg, const cc::CCModel& model, int n, double phi_q0,
               Artifacts& out, const std::string& tag) {
    auto s = cc::initial_state(model, cfg.x0, cfg.v, phi_q0);
    cc::CCRunOptions opt;
    opt.t_end = cfg.t_end;
    opt.dt = cfg.dt.value_or(1e-3);
    opt.sample_every = cfg.sample_every;
    const auto traj = cc::run_cc(model, s, opt);
    std::string csv = "t,xl,xr,phi_q,phi_b,energy\n";
    for (const auto& p : traj.samples)
        csv += fmt::format("{},{},{},{},{},{}\n", g(p.t), g(p.xl), g(p.xr), g(p.phi_q), g(p.phi_b),
                           g(p.energy));
    out.write(fmt::format("cc_trajectory{}.csv", tag), csv);
    return {{"qubit_state", n},
            {"phi_q0_over_pi", phi_q0 / pi},
            {"channel", lattice::to_string(traj.channel)},
            {"bounce_count", traj.bounce_count},
            {"max_phi_b_over_pi", traj.max_phi_b / pi},
            {"final_xl", traj.final_state.xl},
            {"final_xr", traj.final_state.xr},
            {"max_energy_drift", traj.max_energy_drift}};
}

json write_grid(const cc::CCModel& model, double phi_q, Artifacts& out, const std::string& tag) {
    const auto grid = cc::potential_grid(model, phi_q, -6.0, 6.0, 121, 121);
    std::string csv = "xl,xr,value\n";
    for (size_t i = 0; i < grid.x.size(); ++i)
        for (size_t j = 0; j < grid.y.size(); ++j)
            csv += fmt::format("{},{},{}\n", g(grid.x[i]), g(grid.y[j]),
                               g(grid.values[i * grid.y.size() + j]));
    out.write(fmt::format("potential_grid{}.csv", tag), csv);
    json meta = {{"phi_q_over_pi", phi_q / pi},
                 {"e_init", grid.e_init},
                 {"x_min", grid.x.front()},
                 {"x_max", grid.x.back()},
                 {"nx", grid.x.size()},
                 {"ny", grid.y.size()},
                 {"layout", "row-major, xl outer, xr inner"}};
    out.write(fmt::format("potential_grid{}.json", tag), meta.dump(2) + "\n");
    return meta;
}

json run_cc_engine(const ScenarioConfig& cfg, Artifacts& out) {
    const auto model = cc_model(cfg);
    json r;
    r["flux_term"] = cfg.shifted_flux_term ? "shifted" : "circuit";
    if (cfg.scenario == "caseA-cc") {
        const auto sol = quantum::fluxonium_states(cfg.params, 2, phase_grid(cfg));
        for (int n = 0; n < 2; ++n) {
            const double q0 = sol.mean_phase[n] + cfg.phi_q_offset;
            const auto tag = fmt::format("_n{}", n);
            r["branches"].push_back(cc_branch(cfg, model, n, q0, out, tag));
            r["grids"].push_back(write_grid(model, q0, out, tag));
        }
        return r;
    }
    const auto start = qubit_start(cfg);
    r.update(cc_branch(cfg, model, cfg.qubit_state, start.phi_q0, out, ""));
    r["grid"] = write_grid(model, start.phi_q0, out, "");
    return r;
}

json mqc_json(const mqc::MQCReport& rep, Artifacts& out, const std::string& name, int tracked) {
    std::string csv = "t,xl,xr,phi_q,phi_b,energy,infidelity";
    for (int m = 0; m < tracked; ++m) csv += fmt::format(",c{}", m);
    csv += "\n";
    for (const auto& s : rep.samples) {
        csv += fmt::format("{},{},{},{},{},{},{}", g(s.t), g(s.xl), g(s.xr), g(s.mean_phi_q),
                           g(s.phi_b), g(s.energy), g(s.infidelity));
        for (double w : s.weights) csv += "," + g(w);
        csv += "\n";
    }
    out.write(name, csv);
    return {{"channel", lattice::to_string(rep.channel)},
            {"final_infidelity", rep.final_infidelity},
            {"peak_infidelity", rep.peak_infidelity},
            {"max_energy_drift", rep.max_energy_drift},
            {"max_norm_drift", rep.max_norm_drift},
            {"dominant_level", rep.dominant_level},
            {"mean_level", rep.mean_level},
            {"min_tracking_overlap", rep.min_tracking_overlap},
            {"tracking_ambiguous", rep.tracking_ambiguous}};
}

json run_mqc_engine(const ScenarioConfig& cfg, Artifacts& out) {
    const auto model = cc_model(cfg);
    const auto grid = phase_grid(cfg);
    mqc::MQCOptions opt;
    opt.t_end = cfg.t_end;
    opt.dt = cfg.dt.value_or(0.005);
    opt.sample_every = cfg.sample_every;
    opt.initial_state = cfg.qubit_state;
    opt.tracked = std::max(cfg.tracked_levels, cfg.qubit_state + 1);
    opt.grid = grid;
    const auto init = mqc::initial_state(model, cfg.qubit_state, cfg.x0, cfg.v, grid);
    json r;
    const bool both = cfg.scenario == "halfflux-failure";
    if (cfg.engine == Engine::MQC || both)
        r["mqc"] = mqc_json(mqc::run_mqc(model, init, opt), out, "mqc_trajectory.csv", opt.tracked);
    if (cfg.engine == Engine::Adiabatic || both)
        r["adiabatic"] =
            mqc_json(mqc::run_adiabatic(model, init, opt), out, "adiabatic_trajectory.csv", opt.tracked);
    if (both)
        r["engines_agree"] = r["mqc"]["channel"] == r["adiabatic"]["channel"] &&
                             std::abs(r["mqc"]["final_infidelity"].get<double>() -
                                      r["adiabatic"]["final_infidelity"].get<double>()) < 0.1;
    return r;
}

json run_spectrum(const ScenarioConfig& cfg, Artifacts& out) {
    const auto grid = phase_grid(cfg);
    const auto model = quantum::FluxoniumModel::from(cfg.params);
    std::vector<double> bias;
    for (int i = 0; i <= 200; ++i) bias.push_back(-0.2 * pi + 2.0 * pi * i / 200.0);
    const int levels = 6;
    const auto tab = quantum::spectrum_vs_bias(model, grid, bias, levels);
    std::string csv = "phi_b";
    for (int m = 0; m < levels; ++m) csv += fmt::format(",e{}", m);
    csv += "\n";
    for (size_t i = 0; i < bias.size(); ++i) {
        csv += g(bias[i]);
        for (double e : tab.energies[i]) csv += "," + g(e);
        csv += "\n";
    }
    out.write("spectrum.csv", csv);
    const auto iso = quantum::fluxonium_states(cfg.params, 2, grid);
    const auto two = quantum::avoided_crossing_2level(model, grid, 0.73 * pi);
    const double e01 = iso.energies[1] - iso.energies[0];
    return {{"hbar_omega01_E0", e01},
            {"hbar_omega01_Ec", e01 / cfg.params.ec_q()},
            {"mean_phi_q_over_pi", {iso.mean_phase[0] / pi, iso.mean_phase[1] / pi}},
            {"crossing_bias_over_pi", tab.crossing_bias / pi},
            {"min_gap_E0", tab.min_gap},
            {"two_level_weight_at_0.73pi", two.weight},
            {"two_level_outside_window", two.outside_window}};
}

json run_boundstate(const ScenarioConfig& cfg, Artifacts& out) {
    const auto ev = boundstate::evanescent_params(cfg.params);
    const auto ss = boundstate::steadystate_report(cfg.params);
    const auto h2 = boundstate::solve_h2(cfg.params);
    const int nb = h2.grid.b.n;
    const int shown = std::min<int>(3, h2.states.size());
    std::string csv = "phi_q,phi_b";
    for (int s = 0; s < shown; ++s) csv += fmt::format(",psi{}", s);
    csv += "\n";
    for (int i = 0; i < h2.grid.q.n; ++i)
        for (int j = 0; j < nb; ++j) {
            csv += g(h2.grid.q.at(i)) + "," + g(h2.grid.b.at(j));
            for (int s = 0; s < shown; ++s) csv += "," + g(h2.states[s][i * nb + j]);
            csv += "\n";
        }
    out.write("h2_states.csv", csv);
    json states = json::array();
    for (size_t s = 0; s < h2.energies.size(); ++s)
        states.push_back({{"energy_E0", h2.energies[s]},
                          {"mean_phi_q_over_pi", h2.mean_phi_q[s] / pi},
                          {"mean_phi_b_over_pi", h2.mean_phi_b[s] / pi},
                          {"spread_phi_q_over_pi", h2.spread_phi_q[s] / pi},
                          {"spread_phi_b_over_pi", h2.spread_phi_b[s] / pi},
                          {"well", h2.well_label[s]}});
    auto sqrt_over_pi = [](const std::array<double, 3>& a) {
        return std::vector<double>{std::sqrt(a[0]) / pi, std::sqrt(a[1]) / pi, std::sqrt(a[2]) / pi};
    };
    return {{"mu_a", ev.mu_a},
            {"cj_eff", ev.cj_eff},
            {"ic_eff", ev.ic_eff},
            {"l_eff", ev.l_eff},
            {"masses", ss.masses},
            {"frequencies", ss.frequencies},
            {"uncertainty_std_over_pi", sqrt_over_pi(ss.uncertainties)},
            {"steady_state", ss.steady_state},
            {"stable", ss.stable},
            {"h2_states", states}};
}

json run_fabrication(const ScenarioConfig& cfg, Artifacts& out) {
    FabricationInputs a;
    if (cfg.jc) a.jc = *cfg.jc;
    if (cfg.cj_area) a.cj_area = *cfg.cj_area;
    auto b = a;
    a.fab_case = FabCase::A;
    b.fab_case = FabCase::B;
    const std::vector<std::pair<std::string, PhysicalCharacteristics>> rows{
        {"A", fabricate(a, cfg.params)}, {"B", fabricate(b, preset_table_b())}};
    out.write("table_I.csv", fabrication_csv(rows));
    json r;
    for (const auto& [name, pc] : rows) r[name] = physical_json(pc);
    out.write("table_I.json", r.dump(2) + "\n");
    return r;
}

json run_coherence(const ScenarioConfig& cfg, Artifacts& out) {
    const auto rep = coherence_checks(cfg.params, cfg.v, cfg.xi_over_a, cfg.l_over_a);
    json passes;
    for (const auto& [name, ok] : rep.passes) passes[name] = ok;
    json r = {{"k_lambda", rep.k_lambda},
              {"de_broglie", rep.de_broglie},
              {"de_broglie_over_a", rep.de_broglie_over_a},
              {"xi_lower_bound", rep.xi_lower_bound},
              {"xi_lower_bound_delay", rep.xi_lower_bound_delay},
              {"v_max_discreteness", rep.v_max_discreteness},
              {"v_max_plasma", rep.v_max_plasma},
              {"kinetic_energy_hbar_omegaJ", rep.kinetic_energy},
              {"kinetic_energy_E0", rep.kinetic_energy_e0},
              {"much_greater_factor", much_greater_factor},
              {"passes", passes}};
    out.write("coherence.json", r.dump(2) + "\n");
    return r;
}

}  // namespace

std::string fabrication_csv(
    const std::vector<std::pair<std::string, PhysicalCharacteristics>>& rows) {
    std::string csv = "row";
    for (const auto& c : table_columns()) csv += "," + c;
    csv += "\n";
    for (const auto& [name, pc] : rows) {
        csv += name;
        for (double v : table_row(pc)) csv += "," + fmt::format("{:.6g}", v);
        csv += "\n";
    }
    return csv;
}

RunSummary run_scenario(const ScenarioConfig& cfg, bool write_artifacts) {
    validate(cfg.params);
    const auto t0 = std::chrono::steady_clock::now();
    Artifacts out(cfg, write_artifacts);
    RunSummary sum;
    sum.scenario = cfg.scenario;
    sum.engine = to_string(cfg.engine);
    sum.input_hash = input_hash(cfg);

    const auto& name = cfg.scenario;
    if (name == "spectrum-caseA") {
        sum.engine = "spectrum";
        sum.result = run_spectrum(cfg, out);
    } else if (name == "boundstate-caseA") {
        sum.engine = "boundstate";
        sum.result = run_boundstate(cfg, out);
    } else if (name == "fabrication-tableI") {
        sum.engine = "fabrication";
        sum.result = run_fabrication(cfg, out);
    } else if (name == "coherence-check") {
        sum.engine = "coherence";
        sum.result = run_coherence(cfg, out);
    } else if (cfg.engine == Engine::Lattice && name != "halfflux-failure") {
        sum.result = run_lattice(cfg, out);
    } else if (cfg.engine == Engine::CC) {
        sum.result = run_cc_engine(cfg, out);
    } else {
        sum.result = run_mqc_engine(cfg, out);
    }
    if (auto phys = physical(cfg); phys && name != "fabrication-tableI")
        out.write("physical.json", physical_json(*phys).dump(2) + "\n");

    sum.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json summary = {{"scenario", sum.scenario},
                    {"engine", sum.engine},
                    {"input_hash", sum.input_hash},
                    {"config", canonical_text(cfg)},
                    {"artifacts", out.files()},
                    {"result", sum.result}};
    out.write("summary.json", summary.dump(2) + "\n");
    out.write("timing.json", json{{"wall_time_s", sum.wall_time_s}}.dump(2) + "\n");
    sum.artifacts = out.files();
    return sum;
}

}  // namespace fluxread
