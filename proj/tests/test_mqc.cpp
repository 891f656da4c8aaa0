#include <catch_amalgamated.hpp>
#include <cmath>

#include "fluxread/mqc.hpp"

using namespace fluxread;
using namespace fluxread::mqc;
using Catch::Approx;

namespace {

MQCOptions short_options(int n) {
    MQCOptions opt;
    opt.t_end = 35;
    opt.initial_state = n;
    opt.tracked = 4;
    opt.grid.n = 512;
    return opt;
}

}  // namespace

TEST_CASE("initial wavefunction is the normalised eigenstate") {
    const auto m = cc::CCModel::from(preset_case_a(), 0.6);
    quantum::PhaseGrid grid;
    grid.n = 512;
    const auto s = initial_state(m, 1, -10, 0.6, grid);
    CHECK(quantum::norm(s.psi, grid) == Approx(1.0).epsilon(1e-6));
    CHECK(quantum::mean_phase(s.psi.amp, grid) / pi == Approx(1.917).margin(0.003));
    CHECK(s.xl == -10);
    CHECK(s.vxl == 0.6);
}

TEST_CASE("mixed quantum-classical run conserves norm and energy") {
    const auto m = cc::CCModel::from(preset_case_a(), 0.6);
    const auto opt = short_options(0);
    const auto rep = run_mqc(m, initial_state(m, 0, -10, 0.6, opt.grid), opt);
    CHECK(rep.max_norm_drift < 1e-8);
    CHECK(rep.max_energy_drift < 1e-6);
    CHECK(rep.peak_infidelity < 0.05);
    for (const auto& s : rep.samples) {
        double total = 0;
        for (double w : s.weights) total += w;
        CHECK(total <= 1.0 + 1e-9);
    }
}

TEST_CASE("adiabatic variant follows one level without ambiguity") {
    const auto m = cc::CCModel::from(preset_case_a(), 0.6);
    const auto opt = short_options(1);
    const auto rep = run_adiabatic(m, initial_state(m, 1, -10, 0.6, opt.grid), opt);
    CHECK_FALSE(rep.tracking_ambiguous);
    CHECK(rep.min_tracking_overlap > tracking_overlap_floor);
    CHECK(rep.final_infidelity < 1e-8);
    CHECK(rep.dominant_level == 1);
}

TEST_CASE("mean qubit phase follows the classical CC coordinate early on") {
    const auto p = preset_case_a();
    const auto m = cc::CCModel::from(p, 0.6);
    const auto opt = short_options(0);
    const auto s0 = initial_state(m, 0, -10, 0.6, opt.grid);
    const auto rep = run_mqc(m, s0, opt);
    cc::CCRunOptions co;
    co.t_end = opt.t_end;
    const auto cl = cc::run_cc(m, cc::initial_state(m, -10, 0.6, quantum::mean_phase(s0.psi.amp, opt.grid)), co);
    const size_t n = std::min(rep.samples.size(), cl.samples.size());
    for (size_t i = 0; i < n; i += 20) {
        CHECK(std::abs(rep.samples[i].mean_phi_q - cl.samples[i].phi_q) < 0.1 * pi);
        CHECK(std::abs(rep.samples[i].xl - cl.samples[i].xl) < 0.5);
    }
}
