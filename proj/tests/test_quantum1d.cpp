#include <catch_amalgamated.hpp>
#include <cmath>

#include "fluxread/quantum1d.hpp"

using namespace fluxread;
using namespace fluxread::quantum;
using Catch::Approx;

namespace {

FluxoniumModel oscillator(double ec, double el) { return {0.0, ec, el, 0.0, 0.4}; }

}  // namespace

TEST_CASE("harmonic limit reproduces the oscillator ladder") {
    const auto m = oscillator(0.1, 0.1);
    PhaseGrid grid{-4 * pi, 4 * pi, 1500};
    const auto sol = eigensolve(build_hamiltonian(grid, m, 0.0), grid, 5);
    const double w = std::sqrt(8 * 0.1 * 0.1);
    for (int k = 0; k < 5; ++k) CHECK(sol.energies[k] == Approx(w * (k + 0.5)).epsilon(1e-3));
    CHECK(sol.mean_phase[0] == Approx(0).margin(1e-9));
    const double width = std::pow(8 * 0.1 / 0.1, 0.25) / std::sqrt(2.0);
    CHECK(sol.spread[0] == Approx(width).epsilon(1e-3));
}

TEST_CASE("a bias shifts the harmonic ground state rigidly") {
    const auto m = oscillator(0.1, 0.1);
    PhaseGrid grid{-4 * pi, 4 * pi, 1500};
    const auto a = eigensolve(build_hamiltonian(grid, m, 0.0), grid, 2);
    const auto b = eigensolve(build_hamiltonian(grid, m, 1.0), grid, 2);
    CHECK(b.mean_phase[0] == Approx(1.0).epsilon(1e-6));
    CHECK(b.energies[0] == Approx(a.energies[0]).epsilon(1e-6));
}

TEST_CASE("eigenstates are normalised on the grid") {
    const PhaseGrid grid;
    const auto sol = fluxonium_states(preset_case_a(), 4, grid);
    for (const auto& s : sol.states) {
        double sum = 0;
        for (double v : s) sum += v * v;
        CHECK(sum * grid.spacing() == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("case A fluxonium levels sit in neighbouring wells") {
    const auto sol = fluxonium_states(preset_case_a(), 2);
    CHECK(sol.mean_phase[0] / pi == Approx(0.0095).margin(0.002));
    CHECK(sol.mean_phase[1] / pi == Approx(1.917).margin(0.002));
    CHECK(sol.well_label[0] == 0);
    CHECK(sol.well_label[1] == 1);
}

TEST_CASE("grid refinement leaves the low spectrum unchanged") {
    const auto m = FluxoniumModel::from(preset_case_a());
    PhaseGrid coarse, fine;
    fine.n = 2048;
    const auto a = eigensolve(build_hamiltonian(coarse, m, 0.0), coarse, 4);
    const auto b = eigensolve(build_hamiltonian(fine, m, 0.0), fine, 4);
    for (int k = 0; k < 4; ++k) CHECK(a.energies[k] == Approx(b.energies[k]).epsilon(1e-4));
}

TEST_CASE("the 0-1 gap closes at phi_b = pi - phi_ext") {
    const auto m = FluxoniumModel::from(preset_case_a());
    const auto [bias, gap] = gap_minimum(m, PhaseGrid{}, 0.5 * pi, 1.1 * pi);
    CHECK(bias / pi == Approx(0.8).margin(0.005));
    CHECK(gap > 0);
    const auto two = avoided_crossing_2level(m, PhaseGrid{}, bias);
    CHECK(two.weight == Approx(0.5).margin(0.01));
}

TEST_CASE("Crank-Nicolson conserves the norm") {
    const PhaseGrid grid;
    const auto p = preset_case_a();
    const auto m = FluxoniumModel::from(p);
    const auto sol = fluxonium_states(p, 2, grid);
    DriveTrace drive;
    drive.dt = 0.1;
    for (int i = 0; i <= 300; ++i) drive.values.push_back(0.7 * pi * std::exp(-std::pow(0.1 * i - 15, 2) / 8));
    BackactionOptions opt;
    opt.initial_state = 0;
    opt.tracked = 4;
    const auto rep = propagate_driven(to_wavefunction(sol.states[0]), drive, m, grid, opt);
    CHECK(rep.max_norm_drift < 1e-8);
    CHECK(rep.final_infidelity >= 0);
    CHECK(rep.final_infidelity < 0.05);
}

TEST_CASE("an undriven eigenstate only acquires a phase") {
    const PhaseGrid grid;
    const auto p = preset_case_a();
    const auto m = FluxoniumModel::from(p);
    const auto sol = fluxonium_states(p, 3, grid);
    DriveTrace drive;
    drive.values.assign(101, 0.0);
    BackactionOptions opt;
    opt.initial_state = 1;
    opt.tracked = 3;
    const auto rep = propagate_driven(to_wavefunction(sol.states[1]), drive, m, grid, opt);
    CHECK(rep.peak_infidelity < 1e-8);
}

TEST_CASE("single Crank-Nicolson step preserves the norm exactly") {
    const PhaseGrid grid{-pi, pi, 200};
    const auto h = build_hamiltonian(grid, oscillator(0.2, 0.3), 0.0);
    std::vector<cplx> psi(grid.n);
    for (int i = 0; i < grid.n; ++i) psi[i] = std::exp(-std::pow(grid.at(i) - 0.3, 2) * 4.0) * std::polar(1.0, 2.0 * grid.at(i));
    const auto sum_sq = [](const std::vector<cplx>& v) {
        double s = 0;
        for (const auto& z : v) s += std::norm(z);
        return s;
    };
    const double n0 = sum_sq(psi);
    for (int k = 0; k < 200; ++k) crank_nicolson_step(psi, h, 0.05, 0.4);
    CHECK(sum_sq(psi) == Approx(n0).epsilon(1e-12));
}
