#pragma once

#include <array>
#include <vector>

#include "fluxread/params.hpp"
#include "fluxread/quantum1d.hpp"

namespace fluxread::boundstate {

// Interface-localised (evanescent) field of each LJJ reduced to an effective
// junction and inductance in parallel with the termination junction.
struct EvanescentParams {
    double mu_a = 0;
    double cj_eff = 0;  // C_J,eff / C_J
    double ic_eff = 0;  // I_c,eff / I_c
    double l_eff = 0;   // L_eff / L
};

EvanescentParams evanescent_params(const CircuitParams& p);

// Coordinates are (phi_LR, phi_B, phi_q), phi_LR = (phi_L + phi_R) / 2.
struct SteadyStateReport {
    std::array<double, 3> steady_state{};
    std::array<double, 3> masses{};
    std::array<std::array<double, 3>, 3> hessian{};
    std::array<double, 3> frequencies{};   // sqrt(K_ii / M_i), units of omega_J
    std::array<double, 3> uncertainties{};  // <(delta phi_i)^2>
    bool stable = false;
};

// Potential of the three-mode interface Hamiltonian in units of E_0.
double interface_potential(const CircuitParams& p, const EvanescentParams& ev, double phi_lr,
                           double phi_b, double phi_q);

SteadyStateReport steadystate_report(const CircuitParams& p);

struct Grid2D {
    quantum::PhaseGrid q{-4.0 * pi, 6.0 * pi, 512};
    quantum::PhaseGrid b{-pi, pi, 128};
};

struct H2Solution {
    Grid2D grid;
    std::vector<double> energies;
    std::vector<std::vector<double>> states;  // index iq * nb + ib, sum |psi|^2 dq db = 1
    std::vector<double> mean_phi_q, mean_phi_b;
    std::vector<double> spread_phi_q, spread_phi_b;
    std::vector<int> well_label;
};

struct H2Options {
    int states = 6;
    bool coupling = true;  // false drops V_int, leaving separable qubit and phi_B parts
};

H2Solution solve_h2(const CircuitParams& p, const Grid2D& grid = {}, const H2Options& opt = {});

// Spectrum of the phi_B mode alone (effective inductance, rail and termination
// junctions, coupling inductor), the separable partner of the isolated fluxonium.
quantum::EigenSolution phi_b_ladder(const CircuitParams& p, const quantum::PhaseGrid& grid, int k);

}  // namespace fluxread::boundstate
