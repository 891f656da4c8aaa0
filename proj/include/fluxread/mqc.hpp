#pragma once

#include <vector>

#include "fluxread/ccmodel.hpp"
#include "fluxread/quantum1d.hpp"

namespace fluxread::mqc {

// Classical fluxon coordinates with a quantum fluxonium.
struct MQCState {
    double xl = -10, xr = 0, vxl = 0.6, vxr = 0;
    quantum::WaveFunction psi;
    double t = 0;
};

struct MQCOptions {
    double t_end = 70.0;
    double dt = 0.005;
    double sample_every = 0.1;
    int initial_state = 0;  // reference level n for the infidelity
    int tracked = 8;
    double max_bias_step = 0.01 * pi;  // per quantum substep
    quantum::PhaseGrid grid;
};

struct MQCSample {
    double t = 0, xl = 0, xr = 0, phi_b = 0, mean_phi_q = 0, energy = 0;
    std::vector<double> weights;  // |c_m|^2 in the instantaneous basis of H_q + V_int
    double infidelity = 0;
};

struct MQCReport {
    std::vector<MQCSample> samples;
    lattice::Channel channel = lattice::Channel::Undecided;
    double final_infidelity = 0;
    double peak_infidelity = 0;
    double max_energy_drift = 0;  // relative
    double max_norm_drift = 0;
    double min_tracking_overlap = 1;  // adiabatic mode only
    bool tracking_ambiguous = false;
    int dominant_level = 0;       // most populated tracked level at the end
    double mean_level = 0;        // sum m |c_m|^2 at the end
};

// Eigenstate n of the isolated fluxonium as the starting wavefunction.
MQCState initial_state(const cc::CCModel& m, int n, double x0, double v,
                       const quantum::PhaseGrid& grid = {});

// Ehrenfest propagation: Strang splitting of classical half steps (mean-field
// qubit force) around a Crank-Nicolson step of the qubit at frozen coordinates.
MQCReport run_mqc(const cc::CCModel& m, MQCState s, const MQCOptions& opt = {});

// Born-Oppenheimer variant: the qubit follows the instantaneous level picked by
// maximal overlap with the previous step.
MQCReport run_adiabatic(const cc::CCModel& m, MQCState s, const MQCOptions& opt = {});

inline constexpr double tracking_overlap_floor = 0.5;

}  // namespace fluxread::mqc
