#pragma once

#include <vector>

#include "fluxread/lattice.hpp"
#include "fluxread/params.hpp"

namespace fluxread::cc {

struct CCState {
    double xl = -10, xr = 0;  // lambda_J
    double phi_q = 0;
    double vxl = 0, vxr = 0;  // units of c
    double vphi_q = 0;        // units of omega_J
    double t = 0;
};

struct MassMatrix {
    double m_ll = 0, m_rr = 0, m_lr = 0;
    double det() const { return m_ll * m_rr - m_lr * m_lr; }
};

struct CCPotential {
    double u0 = 0, u1 = 0, u2 = 0, u_s = 0;
    double u_fl = 0, u_q = 0, v_int = 0, total = 0;
    double phi_b = 0;
};

// Interface self-energy term of the fluxon potential. The circuit-consistent form
// 1/2 (phi_B)^2 completes the square of the coupling inductor; the alternative
// 1/2 (phi_B + phi_ext)^2 is kept for comparison runs.
enum class FluxTerm { CircuitConsistent, ShiftedByBias };

struct CCModel {
    CircuitParams params;
    double width = 0.8;  // frozen at the incoming-velocity value
    FluxTerm flux_term = FluxTerm::CircuitConsistent;

    static CCModel from(const CircuitParams& p, double v_in,
                        FluxTerm term = FluxTerm::CircuitConsistent);
};

MassMatrix masses(const CCModel& m, double xl, double xr);
CCPotential potential(const CCModel& m, double xl, double xr, double phi_q);

// Fluxon-only part: U_fl with its gradient and the interface phase with its gradient.
struct FluxonTerms {
    double u_fl = 0, du_dxl = 0, du_dxr = 0;
    double phi_b = 0, dphib_dxl = 0, dphib_dxr = 0;
};
FluxonTerms fluxon_terms(const CCModel& m, double xl, double xr);

struct Gradient {
    double xl = 0, xr = 0, phi_q = 0;
};
Gradient potential_gradient(const CCModel& m, double xl, double xr, double phi_q);

// Mass-matrix solve with the velocity-squared terms, given the generalised forces
// -dU/dX_L, -dU/dX_R. Throws NumericalError when the mass matrix is singular.
std::pair<double, double> fluxon_accelerations(const CCModel& m, double xl, double xr, double vxl,
                                               double vxr, double force_l, double force_r);

struct CCAccel {
    double xl = 0, xr = 0, phi_q = 0;
};
CCAccel eom_rhs(const CCModel& m, const CCState& s);

// Hamiltonian in units of E_0.
double energy(const CCModel& m, const CCState& s);

CCState initial_state(const CCModel& m, double x0, double v, double phi_q0);

struct CCSample {
    double t = 0, xl = 0, xr = 0, phi_q = 0, phi_b = 0, energy = 0;
};

struct CCRunOptions {
    double t_end = 70.0;
    double dt = 1e-3;
    double sample_every = 0.1;
};

struct CCTrajectory {
    std::vector<CCSample> samples;
    CCState final_state;
    double max_energy_drift = 0;  // relative
    lattice::Channel channel = lattice::Channel::Undecided;
    int bounce_count = 0;
    double max_phi_b = 0;
};

CCTrajectory run_cc(const CCModel& m, CCState s, const CCRunOptions& opt = {});

// Exit channel from the final coordinates; a fluxon in the right LJJ sits at X_R << 0.
lattice::Channel cc_channel(double xl, double xr);

struct PotentialGrid {
    std::vector<double> x, y;     // X_L and X_R axes
    std::vector<double> values;   // row-major, values[i * y.size() + j] at (x[i], y[j])
    double phi_q = 0;
    double e_init = 0;            // incoming fluxon plus qubit energy
};

PotentialGrid potential_grid(const CCModel& m, double phi_q, double lo, double hi, int nx, int ny);

}  // namespace fluxread::cc
