#pragma once

#include <complex>
#include <vector>

#include "fluxread/params.hpp"

namespace fluxread::quantum {

using cplx = std::complex<double>;

struct PhaseGrid {
    double min = -4.0 * pi;
    double max = 6.0 * pi;
    int n = 1024;

    double spacing() const { return (max - min) / (n - 1); }
    double at(int i) const { return min + i * spacing(); }
};

// Energies in units of E_0; hbar_omega = hbar omega_J / E_0 sets the time unit 1/omega_J.
struct FluxoniumModel {
    double ej = 0;
    double ec = 0;
    double el = 0;
    double phi_ext = 0;
    double hbar_omega = 0.4;

    static FluxoniumModel from(const CircuitParams& p);
};

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
};

// 4 E_c n^2 + E_J (1 - cos phi) + E_L/2 (phi - phi_b - phi_ext)^2, central differences,
// Dirichlet walls just outside the grid.
Tridiagonal build_hamiltonian(const PhaseGrid& grid, const FluxoniumModel& m, double phi_b);

struct EigenSolution {
    std::vector<double> energies;
    std::vector<std::vector<double>> states;  // normalised so that sum |psi|^2 h = 1
    std::vector<double> mean_phase;
    std::vector<double> spread;               // sqrt(<phi^2> - <phi>^2)
    std::vector<int> well_label;              // round(<phi> / 2 pi)
};

EigenSolution eigensolve(const Tridiagonal& h, const PhaseGrid& grid, int k);

// Convenience: eigenstates of the isolated fluxonium (phi_b = 0).
EigenSolution fluxonium_states(const CircuitParams& p, int k, const PhaseGrid& grid = {});

struct SpectrumTable {
    std::vector<double> bias;
    std::vector<std::vector<double>> energies;  // [bias][level]
    double crossing_bias = 0;                   // refined 0-1 gap minimum
    double min_gap = 0;
};

SpectrumTable spectrum_vs_bias(const FluxoniumModel& m, const PhaseGrid& grid,
                               const std::vector<double>& bias, int k);

// Locate the 0-1 gap minimum inside [lo, hi].
std::pair<double, double> gap_minimum(const FluxoniumModel& m, const PhaseGrid& grid, double lo,
                                      double hi);

struct WaveFunction {
    std::vector<cplx> amp;
    double t = 0;
};

double norm(const WaveFunction& psi, const PhaseGrid& grid);
double mean_phase(const std::vector<cplx>& amp, const PhaseGrid& grid);

// Uniformly sampled bias history phi_b(t), t in 1/omega_J.
struct DriveTrace {
    double dt = 0.1;
    std::vector<double> values;

    double duration() const { return dt * (values.size() - 1); }
};

struct BackactionOptions {
    int initial_state = 0;
    int tracked = 8;
    double dt = 0.005;
    double sample_every = 0.1;
};

struct BackactionReport {
    std::vector<double> t;
    std::vector<std::vector<double>> weights;  // |c_m(t)|^2, [sample][m]
    std::vector<double> mean_phase;
    std::vector<double> infidelity;
    std::vector<double> drive;
    double final_infidelity = 0;
    double peak_infidelity = 0;
    double max_norm_drift = 0;
    double min_completeness = 1;
};

// Crank-Nicolson propagation of the driven fluxonium with cubic-spline drive
// interpolation; c_m is taken against the instantaneous eigenbasis.
BackactionReport propagate_driven(const WaveFunction& psi0, const DriveTrace& drive,
                                  const FluxoniumModel& m, const PhaseGrid& grid,
                                  const BackactionOptions& opt);

// Wavefunction from a real eigenvector.
WaveFunction to_wavefunction(const std::vector<double>& state);

// One Crank-Nicolson step of i hbar d psi/dt = H psi with a fixed tridiagonal H.
void crank_nicolson_step(std::vector<cplx>& psi, const Tridiagonal& h, double dt, double hbar);

struct TwoLevelResult {
    double weight = 0;          // minority diabatic weight |v_0|^2 of the upper state
    double gap = 0;             // adiabatic 0-1 gap at the bias
    double min_gap = 0;         // gap at the crossing
    double crossing_bias = 0;
    bool outside_window = false;
};

TwoLevelResult avoided_crossing_2level(const FluxoniumModel& m, const PhaseGrid& grid,
                                       double phi_b);

}  // namespace fluxread::quantum
