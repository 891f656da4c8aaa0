#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluxread/params.hpp"

namespace fluxread::lattice {

struct LatticeState {
    std::vector<double> phi_left, phi_right;    // k = 0 is the termination junction
    std::vector<double> dphi_left, dphi_right;  // units of omega_J
    double phi_q = 0;
    double dphi_q = 0;
    double t = 0;  // units of 1 / omega_J

    double phi_b() const { return phi_left[0] - phi_right[0]; }
};

// Fluxon moving right from x0 (lambda_J) at velocity v; right LJJ and interface at rest.
LatticeState init_state(const CircuitParams& p, double v, double x0, double phi_q0);

struct Accelerations {
    std::vector<double> left, right;
    double q = 0;
};

void eom_rhs(const LatticeState& s, const CircuitParams& p, Accelerations& out);
Accelerations eom_rhs(const LatticeState& s, const CircuitParams& p);

// Total energy in units of E_0.
double total_energy(const LatticeState& s, const CircuitParams& p);

struct Sample {
    double t = 0;
    double phi_b = 0;
    double phi_q = 0;
    double energy = 0;
    double xl_fit = 0;
    double xr_fit = 0;
    double fit_residual = 0;
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<LatticeState> snapshots;
    LatticeState final_state;
    double width = 1;     // fluxon width used for fitting
    double v_in = 0;
    double max_energy_drift = 0;  // relative
};

struct RunOptions {
    double t_end = 70.0;
    double dt = 0.005;
    double sample_every = 0.1;
    double snapshot_every = 0;  // 0 disables field snapshots
    double fit_domain = 8.0;
    double v_in = 0.6;          // fixes the fitting width
};

Trajectory run(LatticeState s, const CircuitParams& p, const RunOptions& opt);

enum class Channel {
    TransmittedFluxon,
    ReflectedFluxon,
    TransmittedAntifluxon,
    ReflectedAntifluxon,
    Trapped,
    Undecided
};

std::string to_string(Channel c);
std::string short_code(Channel c);

struct ScatterOutcome {
    Channel channel = Channel::Undecided;
    int bounce_count = 0;         // dominant excursions, at least half the largest
    int excursion_peaks = 0;      // every peak above bounce_threshold, residual ringing included
    double max_phi_b = 0;
    double t_max_phi_b = 0;
    std::optional<double> energy_retention;
    double measurement_time = 0;  // Josephson periods 2 pi / omega_J, onset to end of last bounce
    double time_above_activity = 0;  // Josephson periods with |phi_b| above activity_threshold
    double v_in_fitted = 0;
    std::optional<double> measurement_time_ns;
    double winding_left = 0;
    double winding_right = 0;
};

inline constexpr double bounce_threshold = 0.1 * pi;
inline constexpr double activity_threshold = 0.05 * pi;
inline constexpr double exit_distance = 5.0;

// Peaks of |phi_b(t)| above the threshold with at least that much prominence.
int count_bounces(const std::vector<double>& t, const std::vector<double>& phi_b,
                  double threshold = bounce_threshold);

// Indices of those peaks (same definition as count_bounces).
std::vector<size_t> bounce_peaks(const std::vector<double>& phi_b, double threshold = bounce_threshold);

inline constexpr double dominant_fraction = 0.5;

// fj_ghz converts the measurement time to ns when physical scales are known.
ScatterOutcome classify_outcome(const Trajectory& traj, const CircuitParams& p,
                                std::optional<double> fj_ghz = std::nullopt);

}  // namespace fluxread::lattice
