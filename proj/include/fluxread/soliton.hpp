#pragma once

#include <vector>

namespace fluxread {

enum class Side { Left, Right };

struct SolitonSpec {
    int sigma = 1;
    double center = 0;    // lambda_J
    double width = 1;     // lambda_J
    double velocity = 0;  // v / c

    static SolitonSpec moving(int sigma, double center, double v);
};

// 4 atan(exp(-sigma (x - X) / W))
double soliton_profile(double x, const SolitonSpec& s);
// Phase velocity of a rigidly moving soliton, -v d(phi)/dx.
double soliton_phase_rate(double x, const SolitonSpec& s);

// Fluxon plus mirror antifluxon on each side of the interface.
double ansatz_field(double xl, double xr, int sigma, double width, Side side, double x);

// Interface phases of the ansatz: phi_L(X_L), phi_R(X_R) and their derivatives.
double interface_phase_left(double xl, int sigma, double width);
double interface_phase_right(double xr, int sigma, double width);
double interface_slope(double x, double width);  // (4 / W) sech(X / W)

// Lattice site positions: k-th junction sits at -(k + 1/2) a on the left
// and +(k + 1/2) a on the right (termination junction k = 0).
double site_position(Side side, int k, double a);

struct CCFit {
    double xl = 0;
    double xr = 0;
    double residual = 0;  // RMS phase misfit in radians
    bool low_confidence = false;
};

inline constexpr double fit_residual_limit = 0.5;

// Least-squares fit of the two-sided ansatz to lattice phases. Each side only
// depends on its own coordinate, so the two scalar searches are independent.
CCFit fit_cc(const std::vector<double>& left, const std::vector<double>& right, double a,
             int sigma, double width, double domain = 8.0);

// Outgoing/incoming fluxon energy ratio from the late-time slope of a fitted
// coordinate track; only samples with lo <= |X| <= hi and after t_after are used.
double energy_retention(const std::vector<double>& t, const std::vector<double>& x, double v_in,
                        double t_after, double lo = 3.0, double hi = 7.5);

// Linear least-squares slope of x(t).
double fitted_velocity(const std::vector<double>& t, const std::vector<double>& x);

}  // namespace fluxread
