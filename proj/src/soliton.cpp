#include "fluxread/soliton.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fmt/format.h>

#include "fluxread/errors.hpp"
#include "fluxread/params.hpp"

namespace fluxread {

SolitonSpec SolitonSpec::moving(int sigma, double center, double v) {
    return {sigma, center, fluxon_width(v), v};
}

double soliton_profile(double x, const SolitonSpec& s) {
    return 4.0 * std::atan(std::exp(-s.sigma * (x - s.center) / s.width));
}

double soliton_phase_rate(double x, const SolitonSpec& s) {
    // d(phi)/dx = -sigma (2 / W) sech((x - X) / W)
    const double slope = -s.sigma * 2.0 / (s.width * std::cosh((x - s.center) / s.width));
    return -s.velocity * slope;
}

double ansatz_field(double xl, double xr, int sigma, double width, Side side, double x) {
    if (side == Side::Left) {
        return soliton_profile(x, {sigma, xl, width}) + soliton_profile(x, {-sigma, -xl, width}) -
               two_pi * (1 - sigma);
    }
    return soliton_profile(x, {-sigma, xr, width}) + soliton_profile(x, {sigma, -xr, width}) - two_pi;
}

double interface_phase_left(double xl, int sigma, double width) {
    return sigma * 8.0 * std::atan(std::exp(xl / width));
}

double interface_phase_right(double xr, int sigma, double width) {
    return sigma * (8.0 * std::atan(std::exp(-xr / width)) - two_pi);
}

double interface_slope(double x, double width) { return 4.0 / (width * std::cosh(x / width)); }

double site_position(Side side, int k, double a) {
    const double x = (k + 0.5) * a;
    return side == Side::Left ? -x : x;
}

namespace {

struct SideFit {
    double x = 0;
    double sq = 0;
    int count = 0;
};

SideFit fit_side(const std::vector<double>& phases, Side side, double a, int sigma, double width,
                 double domain) {
    const double reach = domain + 6.0 * width;
    int used = 0;
    while (used < static_cast<int>(phases.size()) && std::abs(site_position(side, used, a)) <= reach)
        ++used;

    auto misfit = [&](double X) {
        double s = 0;
        for (int k = 0; k < used; ++k) {
            const double x = site_position(side, k, a);
            const double r = side == Side::Left ? ansatz_field(X, 0, sigma, width, side, x)
                                                : ansatz_field(0, X, sigma, width, side, x);
            const double dphi = phases[k] - r;
            s += dphi * dphi;
        }
        return s;
    };

    constexpr double step = 0.25;
    const int half = static_cast<int>(std::floor(domain / step));
    double best = 0, best_val = misfit(0.0);
    // Walk outwards so ties resolve toward smaller |X|.
    for (int i = 1; i <= half; ++i) {
        for (double X : {-i * step, i * step}) {
            const double v = misfit(X);
            if (v < best_val * (1.0 - 1e-12)) best_val = v, best = X;
        }
    }
    for (double X : {-domain, domain}) {
        const double v = misfit(X);
        if (v < best_val * (1.0 - 1e-12)) best_val = v, best = X;
    }
    const double lo = std::max(-domain, best - step), hi = std::min(domain, best + step);
    const auto r = boost::math::tools::brent_find_minima(misfit, lo, hi, 40);
    if (r.second < best_val) best = r.first, best_val = r.second;
    return {best, best_val, used};
}

}  // namespace

CCFit fit_cc(const std::vector<double>& left, const std::vector<double>& right, double a,
             int sigma, double width, double domain) {
    const auto l = fit_side(left, Side::Left, a, sigma, width, domain);
    const auto r = fit_side(right, Side::Right, a, sigma, width, domain);
    CCFit fit;
    fit.xl = l.x;
    fit.xr = r.x;
    const int n = std::max(1, l.count + r.count);
    fit.residual = std::sqrt((l.sq + r.sq) / n);
    fit.low_confidence = fit.residual > fit_residual_limit;
    return fit;
}

double fitted_velocity(const std::vector<double>& t, const std::vector<double>& x) {
    const size_t n = t.size();
    if (n < 2 || x.size() != n) throw NumericalError("velocity fit needs at least two samples");
    double mt = 0, mx = 0;
    for (size_t i = 0; i < n; ++i) mt += t[i], mx += x[i];
    mt /= n;
    mx /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (t[i] - mt) * (x[i] - mx);
        sxx += (t[i] - mt) * (t[i] - mt);
    }
    return sxy / sxx;
}

double energy_retention(const std::vector<double>& t, const std::vector<double>& x, double v_in,
                        double t_after, double lo, double hi) {
    std::vector<double> ts, xs;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_after) continue;
        const double ax = std::abs(x[i]);
        if (ax >= lo && ax <= hi) ts.push_back(t[i]), xs.push_back(x[i]);
    }
    if (ts.size() < 5)
        throw NumericalError(fmt::format("outgoing track too short for a velocity fit ({} samples)",
                                         ts.size()));
    const double v_out = std::min(std::abs(fitted_velocity(ts, xs)), 0.999999);
    return std::sqrt(1.0 - v_in * v_in) / std::sqrt(1.0 - v_out * v_out);
}

}  // namespace fluxread
