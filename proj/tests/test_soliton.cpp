#include <catch_amalgamated.hpp>
#include <cmath>

#include "fluxread/params.hpp"
#include "fluxread/soliton.hpp"

using namespace fluxread;
using Catch::Approx;

namespace {

std::vector<double> sample_side(double xl, double xr, int sigma, double w, Side side, double a,
                                int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = ansatz_field(xl, xr, sigma, w, side, site_position(side, k, a));
    return v;
}

}  // namespace

TEST_CASE("soliton profile limits and centre") {
    const SolitonSpec s{1, 2.0, 0.8, 0.0};
    CHECK(soliton_profile(2.0, s) == Approx(pi));
    CHECK(soliton_profile(-50.0, s) == Approx(2.0 * pi));
    CHECK(soliton_profile(50.0, s) == Approx(0.0).margin(1e-12));
    const SolitonSpec anti{-1, 2.0, 0.8, 0.0};
    CHECK(soliton_profile(-50.0, anti) == Approx(0.0).margin(1e-12));
    CHECK(soliton_profile(50.0, anti) == Approx(2.0 * pi));
}

TEST_CASE("moving soliton phase rate matches a finite difference in time") {
    const auto s = SolitonSpec::moving(1, -1.0, 0.6);
    CHECK(s.width == Approx(0.8));
    const double dt = 1e-6, x = -0.7;
    auto later = s;
    later.center += s.velocity * dt;
    const double fd = (soliton_profile(x, later) - soliton_profile(x, s)) / dt;
    CHECK(soliton_phase_rate(x, s) == Approx(fd).epsilon(1e-5));
}

TEST_CASE("interface phases agree with the ansatz at the origin") {
    for (int sigma : {1, -1})
        for (double x : {-6.0, -1.3, 0.0, 0.4, 3.0}) {
            const double w = 0.8;
            CHECK(interface_phase_left(x, sigma, w) ==
                  Approx(ansatz_field(x, 0, sigma, w, Side::Left, 0.0)).margin(1e-12));
            CHECK(interface_phase_right(x, sigma, w) ==
                  Approx(ansatz_field(0, x, sigma, w, Side::Right, 0.0)).margin(1e-12));
        }
}

TEST_CASE("interface slope is the derivative of the left interface phase") {
    const double w = 0.8, h = 1e-6;
    for (double x : {-2.0, -0.3, 0.0, 1.1}) {
        const double fd = (interface_phase_left(x + h, 1, w) - interface_phase_left(x - h, 1, w)) / (2 * h);
        CHECK(interface_slope(x, w) == Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("channel asymptotes of the ansatz") {
    const double w = 0.8;
    // Incoming fluxon far left: phase 2 pi behind it, zero at the interface.
    CHECK(ansatz_field(-30, 0, 1, w, Side::Left, -60) == Approx(2 * pi));
    CHECK(interface_phase_left(-30, 1, w) == Approx(0).margin(1e-9));
    CHECK(interface_phase_right(0, 1, w) == Approx(0).margin(1e-12));
    // Transmitted: interface at 2 pi on both sides, so phi_B returns to zero.
    CHECK(interface_phase_left(0, 1, w) - interface_phase_right(-30, 1, w) == Approx(0).margin(1e-9));
}

TEST_CASE("negative polarity mirrors the positive one") {
    const double w = 0.8;
    for (double x : {-3.0, -0.5, -0.01})
        for (double xr : {-1.0, 0.0, 0.7}) {
            CHECK(ansatz_field(-1.2, xr, -1, w, Side::Left, x) ==
                  Approx(-ansatz_field(-1.2, xr, 1, w, Side::Left, x)).margin(1e-12));
            CHECK(ansatz_field(-1.2, xr, -1, w, Side::Right, -x) ==
                  Approx(-ansatz_field(-1.2, xr, 1, w, Side::Right, -x)).margin(1e-12));
        }
}

TEST_CASE("site positions are half-cell offset") {
    CHECK(site_position(Side::Left, 0, 0.5) == Approx(-0.25));
    CHECK(site_position(Side::Right, 3, 0.5) == Approx(1.75));
}

TEST_CASE("fit round trip recovers the coordinates") {
    const double a = 1.0 / std::sqrt(7.0), w = 0.8;
    const int n = 80;
    for (int sigma : {1, -1})
        for (auto [xl, xr] : {std::pair{-4.3, 0.0}, {-0.62, -0.21}, {0.0, -3.7}, {-1.9, 1.4},
                              {0.35, 2.2}}) {
            const auto left = sample_side(xl, xr, sigma, w, Side::Left, a, n);
            const auto right = sample_side(xl, xr, sigma, w, Side::Right, a, n);
            const auto fit = fit_cc(left, right, a, sigma, w);
            CHECK(std::abs(fit.xl - xl) < 0.05);
            CHECK(std::abs(fit.xr - xr) < 0.05);
            CHECK(fit.residual < 1e-3);
            CHECK_FALSE(fit.low_confidence);
        }
}

TEST_CASE("fit flags a field that is not fluxon-like") {
    const double a = 1.0 / std::sqrt(7.0);
    std::vector<double> left(60), right(60);
    for (int k = 0; k < 60; ++k) {
        left[k] = 3.0 * std::sin(0.9 * k);
        right[k] = -2.0 * std::cos(0.7 * k);
    }
    CHECK(fit_cc(left, right, a, 1, 0.8).low_confidence);
}

TEST_CASE("fitted velocity and energy retention") {
    std::vector<double> t, x;
    for (int i = 0; i < 200; ++i) {
        t.push_back(0.1 * i);
        x.push_back(-2.0 - 0.5 * t.back());
    }
    CHECK(fitted_velocity(t, x) == Approx(-0.5));
    // Retention is gamma_in / gamma_out for the relativistic fluxon energy.
    const double expected = (1.0 / std::sqrt(1 - 0.36)) / (1.0 / std::sqrt(1 - 0.25));
    CHECK(energy_retention(t, x, 0.6, 0.0) == Approx(1.0 / expected).epsilon(1e-9));
}
