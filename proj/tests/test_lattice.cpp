#include <catch_amalgamated.hpp>
#include <cmath>

#include "fluxread/errors.hpp"
#include "fluxread/lattice.hpp"
#include "fluxread/quantum1d.hpp"
#include "fluxread/soliton.hpp"

using namespace fluxread;
using namespace fluxread::lattice;
using Catch::Approx;

namespace {

CircuitParams unbiased() {
    auto p = preset_case_a();
    p.phi_ext = 0;
    return p;
}

double ground_phase(const CircuitParams& p, int n) {
    return quantum::fluxonium_states(p, n + 1).mean_phase[n];
}

Trajectory short_run(const CircuitParams& p, double phi_q0, double t_end = 40.0, double dt = 0.005) {
    RunOptions opt;
    opt.t_end = t_end;
    opt.dt = dt;
    return run(init_state(p, 0.6, -10.0, phi_q0), p, opt);
}

}  // namespace

TEST_CASE("vacuum is an equilibrium with zero energy") {
    const auto p = unbiased();
    auto s = init_state(p, 0.6, -10.0, 0.0);
    std::fill(s.phi_left.begin(), s.phi_left.end(), 0.0);
    std::fill(s.phi_right.begin(), s.phi_right.end(), 0.0);
    std::fill(s.dphi_left.begin(), s.dphi_left.end(), 0.0);
    std::fill(s.dphi_right.begin(), s.dphi_right.end(), 0.0);
    const auto acc = eom_rhs(s, p);
    for (double a : acc.left) CHECK(a == Approx(0).margin(1e-14));
    for (double a : acc.right) CHECK(a == Approx(0).margin(1e-14));
    CHECK(acc.q == Approx(0).margin(1e-14));
    CHECK(total_energy(s, p) == Approx(0).margin(1e-14));
}

TEST_CASE("linearised bulk response of a single displaced junction") {
    const auto p = unbiased();
    const double d = p.discreteness, eps = 1e-7;
    auto s = init_state(p, 0.6, -10.0, 0.0);
    for (auto* v : {&s.phi_left, &s.phi_right, &s.dphi_left, &s.dphi_right})
        std::fill(v->begin(), v->end(), 0.0);
    s.phi_left[40] = eps;
    const auto acc = eom_rhs(s, p);
    CHECK(acc.left[40] == Approx(-(1.0 + 2.0 / (d * d)) * eps).epsilon(1e-6));
    CHECK(acc.left[39] == Approx(eps / (d * d)).epsilon(1e-6));
    CHECK(acc.left[41] == Approx(eps / (d * d)).epsilon(1e-6));
}

TEST_CASE("initial fluxon carries its relativistic energy") {
    const auto p = unbiased();
    auto rest = init_state(p, 0.0, -20.0, 0.0);
    CHECK(total_energy(rest, p) == Approx(8.0).epsilon(0.01));
    auto moving = init_state(p, 0.6, -20.0, 0.0);
    CHECK(total_energy(moving, p) == Approx(10.0).epsilon(0.01));
}

TEST_CASE("initialisation validates its inputs") {
    const auto p = preset_case_a();
    CHECK_THROWS_AS(init_state(p, 0.6, -1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(init_state(p, 1.2, -10.0, 0.0), ValidationError);
    CHECK_THROWS_AS(init_state(p, 0.6, -80.0, 0.0), ValidationError);
}

TEST_CASE("energy conservation and second-order drift") {
    const auto p = preset_case_a();
    const double q0 = ground_phase(p, 0);
    const auto coarse = short_run(p, q0, 30.0, 0.01);
    const auto fine = short_run(p, q0, 30.0, 0.005);
    CHECK(fine.max_energy_drift < 1e-4);
    CHECK(coarse.max_energy_drift / fine.max_energy_drift > 2.5);
}

TEST_CASE("ballistic propagation in the bulk keeps its velocity") {
    const auto p = unbiased();
    RunOptions opt;
    opt.t_end = 25.0;
    opt.snapshot_every = 1.0;
    const auto traj = run(init_state(p, 0.6, -30.0, 0.0), p, opt);
    std::vector<double> t, x;
    for (const auto& s : traj.snapshots) {
        const auto fit = fit_cc(s.phi_left, s.phi_right, p.discreteness, 1, 0.8, 40.0);
        t.push_back(s.t);
        x.push_back(fit.xl);
    }
    REQUIRE(t.size() > 10);
    CHECK(fitted_velocity(t, x) == Approx(0.6).epsilon(0.02));
    CHECK(energy_retention(t, x, 0.6, 0.0, 10.0, 35.0) == Approx(1.0).margin(0.02));
}

TEST_CASE("polarity symmetry mirrors the trajectory") {
    auto p = preset_case_a();
    const double q0 = ground_phase(p, 0);
    const auto plus = short_run(p, q0);
    auto m = p;
    m.sigma = -1;
    m.phi_ext = -p.phi_ext;
    const auto minus = short_run(m, -q0);
    REQUIRE(plus.samples.size() == minus.samples.size());
    for (size_t i = 0; i < plus.samples.size(); ++i) {
        CHECK(minus.samples[i].phi_b == Approx(-plus.samples[i].phi_b).margin(1e-9));
        CHECK(minus.samples[i].phi_q == Approx(-plus.samples[i].phi_q).margin(1e-9));
        CHECK(minus.samples[i].xl_fit == Approx(plus.samples[i].xl_fit).margin(1e-6));
    }
    CHECK(classify_outcome(minus, m).channel == classify_outcome(plus, p).channel);
}

TEST_CASE("flux-quantum symmetry maps trajectories onto trajectories") {
    auto p = preset_case_b();
    const double q0 = ground_phase(p, 1);
    const auto base = short_run(p, q0);
    auto m = p;
    m.sigma = -1;
    m.phi_ext = two_pi - p.phi_ext;
    const auto mapped = short_run(m, two_pi - q0);
    for (size_t i = 0; i < base.samples.size(); ++i) {
        CHECK(mapped.samples[i].phi_b == Approx(-base.samples[i].phi_b).margin(1e-8));
        CHECK(mapped.samples[i].phi_q == Approx(two_pi - base.samples[i].phi_q).margin(1e-8));
    }
}

TEST_CASE("bounce detection on synthetic traces") {
    std::vector<double> t, sig;
    for (int i = 0; i < 400; ++i) {
        const double x = 0.1 * i;
        t.push_back(x);
        sig.push_back(0.6 * pi * std::exp(-std::pow(x - 10, 2)) +
                      0.7 * pi * std::exp(-std::pow(x - 20, 2)) +
                      0.05 * pi * std::exp(-std::pow(x - 30, 2)));
    }
    CHECK(count_bounces(t, sig) == 2);
    CHECK(bounce_peaks(sig).size() == 2);
    std::vector<double> flat(100, 0.02);
    CHECK(count_bounces(std::vector<double>(100, 0.0), flat) == 0);
}

TEST_CASE("channel names") {
    CHECK(to_string(Channel::TransmittedFluxon) == "TransmittedFluxon");
    CHECK(short_code(Channel::ReflectedFluxon) == "R");
    CHECK(short_code(Channel::Trapped) == "x");
}
