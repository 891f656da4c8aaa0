#include <catch_amalgamated.hpp>
#include <cmath>

#include "fluxread/errors.hpp"
#include "fluxread/params.hpp"

using namespace fluxread;
using Catch::Approx;

TEST_CASE("presets validate and keep the array discreteness") {
    for (const auto& p : {preset_case_a(), preset_case_b(), preset_case_a_nominal(),
                          preset_case_b_nominal(), preset_table_a(), preset_table_b()}) {
        REQUIRE_NOTHROW(validate(p));
        CHECK(p.discreteness == Approx(1.0 / std::sqrt(7.0)));
        CHECK(p.beta2 == Approx(0.4));
    }
}

TEST_CASE("validation rejects unphysical parameters") {
    auto p = preset_case_a();
    p.lq = -1;
    CHECK_THROWS_AS(validate(p), ValidationError);
    p = preset_case_a();
    p.sigma = 0;
    CHECK_THROWS_AS(validate(p), ValidationError);
    p = preset_case_a();
    p.discreteness = 0;
    CHECK_THROWS_AS(validate(p), ValidationError);
    CHECK_THROWS_AS(fluxon_width(1.0), ValidationError);
}

TEST_CASE("fluxon width contracts relativistically") {
    CHECK(fluxon_width(0.0) == Approx(1.0));
    CHECK(fluxon_width(0.6) == Approx(0.8));
    CHECK(fluxon_width(-0.6) == Approx(0.8));
}

TEST_CASE("fluxonium energies follow from the circuit ratios") {
    const auto p = preset_case_a_nominal();
    const double d = 1.0 / std::sqrt(7.0);
    const auto s = derive_scales(p, 0.6);
    CHECK(s.lambda_over_a == Approx(std::sqrt(7.0)));
    CHECK(s.w_over_lambda == Approx(0.8));
    CHECK(s.ej_q == Approx(0.98 * d));
    CHECK(s.el_q == Approx(1.0 / (233.0 * d)));
    CHECK(s.ec_q == Approx(0.16 / (8.0 * 0.74 * d)));
    CHECK(s.mq == Approx(0.74 * d));
    CHECK(s.hbar_omega_over_e0 == Approx(0.4));
    CHECK(s.omega_ratio_rail == Approx(std::sqrt(5.9 / 11.0)));
}

TEST_CASE("fabrication reproduces the dimensionless inputs") {
    for (auto fc : {FabCase::A, FabCase::B}) {
        const auto p = fc == FabCase::A ? preset_table_a() : preset_table_b();
        FabricationInputs in;
        in.fab_case = fc;
        const auto pc = fabricate(in, p);
        CHECK(pc.beta2_check == Approx(p.beta2).epsilon(1e-9));
        CHECK(pc.ic == Approx(in.jc * pc.area).epsilon(1e-12));
        // L_J / L = 7 with L_J = Phi_0 / (2 pi I_c).
        const double lj_nh = 2.067833848e-15 / (2.0 * pi * pc.ic * 1e-6) * 1e9;
        CHECK(lj_nh / pc.l == Approx(7.0).epsilon(1e-6));
        CHECK(pc.ejq_h / pc.e0_h == Approx(p.ej_q()).epsilon(1e-9));
        CHECK(pc.elq_h / pc.e0_h == Approx(p.el_q()).epsilon(1e-9));
        CHECK(pc.ecq_h / pc.e0_h == Approx(p.ec_q()).epsilon(1e-9));
        CHECK(pc.f01 > 0);
        CHECK(pc.f01_min > 0);
    }
}

TEST_CASE("fabrication validates inputs") {
    FabricationInputs in;
    in.jc = -1;
    CHECK_THROWS_AS(fabricate(in, preset_table_a()), ValidationError);
}

TEST_CASE("table columns and rows line up") {
    FabricationInputs in;
    const auto pc = fabricate(in, preset_table_a());
    CHECK(table_columns().size() == table_row(pc).size());
    CHECK(table_columns().front() == "area_um2");
}

TEST_CASE("coherence constraints against closed forms") {
    const auto p = preset_case_a();
    const auto r = coherence_checks(p, 0.6, 30, 50);
    CHECK(r.k_lambda == Approx(12.0));
    CHECK(r.de_broglie == Approx(pi / 6.0));
    CHECK(r.xi_lower_bound == Approx(0.4 * std::sqrt(7.0) / 4.8));
    CHECK(r.xi_lower_bound_delay == Approx(std::sqrt(0.4 * 50 * std::sqrt(7.0) / 8.0)));
    CHECK(r.v_max_discreteness == Approx(2.0 * pi * 0.4 * std::sqrt(7.0) / 8.0));
    CHECK(r.v_max_plasma == Approx(std::sqrt(1.0 - 1.0 / (1.05 * 1.05))));
    CHECK(r.kinetic_energy_e0 == Approx(2.0));
    CHECK(r.kinetic_energy == Approx(5.0));
    CHECK_THROWS_AS(coherence_checks(p, 1.2, 30, 50), ValidationError);
}
