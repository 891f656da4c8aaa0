#include "fluxread/params.hpp"

#include <fmt/format.h>

#include "fluxread/errors.hpp"
#include "fluxread/quantum1d.hpp"

namespace fluxread {

void validate(const CircuitParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw ValidationError(fmt::format("{} must be positive and finite (got {})", name, v));
    };
    positive(p.ic_term, "ic_term");
    positive(p.cj_term, "cj_term");
    positive(p.ic_rail, "ic_rail");
    positive(p.cj_rail, "cj_rail");
    positive(p.ic_q, "ic_q");
    positive(p.cj_q, "cj_q");
    positive(p.lq, "lq");
    if (!(p.discreteness > 0 && p.discreteness < 1))
        throw ValidationError(fmt::format("discreteness must lie in (0, 1) (got {})", p.discreteness));
    if (!(p.beta2 > 0 && p.beta2 < 8 * pi))
        throw ValidationError(fmt::format("beta2 must lie in (0, 8 pi) (got {})", p.beta2));
    if (p.sigma != 1 && p.sigma != -1)
        throw ValidationError(fmt::format("sigma must be +1 or -1 (got {})", p.sigma));
    if (p.n_cells < 16) throw ValidationError(fmt::format("n_cells too small ({})", p.n_cells));
    if (!std::isfinite(p.phi_ext)) throw ValidationError("phi_ext must be finite");
}

CircuitParams preset_case_a_nominal() { return CircuitParams{}; }

CircuitParams preset_case_a() {
    CircuitParams p;
    p.ic_term = 1.3183;
    p.cj_term = 2.2905;
    p.ic_rail = 5.8795;
    p.cj_rail = 11.0;
    p.ic_q = 0.9833;
    p.cj_q = 0.7377;
    p.lq = 232.53;
    p.phi_ext = 0.2 * pi;
    return p;
}

CircuitParams preset_case_b_nominal() {
    CircuitParams p;
    p.ic_term = 2.0;
    p.cj_term = 0.75;
    p.ic_rail = 6.7;
    p.cj_rail = 11.5;
    p.ic_q = 6.0;
    p.cj_q = 0.6;
    p.lq = 40.0;
    p.phi_ext = 1.2 * pi;
    return p;
}

CircuitParams preset_case_b() {
    auto p = preset_case_b_nominal();
    p.ic_term = 1.96;
    p.ic_rail = 6.74;
    return p;
}

CircuitParams preset_table_a() {
    auto p = preset_case_a_nominal();
    p.cj_q = 0.743;
    return p;
}

CircuitParams preset_table_b() { return preset_case_b_nominal(); }

double fluxon_width(double v) {
    if (!(std::abs(v) < 1.0))
        throw ValidationError(fmt::format("|v/c| must be below 1 (got {})", v));
    return std::sqrt(1.0 - v * v);
}

DerivedScales derive_scales(const CircuitParams& p, double v) {
    validate(p);
    DerivedScales s;
    s.lambda_over_a = 1.0 / p.discreteness;
    s.w_over_lambda = fluxon_width(v);
    s.mq = p.mass_q();
    s.ej_q = p.ej_q();
    s.ec_q = p.ec_q();
    s.el_q = p.el_q();
    s.omega_ratio_rail = std::sqrt(p.ic_rail / p.cj_rail);
    s.omega_ratio_q = std::sqrt(p.ic_q / p.cj_q);
    s.hbar_omega_over_e0 = p.beta2;
    s.nu_j_interpretation = "nu_J = omega_J / (2 pi); times are reported as omega_J t";
    return s;
}

PhysicalCharacteristics fabricate(const FabricationInputs& in, const CircuitParams& p) {
    validate(p);
    if (!(in.jc > 0) || !(in.cj_area > 0))
        throw ValidationError("jc and cj_area must be positive");
    using namespace si;
    const double freq_ratio2 = p.ic_q / p.cj_q;  // (omega_J^q / omega_J)^2
    const double lj_over_l = 1.0 / (p.discreteness * p.discreteness);
    const double jc = in.jc * 1e-6 / 1e-12;      // A / m^2
    const double cj = in.cj_area * 1e-15 / 1e-12;  // F / m^2
    const double b4 = p.beta2 * p.beta2;

    PhysicalCharacteristics pc;
    double area_m2 = 0;
    if (in.fab_case == FabCase::A) {
        if (in.jcq_ratio && std::abs(*in.jcq_ratio - 1.0) > 1e-9)
            throw ValidationError("case A shares j_c between qubit and LJJ: jcq_ratio must be 1");
        if (freq_ratio2 < 1.0)
            throw ValidationError("case A needs I_c^q C_J / (I_c C_J^q) >= 1 for a non-negative shunt");
        area_m2 = std::sqrt(8 * e * e * e / hbar / (jc * cj * lj_over_l * b4 * freq_ratio2));
        pc.csh_ratio = freq_ratio2 - 1.0;
        pc.jcq_ratio = 1.0;
    } else {
        const double expected = freq_ratio2;
        if (in.jcq_ratio && std::abs(*in.jcq_ratio - expected) > 1e-6 * expected)
            throw ValidationError(fmt::format(
                "case B requires jcq_ratio = (I_c^q/I_c)(C_J/C_J^q) = {} (got {})", expected,
                *in.jcq_ratio));
        if (expected < 1.0) throw ValidationError("case B requires j_c^q / j_c >= 1");
        area_m2 = std::sqrt(8 * e * e * e / hbar / (jc * cj * lj_over_l * b4));
        pc.csh_ratio = 0.0;
        pc.jcq_ratio = expected;
    }
    const double ic = jc * area_m2;
    const double cjt = cj * area_m2 * (1.0 + pc.csh_ratio);
    const double l = cjt * std::pow(p.beta2 * hbar / (4 * e * e), 2);
    const double phi0 = h / (2 * e);
    const double wj = std::sqrt(two_pi * ic / (phi0 * cjt));
    const double ej = ic * phi0 / two_pi;
    const double e0 = ej / p.discreteness;

    pc.area = area_m2 * 1e12;
    pc.ic = ic * 1e6;
    pc.cj = cjt * 1e15;
    pc.l = l * 1e9;
    pc.fj = wj / two_pi * 1e-9;
    pc.e0_h = e0 / h * 1e-9;
    pc.ejq_h = p.ic_q * ej / h * 1e-9;
    pc.ecq_h = e * e / (2 * p.cj_q * cjt) / h * 1e-9;
    pc.elq_h = std::pow(hbar / (2 * e), 2) / (p.lq * l) / h * 1e-9;
    pc.beta2_check = 4 * e * e / hbar * std::sqrt(l / cjt);

    const quantum::PhaseGrid grid;
    auto model = quantum::FluxoniumModel::from(p);
    auto biased = quantum::eigensolve(quantum::build_hamiltonian(grid, model, 0.0), grid, 2);
    pc.f01 = (biased.energies[1] - biased.energies[0]) * pc.e0_h;
    model.phi_ext = pi;
    auto half = quantum::eigensolve(quantum::build_hamiltonian(grid, model, 0.0), grid, 2);
    pc.f01_min = (half.energies[1] - half.energies[0]) * pc.e0_h * 1e3;
    return pc;
}

std::vector<std::string> table_columns() {
    return {"area_um2", "ic_uA",     "csh_ratio", "cj_fF",   "l_nH",    "fj_GHz",  "e0_GHz",
            "jcq_ratio", "ejq_GHz", "ecq_GHz",   "elq_GHz", "f01_GHz", "f01_min_MHz"};
}

std::vector<double> table_row(const PhysicalCharacteristics& pc) {
    return {pc.area,      pc.ic,    pc.csh_ratio, pc.cj,    pc.l,   pc.fj,  pc.e0_h,
            pc.jcq_ratio, pc.ejq_h, pc.ecq_h,     pc.elq_h, pc.f01, pc.f01_min};
}

CoherenceReport coherence_checks(const CircuitParams& p, double v, double xi_over_a,
                                 double l_over_a) {
    if (!(v > 0 && v < 1)) throw ValidationError(fmt::format("v/c must lie in (0, 1) (got {})", v));
    const double d = p.discreteness;
    CoherenceReport r;
    r.k_lambda = 8.0 * v / p.beta2;
    r.de_broglie = two_pi / r.k_lambda;
    r.de_broglie_over_a = r.de_broglie / d;
    r.xi_lower_bound = p.beta2 / (8.0 * v * d);
    r.xi_lower_bound_delay = std::sqrt(p.beta2 * l_over_a / (8.0 * d));
    r.v_max_discreteness = two_pi * p.beta2 / (8.0 * d);
    r.v_max_plasma = std::sqrt(1.0 - std::pow(1.0 + p.beta2 / 8.0, -2.0));
    r.kinetic_energy_e0 = 8.0 / std::sqrt(1.0 - v * v) - 8.0;
    r.kinetic_energy = r.kinetic_energy_e0 / p.beta2;
    r.passes = {
        {"momentum_sharpness", xi_over_a >= much_greater_factor * r.xi_lower_bound},
        {"time_delay_width", xi_over_a >= much_greater_factor * r.xi_lower_bound_delay &&
                                 xi_over_a <= l_over_a},
        {"de_broglie_above_cell", r.de_broglie_over_a > 1.0},
        {"below_discreteness_velocity", v < r.v_max_discreteness},
        {"below_plasma_velocity", v < r.v_max_plasma},
    };
    return r;
}

}  // namespace fluxread
