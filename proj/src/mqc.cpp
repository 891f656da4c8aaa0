#include "fluxread/mqc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

#include "fluxread/errors.hpp"

namespace fluxread::mqc {

using quantum::cplx;

MQCState initial_state(const cc::CCModel& m, int n, double x0, double v,
                       const quantum::PhaseGrid& grid) {
    if (x0 > -5.0) throw ValidationError(fmt::format("MQC start x0 = {} must be at or below -5", x0));
    if (!(std::abs(v) < 1.0)) throw ValidationError("|v| must be below 1");
    if (n < 0) throw ValidationError("state index must be non-negative");
    const auto sol = quantum::fluxonium_states(m.params, n + 1, grid);
    MQCState s;
    s.xl = x0;
    s.vxl = v;
    s.psi = quantum::to_wavefunction(sol.states[n]);
    return s;
}

namespace {

using Vec4 = std::array<double, 4>;

struct Propagator {
    const cc::CCModel& model;
    const MQCOptions& opt;
    quantum::FluxoniumModel qubit;
    double h;

    Propagator(const cc::CCModel& m, const MQCOptions& o)
        : model(m), opt(o), qubit(quantum::FluxoniumModel::from(m.params)), h(o.grid.spacing()) {}

    Vec4 derivative(const Vec4& y, double mean_q) const {
        const auto f = cc::fluxon_terms(model, y[0], y[1]);
        const double pull = model.params.el_q() * (mean_q - model.params.phi_ext);
        const auto [al, ar] = cc::fluxon_accelerations(model, y[0], y[1], y[2], y[3],
                                                       -f.du_dxl + pull * f.dphib_dxl,
                                                       -f.du_dxr + pull * f.dphib_dxr);
        return {y[2], y[3], al, ar};
    }

    void classical_step(MQCState& s, double dt, double mean_q) const {
        Vec4 y{s.xl, s.xr, s.vxl, s.vxr}, tmp;
        const auto k1 = derivative(y, mean_q);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        const auto k2 = derivative(tmp, mean_q);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        const auto k3 = derivative(tmp, mean_q);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + dt * k3[i];
        const auto k4 = derivative(tmp, mean_q);
        for (int i = 0; i < 4; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        s.xl = y[0], s.xr = y[1], s.vxl = y[2], s.vxr = y[3];
    }

    double bias(const MQCState& s) const { return cc::fluxon_terms(model, s.xl, s.xr).phi_b; }

    double classical_energy(const MQCState& s) const {
        const auto mm = cc::masses(model, s.xl, s.xr);
        const auto f = cc::fluxon_terms(model, s.xl, s.xr);
        return 0.5 * mm.m_ll * s.vxl * s.vxl + 0.5 * mm.m_rr * s.vxr * s.vxr +
               mm.m_lr * s.vxl * s.vxr + f.u_fl;
    }

    // <H_q + V_int>; the grid Hamiltonian carries an extra E_L phi_B^2 / 2.
    double qubit_energy(const std::vector<cplx>& psi, const quantum::Tridiagonal& op,
                        double phi_b) const {
        const int n = static_cast<int>(psi.size());
        double e = 0, nn = 0;
        for (int i = 0; i < n; ++i) {
            cplx hp = op.diag[i] * psi[i];
            if (i > 0) hp += op.off[i - 1] * psi[i - 1];
            if (i + 1 < n) hp += op.off[i] * psi[i + 1];
            e += std::real(std::conj(psi[i]) * hp);
            nn += std::norm(psi[i]);
        }
        return e / nn - 0.5 * model.params.el_q() * phi_b * phi_b;
    }

    double sq_norm(const std::vector<cplx>& psi) const {
        double s = 0;
        for (const auto& a : psi) s += std::norm(a);
        return s * h;
    }
};

void finish(MQCReport& rep, const MQCState& s) {
    rep.channel = cc::cc_channel(s.xl, s.xr);
    if (rep.samples.empty()) return;
    const auto& last = rep.samples.back();
    rep.final_infidelity = last.infidelity;
    const auto& w = last.weights;
    rep.dominant_level = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin());
    double tot = 0, acc = 0;
    for (size_t m = 0; m < w.size(); ++m) tot += w[m], acc += m * w[m];
    rep.mean_level = tot > 0 ? acc / tot : 0;
}

void check_options(const MQCOptions& opt, int grid_n) {
    if (!(opt.dt > 0 && opt.dt <= 0.02)) throw ValidationError("MQC dt must lie in (0, 0.02]");
    if (!(opt.t_end > 0)) throw ValidationError("t_end must be positive");
    if (opt.initial_state < 0 || opt.initial_state >= opt.tracked)
        throw ValidationError("initial_state must be below the tracked level count");
    if (opt.tracked > grid_n / 4) throw ValidationError("too many tracked levels for the grid");
}

}  // namespace

MQCReport run_mqc(const cc::CCModel& m, MQCState s, const MQCOptions& opt) {
    check_options(opt, opt.grid.n);
    if (static_cast<int>(s.psi.amp.size()) != opt.grid.n)
        throw ValidationError("wavefunction size does not match the grid");
    Propagator prop(m, opt);
    MQCReport rep;
    const double norm0 = prop.sq_norm(s.psi.amp);
    if (std::abs(norm0 - 1.0) > 1e-6) throw ValidationError("initial wavefunction is not normalised");

    std::vector<std::vector<double>> prev_basis;
    double e0 = 0, scale = 1;
    auto record = [&]() {
        const double b = prop.bias(s);
        const auto op = quantum::build_hamiltonian(opt.grid, prop.qubit, b);
        auto sol = quantum::eigensolve(op, opt.grid, opt.tracked);
        if (!prev_basis.empty())
            for (int j = 0; j < opt.tracked; ++j) {
                double ov = 0;
                for (int i = 0; i < opt.grid.n; ++i) ov += sol.states[j][i] * prev_basis[j][i];
                if (ov < 0)
                    for (auto& v : sol.states[j]) v = -v;
            }
        MQCSample smp;
        smp.t = s.t;
        smp.xl = s.xl;
        smp.xr = s.xr;
        smp.phi_b = b;
        smp.mean_phi_q = quantum::mean_phase(s.psi.amp, opt.grid);
        smp.energy = prop.classical_energy(s) + prop.qubit_energy(s.psi.amp, op, b);
        if (!std::isfinite(smp.energy))
            throw NumericalError(fmt::format("non-finite MQC state at t = {:.4f}", s.t));
        for (int j = 0; j < opt.tracked; ++j) {
            cplx c = 0;
            for (int i = 0; i < opt.grid.n; ++i) c += sol.states[j][i] * s.psi.amp[i];
            smp.weights.push_back(std::norm(c * prop.h));
            if (j != opt.initial_state) smp.infidelity += smp.weights.back();
        }
        if (rep.samples.empty()) {
            e0 = smp.energy;
            scale = std::max(std::abs(e0), 1.0);
        }
        rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(smp.energy - e0) / scale);
        rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(prop.sq_norm(s.psi.amp) - norm0));
        if (rep.max_norm_drift > 1e-6)
            throw NumericalError(fmt::format("MQC norm drift {:.3e} at t = {:.3f}", rep.max_norm_drift, s.t));
        rep.peak_infidelity = std::max(rep.peak_infidelity, smp.infidelity);
        rep.samples.push_back(std::move(smp));
        prev_basis = std::move(sol.states);
    };

    const long steps = std::lround(opt.t_end / opt.dt);
    const long stride = std::max(1L, std::lround(opt.sample_every / opt.dt));
    record();
    for (long step = 1; step <= steps; ++step) {
        const double b_before = prop.bias(s);
        prop.classical_step(s, 0.5 * opt.dt, quantum::mean_phase(s.psi.amp, opt.grid));
        const double b = prop.bias(s);
        const int sub = std::max(
            1, static_cast<int>(std::ceil(2.0 * std::abs(b - b_before) / opt.max_bias_step)));
        const auto op = quantum::build_hamiltonian(opt.grid, prop.qubit, b);
        for (int k = 0; k < sub; ++k)
            quantum::crank_nicolson_step(s.psi.amp, op, opt.dt / sub, prop.qubit.hbar_omega);
        prop.classical_step(s, 0.5 * opt.dt, quantum::mean_phase(s.psi.amp, opt.grid));
        s.t = step * opt.dt;
        s.psi.t = s.t;
        if (step % stride == 0) record();
    }
    finish(rep, s);
    return rep;
}

MQCReport run_adiabatic(const cc::CCModel& m, MQCState s, const MQCOptions& opt) {
    check_options(opt, opt.grid.n);
    Propagator prop(m, opt);
    MQCReport rep;
    const int levels = std::max(opt.tracked, opt.initial_state + 4);

    // Current level as a real vector, tracked by overlap.
    auto sol0 = quantum::eigensolve(quantum::build_hamiltonian(opt.grid, prop.qubit, prop.bias(s)),
                                    opt.grid, levels);
    std::vector<double> level = sol0.states[opt.initial_state];
    double level_energy = sol0.energies[opt.initial_state];
    double mean_q = sol0.mean_phase[opt.initial_state];

    auto follow = [&]() {
        const double b = prop.bias(s);
        const auto sol =
            quantum::eigensolve(quantum::build_hamiltonian(opt.grid, prop.qubit, b), opt.grid, levels);
        int best = 0;
        double best_ov = -1, best_signed = 0;
        for (int j = 0; j < levels; ++j) {
            double ov = 0;
            for (int i = 0; i < opt.grid.n; ++i) ov += sol.states[j][i] * level[i];
            ov *= prop.h;
            if (std::abs(ov) > best_ov) best_ov = std::abs(ov), best = j, best_signed = ov;
        }
        rep.min_tracking_overlap = std::min(rep.min_tracking_overlap, best_ov);
        if (best_ov < tracking_overlap_floor) rep.tracking_ambiguous = true;
        level = sol.states[best];
        if (best_signed < 0)
            for (auto& v : level) v = -v;
        level_energy = sol.energies[best];
        mean_q = sol.mean_phase[best];
        return std::pair{b, sol};
    };

    double e0 = 0, scale = 1;
    auto record = [&](const quantum::EigenSolution& sol, double b) {
        MQCSample smp;
        smp.t = s.t;
        smp.xl = s.xl;
        smp.xr = s.xr;
        smp.phi_b = b;
        smp.mean_phi_q = mean_q;
        smp.energy = prop.classical_energy(s) + level_energy - 0.5 * m.params.el_q() * b * b;
        if (!std::isfinite(smp.energy))
            throw NumericalError(fmt::format("non-finite adiabatic state at t = {:.4f}", s.t));
        for (int j = 0; j < opt.tracked; ++j) {
            double c = 0;
            for (int i = 0; i < opt.grid.n; ++i) c += sol.states[j][i] * level[i];
            c *= prop.h;
            smp.weights.push_back(c * c);
            if (j != opt.initial_state) smp.infidelity += c * c;
        }
        if (rep.samples.empty()) {
            e0 = smp.energy;
            scale = std::max(std::abs(e0), 1.0);
        }
        rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(smp.energy - e0) / scale);
        rep.peak_infidelity = std::max(rep.peak_infidelity, smp.infidelity);
        rep.samples.push_back(std::move(smp));
    };

    // Reference basis for the weights is the initial isolated spectrum's ordering.
    record(sol0, prop.bias(s));
    const long steps = std::lround(opt.t_end / opt.dt);
    const long stride = std::max(1L, std::lround(opt.sample_every / opt.dt));
    for (long step = 1; step <= steps; ++step) {
        prop.classical_step(s, 0.5 * opt.dt, mean_q);
        auto [b, sol] = follow();
        prop.classical_step(s, 0.5 * opt.dt, mean_q);
        s.t = step * opt.dt;
        if (step % stride == 0) {
            auto [b2, sol2] = follow();
            record(sol2, b2);
        }
        (void)b;
    }
    s.psi = quantum::to_wavefunction(level);
    finish(rep, s);
    return rep;
}

}  // namespace fluxread::mqc
