#include "fluxread/ccmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

#include "fluxread/errors.hpp"
#include "fluxread/soliton.hpp"

namespace fluxread::cc {

CCModel CCModel::from(const CircuitParams& p, double v_in, FluxTerm term) {
    validate(p);
    return {p, fluxon_width(v_in), term};
}

namespace {

// Single-coordinate building blocks and their X derivatives.
struct Parts {
    double u0, du0;  // bare soliton potential
    double m0, dm0;  // bare mass
    double g, dg;    // interface slope (4/W) sech z
    double f1, df1;  // 8 sech^2 tanh^2
    double f2, df2;  // 4 sech tanh (1 - 2 sech^2)
};

Parts parts(double x, double w) {
    const double z = x / w;
    const double s = 1.0 / std::cosh(z), t = std::tanh(z);
    double r, dr;  // 2z / sinh 2z and d/dz
    if (std::abs(z) < 1e-4) {
        r = 1.0 - 2.0 * z * z / 3.0;
        dr = -4.0 * z / 3.0;
    } else if (std::abs(z) > 300.0) {
        r = 0.0;
        dr = 0.0;
    } else {
        r = 2.0 * z / std::sinh(2.0 * z);
        dr = r * (1.0 / z - 2.0 / std::tanh(2.0 * z));
    }
    const double s2 = s * s;
    // 2 W tanh sech^2 (2z + sinh 2z) rewritten as 4 W t (z s^2 + t) to avoid overflow.
    const double f = t * (z * s2 + t);
    const double df = s2 * (z * s2 + t) + t * s2 * (2.0 - 2.0 * z * t);
    Parts p;
    p.u0 = 4.0 / w * (1.0 - r) + 4.0 * w * f;
    p.du0 = (-4.0 / w * dr + 4.0 * w * df) / w;
    p.m0 = 8.0 / w * (1.0 + r);
    p.dm0 = 8.0 / w * dr / w;
    p.g = 4.0 / w * s;
    p.dg = -4.0 / w * s * t / w;
    p.f1 = 8.0 * s2 * t * t;
    p.df1 = 8.0 * (2.0 * s2 * s2 * t - 2.0 * s2 * t * t * t) / w;
    p.f2 = 4.0 * s * t * (1.0 - 2.0 * s2);
    p.df2 = 4.0 * ((s2 * s - s * t * t) * (1.0 - 2.0 * s2) + 4.0 * s2 * s * t * t) / w;
    return p;
}

double flux_shift(const CCModel& m) {
    return m.flux_term == FluxTerm::ShiftedByBias ? m.params.phi_ext : 0.0;
}

}  // namespace

MassMatrix masses(const CCModel& m, double xl, double xr) {
    const auto& p = m.params;
    const double d = p.discreteness;
    const auto l = parts(xl, m.width), r = parts(xr, m.width);
    const double c = (p.cj_term - 1.0 + p.cj_rail) * d;
    return {l.m0 + c * l.g * l.g, r.m0 + c * r.g * r.g, p.cj_rail * d * l.g * r.g};
}

FluxonTerms fluxon_terms(const CCModel& m, double xl, double xr) {
    const auto& p = m.params;
    const double d = p.discreteness;
    const auto l = parts(xl, m.width), r = parts(xr, m.width);
    const double a1 = (p.ic_term - 1.0 + p.ic_rail) * d, a2 = p.ic_rail * d;
    const double el = p.el_q();

    FluxonTerms f;
    f.phi_b = interface_phase_left(xl, p.sigma, m.width) - interface_phase_right(xr, p.sigma, m.width);
    f.dphib_dxl = p.sigma * l.g;
    f.dphib_dxr = p.sigma * r.g;
    const double shifted = f.phi_b + flux_shift(m);
    const double u2 = -l.f1 * r.f1 + l.f2 * r.f2;
    f.u_fl = l.u0 + r.u0 + a1 * (l.f1 + r.f1) + a2 * u2 + el * 0.5 * shifted * shifted;
    f.du_dxl = l.du0 + a1 * l.df1 + a2 * (-l.df1 * r.f1 + l.df2 * r.f2) + el * shifted * f.dphib_dxl;
    f.du_dxr = r.du0 + a1 * r.df1 + a2 * (-l.f1 * r.df1 + l.f2 * r.df2) + el * shifted * f.dphib_dxr;
    return f;
}

CCPotential potential(const CCModel& m, double xl, double xr, double phi_q) {
    const auto& p = m.params;
    const double d = p.discreteness;
    const auto l = parts(xl, m.width), r = parts(xr, m.width);
    CCPotential u;
    u.phi_b = interface_phase_left(xl, p.sigma, m.width) - interface_phase_right(xr, p.sigma, m.width);
    u.u0 = l.u0 + r.u0;
    u.u1 = l.f1 + r.f1;
    u.u2 = -l.f1 * r.f1 + l.f2 * r.f2;
    const double shifted = u.phi_b + flux_shift(m);
    u.u_s = 0.5 * shifted * shifted;
    const double el = p.el_q();
    u.u_fl = u.u0 + (p.ic_term - 1.0 + p.ic_rail) * d * u.u1 + p.ic_rail * d * u.u2 + el * u.u_s;
    const double dq = phi_q - p.phi_ext;
    u.u_q = p.ej_q() * (1.0 - std::cos(phi_q)) + 0.5 * el * dq * dq;
    u.v_int = -el * u.phi_b * dq;
    u.total = u.u_fl + u.u_q + u.v_int;
    return u;
}

Gradient potential_gradient(const CCModel& m, double xl, double xr, double phi_q) {
    const auto& p = m.params;
    const auto f = fluxon_terms(m, xl, xr);
    const double el = p.el_q(), dq = phi_q - p.phi_ext;
    return {f.du_dxl - el * dq * f.dphib_dxl, f.du_dxr - el * dq * f.dphib_dxr,
            p.ej_q() * std::sin(phi_q) + el * dq - el * f.phi_b};
}

std::pair<double, double> fluxon_accelerations(const CCModel& m, double xl, double xr, double vxl,
                                               double vxr, double force_l, double force_r) {
    const auto& p = m.params;
    const double d = p.discreteness;
    const auto l = parts(xl, m.width), r = parts(xr, m.width);
    const double c = (p.cj_term - 1.0 + p.cj_rail) * d;
    const double mll = l.m0 + c * l.g * l.g, mrr = r.m0 + c * r.g * r.g;
    const double mlr = p.cj_rail * d * l.g * r.g;
    const double dmll = l.dm0 + 2.0 * c * l.g * l.dg, dmrr = r.dm0 + 2.0 * c * r.g * r.dg;
    const double dmlr_l = p.cj_rail * d * l.dg * r.g, dmlr_r = p.cj_rail * d * l.g * r.dg;
    const double bl = force_l - 0.5 * dmll * vxl * vxl - dmlr_r * vxr * vxr;
    const double br = force_r - 0.5 * dmrr * vxr * vxr - dmlr_l * vxl * vxl;
    const double det = mll * mrr - mlr * mlr;
    if (!(det > 1e-12 * mll * mrr))
        throw NumericalError(fmt::format(
            "singular CC mass matrix at X_L = {}, X_R = {} (m_LL {}, m_RR {}, m_LR {})", xl, xr, mll,
            mrr, mlr));
    return {(mrr * bl - mlr * br) / det, (mll * br - mlr * bl) / det};
}

CCAccel eom_rhs(const CCModel& m, const CCState& s) {
    const auto g = potential_gradient(m, s.xl, s.xr, s.phi_q);
    const auto [al, ar] = fluxon_accelerations(m, s.xl, s.xr, s.vxl, s.vxr, -g.xl, -g.xr);
    return {al, ar, -g.phi_q / m.params.mass_q()};
}

double energy(const CCModel& m, const CCState& s) {
    const auto mm = masses(m, s.xl, s.xr);
    const double kin = 0.5 * mm.m_ll * s.vxl * s.vxl + 0.5 * mm.m_rr * s.vxr * s.vxr +
                       mm.m_lr * s.vxl * s.vxr + 0.5 * m.params.mass_q() * s.vphi_q * s.vphi_q;
    return kin + potential(m, s.xl, s.xr, s.phi_q).total;
}

CCState initial_state(const CCModel& m, double x0, double v, double phi_q0) {
    if (x0 > -5.0)
        throw ValidationError(fmt::format("CC start x0 = {} must be at or below -5", x0));
    if (!(std::abs(v) < 1.0)) throw ValidationError("|v| must be below 1");
    (void)m;
    CCState s;
    s.xl = x0;
    s.xr = 0;
    s.vxl = v;
    s.phi_q = phi_q0;
    return s;
}

lattice::Channel cc_channel(double xl, double xr) {
    using lattice::Channel;
    constexpr double out = lattice::exit_distance, home = 2.0;
    if (xr < -out && std::abs(xl) < home) return Channel::TransmittedFluxon;
    if (xl < -out && std::abs(xr) < home) return Channel::ReflectedFluxon;
    if (xl > out && std::abs(xr) < home) return Channel::ReflectedAntifluxon;
    if (xr > out && std::abs(xl) < home) return Channel::TransmittedAntifluxon;
    if (std::abs(xl) < out && std::abs(xr) < out) return Channel::Trapped;
    return Channel::Undecided;
}

namespace {

using Vec6 = std::array<double, 6>;

Vec6 pack(const CCState& s) { return {s.xl, s.xr, s.phi_q, s.vxl, s.vxr, s.vphi_q}; }

CCState unpack(const Vec6& y, double t) { return {y[0], y[1], y[2], y[3], y[4], y[5], t}; }

Vec6 derivative(const CCModel& m, const Vec6& y) {
    const auto a = eom_rhs(m, unpack(y, 0));
    return {y[3], y[4], y[5], a.xl, a.xr, a.phi_q};
}

}  // namespace

CCTrajectory run_cc(const CCModel& m, CCState s, const CCRunOptions& opt) {
    if (!(opt.dt > 0 && opt.dt <= 0.01)) throw ValidationError("CC dt must lie in (0, 0.01]");
    if (!(opt.t_end > 0)) throw ValidationError("t_end must be positive");
    CCTrajectory traj;
    const long steps = std::lround(opt.t_end / opt.dt);
    const long stride = std::max(1L, std::lround(opt.sample_every / opt.dt));
    const double e0 = energy(m, s);
    const double scale = std::max(std::abs(e0), 1.0);

    auto record = [&]() {
        CCSample smp{s.t, s.xl, s.xr, s.phi_q, 0, energy(m, s)};
        smp.phi_b = potential(m, s.xl, s.xr, s.phi_q).phi_b;
        if (!std::isfinite(smp.energy))
            throw NumericalError(fmt::format("non-finite CC state at t = {:.4f}", s.t));
        traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(smp.energy - e0) / scale);
        traj.samples.push_back(smp);
    };

    record();
    auto y = pack(s);
    const double h = opt.dt;
    for (long step = 1; step <= steps; ++step) {
        const auto k1 = derivative(m, y);
        Vec6 tmp;
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = derivative(m, tmp);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = derivative(m, tmp);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * k3[i];
        const auto k4 = derivative(m, tmp);
        for (int i = 0; i < 6; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        s = unpack(y, step * h);
        if (step % stride == 0) record();
    }
    traj.final_state = s;
    traj.channel = cc_channel(s.xl, s.xr);
    std::vector<double> t, pb;
    for (const auto& smp : traj.samples) {
        t.push_back(smp.t);
        pb.push_back(smp.phi_b);
        traj.max_phi_b = std::max(traj.max_phi_b, std::abs(smp.phi_b));
    }
    traj.bounce_count = lattice::count_bounces(t, pb);
    return traj;
}

PotentialGrid potential_grid(const CCModel& m, double phi_q, double lo, double hi, int nx, int ny) {
    if (nx < 2 || ny < 2) throw ValidationError("potential grid needs at least 2 points per axis");
    if (!(hi > lo)) throw ValidationError("potential grid bounds must satisfy lo < hi");
    PotentialGrid g;
    g.phi_q = phi_q;
    for (int i = 0; i < nx; ++i) g.x.push_back(lo + (hi - lo) * i / (nx - 1));
    for (int j = 0; j < ny; ++j) g.y.push_back(lo + (hi - lo) * j / (ny - 1));
    g.values.reserve(static_cast<size_t>(nx) * ny);
    for (double xl : g.x)
        for (double xr : g.y) g.values.push_back(potential(m, xl, xr, phi_q).total);
    g.e_init = 8.0 / m.width + potential(m, -1e3, 0.0, phi_q).u_q;
    return g;
}

}  // namespace fluxread::cc
