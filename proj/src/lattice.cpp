#include "fluxread/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "fluxread/errors.hpp"
#include "fluxread/soliton.hpp"

namespace fluxread::lattice {

LatticeState init_state(const CircuitParams& p, double v, double x0, double phi_q0) {
    validate(p);
    if (x0 > -3.0)
        throw ValidationError(fmt::format("x0 = {} is too close to the interface (need <= -3)", x0));
    const double w = fluxon_width(v);
    const int n = p.n_cells;
    if (-x0 + 4.0 * w > (n - 1) * p.discreteness)
        throw ValidationError("initial fluxon does not fit inside the left LJJ");

    LatticeState s;
    s.phi_left.resize(n);
    s.dphi_left.resize(n);
    s.phi_right.assign(n, 0.0);
    s.dphi_right.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double x = site_position(Side::Left, k, p.discreteness);
        s.phi_left[k] = ansatz_field(x0, 0.0, p.sigma, w, Side::Left, x);
        // d/dt of the ansatz for dX_L/dt = v
        s.dphi_left[k] = v * p.sigma * 2.0 / w *
                         (1.0 / std::cosh((x - x0) / w) + 1.0 / std::cosh((x + x0) / w));
    }
    s.phi_q = phi_q0;
    return s;
}

namespace {

struct InterfaceMass {
    double inv_ll, inv_lr;  // symmetric 2x2 inverse
};

InterfaceMass interface_mass(const CircuitParams& p) {
    const double a = p.cj_term + p.cj_rail, b = -p.cj_rail;
    const double det = a * a - b * b;
    return {a / det, -b / det};
}

}  // namespace

void eom_rhs(const LatticeState& s, const CircuitParams& p, Accelerations& out) {
    const int n = static_cast<int>(s.phi_left.size());
    const double k2 = 1.0 / (p.discreteness * p.discreteness);
    const double couple = k2 / p.lq;  // E_L^q / E_J
    out.left.resize(n);
    out.right.resize(n);

    auto bulk = [&](const std::vector<double>& phi, std::vector<double>& acc) {
        for (int k = 1; k < n - 1; ++k)
            acc[k] = (phi[k + 1] - 2.0 * phi[k] + phi[k - 1]) * k2 - std::sin(phi[k]);
        acc[n - 1] = (phi[n - 2] - phi[n - 1]) * k2 - std::sin(phi[n - 1]);
    };
    bulk(s.phi_left, out.left);
    bulk(s.phi_right, out.right);

    const double pl = s.phi_left[0], pr = s.phi_right[0];
    const double pb = pl - pr;
    const double torque = couple * (s.phi_q - p.phi_ext - pb);
    const double rail = p.ic_rail * std::sin(pb);
    const double fl = (s.phi_left[1] - pl) * k2 - p.ic_term * std::sin(pl) - rail + torque;
    const double fr = (s.phi_right[1] - pr) * k2 - p.ic_term * std::sin(pr) + rail - torque;
    const auto m = interface_mass(p);
    out.left[0] = m.inv_ll * fl + m.inv_lr * fr;
    out.right[0] = m.inv_lr * fl + m.inv_ll * fr;
    out.q = (-p.ic_q * std::sin(s.phi_q) - torque) / p.cj_q;
}

Accelerations eom_rhs(const LatticeState& s, const CircuitParams& p) {
    Accelerations a;
    eom_rhs(s, p, a);
    return a;
}

double total_energy(const LatticeState& s, const CircuitParams& p) {
    const int n = static_cast<int>(s.phi_left.size());
    const double k2 = 1.0 / (p.discreteness * p.discreteness);
    double e = 0;
    auto side = [&](const std::vector<double>& phi, const std::vector<double>& dphi) {
        for (int k = 1; k < n; ++k) {
            const double dk = phi[k] - phi[k - 1];
            e += 0.5 * dphi[k] * dphi[k] + (1.0 - std::cos(phi[k])) + 0.5 * dk * dk * k2;
        }
    };
    side(s.phi_left, s.dphi_left);
    side(s.phi_right, s.dphi_right);

    const double vl = s.dphi_left[0], vr = s.dphi_right[0];
    const double pb = s.phi_b();
    const double stretch = s.phi_q - p.phi_ext - pb;
    e += 0.5 * p.cj_term * (vl * vl + vr * vr) + 0.5 * p.cj_rail * (vl - vr) * (vl - vr);
    e += p.ic_term * (2.0 - std::cos(s.phi_left[0]) - std::cos(s.phi_right[0]));
    e += p.ic_rail * (1.0 - std::cos(pb));
    e += 0.5 * p.cj_q * s.dphi_q * s.dphi_q + p.ic_q * (1.0 - std::cos(s.phi_q));
    e += 0.5 * k2 / p.lq * stretch * stretch;
    return e * p.discreteness;  // E_J -> E_0
}

Trajectory run(LatticeState s, const CircuitParams& p, const RunOptions& opt) {
    validate(p);
    if (!(opt.dt > 0 && opt.dt <= 0.02))
        throw ValidationError(fmt::format("dt must lie in (0, 0.02] (got {})", opt.dt));
    if (!(opt.t_end > 0)) throw ValidationError("t_end must be positive");
    const int n = static_cast<int>(s.phi_left.size());
    if (n != p.n_cells || static_cast<int>(s.phi_right.size()) != n)
        throw ValidationError("state size does not match n_cells");

    Trajectory traj;
    traj.width = fluxon_width(opt.v_in);
    traj.v_in = opt.v_in;
    const long steps = std::lround(opt.t_end / opt.dt);
    const long stride = std::max(1L, std::lround(opt.sample_every / opt.dt));
    const long snap_stride =
        opt.snapshot_every > 0 ? std::max(1L, std::lround(opt.snapshot_every / opt.dt)) : 0;
    const double e0 = total_energy(s, p);
    const double e_scale = std::max(std::abs(e0), 1.0);

    auto record = [&]() {
        Sample smp;
        smp.t = s.t;
        smp.phi_b = s.phi_b();
        smp.phi_q = s.phi_q;
        smp.energy = total_energy(s, p);
        if (!std::isfinite(smp.energy) || !std::isfinite(smp.phi_b))
            throw NumericalError(fmt::format("non-finite lattice state at t = {:.4f} (phi_b {}, phi_q {})",
                                             s.t, smp.phi_b, s.phi_q));
        const auto fit =
            fit_cc(s.phi_left, s.phi_right, p.discreteness, p.sigma, traj.width, opt.fit_domain);
        smp.xl_fit = fit.xl;
        smp.xr_fit = fit.xr;
        smp.fit_residual = fit.residual;
        traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(smp.energy - e0) / e_scale);
        traj.samples.push_back(smp);
    };

    Accelerations acc;
    eom_rhs(s, p, acc);
    record();
    if (snap_stride) traj.snapshots.push_back(s);
    const double h = opt.dt, hh = 0.5 * opt.dt;
    for (long step = 1; step <= steps; ++step) {
        for (int k = 0; k < n; ++k) {
            s.dphi_left[k] += hh * acc.left[k];
            s.dphi_right[k] += hh * acc.right[k];
            s.phi_left[k] += h * s.dphi_left[k];
            s.phi_right[k] += h * s.dphi_right[k];
        }
        s.dphi_q += hh * acc.q;
        s.phi_q += h * s.dphi_q;
        eom_rhs(s, p, acc);
        for (int k = 0; k < n; ++k) {
            s.dphi_left[k] += hh * acc.left[k];
            s.dphi_right[k] += hh * acc.right[k];
        }
        s.dphi_q += hh * acc.q;
        s.t = step * h;
        if (step % stride == 0) record();
        if (snap_stride && step % snap_stride == 0) traj.snapshots.push_back(s);
    }
    traj.final_state = std::move(s);
    return traj;
}

std::string to_string(Channel c) {
    switch (c) {
        case Channel::TransmittedFluxon: return "TransmittedFluxon";
        case Channel::ReflectedFluxon: return "ReflectedFluxon";
        case Channel::TransmittedAntifluxon: return "TransmittedAntifluxon";
        case Channel::ReflectedAntifluxon: return "ReflectedAntifluxon";
        case Channel::Trapped: return "Trapped";
        case Channel::Undecided: return "Undecided";
    }
    return "Undecided";
}

std::string short_code(Channel c) {
    switch (c) {
        case Channel::TransmittedFluxon: return "T";
        case Channel::ReflectedFluxon: return "R";
        case Channel::TransmittedAntifluxon: return "t";
        case Channel::ReflectedAntifluxon: return "r";
        case Channel::Trapped: return "x";
        case Channel::Undecided: return "?";
    }
    return "?";
}

std::vector<size_t> bounce_peaks(const std::vector<double>& phi_b, double threshold) {
    const size_t n = phi_b.size();
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = std::abs(phi_b[i]);
    std::vector<size_t> peaks;
    for (size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] <= threshold) continue;
        double left_min = y[i];
        for (size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) break;
            left_min = std::min(left_min, y[j]);
        }
        double right_min = y[i];
        for (size_t j = i + 1; j < n; ++j) {
            if (y[j] > y[i]) break;
            right_min = std::min(right_min, y[j]);
        }
        if (y[i] - std::max(left_min, right_min) >= threshold) peaks.push_back(i);
    }
    return peaks;
}

int count_bounces(const std::vector<double>& t, const std::vector<double>& phi_b, double threshold) {
    (void)t;
    return static_cast<int>(bounce_peaks(phi_b, threshold).size());
}

ScatterOutcome classify_outcome(const Trajectory& traj, const CircuitParams& p,
                                std::optional<double> fj_ghz) {
    if (traj.samples.size() < 3) throw ValidationError("trajectory too short to classify");
    ScatterOutcome out;
    std::vector<double> t, pb, xl, xr;
    for (const auto& s : traj.samples) {
        t.push_back(s.t);
        pb.push_back(s.phi_b);
        xl.push_back(s.xl_fit);
        xr.push_back(s.xr_fit);
    }
    size_t imax = 0, onset = pb.size();
    double active = 0;
    for (size_t i = 0; i < pb.size(); ++i) {
        if (std::abs(pb[i]) > std::abs(pb[imax])) imax = i;
        if (std::abs(pb[i]) > activity_threshold) {
            if (i > 0) active += t[i] - t[i - 1];
            onset = std::min(onset, i);
        }
    }
    out.max_phi_b = std::abs(pb[imax]);
    out.t_max_phi_b = t[imax];
    const auto peaks = bounce_peaks(pb);
    out.excursion_peaks = static_cast<int>(peaks.size());
    size_t last_dominant = imax;
    for (size_t i : peaks)
        if (std::abs(pb[i]) >= dominant_fraction * out.max_phi_b) {
            ++out.bounce_count;
            last_dominant = std::max(last_dominant, i);
        }
    out.time_above_activity = active / two_pi;
    if (onset < pb.size()) {
        size_t end = last_dominant;
        while (end + 1 < pb.size() && std::abs(pb[end]) > activity_threshold) ++end;
        out.measurement_time = (t[end] - t[onset]) / two_pi;
    }
    if (fj_ghz) out.measurement_time_ns = out.measurement_time / *fj_ghz;

    // Incoming velocity from the same fitted-track estimator as the outgoing one.
    {
        std::vector<double> ti, xi;
        for (size_t i = 0; i < std::min(onset, pb.size()); ++i)
            if (std::abs(xl[i]) >= 3.0 && std::abs(xl[i]) <= 7.5) ti.push_back(t[i]), xi.push_back(xl[i]);
        out.v_in_fitted = ti.size() >= 5 ? std::abs(fitted_velocity(ti, xi)) : traj.v_in;
    }

    const auto& fs = traj.final_state;
    const int n = static_cast<int>(fs.phi_left.size());
    const int lo = (3 * n) / 4, hi = n - 5;
    double far_l = 0, far_r = 0;
    for (int k = lo; k < hi; ++k) far_l += fs.phi_left[k], far_r += fs.phi_right[k];
    far_l /= (hi - lo);
    far_r /= (hi - lo);
    out.winding_left = p.sigma * (far_l - fs.phi_left[0]) / two_pi;
    out.winding_right = p.sigma * (fs.phi_right[0] - far_r) / two_pi;

    auto near = [](double q, double target) { return std::abs(q - target) < 0.3; };
    const bool interacted = out.max_phi_b > activity_threshold;
    const double fl = xl.back(), fr = xr.back();
    const double ql = out.winding_left, qr = out.winding_right;
    if (interacted && near(ql, 0) && near(qr, 1) && fr <= -exit_distance)
        out.channel = Channel::TransmittedFluxon;
    else if (interacted && near(ql, 1) && near(qr, 0) && fl <= -exit_distance)
        out.channel = Channel::ReflectedFluxon;
    else if (interacted && near(ql, -1) && near(qr, 0) && fl >= exit_distance)
        out.channel = Channel::ReflectedAntifluxon;
    else if (interacted && near(ql, 0) && near(qr, -1) && fr >= exit_distance)
        out.channel = Channel::TransmittedAntifluxon;
    else if (interacted && (std::abs(pb.back()) > 0.5 * pi ||
                            (std::abs(fl) < exit_distance && std::abs(fr) < exit_distance)))
        out.channel = Channel::Trapped;
    else
        out.channel = Channel::Undecided;

    const bool left_out = out.channel == Channel::ReflectedFluxon ||
                          out.channel == Channel::ReflectedAntifluxon;
    const bool right_out = out.channel == Channel::TransmittedFluxon ||
                           out.channel == Channel::TransmittedAntifluxon;
    if (left_out || right_out) {
        try {
            out.energy_retention =
                energy_retention(t, left_out ? xl : xr, out.v_in_fitted, out.t_max_phi_b);
        } catch (const NumericalError&) {
            out.energy_retention.reset();
        }
    }
    return out;
}

}  // namespace fluxread::lattice
