#include "fluxread/quantum1d.hpp"

#include <lapacke.h>

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "fluxread/errors.hpp"

namespace fluxread::quantum {

FluxoniumModel FluxoniumModel::from(const CircuitParams& p) {
    return {p.ej_q(), p.ec_q(), p.el_q(), p.phi_ext, p.beta2};
}

Tridiagonal build_hamiltonian(const PhaseGrid& grid, const FluxoniumModel& m, double phi_b) {
    const double h = grid.spacing();
    const double kin = 4.0 * m.ec / (h * h);
    Tridiagonal out;
    out.diag.resize(grid.n);
    out.off.assign(grid.n - 1, -kin);
    for (int i = 0; i < grid.n; ++i) {
        const double phi = grid.at(i);
        const double shift = phi - phi_b - m.phi_ext;
        out.diag[i] = 2.0 * kin + m.ej * (1.0 - std::cos(phi)) + 0.5 * m.el * shift * shift;
    }
    return out;
}

namespace {

void fill_moments(EigenSolution& sol, const PhaseGrid& grid) {
    const double h = grid.spacing();
    for (const auto& s : sol.states) {
        double m1 = 0, m2 = 0;
        for (int i = 0; i < grid.n; ++i) {
            const double w = s[i] * s[i] * h;
            m1 += w * grid.at(i);
            m2 += w * grid.at(i) * grid.at(i);
        }
        sol.mean_phase.push_back(m1);
        sol.spread.push_back(std::sqrt(std::max(0.0, m2 - m1 * m1)));
        sol.well_label.push_back(static_cast<int>(std::lround(m1 / two_pi)));
    }
}

}  // namespace

EigenSolution eigensolve(const Tridiagonal& h, const PhaseGrid& grid, int k) {
    const int n = static_cast<int>(h.diag.size());
    if (k < 1 || k > n / 4)
        throw ValidationError(fmt::format("eigensolve: requested {} states for n = {}", k, n));

    std::vector<double> d = h.diag, e = h.off;
    e.push_back(0.0);
    std::vector<double> w(n), z(static_cast<size_t>(n) * k);
    std::vector<lapack_int> ifail(n);
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0,
                                           0.0, 1, k, abstol, &found, w.data(), z.data(), n,
                                           ifail.data());
    if (info != 0 || found != k)
        throw NumericalError(fmt::format("dstevx failed (info {}, found {})", info, found));

    EigenSolution sol;
    const double scale = 1.0 / std::sqrt(grid.spacing());
    for (int j = 0; j < k; ++j) {
        sol.energies.push_back(w[j]);
        std::vector<double> s(z.begin() + static_cast<long>(j) * n,
                              z.begin() + static_cast<long>(j + 1) * n);
        // Deterministic sign: largest-magnitude component positive.
        auto big = std::max_element(s.begin(), s.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
        const double sign = *big < 0 ? -1.0 : 1.0;
        for (auto& v : s) v *= sign * scale;
        sol.states.push_back(std::move(s));
    }
    fill_moments(sol, grid);
    return sol;
}

EigenSolution fluxonium_states(const CircuitParams& p, int k, const PhaseGrid& grid) {
    return eigensolve(build_hamiltonian(grid, FluxoniumModel::from(p), 0.0), grid, k);
}

namespace {

double gap01(const FluxoniumModel& m, const PhaseGrid& grid, double phi_b) {
    const auto sol = eigensolve(build_hamiltonian(grid, m, phi_b), grid, 2);
    return sol.energies[1] - sol.energies[0];
}

}  // namespace

std::pair<double, double> gap_minimum(const FluxoniumModel& m, const PhaseGrid& grid, double lo,
                                      double hi) {
    constexpr int coarse = 41;
    double best_b = lo, best_g = gap01(m, grid, lo);
    for (int i = 1; i < coarse; ++i) {
        const double b = lo + (hi - lo) * i / (coarse - 1);
        const double g = gap01(m, grid, b);
        if (g < best_g) best_g = g, best_b = b;
    }
    const double step = (hi - lo) / (coarse - 1);
    const auto r = boost::math::tools::brent_find_minima(
        [&](double b) { return gap01(m, grid, b); }, std::max(lo, best_b - step),
        std::min(hi, best_b + step), 40);
    return {r.first, r.second};
}

SpectrumTable spectrum_vs_bias(const FluxoniumModel& m, const PhaseGrid& grid,
                               const std::vector<double>& bias, int k) {
    SpectrumTable tab;
    tab.bias = bias;
    if (bias.empty()) return tab;
    for (size_t i = 1; i < bias.size(); ++i)
        if (bias[i] <= bias[i - 1]) throw ValidationError("bias samples must increase");
    size_t imin = 0;
    double gmin = INFINITY;
    for (size_t i = 0; i < bias.size(); ++i) {
        auto sol = eigensolve(build_hamiltonian(grid, m, bias[i]), grid, std::max(k, 2));
        const double g = sol.energies[1] - sol.energies[0];
        if (g < gmin) gmin = g, imin = i;
        sol.energies.resize(k);
        tab.energies.push_back(std::move(sol.energies));
    }
    tab.crossing_bias = bias[imin];
    tab.min_gap = gmin;
    if (bias.size() >= 3) {
        const size_t a = imin == 0 ? 0 : imin - 1;
        const size_t b = std::min(bias.size() - 1, imin + 1);
        const auto r = boost::math::tools::brent_find_minima(
            [&](double x) { return gap01(m, grid, x); }, bias[a], bias[b], 40);
        if (r.second < gmin) tab.crossing_bias = r.first, tab.min_gap = r.second;
    }
    return tab;
}

double norm(const WaveFunction& psi, const PhaseGrid& grid) {
    // Trapezoid rule; end points carry half weight.
    double s = 0;
    const auto& a = psi.amp;
    for (size_t i = 0; i < a.size(); ++i) {
        const double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
        s += w * std::norm(a[i]);
    }
    return std::sqrt(s * grid.spacing());
}

double mean_phase(const std::vector<cplx>& amp, const PhaseGrid& grid) {
    double num = 0, den = 0;
    for (size_t i = 0; i < amp.size(); ++i) {
        const double w = std::norm(amp[i]);
        num += w * grid.at(static_cast<int>(i));
        den += w;
    }
    return num / den;
}

WaveFunction to_wavefunction(const std::vector<double>& state) {
    WaveFunction psi;
    psi.amp.assign(state.begin(), state.end());
    return psi;
}

void crank_nicolson_step(std::vector<cplx>& psi, const Tridiagonal& h, double dt, double hbar) {
    const int n = static_cast<int>(psi.size());
    const cplx ia(0.0, 0.5 * dt / hbar);
    std::vector<cplx> rhs(n), dl(n - 1), du(n - 1), d(n);
    for (int i = 0; i < n; ++i) {
        cplx hpsi = h.diag[i] * psi[i];
        if (i > 0) hpsi += h.off[i - 1] * psi[i - 1];
        if (i + 1 < n) hpsi += h.off[i] * psi[i + 1];
        rhs[i] = psi[i] - ia * hpsi;
        d[i] = 1.0 + ia * h.diag[i];
    }
    for (int i = 0; i + 1 < n; ++i) dl[i] = du[i] = ia * h.off[i];
    const lapack_int info =
        LAPACKE_zgtsv(LAPACK_COL_MAJOR, n, 1, reinterpret_cast<lapack_complex_double*>(dl.data()),
                      reinterpret_cast<lapack_complex_double*>(d.data()),
                      reinterpret_cast<lapack_complex_double*>(du.data()),
                      reinterpret_cast<lapack_complex_double*>(rhs.data()), n);
    if (info != 0) throw NumericalError(fmt::format("zgtsv failed (info {})", info));
    psi.swap(rhs);
}

BackactionReport propagate_driven(const WaveFunction& psi0, const DriveTrace& drive,
                                  const FluxoniumModel& m, const PhaseGrid& grid,
                                  const BackactionOptions& opt) {
    if (drive.values.size() < 4) throw ValidationError("drive trace needs at least 4 samples");
    if (std::abs(norm(psi0, grid) - 1.0) > 1e-6)
        throw ValidationError("initial wavefunction is not normalised");

    boost::math::interpolators::cardinal_cubic_b_spline<double> spline(
        drive.values.begin(), drive.values.end(), 0.0, drive.dt);
    const double t_end = drive.duration();
    const int steps = static_cast<int>(std::llround(t_end / opt.dt));
    const int every = std::max(1, static_cast<int>(std::llround(opt.sample_every / opt.dt)));
    const double h = grid.spacing();

    BackactionReport rep;
    std::vector<cplx> psi = psi0.amp;
    std::vector<std::vector<double>> prev_basis;

    auto sample = [&](double t) {
        const double bias = spline(std::min(t, t_end));
        auto sol = eigensolve(build_hamiltonian(grid, m, bias), grid, opt.tracked);
        if (!prev_basis.empty()) {
            for (int j = 0; j < opt.tracked; ++j) {
                double ov = 0;
                for (int i = 0; i < grid.n; ++i) ov += sol.states[j][i] * prev_basis[j][i];
                if (ov < 0)
                    for (auto& v : sol.states[j]) v = -v;
            }
        }
        std::vector<double> w(opt.tracked);
        double total = 0, leak = 0;
        for (int j = 0; j < opt.tracked; ++j) {
            cplx c = 0;
            for (int i = 0; i < grid.n; ++i) c += sol.states[j][i] * psi[i];
            w[j] = std::norm(c * h);
            total += w[j];
            if (j != opt.initial_state) leak += w[j];
        }
        WaveFunction tmp{psi, t};
        rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(norm(tmp, grid) - 1.0));
        if (rep.max_norm_drift > 1e-6)
            throw NumericalError(fmt::format("norm drift {:.3e} at t = {:.3f}", rep.max_norm_drift, t));
        rep.min_completeness = std::min(rep.min_completeness, total);
        rep.t.push_back(t);
        rep.weights.push_back(std::move(w));
        rep.mean_phase.push_back(mean_phase(psi, grid));
        rep.infidelity.push_back(leak);
        rep.drive.push_back(bias);
        rep.peak_infidelity = std::max(rep.peak_infidelity, leak);
        prev_basis = std::move(sol.states);
    };

    sample(0.0);
    for (int s = 0; s < steps; ++s) {
        const double t = s * opt.dt;
        const double mid = spline(std::min(t + 0.5 * opt.dt, t_end));
        crank_nicolson_step(psi, build_hamiltonian(grid, m, mid), opt.dt, m.hbar_omega);
        if ((s + 1) % every == 0 || s + 1 == steps) sample((s + 1) * opt.dt);
    }
    rep.final_infidelity = rep.infidelity.back();
    return rep;
}

TwoLevelResult avoided_crossing_2level(const FluxoniumModel& m, const PhaseGrid& grid,
                                       double phi_b) {
    TwoLevelResult r;
    const auto [xb, gmin] = gap_minimum(m, grid, phi_b - pi, phi_b + pi);
    r.crossing_bias = xb;
    r.min_gap = gmin;
    r.gap = gap01(m, grid, phi_b);
    // Diabatic 2x2 model: gap^2 = detuning^2 + min_gap^2.
    const double ratio = std::min(1.0, gmin / r.gap);
    r.weight = 0.5 * (1.0 - std::sqrt(1.0 - ratio * ratio));
    r.outside_window = std::abs(phi_b - xb) > 0.5 * pi;
    return r;
}

}  // namespace fluxread::quantum
