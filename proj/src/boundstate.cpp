#include "fluxread/boundstate.hpp"

#include <armadillo>
#include <cmath>
#include <fmt/format.h>

#include "fluxread/errors.hpp"

namespace fluxread::boundstate {

EvanescentParams evanescent_params(const CircuitParams& p) {
    validate(p);
    const double d = p.discreteness;
    EvanescentParams ev;
    ev.mu_a = std::acosh(1.0 + 0.5 * d * d);
    const double e = std::exp(ev.mu_a);
    ev.cj_eff = 1.0 / (e * e - 1.0);
    ev.ic_eff = ev.cj_eff;
    ev.l_eff = (e + 1.0) / (e - 1.0);
    return ev;
}

double interface_potential(const CircuitParams& p, const EvanescentParams& ev, double phi_lr,
                           double phi_b, double phi_q) {
    const double d = p.discreteness;
    const double pl = phi_lr + 0.5 * phi_b, pr = phi_lr - 0.5 * phi_b;
    const double stretch = phi_q - p.phi_ext - phi_b;
    return (pl * pl + pr * pr) / (2.0 * ev.l_eff * d) +
           (p.ic_term + ev.ic_eff) * d * (2.0 - std::cos(pl) - std::cos(pr)) +
           p.ic_rail * d * (1.0 - std::cos(phi_b)) + p.ic_q * d * (1.0 - std::cos(phi_q)) +
           stretch * stretch / (2.0 * p.lq * d);
}

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

void derivatives(const CircuitParams& p, const EvanescentParams& ev, const Vec3& x, Vec3& grad,
                 Mat3& hess) {
    const double d = p.discreteness;
    const double jt = (p.ic_term + ev.ic_eff) * d;
    const double kl = 1.0 / (ev.l_eff * d), kq = 1.0 / (p.lq * d);
    const double pl = x[0] + 0.5 * x[1], pr = x[0] - 0.5 * x[1];
    const double stretch = x[2] - p.phi_ext - x[1];
    grad[0] = kl * (pl + pr) + jt * (std::sin(pl) + std::sin(pr));
    grad[1] = 0.5 * kl * (pl - pr) + 0.5 * jt * (std::sin(pl) - std::sin(pr)) +
              p.ic_rail * d * std::sin(x[1]) - kq * stretch;
    grad[2] = p.ic_q * d * std::sin(x[2]) + kq * stretch;
    const double cs = std::cos(pl) + std::cos(pr), cd = std::cos(pl) - std::cos(pr);
    hess[0] = {2.0 * kl + jt * cs, 0.5 * jt * cd, 0.0};
    hess[1] = {0.5 * jt * cd, 0.5 * kl + 0.25 * jt * cs + p.ic_rail * d * std::cos(x[1]) + kq, -kq};
    hess[2] = {0.0, -kq, p.ic_q * d * std::cos(x[2]) + kq};
}

double det3(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Vec3 solve3(const Mat3& a, const Vec3& b) {
    const double det = det3(a);
    Vec3 x{};
    for (int c = 0; c < 3; ++c) {
        Mat3 m = a;
        for (int r = 0; r < 3; ++r) m[r][c] = b[r];
        x[c] = det3(m) / det;
    }
    return x;
}

}  // namespace

SteadyStateReport steadystate_report(const CircuitParams& p) {
    const auto ev = evanescent_params(p);
    const double d = p.discreteness;
    SteadyStateReport r;
    r.masses = {2.0 * (p.cj_term + ev.cj_eff) * d, (p.cj_rail + 0.5 * (p.cj_term + ev.cj_eff)) * d,
                p.mass_q()};

    Vec3 x{0.0, 0.0, 0.0}, g;
    Mat3 h;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        derivatives(p, ev, x, g, h);
        const auto step = solve3(h, g);
        for (int i = 0; i < 3; ++i) x[i] -= step[i];
        if (std::abs(step[0]) + std::abs(step[1]) + std::abs(step[2]) < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericalError("steady-state Newton iteration did not converge");
    derivatives(p, ev, x, g, h);
    r.steady_state = x;
    r.hessian = h;
    const double minor2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    r.stable = h[0][0] > 0 && minor2 > 0 && det3(h) > 0;
    for (int i = 0; i < 3; ++i) {
        if (!(h[i][i] > 0)) {
            r.frequencies[i] = std::nan("");
            r.uncertainties[i] = std::nan("");
            continue;
        }
        r.frequencies[i] = std::sqrt(h[i][i] / r.masses[i]);
        r.uncertainties[i] = p.beta2 / (2.0 * r.masses[i] * r.frequencies[i]);
    }
    return r;
}

namespace {

double phi_b_potential(const CircuitParams& p, const EvanescentParams& ev, double b) {
    const double d = p.discreteness;
    return (0.5 / ev.l_eff + 1.0 / p.lq) * b * b / (2.0 * d) +
           p.ic_rail * d * (1.0 - std::cos(b)) +
           2.0 * (p.ic_term + ev.ic_eff) * d * (1.0 - std::cos(0.5 * b));
}

double kinetic_scale(double beta2, double mass) { return beta2 * beta2 / (2.0 * mass); }

}  // namespace

quantum::EigenSolution phi_b_ladder(const CircuitParams& p, const quantum::PhaseGrid& grid, int k) {
    const auto ev = evanescent_params(p);
    const auto ss = steadystate_report(p);
    const double h = grid.spacing();
    const double t = kinetic_scale(p.beta2, ss.masses[1]) / (h * h);
    quantum::Tridiagonal op;
    op.diag.resize(grid.n);
    op.off.assign(grid.n - 1, -t);
    for (int i = 0; i < grid.n; ++i) op.diag[i] = 2.0 * t + phi_b_potential(p, ev, grid.at(i));
    return quantum::eigensolve(op, grid, k);
}

H2Solution solve_h2(const CircuitParams& p, const Grid2D& grid, const H2Options& opt) {
    const auto ev = evanescent_params(p);
    const auto ss = steadystate_report(p);
    const int nq = grid.q.n, nb = grid.b.n;
    if (nq < 16 || nb < 16) throw ValidationError("2D grid needs at least 16 points per axis");
    if (opt.states < 1 || opt.states > nq * nb / 4) throw ValidationError("invalid state count");
    const double hq = grid.q.spacing(), hb = grid.b.spacing();
    const double tq = kinetic_scale(p.beta2, p.mass_q()) / (hq * hq);
    const double tb = kinetic_scale(p.beta2, ss.masses[1]) / (hb * hb);
    const double el = p.el_q(), ej = p.ej_q();
    const arma::uword n = static_cast<arma::uword>(nq) * nb;

    arma::umat loc(2, 5 * n);
    arma::vec val(5 * n);
    arma::uword nnz = 0;
    auto put = [&](arma::uword r, arma::uword c, double v) {
        loc(0, nnz) = r;
        loc(1, nnz) = c;
        val(nnz++) = v;
    };
    for (int i = 0; i < nq; ++i) {
        const double q = grid.q.at(i);
        const double uq = ej * (1.0 - std::cos(q)) + 0.5 * el * (q - p.phi_ext) * (q - p.phi_ext);
        for (int j = 0; j < nb; ++j) {
            const double b = grid.b.at(j);
            double v = uq + phi_b_potential(p, ev, b);
            if (opt.coupling) v -= el * b * (q - p.phi_ext);
            const arma::uword idx = static_cast<arma::uword>(i) * nb + j;
            put(idx, idx, 2.0 * tq + 2.0 * tb + v);
            if (i > 0) put(idx, idx - nb, -tq);
            if (i + 1 < nq) put(idx, idx + nb, -tq);
            if (j > 0) put(idx, idx - 1, -tb);
            if (j + 1 < nb) put(idx, idx + 1, -tb);
        }
    }
    arma::sp_mat hmat(loc.cols(0, nnz - 1), val.subvec(0, nnz - 1), n, n);

    arma::vec evals;
    arma::mat evecs;
    arma::eigs_opts eo;
    eo.tol = 1e-12;
    eo.maxiter = 100000;
    eo.subdim = std::max(4 * opt.states, 40);
    const bool ok = arma::eigs_sym(evals, evecs, hmat, opt.states, "sa", eo);
    if (!ok || evals.n_elem < static_cast<arma::uword>(opt.states))
        throw NumericalError("2D interface eigensolver did not converge");
    const arma::uvec order = arma::sort_index(evals);

    H2Solution sol;
    sol.grid = grid;
    for (arma::uword s = 0; s < order.n_elem; ++s) {
        arma::vec psi = evecs.col(order(s));
        psi /= std::sqrt(arma::dot(psi, psi) * hq * hb);
        if (psi(psi.index_max()) < -psi(psi.index_min())) psi = -psi;
        double mq = 0, mq2 = 0, mb = 0, mb2 = 0;
        for (int i = 0; i < nq; ++i)
            for (int j = 0; j < nb; ++j) {
                const double w = psi(static_cast<arma::uword>(i) * nb + j);
                const double pr = w * w * hq * hb, q = grid.q.at(i), b = grid.b.at(j);
                mq += pr * q;
                mq2 += pr * q * q;
                mb += pr * b;
                mb2 += pr * b * b;
            }
        sol.energies.push_back(evals(order(s)));
        sol.states.push_back(arma::conv_to<std::vector<double>>::from(psi));
        sol.mean_phi_q.push_back(mq);
        sol.mean_phi_b.push_back(mb);
        sol.spread_phi_q.push_back(std::sqrt(std::max(0.0, mq2 - mq * mq)));
        sol.spread_phi_b.push_back(std::sqrt(std::max(0.0, mb2 - mb * mb)));
        sol.well_label.push_back(static_cast<int>(std::lround(mq / two_pi)));
    }
    return sol;
}

}  // namespace fluxread::boundstate
