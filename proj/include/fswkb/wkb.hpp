#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fswkb/frac_core.hpp"
#include "fswkb/grid.hpp"

namespace fswkb {

namespace detail {

// 4-point Lagrange cubic through equally spaced values p0..p3 (node
// positions 0,1,2,3), evaluated at fractional position x.
template <typename T>
T lagrange4(const T& p0, const T& p1, const T& p2, const T& p3, double x) {
    const double l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
    const double l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
    const double l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
    const double l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
    return p0 * l0 + p1 * l1 + p2 * l2 + p3 * l3;
}

// Cubic interpolation through uniformly spaced samples; clamped at the ends.
// q is a fractional index into ys.
template <typename T>
T cubic_at(const std::vector<T>& ys, double q) {
    const int n = int(ys.size());
    if (n == 1) return ys[0];
    if (q <= 0.0) return ys.front();
    if (q >= double(n - 1)) return ys.back();
    if (n < 4) { // linear fallback on tiny grids
        const int j = std::min(int(std::floor(q)), n - 2);
        const double w = q - double(j);
        return ys[std::size_t(j)] * (1.0 - w) + ys[std::size_t(j + 1)] * w;
    }
    int i = std::clamp(int(std::floor(q)) - 1, 0, n - 4);
    return lagrange4(ys[std::size_t(i)], ys[std::size_t(i + 1)], ys[std::size_t(i + 2)], ys[std::size_t(i + 3)],
                     q - double(i));
}

} // namespace detail

/// Exact mode-wise solution of i d_tau a0 + C_{s/2} D^{s/2} a0 = 0:
/// hat a0(k,tau) = exp(-i C_{s/2} |k|^{s/2} tau) hat g0(k).
inline ComplexField solve_a0(const ComplexField& g0, const FracContext& ctx, double tau) {
    if (!g0.grid.periodic) throw validation_error("solve_a0: periodic grid required");
    const cplx C = ctx.C_half();
    const double beta = ctx.beta;
    return apply_multiplier(g0, [&](double k) {
        return std::exp(cplx(0.0, -1.0) * C * std::pow(std::abs(k), beta) * tau);
    });
}

/// Variation-of-constants solution of i d_tau a + C_{s/2} D^{s/2} a = h:
/// free evolution of g, plus the Duhamel integral of the propagator applied
/// to -i h, by composite Simpson with `nodes` intervals (rounded up to even).
inline ComplexField solve_inhomogeneous(const ComplexField& g,
                                        const std::function<ComplexField(double)>& h,
                                        const FracContext& ctx, double tau, int nodes = 64) {
    if (!g.grid.periodic) throw validation_error("solve_inhomogeneous: periodic grid required");
    if (nodes < 2) throw validation_error("solve_inhomogeneous: need at least 2 Simpson intervals");
    if (nodes % 2) ++nodes;
    const int n = g.grid.n;
    const cplx C = ctx.C_half();
    const double beta = ctx.beta;
    std::vector<double> omega_k(static_cast<std::size_t>(n));
    std::vector<cplx> acc = fft_of(g.v);
    for (int m = 0; m < n; ++m) {
        omega_k[std::size_t(m)] = std::pow(std::abs(g.grid.mode_k(m)), beta);
        acc[std::size_t(m)] *= std::exp(cplx(0.0, -1.0) * C * omega_k[std::size_t(m)] * tau);
    }
    if (tau != 0.0) {
        const double d = tau / double(nodes);
        for (int q = 0; q <= nodes; ++q) {
            const double sigma = d * double(q);
            const double w = (q == 0 || q == nodes) ? 1.0 : (q % 2 ? 4.0 : 2.0);
            std::vector<cplx> hhat = fft_of(h(sigma).v);
            for (int m = 0; m < n; ++m) {
                const cplx prop = std::exp(cplx(0.0, -1.0) * C * omega_k[std::size_t(m)] * (tau - sigma));
                acc[std::size_t(m)] += (d / 3.0) * w * prop * (cplx(0.0, -1.0) * hhat[std::size_t(m)]);
            }
        }
    }
    fft_inverse(acc);
    return ComplexField(g.grid, std::move(acc));
}

struct WkbOptions {
    int J = 2;
    int tau_slabs = 65;    // stored amplitude slabs over [0, tau_max]
    int fine_per_slab = 4; // internal refinement of the Duhamel marching grid
    double T = 1.0;        // physical horizon: tau_max = eps^{3s/2} T
    bool normalize = true; // include c(eps) = eps^s in the assembled field
    double growth_cap = 1e6;
};

/// Truncated WKB expansion: carrier data and the amplitude slabs a_0..a_J on
/// a uniform tau grid, stored in transform space.
struct WkbExpansion {
    FracContext ctx;      // constants at the snapped carrier frequency xi0_eff
    double eps = 0.0;
    int J = 0;
    Grid1D grid;
    double xi0_eff = 0.0; // snapped so that xi0_eff/eps is an exact grid mode
    double carrier_k = 0.0;
    double tau_scale = 0.0; // eps^{3s/2}
    double c_eps = 1.0;     // eps^s, or 1 in normalization-off mode
    bool normalized = true;
    double tau_max = 0.0;
    std::vector<double> tau_grid;
    // amp_hat[j][slab][mode]
    std::vector<std::vector<std::vector<cplx>>> amp_hat;

    double slab_spacing() const { return tau_grid.size() > 1 ? tau_grid[1] - tau_grid[0] : 0.0; }

    /// Real-space amplitude slab a_j(., tau_grid[slab]).
    ComplexField amplitude(int j, int slab) const {
        std::vector<cplx> v = amp_hat[std::size_t(j)][std::size_t(slab)];
        fft_inverse(v);
        return ComplexField(grid, std::move(v));
    }
};

/// Minimum periodic point count resolving carrier wavenumber k with at least
/// 8 points per oscillation.
inline int minimum_carrier_points(const Grid1D& g, double k) {
    const double need = 8.0 * g.length() * std::abs(k) / (2.0 * pi);
    int n = 8;
    while (double(n) < need) n *= 2;
    return n;
}

/// Solves the cascade system for a_0..a_J with g_0 given and g_j = 0 (j >= 1):
///   i d a_0 + C_{s/2} D^{s/2} a_0 = 0
///   i d a_1 + C_{s/2} D^{s/2} a_1 = -C_s D^s a_0
///   i d a_2 + C_{s/2} D^{s/2} a_2 = -C_s D^s a_1 - C_{3s/2} D^{3s/2} a_0
///   i d a_j + C_{s/2} D^{s/2} a_j = -C_s D^s a_{j-1} - C_{3s/2} D^{3s/2} a_{j-2} - (-Lap)^s a_{j-3}
/// (theta = x in every remainder term). Mode-wise exponential integrator with
/// pairwise-Simpson Duhamel increments on a refined tau grid.
inline WkbExpansion build_cascade(const ComplexField& g0, const FracContext& ctx_in, double eps,
                                  const WkbOptions& opts = {}) {
    if (!g0.grid.periodic) throw validation_error("build_cascade: periodic grid required");
    if (opts.J < 0) throw validation_error("build_cascade: need J >= 0");
    if (!(eps > 0.0)) throw validation_error("build_cascade: need eps > 0");
    if (opts.tau_slabs < 2) throw validation_error("build_cascade: need at least 2 tau slabs");
    if (!(opts.T > 0.0)) throw validation_error("build_cascade: need T > 0");

    WkbExpansion w;
    w.eps = eps;
    w.J = opts.J;
    w.grid = g0.grid;
    const double k_target = ctx_in.xi0 / eps;
    const int m0 = g0.grid.nearest_mode(k_target);
    w.carrier_k = g0.grid.mode_freq(m0);
    w.xi0_eff = w.carrier_k * eps;
    w.ctx = ctx_in.xi0 == w.xi0_eff ? ctx_in : [&] {
        FracContext c = ctx_in;
        c.xi0 = w.xi0_eff;
        const double g[3] = {c.s / 2.0, c.s, 1.5 * c.s};
        for (int i = 0; i < 3; ++i)
            c.C[std::size_t(i)] *= std::pow(w.xi0_eff / ctx_in.xi0, 2.0 * c.s - g[i]);
        return c;
    }();
    const double s = w.ctx.s;
    w.tau_scale = std::pow(eps, 1.5 * s);
    w.c_eps = opts.normalize ? std::pow(eps, s) : 1.0;
    w.normalized = opts.normalize;
    w.tau_max = w.tau_scale * opts.T;
    w.tau_grid.resize(std::size_t(opts.tau_slabs));
    for (int m = 0; m < opts.tau_slabs; ++m)
        w.tau_grid[std::size_t(m)] = w.tau_max * double(m) / double(opts.tau_slabs - 1);

    const int n = g0.grid.n;
    const int fine_per = std::max(1, opts.fine_per_slab);
    // fine marching grid: slab-aligned, even interval count, wide enough for
    // the one-sided cubic stencils
    int nf = (opts.tau_slabs - 1) * fine_per;
    while (nf % 2 || nf < 6) nf += opts.tau_slabs - 1;
    const int Nf = nf + 1;
    const double d = w.tau_max / double(nf);

    const std::vector<cplx> g0hat = fft_of(g0.v);
    w.amp_hat.assign(std::size_t(w.J + 1),
                     std::vector<std::vector<cplx>>(w.tau_grid.size(), std::vector<cplx>(std::size_t(n))));

    const cplx Ch = w.ctx.C_half(), Cs = w.ctx.C_one(), C3h = w.ctx.C_three_half();
    const double beta = w.ctx.beta;
    double worst_growth = 0.0;
    double g0_peak = 0.0;
    for (const auto& z : g0hat) g0_peak = std::max(g0_peak, std::abs(z));

    std::vector<std::vector<cplx>> fine(std::size_t(w.J + 1), std::vector<cplx>(std::size_t(Nf)));
    for (int m = 0; m < n; ++m) {
        const double kabs = std::abs(g0.grid.mode_k(m));
        const cplx omega = Ch * std::pow(kabs, beta); // evolution factor e^{-i omega tau}
        const double mDs = -std::pow(kabs, 2.0 * beta);   // D^s multiplier
        const double mD3 = -std::pow(kabs, 3.0 * beta);   // D^{3s/2} multiplier
        const double mLap = std::pow(kabs, 2.0 * s);      // (-Lap)^s multiplier
        const cplx E1 = std::exp(cplx(0.0, -1.0) * omega * d);
        const cplx E2 = E1 * E1;

        auto source = [&](int j, int q) -> cplx {
            cplx h = 0.0;
            if (j >= 1) h += -Cs * mDs * fine[std::size_t(j - 1)][std::size_t(q)];
            if (j >= 2) h += -C3h * mD3 * fine[std::size_t(j - 2)][std::size_t(q)];
            if (j >= 3) h += -mLap * fine[std::size_t(j - 3)][std::size_t(q)];
            return h;
        };

        // level 0: analytic
        for (int q = 0; q < Nf; ++q)
            fine[0][std::size_t(q)] = std::exp(cplx(0.0, -1.0) * omega * (d * double(q))) * g0hat[std::size_t(m)];
        // levels >= 1: even points by pairwise Simpson, odd points by cubic interpolation
        for (int j = 1; j <= w.J; ++j) {
            auto& a = fine[std::size_t(j)];
            a[0] = 0.0; // g_j = 0
            for (int q = 0; q + 2 < Nf; q += 2) {
                const cplx h0 = source(j, q), h1 = source(j, q + 1), h2 = source(j, q + 2);
                a[std::size_t(q + 2)] = E2 * a[std::size_t(q)] +
                                        (d / 3.0) * (E2 * (cplx(0.0, -1.0) * h0) + 4.0 * E1 * (cplx(0.0, -1.0) * h1) +
                                                     (cplx(0.0, -1.0) * h2));
            }
            for (int q = 1; q < Nf; q += 2) {
                // cubic through the four nearest even samples
                const int e0 = std::clamp(q - 3, 0, Nf - 7);
                a[std::size_t(q)] = detail::lagrange4(a[std::size_t(e0)], a[std::size_t(e0 + 2)],
                                                      a[std::size_t(e0 + 4)], a[std::size_t(e0 + 6)],
                                                      (double(q) - double(e0)) / 2.0);
            }
        }
        for (int j = 0; j <= w.J; ++j)
            for (int q = 0; q < Nf; ++q) worst_growth = std::max(worst_growth, std::abs(fine[std::size_t(j)][std::size_t(q)]));
        if (g0_peak > 0.0 && worst_growth > opts.growth_cap * g0_peak)
            throw numeric_error("build_cascade: mode-wise growth exceeded cap (Im C_{s/2} = " +
                                std::to_string(std::imag(Ch)) + "); expansion aborted");

        // store slab values
        for (std::size_t slab = 0; slab < w.tau_grid.size(); ++slab) {
            const double tau = w.tau_grid[slab];
            const double qf = tau / d;
            const int q = int(std::lround(qf));
            for (int j = 0; j <= w.J; ++j) {
                const auto& a = fine[std::size_t(j)];
                w.amp_hat[std::size_t(j)][slab][std::size_t(m)] =
                    (std::abs(qf - double(q)) < 1e-9 && q >= 0 && q < Nf) ? a[std::size_t(q)]
                                                                          : detail::cubic_at(a, qf);
            }
        }
    }
    return w;
}

/// Assembled quasi-solution
///   z(x,t) = c(eps) e^{i[xi0 x/eps + |xi0|^{2s} t/eps^{2s}]} sum_j eps^{sj/2} a_j(x, eps^{3s/2} t),
/// with the amplitudes cubically interpolated in tau between slabs.
/// J_use < 0 means all stored orders.
inline ComplexField assemble_z(const WkbExpansion& w, double t, int J_use = -1) {
    if (t < 0.0) throw validation_error("assemble_z: need t >= 0");
    const int n = w.grid.n;
    const int nmin = minimum_carrier_points(w.grid, w.carrier_k);
    if (n < nmin)
        throw validation_error("assemble_z: carrier unresolved; need n >= " + std::to_string(nmin) +
                               " (8 points per oscillation), got n=" + std::to_string(n));
    const int Jx = (J_use < 0) ? w.J : std::min(J_use, w.J);
    const double tau = w.tau_scale * t;
    if (tau > w.tau_max * (1.0 + 1e-9))
        throw validation_error("assemble_z: t beyond the stored tau horizon");
    const double dq = w.slab_spacing();
    const double qf = (dq > 0.0) ? tau / dq : 0.0;

    const double s = w.ctx.s;
    std::vector<cplx> amp(std::size_t(n), cplx(0.0));
    std::vector<cplx> slabline(w.tau_grid.size());
    for (int m = 0; m < n; ++m) {
        cplx sum = 0.0;
        for (int j = 0; j <= Jx; ++j) {
            const auto& slabs = w.amp_hat[std::size_t(j)];
            for (std::size_t q = 0; q < slabs.size(); ++q) slabline[q] = slabs[q][std::size_t(m)];
            sum += std::pow(w.eps, s * double(j) / 2.0) * detail::cubic_at(slabline, qf);
        }
        amp[std::size_t(m)] = sum;
    }
    fft_inverse(amp);

    const double Omega = std::pow(std::abs(w.carrier_k), 2.0 * s); // = |xi0_eff|^{2s} eps^{-2s}
    ComplexField z(w.grid);
    for (int j = 0; j < n; ++j) {
        const double phase = w.carrier_k * w.grid.x(j) + Omega * t;
        z.v[std::size_t(j)] = w.c_eps * std::polar(1.0, phase) * amp[std::size_t(j)];
    }
    return z;
}

struct ResidualOptions {
    double dt_res = -1.0;            // centered-difference step; auto: eps^{2s}/divisor
    double dt_divisor = 2000.0;      // must stay >= 100 per the contract
    int J_use = -1;
};

struct ResidualResult {
    double value = 0.0;
    bool dt_warning = false; // set when the requested dt_res exceeds eps^{2s}/100
};

/// || i d_t z + (-Lap)^s z ||_{L^2} with the time derivative by centered
/// difference and the operator applied spectrally.
inline ResidualResult residual_norm(const WkbExpansion& w, double t, const ResidualOptions& opt = {}) {
    const double s = w.ctx.s;
    double dt = opt.dt_res > 0.0 ? opt.dt_res : std::pow(w.eps, 2.0 * s) / opt.dt_divisor;
    ResidualResult res;
    if (dt > std::pow(w.eps, 2.0 * s) / 100.0) res.dt_warning = true;
    if (t - dt < 0.0) throw validation_error("residual_norm: need t >= dt_res for the centered difference");
    const ComplexField zp = assemble_z(w, t + dt, opt.J_use);
    const ComplexField zm = assemble_z(w, t - dt, opt.J_use);
    const ComplexField z0 = assemble_z(w, t, opt.J_use);
    const ComplexField lap = apply_fraclap_spectral(z0, s);
    ComplexField r(w.grid);
    const cplx i_unit(0.0, 1.0);
    for (std::size_t j = 0; j < r.v.size(); ++j)
        r.v[j] = i_unit * (zp.v[j] - zm.v[j]) / (2.0 * dt) + lap.v[j];
    res.value = l2_norm(r);
    return res;
}

} // namespace fswkb
