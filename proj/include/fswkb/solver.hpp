#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fswkb/frac_core.hpp"
#include "fswkb/grid.hpp"
#include "fswkb/rays.hpp"

namespace fswkb {

/// Settings of one reference simulation (the bounded-interval experiments of
/// the figures, and the periodic runs backing the scaling sweeps).
struct SimConfig {
    double s = 0.5;
    double xi0 = 2.0 * pi * pi;
    double eps = 1.0; // carrier wavenumber is xi0/eps
    BoundedDomain domain{-1.0, 1.0};
    int n = 512;
    double dt = 1e-3;
    double T = 5.0;
    double gamma_exponent = 0.9; // gamma = h^{-gamma_exponent}
    double gamma_override = -1.0; // > 0: fixed envelope width instead of the mesh rule
    double x0_center = 0.0;
    int stride = 10;

    double h() const { return domain.length() / double(n); }
    double gamma() const { return gamma_override > 0.0 ? gamma_override : std::pow(h(), -gamma_exponent); }
    int steps() const { return int(std::lround(T / dt)); }

    void validate(bool periodic_scheme) const {
        if (!(s > 0.0 && s < 1.0)) throw validation_error("SimConfig: need s in (0,1), got s=" + std::to_string(s));
        domain.validate();
        if (!(dt > 0.0)) throw validation_error("SimConfig: need dt > 0");
        if (!(T > 0.0)) throw validation_error("SimConfig: need T > 0");
        if (std::abs(T / dt - std::lround(T / dt)) > 1e-9)
            throw validation_error("SimConfig: T must be a multiple of dt");
        if (stride < 1) throw validation_error("SimConfig: need stride >= 1");
        if (n < 8) throw validation_error("SimConfig: need n >= 8");
        if (periodic_scheme && !detail::is_pow2(std::size_t(n)))
            throw validation_error("SimConfig: spectral scheme needs a power-of-two n");
        const double kc = std::abs(xi0) / eps;
        if (kc > 0.0 && 2.0 * pi / (kc * h()) < 8.0 - 1e-12)
            throw validation_error("SimConfig: carrier xi0/eps unresolved; need >= 8 points per oscillation (n >= " +
                                   std::to_string(int(std::ceil(8.0 * domain.length() * kc / (2.0 * pi)))) + ")");
        if (!(x0_center > domain.left && x0_center < domain.right))
            throw validation_error("SimConfig: x0_center must lie inside the domain");
    }
};

/// Gaussian wavepacket u0(x) = e^{-gamma/2 (x-x0)^2} e^{i xi0 x / eps} on the
/// given grid, with gamma = h^{-gamma_exponent} unless overridden.
inline ComplexField gaussian_wavepacket(const SimConfig& cfg, const Grid1D& grid) {
    const double g = cfg.gamma();
    ComplexField u(grid);
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        const double env = std::exp(-0.5 * g * (x - cfg.x0_center) * (x - cfg.x0_center));
        u.v[std::size_t(j)] = env * std::polar(1.0, cfg.xi0 / cfg.eps * x);
    }
    return u;
}

/// One Crank-Nicolson step of i u_t + (-Lap)^s u = 0 on a periodic grid:
/// per mode, the Cayley factor (1 + i dt |k|^{2s}/2)/(1 - i dt |k|^{2s}/2),
/// exactly unimodular. The + sign in the numerator matches the carrier phase
/// convention e^{+i |xi|^{2s} t}.
inline ComplexField spectral_cn_step(const ComplexField& u, double s, double dt) {
    if (!u.grid.periodic) throw validation_error("spectral_cn_step: periodic grid required");
    return apply_multiplier(u, [s, dt](double k) {
        const double lam = std::pow(std::abs(k), 2.0 * s);
        return (cplx(1.0, 0.5 * dt * lam)) / (cplx(1.0, -0.5 * dt * lam));
    });
}

/// Closed-form entry of the P1 stiffness matrix of the singular-integral form
///   a(u,v) = (c1s/2) iint (u(x)-u(y))(v(x)-v(y)) / |x-y|^{1+2s} dx dy
/// on a uniform mesh of size h with zero extension outside the interval:
/// the bilinear form reduces to a Riesz-potential double integral of the hat
/// derivatives, whose exact piecewise integration (far-field tails included)
/// collapses to a fourth central difference,
///   A_{i,i+k} = h^{1-2s} (D^4 psi)(k) / (2 Gamma(2-2s) cos(pi s)),
///   psi(z) = |z|^{3-2s} / ((2-2s)(3-2s)),
/// with the logarithmic antiderivative branch at s = 1/2:
///   A_{i,i+k} = (D^4 [z^2 ln|z|])(k) / (2 pi).
inline double fe_stiffness_entry(int k, double s, double h) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("fe_stiffness_entry: need s in (0,1)");
    auto d4 = [](auto&& f, int kk) {
        return f(kk + 2) - 4.0 * f(kk + 1) + 6.0 * f(kk) - 4.0 * f(kk - 1) + f(kk - 2);
    };
    if (std::abs(s - 0.5) < 1e-6) {
        auto psil = [](int z) {
            const double az = std::abs(double(z));
            return z == 0 ? 0.0 : az * az * std::log(az);
        };
        return d4(psil, k) / (2.0 * pi);
    }
    auto psi = [s](int z) {
        return std::pow(std::abs(double(z)), 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
    };
    return std::pow(h, 1.0 - 2.0 * s) * d4(psi, k) / (2.0 * std::tgamma(2.0 - 2.0 * s) * std::cos(pi * s));
}

/// P1 finite element operator on an interval with homogeneous exterior
/// condition: dense symmetric Toeplitz stiffness of the nonlocal form plus
/// the tridiagonal mass matrix. Owns the cached Crank-Nicolson factorization.
struct FeOperator {
    Grid1D grid; // interval grid; unknowns live at the n-1 interior nodes
    double s = 0.5;
    Eigen::MatrixXd stiffness;
    double mass_diag = 0.0; // 2h/3
    double mass_off = 0.0;  // h/6

    int unknowns() const { return grid.n - 1; }

    Eigen::VectorXcd apply_mass(const Eigen::VectorXcd& u) const {
        const int m = unknowns();
        Eigen::VectorXcd out(m);
        for (int i = 0; i < m; ++i) {
            cplx acc = mass_diag * u[i];
            if (i > 0) acc += mass_off * u[i - 1];
            if (i + 1 < m) acc += mass_off * u[i + 1];
            out[i] = acc;
        }
        return out;
    }

    double mass_norm(const Eigen::VectorXcd& u) const { return std::sqrt(std::real(u.dot(apply_mass(u)))); }
    double form_value(const Eigen::VectorXcd& u) const {
        return std::real(u.dot(stiffness.cast<cplx>() * u));
    }

    // Crank-Nicolson cache for the last dt used
    struct CnCache {
        double dt = 0.0;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
        Eigen::MatrixXcd b_minus;
        bool ready = false;
    };
    mutable CnCache cn;
};

/// Assembles the FE operator; stiffness entries depend only on |i-j|.
inline FeOperator assemble_fe(const Grid1D& grid, double s) {
    if (grid.periodic) throw validation_error("assemble_fe: interval (non-periodic) grid required");
    if (grid.n < 3) throw validation_error("assemble_fe: need n >= 3 cells");
    FeOperator op;
    op.grid = grid;
    op.s = s;
    const int m = grid.n - 1;
    const double h = grid.h();
    std::vector<double> a(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) a[std::size_t(k)] = fe_stiffness_entry(k, s, h);
    op.stiffness.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) op.stiffness(i, j) = a[std::size_t(std::abs(i - j))];
    op.mass_diag = 2.0 * h / 3.0;
    op.mass_off = h / 6.0;
    return op;
}

/// One Crank-Nicolson step of i M u' + A u = 0:
///   (i M + dt/2 A) u_{n+1} = (i M - dt/2 A) u_n,
/// with the factorization cached on first use for each dt.
inline Eigen::VectorXcd fe_cn_step(const FeOperator& op, const Eigen::VectorXcd& u, double dt) {
    if (dt == 0.0) throw validation_error("fe_cn_step: need dt != 0");
    const int m = op.unknowns();
    if (u.size() != m) throw validation_error("fe_cn_step: state size mismatch");
    if (!op.cn.ready || op.cn.dt != dt) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            M(i, i) = op.mass_diag;
            if (i > 0) M(i, i - 1) = op.mass_off;
            if (i + 1 < m) M(i, i + 1) = op.mass_off;
        }
        const Eigen::MatrixXcd A = op.stiffness.cast<cplx>();
        const cplx iu(0.0, 1.0);
        Eigen::MatrixXcd b_plus = iu * M + (dt / 2.0) * A;
        op.cn.b_minus = iu * M - (dt / 2.0) * A;
        op.cn.lu = Eigen::PartialPivLU<Eigen::MatrixXcd>(std::move(b_plus));
        op.cn.dt = dt;
        op.cn.ready = true;
    }
    return op.cn.lu.solve(op.cn.b_minus * u);
}

enum class Scheme { spectral, fe };

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "spectral") return Scheme::spectral;
    if (s == "fe") return Scheme::fe;
    throw validation_error("unknown scheme '" + s + "' (expected spectral|fe)");
}

/// Space-time record of a run: per-step norm log plus snapshots every stride
/// steps (the t=0 state included).
struct SpaceTimeRecord {
    Scheme scheme = Scheme::spectral;
    std::vector<double> x;               // node coordinates of the stored values
    std::vector<double> t_norms;         // one entry per step (including t=0)
    std::vector<double> l2;              // L^2 (spectral) or M-weighted (fe) norm
    std::vector<double> hs;              // H^s norm: spectral multiplier / FE energy norm
    std::vector<double> t_snaps;
    std::vector<std::vector<cplx>> snaps;
};

namespace detail {

inline double spectral_hs_norm_sq(const ComplexField& u, double s) {
    std::vector<cplx> hat = fft_of(u.v);
    double acc = 0.0;
    for (int m = 0; m < u.grid.n; ++m)
        acc += (1.0 + std::pow(std::abs(u.grid.mode_k(m)), 2.0 * s)) * std::norm(hat[std::size_t(m)]);
    return u.grid.h() / double(u.grid.n) * acc;
}

} // namespace detail

/// Runs the configured simulation. u0_override replaces the Gaussian datum
/// (used by the sweeps, which start the solver from the assembled z(.,0)).
inline SpaceTimeRecord run_simulation(const SimConfig& cfg, Scheme scheme,
                                      const std::optional<ComplexField>& u0_override = std::nullopt) {
    cfg.validate(scheme == Scheme::spectral);
    SpaceTimeRecord rec;
    rec.scheme = scheme;
    const int steps = cfg.steps();

    if (scheme == Scheme::spectral) {
        const Grid1D grid = Grid1D::make_periodic(cfg.domain.left, cfg.domain.right, cfg.n);
        ComplexField u = u0_override ? *u0_override : gaussian_wavepacket(cfg, grid);
        if (!(u.grid == grid)) throw validation_error("run_simulation: override field grid mismatch");
        rec.x.resize(std::size_t(grid.n));
        for (int j = 0; j < grid.n; ++j) rec.x[std::size_t(j)] = grid.x(j);
        auto log_state = [&](int step) {
            rec.t_norms.push_back(cfg.dt * double(step));
            rec.l2.push_back(l2_norm(u));
            rec.hs.push_back(std::sqrt(detail::spectral_hs_norm_sq(u, cfg.s)));
        };
        log_state(0);
        rec.t_snaps.push_back(0.0);
        rec.snaps.push_back(u.v);
        for (int it = 1; it <= steps; ++it) {
            u = spectral_cn_step(u, cfg.s, cfg.dt);
            if (!std::isfinite(l2_norm(u)))
                throw numeric_error("run_simulation: NaN detected at step " + std::to_string(it));
            log_state(it);
            if (it % cfg.stride == 0 || it == steps) {
                rec.t_snaps.push_back(cfg.dt * double(it));
                rec.snaps.push_back(u.v);
            }
        }
        return rec;
    }

    const Grid1D grid = Grid1D::make_interval(cfg.domain.left, cfg.domain.right, cfg.n);
    const FeOperator op = assemble_fe(grid, cfg.s);
    const int m = op.unknowns();
    Eigen::VectorXcd u(m);
    if (u0_override) {
        if (u0_override->grid.n != grid.n) throw validation_error("run_simulation: override field grid mismatch");
        for (int i = 0; i < m; ++i) u[i] = u0_override->v[std::size_t(i + 1)];
    } else {
        ComplexField full = gaussian_wavepacket(cfg, grid);
        for (int i = 0; i < m; ++i) u[i] = full.v[std::size_t(i + 1)];
    }
    rec.x.resize(std::size_t(m));
    for (int i = 0; i < m; ++i) rec.x[std::size_t(i)] = grid.x(i + 1);
    auto log_state = [&](int step) {
        rec.t_norms.push_back(cfg.dt * double(step));
        const double mn = op.mass_norm(u);
        rec.l2.push_back(mn);
        rec.hs.push_back(std::sqrt(mn * mn + op.form_value(u)));
    };
    auto snapshot = [&](int step) {
        rec.t_snaps.push_back(cfg.dt * double(step));
        rec.snaps.emplace_back(u.data(), u.data() + m);
    };
    log_state(0);
    snapshot(0);
    for (int it = 1; it <= steps; ++it) {
        u = fe_cn_step(op, u, cfg.dt);
        if (!u.allFinite()) throw numeric_error("run_simulation: NaN detected at step " + std::to_string(it));
        log_state(it);
        if (it % cfg.stride == 0 || it == steps) snapshot(it);
    }
    return rec;
}

} // namespace fswkb
