#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "fswkb/grid.hpp"
#include "fswkb/quadrature.hpp"

namespace fswkb {

/// Normalization constant of the singular-integral fractional Laplacian,
///   c_{1,s} = s 4^s Gamma(s+1/2) / (sqrt(pi) Gamma(1-s)) ,  0 < s < 1.
inline double normalization_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("normalization_constant: need s in (0,1), got s=" + std::to_string(s));
    return s * std::pow(2.0, 2.0 * s) * std::tgamma(s + 0.5) / (std::sqrt(pi) * std::tgamma(1.0 - s));
}

/// Quadrature of the defining integral int_R (1-cos z)/|z|^{1+2s} dz, whose
/// reciprocal is c_{1,s}. Dual route to normalization_constant.
inline double inverse_c1s_integral(double s, const QuadratureParams& p = {}) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("inverse_c1s_integral: need s in (0,1)");
    return 2.0 * quad::one_minus_cos_moment(-2.0 * s, p);
}

/// Spectral fractional Laplacian: multiplier |k|^{2s} on a periodic grid.
inline ComplexField apply_fraclap_spectral(const ComplexField& f, double s) {
    if (!f.grid.periodic) throw validation_error("apply_fraclap_spectral: periodic grid required");
    if (!(s > 0.0 && s < 1.0)) throw validation_error("apply_fraclap_spectral: need s in (0,1)");
    return apply_multiplier(f, [s](double k) { return cplx(std::pow(std::abs(k), 2.0 * s), 0.0); });
}

/// Fractional derivative D^beta with the transform rule F[D^beta f] = -|k|^beta F[f].
inline ComplexField frac_derivative(const ComplexField& f, double beta) {
    if (!f.grid.periodic) throw validation_error("frac_derivative: periodic grid required");
    if (!(beta > 0.0)) throw validation_error("frac_derivative: need beta > 0");
    return apply_multiplier(f, [beta](double k) { return cplx(-std::pow(std::abs(k), beta), 0.0); });
}

namespace detail {

// 5-point second derivative of a callable, step scaled to the quadrature delta.
inline cplx second_derivative(const std::function<cplx(double)>& f, double x, double step) {
    const cplx fm2 = f(x - 2 * step), fm1 = f(x - step), f0 = f(x), fp1 = f(x + step), fp2 = f(x + 2 * step);
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * step * step);
}

} // namespace detail

/// Pointwise singular-integral fractional Laplacian of a smooth callable:
///   c1s * int_0^inf (2 f(x) - f(x+r) - f(x-r)) / r^{1+2s} dr,
/// with a Taylor-corrected inner segment and an analytic outer tail
/// 2 f(x) R^{-2s}/(2s), so f is assumed negligible beyond |y| ~ x +- cutoff.
inline cplx apply_fraclap_direct(const std::function<cplx(double)>& f, double s, double x,
                                 const QuadratureParams& p = {}) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("apply_fraclap_direct: need s in (0,1)");
    const double c1s = normalization_constant(s);
    const double d = p.delta, R = p.cutoff;
    const cplx f2 = detail::second_derivative(f, x, std::max(d, 1e-5));
    // 2f(x)-f(x+r)-f(x-r) ~ -f''(x) r^2 on (0, delta)
    const cplx head = -f2 * std::pow(d, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    const double re_mid = quad::integrate(
        [&](double r) { return std::real(2.0 * f(x) - f(x + r) - f(x - r)) * std::pow(r, -1.0 - 2.0 * s); }, d, R, p);
    const double im_mid = quad::integrate(
        [&](double r) { return std::imag(2.0 * f(x) - f(x + r) - f(x - r)) * std::pow(r, -1.0 - 2.0 * s); }, d, R, p);
    const cplx tail = 2.0 * f(x) * std::pow(R, -2.0 * s) / (2.0 * s);
    return c1s * (head + cplx(re_mid, im_mid) + tail);
}

/// Bilinear remainder of the fractional product rule,
///   I_s(f,g)(x) = c1s PV int (f(x)-f(y))(g(x)-g(y))/|x-y|^{1+2s} dy,
/// so that (-Lap)^s(fg) = f (-Lap)^s g + g (-Lap)^s f - I_s(f,g).
inline cplx bilinear_Is(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                        double s, double x, const QuadratureParams& p = {}) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("bilinear_Is: need s in (0,1)");
    const double c1s = normalization_constant(s);
    const double d = p.delta, R = p.cutoff;
    auto fd = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    auto gd = [&](double step) { return (g(x + step) - g(x - step)) / (2.0 * step); };
    const double fdstep = std::max(d, 1e-5);
    // integrand ~ f'(x) g'(x) r^2 near r = 0 (both shifts contribute r^2 each... combined below)
    const cplx head = 2.0 * fd(fdstep) * gd(fdstep) * std::pow(d, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    auto integrand = [&](double r) {
        return (f(x) - f(x + r)) * (g(x) - g(x + r)) + (f(x) - f(x - r)) * (g(x) - g(x - r));
    };
    const double re_mid = quad::integrate([&](double r) { return std::real(integrand(r)) * std::pow(r, -1.0 - 2.0 * s); }, d, R, p);
    const double im_mid = quad::integrate([&](double r) { return std::imag(integrand(r)) * std::pow(r, -1.0 - 2.0 * s); }, d, R, p);
    const cplx tail = 2.0 * f(x) * g(x) * std::pow(R, -2.0 * s) / (2.0 * s);
    return c1s * (head + cplx(re_mid, im_mid) + tail);
}

/// Branch convention for q^gamma at negative q in the C_gamma integrals.
enum class Branch { principal, absolute_value };

inline std::string to_string(Branch b) { return b == Branch::principal ? "principal" : "absolute"; }

struct CgammaOptions {
    Branch branch = Branch::principal;
    QuadratureParams quad;
};

/// C_gamma with convergence diagnostics of its defining integral.
struct CgammaResult {
    cplx value;
    bool abs_convergent; // absolute convergence of the defining integral
    bool pv_convergent;  // convergence as a symmetric limit under the chosen branch
};

namespace detail {

// I(gamma) = PV int_R (1-e^{iq})/|q|^{1+2s} q^gamma dq reduced to [0,inf):
// with mu = gamma-2s, P(mu) = int r^{mu-1}(1-cos r), Q(mu) = int r^{mu-1} sin r:
//   principal (q^g = |q|^g e^{i pi g} for q<0):
//     Re I = (1+cos(pi g)) P - sin(pi g) Q
//     Im I = sin(pi g) P - (1-cos(pi g)) Q
//   absolute (q^g = |q|^g):  I = 2 P  (the sin parts cancel by oddness).
inline cplx cgamma_integral(double s, double gamma, Branch branch, const QuadratureParams& p) {
    const double mu = gamma - 2.0 * s;
    const double P = quad::one_minus_cos_moment(mu, p);
    if (branch == Branch::absolute_value) return cplx(2.0 * P, 0.0);
    const double Q = quad::sin_moment(mu, p);
    const double cg = std::cos(pi * gamma), sg = std::sin(pi * gamma);
    return cplx((1.0 + cg) * P - sg * Q, sg * P - (1.0 - cg) * Q);
}

} // namespace detail

/// Principal-value constant
///   C_gamma = c1s xi0^{2s-gamma}/Gamma(1+gamma) PV int (1-e^{iq})/|q|^{1+2s} q^gamma dq.
/// Requires gamma < 2s for convergence at infinity. Under the principal branch
/// the symmetric limit additionally needs gamma > 2s-1; the absolute branch
/// converges as a PV for every gamma in (2s-2, 2s).
inline CgammaResult compute_C_gamma(double s, double gamma, double xi0, const CgammaOptions& opt = {}) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("compute_C_gamma: need s in (0,1)");
    if (!(gamma > 0.0)) throw validation_error("compute_C_gamma: need gamma > 0");
    if (!(gamma < 2.0 * s))
        throw numeric_error("compute_C_gamma: defining integral diverges at infinity for gamma >= 2s (gamma=" +
                            std::to_string(gamma) + ", s=" + std::to_string(s) + ")");
    CgammaResult out{};
    out.abs_convergent = gamma > 2.0 * s - 1.0;
    out.pv_convergent = (opt.branch == Branch::absolute_value) ? true : out.abs_convergent;
    if (!out.pv_convergent)
        throw numeric_error("compute_C_gamma: principal-branch PV diverges at the origin for gamma <= 2s-1 "
                            "(gamma=" + std::to_string(gamma) + ", s=" + std::to_string(s) + "); "
                            "this occurs for gamma=s/2 once s >= 2/3");
    const cplx I = detail::cgamma_integral(s, gamma, opt.branch, opt.quad);
    out.value = normalization_constant(s) * std::pow(xi0, 2.0 * s - gamma) / std::tgamma(1.0 + gamma) * I;
    return out;
}

/// Order s with its derived constants: c_{1,s}, beta = s/2, and the three
/// cascade constants C_{s/2}, C_s, C_{3s/2} at carrier frequency xi0.
struct FracContext {
    double s = 0.5;
    double c1s = 0.0;
    double beta = 0.25; // s/2 throughout
    double xi0 = 0.0;
    Branch branch = Branch::principal;
    std::array<cplx, 3> C{}; // C_{s/2}, C_s, C_{3s/2}

    cplx C_half() const { return C[0]; }
    cplx C_one() const { return C[1]; }
    cplx C_three_half() const { return C[2]; }

    static FracContext make(double s, double xi0, const CgammaOptions& opt = {}) {
        if (!(s > 0.0 && s < 1.0)) throw validation_error("FracContext: need s in (0,1), got s=" + std::to_string(s));
        if (xi0 == 0.0) throw validation_error("FracContext: need xi0 != 0");
        FracContext ctx;
        ctx.s = s;
        ctx.c1s = normalization_constant(s);
        ctx.beta = s / 2.0;
        ctx.xi0 = xi0;
        ctx.branch = opt.branch;
        const double gammas[3] = {s / 2.0, s, 1.5 * s};
        for (int i = 0; i < 3; ++i) ctx.C[std::size_t(i)] = compute_C_gamma(s, gammas[i], xi0, opt).value;
        return ctx;
    }

    /// Same context with all three C_gamma replaced (test hook for degenerate cascades).
    FracContext with_constants(const std::array<cplx, 3>& Cs) const {
        FracContext ctx = *this;
        ctx.C = Cs;
        return ctx;
    }
};

} // namespace fswkb
