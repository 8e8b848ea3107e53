// Independent test oracles. Everything here recomputes expected values by a
// route different from the library implementation it checks: naive DFT
// against the radix-2 transform, direct double quadrature against the
// closed-form FE stiffness, and the Gamma-function continuation formulas
// against the oscillatory quadratures behind C_gamma.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fswkb/grid.hpp"

namespace oracles {

using fswkb::cplx;
using fswkb::pi;

// O(n^2) reference DFT with the library's convention F[m] = sum f_j e^{-2pi i jm/n}.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& f) {
    const std::size_t n = f.size();
    std::vector<cplx> out(n, cplx(0.0));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t j = 0; j < n; ++j)
            out[m] += f[j] * std::polar(1.0, -2.0 * pi * double(j * m % n) / double(n));
    return out;
}

// Adaptive Simpson, independent of the boost Gauss-Kronrod used by the library.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 28) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double aa, double bb, double faa, double fbb, double fmm, double whole, int d) -> double {
        const double mm = 0.5 * (aa + bb);
        const double lm = 0.5 * (aa + mm), rm = 0.5 * (mm + bb);
        const double flm = f(lm), frm = f(rm);
        const double left = (mm - aa) / 6.0 * (faa + 4.0 * flm + fmm);
        const double right = (bb - mm) / 6.0 * (fmm + 4.0 * frm + fbb);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(aa, mm, faa, fmm, flm, left, d - 1) + rec(mm, bb, fmm, fbb, frm, right, d - 1);
    };
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fb, fm, whole, depth);
}

// Continuation formulas for the oscillatory moments:
//   P(mu) = int_0^inf r^{mu-1}(1-cos r) dr = -Gamma(mu) cos(pi mu / 2)
//   Q(mu) = int_0^inf r^{mu-1} sin r dr    =  Gamma(mu) sin(pi mu / 2)
inline double P_closed(double mu) { return -std::tgamma(mu) * std::cos(pi * mu / 2.0); }
inline double Q_closed(double mu) { return std::tgamma(mu) * std::sin(pi * mu / 2.0); }

// Closed form of the principal-branch C_gamma integral:
//   I(gamma) = -2 cos(pi s) Gamma(gamma - 2s) e^{i pi gamma / 2}.
inline cplx I_principal_closed(double s, double gamma) {
    return -2.0 * std::cos(pi * s) * std::tgamma(gamma - 2.0 * s) *
           std::polar(1.0, pi * gamma / 2.0);
}

inline cplx I_absolute_closed(double s, double gamma) { return cplx(2.0 * P_closed(gamma - 2.0 * s), 0.0); }

// ---- direct double-quadrature oracle for the FE stiffness entries ----
// a(phi_i, phi_j) = (c1s/2) [ int_0^inf r^{-1-2s} inner(r) dr ], where
// inner(r) = int [phi_i(x)-phi_i(x+r)][phi_j(x)-phi_j(x+r)]
//          + [phi_i(x)-phi_i(x-r)][phi_j(x)-phi_j(x-r)] dx.
// The x-integral is exact composite Gauss on the hat breakpoints; the r
// integral is adaptive with a Taylor start and the inner(r->inf) = 4 M_ij
// analytic tail.
inline double hat(double x, double c, double h) {
    const double t = 1.0 - std::abs(x - c) / h;
    return t > 0.0 ? t : 0.0;
}

inline double fe_inner_exact(double r, int k, double h) {
    const double ci = 0.0, cj = double(k) * h;
    std::vector<double> bps;
    for (double c : {ci, cj})
        for (double d : {-h, 0.0, h})
            for (double shift : {0.0, -r, r}) bps.push_back(c + d + shift);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              bps.end());
    const double gx[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double total = 0.0;
    for (std::size_t i = 1; i < bps.size(); ++i) {
        const double a = bps[i - 1], b = bps[i];
        if (b - a < 1e-15) continue;
        for (int q = 0; q < 3; ++q) {
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
            const double w = 0.5 * (b - a) * gw[q];
            const double plus = (hat(x, ci, h) - hat(x + r, ci, h)) * (hat(x, cj, h) - hat(x + r, cj, h));
            const double minus = (hat(x, ci, h) - hat(x - r, ci, h)) * (hat(x, cj, h) - hat(x - r, cj, h));
            total += w * (plus + minus);
        }
    }
    return total;
}

inline double fe_entry_direct(int k, double s, double h, double c1s) {
    const double delta = 1e-5 * h;
    // inner(r) ~ 2 r^2 int phi_i' phi_j' for small r
    const double ip = (k == 0 ? 2.0 : (std::abs(k) == 1 ? -1.0 : 0.0)) / h;
    double acc = 2.0 * ip * std::pow(delta, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    auto f = [&](double r) { return fe_inner_exact(r, k, h) * std::pow(r, -1.0 - 2.0 * s); };
    // split the r-axis at the breakpoint-collision radii
    std::vector<double> cuts{delta};
    for (int m = 1; m <= std::abs(k) + 3; ++m) cuts.push_back(double(m) * h);
    const double Rbig = (std::abs(k) + 400.0) * h;
    cuts.push_back(Rbig);
    for (std::size_t i = 1; i < cuts.size(); ++i) acc += adaptive_simpson(f, cuts[i - 1], cuts[i], 1e-13);
    // tail: inner(r) = 4 M_ij for r beyond the support span
    const double Mij = h * (k == 0 ? 2.0 / 3.0 : (std::abs(k) == 1 ? 1.0 / 6.0 : 0.0));
    acc += 4.0 * Mij * std::pow(Rbig, -2.0 * s) / (2.0 * s);
    return 0.5 * c1s * acc;
}

} // namespace oracles
