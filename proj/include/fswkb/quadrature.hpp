#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fswkb/errors.hpp"

namespace fswkb {

/// Controls for the singular-integral quadratures: inner Taylor radius delta,
/// outer cutoff beyond which analytic tail corrections take over, and the
/// adaptive Gauss-Kronrod tolerance.
struct QuadratureParams {
    double delta = 1e-3;
    double cutoff = 1e4;
    double rel_tol = 1e-12;
    int max_depth = 17;
};

namespace quad {

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureParams& p = {}) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, p.max_depth, p.rel_tol, &err);
    if (!std::isfinite(v))
        throw numeric_error("quadrature: non-finite result on [" + std::to_string(a) + "," + std::to_string(b) + "]");
    return v;
}

/// Asymptotic tails of oscillatory integrals by repeated integration by parts:
///   int_R^inf cos(r) r^{-nu} dr  and  int_R^inf sin(r) r^{-nu} dr,  nu > 0.
/// Four terms give a remainder of order R^{-nu-4}.
struct OscTails {
    double cos_tail;
    double sin_tail;
};

inline OscTails oscillatory_tails(double R, double nu) {
    // With c_m = prod_{i<m}(nu+i) R^{-nu-m}:
    //   int cos = -sinR*c0 + cosR*c1 + sinR*c2 - cosR*c3 + ...
    //   int sin = +cosR*c0 + sinR*c1 - cosR*c2 - sinR*c3 + ...
    const double sR = std::sin(R), cR = std::cos(R);
    double c = std::pow(R, -nu);
    double cosv = 0.0, sinv = 0.0;
    const double cos_coef[4] = {-sR, cR, sR, -cR};
    const double sin_coef[4] = {cR, sR, -cR, -sR};
    for (int m = 0; m < 4; ++m) {
        cosv += cos_coef[m] * c;
        sinv += sin_coef[m] * c;
        c *= (nu + double(m)) / R;
    }
    return {cosv, sinv};
}

/// P(mu) = int_0^inf r^{mu-1} (1 - cos r) dr for mu in (-2, 0).
/// Inner series on (0, delta), adaptive quadrature on [delta, R], analytic tail.
inline double one_minus_cos_moment(double mu, const QuadratureParams& p = {}) {
    if (!(mu > -2.0 && mu < 0.0)) throw validation_error("one_minus_cos_moment: need mu in (-2,0)");
    const double d = p.delta, R = p.cutoff;
    // (1-cos r) = r^2/2 - r^4/24 + r^6/720 - ...
    double head = std::pow(d, mu + 2.0) / (2.0 * (mu + 2.0))
                - std::pow(d, mu + 4.0) / (24.0 * (mu + 4.0))
                + std::pow(d, mu + 6.0) / (720.0 * (mu + 6.0));
    double mid = integrate([mu](double r) { return std::pow(r, mu - 1.0) * (1.0 - std::cos(r)); }, d, R, p);
    // tail: int_R^inf r^{mu-1} dr - int_R^inf cos(r) r^{mu-1} dr
    double tail = -std::pow(R, mu) / mu - oscillatory_tails(R, 1.0 - mu).cos_tail;
    return head + mid + tail;
}

/// Q(mu) = int_0^inf r^{mu-1} sin r dr for mu in (-1, 1), mu != 0.
inline double sin_moment(double mu, const QuadratureParams& p = {}) {
    if (!(mu > -1.0 && mu < 1.0)) throw validation_error("sin_moment: need mu in (-1,1)");
    const double d = p.delta, R = p.cutoff;
    // sin r = r - r^3/6 + r^5/120 - ...
    double head = std::pow(d, mu + 1.0) / (mu + 1.0)
                - std::pow(d, mu + 3.0) / (6.0 * (mu + 3.0))
                + std::pow(d, mu + 5.0) / (120.0 * (mu + 5.0));
    double mid = integrate([mu](double r) { return std::pow(r, mu - 1.0) * std::sin(r); }, d, R, p);
    double tail = oscillatory_tails(R, 1.0 - mu).sin_tail;
    return head + mid + tail;
}

} // namespace quad
} // namespace fswkb
