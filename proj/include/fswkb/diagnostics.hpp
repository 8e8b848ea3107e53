#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fswkb/frac_core.hpp"
#include "fswkb/grid.hpp"

namespace fswkb {

/// H^s norm sqrt(||u||_{L^2}^2 + ||(-Lap)^{s/2} u||_{L^2}^2), spectrally.
inline double hs_norm(const ComplexField& u, double s) {
    if (!u.grid.periodic) throw validation_error("hs_norm: periodic grid required");
    std::vector<cplx> hat = fft_of(u.v);
    double acc = 0.0;
    for (int m = 0; m < u.grid.n; ++m)
        acc += (1.0 + std::pow(std::abs(u.grid.mode_k(m)), 2.0 * s)) * std::norm(hat[std::size_t(m)]);
    return std::sqrt(u.grid.h() / double(u.grid.n) * acc);
}

/// Seminorm part ||(-Lap)^{s/2} u||_{L^2}^2 alone.
inline double hs_seminorm_sq(const ComplexField& u, double s) {
    if (!u.grid.periodic) throw validation_error("hs_seminorm_sq: periodic grid required");
    std::vector<cplx> hat = fft_of(u.v);
    double acc = 0.0;
    for (int m = 0; m < u.grid.n; ++m)
        acc += std::pow(std::abs(u.grid.mode_k(m)), 2.0 * s) * std::norm(hat[std::size_t(m)]);
    return u.grid.h() / double(u.grid.n) * acc;
}

/// ||u - z||_{L^2} on a shared grid.
inline double compare_fields(const ComplexField& u, const ComplexField& z) {
    if (!(u.grid == z.grid)) throw validation_error("compare_fields: grid mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < u.v.size(); ++j) acc += std::norm(u.v[j] - z.v[j]);
    return std::sqrt(u.grid.h() * acc);
}

/// ||u0 - z(.,0)||_{L^2}; the t=0 mismatch of the theorem.
inline double initial_mismatch(const ComplexField& u0, const ComplexField& z0) {
    return compare_fields(u0, z0);
}

namespace detail {

// Distance to a center on a periodic interval of length L.
inline double periodic_distance(double x, double center, double L) {
    double d = std::fmod(std::abs(x - center), L);
    if (d > 0.5 * L) d = L - d;
    return d;
}

// Zero-extends an interval field into a periodic box of 4x the width (next
// power of two point count) so the seminorm density applies spectrally.
inline ComplexField embed_zero_extended(const ComplexField& u) {
    const double L = u.grid.length();
    const double mid = 0.5 * (u.grid.a + u.grid.b);
    int n = 8;
    while (n < 4 * u.grid.n) n *= 2;
    const Grid1D big = Grid1D::make_periodic(mid - 2.0 * L, mid + 2.0 * L, n);
    ComplexField out(big);
    for (int j = 0; j < big.n; ++j) {
        const double x = big.x(j);
        if (x <= u.grid.a || x >= u.grid.b) continue;
        const double pos = (x - u.grid.a) / u.grid.h();
        const int i = int(std::floor(pos));
        const double w = pos - double(i);
        const cplx left = u.v[std::size_t(std::min(i, u.grid.n - 1))];
        const cplx right = u.v[std::size_t(std::min(i + 1, u.grid.n - 1))];
        out.v[std::size_t(j)] = left * (1.0 - w) + right * w;
    }
    return out;
}

} // namespace detail

/// Seminorm energy outside the ball {|x - ray_center| > radius}:
///   int_{|x-x(t)|>radius} |(-Lap)^{s/2} z|^2 dx,
/// trapezoid rule with a sharp indicator. Interval fields are zero-extended
/// into a wider periodic box before the spectral multiplier is applied.
inline double off_ray_energy(const ComplexField& z, double ray_center, double radius, double s) {
    if (!(radius > 0.0)) throw validation_error("off_ray_energy: need radius > 0");
    const ComplexField zp = z.grid.periodic ? z : detail::embed_zero_extended(z);
    const ComplexField semi = apply_multiplier(zp, [s](double k) { return cplx(std::pow(std::abs(k), s), 0.0); });
    const double L = zp.grid.length();
    double acc = 0.0;
    for (int j = 0; j < zp.grid.n; ++j) {
        if (detail::periodic_distance(zp.grid.x(j), ray_center, L) > radius) acc += std::norm(semi.v[std::size_t(j)]);
    }
    return zp.grid.h() * acc;
}

/// Complementary in-ball seminorm energy (off_ray_energy with the indicator flipped).
inline double in_ray_energy(const ComplexField& z, double ray_center, double radius, double s) {
    if (!(radius > 0.0)) throw validation_error("in_ray_energy: need radius > 0");
    const ComplexField zp = z.grid.periodic ? z : detail::embed_zero_extended(z);
    const ComplexField semi = apply_multiplier(zp, [s](double k) { return cplx(std::pow(std::abs(k), s), 0.0); });
    const double L = zp.grid.length();
    double acc = 0.0;
    for (int j = 0; j < zp.grid.n; ++j) {
        if (detail::periodic_distance(zp.grid.x(j), ray_center, L) <= radius) acc += std::norm(semi.v[std::size_t(j)]);
    }
    return zp.grid.h() * acc;
}

/// Center of mass int x |u|^2 dx / int |u|^2 dx by the trapezoid rule.
inline double center_of_mass(const ComplexField& u) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < u.grid.n; ++j) {
        const double w = std::norm(u.v[std::size_t(j)]);
        num += u.grid.x(j) * w;
        den += w;
    }
    if (den <= 0.0) throw validation_error("center_of_mass: zero field");
    return num / den;
}

/// Center of mass of a value array over explicit node coordinates.
inline double center_of_mass(const std::vector<double>& x, const std::vector<cplx>& v) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double w = std::norm(v[j]);
        num += x[j] * w;
        den += w;
    }
    if (den <= 0.0) throw validation_error("center_of_mass: zero field");
    return num / den;
}

/// Log-log scaling fit of (eps, value) samples.
struct ScalingReport {
    std::string metric_name;
    std::vector<std::pair<double, double>> samples; // (eps, value), eps strictly decreasing
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int dropped = 0; // nonpositive values removed before fitting
};

/// Least-squares fit of log(value) against log(eps). Nonpositive values are
/// dropped with a count; fewer than 4 surviving samples is an error.
inline ScalingReport fit_scaling(const std::string& metric_name,
                                 const std::vector<std::pair<double, double>>& samples) {
    ScalingReport rep;
    rep.metric_name = metric_name;
    for (const auto& s : samples) {
        if (s.second > 0.0)
            rep.samples.push_back(s);
        else
            ++rep.dropped;
    }
    if (rep.samples.size() < 4)
        throw validation_error("fit_scaling(" + metric_name + "): need at least 4 positive samples, have " +
                               std::to_string(rep.samples.size()));
    std::sort(rep.samples.begin(), rep.samples.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t n = rep.samples.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& s : rep.samples) {
        const double lx = std::log(s.first), ly = std::log(s.second);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = double(n);
    const double denom = dn * sxx - sx * sx;
    rep.slope = (dn * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / dn;
    double ssr = 0.0, sst = 0.0;
    const double ymean = sy / dn;
    for (const auto& s : rep.samples) {
        const double ly = std::log(s.second);
        const double pred = rep.slope * std::log(s.first) + rep.intercept;
        ssr += (ly - pred) * (ly - pred);
        sst += (ly - ymean) * (ly - ymean);
    }
    rep.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    if (!std::isfinite(rep.slope)) throw numeric_error("fit_scaling(" + metric_name + "): non-finite slope");
    return rep;
}

} // namespace fswkb
