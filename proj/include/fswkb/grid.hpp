#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fswkb/errors.hpp"
#include "fswkb/fft.hpp"

namespace fswkb {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Uniform 1-D mesh on [a,b). Periodic grids must have a power-of-two point
/// count n >= 8 so spectral transforms apply directly.
struct Grid1D {
    double a = -1.0;
    double b = 1.0;
    int n = 0;
    bool periodic = false;

    double length() const { return b - a; }
    double h() const { return (b - a) / double(n); }
    double x(int j) const { return a + h() * double(j); }

    static Grid1D make_periodic(double a, double b, int n) {
        if (!(a < b)) throw validation_error("Grid1D: need a < b");
        if (n < 8 || !detail::is_pow2(std::size_t(n)))
            throw validation_error("Grid1D: periodic grid needs n >= 8 and a power of two, got n=" + std::to_string(n));
        return Grid1D{a, b, n, true};
    }

    static Grid1D make_interval(double a, double b, int n) {
        if (!(a < b)) throw validation_error("Grid1D: need a < b");
        if (n < 2) throw validation_error("Grid1D: need n >= 2");
        return Grid1D{a, b, n, false};
    }

    /// Physical wavenumber of transform bin m (standard FFT ordering).
    double mode_k(int m) const {
        const int half = n / 2;
        const int signed_m = (m < half) ? m : m - n;
        return 2.0 * pi / length() * double(signed_m);
    }

    /// Signed mode index whose wavenumber is closest to k.
    int nearest_mode(double k) const {
        double m = k * length() / (2.0 * pi);
        return int(std::lround(m));
    }

    /// Wavenumber of signed mode index m.
    double mode_freq(int m) const { return 2.0 * pi / length() * double(m); }

    bool operator==(const Grid1D& o) const {
        return a == o.a && b == o.b && n == o.n && periodic == o.periodic;
    }
};

/// Complex-valued grid function.
struct ComplexField {
    Grid1D grid;
    std::vector<cplx> v;

    ComplexField() = default;
    explicit ComplexField(const Grid1D& g) : grid(g), v(std::size_t(g.n), cplx(0.0)) {}
    ComplexField(const Grid1D& g, std::vector<cplx> values) : grid(g), v(std::move(values)) {
        if (int(v.size()) != g.n) throw validation_error("ComplexField: value count does not match grid");
    }

    int size() const { return grid.n; }

    static ComplexField sample(const Grid1D& g, const std::function<cplx(double)>& f) {
        ComplexField out(g);
        for (int j = 0; j < g.n; ++j) out.v[std::size_t(j)] = f(g.x(j));
        return out;
    }
};

/// All signed wavenumbers in transform bin order.
inline std::vector<double> wavenumbers(const Grid1D& g) {
    std::vector<double> k(std::size_t(g.n));
    for (int m = 0; m < g.n; ++m) k[std::size_t(m)] = g.mode_k(m);
    return k;
}

/// Applies a Fourier multiplier m(k) on a periodic grid.
inline ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(double)>& mult) {
    if (!f.grid.periodic) throw validation_error("apply_multiplier: periodic grid required");
    std::vector<cplx> hat = fft_of(f.v);
    for (int m = 0; m < f.grid.n; ++m) hat[std::size_t(m)] *= mult(f.grid.mode_k(m));
    fft_inverse(hat);
    return ComplexField(f.grid, std::move(hat));
}

/// Discrete L^2 norm sqrt(h * sum |u_j|^2).
inline double l2_norm(const ComplexField& f) {
    double s = 0.0;
    for (const auto& z : f.v) s += std::norm(z);
    return std::sqrt(f.grid.h() * s);
}

inline ComplexField operator-(const ComplexField& u, const ComplexField& w) {
    if (!(u.grid == w.grid)) throw validation_error("field subtraction: grid mismatch");
    ComplexField out(u.grid);
    for (std::size_t j = 0; j < u.v.size(); ++j) out.v[j] = u.v[j] - w.v[j];
    return out;
}

inline ComplexField operator+(const ComplexField& u, const ComplexField& w) {
    if (!(u.grid == w.grid)) throw validation_error("field addition: grid mismatch");
    ComplexField out(u.grid);
    for (std::size_t j = 0; j < u.v.size(); ++j) out.v[j] = u.v[j] + w.v[j];
    return out;
}

inline ComplexField operator*(cplx c, const ComplexField& u) {
    ComplexField out(u.grid);
    for (std::size_t j = 0; j < u.v.size(); ++j) out.v[j] = c * u.v[j];
    return out;
}

} // namespace fswkb
