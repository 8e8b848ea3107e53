#pragma once

#include <cmath>
#include <vector>

#include "fswkb/errors.hpp"

namespace fswkb {

/// Group velocity 2s |xi0|^{2s-1} of the rays. Singular at xi0 = 0 when s < 1/2.
inline double group_velocity(double s, double xi0) {
    if (!(s > 0.0 && s < 1.0)) throw validation_error("group_velocity: need s in (0,1)");
    if (xi0 == 0.0 && s < 0.5) throw validation_error("group_velocity: xi0 = 0 is singular for s < 1/2");
    return 2.0 * s * std::pow(std::abs(xi0), 2.0 * s - 1.0);
}

/// Bicharacteristic data (x0, xi0, branch sign, s); t0 = 0 by convention.
struct Ray {
    double x0 = 0.0;
    double xi0 = 1.0;
    int sign = +1; // +-1 branch of the Hamiltonian flow
    double s = 0.5;

    void validate() const {
        if (sign != 1 && sign != -1) throw validation_error("Ray: sign must be +-1");
        if (!(s > 0.0 && s < 1.0)) throw validation_error("Ray: need s in (0,1)");
        if (xi0 == 0.0 && s < 0.5) throw validation_error("Ray: xi0 = 0 is singular for s < 1/2");
    }
};

/// Explicit ray: x(t) = x0 + sign * 2s|xi0|^{2s-1} t.
inline double ray_position(const Ray& r, double t) {
    r.validate();
    if (t < 0.0) throw validation_error("ray_position: need t >= 0");
    return r.x0 + double(r.sign) * group_velocity(r.s, r.xi0) * t;
}

/// One state of the bicharacteristic flow (x, t, xi, tau).
struct BicharState {
    double x;
    double t;
    double xi;
    double tau;
};

/// Classical RK4 integration of the bicharacteristic system
///   x' = sign 2s|xi|^{2s-1},  t' = 1,  xi' = 0,  tau' = 0.
/// The right-hand side is constant along the flow, so the result is exact up
/// to round-off; the integrator exists as an independent cross-check.
inline std::vector<BicharState> integrate_bicharacteristics(const Ray& r, double t_end, double dt) {
    r.validate();
    if (!(dt > 0.0)) throw validation_error("integrate_bicharacteristics: need dt > 0");
    std::vector<BicharState> traj;
    const double tau0 = std::pow(std::abs(r.xi0), 2.0 * r.s);
    BicharState st{r.x0, 0.0, r.xi0, tau0};
    traj.push_back(st);
    auto xdot = [&](double xi) { return double(r.sign) * 2.0 * r.s * std::pow(std::abs(xi), 2.0 * r.s - 1.0); };
    while (st.t < t_end - 1e-15) {
        const double step = std::min(dt, t_end - st.t);
        // xi and tau have zero derivative; x' depends on xi only
        const double k1 = xdot(st.xi);
        const double k2 = xdot(st.xi);
        const double k3 = xdot(st.xi);
        const double k4 = xdot(st.xi);
        st.x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        st.t += step;
        traj.push_back(st);
    }
    return traj;
}

/// Bounded spatial domain for the reflected billiard dynamics.
struct BoundedDomain {
    double left = -1.0;
    double right = 1.0;

    void validate() const {
        if (!(left < right)) throw validation_error("BoundedDomain: need left < right");
    }
    double length() const { return right - left; }
    bool contains(double x) const { return x > left && x < right; }
};

struct PathPoint {
    double t;
    double x;
};

inline constexpr long maximum_reflections = 1000000;

/// Specular 1-D reflection: velocity sign flips at each wall, speed preserved.
/// Returns ordered breakpoints including the start (0, x0) and the endpoint
/// (t_end, x(t_end)). A zero-velocity ray yields the constant segment.
inline std::vector<PathPoint> reflect_ray(const Ray& r, const BoundedDomain& dom, double t_end) {
    r.validate();
    dom.validate();
    if (!dom.contains(r.x0)) throw validation_error("reflect_ray: x0 must lie inside the domain");
    if (!(t_end >= 0.0)) throw validation_error("reflect_ray: need t_end >= 0");

    std::vector<PathPoint> path;
    path.push_back({0.0, r.x0});
    double v = double(r.sign) * group_velocity(r.s, r.xi0);
    if (v == 0.0 || t_end == 0.0) {
        path.push_back({t_end, r.x0});
        return path;
    }
    double t = 0.0, x = r.x0;
    long bounces = 0;
    while (true) {
        const double wall = (v > 0.0) ? dom.right : dom.left;
        const double t_hit = t + (wall - x) / v;
        if (t_hit >= t_end) {
            path.push_back({t_end, x + v * (t_end - t)});
            return path;
        }
        t = t_hit;
        x = wall;
        v = -v;
        path.push_back({t, x});
        if (++bounces > maximum_reflections)
            throw numeric_error("reflect_ray: reflection cap exceeded (degenerate near-zero period)");
    }
}

/// Ray position under reflections, evaluated from the breakpoint path.
inline double reflected_position(const std::vector<PathPoint>& path, double t) {
    if (path.size() < 2) throw validation_error("reflected_position: degenerate path");
    if (t <= path.front().t) return path.front().x;
    if (t >= path.back().t) return path.back().x;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (t <= path[i].t) {
            const auto& p0 = path[i - 1];
            const auto& p1 = path[i];
            const double w = (t - p0.t) / (p1.t - p0.t);
            return p0.x + w * (p1.x - p0.x);
        }
    }
    return path.back().x;
}

} // namespace fswkb
