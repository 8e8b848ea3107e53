#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fswkb/rays.hpp"

namespace fswkb {

/// Control region: disjoint open subintervals of the spatial domain.
struct ControlRegion {
    std::vector<std::pair<double, double>> intervals;

    void validate(const BoundedDomain& dom) const {
        if (intervals.empty()) throw validation_error("ControlRegion: empty region");
        auto sorted = intervals;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const auto& [l, r] = sorted[i];
            if (!(l < r)) throw validation_error("ControlRegion: degenerate interval");
            if (l < dom.left - 1e-15 || r > dom.right + 1e-15)
                throw validation_error("ControlRegion: interval outside the domain");
            if (i > 0 && sorted[i - 1].second > l)
                throw validation_error("ControlRegion: intervals overlap");
        }
    }

    bool contains(double x) const {
        for (const auto& [l, r] : intervals)
            if (x > l && x < r) return true;
        return false;
    }
};

inline constexpr double infinite_time = std::numeric_limits<double>::infinity();

/// First time (an infimum) at which the reflected ray path meets the open
/// region; infinite_time when it never does within the path horizon.
/// Exact segment-interval intersection on the piecewise-linear path, so the
/// result carries no marching tolerance.
inline double first_hit_time(const std::vector<PathPoint>& path, const ControlRegion& region) {
    if (region.contains(path.front().x)) return 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const auto& p0 = path[i - 1];
        const auto& p1 = path[i];
        if (p1.t <= p0.t) continue;
        const double v = (p1.x - p0.x) / (p1.t - p0.t);
        if (v == 0.0) {
            if (region.contains(p0.x)) return p0.t;
            continue;
        }
        double best = infinite_time;
        for (const auto& [l, r] : region.intervals) {
            // x(t) = p0.x + v (t - p0.t) lies in (l,r) on the open time window
            // (t0 + min(ta,tb), t0 + max(ta,tb)) intersected with the segment
            const double ta = (l - p0.x) / v;
            const double tb = (r - p0.x) / v;
            const double enter = p0.t + std::min(ta, tb);
            const double exit = p0.t + std::max(ta, tb);
            const double lo = std::max(enter, p0.t);
            const double hi = std::min(exit, p1.t);
            if (lo < hi) best = std::min(best, lo);
        }
        if (best < infinite_time) return best;
    }
    return infinite_time;
}

/// Observability verdict over the sampled rays. A negative verdict carries an
/// exact witness ray; a positive one holds for the sampled set only.
struct GccVerdict {
    bool observable = false;
    std::optional<Ray> witness;
    std::optional<double> min_time_estimate; // worst first-hit time over the sample set
};

/// Geometric Control Condition on finite sample grids: every sampled ray
/// (x0, xi0, +-) must meet region x (0,T) under specular reflections.
inline GccVerdict check_gcc(const ControlRegion& region, const BoundedDomain& dom, double T, double s,
                            const std::vector<double>& freq_set, const std::vector<double>& x0_samples) {
    dom.validate();
    region.validate(dom);
    if (!(T > 0.0)) throw validation_error("check_gcc: need T > 0");
    if (freq_set.empty() || x0_samples.empty())
        throw validation_error("check_gcc: empty sample sets");
    GccVerdict verdict;
    verdict.observable = true;
    double worst = 0.0;
    for (double xi0 : freq_set) {
        if (xi0 == 0.0) throw validation_error("check_gcc: zero frequency in freq_set");
        for (double x0 : x0_samples) {
            if (!dom.contains(x0)) throw validation_error("check_gcc: x0 sample outside the domain");
            for (int sign : {+1, -1}) {
                const Ray ray{x0, xi0, sign, s};
                const auto path = reflect_ray(ray, dom, T);
                const double t_hit = first_hit_time(path, region);
                if (t_hit >= T) {
                    verdict.observable = false;
                    if (!verdict.witness) verdict.witness = ray;
                } else {
                    worst = std::max(worst, t_hit);
                }
            }
        }
    }
    if (verdict.observable) verdict.min_time_estimate = worst;
    return verdict;
}

/// Worst-case first-hitting time of the region over the sampled rays,
/// reflections included; infinite_time if some sampled ray never reaches it.
/// Frequency-independent when s = 1/2.
inline double min_control_time(const ControlRegion& region, const BoundedDomain& dom, double s,
                               const std::vector<double>& freq_set, const std::vector<double>& x0_grid) {
    dom.validate();
    region.validate(dom);
    if (freq_set.empty() || x0_grid.empty()) throw validation_error("min_control_time: empty sample sets");
    double worst = 0.0;
    for (double xi0 : freq_set) {
        for (double x0 : x0_grid) {
            for (int sign : {+1, -1}) {
                const Ray ray{x0, xi0, sign, s};
                const double v = group_velocity(s, xi0);
                if (v == 0.0) {
                    if (!region.contains(x0)) return infinite_time;
                    continue;
                }
                // horizon long enough to guarantee a hit: one full sweep of the domain
                const double horizon = 4.0 * dom.length() / v + 1.0;
                const auto path = reflect_ray(ray, dom, horizon);
                const double t_hit = first_hit_time(path, region);
                if (t_hit == infinite_time) return infinite_time;
                worst = std::max(worst, t_hit);
            }
        }
    }
    return worst;
}

/// For s > 1/2: smallest |xi0| whose rays (from the sampled starts) all reach
/// the region within T; above it higher frequencies are faster, hence also
/// observable.
inline double observability_threshold(const ControlRegion& region, const BoundedDomain& dom, double s,
                                      const std::vector<double>& x0_grid, double T) {
    if (!(s > 0.5)) throw validation_error("observability_threshold: defined for s > 1/2");
    // worst ray distance (reflections included) is min_control_time at unit speed
    const double worst_distance = min_control_time(region, dom, 0.5, {1.0}, x0_grid); // speed 1 at s=1/2
    if (worst_distance == infinite_time) return infinite_time;
    const double v_needed = worst_distance / T;
    return std::pow(v_needed / (2.0 * s), 1.0 / (2.0 * s - 1.0));
}

/// One row of the controllability trichotomy table.
struct TrichotomyRow {
    double s;
    double xi0;
    double v;
    bool observable;
};

enum class Monotonicity { decreasing, constant, increasing, none };

inline std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::decreasing: return "decreasing";
        case Monotonicity::constant: return "constant";
        case Monotonicity::increasing: return "increasing";
        default: return "none";
    }
}

struct TrichotomyTable {
    std::vector<TrichotomyRow> rows;
    std::vector<std::pair<double, Monotonicity>> velocity_monotonicity; // per s, over |xi0|
};

/// Velocity trichotomy: v(|xi0|) decreasing for s < 1/2, constant at s = 1/2,
/// increasing for s > 1/2, with per-(s, xi0) observability at horizon T.
inline TrichotomyTable trichotomy_table(const std::vector<double>& s_values, const std::vector<double>& xi_values,
                                        const ControlRegion& region, const BoundedDomain& dom, double T,
                                        const std::vector<double>& x0_samples) {
    if (s_values.empty() || xi_values.empty()) throw validation_error("trichotomy_table: empty grids");
    TrichotomyTable table;
    for (double s : s_values) {
        std::vector<double> vs;
        for (double xi0 : xi_values) {
            const double v = group_velocity(s, xi0);
            vs.push_back(v);
            const auto verdict = check_gcc(region, dom, T, s, {xi0}, x0_samples);
            table.rows.push_back({s, xi0, v, verdict.observable});
        }
        bool inc = true, dec = true, cst = true;
        for (std::size_t i = 1; i < vs.size(); ++i) {
            if (!(vs[i] > vs[i - 1] + 1e-14)) inc = false;
            if (!(vs[i] < vs[i - 1] - 1e-14)) dec = false;
            if (std::abs(vs[i] - vs[i - 1]) > 1e-12 * std::max(1.0, std::abs(vs[i]))) cst = false;
        }
        Monotonicity mono = Monotonicity::none;
        if (cst)
            mono = Monotonicity::constant;
        else if (inc)
            mono = Monotonicity::increasing;
        else if (dec)
            mono = Monotonicity::decreasing;
        table.velocity_monotonicity.emplace_back(s, mono);
    }
    return table;
}

} // namespace fswkb
