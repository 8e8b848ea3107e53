#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fswkb/diagnostics.hpp"
#include "fswkb/frac_core.hpp"
#include "fswkb/geometric_control.hpp"
#include "fswkb/io.hpp"
#include "fswkb/rays.hpp"
#include "fswkb/solver.hpp"
#include "fswkb/wkb.hpp"

namespace fswkb {

inline constexpr const char* library_version = "0.1.0";

/// One experiment: a recognized kind, its parameter object, and where the
/// output files go.
struct ExperimentSpec {
    std::string kind;
    json params;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1;
};

namespace experiments {

inline json default_config(const std::string& kind) {
    const double two_pi_sq = 2.0 * pi * pi;
    if (kind == "simulate") {
        return json{{"scheme", "fe"},
                    {"s", 0.5},
                    {"xi0", two_pi_sq},
                    {"eps", 1.0},
                    {"domain", {-1.0, 1.0}},
                    {"n", 512},
                    {"dt", 1e-3},
                    {"T", 5.0},
                    {"gamma_exponent", 0.9},
                    {"gamma_override", -1.0},
                    {"x0_center", 0.0},
                    {"stride", 10}};
    }
    if (kind == "rays") {
        return json{{"s_values", {0.1, 0.5, 0.9}},
                    {"xi_min", 0.1},
                    {"xi_max", 100.0},
                    {"xi_count", 200},
                    {"path_s", 0.5},
                    {"path_xi0", two_pi_sq},
                    {"path_x0", 0.0},
                    {"path_sign", -1},
                    {"domain", {-1.0, 1.0}},
                    {"t_end", 5.0}};
    }
    if (kind == "wkb") {
        return json{{"s", 0.5},
                    {"xi0", two_pi_sq},
                    {"eps", 0.03125},
                    {"J", 2},
                    {"domain", {-2.0, 2.0}},
                    {"n", 0}, // 0: auto from the carrier resolution
                    {"gamma", 100.0},
                    {"x0_center", 0.0},
                    {"T", 1.0},
                    {"tau_slabs", 65},
                    {"branch", "principal"},
                    {"dump_slab_count", 3},
                    {"pts_per_osc", 8}};
    }
    if (kind == "sweep") {
        return json{{"s", 0.5},
                    {"xi0", two_pi_sq},
                    {"J", 2},
                    {"eps_list", {0.125, 0.0625, 0.03125, 0.015625, 0.0078125}},
                    {"domain", {-2.0, 2.0}},
                    {"gamma_policy", "fixed"}, // fixed | scaled
                    {"gamma0", 100.0},
                    {"gamma_exponent", 0.9},
                    {"t_eval", 0.5},
                    {"residual_t", 0.25},
                    {"T", 1.0},
                    {"solver_T", 0.5},
                    {"tau_slabs", 65},
                    {"branch", "principal"},
                    {"cn_phase_budget", 0.1},
                    {"dt_max", 1e-3},
                    {"pts_per_osc", 8},
                    {"x0_center", 0.0}};
    }
    if (kind == "gcc") {
        return json{{"s_values", {0.1, 0.5, 0.9}},
                    {"freq_set", {pi * pi / 16.0, two_pi_sq, 8.0 * pi * pi}},
                    {"domain", {-1.0, 1.0}},
                    {"collar", 0.2},
                    {"region", json::array()}, // explicit intervals override the collar
                    {"T", 5.0},
                    {"x0_count", 41}};
    }
    if (kind == "figures") {
        return json{{"s_values", {0.1, 0.5, 0.9}},
                    {"xi_values", {pi * pi / 16.0, two_pi_sq}},
                    {"domain_small", {-1.0, 1.0}},
                    {"domain_large", {-6.0, 6.0}},
                    {"n_small", 512},
                    {"n_large", 1024},
                    {"dt", 1e-3},
                    {"T", 5.0},
                    {"stride", 50},
                    {"gamma_exponent", 0.9},
                    {"x0_center", 0.0},
                    {"large_s", 0.9},
                    {"large_xi0", two_pi_sq}};
    }
    throw validation_error("unknown experiment kind '" + kind + "'");
}

namespace detail_exp {

inline std::string tag(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    std::string s = os.str();
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

inline BoundedDomain domain_from(const json& j, const char* key) {
    const auto arr = j.at(key);
    if (!arr.is_array() || arr.size() != 2) throw validation_error(std::string("config: ") + key + " must be [left,right]");
    BoundedDomain d{arr[0].get<double>(), arr[1].get<double>()};
    d.validate();
    return d;
}

inline Branch branch_from(const json& j) {
    const std::string b = j.value("branch", "principal");
    if (b == "principal") return Branch::principal;
    if (b == "absolute") return Branch::absolute_value;
    throw validation_error("config: branch must be principal|absolute, got '" + b + "'");
}

inline void write_meta(const std::filesystem::path& dir, const std::string& command, const json& config,
                       const json& extra = json::object()) {
    json meta{{"command", command}, {"config", config}, {"library_version", library_version}};
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    io::write_json_atomic(dir / "meta.json", meta);
}

inline void write_record(const std::filesystem::path& dir, const SpaceTimeRecord& rec) {
    // per-step norm log
    io::CsvBuilder norms({"t", "l2", "hs"});
    for (std::size_t i = 0; i < rec.t_norms.size(); ++i)
        norms.row({rec.t_norms[i], rec.l2[i], rec.hs[i]});
    norms.save(dir / "norms.csv");

    // heatmap (t, x, |u|), downsampled to <= 1000 x 1000 cells
    std::size_t row_step = 1, col_step = 1;
    while (rec.t_snaps.size() / row_step > 1000) ++row_step;
    while (rec.x.size() / col_step > 1000) ++col_step;
    io::CsvBuilder heat({"t", "x", "abs_u"});
    for (std::size_t i = 0; i < rec.t_snaps.size(); i += row_step)
        for (std::size_t j = 0; j < rec.x.size(); j += col_step)
            heat.row({rec.t_snaps[i], rec.x[j], std::abs(rec.snaps[i][j])});
    heat.save(dir / "heatmap.csv");
}

// Periodic sweep grid resolving carrier k with the requested oversampling.
inline Grid1D sweep_grid(const BoundedDomain& dom, double carrier_k, int pts_per_osc) {
    int n = 256;
    const double need = double(pts_per_osc) * dom.length() * std::abs(carrier_k) / (2.0 * pi);
    while (double(n) < need) n *= 2;
    return Grid1D::make_periodic(dom.left, dom.right, n);
}

// Crank-Nicolson step count for horizon T keeping the carrier-mode Cayley
// phase error under `budget` radians: error ~ T lambda^3 dt^2 / 12.
inline int cn_steps(double T, double lambda_carrier, double budget, double dt_max) {
    double dt = std::sqrt(12.0 * budget / std::max(1e-300, T * std::pow(lambda_carrier, 3.0)));
    dt = std::min(dt, dt_max);
    return std::max(1, int(std::ceil(T / dt)));
}

} // namespace detail_exp

// ---------------------------------------------------------------------- rays

inline int cmd_rays(const ExperimentSpec& spec) {
    using namespace detail_exp;
    const json& p = spec.params;
    const auto s_values = p.at("s_values").get<std::vector<double>>();
    const double xi_min = p.at("xi_min").get<double>();
    const double xi_max = p.at("xi_max").get<double>();
    const int xi_count = p.at("xi_count").get<int>();
    if (xi_count < 2 || !(xi_min > 0.0) || !(xi_max > xi_min))
        throw validation_error("rays: need xi_count >= 2 and 0 < xi_min < xi_max");
    for (double s : s_values)
        if (!(s > 0.0 && s < 1.0)) throw validation_error("rays: s_values entries must lie in (0,1), got " + std::to_string(s));

    // velocity curves (one per s)
    for (double s : s_values) {
        io::CsvBuilder csv({"xi0", "v"});
        for (int i = 0; i < xi_count; ++i) {
            const double xi = xi_min + (xi_max - xi_min) * double(i) / double(xi_count - 1);
            csv.row({xi, group_velocity(s, xi)});
        }
        csv.save(spec.out_dir / ("velocity_s" + tag(s) + ".csv"));
    }

    // reflected ray path (t, x)
    const Ray ray{p.at("path_x0").get<double>(), p.at("path_xi0").get<double>(), p.at("path_sign").get<int>(),
                  p.at("path_s").get<double>()};
    const BoundedDomain dom = domain_from(p, "domain");
    const auto path = reflect_ray(ray, dom, p.at("t_end").get<double>());
    io::CsvBuilder pathcsv({"t", "x"});
    for (const auto& pt : path) pathcsv.row({pt.t, pt.x});
    pathcsv.save(spec.out_dir / "path.csv");

    write_meta(spec.out_dir, "rays", p);
    return 0;
}

// ------------------------------------------------------------------ simulate

inline SimConfig sim_config_from(const json& p) {
    SimConfig cfg;
    cfg.s = p.at("s").get<double>();
    cfg.xi0 = p.at("xi0").get<double>();
    cfg.eps = p.at("eps").get<double>();
    cfg.domain = detail_exp::domain_from(p, "domain");
    cfg.n = p.at("n").get<int>();
    cfg.dt = p.at("dt").get<double>();
    cfg.T = p.at("T").get<double>();
    cfg.gamma_exponent = p.at("gamma_exponent").get<double>();
    cfg.gamma_override = p.value("gamma_override", -1.0);
    cfg.x0_center = p.at("x0_center").get<double>();
    cfg.stride = p.at("stride").get<int>();
    return cfg;
}

inline int cmd_simulate(const ExperimentSpec& spec) {
    using namespace detail_exp;
    const json& p = spec.params;
    const Scheme scheme = scheme_from_string(p.at("scheme").get<std::string>());
    const SimConfig cfg = sim_config_from(p);
    cfg.validate(scheme == Scheme::spectral);
    const SpaceTimeRecord rec = run_simulation(cfg, scheme);
    write_record(spec.out_dir, rec);
    write_meta(spec.out_dir, "simulate", p,
               json{{"gamma", cfg.gamma()}, {"steps", cfg.steps()}, {"scheme", p.at("scheme")}});
    return 0;
}

// ----------------------------------------------------------------------- wkb

inline int cmd_wkb(const ExperimentSpec& spec) {
    using namespace detail_exp;
    const json& p = spec.params;
    const double s = p.at("s").get<double>();
    const double xi0 = p.at("xi0").get<double>();
    const double eps = p.at("eps").get<double>();
    const BoundedDomain dom = domain_from(p, "domain");
    if (!(eps > 0.0)) throw validation_error("wkb: need eps > 0");

    CgammaOptions copts;
    copts.branch = branch_from(p);
    const FracContext ctx = FracContext::make(s, xi0, copts);

    const double carrier = xi0 / eps;
    Grid1D grid = p.at("n").get<int>() > 0
                      ? Grid1D::make_periodic(dom.left, dom.right, p.at("n").get<int>())
                      : sweep_grid(dom, carrier, p.at("pts_per_osc").get<int>());

    const double gamma = p.at("gamma").get<double>();
    const double x0 = p.at("x0_center").get<double>();
    const ComplexField g0 = ComplexField::sample(grid, [&](double x) {
        return cplx(std::exp(-0.5 * gamma * (x - x0) * (x - x0)), 0.0);
    });

    WkbOptions wopts;
    wopts.J = p.at("J").get<int>();
    wopts.T = p.at("T").get<double>();
    wopts.tau_slabs = p.at("tau_slabs").get<int>();
    const WkbExpansion w = build_cascade(g0, ctx, eps, wopts);

    // constants record
    json constants{{"s", s},
                   {"c1s", ctx.c1s},
                   {"branch", to_string(ctx.branch)},
                   {"C_half", {{"re", std::real(w.ctx.C_half())}, {"im", std::imag(w.ctx.C_half())}}},
                   {"C_one", {{"re", std::real(w.ctx.C_one())}, {"im", std::imag(w.ctx.C_one())}}},
                   {"C_three_half", {{"re", std::real(w.ctx.C_three_half())}, {"im", std::imag(w.ctx.C_three_half())}}}};
    io::write_json_atomic(spec.out_dir / "constants.json", constants);

    json header{{"s", s},
                {"eps", eps},
                {"J", wopts.J},
                {"xi0", xi0},
                {"xi0_eff", w.xi0_eff},
                {"tau_max", w.tau_max},
                {"n", grid.n},
                {"gamma", gamma}};
    io::write_json_atomic(spec.out_dir / "expansion.json", header);

    // amplitude slabs (x, Re a_j, Im a_j), a reduced deterministic slab set
    const int dump_count = std::max(1, p.at("dump_slab_count").get<int>());
    const int last = int(w.tau_grid.size()) - 1;
    for (int j = 0; j <= wopts.J; ++j) {
        for (int d = 0; d < dump_count; ++d) {
            const int slab = dump_count == 1 ? 0 : int(std::lround(double(d) * double(last) / double(dump_count - 1)));
            const ComplexField a = w.amplitude(j, slab);
            io::CsvBuilder csv({"x", "re", "im"});
            for (int i = 0; i < grid.n; ++i)
                csv.row({grid.x(i), std::real(a.v[std::size_t(i)]), std::imag(a.v[std::size_t(i)])});
            csv.save(spec.out_dir / ("amplitude_a" + std::to_string(j) + "_slab" + std::to_string(slab) + ".csv"));
        }
    }
    write_meta(spec.out_dir, "wkb", p, json{{"xi0_eff", w.xi0_eff}, {"n", grid.n}});
    return 0;
}

// --------------------------------------------------------------------- sweep

struct SweepPoint {
    double eps = 0.0;
    int n = 0;
    double gamma = 0.0;
    double xi0_eff = 0.0;
    double dt = 0.0;
    double residual = 0.0;
    bool residual_warn = false;
    double hs0 = 0.0;
    double init_mismatch = 0.0;
    double sol_diff = 0.0;
    double off_ray = 0.0;
    double off_ray_z0 = 0.0;
    double ray_center = 0.0;
};

inline SweepPoint sweep_point(const json& p, double eps) {
    using namespace detail_exp;
    const double s = p.at("s").get<double>();
    const double xi0 = p.at("xi0").get<double>();
    const BoundedDomain dom = domain_from(p, "domain");
    const double x0 = p.at("x0_center").get<double>();

    SweepPoint pt;
    pt.eps = eps;

    CgammaOptions copts;
    copts.branch = branch_from(p);
    const FracContext ctx = FracContext::make(s, xi0, copts);

    const Grid1D grid = sweep_grid(dom, xi0 / eps, p.at("pts_per_osc").get<int>());
    pt.n = grid.n;

    const std::string policy = p.at("gamma_policy").get<std::string>();
    const double g0v = p.at("gamma0").get<double>();
    if (policy == "fixed") {
        pt.gamma = g0v;
    } else if (policy == "scaled") {
        const double eps0 = p.at("eps_list")[0].get<double>();
        pt.gamma = g0v * std::pow(eps0 / eps, p.at("gamma_exponent").get<double>());
    } else {
        throw validation_error("sweep: gamma_policy must be fixed|scaled");
    }

    const ComplexField g0 = ComplexField::sample(grid, [&](double x) {
        return cplx(std::exp(-0.5 * pt.gamma * (x - x0) * (x - x0)), 0.0);
    });

    WkbOptions wopts;
    wopts.J = p.at("J").get<int>();
    wopts.T = p.at("T").get<double>();
    wopts.tau_slabs = p.at("tau_slabs").get<int>();
    const WkbExpansion w = build_cascade(g0, ctx, eps, wopts);
    pt.xi0_eff = w.xi0_eff;

    const double t_eval = p.at("t_eval").get<double>();
    const double residual_t = p.at("residual_t").get<double>();

    pt.residual = 0.0;
    {
        const ResidualResult rr = residual_norm(w, residual_t);
        pt.residual = rr.value;
        pt.residual_warn = rr.dt_warning;
    }

    const ComplexField z0 = assemble_z(w, 0.0);
    pt.hs0 = hs_norm(z0, s);

    // datum u0 = e^{i xi0_eff x / eps} g0 (unit amplitude)
    const ComplexField u0 = ComplexField::sample(grid, [&](double x) {
        return std::polar(1.0, w.carrier_k * x) * cplx(std::exp(-0.5 * pt.gamma * (x - x0) * (x - x0)), 0.0);
    });
    pt.init_mismatch = initial_mismatch(u0, z0);

    // true solution by spectral Crank-Nicolson from z(.,0)
    const double solver_T = p.at("solver_T").get<double>();
    const double lam_carrier = std::pow(std::abs(w.carrier_k), 2.0 * s);
    const int steps = cn_steps(solver_T, lam_carrier, p.at("cn_phase_budget").get<double>(),
                               p.at("dt_max").get<double>());
    pt.dt = solver_T / double(steps);
    const int eval_step = int(std::lround(t_eval / pt.dt));

    ComplexField u = z0;
    ComplexField u_at_eval = z0;
    for (int it = 1; it <= steps; ++it) {
        u = spectral_cn_step(u, s, pt.dt);
        if (it == eval_step) u_at_eval = u;
    }
    if (eval_step > steps) throw validation_error("sweep: t_eval beyond solver_T");

    const ComplexField z_at = assemble_z(w, double(eval_step) * pt.dt);
    pt.sol_diff = compare_fields(u_at_eval, z_at);

    // off-ray seminorm energy of the solver field around the packet ray
    const int ray_sign = (w.carrier_k > 0.0) ? -1 : +1;
    const double v_packet = 2.0 * s * std::pow(std::abs(w.carrier_k), 2.0 * s - 1.0);
    pt.ray_center = x0 + double(ray_sign) * v_packet * (double(eval_step) * pt.dt);
    const double radius = std::pow(eps, 0.25);
    pt.off_ray = off_ray_energy(u_at_eval, pt.ray_center, radius, s);
    pt.off_ray_z0 = off_ray_energy(z0, x0, radius, s);
    return pt;
}

inline int cmd_sweep(const ExperimentSpec& spec) {
    using namespace detail_exp;
    const json& p = spec.params;
    const auto eps_list = p.at("eps_list").get<std::vector<double>>();
    if (eps_list.size() < 4) throw validation_error("sweep: need an eps grid with >= 4 points");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw validation_error("sweep: eps_list must be strictly decreasing");

    std::vector<SweepPoint> pts(eps_list.size());
    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < eps_list.size(); ++i) pts[i] = sweep_point(p, eps_list[i]);
    } else {
        std::vector<std::future<SweepPoint>> futs;
        for (std::size_t i = 0; i < eps_list.size(); ++i)
            futs.push_back(std::async(std::launch::async, [&p, e = eps_list[i]] { return sweep_point(p, e); }));
        for (std::size_t i = 0; i < eps_list.size(); ++i) pts[i] = futs[i].get();
    }

    const auto metric = [&](const char* name, auto getter) {
        std::vector<std::pair<double, double>> samples;
        for (const auto& pt : pts) samples.emplace_back(pt.eps, getter(pt));
        ScalingReport rep = fit_scaling(name, samples);
        io::CsvBuilder csv({"eps", "value"});
        for (const auto& s : rep.samples) csv.row({s.first, s.second});
        csv.save(spec.out_dir / (std::string("sweep_") + name + ".csv"));
        json j{{"metric", rep.metric_name}, {"slope", rep.slope}, {"intercept", rep.intercept},
               {"r2", rep.r2},             {"dropped", rep.dropped}};
        json samp = json::array();
        for (const auto& s : rep.samples) samp.push_back({{"eps", s.first}, {"value", s.second}});
        j["samples"] = samp;
        io::write_json_atomic(spec.out_dir / (std::string("sweep_") + name + ".json"), j);
        return rep;
    };

    const ScalingReport rep_res = metric("residual", [](const SweepPoint& q) { return q.residual; });
    const ScalingReport rep_sol = metric("sol_diff", [](const SweepPoint& q) { return q.sol_diff; });
    const ScalingReport rep_off = metric("off_ray", [](const SweepPoint& q) { return q.off_ray; });
    const ScalingReport rep_ini = metric("init_mismatch", [](const SweepPoint& q) { return q.init_mismatch; });

    double hs_max = 0.0, hs_min = std::numeric_limits<double>::infinity();
    for (const auto& q : pts) {
        hs_max = std::max(hs_max, q.hs0);
        hs_min = std::min(hs_min, q.hs0);
    }
    json summary{{"hs0_max", hs_max},
                 {"hs0_min", hs_min},
                 {"hs0_ratio", hs_max / hs_min},
                 {"slopes",
                  {{"residual", rep_res.slope},
                   {"sol_diff", rep_sol.slope},
                   {"off_ray", rep_off.slope},
                   {"init_mismatch", rep_ini.slope}}},
                 {"r2", {{"sol_diff", rep_sol.r2}, {"residual", rep_res.r2}, {"off_ray", rep_off.r2}}}};
    json points = json::array();
    for (const auto& q : pts)
        points.push_back({{"eps", q.eps},
                          {"n", q.n},
                          {"gamma", q.gamma},
                          {"xi0_eff", q.xi0_eff},
                          {"dt", q.dt},
                          {"residual", q.residual},
                          {"residual_dt_warning", q.residual_warn},
                          {"hs0", q.hs0},
                          {"init_mismatch", q.init_mismatch},
                          {"sol_diff", q.sol_diff},
                          {"off_ray", q.off_ray},
                          {"off_ray_z0", q.off_ray_z0},
                          {"ray_center", q.ray_center}});
    summary["points"] = points;
    io::write_json_atomic(spec.out_dir / "summary.json", summary);
    write_meta(spec.out_dir, "sweep", p);
    return 0;
}

// ----------------------------------------------------------------------- gcc

inline ControlRegion region_from(const json& p, const BoundedDomain& dom) {
    ControlRegion region;
    const auto& explicit_region = p.at("region");
    if (explicit_region.is_array() && !explicit_region.empty()) {
        for (const auto& iv : explicit_region)
            region.intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    } else {
        const double collar = p.at("collar").get<double>();
        if (!(collar > 0.0 && 2.0 * collar < dom.length()))
            throw validation_error("gcc: collar must satisfy 0 < 2*collar < |domain|");
        region.intervals.emplace_back(dom.left, dom.left + collar);
        region.intervals.emplace_back(dom.right - collar, dom.right);
    }
    region.validate(dom);
    return region;
}

inline int cmd_gcc(const ExperimentSpec& spec) {
    using namespace detail_exp;
    const json& p = spec.params;
    const BoundedDomain dom = domain_from(p, "domain");
    const ControlRegion region = region_from(p, dom);
    const double T = p.at("T").get<double>();
    const auto s_values = p.at("s_values").get<std::vector<double>>();
    const auto freq_set = p.at("freq_set").get<std::vector<double>>();
    const int x0_count = p.at("x0_count").get<int>();
    if (x0_count < 2) throw validation_error("gcc: need x0_count >= 2");
    std::vector<double> x0_samples;
    for (int i = 0; i < x0_count; ++i) {
        const double w = double(i + 1) / double(x0_count + 1);
        x0_samples.push_back(dom.left + w * dom.length());
    }
    // region endpoints are the worst-case ray starts; sample them exactly
    for (const auto& [l, r] : region.intervals) {
        if (dom.contains(l)) x0_samples.push_back(l);
        if (dom.contains(r)) x0_samples.push_back(r);
    }
    std::sort(x0_samples.begin(), x0_samples.end());

    json verdicts = json::array();
    for (double s : s_values) {
        const GccVerdict v = check_gcc(region, dom, T, s, freq_set, x0_samples);
        json jv{{"s", s}, {"observable", v.observable}, {"sampled", true}};
        if (v.witness)
            jv["witness"] = {{"x0", v.witness->x0}, {"xi0", v.witness->xi0}, {"sign", v.witness->sign}};
        if (v.min_time_estimate) jv["min_time_estimate"] = *v.min_time_estimate;
        const double tmin = min_control_time(region, dom, s, freq_set, x0_samples);
        jv["min_control_time"] = std::isfinite(tmin) ? json(tmin) : json("inf");
        if (s > 0.5) jv["observability_threshold_xi"] = observability_threshold(region, dom, s, x0_samples, T);
        verdicts.push_back(jv);
    }
    io::write_json_atomic(spec.out_dir / "verdicts.json", json{{"T", T}, {"verdicts", verdicts}});

    const TrichotomyTable table = trichotomy_table(s_values, freq_set, region, dom, T, x0_samples);
    io::CsvBuilder csv({"s", "xi0", "v", "observable"});
    for (const auto& row : table.rows) csv.row({row.s, row.xi0, row.v, row.observable ? 1.0 : 0.0});
    csv.save(spec.out_dir / "table.csv");
    json mono = json::array();
    for (const auto& [s, m] : table.velocity_monotonicity) mono.push_back({{"s", s}, {"velocity", to_string(m)}});
    io::write_json_atomic(spec.out_dir / "monotonicity.json", mono);

    write_meta(spec.out_dir, "gcc", p);
    return 0;
}

// ------------------------------------------------------------------- figures

inline int cmd_figures(const ExperimentSpec& spec) {
    using namespace detail_exp;
    const json& p = spec.params;
    const auto s_values = p.at("s_values").get<std::vector<double>>();
    const auto xi_values = p.at("xi_values").get<std::vector<double>>();
    const BoundedDomain dom_small = domain_from(p, "domain_small");
    const BoundedDomain dom_large = domain_from(p, "domain_large");

    struct Panel {
        std::string name;
        SimConfig cfg;
    };
    std::vector<Panel> panels;
    for (double xi0 : xi_values) {
        for (double s : s_values) {
            SimConfig cfg;
            cfg.s = s;
            cfg.xi0 = xi0;
            cfg.eps = 1.0;
            cfg.domain = dom_small;
            cfg.n = p.at("n_small").get<int>();
            cfg.dt = p.at("dt").get<double>();
            cfg.T = p.at("T").get<double>();
            cfg.gamma_exponent = p.at("gamma_exponent").get<double>();
            cfg.x0_center = p.at("x0_center").get<double>();
            cfg.stride = p.at("stride").get<int>();
            panels.push_back({"panel_s" + tag(s) + "_xi" + tag(xi0), cfg});
        }
    }
    {
        SimConfig cfg;
        cfg.s = p.at("large_s").get<double>();
        cfg.xi0 = p.at("large_xi0").get<double>();
        cfg.eps = 1.0;
        cfg.domain = dom_large;
        cfg.n = p.at("n_large").get<int>();
        cfg.dt = p.at("dt").get<double>();
        cfg.T = p.at("T").get<double>();
        cfg.gamma_exponent = p.at("gamma_exponent").get<double>();
        cfg.x0_center = p.at("x0_center").get<double>();
        cfg.stride = p.at("stride").get<int>();
        panels.push_back({"panel_large_s" + tag(cfg.s) + "_xi" + tag(cfg.xi0), cfg});
    }

    auto run_panel = [&](const Panel& panel) {
        panel.cfg.validate(false);
        const SpaceTimeRecord rec = run_simulation(panel.cfg, Scheme::fe);
        const auto dir = spec.out_dir / panel.name;
        write_record(dir, rec);
        write_meta(dir, "figures", p,
                   json{{"panel", panel.name},
                        {"s", panel.cfg.s},
                        {"xi0", panel.cfg.xi0},
                        {"n", panel.cfg.n},
                        {"dt", panel.cfg.dt},
                        {"gamma", panel.cfg.gamma()},
                        {"domain", {panel.cfg.domain.left, panel.cfg.domain.right}},
                        {"scheme", "fe"}});
        return 0;
    };

    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        for (const auto& panel : panels) run_panel(panel);
    } else {
        std::vector<std::future<int>> futs;
        for (const auto& panel : panels)
            futs.push_back(std::async(std::launch::async, [&run_panel, &panel] { return run_panel(panel); }));
        for (auto& f : futs) f.get();
    }

    // initial-data panels, one per frequency
    for (double xi0 : xi_values) {
        SimConfig cfg;
        cfg.xi0 = xi0;
        cfg.domain = dom_small;
        cfg.n = p.at("n_small").get<int>();
        cfg.gamma_exponent = p.at("gamma_exponent").get<double>();
        cfg.x0_center = p.at("x0_center").get<double>();
        const Grid1D grid = Grid1D::make_interval(dom_small.left, dom_small.right, cfg.n);
        const ComplexField u0 = gaussian_wavepacket(cfg, grid);
        io::CsvBuilder csv({"x", "re", "im", "abs_u"});
        for (int j = 0; j < grid.n; ++j)
            csv.row({grid.x(j), std::real(u0.v[std::size_t(j)]), std::imag(u0.v[std::size_t(j)]),
                     std::abs(u0.v[std::size_t(j)])});
        csv.save(spec.out_dir / ("initial_xi" + tag(xi0) + ".csv"));
    }

    write_meta(spec.out_dir, "figures", p, json{{"solution_panels", int(panels.size())}, {"initial_panels", int(xi_values.size())}});
    return 0;
}

// ------------------------------------------------------------------ dispatch

inline int run_experiment(const ExperimentSpec& spec) {
    if (spec.kind == "rays") return cmd_rays(spec);
    if (spec.kind == "simulate") return cmd_simulate(spec);
    if (spec.kind == "wkb") return cmd_wkb(spec);
    if (spec.kind == "sweep") return cmd_sweep(spec);
    if (spec.kind == "gcc") return cmd_gcc(spec);
    if (spec.kind == "figures") return cmd_figures(spec);
    throw validation_error("unknown experiment kind '" + spec.kind + "'");
}

/// Merges defaults <- config file <- overrides, validating the kind.
inline ExperimentSpec make_spec(const std::string& kind, const json& file_config, const json& overrides,
                                const std::filesystem::path& out_dir, int jobs, std::uint64_t seed) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.params = default_config(kind);
    for (auto it = file_config.begin(); it != file_config.end(); ++it) spec.params[it.key()] = it.value();
    for (auto it = overrides.begin(); it != overrides.end(); ++it) spec.params[it.key()] = it.value();
    spec.out_dir = out_dir;
    spec.jobs = jobs;
    spec.seed = seed;
    return spec;
}

} // namespace experiments
} // namespace fswkb
