#include <catch2/catch_amalgamated.hpp>

#include "fswkb/frac_core.hpp"
#include "oracles.hpp"

using namespace fswkb;

TEST_CASE("normalization constant closed forms") {
    // s = 1/2: c_{1,1/2} = 1/pi
    CHECK(normalization_constant(0.5) == Catch::Approx(1.0 / pi).epsilon(1e-14));
    // s = 1/4: Gamma(3/4) cancels, leaving sqrt(2)/(4 sqrt(pi))
    CHECK(normalization_constant(0.25) ==
          Catch::Approx(std::sqrt(2.0) / (4.0 * std::sqrt(pi))).epsilon(1e-14));
    CHECK_THROWS_AS(normalization_constant(0.0), validation_error);
    CHECK_THROWS_AS(normalization_constant(1.0), validation_error);
    CHECK_THROWS_AS(normalization_constant(-0.3), validation_error);
}

TEST_CASE("normalization constant inverts the defining integral") {
    for (double s : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const double prod = normalization_constant(s) * inverse_c1s_integral(s);
        CHECK(prod == Catch::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("oscillatory moment quadratures match the continuation formulas") {
    for (double mu : {-0.25, -0.5, -0.75, -0.9}) {
        CHECK(quad::one_minus_cos_moment(mu) == Catch::Approx(oracles::P_closed(mu)).epsilon(1e-10));
        CHECK(quad::sin_moment(mu) == Catch::Approx(oracles::Q_closed(mu)).epsilon(1e-10));
    }
    // P extends to mu in (-2,-1] where Q does not
    CHECK(quad::one_minus_cos_moment(-1.5) == Catch::Approx(oracles::P_closed(-1.5)).epsilon(1e-10));
}

TEST_CASE("spectral fractional laplacian: constant and plane wave") {
    const Grid1D g = Grid1D::make_periodic(-2.0, 2.0, 128);
    const ComplexField ones = ComplexField::sample(g, [](double) { return cplx(1.0, 0.0); });
    const ComplexField z = apply_fraclap_spectral(ones, 0.7);
    for (const auto& v : z.v) CHECK(std::abs(v) < 1e-13);

    // exact carrier: eigenvalue |k|^{2s}
    const double s = 0.35;
    const double k = g.mode_freq(9);
    const ComplexField wave = ComplexField::sample(g, [&](double x) { return std::polar(1.0, k * x); });
    const ComplexField lw = apply_fraclap_spectral(wave, s);
    const double lambda = std::pow(std::abs(k), 2.0 * s);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(lw.v[std::size_t(j)] - lambda * wave.v[std::size_t(j)]) < 1e-10 * lambda);

    const ComplexField bad(Grid1D::make_interval(-1.0, 1.0, 64));
    CHECK_THROWS_AS(apply_fraclap_spectral(bad, 0.5), validation_error);
}

TEST_CASE("direct singular integral: constants, cosine, Gaussian vs spectral") {
    // translation invariance
    auto constf = [](double) { return cplx(3.0, -1.0); };
    CHECK(std::abs(apply_fraclap_direct(constf, 0.35, 0.7)) < 1e-8);

    // (-Lap)^s cos = cos evaluated at x=0 gives exactly 1
    auto cosf = [](double x) { return cplx(std::cos(x), 0.0); };
    for (double s : {0.25, 0.5, 0.75})
        CHECK(std::abs(apply_fraclap_direct(cosf, s, 0.0) - cplx(1.0, 0.0)) < 5e-6);

    // Gaussian: direct vs spectral on a wide periodic grid
    auto gauss = [](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); };
    const Grid1D g = Grid1D::make_periodic(-16.0, 16.0, 4096);
    const ComplexField gf = ComplexField::sample(g, [&](double x) { return gauss(x); });
    for (double s : {0.25, 0.5, 0.75}) {
        const ComplexField spec = apply_fraclap_spectral(gf, s);
        for (double x : {0.0, 0.5, -0.75, 1.25, -2.0}) {
            const cplx direct = apply_fraclap_direct(gauss, s, x);
            const int j = int(std::lround((x - g.a) / g.h()));
            REQUIRE(std::abs(g.x(j) - x) < 1e-12);
            CHECK(std::abs(direct - spec.v[std::size_t(j)]) < 1e-4 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("bilinear remainder I_s") {
    auto gauss = [](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); };
    auto shifted = [](double x) { return cplx(std::exp(-0.7 * (x - 0.4) * (x - 0.4)), 0.0); };
    auto constg = [](double) { return cplx(2.5, 0.0); };

    // constant second factor kills the integrand
    CHECK(std::abs(bilinear_Is(gauss, constg, 0.4, 0.3)) < 1e-8);

    // I_s(f,f) >= 0 for real f
    for (double x : {0.0, 0.8, -1.2}) {
        const cplx v = bilinear_Is(gauss, gauss, 0.5, x);
        CHECK(std::real(v) >= 0.0);
        CHECK(std::abs(std::imag(v)) < 1e-10);
    }

    // product rule (-Lap)^s(fg) = f (-Lap)^s g + g (-Lap)^s f - I_s(f,g)
    auto product = [&](double x) { return gauss(x) * shifted(x); };
    for (double s : {0.25, 0.5, 0.75}) {
        for (double x : {0.0, 0.6}) {
            const cplx lhs = apply_fraclap_direct(product, s, x);
            const cplx rhs = gauss(x) * apply_fraclap_direct(shifted, s, x) +
                             shifted(x) * apply_fraclap_direct(gauss, s, x) - bilinear_Is(gauss, shifted, s, x);
            CHECK(std::abs(lhs - rhs) < 1e-4);
        }
    }
}

TEST_CASE("fractional derivative multiplier") {
    const Grid1D g = Grid1D::make_periodic(-1.0, 1.0, 64);
    const double beta = 0.3;

    const ComplexField ones = ComplexField::sample(g, [](double) { return cplx(1.0, 0.0); });
    for (const auto& v : frac_derivative(ones, beta).v) CHECK(std::abs(v) < 1e-13);

    const double k = g.mode_freq(7);
    const ComplexField wave = ComplexField::sample(g, [&](double x) { return std::polar(1.0, k * x); });
    const ComplexField dw = frac_derivative(wave, beta);
    const double mult = -std::pow(std::abs(k), beta);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(dw.v[std::size_t(j)] - mult * wave.v[std::size_t(j)]) < 1e-11 * std::abs(mult));

    // the sign squares away: D^beta D^beta has multiplier |k|^{2 beta}
    const ComplexField ddw = frac_derivative(dw, beta);
    const double mult2 = std::pow(std::abs(k), 2.0 * beta);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(ddw.v[std::size_t(j)] - mult2 * wave.v[std::size_t(j)]) < 1e-10 * mult2);
}

TEST_CASE("C_gamma: convergence domain and divergence errors") {
    // gamma >= 2s diverges at infinity
    CHECK_THROWS_AS(compute_C_gamma(0.5, 1.0, 1.0), numeric_error);
    // principal branch PV diverges at the origin when gamma <= 2s-1 (s >= 2/3 with gamma = s/2)
    CHECK_THROWS_AS(compute_C_gamma(0.9, 0.45, 1.0), numeric_error);
    // absolute branch converges there
    CgammaOptions abs_opt;
    abs_opt.branch = Branch::absolute_value;
    const CgammaResult r = compute_C_gamma(0.9, 0.45, 1.0, abs_opt);
    CHECK(r.pv_convergent);
    CHECK_FALSE(r.abs_convergent);
    CHECK(std::isfinite(std::real(r.value)));

    // finiteness flags at (s,gamma) = (0.5, 0.25)
    const CgammaResult ok = compute_C_gamma(0.5, 0.25, 1.0);
    CHECK(ok.abs_convergent);
    CHECK(ok.pv_convergent);
}

TEST_CASE("C_gamma integral matches the Gamma-function closed forms") {
    const double xi0 = 2.0 * pi * pi;
    for (auto [s, gamma] : std::vector<std::pair<double, double>>{{0.4, 0.2}, {0.3, 0.45}, {0.25, 0.3}, {0.45, 0.6}}) {
        const cplx measured = compute_C_gamma(s, gamma, xi0).value;
        const cplx expected = normalization_constant(s) * std::pow(xi0, 2.0 * s - gamma) /
                              std::tgamma(1.0 + gamma) * oracles::I_principal_closed(s, gamma);
        CHECK(std::abs(measured - expected) < 1e-8 * std::max(1.0, std::abs(expected)));

        CgammaOptions abs_opt;
        abs_opt.branch = Branch::absolute_value;
        const cplx measured_abs = compute_C_gamma(s, gamma, xi0, abs_opt).value;
        const cplx expected_abs = normalization_constant(s) * std::pow(xi0, 2.0 * s - gamma) /
                                  std::tgamma(1.0 + gamma) * oracles::I_absolute_closed(s, gamma);
        CHECK(std::abs(measured_abs - expected_abs) < 1e-8 * std::max(1.0, std::abs(expected_abs)));
    }
}

TEST_CASE("C_gamma vanishes identically at s = 1/2 under the principal branch") {
    // the closed form carries a cos(pi s) factor, so every principal-branch
    // C_gamma is zero at s = 1/2; the quadrature must find that cancellation
    for (double gamma : {0.25, 0.5, 0.75}) {
        const cplx v = compute_C_gamma(0.5, gamma, 2.0 * pi * pi).value;
        CHECK(std::abs(v) < 1e-7);
    }
    // while the absolute branch stays away from zero
    CgammaOptions abs_opt;
    abs_opt.branch = Branch::absolute_value;
    CHECK(std::abs(compute_C_gamma(0.5, 0.25, 2.0 * pi * pi, abs_opt).value) > 1.0);
}

TEST_CASE("C_0 limit reproduces the plane-wave eigenvalue") {
    const double s = 0.5, xi0 = 2.0 * pi * pi, eps = 1.0 / 32.0;
    const cplx c0 = compute_C_gamma(s, 1e-8, xi0).value;
    const double eigen = std::pow(xi0 / eps, 2.0 * s);
    CHECK(std::abs(c0 * std::pow(eps, -2.0 * s) - eigen) < 1e-6 * eigen);
}

TEST_CASE("C_gamma is invariant under doubling the quadrature resolution") {
    const double s = 0.5, gamma = 0.25, xi0 = 2.0 * pi * pi;
    for (Branch b : {Branch::principal, Branch::absolute_value}) {
        CgammaOptions lo;
        lo.branch = b;
        CgammaOptions hi;
        hi.branch = b;
        hi.quad.cutoff = 2.0 * lo.quad.cutoff;
        hi.quad.delta = 0.5 * lo.quad.delta;
        const cplx a = compute_C_gamma(s, gamma, xi0, lo).value;
        const cplx c = compute_C_gamma(s, gamma, xi0, hi).value;
        CHECK(std::abs(a - c) < 1e-8 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("FracContext derives beta = s/2 and the three constants") {
    const FracContext ctx = FracContext::make(0.5, 2.0 * pi * pi);
    CHECK(ctx.beta == Catch::Approx(0.25));
    CHECK(ctx.beta < 2.0 * ctx.s / 3.0);
    CHECK(ctx.c1s == Catch::Approx(1.0 / pi));
    for (const auto& c : ctx.C) CHECK(std::isfinite(std::abs(c)));
    CHECK_THROWS_AS(FracContext::make(1.2, 1.0), validation_error);
    CHECK_THROWS_AS(FracContext::make(0.5, 0.0), validation_error);
}
