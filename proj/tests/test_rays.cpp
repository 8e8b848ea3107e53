#include <catch2/catch_amalgamated.hpp>

#include "fswkb/rays.hpp"

using namespace fswkb;

TEST_CASE("group velocity values and trichotomy") {
    // s = 1/2: unit speed at every frequency, exactly
    for (double xi : {0.3, 1.0, 7.0, 100.0}) CHECK(group_velocity(0.5, xi) == 1.0);

    const double two_pi_sq = 2.0 * pi * pi;
    CHECK(group_velocity(0.1, two_pi_sq) == Catch::Approx(0.0183974).epsilon(1e-4));
    CHECK(group_velocity(0.9, two_pi_sq) == Catch::Approx(19.5675).epsilon(1e-4));

    // monotone decreasing / constant / increasing in |xi0|
    CHECK(group_velocity(0.1, 10.0) > group_velocity(0.1, 100.0));
    CHECK(group_velocity(0.9, 10.0) < group_velocity(0.9, 100.0));

    // |v| independent of the sign of xi0
    CHECK(group_velocity(0.3, -4.0) == Catch::Approx(group_velocity(0.3, 4.0)).epsilon(1e-15));

    CHECK_THROWS_AS(group_velocity(0.3, 0.0), validation_error);
}

TEST_CASE("ray position closed form") {
    const Ray r1{0.0, 5.0, +1, 0.5};
    CHECK(ray_position(r1, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(ray_position(r1, 0.0) == 0.0);

    const Ray r2{0.0, 2.0 * pi * pi, +1, 0.9};
    CHECK(ray_position(r2, 0.1) == Catch::Approx(1.9568).epsilon(1e-3));

    CHECK_THROWS_AS(ray_position(r1, -1.0), validation_error);
    CHECK_THROWS_AS(ray_position(Ray{0.0, 1.0, 3, 0.5}, 1.0), validation_error);
}

TEST_CASE("bicharacteristic integration is exact for the constant flow") {
    const Ray r{0.3, 2.0 * pi * pi, -1, 0.5};
    const auto traj = integrate_bicharacteristics(r, 5.0, 1e-2);
    REQUIRE(traj.size() > 2);

    // xi and tau are conserved exactly
    const double tau0 = std::pow(std::abs(r.xi0), 2.0 * r.s);
    for (const auto& st : traj) {
        CHECK(st.xi == r.xi0);
        CHECK(st.tau == tau0);
    }

    double worst = 0.0;
    for (const auto& st : traj) worst = std::max(worst, std::abs(st.x - ray_position(r, st.t)));
    CHECK(worst < 1e-10);

    // halving dt leaves the endpoint unchanged
    const auto fine = integrate_bicharacteristics(r, 5.0, 5e-3);
    CHECK(std::abs(traj.back().x - fine.back().x) < 1e-12);
}

TEST_CASE("specular reflection breakpoints") {
    // unit-speed ray bouncing in (-1,1): hits +1 at t=1, -1 at t=3, back at 0 at t=4
    const Ray r{0.0, 3.0, +1, 0.5};
    const BoundedDomain dom{-1.0, 1.0};
    const auto path = reflect_ray(r, dom, 4.0);
    REQUIRE(path.size() == 4);
    CHECK(path[1].t == Catch::Approx(1.0));
    CHECK(path[1].x == Catch::Approx(1.0));
    CHECK(path[2].t == Catch::Approx(3.0));
    CHECK(path[2].x == Catch::Approx(-1.0));
    CHECK(path[3].t == Catch::Approx(4.0));
    CHECK(path[3].x == Catch::Approx(0.0).margin(1e-12));

    // total arc length equals |v| * t for any reflection count
    double arc = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) arc += std::abs(path[i].x - path[i - 1].x);
    CHECK(arc == Catch::Approx(4.0));

    // path stays inside and is 1-Lipschitz with constant |v|
    for (std::size_t i = 1; i < path.size(); ++i) {
        CHECK(path[i].x >= dom.left - 1e-12);
        CHECK(path[i].x <= dom.right + 1e-12);
        CHECK(std::abs(path[i].x - path[i - 1].x) <= 1.0 * (path[i].t - path[i - 1].t) + 1e-12);
    }
}

TEST_CASE("zero-velocity ray path is constant") {
    // s > 1/2 admits xi0 = 0 with v = 0
    const Ray r{0.25, 0.0, +1, 0.75};
    const auto path = reflect_ray(r, BoundedDomain{-1.0, 1.0}, 7.0);
    REQUIRE(path.size() == 2);
    CHECK(path.back().x == 0.25);
    CHECK(path.back().t == 7.0);
}

TEST_CASE("reflected position evaluation") {
    const Ray r{0.0, 3.0, +1, 0.5};
    const auto path = reflect_ray(r, BoundedDomain{-1.0, 1.0}, 4.0);
    CHECK(reflected_position(path, 0.5) == Catch::Approx(0.5));
    CHECK(reflected_position(path, 2.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(reflected_position(path, 3.5) == Catch::Approx(-0.5));
}
