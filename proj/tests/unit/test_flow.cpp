#include <cmath>
#include <numbers>

#include "doctest.h"

#include "newton_flow/catalog.hpp"
#include "newton_flow/errors.hpp"
#include "newton_flow/flow.hpp"
#include "support/oracles.hpp"

using namespace newton_flow;
using namespace newton_flow::flow;

namespace {

double mean_radius(const Eigen::Matrix2Xd& v) {
    return v.colwise().norm().mean();
}

}  // namespace

TEST_CASE("sphere radius law") {
    // R^{r+1} = R0^{r+1} - (r+1) C(n,r) t
    for (int n = 1; n <= 5; ++n) {
        for (int r = 1; r <= n; ++r) {
            const double r0 = 1.7;
            const double big_t = extinction_time(n, r, r0);
            CHECK(big_t == doctest::Approx(std::pow(r0, r + 1) / ((r + 1) * oracle::binomial(n, r))));
            const double t = 0.3 * big_t;
            const double expected = std::pow(std::pow(r0, r + 1) - (r + 1) * oracle::binomial(n, r) * t, 1.0 / (r + 1));
            CHECK(sphere_radius_exact(n, r, r0, t) == doctest::Approx(expected).epsilon(1e-14));
            CHECK(sphere_radius_exact(n, r, r0, 0.0) == doctest::Approx(r0));
            CHECK_THROWS_AS((void)sphere_radius_exact(n, r, r0, big_t), ExtinctError);
        }
    }
    CHECK_THROWS_AS((void)sphere_radius_exact(2, 3, 1.0, 0.1), DomainError);
    CHECK_THROWS_AS((void)sphere_radius_exact(2, 1, 1.0, -0.1), DomainError);
    CHECK(extinction_time(1, 1, 1.0) == doctest::Approx(0.5));
    CHECK(extinction_time(2, 1, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("canonical scale factor") {
    CHECK(canonical_phi(1, 0.0) == 1.0);
    CHECK(canonical_phi(1, 0.3) == doctest::Approx(std::sqrt(0.4)));
    CHECK(canonical_phi(2, 0.1) == doctest::Approx(std::cbrt(0.7)));
    CHECK(canonical_phi(1, 0.5) == 0.0);
    CHECK(canonical_phi(1, 0.9) == 0.0);
}

TEST_CASE("regular polygons have exact circumscribed curvature") {
    const auto state = regular_polygon(2.0, 64);
    const auto g = curve_geometry(state.vertices);
    for (Eigen::Index i = 0; i < g.curvature.size(); ++i) {
        CHECK(g.curvature(i) == doctest::Approx(0.5).epsilon(1e-12));
        // inward
        CHECK(g.normal.col(i).dot(state.vertices.col(i)) == doctest::Approx(-2.0).epsilon(1e-12));
    }
    CHECK(g.min_edge == doctest::Approx(2.0 * 2.0 * std::sin(std::numbers::pi / 64.0)));
    CHECK_THROWS_AS((void)regular_polygon(1.0, 8), DomainError);
    CHECK_THROWS_AS((void)regular_polygon(-1.0, 32), DomainError);
}

TEST_CASE("curve steps respect the stability bound") {
    const auto state = regular_polygon(1.0, 64);
    const double dt = curve_stable_dt(state.vertices, 0.25);
    CHECK(dt > 0.0);
    const auto next = step_curve(state, dt);
    CHECK(next.steps == 1);
    CHECK(next.t == doctest::Approx(dt));
    CHECK(mean_radius(next.vertices) < 1.0);
    CHECK_THROWS_AS((void)step_curve(state, 10.0 * dt), CflError);
    CHECK_THROWS_AS((void)step_curve(state, -dt), DomainError);
    Eigen::Matrix2Xd squashed = state.vertices;
    squashed.col(1) = squashed.col(0);
    CHECK_THROWS_AS((void)step_curve(CurveState{squashed, 0.0, 0}, dt), NumericalError);
}

TEST_CASE("shrinking circle follows R^2 = R0^2 - 2t") {
    for (auto integrator : {Integrator::Euler, Integrator::Rk2}) {
        FlowConfig c;
        c.r = 1;
        c.model = catalog::Sphere{1, 1.0};
        c.t_end = 0.4;
        c.resolution = 128;
        c.integrator = integrator;
        const auto res = run(c);
        CHECK(res.status == FlowStatus::Completed);
        REQUIRE(res.analytic_extinction_time);
        CHECK(*res.analytic_extinction_time == doctest::Approx(0.5));
        for (const auto& d : res.diagnostics) {
            CHECK(std::abs(d.min_radius * d.min_radius - (1.0 - 2.0 * d.t)) < 1e-3);
        }
        CHECK(res.final_time == doctest::Approx(0.4));
    }
}

TEST_CASE("sphere meridian follows the r = 1 and r = 2 laws") {
    {
        FlowConfig c;
        c.r = 1;
        c.model = catalog::Revolution{catalog::closed_sphere_profile(1.0, 64), 1};
        c.t_end = 0.15;
        c.resolution = 64;
        const auto res = run(c);
        CHECK(res.status == FlowStatus::Completed);
        CHECK(std::abs(res.diagnostics.back().min_radius - std::sqrt(1.0 - 4.0 * 0.15)) < 5e-3);
    }
    {
        FlowConfig c;
        c.r = 2;
        c.model = catalog::Revolution{catalog::closed_sphere_profile(1.0, 64), 1};
        c.t_end = 0.2;
        c.resolution = 64;
        const auto res = run(c);
        CHECK(res.status == FlowStatus::Completed);
        CHECK(std::abs(res.diagnostics.back().min_radius - sphere_radius_exact(2, 2, 1.0, 0.2)) < 5e-3);
    }
}

TEST_CASE("cylinder under r = 2 does not move") {
    const auto profile = catalog::constant_profile(1.0, -2.0, 2.0, 64, catalog::Boundary::Periodic);
    RevolutionState state{profile, 1, 0.0, 0};
    const double dt = revolution_stable_dt(profile, 1, 2, 0.25);
    for (int step = 0; step < 20; ++step) {
        const auto next = step_revolution(state, 2, dt);
        for (std::size_t i = 0; i < profile.size(); ++i) {
            CHECK(std::abs(next.profile.rho()[i] - state.profile.rho()[i]) <= 1e-10);
        }
        state = next;
    }
    CHECK(state.steps == 20);
}

TEST_CASE("cylinder radius ODE") {
    // S^1 x R shrinks like the circle.
    FlowConfig c;
    c.r = 1;
    c.model = catalog::Cylinder{2, 1, 1.0};
    c.t_end = 0.3;
    const auto res = run(c);
    CHECK(res.diagnostics.back().min_radius == doctest::Approx(std::sqrt(1.0 - 0.6)).epsilon(1e-3));
}

TEST_CASE("rescaled shrinker stays a shrinker") {
    FlowConfig c;
    c.r = 1;
    c.model = catalog::Sphere{2, std::sqrt(2.0)};
    c.t_end = 0.4;
    c.rescaled = true;
    const auto res = run(c);
    for (const auto& d : res.diagnostics) {
        CHECK(d.max_shrinker_residual < 1e-3);
        CHECK(d.homothety_defect < 1e-3);
    }
}

TEST_CASE("extinction is a status, not an error") {
    FlowConfig c;
    c.r = 1;
    c.model = catalog::Sphere{1, 1.0};
    c.t_end = 1.0;
    c.resolution = 64;
    const auto res = run(c);
    CHECK(res.status == FlowStatus::Extinct);
    // 64-gon extinction time is within O(h^2) of T = 0.5
    CHECK(res.final_time == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("hyperplanes are stationary") {
    FlowConfig c;
    c.model = catalog::Hyperplane{3};
    c.r = 2;
    const auto res = run(c);
    CHECK(res.status == FlowStatus::Completed);
    for (const auto& d : res.diagnostics) {
        CHECK(d.max_shrinker_residual == 0.0);
        CHECK(d.homothety_defect == 0.0);
    }
}

TEST_CASE("ellipsoid flow stays finite and shrinks") {
    FlowConfig c;
    c.model = catalog::EllipsoidRev{1.0, 2.0};
    c.t_end = 0.05;
    c.resolution = 64;
    const auto res = run(c);
    CHECK(res.status == FlowStatus::Completed);
    CHECK(res.diagnostics.back().min_radius < res.diagnostics.front().min_radius);
}

TEST_CASE("configuration is validated") {
    FlowConfig c;
    c.t_end = -1.0;
    CHECK_THROWS_AS((void)run(c), DomainError);
    c = FlowConfig{};
    c.cfl_safety = 2.0;
    CHECK_THROWS_AS((void)run(c), DomainError);
    c = FlowConfig{};
    c.r = 3;
    CHECK_THROWS_AS((void)run(c), DomainError);
    c = FlowConfig{};
    c.output_stride = 0;
    CHECK_THROWS_AS((void)run(c), DomainError);
    c = FlowConfig{};
    c.model = catalog::Sphere{1, 1.0};
    c.resolution = 8;
    CHECK_THROWS_AS((void)run(c), DomainError);
}

TEST_CASE("diagnostics cadence") {
    FlowConfig c;
    c.model = catalog::Sphere{1, 1.0};
    c.resolution = 64;
    c.t_end = 0.05;
    c.output_stride = 10;
    const auto res = run(c);
    CHECK(res.diagnostics.front().t == 0.0);
    CHECK(res.diagnostics.back().t == doctest::Approx(0.05));
    CHECK(res.diagnostics.size() == res.steps / 10 + 1 + (res.steps % 10 != 0 ? 1 : 0));
}
