#include <cmath>
#include <vector>

#include "doctest.h"

#include "newton_flow/catalog.hpp"
#include "newton_flow/errors.hpp"
#include "newton_flow/operators.hpp"
#include "support/oracles.hpp"

using namespace newton_flow;
using namespace newton_flow::operators;

namespace {

const std::vector<std::size_t> grids{64, 128, 256};

// Interior error of L_{r-1} z against r sigma_r N_z on the ellipsoid band,
// with sigma_r and N from the implicit-surface formulas.
double height_error(std::size_t nodes, int r) {
    const catalog::EllipsoidRev e{1.0, 2.0};
    const auto surface = DiscreteSurface::from_model(e, nodes);
    const auto lz = lr_apply(height_field(surface), r);
    std::vector<double> err(surface->size());
    for (std::size_t i = 0; i < surface->size(); ++i) {
        const auto& g = surface->geometry().at(static_cast<std::ptrdiff_t>(i));
        const auto o = oracle::ellipsoid_at(e.a, e.b, g.rho, g.height);
        const double grad = std::hypot(g.rho / (e.a * e.a), g.height / (e.b * e.b));
        const double n_z = -(g.height / (e.b * e.b)) / grad;
        const double sigma = r == 1 ? o.k_meridian + o.k_parallel : o.gauss;
        err[i] = lz.values[i] - r * sigma * n_z;
    }
    return interior_max_abs(err);
}

}  // namespace

TEST_CASE("fields carry ghost values and multiply pointwise") {
    const auto surface = DiscreteSurface::from_model(catalog::EllipsoidRev{}, 32);
    const auto z = height_field(surface);
    const auto x2 = position_norm_sq(surface);
    CHECK(z.size() == 32);
    const auto prod = z * x2;
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(prod[i] == doctest::Approx(z[i] * x2[i]));
    }
    CHECK_THROWS_AS(ScalarField(surface, std::vector<double>(31, 0.0)), DomainError);
    const auto other = DiscreteSurface::from_model(catalog::EllipsoidRev{}, 32);
    CHECK_THROWS_AS((void)(z * height_field(other)), DomainError);
    CHECK_THROWS_AS((void)sigma_field(surface, -1), DomainError);
}

TEST_CASE("order outside [1, 2] is rejected") {
    const auto surface = DiscreteSurface::from_model(catalog::EllipsoidRev{}, 32);
    CHECK_THROWS_AS((void)lr_apply(height_field(surface), 0), DomainError);
    CHECK_THROWS_AS((void)lr_apply(height_field(surface), 3), DomainError);
    CHECK_THROWS_AS((void)verify_support_identity(catalog::Sphere{3, 1.0}, 1, grids), DomainError);
}

TEST_CASE("L_{r-1} of the height function converges at second order") {
    for (int r = 1; r <= 2; ++r) {
        const double e64 = height_error(64, r);
        const double e128 = height_error(128, r);
        const double e256 = height_error(256, r);
        const double q1 = std::log2(e64 / e128);
        const double q2 = std::log2(e128 / e256);
        CAPTURE(r);
        CHECK(q1 > 1.5);
        CHECK(q2 > 1.5);
        CHECK(q2 < 2.5);
        CHECK(e256 < 1e-3);
    }
}

TEST_CASE("coordinate functions on a sphere are eigenfunctions") {
    const double radius = 1.5;
    const auto surface = DiscreteSurface::from_model(catalog::Sphere{2, radius}, 256);
    const auto z = height_field(surface);
    for (int r = 1; r <= 2; ++r) {
        // P_0 = I, P_1 = (1/R) I: L_{r-1} z = -2 z / R^{r+1}.
        const auto lz = lr_apply(z, r);
        std::vector<double> err(surface->size());
        for (std::size_t i = 0; i < err.size(); ++i) {
            err[i] = lz.values[i] + 2.0 * z[i] / std::pow(radius, r + 1);
        }
        CHECK(interior_max_abs(err) < 1e-3);
        CHECK(lz.truncation_order == 2);
    }
}

TEST_CASE("drifted operator subtracts the position pairing") {
    const auto surface = DiscreteSurface::from_model(catalog::EllipsoidRev{}, 64);
    const auto f = sigma_field(surface, 1);
    for (int r = 1; r <= 2; ++r) {
        const auto l = lr_apply(f, r);
        const auto d = drifted_apply(f, r);
        const auto x = position_gradient_pairing(f);
        for (std::size_t i = 0; i < surface->size(); ++i) {
            CHECK(d.values[i] == doctest::Approx(l.values[i] - x[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradient pairings on a sphere") {
    const double radius = 2.0;
    const auto surface = DiscreteSurface::from_model(catalog::Sphere{2, radius}, 256);
    const auto z = height_field(surface);
    const auto grad = newton_pairing(z, z, 1);
    const auto drift = position_gradient_pairing(z);
    std::vector<double> err(surface->size());
    std::vector<double> drift_err(surface->size());
    for (std::size_t i = 0; i < err.size(); ++i) {
        err[i] = grad[i] - (1.0 - z[i] * z[i] / (radius * radius));
        drift_err[i] = drift[i];
    }
    CHECK(interior_max_abs(err) < 1e-3);
    // X is normal to a centred sphere.
    CHECK(interior_max_abs(drift_err) < 1e-3);
}

TEST_CASE("support and position identities on the ellipsoid band") {
    for (int r = 1; r <= 2; ++r) {
        for (const auto& rep : {verify_support_identity(catalog::EllipsoidRev{1.0, 2.0}, r, grids),
                                verify_position_identity(catalog::EllipsoidRev{1.0, 2.0}, r, grids)}) {
            CAPTURE(rep.identity);
            CAPTURE(r);
            CHECK(rep.passed);
            CHECK(rep.entries.size() == 3);
            CHECK(rep.finest_residual() <= 1e-3);
            for (double q : rep.observed_orders) {
                CHECK(q >= ConvergenceReport::order_min);
                CHECK(q <= ConvergenceReport::order_max);
            }
        }
    }
}

TEST_CASE("identities are exact on the discrete cylinder") {
    for (int r = 1; r <= 2; ++r) {
        const auto s = verify_support_identity(catalog::Cylinder{2, 1, 1.0}, r, grids);
        const auto p = verify_position_identity(catalog::Cylinder{2, 1, 1.0}, r, grids);
        CHECK(s.passed);
        CHECK(p.passed);
        CHECK(s.finest_residual() <= ConvergenceReport::exact_floor);
        CHECK(p.finest_residual() <= ConvergenceReport::exact_floor);
    }
}

TEST_CASE("convergence study flags the wrong order") {
    const auto first_order = convergence_study("synthetic", 1, grids, [](std::size_t m) {
        return ConvergenceEntry{m, 1.0 / static_cast<double>(m), 1.0 / static_cast<double>(m)};
    });
    CHECK_FALSE(first_order.passed);
    CHECK(first_order.observed_orders.front() == doctest::Approx(1.0));
    const auto second_order = convergence_study("synthetic", 1, grids, [](std::size_t m) {
        const double h = 1.0 / static_cast<double>(m);
        return ConvergenceEntry{m, h, h * h};
    });
    CHECK(second_order.passed);
}

TEST_CASE("product rule converges") {
    for (int r = 1; r <= 2; ++r) {
        const auto rep = convergence_study("product_rule", r, grids, [r](std::size_t m) {
            const auto surface = DiscreteSurface::from_model(catalog::EllipsoidRev{}, m);
            const auto f = ScalarField::from_geometry(surface, [](const NodeGeometry& g) { return std::exp(0.3 * g.height); });
            const auto g = ScalarField::from_geometry(surface, [](const NodeGeometry& n) { return n.rho * n.rho * n.height; });
            return ConvergenceEntry{m, surface->geometry().spacing(), verify_product_rule(f, g, r)};
        });
        CAPTURE(r);
        CHECK(rep.passed);
    }
}

TEST_CASE("shrinker PDE on the catalog") {
    for (int n = 1; n <= 6; ++n) {
        for (int r = 1; r <= n; ++r) {
            const auto sphere = verify_shrinker_pde(catalog::Sphere{n, catalog::shrinker_radius(n, r)}, r);
            CHECK(sphere.main <= 1e-10);
            CHECK(sphere.squared <= 1e-10);
            const auto plane = verify_shrinker_pde(catalog::Hyperplane{n}, r);
            CHECK(plane.main == 0.0);
            for (int m = r; m <= n - 1; ++m) {
                const auto cyl = verify_shrinker_pde(catalog::Cylinder{n, m, catalog::shrinker_radius(m, r)}, r);
                CHECK(cyl.main <= 1e-10);
                CHECK(cyl.squared <= 1e-10);
            }
        }
    }
    CHECK_THROWS_AS((void)verify_shrinker_pde(catalog::Sphere{2, 1.0}, 1), NotShrinkerError);
    CHECK_THROWS_AS((void)verify_shrinker_pde(catalog::Sphere{2, 1.0}, 3), DomainError);
}

TEST_CASE("discrete shrinker PDE on a meridian of the sqrt(2) sphere") {
    const catalog::Revolution rev{catalog::closed_sphere_profile(std::sqrt(2.0), 128), 1};
    const auto res = verify_shrinker_pde(rev, 1, {.resolution = 128, .shrinker_tolerance = 1e-3});
    CHECK(res.shrinker < 1e-3);
    CHECK(res.main < 1e-3);
    CHECK(res.squared < 1e-3);
    CHECK_THROWS_AS((void)verify_shrinker_pde(rev, 1, {.resolution = 128, .shrinker_tolerance = 1e-10}), NotShrinkerError);
}
