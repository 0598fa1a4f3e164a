#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "newton_flow/profile.hpp"
#include "newton_flow/symfun.hpp"

namespace newton_flow::catalog {

using symfun::CurvatureVector;
using Point = Eigen::VectorXd;

// Catalog models. Closed models carry the inward unit normal, so centred
// spheres and cylinders have <X, N> = -R and non-negative curvatures.

/// The hyperplane x_{n+1} = 0 through the origin, normal +e_{n+1}.
struct Hyperplane {
    int n = 2;
};

struct Sphere {
    int n = 2;
    double radius = 1.0;
};

/// S^m(R) x R^{n-m}, with the spherical factor in the first m+1 coordinates.
struct Cylinder {
    int n = 3;
    int m = 1;
    double radius = 1.0;
};

/// Surface of revolution in R^3 (n = 2) with a discretized meridian.
/// orientation = +1 takes N = (-z_u, rho_u) / |X_u| in the meridian plane,
/// which points toward the axis for radial graphs.
struct Revolution {
    ProfileCurve profile;
    int orientation = 1;
};

/// rho^2/a^2 + z^2/b^2 = 1. Queries discretize the band |z| <= band_fraction * b
/// at the resolution they request; the flow evolves the closed meridian.
struct EllipsoidRev {
    double a = 1.0;
    double b = 2.0;
};

inline constexpr double ellipsoid_band_fraction = 0.8;

using HypersurfaceModel = std::variant<Hyperplane, Sphere, Cylinder, Revolution, EllipsoidRev>;

[[nodiscard]] int dimension(const HypersurfaceModel& model);
[[nodiscard]] std::string_view model_name(const HypersurfaceModel& model);
/// Throws DomainError when a model's parameters break its invariants.
void validate(const HypersurfaceModel& model);

/// A grid node of a discretized model. `resolution` selects the grid for
/// EllipsoidRev and is ignored for Revolution, whose grid is fixed.
struct GridNode {
    std::size_t index = 0;
    std::size_t resolution = 0;
};

using ModelPoint = std::variant<Point, GridNode>;

struct PointSample {
    Point position;
    CurvatureVector curvatures;
    double support = 0.0;
};

/// Tolerance for "the point lies on the model".
inline constexpr double on_model_tolerance = 1e-9;

/// delta_m(r) = C(m, r)^{1/(r+1)}, the radius of the S^m factor of a
/// self-shrinking cylinder. Requires 1 <= r <= m.
[[nodiscard]] double shrinker_radius(int m, int r);

[[nodiscard]] CurvatureVector principal_curvatures(const HypersurfaceModel& model,
                                                   const ModelPoint& point);
[[nodiscard]] double support_function(const HypersurfaceModel& model, const ModelPoint& point);
/// sigma_r + <X, N>; zero exactly where the self-shrinker equation holds.
[[nodiscard]] double shrinker_residual(const HypersurfaceModel& model, int r, const ModelPoint& point);

/// C(m, p) C(m, r)^{-p/(r+1)}: sigma_p on S^m(delta_m(r)) x R^{n-m}.
[[nodiscard]] double sigma_p_cylinder(int m, int r, int p);

struct SamplingOptions {
    /// Cylinders are sampled on the axial box [-L, L] with L = factor * R.
    double axial_extent_factor = 2.0;
};

/// Deterministic samples. Spheres use a resolution^2 angular grid (a circle
/// of `resolution` points when n = 1); cylinders take the sphere grid of the
/// S^m factor times `resolution` axial stations; hyperplanes a square grid;
/// discretized models one sample per grid node.
[[nodiscard]] std::vector<PointSample> sample_points(const HypersurfaceModel& model,
                                                     std::size_t resolution,
                                                     const SamplingOptions& options = {});

/// Meridian used to discretize an n = 2 model at `nodes` grid points: spheres
/// as closed polar profiles, ellipsoids as the pole-free band, S^1 x R as a constant radial
/// graph over [-2R, 2R], the plane as the annulus 1/2 <= rho <= 3/2.
/// Revolution models return their own profile unchanged.
[[nodiscard]] ProfileCurve rotational_profile(const HypersurfaceModel& model, std::size_t nodes);

/// Orientation to pair with rotational_profile().
[[nodiscard]] int rotational_orientation(const HypersurfaceModel& model);

/// Whether the model is one of the exact self-shrinker families of the
/// catalog for this r (hyperplane, S^n(delta_n(r)), S^m(delta_m(r)) x R^{n-m}
/// with r <= m), judged by its parameters.
[[nodiscard]] bool is_catalog_shrinker(const HypersurfaceModel& model, int r,
                                       double radius_tolerance = 1e-12);

}  // namespace newton_flow::catalog
