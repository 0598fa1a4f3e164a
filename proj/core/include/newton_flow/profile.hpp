#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace newton_flow::catalog {

// How the grid continues past its first and last node.
//   Periodic    - wraps around (radial graphs shift the height by one period)
//   Neumann     - mirror image across the end node, node-centred grid
//   Extrapolate - cubic extrapolation, for bands cut out of a larger surface
//   Axis        - the curve meets the rotation axis half a cell past the end
//                 node and continues as its reflection (closed surfaces)
enum class Boundary { Periodic, Neumann, Extrapolate, Axis };

enum class ProfileKind {
    RadialGraph,  // rho = f(z) sampled on a uniform z grid
    Parametric,   // (rho(u), z(u)) sampled on a uniform parameter grid
};

/// Meridian curve of a surface of revolution about the z axis,
///   X(u, theta) = (rho(u) cos theta, rho(u) sin theta, z(u)).
/// Node i sits at parameter u_0 + i h.
class ProfileCurve {
public:
    [[nodiscard]] static ProfileCurve radial_graph(double z0, double h, std::vector<double> f,
                                                   Boundary boundary);
    [[nodiscard]] static ProfileCurve parametric(double u0, double h, std::vector<double> rho,
                                                 std::vector<double> height, Boundary boundary);

    [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
    [[nodiscard]] Boundary boundary() const noexcept { return boundary_; }
    [[nodiscard]] std::size_t size() const noexcept { return rho_.size(); }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] double parameter(std::size_t i) const noexcept {
        return u0_ + static_cast<double>(i) * h_;
    }
    [[nodiscard]] std::span<const double> rho() const noexcept { return rho_; }
    [[nodiscard]] std::span<const double> height() const noexcept { return height_; }
    /// Height offset between consecutive periods (Periodic only).
    [[nodiscard]] double period_shift() const noexcept;

    /// Same grid and boundary, new node coordinates. Radial graphs keep their
    /// heights, so `height` is ignored for them.
    [[nodiscard]] ProfileCurve with_points(std::vector<double> rho, std::vector<double> height) const;

private:
    ProfileCurve() = default;
    void validate() const;

    ProfileKind kind_ = ProfileKind::RadialGraph;
    Boundary boundary_ = Boundary::Neumann;
    double u0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> rho_;
    std::vector<double> height_;
};

/// Discrete differential geometry of a profile at one node. Derivatives are
/// centred second-order differences in the grid parameter.
struct NodeGeometry {
    double rho = 0.0;
    double height = 0.0;
    double d_rho = 0.0;
    double d_height = 0.0;
    double speed = 0.0;      // |X_u|
    double normal_rho = 0.0;
    double normal_z = 0.0;
    double k_meridian = 0.0;
    double k_parallel = 0.0;
    double support = 0.0;    // <X, N>
};

/// Node geometry for i in [-1, M]: every node plus one ghost on each side, so
/// that flux stencils can reach across the boundary.
class ProfileGeometry {
public:
    ProfileGeometry(const ProfileCurve& profile, int orientation);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] Boundary boundary() const noexcept { return boundary_; }
    [[nodiscard]] int orientation() const noexcept { return orientation_; }
    /// i = -1 and i = size() address the ghosts.
    [[nodiscard]] const NodeGeometry& at(std::ptrdiff_t i) const {
        return nodes_[static_cast<std::size_t>(i + 1)];
    }
    /// Smallest arclength spacing |X_u| h over the real nodes.
    [[nodiscard]] double min_arclength_spacing() const noexcept;

private:
    std::size_t size_ = 0;
    double h_ = 0.0;
    Boundary boundary_ = Boundary::Neumann;
    int orientation_ = 1;
    std::vector<NodeGeometry> nodes_;
};

/// Values of a rotationally invariant field extended by `layers` ghosts per
/// side under the boundary rule. Index j of the result is node j - layers.
[[nodiscard]] std::vector<double> extend_field(std::span<const double> values, Boundary boundary,
                                               std::size_t layers, double period_shift = 0.0);

// Analytic profiles.

/// rho = f(z) on [z_min, z_max]. Periodic grids omit the right end point.
[[nodiscard]] ProfileCurve sample_radial_graph(const std::function<double(double)>& f, double z_min,
                                               double z_max, std::size_t nodes, Boundary boundary);
[[nodiscard]] ProfileCurve constant_profile(double radius, double z_min, double z_max,
                                            std::size_t nodes, Boundary boundary);
/// rho = c cosh(z / c): a minimal surface.
[[nodiscard]] ProfileCurve catenoid_profile(double c, double z_min, double z_max, std::size_t nodes);
/// Radial-graph band of the sphere of radius R, |z| < R.
[[nodiscard]] ProfileCurve sphere_band_profile(double radius, double z_min, double z_max,
                                               std::size_t nodes);
/// Closed meridian of the ellipsoid rho^2/a^2 + z^2/b^2 = 1 in polar angle,
/// cell-centred between the poles.
[[nodiscard]] ProfileCurve closed_ellipsoid_profile(double a, double b, std::size_t nodes);
[[nodiscard]] ProfileCurve closed_sphere_profile(double radius, std::size_t nodes);
/// The part |z| <= fraction * b of the same ellipsoid, uniform in polar angle.
[[nodiscard]] ProfileCurve ellipsoid_band_profile(double a, double b, double fraction, std::size_t nodes);
/// Annulus rho in [rho_min, rho_max] of the plane z = 0.
[[nodiscard]] ProfileCurve flat_annulus_profile(double rho_min, double rho_max, std::size_t nodes);

}  // namespace newton_flow::catalog
