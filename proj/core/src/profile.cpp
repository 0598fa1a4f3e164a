#include "newton_flow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "newton_flow/errors.hpp"

namespace newton_flow::catalog {

namespace {

enum class Parity { Even, Odd };

// Ghost extension. Odd parity reflects about the end value for node-centred
// mirrors and about zero across the axis.
std::vector<double> extend(std::span<const double> v, Boundary boundary, std::size_t layers,
                           Parity parity, double shift) {
    const auto m = static_cast<std::ptrdiff_t>(v.size());
    const auto l = static_cast<std::ptrdiff_t>(layers);
    std::vector<double> out(v.size() + 2 * layers, 0.0);
    auto at = [&](std::ptrdiff_t i) -> double& { return out[static_cast<std::size_t>(i + l)]; };
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        at(i) = v[static_cast<std::size_t>(i)];
    }
    const double odd = parity == Parity::Odd ? -1.0 : 1.0;
    for (std::ptrdiff_t k = 1; k <= l; ++k) {
        switch (boundary) {
            case Boundary::Periodic:
                at(-k) = v[static_cast<std::size_t>(m - k)] - shift;
                at(m - 1 + k) = v[static_cast<std::size_t>(k - 1)] + shift;
                break;
            case Boundary::Neumann:
                if (parity == Parity::Even) {
                    at(-k) = at(k);
                    at(m - 1 + k) = at(m - 1 - k);
                } else {
                    at(-k) = 2.0 * at(0) - at(k);
                    at(m - 1 + k) = 2.0 * at(m - 1) - at(m - 1 - k);
                }
                break;
            case Boundary::Axis:
                at(-k) = odd * at(k - 1);
                at(m - 1 + k) = odd * at(m - k);
                break;
            case Boundary::Extrapolate:
                at(-k) = 4.0 * at(-k + 1) - 6.0 * at(-k + 2) + 4.0 * at(-k + 3) - at(-k + 4);
                at(m - 1 + k) = 4.0 * at(m - 2 + k) - 6.0 * at(m - 3 + k) + 4.0 * at(m - 4 + k) -
                                at(m - 5 + k);
                break;
        }
    }
    return out;
}

void require_nodes(std::size_t nodes) {
    if (nodes < 5) {
        throw DomainError("profile needs at least 5 nodes, got " + std::to_string(nodes));
    }
}

}  // namespace

ProfileCurve ProfileCurve::radial_graph(double z0, double h, std::vector<double> f, Boundary boundary) {
    if (boundary == Boundary::Axis) {
        throw DomainError("a radial graph cannot meet the rotation axis");
    }
    ProfileCurve c;
    c.kind_ = ProfileKind::RadialGraph;
    c.boundary_ = boundary;
    c.u0_ = z0;
    c.h_ = h;
    c.height_.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        c.height_[i] = z0 + static_cast<double>(i) * h;
    }
    c.rho_ = std::move(f);
    c.validate();
    return c;
}

ProfileCurve ProfileCurve::parametric(double u0, double h, std::vector<double> rho,
                                      std::vector<double> height, Boundary boundary) {
    ProfileCurve c;
    c.kind_ = ProfileKind::Parametric;
    c.boundary_ = boundary;
    c.u0_ = u0;
    c.h_ = h;
    c.rho_ = std::move(rho);
    c.height_ = std::move(height);
    c.validate();
    return c;
}

void ProfileCurve::validate() const {
    require_nodes(rho_.size());
    if (height_.size() != rho_.size()) {
        throw DomainError("profile rho and height lengths differ");
    }
    if (!(h_ > 0.0) || !std::isfinite(h_) || !std::isfinite(u0_)) {
        throw DomainError("profile grid spacing must be positive and finite");
    }
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        if (!std::isfinite(rho_[i]) || !std::isfinite(height_[i])) {
            throw DomainError("profile has non-finite coordinates");
        }
        if (!(rho_[i] > 0.0)) {
            throw DomainError("profile radius must be positive at node " + std::to_string(i));
        }
    }
}

double ProfileCurve::period_shift() const noexcept {
    if (boundary_ == Boundary::Periodic && kind_ == ProfileKind::RadialGraph) {
        return static_cast<double>(rho_.size()) * h_;
    }
    return 0.0;
}

ProfileCurve ProfileCurve::with_points(std::vector<double> rho, std::vector<double> height) const {
    ProfileCurve c = *this;
    if (rho.size() != rho_.size()) {
        throw DomainError("profile update changes the node count");
    }
    c.rho_ = std::move(rho);
    if (kind_ == ProfileKind::Parametric) {
        if (height.size() != rho_.size()) {
            throw DomainError("profile update changes the node count");
        }
        c.height_ = std::move(height);
    }
    c.validate();
    return c;
}

ProfileGeometry::ProfileGeometry(const ProfileCurve& profile, int orientation)
    : size_(profile.size()),
      h_(profile.spacing()),
      boundary_(profile.boundary()),
      orientation_(orientation) {
    if (orientation != 1 && orientation != -1) {
        throw DomainError("orientation must be +1 or -1");
    }
    const std::size_t layers = 2;
    const auto rho = extend(profile.rho(), boundary_, layers,
                            boundary_ == Boundary::Axis ? Parity::Odd : Parity::Even, 0.0);
    const auto z = extend(profile.height(), boundary_, layers,
                          boundary_ == Boundary::Axis ? Parity::Even : Parity::Odd,
                          profile.period_shift());
    const double o = static_cast<double>(orientation);
    const double h = h_;

    nodes_.resize(size_ + 2);
    for (std::size_t j = 1; j + 1 < rho.size(); ++j) {
        NodeGeometry g;
        g.rho = rho[j];
        g.height = z[j];
        g.d_rho = (rho[j + 1] - rho[j - 1]) / (2.0 * h);
        g.d_height = (z[j + 1] - z[j - 1]) / (2.0 * h);
        const double dd_rho = (rho[j + 1] - 2.0 * rho[j] + rho[j - 1]) / (h * h);
        const double dd_height = (z[j + 1] - 2.0 * z[j] + z[j - 1]) / (h * h);
        g.speed = std::hypot(g.d_rho, g.d_height);
        if (!(g.speed > 0.0)) {
            throw DomainError("profile has a stationary point (|X_u| = 0)");
        }
        g.normal_rho = -o * g.d_height / g.speed;
        g.normal_z = o * g.d_rho / g.speed;
        g.k_meridian = o * (g.d_rho * dd_height - g.d_height * dd_rho) /
                       (g.speed * g.speed * g.speed);
        g.k_parallel = o * g.d_height / (g.speed * g.rho);
        g.support = g.rho * g.normal_rho + g.height * g.normal_z;
        nodes_[j - 1] = g;
    }
}

double ProfileGeometry::min_arclength_spacing() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size_; ++i) {
        best = std::min(best, at(static_cast<std::ptrdiff_t>(i)).speed * h_);
    }
    return best;
}

std::vector<double> extend_field(std::span<const double> values, Boundary boundary,
                                 std::size_t layers, double period_shift) {
    return extend(values, boundary, layers, Parity::Even, period_shift);
}

ProfileCurve sample_radial_graph(const std::function<double(double)>& f, double z_min, double z_max,
                                 std::size_t nodes, Boundary boundary) {
    require_nodes(nodes);
    if (!(z_max > z_min)) {
        throw DomainError("radial graph needs z_max > z_min");
    }
    const double h = boundary == Boundary::Periodic
                         ? (z_max - z_min) / static_cast<double>(nodes)
                         : (z_max - z_min) / static_cast<double>(nodes - 1);
    std::vector<double> values(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        values[i] = f(z_min + static_cast<double>(i) * h);
    }
    return ProfileCurve::radial_graph(z_min, h, std::move(values), boundary);
}

ProfileCurve constant_profile(double radius, double z_min, double z_max, std::size_t nodes,
                              Boundary boundary) {
    return sample_radial_graph([radius](double) { return radius; }, z_min, z_max, nodes, boundary);
}

ProfileCurve catenoid_profile(double c, double z_min, double z_max, std::size_t nodes) {
    if (!(c > 0.0)) {
        throw DomainError("catenoid neck radius must be positive");
    }
    return sample_radial_graph([c](double z) { return c * std::cosh(z / c); }, z_min, z_max, nodes,
                               Boundary::Extrapolate);
}

ProfileCurve sphere_band_profile(double radius, double z_min, double z_max, std::size_t nodes) {
    if (!(radius > 0.0) || z_min <= -radius || z_max >= radius) {
        throw DomainError("sphere band must stay strictly between the poles");
    }
    return sample_radial_graph([radius](double z) { return std::sqrt(radius * radius - z * z); },
                               z_min, z_max, nodes, Boundary::Extrapolate);
}

ProfileCurve closed_ellipsoid_profile(double a, double b, std::size_t nodes) {
    require_nodes(nodes);
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("ellipsoid semi-axes must be positive");
    }
    const double h = std::numbers::pi / static_cast<double>(nodes);
    std::vector<double> rho(nodes);
    std::vector<double> z(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * h;
        rho[i] = a * std::sin(u);
        z[i] = -b * std::cos(u);
    }
    return ProfileCurve::parametric(0.5 * h, h, std::move(rho), std::move(z), Boundary::Axis);
}

ProfileCurve closed_sphere_profile(double radius, std::size_t nodes) {
    return closed_ellipsoid_profile(radius, radius, nodes);
}

ProfileCurve ellipsoid_band_profile(double a, double b, double fraction, std::size_t nodes) {
    require_nodes(nodes);
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("ellipsoid semi-axes must be positive");
    }
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw DomainError("ellipsoid band fraction must lie in (0, 1)");
    }
    const double u0 = std::acos(fraction);
    const double h = (std::numbers::pi - 2.0 * u0) / static_cast<double>(nodes - 1);
    std::vector<double> rho(nodes);
    std::vector<double> z(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double u = u0 + static_cast<double>(i) * h;
        rho[i] = a * std::sin(u);
        z[i] = -b * std::cos(u);
    }
    return ProfileCurve::parametric(u0, h, std::move(rho), std::move(z), Boundary::Extrapolate);
}

ProfileCurve flat_annulus_profile(double rho_min, double rho_max, std::size_t nodes) {
    require_nodes(nodes);
    if (!(rho_min > 0.0) || !(rho_max > rho_min)) {
        throw DomainError("annulus needs 0 < rho_min < rho_max");
    }
    const double h = (rho_max - rho_min) / static_cast<double>(nodes - 1);
    std::vector<double> rho(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        rho[i] = rho_min + static_cast<double>(i) * h;
    }
    return ProfileCurve::parametric(rho_min, h, std::move(rho), std::vector<double>(nodes, 0.0),
                                    Boundary::Extrapolate);
}

}  // namespace newton_flow::catalog
