#include "newton_flow/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "newton_flow/errors.hpp"

namespace newton_flow::catalog {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double pi = std::numbers::pi;

void require_order(int r, int n) {
    if (r < 1 || r > n) {
        throw DomainError("order r=" + std::to_string(r) + " outside [1, " + std::to_string(n) + "]");
    }
}

const Point& require_position(const ModelPoint& point, int n) {
    const auto* x = std::get_if<Point>(&point);
    if (x == nullptr) {
        throw DomainError("exact catalog models are queried by position, not grid node");
    }
    if (x->size() != n + 1) {
        throw DomainError("point has dimension " + std::to_string(x->size()) + ", expected " +
                          std::to_string(n + 1));
    }
    return *x;
}

void require_on(double defect, std::string_view what) {
    if (!(std::abs(defect) <= on_model_tolerance)) {
        throw DomainError("point is off the " + std::string(what) + " by " + std::to_string(defect));
    }
}

CurvatureVector cylinder_curvatures(int n, int m, double radius) {
    std::vector<double> k(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
        k[static_cast<std::size_t>(i)] = 1.0 / radius;
    }
    return CurvatureVector(std::move(k));
}

// Geometry of the grid node a point refers to on a discretized model.
NodeGeometry locate_node(const HypersurfaceModel& model, const ModelPoint& point) {
    const auto* node = std::get_if<GridNode>(&point);
    if (node == nullptr) {
        throw DomainError("discretized models are queried by grid node");
    }
    std::size_t resolution = node->resolution;
    if (std::holds_alternative<Revolution>(model)) {
        resolution = std::get<Revolution>(model).profile.size();
    } else if (resolution < 5) {
        throw DomainError("grid node query needs a resolution of at least 5");
    }
    if (node->index >= resolution) {
        throw DomainError("grid node " + std::to_string(node->index) + " out of range");
    }
    const ProfileGeometry geometry(rotational_profile(model, resolution), rotational_orientation(model));
    return geometry.at(static_cast<std::ptrdiff_t>(node->index));
}

// Points of S^k(R) in R^{k+1}. k = 1: a circle of `res` points; k >= 2: a
// res x res polar/azimuth grid on the great 2-sphere of the last three
// coordinates (the sphere is homogeneous, so this loses no supremum).
std::vector<Point> sphere_directions(int k, std::size_t res) {
    std::vector<Point> out;
    const auto dim = static_cast<Eigen::Index>(k + 1);
    if (k == 1) {
        for (std::size_t j = 0; j < res; ++j) {
            const double t = 2.0 * pi * static_cast<double>(j) / static_cast<double>(res);
            Point p = Point::Zero(dim);
            p(0) = std::cos(t);
            p(1) = std::sin(t);
            out.push_back(std::move(p));
        }
        return out;
    }
    for (std::size_t i = 0; i < res; ++i) {
        const double polar = pi * (static_cast<double>(i) + 0.5) / static_cast<double>(res);
        for (std::size_t j = 0; j < res; ++j) {
            const double az = 2.0 * pi * static_cast<double>(j) / static_cast<double>(res);
            Point p = Point::Zero(dim);
            p(dim - 3) = std::sin(polar) * std::cos(az);
            p(dim - 2) = std::sin(polar) * std::sin(az);
            p(dim - 1) = std::cos(polar);
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<PointSample> profile_samples(const ProfileCurve& profile, int orientation) {
    const ProfileGeometry geometry(profile, orientation);
    std::vector<PointSample> out;
    out.reserve(geometry.size());
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        const NodeGeometry& g = geometry.at(static_cast<std::ptrdiff_t>(i));
        Point x(3);
        x << g.rho, 0.0, g.height;
        out.push_back({std::move(x), CurvatureVector({g.k_meridian, g.k_parallel}), g.support});
    }
    return out;
}

}  // namespace

int dimension(const HypersurfaceModel& model) {
    return std::visit(Overloaded{
                          [](const Hyperplane& m) { return m.n; },
                          [](const Sphere& m) { return m.n; },
                          [](const Cylinder& m) { return m.n; },
                          [](const Revolution&) { return 2; },
                          [](const EllipsoidRev&) { return 2; },
                      },
                      model);
}

std::string_view model_name(const HypersurfaceModel& model) {
    return std::visit(Overloaded{
                          [](const Hyperplane&) { return std::string_view("hyperplane"); },
                          [](const Sphere&) { return std::string_view("sphere"); },
                          [](const Cylinder&) { return std::string_view("cylinder"); },
                          [](const Revolution&) { return std::string_view("revolution"); },
                          [](const EllipsoidRev&) { return std::string_view("ellipsoid_rev"); },
                      },
                      model);
}

void validate(const HypersurfaceModel& model) {
    std::visit(Overloaded{
                   [](const Hyperplane& m) {
                       if (m.n < 1) {
                           throw DomainError("hyperplane dimension must be >= 1");
                       }
                   },
                   [](const Sphere& m) {
                       if (m.n < 1) {
                           throw DomainError("sphere dimension must be >= 1");
                       }
                       if (!(m.radius > 0.0) || !std::isfinite(m.radius)) {
                           throw DomainError("sphere radius must be positive");
                       }
                   },
                   [](const Cylinder& m) {
                       if (m.n < 2 || m.m < 1 || m.m > m.n - 1) {
                           throw DomainError("cylinder needs 1 <= m <= n-1");
                       }
                       if (!(m.radius > 0.0) || !std::isfinite(m.radius)) {
                           throw DomainError("cylinder radius must be positive");
                       }
                   },
                   [](const Revolution& m) {
                       if (m.orientation != 1 && m.orientation != -1) {
                           throw DomainError("orientation must be +1 or -1");
                       }
                   },
                   [](const EllipsoidRev& m) {
                       if (!(m.a > 0.0) || !(m.b > 0.0)) {
                           throw DomainError("ellipsoid semi-axes must be positive");
                       }
                   },
               },
               model);
}

double shrinker_radius(int m, int r) {
    if (r < 1 || r > m) {
        throw DomainError("no self-shrinking S^" + std::to_string(m) + " factor for r=" +
                          std::to_string(r) + " (needs 1 <= r <= m)");
    }
    return std::pow(symfun::binomial(m, r), 1.0 / static_cast<double>(r + 1));
}

CurvatureVector principal_curvatures(const HypersurfaceModel& model, const ModelPoint& point) {
    validate(model);
    return std::visit(
        Overloaded{
            [&](const Hyperplane& m) {
                const Point& x = require_position(point, m.n);
                require_on(x(m.n), "hyperplane");
                return CurvatureVector::uniform(static_cast<std::size_t>(m.n), 0.0);
            },
            [&](const Sphere& m) {
                const Point& x = require_position(point, m.n);
                require_on(x.norm() - m.radius, "sphere");
                return CurvatureVector::uniform(static_cast<std::size_t>(m.n), 1.0 / m.radius);
            },
            [&](const Cylinder& m) {
                const Point& x = require_position(point, m.n);
                require_on(x.head(m.m + 1).norm() - m.radius, "cylinder");
                return cylinder_curvatures(m.n, m.m, m.radius);
            },
            [&](const auto&) {
                const NodeGeometry g = locate_node(model, point);
                return CurvatureVector({g.k_meridian, g.k_parallel});
            },
        },
        model);
}

double support_function(const HypersurfaceModel& model, const ModelPoint& point) {
    validate(model);
    return std::visit(Overloaded{
                          [&](const Hyperplane& m) {
                              const Point& x = require_position(point, m.n);
                              require_on(x(m.n), "hyperplane");
                              return x(m.n);
                          },
                          [&](const Sphere& m) {
                              const Point& x = require_position(point, m.n);
                              require_on(x.norm() - m.radius, "sphere");
                              return -m.radius;
                          },
                          [&](const Cylinder& m) {
                              const Point& x = require_position(point, m.n);
                              require_on(x.head(m.m + 1).norm() - m.radius, "cylinder");
                              return -m.radius;
                          },
                          [&](const auto&) { return locate_node(model, point).support; },
                      },
                      model);
}

double shrinker_residual(const HypersurfaceModel& model, int r, const ModelPoint& point) {
    require_order(r, dimension(model));
    return symfun::elem_sym(principal_curvatures(model, point), r) + support_function(model, point);
}

double sigma_p_cylinder(int m, int r, int p) {
    if (p < 0) {
        throw DomainError("negative order p");
    }
    if (r < 1 || r > m) {
        throw DomainError("sigma_p_cylinder needs 1 <= r <= m");
    }
    const double base = symfun::binomial(m, r);
    return symfun::binomial(m, p) * std::pow(base, -static_cast<double>(p) / static_cast<double>(r + 1));
}

std::vector<PointSample> sample_points(const HypersurfaceModel& model, std::size_t resolution,
                                       const SamplingOptions& options) {
    validate(model);
    if (resolution < 8) {
        throw DomainError("sampling resolution must be at least 8");
    }
    return std::visit(
        Overloaded{
            [&](const Hyperplane& m) {
                std::vector<PointSample> out;
                const auto dim = static_cast<Eigen::Index>(m.n + 1);
                const auto curv = CurvatureVector::uniform(static_cast<std::size_t>(m.n), 0.0);
                const std::size_t rows = m.n >= 2 ? resolution : 1;
                for (std::size_t i = 0; i < resolution; ++i) {
                    for (std::size_t j = 0; j < rows; ++j) {
                        Point x = Point::Zero(dim);
                        x(0) = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(resolution - 1);
                        if (m.n >= 2) {
                            x(1) = -1.0 + 2.0 * static_cast<double>(j) /
                                              static_cast<double>(resolution - 1);
                        }
                        out.push_back({std::move(x), curv, 0.0});
                    }
                }
                return out;
            },
            [&](const Sphere& m) {
                std::vector<PointSample> out;
                const auto curv = CurvatureVector::uniform(static_cast<std::size_t>(m.n), 1.0 / m.radius);
                for (Point& w : sphere_directions(m.n, resolution)) {
                    out.push_back({m.radius * w, curv, -m.radius});
                }
                return out;
            },
            [&](const Cylinder& m) {
                std::vector<PointSample> out;
                const auto curv = cylinder_curvatures(m.n, m.m, m.radius);
                const double extent = options.axial_extent_factor * m.radius;
                const int flat = m.n - m.m;
                const double diag = 1.0 / std::sqrt(static_cast<double>(flat));
                for (const Point& w : sphere_directions(m.m, resolution)) {
                    for (std::size_t a = 0; a < resolution; ++a) {
                        const double t = -extent + 2.0 * extent * static_cast<double>(a) /
                                                       static_cast<double>(resolution - 1);
                        Point x(m.n + 1);
                        x.head(m.m + 1) = m.radius * w;
                        x.tail(flat).setConstant(t * diag);
                        out.push_back({std::move(x), curv, -m.radius});
                    }
                }
                return out;
            },
            [&](const Revolution& m) { return profile_samples(m.profile, m.orientation); },
            [&](const EllipsoidRev& m) {
                return profile_samples(
                    ellipsoid_band_profile(m.a, m.b, ellipsoid_band_fraction, resolution), 1);
            },
        },
        model);
}

ProfileCurve rotational_profile(const HypersurfaceModel& model, std::size_t nodes) {
    validate(model);
    if (dimension(model) != 2) {
        throw DomainError("rotational discretization needs a surface (n = 2), got n=" +
                          std::to_string(dimension(model)));
    }
    return std::visit(Overloaded{
                          [&](const Hyperplane&) { return flat_annulus_profile(0.5, 1.5, nodes); },
                          [&](const Sphere& m) { return closed_sphere_profile(m.radius, nodes); },
                          [&](const Cylinder& m) {
                              return constant_profile(m.radius, -2.0 * m.radius, 2.0 * m.radius,
                                                      nodes, Boundary::Neumann);
                          },
                          [&](const Revolution& m) { return m.profile; },
                          [&](const EllipsoidRev& m) {
                              return ellipsoid_band_profile(m.a, m.b, ellipsoid_band_fraction, nodes);
                          },
                      },
                      model);
}

int rotational_orientation(const HypersurfaceModel& model) {
    if (const auto* rev = std::get_if<Revolution>(&model)) {
        return rev->orientation;
    }
    return 1;
}

bool is_catalog_shrinker(const HypersurfaceModel& model, int r, double radius_tolerance) {
    const int n = dimension(model);
    if (r < 1 || r > n) {
        return false;
    }
    return std::visit(Overloaded{
                          [](const Hyperplane&) { return true; },
                          [&](const Sphere& m) {
                              return std::abs(m.radius - shrinker_radius(m.n, r)) <=
                                     radius_tolerance * std::max(1.0, m.radius);
                          },
                          [&](const Cylinder& m) {
                              return r <= m.m && std::abs(m.radius - shrinker_radius(m.m, r)) <=
                                                     radius_tolerance * std::max(1.0, m.radius);
                          },
                          [](const auto&) { return false; },
                      },
                      model);
}

}  // namespace newton_flow::catalog
