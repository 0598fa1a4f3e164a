#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "newton_flow/catalog.hpp"
#include "newton_flow/profile.hpp"

namespace newton_flow::flow {

using catalog::HypersurfaceModel;
using catalog::ProfileCurve;

/// R(t) = (R0^{r+1} - (r+1) C(n,r) t)^{1/(r+1)} for the sphere S^n(R0) moving by
/// sigma_r along the inward normal. Throws ExtinctError (carrying T) for t >= T.
[[nodiscard]] double sphere_radius_exact(int n, int r, double r0, double t);

/// T = R0^{r+1} / ((r+1) C(n,r)).
[[nodiscard]] double extinction_time(int n, int r, double r0);

/// (1 - (r+1) t)^{1/(r+1)}, the scale factor of a self-shrinker; 0 from
/// t = 1/(r+1) on.
[[nodiscard]] double canonical_phi(int r, double t);

enum class Integrator { Euler, Rk2 };
enum class FlowStatus { Completed, Extinct };

[[nodiscard]] std::string_view to_string(Integrator integrator);
[[nodiscard]] std::string_view to_string(FlowStatus status);

// Plane curves (n = 1, r = 1).

/// Closed polygon, vertices as columns, counter-clockwise for the inward normal.
struct CurveState {
    Eigen::Matrix2Xd vertices;
    double t = 0.0;
    std::size_t steps = 0;
};

/// Discrete curvature (circumscribed circle through each vertex and its two
/// neighbours) and inward unit normal (tangent p_{i+1} - p_{i-1} turned by +90deg).
struct CurveGeometry {
    Eigen::VectorXd curvature;
    Eigen::Matrix2Xd normal;
    double min_edge = 0.0;
};

[[nodiscard]] CurveState regular_polygon(double radius, std::size_t vertices);
[[nodiscard]] CurveGeometry curve_geometry(const Eigen::Matrix2Xd& vertices);
/// cfl_safety * h_min^2 / 2.
[[nodiscard]] double curve_stable_dt(const Eigen::Matrix2Xd& vertices, double cfl_safety);
/// X <- X + dt kappa N. Throws CflError when dt exceeds curve_stable_dt and
/// NumericalError on a degenerate edge (< 1e-12 of the diameter).
[[nodiscard]] CurveState step_curve(const CurveState& state, double dt, double cfl_safety = 0.25,
                                    Integrator integrator = Integrator::Euler);

// Surfaces of revolution (n = 2, r in {1, 2}).

struct RevolutionState {
    ProfileCurve profile;
    int orientation = 1;
    double t = 0.0;
    std::size_t steps = 0;
};

/// cfl_safety * h^2 / (1 + max_nodes sum_j |sigma_{r-1}(A_j)|), h the smallest
/// arclength spacing.
[[nodiscard]] double revolution_stable_dt(const ProfileCurve& profile, int orientation, int r,
                                          double cfl_safety);
/// Radial graphs: f <- f - dt o sigma_r |X_z|. Parametric profiles move each
/// node by dt sigma_r N. Throws CflError past the stability bound and
/// ExtinctError when a radius reaches zero.
[[nodiscard]] RevolutionState step_revolution(const RevolutionState& state, int r, double dt,
                                              double cfl_safety = 0.25,
                                              Integrator integrator = Integrator::Euler);

// Driver.

struct FlowConfig {
    int r = 1;
    HypersurfaceModel model = catalog::Sphere{2, 1.0};
    double t_end = 0.1;
    double cfl_safety = 0.25;
    std::size_t resolution = 128;
    /// Evaluate the shrinker residual on X / phi(t) instead of X.
    bool rescaled = false;
    Integrator integrator = Integrator::Euler;
    std::size_t output_stride = 100;
};

struct Diagnostics {
    double t = 0.0;
    double max_shrinker_residual = 0.0;
    double homothety_defect = 0.0;  // sup |X(t) - phi(t) X_0|
    double min_radius = 0.0;
    double dt = 0.0;                // step that produced this state
};

struct FlowResult {
    std::vector<Diagnostics> diagnostics;
    FlowStatus status = FlowStatus::Completed;
    double final_time = 0.0;
    std::size_t steps = 0;
    /// Closed-form extinction time when the model has one.
    std::optional<double> analytic_extinction_time;
};

/// Stop when the minimum radius falls below this fraction of its initial value.
inline constexpr double extinction_ratio = 1e-3;

/// Adaptive explicit time loop to t_end or extinction. Spheres with n >= 2 and
/// cylinders evolve by their radius ODE, circles (n = 1) as polygons,
/// Revolution and EllipsoidRev (closed meridian) as profiles; hyperplanes are
/// stationary. Diagnostics are emitted at t = 0, every output_stride steps and
/// at the final time.
[[nodiscard]] FlowResult run(const FlowConfig& config);

}  // namespace newton_flow::flow
