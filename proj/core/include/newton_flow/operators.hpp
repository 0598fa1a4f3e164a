#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "newton_flow/catalog.hpp"
#include "newton_flow/profile.hpp"

namespace newton_flow::operators {

using catalog::NodeGeometry;
using catalog::ProfileCurve;
using catalog::ProfileGeometry;

/// A discretized surface of revolution shared by the fields living on it.
class DiscreteSurface {
public:
    DiscreteSurface(ProfileCurve profile, int orientation);

    [[nodiscard]] static std::shared_ptr<const DiscreteSurface> make(ProfileCurve profile,
                                                                     int orientation = 1);
    /// rotational_profile(model, nodes) with the model's orientation.
    [[nodiscard]] static std::shared_ptr<const DiscreteSurface> from_model(
        const catalog::HypersurfaceModel& model, std::size_t nodes);

    [[nodiscard]] const ProfileCurve& profile() const noexcept { return profile_; }
    [[nodiscard]] const ProfileGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::size_t size() const noexcept { return geometry_.size(); }

private:
    ProfileCurve profile_;
    ProfileGeometry geometry_;
};

using SurfaceHandle = std::shared_ptr<const DiscreteSurface>;

/// Rotationally invariant function sampled at the profile nodes, plus one
/// ghost value per side for the stencils.
class ScalarField {
public:
    /// Node values only; ghosts follow the boundary rule with even parity.
    ScalarField(SurfaceHandle surface, std::vector<double> values);

    /// Field whose value at node i is fn(node geometry of i), ghosts included.
    [[nodiscard]] static ScalarField from_geometry(SurfaceHandle surface,
                                                   const std::function<double(const NodeGeometry&)>& fn);

    [[nodiscard]] const SurfaceHandle& surface() const noexcept { return surface_; }
    [[nodiscard]] std::span<const double> values() const noexcept {
        return std::span<const double>(ghosted_).subspan(1, ghosted_.size() - 2);
    }
    [[nodiscard]] std::size_t size() const noexcept { return ghosted_.size() - 2; }
    [[nodiscard]] double operator[](std::size_t i) const { return ghosted_[i + 1]; }
    /// i = -1 and i = size() address the ghosts.
    [[nodiscard]] double at(std::ptrdiff_t i) const { return ghosted_[static_cast<std::size_t>(i + 1)]; }

    friend ScalarField operator*(const ScalarField& f, const ScalarField& g);

private:
    ScalarField(SurfaceHandle surface, std::vector<double> ghosted, bool);

    SurfaceHandle surface_;
    std::vector<double> ghosted_;
};

// Common fields.
[[nodiscard]] ScalarField position_norm_sq(const SurfaceHandle& surface);  // |X|^2
[[nodiscard]] ScalarField support_field(const SurfaceHandle& surface);     // <X, N>
[[nodiscard]] ScalarField height_field(const SurfaceHandle& surface);      // z
/// sigma_p of the node curvatures (sigma_0 = 1, sigma_p = 0 for p > 2).
[[nodiscard]] ScalarField sigma_field(const SurfaceHandle& surface, int p);

struct OperatorResult {
    ScalarField values;
    int truncation_order = 2;
};

/// Component of grad f along the unit meridian X_u / |X_u|, i.e. f_u / |X_u|.
[[nodiscard]] std::vector<double> surface_gradient(const ScalarField& field);

/// L_{r-1} f = div(P_{r-1} grad f) in flux form
///   (1 / (rho |X_u|)) d_u( rho lambda_mer f_u / |X_u| ),
/// lambda_mer = sigma_{r-1}(k_parallel) being the meridional eigenvalue of P_{r-1}.
/// Requires 1 <= r <= 2.
[[nodiscard]] OperatorResult lr_apply(const ScalarField& field, int r);

/// L_{r-1} f - <X, grad f>.
[[nodiscard]] OperatorResult drifted_apply(const ScalarField& field, int r);

/// <X, grad f> at every node.
[[nodiscard]] std::vector<double> position_gradient_pairing(const ScalarField& field);

/// <P_{r-1} grad f, grad g> at every node.
[[nodiscard]] std::vector<double> newton_pairing(const ScalarField& f, const ScalarField& g, int r);

/// Nodes excluded from residual maxima at each end of the grid.
inline constexpr std::size_t trimmed_nodes = 2;

/// Max |values[i]| over the interior nodes.
[[nodiscard]] double interior_max_abs(std::span<const double> values);

struct ConvergenceEntry {
    std::size_t resolution = 0;
    double spacing = 0.0;
    double residual = 0.0;
};

struct ConvergenceReport {
    std::string identity;
    int r = 1;
    std::vector<ConvergenceEntry> entries;
    /// log(res_i / res_{i+1}) / log(h_i / h_{i+1}); NaN where both residuals
    /// are below the exactness floor.
    std::vector<double> observed_orders;
    bool passed = false;

    static constexpr double order_min = 1.5;
    static constexpr double order_max = 2.5;
    /// Residuals at or below this are round-off: the identity holds exactly
    /// in the discrete scheme and no order is measured.
    static constexpr double exact_floor = 1e-8;

    [[nodiscard]] double finest_residual() const;
};

/// Runs residual_at(M) for each resolution and fills in orders and pass flag.
/// A study passes when every measured order lies in [order_min, order_max],
/// or when the finest residual is below exact_floor.
[[nodiscard]] ConvergenceReport convergence_study(
    std::string identity, int r, std::span<const std::size_t> resolutions,
    const std::function<ConvergenceEntry(std::size_t)>& residual_at);

/// L_{r-1}<X,N> = -r sigma_r - (sigma_1 sigma_r - (r+1) sigma_{r+1}) <X,N> - <grad sigma_r, X>
/// on a single discretized surface; returns the nodewise residual.
[[nodiscard]] std::vector<double> support_identity_residual(const SurfaceHandle& surface, int r);

/// (1/2) L_{r-1} |X|^2 = (n-r+1) sigma_{r-1} + r sigma_r <X,N>, nodewise residual.
[[nodiscard]] std::vector<double> position_identity_residual(const SurfaceHandle& surface, int r);

/// Both identities hold on any hypersurface; the model is discretized with
/// rotational_profile at each resolution.
[[nodiscard]] ConvergenceReport verify_support_identity(const catalog::HypersurfaceModel& model, int r,
                                                        std::span<const std::size_t> resolutions);
[[nodiscard]] ConvergenceReport verify_position_identity(const catalog::HypersurfaceModel& model, int r,
                                                         std::span<const std::size_t> resolutions);

/// Max interior residual of L(fg) = f Lg + g Lf + 2 <P_{r-1} grad f, grad g>.
/// f and g must live on the same surface.
[[nodiscard]] double verify_product_rule(const ScalarField& f, const ScalarField& g, int r);

struct ShrinkerPdeOptions {
    std::size_t resolution = 64;
    /// Largest |sigma_r + <X,N>| accepted as a self-shrinker.
    double shrinker_tolerance = 1e-10;
};

struct ShrinkerPdeResidual {
    double shrinker = 0.0;   // sup |sigma_r + <X,N>|
    double main = 0.0;       // |calL sigma_r + (|sqrt(P)A|^2 - r) sigma_r|
    double squared = 0.0;    // |1/2 calL sigma_r^2 - sigma_r^2 (r - |sqrt(P)A|^2) - <P grad, grad>|
};

/// Exact catalog models (any n) have constant sigma_r, so the drift terms
/// vanish and the identities reduce to algebra at the sample points.
/// Discretized models (n = 2) are checked with the discrete operators.
/// Throws NotShrinkerError when the shrinker residual exceeds the tolerance.
[[nodiscard]] ShrinkerPdeResidual verify_shrinker_pde(const catalog::HypersurfaceModel& model, int r,
                                                      const ShrinkerPdeOptions& options = {});

}  // namespace newton_flow::operators
