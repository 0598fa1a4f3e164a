#include "newton_flow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "newton_flow/errors.hpp"
#include "newton_flow/symfun.hpp"

namespace newton_flow::operators {

namespace {

using catalog::Boundary;

double sigma_of(const NodeGeometry& g, int p) {
    switch (p) {
        case 0: return 1.0;
        case 1: return g.k_meridian + g.k_parallel;
        case 2: return g.k_meridian * g.k_parallel;
        default: return 0.0;
    }
}

// Meridional eigenvalue of P_{r-1}: sigma_{r-1} of the remaining curvature.
double meridional_weight(const NodeGeometry& g, int r) {
    return r == 1 ? 1.0 : g.k_parallel;
}

void require_order(int r) {
    if (r < 1 || r > 2) {
        throw DomainError("order r=" + std::to_string(r) + " outside [1, 2] for a surface");
    }
}

void require_same_surface(const ScalarField& f, const ScalarField& g) {
    if (f.surface() != g.surface()) {
        throw DomainError("fields live on different surfaces");
    }
}

double derivative(const ScalarField& f, std::ptrdiff_t i, double h) {
    return (f.at(i + 1) - f.at(i - 1)) / (2.0 * h);
}

}  // namespace

DiscreteSurface::DiscreteSurface(ProfileCurve profile, int orientation)
    : profile_(std::move(profile)), geometry_(profile_, orientation) {}

SurfaceHandle DiscreteSurface::make(ProfileCurve profile, int orientation) {
    return std::make_shared<const DiscreteSurface>(std::move(profile), orientation);
}

SurfaceHandle DiscreteSurface::from_model(const catalog::HypersurfaceModel& model, std::size_t nodes) {
    return make(catalog::rotational_profile(model, nodes), catalog::rotational_orientation(model));
}

ScalarField::ScalarField(SurfaceHandle surface, std::vector<double> values) : surface_(std::move(surface)) {
    if (!surface_) {
        throw DomainError("field needs a surface");
    }
    if (values.size() != surface_->size()) {
        throw DomainError("field has " + std::to_string(values.size()) + " values for " +
                          std::to_string(surface_->size()) + " nodes");
    }
    ghosted_ = catalog::extend_field(values, surface_->geometry().boundary(), 1);
}

ScalarField::ScalarField(SurfaceHandle surface, std::vector<double> ghosted, bool)
    : surface_(std::move(surface)), ghosted_(std::move(ghosted)) {}

ScalarField ScalarField::from_geometry(SurfaceHandle surface,
                                       const std::function<double(const NodeGeometry&)>& fn) {
    if (!surface) {
        throw DomainError("field needs a surface");
    }
    const auto& geo = surface->geometry();
    const auto m = static_cast<std::ptrdiff_t>(geo.size());
    std::vector<double> ghosted(geo.size() + 2);
    for (std::ptrdiff_t i = -1; i <= m; ++i) {
        ghosted[static_cast<std::size_t>(i + 1)] = fn(geo.at(i));
    }
    return ScalarField(std::move(surface), std::move(ghosted), true);
}

ScalarField operator*(const ScalarField& f, const ScalarField& g) {
    require_same_surface(f, g);
    std::vector<double> out(f.ghosted_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f.ghosted_[i] * g.ghosted_[i];
    }
    return ScalarField(f.surface_, std::move(out), true);
}

ScalarField position_norm_sq(const SurfaceHandle& surface) {
    return ScalarField::from_geometry(surface, [](const NodeGeometry& g) {
        return g.rho * g.rho + g.height * g.height;
    });
}

ScalarField support_field(const SurfaceHandle& surface) {
    return ScalarField::from_geometry(surface, [](const NodeGeometry& g) { return g.support; });
}

ScalarField height_field(const SurfaceHandle& surface) {
    return ScalarField::from_geometry(surface, [](const NodeGeometry& g) { return g.height; });
}

ScalarField sigma_field(const SurfaceHandle& surface, int p) {
    if (p < 0) {
        throw DomainError("negative order p");
    }
    return ScalarField::from_geometry(surface, [p](const NodeGeometry& g) { return sigma_of(g, p); });
}

std::vector<double> surface_gradient(const ScalarField& field) {
    const auto& geo = field.surface()->geometry();
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto j = static_cast<std::ptrdiff_t>(i);
        out[i] = derivative(field, j, geo.spacing()) / geo.at(j).speed;
    }
    return out;
}

std::vector<double> position_gradient_pairing(const ScalarField& field) {
    const auto& geo = field.surface()->geometry();
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto j = static_cast<std::ptrdiff_t>(i);
        const NodeGeometry& g = geo.at(j);
        out[i] = derivative(field, j, geo.spacing()) * (g.rho * g.d_rho + g.height * g.d_height) /
                 (g.speed * g.speed);
    }
    return out;
}

std::vector<double> newton_pairing(const ScalarField& f, const ScalarField& g, int r) {
    require_order(r);
    require_same_surface(f, g);
    const auto& geo = f.surface()->geometry();
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto j = static_cast<std::ptrdiff_t>(i);
        const NodeGeometry& n = geo.at(j);
        out[i] = meridional_weight(n, r) * derivative(f, j, geo.spacing()) *
                 derivative(g, j, geo.spacing()) / (n.speed * n.speed);
    }
    return out;
}

OperatorResult lr_apply(const ScalarField& field, int r) {
    require_order(r);
    const auto& geo = field.surface()->geometry();
    const double h = geo.spacing();
    const auto m = static_cast<std::ptrdiff_t>(geo.size());
    std::vector<double> coeff(geo.size() + 2);
    for (std::ptrdiff_t i = -1; i <= m; ++i) {
        const NodeGeometry& g = geo.at(i);
        coeff[static_cast<std::size_t>(i + 1)] = g.rho * meridional_weight(g, r) / g.speed;
    }
    auto c = [&](std::ptrdiff_t i) { return coeff[static_cast<std::size_t>(i + 1)]; };
    std::vector<double> out(geo.size());
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double right = 0.5 * (c(i) + c(i + 1)) * (field.at(i + 1) - field.at(i)) / h;
        const double left = 0.5 * (c(i - 1) + c(i)) * (field.at(i) - field.at(i - 1)) / h;
        const NodeGeometry& g = geo.at(i);
        out[static_cast<std::size_t>(i)] = (right - left) / (h * g.rho * g.speed);
    }
    return {ScalarField(field.surface(), std::move(out)), 2};
}

OperatorResult drifted_apply(const ScalarField& field, int r) {
    OperatorResult l = lr_apply(field, r);
    const auto drift = position_gradient_pairing(field);
    std::vector<double> out(l.values.values().begin(), l.values.values().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] -= drift[i];
    }
    return {ScalarField(field.surface(), std::move(out)), 2};
}

double interior_max_abs(std::span<const double> values) {
    if (values.size() <= 2 * trimmed_nodes) {
        throw DomainError("too few nodes for an interior residual");
    }
    double worst = 0.0;
    for (std::size_t i = trimmed_nodes; i + trimmed_nodes < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            return std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, std::abs(values[i]));
    }
    return worst;
}

double ConvergenceReport::finest_residual() const {
    return entries.empty() ? std::numeric_limits<double>::quiet_NaN() : entries.back().residual;
}

ConvergenceReport convergence_study(std::string identity, int r, std::span<const std::size_t> resolutions,
                                    const std::function<ConvergenceEntry(std::size_t)>& residual_at) {
    if (resolutions.empty()) {
        throw DomainError("convergence study needs at least one resolution");
    }
    ConvergenceReport report;
    report.identity = std::move(identity);
    report.r = r;
    for (std::size_t m : resolutions) {
        report.entries.push_back(residual_at(m));
    }
    bool orders_ok = true;
    bool measured = false;
    for (std::size_t i = 0; i + 1 < report.entries.size(); ++i) {
        const auto& a = report.entries[i];
        const auto& b = report.entries[i + 1];
        if (a.residual <= ConvergenceReport::exact_floor && b.residual <= ConvergenceReport::exact_floor) {
            report.observed_orders.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double order = std::log(a.residual / b.residual) / std::log(a.spacing / b.spacing);
        report.observed_orders.push_back(order);
        measured = true;
        if (!(order >= ConvergenceReport::order_min && order <= ConvergenceReport::order_max)) {
            orders_ok = false;
        }
    }
    const double finest = report.finest_residual();
    report.passed = finest <= ConvergenceReport::exact_floor || (measured && orders_ok);
    return report;
}

std::vector<double> support_identity_residual(const SurfaceHandle& surface, int r) {
    require_order(r);
    const ScalarField support = support_field(surface);
    const ScalarField sigma_r = sigma_field(surface, r);
    const auto lhs = lr_apply(support, r);
    const auto drift = position_gradient_pairing(sigma_r);
    const auto& geo = surface->geometry();
    std::vector<double> out(surface->size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const NodeGeometry& g = geo.at(static_cast<std::ptrdiff_t>(i));
        const double s1 = sigma_of(g, 1);
        const double sr = sigma_of(g, r);
        const double sr1 = sigma_of(g, r + 1);
        const double rhs = -r * sr - (s1 * sr - (r + 1) * sr1) * g.support - drift[i];
        out[i] = lhs.values[i] - rhs;
    }
    return out;
}

std::vector<double> position_identity_residual(const SurfaceHandle& surface, int r) {
    require_order(r);
    const auto lhs = lr_apply(position_norm_sq(surface), r);
    const auto& geo = surface->geometry();
    const int n = 2;
    std::vector<double> out(surface->size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const NodeGeometry& g = geo.at(static_cast<std::ptrdiff_t>(i));
        const double rhs = (n - r + 1) * sigma_of(g, r - 1) + r * sigma_of(g, r) * g.support;
        out[i] = 0.5 * lhs.values[i] - rhs;
    }
    return out;
}

namespace {

ConvergenceReport identity_study(const catalog::HypersurfaceModel& model, int r,
                                 std::span<const std::size_t> resolutions, std::string name,
                                 std::vector<double> (*residual)(const SurfaceHandle&, int)) {
    require_order(r);
    if (catalog::dimension(model) != 2) {
        throw DomainError("identity checks discretize surfaces (n = 2)");
    }
    return convergence_study(std::move(name), r, resolutions, [&](std::size_t m) {
        const auto surface = DiscreteSurface::from_model(model, m);
        return ConvergenceEntry{surface->size(), surface->geometry().spacing(),
                                interior_max_abs(residual(surface, r))};
    });
}

}  // namespace

ConvergenceReport verify_support_identity(const catalog::HypersurfaceModel& model, int r,
                                          std::span<const std::size_t> resolutions) {
    return identity_study(model, r, resolutions, "support", &support_identity_residual);
}

ConvergenceReport verify_position_identity(const catalog::HypersurfaceModel& model, int r,
                                           std::span<const std::size_t> resolutions) {
    return identity_study(model, r, resolutions, "position", &position_identity_residual);
}

double verify_product_rule(const ScalarField& f, const ScalarField& g, int r) {
    require_same_surface(f, g);
    const auto lfg = lr_apply(f * g, r);
    const auto lf = lr_apply(f, r);
    const auto lg = lr_apply(g, r);
    const auto cross = newton_pairing(f, g, r);
    std::vector<double> res(f.size());
    for (std::size_t i = 0; i < res.size(); ++i) {
        res[i] = lfg.values[i] - f[i] * lg.values[i] - g[i] * lf.values[i] - 2.0 * cross[i];
    }
    return interior_max_abs(res);
}

ShrinkerPdeResidual verify_shrinker_pde(const catalog::HypersurfaceModel& model, int r,
                                        const ShrinkerPdeOptions& options) {
    catalog::validate(model);
    const int n = catalog::dimension(model);
    if (r < 1 || r > n) {
        throw DomainError("order r=" + std::to_string(r) + " outside [1, " + std::to_string(n) + "]");
    }
    ShrinkerPdeResidual out;
    const bool discrete = std::holds_alternative<catalog::Revolution>(model) ||
                          std::holds_alternative<catalog::EllipsoidRev>(model);
    if (!discrete) {
        for (const auto& s : catalog::sample_points(model, 8)) {
            const double sr = symfun::elem_sym(s.curvatures, r);
            out.shrinker = std::max(out.shrinker, std::abs(sr + s.support));
            if (out.shrinker > options.shrinker_tolerance) {
                throw NotShrinkerError("model is not a self-shrinker for r=" + std::to_string(r),
                                       out.shrinker);
            }
            const double norm = symfun::modified_sff_norm_sq(symfun::ShapeOperator::diagonal(s.curvatures), r);
            out.main = std::max(out.main, std::abs((norm - r) * sr));
            out.squared = std::max(out.squared, std::abs(sr * sr * (r - norm)));
        }
        return out;
    }

    require_order(r);
    const auto surface = DiscreteSurface::from_model(model, options.resolution);
    const auto& geo = surface->geometry();
    const ScalarField sigma = sigma_field(surface, r);
    std::vector<double> shrink(surface->size());
    for (std::size_t i = 0; i < shrink.size(); ++i) {
        shrink[i] = sigma[i] + geo.at(static_cast<std::ptrdiff_t>(i)).support;
    }
    out.shrinker = interior_max_abs(shrink);
    if (!(out.shrinker <= options.shrinker_tolerance)) {
        throw NotShrinkerError("model is not a self-shrinker for r=" + std::to_string(r), out.shrinker);
    }
    const auto drifted = drifted_apply(sigma, r);
    const auto drifted_sq = drifted_apply(sigma * sigma, r);
    const auto grad_sq = newton_pairing(sigma, sigma, r);
    std::vector<double> main(surface->size());
    std::vector<double> squared(surface->size());
    for (std::size_t i = 0; i < main.size(); ++i) {
        const NodeGeometry& g = geo.at(static_cast<std::ptrdiff_t>(i));
        const double norm = sigma_of(g, 1) * sigma_of(g, r) - (r + 1) * sigma_of(g, r + 1);
        main[i] = drifted.values[i] + (norm - r) * sigma[i];
        squared[i] = 0.5 * drifted_sq.values[i] - sigma[i] * sigma[i] * (r - norm) - grad_sq[i];
    }
    out.main = interior_max_abs(main);
    out.squared = interior_max_abs(squared);
    return out;
}

}  // namespace newton_flow::operators
