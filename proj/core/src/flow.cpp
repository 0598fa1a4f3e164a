#include "newton_flow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "newton_flow/errors.hpp"
#include "newton_flow/operators.hpp"
#include "newton_flow/symfun.hpp"

namespace newton_flow::flow {

namespace {

using catalog::Boundary;
using catalog::NodeGeometry;
using catalog::ProfileGeometry;
using catalog::ProfileKind;
using symfun::CurvatureVector;

constexpr double cfl_slack = 1.0 + 1e-12;

double node_sigma(const NodeGeometry& g, int p) {
    switch (p) {
        case 0: return 1.0;
        case 1: return g.k_meridian + g.k_parallel;
        case 2: return g.k_meridian * g.k_parallel;
        default: return 0.0;
    }
}

// 1 + sum_j |sigma_{r-1}(A_j)|, the principal coefficient bound.
double principal_weight(const CurvatureVector& k, int r) {
    double sum = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        sum += std::abs(symfun::elem_sym_excluding(k, j, r - 1));
    }
    return sum;
}

void check_cfl(double dt, double bound, double t) {
    if (!(dt > 0.0)) {
        throw DomainError("time step must be positive");
    }
    if (dt > bound * cfl_slack) {
        throw CflError("time step " + std::to_string(dt) + " exceeds the stability bound " +
                           std::to_string(bound),
                       t);
    }
}

struct Snapshot {
    double residual = 0.0;
    double defect = 0.0;
    double min_radius = 0.0;
};

// One evolving geometry behind the common time loop.
class Evolver {
public:
    virtual ~Evolver() = default;
    [[nodiscard]] virtual double stable_dt() const = 0;
    virtual void advance(double dt, double t) = 0;
    [[nodiscard]] virtual Snapshot snapshot(double phi, bool rescaled) const = 0;
    [[nodiscard]] virtual double min_radius() const = 0;
    [[nodiscard]] virtual std::optional<double> analytic_extinction() const { return std::nullopt; }
    [[nodiscard]] virtual bool can_go_extinct() const { return true; }
};

class Stationary final : public Evolver {
public:
    explicit Stationary(double t_end) : t_end_(t_end) {}
    [[nodiscard]] double stable_dt() const override { return t_end_; }
    void advance(double, double) override {}
    [[nodiscard]] Snapshot snapshot(double, bool) const override { return {}; }
    [[nodiscard]] double min_radius() const override { return 0.0; }
    [[nodiscard]] bool can_go_extinct() const override { return false; }

private:
    double t_end_;
};

// Round factor S^m(R) (m = n for spheres) evolving by R' = -sigma_r.
class RadiusOde final : public Evolver {
public:
    RadiusOde(int n, int m, int r, double radius, const FlowConfig& config)
        : n_(n), m_(m), r_(r), r0_(radius), radius_(radius), config_(config) {}

    [[nodiscard]] double stable_dt() const override {
        const double h = radius_ * std::numbers::pi / static_cast<double>(config_.resolution);
        return config_.cfl_safety * h * h / principal_weight(curvatures(radius_), r_);
    }

    void advance(double dt, double t) override {
        check_cfl(dt, stable_dt(), t);
        const double k1 = speed(radius_);
        double next = radius_ - dt * k1;
        if (config_.integrator == Integrator::Rk2) {
            if (!(next > 0.0)) {
                throw ExtinctError("radius reached zero", t);
            }
            next = radius_ - 0.5 * dt * (k1 + speed(next));
        }
        if (!(next > 0.0)) {
            throw ExtinctError("radius reached zero", t);
        }
        radius_ = next;
    }

    [[nodiscard]] Snapshot snapshot(double phi, bool rescaled) const override {
        const double sigma = speed(radius_);
        Snapshot s;
        if (rescaled && phi > 0.0) {
            s.residual = std::abs(std::pow(phi, r_) * sigma - radius_ / phi);
        } else {
            s.residual = std::abs(sigma - radius_);
        }
        s.defect = std::abs(radius_ - phi * r0_);
        s.min_radius = radius_;
        return s;
    }

    [[nodiscard]] double min_radius() const override { return radius_; }

    [[nodiscard]] std::optional<double> analytic_extinction() const override {
        if (r_ > m_) {
            return std::nullopt;
        }
        return extinction_time(m_, r_, r0_);
    }

    [[nodiscard]] bool can_go_extinct() const override { return r_ <= m_; }

private:
    [[nodiscard]] CurvatureVector curvatures(double radius) const {
        std::vector<double> k(static_cast<std::size_t>(n_), 0.0);
        std::fill_n(k.begin(), m_, 1.0 / radius);
        return CurvatureVector(std::move(k));
    }
    [[nodiscard]] double speed(double radius) const { return symfun::elem_sym(curvatures(radius), r_); }

    int n_;
    int m_;
    int r_;
    double r0_;
    double radius_;
    const FlowConfig& config_;
};

class CurveEvolver final : public Evolver {
public:
    CurveEvolver(double radius, const FlowConfig& config)
        : state_(regular_polygon(radius, config.resolution)),
          initial_(state_.vertices),
          r0_(radius),
          config_(config) {}

    [[nodiscard]] double stable_dt() const override {
        return curve_stable_dt(state_.vertices, config_.cfl_safety);
    }

    void advance(double dt, double t) override {
        state_.t = t;
        state_ = step_curve(state_, dt, config_.cfl_safety, config_.integrator);
    }

    [[nodiscard]] Snapshot snapshot(double phi, bool rescaled) const override {
        const CurveGeometry g = curve_geometry(state_.vertices);
        Snapshot s;
        s.min_radius = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < state_.vertices.cols(); ++i) {
            const Eigen::Vector2d x = state_.vertices.col(i);
            const double support = x.dot(g.normal.col(i));
            const double res = rescaled && phi > 0.0 ? phi * g.curvature(i) + support / phi
                                                     : g.curvature(i) + support;
            s.residual = std::max(s.residual, std::abs(res));
            s.defect = std::max(s.defect, (x - phi * initial_.col(i)).norm());
            s.min_radius = std::min(s.min_radius, x.norm());
        }
        return s;
    }

    [[nodiscard]] double min_radius() const override {
        return state_.vertices.colwise().norm().minCoeff();
    }

    [[nodiscard]] std::optional<double> analytic_extinction() const override {
        return extinction_time(1, 1, r0_);
    }

private:
    CurveState state_;
    Eigen::Matrix2Xd initial_;
    double r0_;
    const FlowConfig& config_;
};

class ProfileEvolver final : public Evolver {
public:
    ProfileEvolver(ProfileCurve profile, int orientation, const FlowConfig& config)
        : state_{std::move(profile), orientation, 0.0, 0},
          rho0_(state_.profile.rho().begin(), state_.profile.rho().end()),
          z0_(state_.profile.height().begin(), state_.profile.height().end()),
          config_(config) {}

    [[nodiscard]] double stable_dt() const override {
        return revolution_stable_dt(state_.profile, state_.orientation, config_.r, config_.cfl_safety);
    }

    void advance(double dt, double t) override {
        state_.t = t;
        state_ = step_revolution(state_, config_.r, dt, config_.cfl_safety, config_.integrator);
    }

    [[nodiscard]] Snapshot snapshot(double phi, bool rescaled) const override {
        const ProfileGeometry geo(state_.profile, state_.orientation);
        const int r = config_.r;
        std::vector<double> residual(geo.size());
        Snapshot s;
        s.min_radius = std::numeric_limits<double>::infinity();
        const bool radial = state_.profile.kind() == ProfileKind::RadialGraph;
        for (std::size_t i = 0; i < geo.size(); ++i) {
            const NodeGeometry& g = geo.at(static_cast<std::ptrdiff_t>(i));
            const double sigma = node_sigma(g, r);
            residual[i] = rescaled && phi > 0.0 ? std::pow(phi, r) * sigma + g.support / phi
                                                : sigma + g.support;
            s.defect = std::max(s.defect, std::hypot(g.rho - phi * rho0_[i], g.height - phi * z0_[i]));
            s.min_radius = std::min(s.min_radius, radial ? g.rho : std::hypot(g.rho, g.height));
        }
        s.residual = operators::interior_max_abs(residual);
        return s;
    }

    [[nodiscard]] double min_radius() const override {
        const auto rho = state_.profile.rho();
        const auto z = state_.profile.height();
        const bool radial = state_.profile.kind() == ProfileKind::RadialGraph;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rho.size(); ++i) {
            best = std::min(best, radial ? rho[i] : std::hypot(rho[i], z[i]));
        }
        return best;
    }

private:
    RevolutionState state_;
    std::vector<double> rho0_;
    std::vector<double> z0_;
    const FlowConfig& config_;
};

std::unique_ptr<Evolver> make_evolver(const FlowConfig& config) {
    using namespace catalog;
    const auto& model = config.model;
    if (const auto* s = std::get_if<Sphere>(&model)) {
        if (s->n == 1) {
            return std::make_unique<CurveEvolver>(s->radius, config);
        }
        return std::make_unique<RadiusOde>(s->n, s->n, config.r, s->radius, config);
    }
    if (const auto* c = std::get_if<Cylinder>(&model)) {
        return std::make_unique<RadiusOde>(c->n, c->m, config.r, c->radius, config);
    }
    if (const auto* rev = std::get_if<Revolution>(&model)) {
        return std::make_unique<ProfileEvolver>(rev->profile, rev->orientation, config);
    }
    if (const auto* e = std::get_if<EllipsoidRev>(&model)) {
        return std::make_unique<ProfileEvolver>(closed_ellipsoid_profile(e->a, e->b, config.resolution), 1,
                                                config);
    }
    return std::make_unique<Stationary>(config.t_end);
}

void validate_config(const FlowConfig& config) {
    catalog::validate(config.model);
    const int n = catalog::dimension(config.model);
    if (config.r < 1 || config.r > n) {
        throw DomainError("order r=" + std::to_string(config.r) + " outside [1, " + std::to_string(n) + "]");
    }
    if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
        throw DomainError("t_end must be positive");
    }
    if (!(config.cfl_safety > 0.0 && config.cfl_safety <= 1.0)) {
        throw DomainError("cfl_safety must lie in (0, 1]");
    }
    if (config.output_stride == 0) {
        throw DomainError("output_stride must be positive");
    }
    const bool curve = std::holds_alternative<catalog::Sphere>(config.model) && n == 1;
    if (curve && config.resolution < 16) {
        throw DomainError("curve flow needs at least 16 vertices");
    }
    if (config.resolution < 5) {
        throw DomainError("flow resolution must be at least 5");
    }
}

}  // namespace

double extinction_time(int n, int r, double r0) {
    if (r < 1 || r > n) {
        throw DomainError("order r outside [1, n]");
    }
    if (!(r0 > 0.0)) {
        throw DomainError("initial radius must be positive");
    }
    return std::pow(r0, r + 1) / ((r + 1) * symfun::binomial(n, r));
}

double sphere_radius_exact(int n, int r, double r0, double t) {
    const double big_t = extinction_time(n, r, r0);
    if (t < 0.0) {
        throw DomainError("time must be non-negative");
    }
    if (t >= big_t) {
        throw ExtinctError("sphere is extinct at T=" + std::to_string(big_t), big_t);
    }
    return std::pow(std::pow(r0, r + 1) - (r + 1) * symfun::binomial(n, r) * t, 1.0 / (r + 1));
}

double canonical_phi(int r, double t) {
    const double base = 1.0 - (r + 1) * t;
    return base > 0.0 ? std::pow(base, 1.0 / (r + 1)) : 0.0;
}

std::string_view to_string(Integrator integrator) {
    return integrator == Integrator::Euler ? "euler" : "rk2";
}

std::string_view to_string(FlowStatus status) {
    return status == FlowStatus::Completed ? "completed" : "extinct";
}

CurveState regular_polygon(double radius, std::size_t vertices) {
    if (!(radius > 0.0)) {
        throw DomainError("circle radius must be positive");
    }
    if (vertices < 16) {
        throw DomainError("curve needs at least 16 vertices");
    }
    CurveState state;
    state.vertices.resize(2, static_cast<Eigen::Index>(vertices));
    for (std::size_t j = 0; j < vertices; ++j) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(vertices);
        state.vertices.col(static_cast<Eigen::Index>(j)) << radius * std::cos(a), radius * std::sin(a);
    }
    return state;
}

CurveGeometry curve_geometry(const Eigen::Matrix2Xd& v) {
    const Eigen::Index m = v.cols();
    if (m < 3) {
        throw DomainError("curve needs at least 3 vertices");
    }
    CurveGeometry g;
    g.curvature.resize(m);
    g.normal.resize(2, m);
    g.min_edge = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Vector2d prev = v.col((i + m - 1) % m);
        const Eigen::Vector2d here = v.col(i);
        const Eigen::Vector2d next = v.col((i + 1) % m);
        const Eigen::Vector2d a = here - prev;
        const Eigen::Vector2d b = next - here;
        const Eigen::Vector2d c = next - prev;
        const double cross = a.x() * b.y() - a.y() * b.x();
        g.curvature(i) = 2.0 * cross / (a.norm() * b.norm() * c.norm());
        g.normal.col(i) = Eigen::Vector2d(-c.y(), c.x()) / c.norm();
        g.min_edge = std::min(g.min_edge, b.norm());
    }
    return g;
}

double curve_stable_dt(const Eigen::Matrix2Xd& vertices, double cfl_safety) {
    const double h = curve_geometry(vertices).min_edge;
    return cfl_safety * h * h / 2.0;
}

CurveState step_curve(const CurveState& state, double dt, double cfl_safety, Integrator integrator) {
    const Eigen::Matrix2Xd& v = state.vertices;
    if (v.cols() < 16) {
        throw DomainError("curve needs at least 16 vertices");
    }
    const double diameter = (v.rowwise().maxCoeff() - v.rowwise().minCoeff()).norm();
    auto velocity = [&](const Eigen::Matrix2Xd& x) {
        const CurveGeometry g = curve_geometry(x);
        if (!(g.min_edge >= 1e-12 * diameter)) {
            throw NumericalError("degenerate curve edge", state.t);
        }
        Eigen::Matrix2Xd out = g.normal;
        for (Eigen::Index i = 0; i < out.cols(); ++i) {
            out.col(i) *= g.curvature(i);
        }
        return out;
    };
    check_cfl(dt, curve_stable_dt(v, cfl_safety), state.t);
    const Eigen::Matrix2Xd k1 = velocity(v);
    CurveState next = state;
    if (integrator == Integrator::Euler) {
        next.vertices = v + dt * k1;
    } else {
        const Eigen::Matrix2Xd k2 = velocity(v + dt * k1);
        next.vertices = v + 0.5 * dt * (k1 + k2);
    }
    if (!next.vertices.allFinite()) {
        throw NumericalError("curve update produced non-finite vertices", state.t);
    }
    next.t = state.t + dt;
    next.steps = state.steps + 1;
    return next;
}

double revolution_stable_dt(const ProfileCurve& profile, int orientation, int r, double cfl_safety) {
    if (r < 1 || r > 2) {
        throw DomainError("surface flow needs r in {1, 2}");
    }
    const ProfileGeometry geo(profile, orientation);
    double weight = 1.0;
    for (std::size_t i = 0; i < geo.size(); ++i) {
        const NodeGeometry& g = geo.at(static_cast<std::ptrdiff_t>(i));
        weight = std::max(weight, principal_weight(CurvatureVector({g.k_meridian, g.k_parallel}), r));
    }
    const double h = geo.min_arclength_spacing();
    return cfl_safety * h * h / weight;
}

namespace {

struct ProfileVelocity {
    std::vector<double> rho;
    std::vector<double> z;
};

ProfileVelocity profile_velocity(const ProfileCurve& profile, int orientation, int r) {
    const ProfileGeometry geo(profile, orientation);
    ProfileVelocity v{std::vector<double>(geo.size()), std::vector<double>(geo.size(), 0.0)};
    const bool radial = profile.kind() == ProfileKind::RadialGraph;
    // Closed and periodic meridians also slide along T by <X_uu, T> / |X_u|^2,
    // which spreads the nodes evenly in arclength.
    const bool redistribute =
        !radial && (profile.boundary() == Boundary::Axis || profile.boundary() == Boundary::Periodic);
    const double h = geo.spacing();
    for (std::size_t i = 0; i < geo.size(); ++i) {
        const auto at = static_cast<std::ptrdiff_t>(i);
        const NodeGeometry& g = geo.at(at);
        const double sigma = node_sigma(g, r);
        if (radial) {
            v.rho[i] = -orientation * sigma * g.speed;
            continue;
        }
        v.rho[i] = sigma * g.normal_rho;
        v.z[i] = sigma * g.normal_z;
        if (redistribute) {
            const NodeGeometry& prev = geo.at(at - 1);
            const NodeGeometry& next = geo.at(at + 1);
            const double t_rho = g.d_rho / g.speed;
            const double t_z = g.d_height / g.speed;
            const double uu_rho = (next.rho - 2.0 * g.rho + prev.rho) / (h * h);
            const double uu_z = (next.height - 2.0 * g.height + prev.height) / (h * h);
            const double tangential = (uu_rho * t_rho + uu_z * t_z) / (g.speed * g.speed);
            v.rho[i] += tangential * t_rho;
            v.z[i] += tangential * t_z;
        }
    }
    return v;
}

ProfileCurve moved(const ProfileCurve& profile, const ProfileVelocity& a, const ProfileVelocity* b,
                   double dt, double t) {
    const auto rho = profile.rho();
    const auto z = profile.height();
    std::vector<double> next_rho(rho.size());
    std::vector<double> next_z(z.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double vr = b == nullptr ? a.rho[i] : 0.5 * (a.rho[i] + b->rho[i]);
        const double vz = b == nullptr ? a.z[i] : 0.5 * (a.z[i] + b->z[i]);
        next_rho[i] = rho[i] + dt * vr;
        next_z[i] = z[i] + dt * vz;
        if (!std::isfinite(next_rho[i]) || !std::isfinite(next_z[i])) {
            throw NumericalError("profile update produced non-finite values", t);
        }
        if (!(next_rho[i] > 0.0)) {
            throw ExtinctError("profile pinched at node " + std::to_string(i), t);
        }
    }
    return profile.with_points(std::move(next_rho), std::move(next_z));
}

}  // namespace

RevolutionState step_revolution(const RevolutionState& state, int r, double dt, double cfl_safety,
                                Integrator integrator) {
    check_cfl(dt, revolution_stable_dt(state.profile, state.orientation, r, cfl_safety), state.t);
    const ProfileVelocity k1 = profile_velocity(state.profile, state.orientation, r);
    RevolutionState next = state;
    if (integrator == Integrator::Euler) {
        next.profile = moved(state.profile, k1, nullptr, dt, state.t);
    } else {
        const ProfileCurve mid = moved(state.profile, k1, nullptr, dt, state.t);
        const ProfileVelocity k2 = profile_velocity(mid, state.orientation, r);
        next.profile = moved(state.profile, k1, &k2, dt, state.t);
    }
    next.t = state.t + dt;
    next.steps = state.steps + 1;
    return next;
}

FlowResult run(const FlowConfig& config) {
    validate_config(config);
    auto evolver = make_evolver(config);
    FlowResult result;
    result.analytic_extinction_time = evolver->analytic_extinction();

    auto record = [&](double t, double dt) {
        const Snapshot s = evolver->snapshot(canonical_phi(config.r, t), config.rescaled);
        if (!std::isfinite(s.residual) || !std::isfinite(s.defect) || !std::isfinite(s.min_radius)) {
            throw NumericalError("non-finite diagnostics", t);
        }
        result.diagnostics.push_back({t, s.residual, s.defect, s.min_radius, dt});
        return s;
    };

    const double initial_radius = record(0.0, 0.0).min_radius;
    double t = 0.0;
    std::size_t steps = 0;
    while (config.t_end - t > 1e-14 * config.t_end) {
        const double dt = std::min(evolver->stable_dt(), config.t_end - t);
        try {
            evolver->advance(dt, t);
        } catch (const ExtinctError&) {
            result.status = FlowStatus::Extinct;
            break;
        }
        t += dt;
        ++steps;
        const bool last = config.t_end - t <= 1e-14 * config.t_end;
        if (evolver->can_go_extinct()) {
            if (evolver->min_radius() < extinction_ratio * initial_radius) {
                record(t, dt);
                result.status = FlowStatus::Extinct;
                break;
            }
        }
        if (last || steps % config.output_stride == 0) {
            record(t, dt);
        }
    }
    result.final_time = t;
    result.steps = steps;
    return result;
}

}  // namespace newton_flow::flow
