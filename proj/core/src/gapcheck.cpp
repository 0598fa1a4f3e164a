#include "newton_flow/gapcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "newton_flow/errors.hpp"

namespace newton_flow::gapcheck {

namespace {

using symfun::CurvatureVector;

struct SampleValues {
    double norm_sq = 0.0;
    double min_eig = 0.0;
    double max_eig = 0.0;
    double a_norm_sq = 0.0;
    double sigma_rm1 = 0.0;
    double residual = 0.0;
};

SampleValues measure(const PointSample& s, int r) {
    const CurvatureVector& k = s.curvatures;
    SampleValues v;
    v.norm_sq = symfun::modified_sff_norm_sq(symfun::ShapeOperator::diagonal(k), r);
    v.min_eig = std::numeric_limits<double>::infinity();
    v.max_eig = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double lambda = symfun::elem_sym_excluding(k, i, r - 1);
        v.min_eig = std::min(v.min_eig, lambda);
        v.max_eig = std::max(v.max_eig, lambda);
        v.a_norm_sq += k[i] * k[i];
    }
    v.sigma_rm1 = symfun::elem_sym(k, r - 1);
    v.residual = std::abs(symfun::elem_sym(k, r) + s.support);
    return v;
}

void require_constant(std::span<const SampleValues> values) {
    auto check = [&](double SampleValues::*field, std::string_view name) {
        const double first = values.front().*field;
        for (const auto& v : values) {
            if (std::abs(v.*field - first) > 1e-12 * std::max(1.0, std::abs(first))) {
                throw NumericalError("cylinder samples are not axially constant in " + std::string(name));
            }
        }
    };
    check(&SampleValues::norm_sq, "modified norm");
    check(&SampleValues::min_eig, "min eigenvalue");
    check(&SampleValues::a_norm_sq, "|A|^2");
    check(&SampleValues::sigma_rm1, "sigma_{r-1}");
    check(&SampleValues::residual, "shrinker residual");
}

Classification taxonomy(const GapReport& report, double shrinker_tolerance) {
    if (report.sup_residual > shrinker_tolerance) {
        return {ClassKind::NotShrinker, 0};
    }
    if (report.flags.thm1_strict) {
        return {ClassKind::Hyperplane, 0};
    }
    if (report.flags.thm1_boundary && report.flags.thm1_psd_definite) {
        if (report.zero_curvature_multiplicity == 0) {
            return {ClassKind::Sphere, 0};
        }
        return {ClassKind::Cylinder, report.n - report.zero_curvature_multiplicity};
    }
    return {ClassKind::Inconclusive, 0};
}

void require_order(int r, int n) {
    if (r < 1 || r > n) {
        throw DomainError("order r=" + std::to_string(r) + " outside [1, " + std::to_string(n) + "]");
    }
}

}  // namespace

std::string to_string(const Classification& c) {
    switch (c.kind) {
        case ClassKind::Hyperplane: return "hyperplane";
        case ClassKind::Sphere: return "sphere";
        case ClassKind::Cylinder: return "cylinder(m=" + std::to_string(c.m) + ")";
        case ClassKind::Inconclusive: return "inconclusive";
        case ClassKind::NotShrinker: return "not_shrinker";
    }
    return "inconclusive";
}

GapReport evaluate(const HypersurfaceModel& model, int r, std::size_t resolution,
                   const EvaluateOptions& options) {
    const int n = catalog::dimension(model);
    require_order(r, n);
    const auto samples = catalog::sample_points(model, resolution);
    if (samples.empty()) {
        throw DomainError("model produced no samples");
    }
    const double tol = options.tolerance;

    std::vector<SampleValues> values;
    values.reserve(samples.size());
    for (const auto& s : samples) {
        values.push_back(measure(s, r));
    }
    if (std::holds_alternative<catalog::Cylinder>(model)) {
        require_constant(values);
    }

    GapReport report;
    report.model = std::string(catalog::model_name(model));
    report.n = n;
    report.r = r;
    report.samples = samples.size();
    report.tolerance = tol;
    report.sup_modified_norm_sq = -std::numeric_limits<double>::infinity();
    report.min_eig_p = std::numeric_limits<double>::infinity();
    report.max_eig_p = -std::numeric_limits<double>::infinity();
    report.sup_sigma_rm1 = -std::numeric_limits<double>::infinity();
    report.zero_curvature_multiplicity = n;
    double min_curvature = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const SampleValues& v = values[j];
        report.sup_modified_norm_sq = std::max(report.sup_modified_norm_sq, v.norm_sq);
        report.min_eig_p = std::min(report.min_eig_p, v.min_eig);
        report.max_eig_p = std::max(report.max_eig_p, v.max_eig);
        report.sup_a_norm_sq = std::max(report.sup_a_norm_sq, v.a_norm_sq);
        report.sup_sigma_rm1 = std::max(report.sup_sigma_rm1, v.sigma_rm1);
        report.sup_residual = std::max(report.sup_residual, v.residual);
        const auto k = samples[j].curvatures.values();
        const auto zeros = std::count_if(k.begin(), k.end(), [tol](double x) { return std::abs(x) <= tol; });
        report.zero_curvature_multiplicity = std::min(report.zero_curvature_multiplicity, static_cast<int>(zeros));
        min_curvature = std::min(min_curvature, *std::min_element(k.begin(), k.end()));
    }
    report.psd_class = symfun::classify_spectrum(report.min_eig_p, report.max_eig_p, tol);

    const double sup = report.sup_modified_norm_sq;
    report.flags.thm1_strict = sup < r - tol;
    report.flags.thm1_boundary = std::abs(sup - r) <= tol;
    report.flags.thm1_psd_definite = report.min_eig_p > tol;
    report.flags.thm2 = report.flags.thm1_strict && std::isfinite(report.sup_a_norm_sq);
    if (r == n) {
        report.flags.gauss_weakly_convex = min_curvature >= -tol;
        report.flags.gauss_HK = sup <= n + tol;
    }
    report.classification = taxonomy(report, options.shrinker_tolerance);
    return report;
}

Classification classify(const GapReport& report, double shrinker_tolerance) {
    const Classification c = taxonomy(report, shrinker_tolerance);
    if (c.kind == ClassKind::NotShrinker) {
        throw NotShrinkerError("model is not a self-shrinker for r=" + std::to_string(report.r),
                               report.sup_residual);
    }
    return c;
}

GaussReport gauss_check(const HypersurfaceModel& model, std::size_t resolution, double tolerance) {
    const int n = catalog::dimension(model);
    const auto samples = catalog::sample_points(model, resolution);
    GaussReport g;
    g.n = n;
    g.samples = samples.size();
    g.min_curvature = std::numeric_limits<double>::infinity();
    g.sup_hk = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        const CurvatureVector& k = s.curvatures;
        const double big_k = symfun::elem_sym(k, n);
        const double hk = symfun::modified_sff_norm_sq(symfun::ShapeOperator::diagonal(k), n);
        g.sup_hk = std::max(g.sup_hk, hk);
        g.max_hk_route_gap = std::max(g.max_hk_route_gap, std::abs(symfun::elem_sym(k, 1) * big_k - hk));
        for (std::size_t i = 0; i < k.size(); ++i) {
            g.max_k_identity_residual = std::max(
                g.max_k_identity_residual, std::abs(big_k - k[i] * symfun::elem_sym_excluding(k, i, n - 1)));
            g.min_curvature = std::min(g.min_curvature, k[i]);
        }
        g.sup_residual = std::max(g.sup_residual, std::abs(big_k + s.support));
    }
    g.weakly_convex = g.min_curvature >= -tolerance;
    g.shrinker = g.sup_residual <= tolerance;
    if (!g.shrinker) {
        g.conclusion = "not_shrinker";
    } else if (!g.weakly_convex) {
        g.conclusion = "not_weakly_convex";
    } else if (std::abs(g.sup_hk - n) <= tolerance) {
        g.conclusion = "sphere";
    } else if (g.sup_hk < n) {
        g.conclusion = "hyperplane";
    } else {
        g.conclusion = "above";
    }
    return g;
}

PsdSufficiency psd_sufficient(std::span<const PointSample> samples, int r, double tolerance) {
    if (samples.empty()) {
        throw DomainError("psd_sufficient needs at least one sample");
    }
    const std::size_t n = samples.front().curvatures.size();
    for (const auto& s : samples) {
        if (s.curvatures.size() != n) {
            throw DomainError("samples mix dimensions");
        }
    }
    require_order(r, static_cast<int>(n));

    PsdSufficiency p;
    p.r = r;
    p.trivial = r == 1;
    bool sigma_rm1_nonneg = true;
    bool sigma_rp1_nonzero = true;
    bool some_convex_point = false;
    std::vector<bool> positive(n + 1, true);
    p.sigma_r_vanishes = true;
    for (const auto& s : samples) {
        const auto sig = symfun::elem_sym_all(s.curvatures);
        auto sigma = [&](int q) { return q >= 0 && static_cast<std::size_t>(q) <= n ? sig[static_cast<std::size_t>(q)] : 0.0; };
        p.sigma_r_vanishes = p.sigma_r_vanishes && std::abs(sigma(r)) <= tolerance;
        sigma_rm1_nonneg = sigma_rm1_nonneg && sigma(r - 1) >= -tolerance;
        sigma_rp1_nonzero = sigma_rp1_nonzero && std::abs(sigma(r + 1)) > tolerance;
        for (std::size_t q = 1; q <= n; ++q) {
            positive[q] = positive[q] && sig[q] > tolerance;
        }
        const auto k = s.curvatures.values();
        some_convex_point = some_convex_point ||
                            std::all_of(k.begin(), k.end(), [tolerance](double x) { return x >= -tolerance; });
    }
    const bool odd = (r - 1) % 2 == 1;
    const bool sign_ok = odd || sigma_rm1_nonneg;
    p.item_i = p.sigma_r_vanishes && sign_ok;
    p.item_ii = p.item_i && sigma_rp1_nonzero;
    p.orientation_choice = p.item_i && odd;
    for (std::size_t q = n; q >= 1; --q) {
        if (positive[q]) {
            p.item_iii_k = static_cast<int>(q);
            break;
        }
    }
    p.item_iii = some_convex_point && p.item_iii_k >= r;
    if (p.trivial || p.item_ii || p.item_iii) {
        p.conclusion = "positive_definite";
    } else if (p.item_i) {
        p.conclusion = "positive_semidefinite";
    } else {
        p.conclusion = "none";
    }
    return p;
}

}  // namespace newton_flow::gapcheck
