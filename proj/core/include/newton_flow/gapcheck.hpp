#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "newton_flow/catalog.hpp"
#include "newton_flow/symfun.hpp"

namespace newton_flow::gapcheck {

using catalog::HypersurfaceModel;
using catalog::PointSample;

/// Strict-versus-boundary band on the |sqrt(P)A|^2 scale, and the band for
/// "eigenvalue is zero".
inline constexpr double default_tolerance = 1e-6;

enum class ClassKind { Hyperplane, Sphere, Cylinder, Inconclusive, NotShrinker };

/// Outcome of the rigidity taxonomy. For sampled, non-catalog geometry the
/// labels mean "consistent with".
struct Classification {
    ClassKind kind = ClassKind::Inconclusive;
    int m = 0;  // spherical factor dimension for Cylinder

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// "hyperplane", "sphere", "cylinder(m=2)", "inconclusive", "not_shrinker".
[[nodiscard]] std::string to_string(const Classification& c);

struct GapFlags {
    bool thm1_strict = false;        // sup |sqrt(P)A|^2 < r - tol
    bool thm1_boundary = false;      // |sup |sqrt(P)A|^2 - r| <= tol
    bool thm1_psd_definite = false;  // inf lambda_min(P_{r-1}) > tol
    bool thm2 = false;               // strict and sup |A|^2 finite
    bool gauss_weakly_convex = false;  // r = n and all k_i >= -tol
    bool gauss_HK = false;             // r = n and sup HK <= n + tol
};

struct GapReport {
    std::string model;
    int n = 0;
    int r = 1;
    std::size_t samples = 0;
    double tolerance = default_tolerance;
    double sup_modified_norm_sq = 0.0;
    double min_eig_p = 0.0;
    double max_eig_p = 0.0;
    double sup_a_norm_sq = 0.0;
    double sup_sigma_rm1 = 0.0;
    double sup_residual = 0.0;
    /// Curvatures with |k| <= tol, counted at the sample where there are fewest.
    int zero_curvature_multiplicity = 0;
    symfun::Definiteness psd_class;
    GapFlags flags;
    Classification classification;
};

struct EvaluateOptions {
    double tolerance = default_tolerance;
    /// Largest sup |sigma_r + <X,N>| treated as a self-shrinker.
    double shrinker_tolerance = default_tolerance;
};

/// Suprema and infima of the hypothesis quantities over sample_points(model,
/// resolution), the flags they imply and the classification (NotShrinker is
/// reported, not thrown). On cylinders every quantity must be constant over
/// the samples to 1e-12, else NumericalError.
[[nodiscard]] GapReport evaluate(const HypersurfaceModel& model, int r, std::size_t resolution,
                                 const EvaluateOptions& options = {});

/// Hyperplane when strict; Sphere or Cylinder(m = n - zero multiplicity) on
/// the boundary with definite P_{r-1}; Inconclusive otherwise. Throws
/// NotShrinkerError when the report's residual exceeds the tolerance.
[[nodiscard]] Classification classify(const GapReport& report,
                                      double shrinker_tolerance = default_tolerance);

struct GaussReport {
    int n = 0;
    std::size_t samples = 0;
    bool weakly_convex = false;
    double min_curvature = 0.0;
    double sup_hk = 0.0;                 // HK = tr(P_{n-1} A^2) = |sqrt(P_{n-1})A|^2
    double max_hk_route_gap = 0.0;       // |sigma_1 sigma_n - tr(P_{n-1} A^2)|
    double max_k_identity_residual = 0.0;  // max_i |K - k_i sigma_{n-1}(A_i)|
    double sup_residual = 0.0;           // sup |K + <X,N>|
    bool shrinker = false;
    /// "sphere" (HK = n), "hyperplane" (HK < n), "above" (HK > n), or
    /// "not_shrinker" / "not_weakly_convex" when the hypotheses fail.
    std::string conclusion;
};

/// Hypotheses and conclusion of the Gauss-flow corollary (r = n).
[[nodiscard]] GaussReport gauss_check(const HypersurfaceModel& model, std::size_t resolution,
                                      double tolerance = default_tolerance);

struct PsdSufficiency {
    int r = 1;
    bool trivial = false;           // r = 1: P_0 = I
    bool sigma_r_vanishes = false;  // |sigma_r| <= tol at every sample
    /// sigma_r = 0: P_{r-1} semidefinite. Positive directly when r-1 is even
    /// and sigma_{r-1} >= 0; after reversing the normal when r-1 is odd.
    bool item_i = false;
    /// sigma_r = 0 and sigma_{r+1} != 0 everywhere: definite, same sign rules.
    bool item_ii = false;
    bool orientation_choice = false;  // items (i)/(ii) fired through r-1 odd
    /// sigma_k > 0 everywhere for some k >= r, and some sample has all
    /// k_i >= -tol: P_{r-1} positive definite.
    bool item_iii = false;
    int item_iii_k = 0;  // largest such k, 0 if none
    /// "positive_definite", "positive_semidefinite" or "none". Only ever a
    /// sufficient condition.
    std::string conclusion;
};

/// Throws DomainError on an empty sample set or mixed dimensions.
[[nodiscard]] PsdSufficiency psd_sufficient(std::span<const PointSample> samples, int r,
                                            double tolerance = default_tolerance);

}  // namespace newton_flow::gapcheck
