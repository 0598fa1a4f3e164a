#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace newton_flow::symfun {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Tolerances {
    static constexpr double symmetry = 1e-10;
    static constexpr double clamp = 1e-12;
    static constexpr double identity = 1e-10;
};

/// Binomial coefficient as a double, with C(m, k) = 0 whenever k < 0 or k > m.
[[nodiscard]] double binomial(int m, int k);

/// Principal curvatures k_1..k_n at a point. Always non-empty and finite.
class CurvatureVector {
public:
    explicit CurvatureVector(std::vector<double> k);

    /// n copies of `value`.
    [[nodiscard]] static CurvatureVector uniform(std::size_t n, double value);

    [[nodiscard]] std::size_t size() const noexcept { return k_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return k_; }
    [[nodiscard]] double operator[](std::size_t i) const { return k_[i]; }

    /// Copy with entry i removed (the curvatures of A restricted to e_i^perp).
    /// Requires n >= 2.
    [[nodiscard]] CurvatureVector without(std::size_t i) const;

private:
    std::vector<double> k_;
};

/// r-th elementary symmetric function of the curvatures. sigma_0 = 1 and
/// sigma_r = 0 for r > n. Evaluated by the prefix recurrence
/// e_r^(j) = e_r^(j-1) + k_j e_{r-1}^(j-1), O(n r).
[[nodiscard]] double elem_sym(const CurvatureVector& k, int r);

/// All of sigma_0..sigma_n in one O(n^2) pass.
[[nodiscard]] std::vector<double> elem_sym_all(const CurvatureVector& k);

/// sigma_r of the curvatures with entry i (0-based) removed. For n = 1 the
/// remaining list is empty, so the result is 1 for r = 0 and 0 otherwise.
[[nodiscard]] double elem_sym_excluding(const CurvatureVector& k, std::size_t i, int r);

/// Symmetric n x n matrix representing A in an orthonormal frame. The
/// constructor rejects asymmetry beyond symTol * max(1, |S|_F), stores the
/// symmetrized matrix and caches its eigendecomposition.
class ShapeOperator {
public:
    explicit ShapeOperator(Matrix s);

    /// A = diag(k) in its own principal frame.
    [[nodiscard]] static ShapeOperator diagonal(const CurvatureVector& k);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(s_.rows()); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return s_; }
    /// Frobenius norm; the scale used by every tolerance in this module.
    [[nodiscard]] double norm() const noexcept { return norm_; }
    /// Eigenvalues in ascending order.
    [[nodiscard]] const CurvatureVector& curvatures() const noexcept { return curvatures_; }
    /// Orthonormal eigenvectors, column j belongs to curvatures()[j].
    [[nodiscard]] const Matrix& frame() const noexcept { return frame_; }

private:
    Matrix s_;
    double norm_ = 0.0;
    CurvatureVector curvatures_;
    Matrix frame_;
};

/// sigma_0..sigma_n and the Newton transformations P_0..P_n of a shape
/// operator. P is built by P_r = sigma_r I - P_{r-1} A; the explicit
/// polynomial sum_j (-1)^j sigma_{r-j} A^j is evaluated as a cross-check and
/// its worst normalized discrepancy kept in `polynomial_residual`.
struct NewtonFamily {
    std::vector<double> sigmas;
    std::vector<Matrix> P;
    double polynomial_residual = 0.0;

    [[nodiscard]] int r_max() const noexcept { return static_cast<int>(P.size()) - 1; }
};

[[nodiscard]] NewtonFamily newton_family(const ShapeOperator& s);

/// Unique symmetric PSD square root. Eigenvalues in [-clampTol |M|, 0) are
/// clamped to zero; anything more negative throws NotPsdError.
[[nodiscard]] Matrix sqrt_psd(const Matrix& m);

enum class DefinitenessClass {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
    NegativeSemidefinite,
    NegativeDefinite,
};

[[nodiscard]] std::string_view to_string(DefinitenessClass c) noexcept;

struct Definiteness {
    DefinitenessClass kind = DefinitenessClass::Indefinite;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;

    [[nodiscard]] bool is_psd() const noexcept {
        return kind == DefinitenessClass::PositiveDefinite ||
               kind == DefinitenessClass::PositiveSemidefinite;
    }
};

/// Classify an extreme-eigenvalue pair. Eigenvalues with |lambda| <= band
/// count as zero, never as strictly signed.
[[nodiscard]] Definiteness classify_spectrum(double min_eigenvalue, double max_eigenvalue,
                                             double band) noexcept;

/// Definiteness of a symmetric matrix with band tol * max(1, |M|_F).
[[nodiscard]] Definiteness definiteness(const Matrix& m, double tol);

/// The three independent evaluations of |sqrt(P_{r-1}) A|^2.
struct ModifiedNormRoutes {
    double trace_form = 0.0;      // tr(P_{r-1} A^2)
    double frame_sum = 0.0;       // sum_j sigma_{r-1}(A_j) k_j^2
    double symmetric_form = 0.0;  // sigma_1 sigma_r - (r+1) sigma_{r+1}
    bool p_psd = false;           // whether the "norm" reading is legitimate

    [[nodiscard]] double spread() const noexcept;
};

[[nodiscard]] ModifiedNormRoutes modified_sff_norm_sq_routes(const ShapeOperator& s, int r);

/// tr(P_{r-1} A^2). Throws NumericalError if the three routes disagree by more
/// than 1e-10 (1 + |S|)^{r+1}. For indefinite P_{r-1} the trace is still
/// returned; callers that need the norm interpretation check p_psd.
[[nodiscard]] double modified_sff_norm_sq(const ShapeOperator& s, int r);

/// Residuals of tr P_{r-1} = (n-r+1) sigma_{r-1}, tr(P_{r-1} A) = r sigma_r and
/// tr(P_{r-1} A^2) = sigma_1 sigma_r - (r+1) sigma_{r+1}, each divided by
/// (1 + |S|)^{r+1}.
struct TraceIdentityResiduals {
    double trace_p = 0.0;
    double trace_pa = 0.0;
    double trace_pa2 = 0.0;

    [[nodiscard]] double max() const noexcept;
};

[[nodiscard]] TraceIdentityResiduals trace_identities(const ShapeOperator& s, int r);

/// r^2 sigma_r^2 <= tr(P_{r-1}) tr(P_{r-1} A^2), only asserted for PSD P_{r-1}.
struct CauchySchwarzBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

[[nodiscard]] CauchySchwarzBound cauchy_schwarz_bound(const ShapeOperator& s, int r);

}  // namespace newton_flow::symfun
