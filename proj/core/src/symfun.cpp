#include "newton_flow/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newton_flow/errors.hpp"

namespace newton_flow::symfun {

namespace {

void require_order(const ShapeOperator& s, int r) {
    if (r < 1 || r > s.dim()) {
        throw DomainError("order r=" + std::to_string(r) + " outside [1, " +
                          std::to_string(s.dim()) + "]");
    }
}

double degree_scale(double norm, int degree) { return std::pow(1.0 + norm, degree); }

// sigma_{r-1}(A_j) for every j: the eigenvalues of P_{r-1} in the principal frame.
std::vector<double> excluded_sigmas(const CurvatureVector& k, int order) {
    std::vector<double> out(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) {
        out[j] = elem_sym_excluding(k, j, order);
    }
    return out;
}

}  // namespace

double binomial(int m, int k) {
    if (k < 0 || m < 0 || k > m) {
        return 0.0;
    }
    k = std::min(k, m - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<double>(m - k + i) / static_cast<double>(i);
    }
    return std::round(result);
}

CurvatureVector::CurvatureVector(std::vector<double> k) : k_(std::move(k)) {
    if (k_.empty()) {
        throw DomainError("curvature vector must have at least one entry");
    }
    for (double v : k_) {
        if (!std::isfinite(v)) {
            throw DomainError("curvature vector has a non-finite entry");
        }
    }
}

CurvatureVector CurvatureVector::uniform(std::size_t n, double value) {
    return CurvatureVector(std::vector<double>(n, value));
}

CurvatureVector CurvatureVector::without(std::size_t i) const {
    if (i >= k_.size()) {
        throw DomainError("index " + std::to_string(i) + " out of range");
    }
    if (k_.size() < 2) {
        throw DomainError("cannot remove the only curvature");
    }
    std::vector<double> rest;
    rest.reserve(k_.size() - 1);
    for (std::size_t j = 0; j < k_.size(); ++j) {
        if (j != i) {
            rest.push_back(k_[j]);
        }
    }
    return CurvatureVector(std::move(rest));
}

double elem_sym(const CurvatureVector& k, int r) {
    if (r < 0) {
        throw DomainError("negative order r=" + std::to_string(r));
    }
    const auto n = static_cast<int>(k.size());
    if (r == 0) {
        return 1.0;
    }
    if (r > n) {
        return 0.0;
    }
    std::vector<double> e(static_cast<std::size_t>(r) + 1, 0.0);
    e[0] = 1.0;
    for (int j = 0; j < n; ++j) {
        const double kj = k[static_cast<std::size_t>(j)];
        for (int q = std::min(j + 1, r); q >= 1; --q) {
            e[static_cast<std::size_t>(q)] += kj * e[static_cast<std::size_t>(q - 1)];
        }
    }
    return e[static_cast<std::size_t>(r)];
}

std::vector<double> elem_sym_all(const CurvatureVector& k) {
    const std::size_t n = k.size();
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t q = j + 1; q >= 1; --q) {
            e[q] += k[j] * e[q - 1];
        }
    }
    return e;
}

double elem_sym_excluding(const CurvatureVector& k, std::size_t i, int r) {
    if (i >= k.size()) {
        throw DomainError("index " + std::to_string(i) + " out of range for n=" +
                          std::to_string(k.size()));
    }
    if (r < 0) {
        throw DomainError("negative order r=" + std::to_string(r));
    }
    if (r == 0) {
        return 1.0;
    }
    const auto n_rest = static_cast<int>(k.size()) - 1;
    if (r > n_rest) {
        return 0.0;
    }
    std::vector<double> e(static_cast<std::size_t>(r) + 1, 0.0);
    e[0] = 1.0;
    int seen = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (j == i) {
            continue;
        }
        for (int q = std::min(seen + 1, r); q >= 1; --q) {
            e[static_cast<std::size_t>(q)] += k[j] * e[static_cast<std::size_t>(q - 1)];
        }
        ++seen;
    }
    return e[static_cast<std::size_t>(r)];
}

ShapeOperator::ShapeOperator(Matrix s) : s_(std::move(s)), curvatures_(std::vector<double>{0.0}) {
    if (s_.rows() == 0 || s_.rows() != s_.cols()) {
        throw DomainError("shape operator must be a non-empty square matrix");
    }
    if (!s_.allFinite()) {
        throw DomainError("shape operator has non-finite entries");
    }
    const double scale = std::max(1.0, s_.norm());
    const double asym = (s_ - s_.transpose()).cwiseAbs().maxCoeff();
    if (asym > Tolerances::symmetry * scale) {
        throw DomainError("shape operator is not symmetric (max |S_ij - S_ji| = " +
                          std::to_string(asym) + ")");
    }
    s_ = 0.5 * (s_ + s_.transpose());
    norm_ = s_.norm();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(s_);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver failed");
    }
    const Vector& values = eig.eigenvalues();
    curvatures_ = CurvatureVector(std::vector<double>(values.data(), values.data() + values.size()));
    frame_ = eig.eigenvectors();
}

ShapeOperator ShapeOperator::diagonal(const CurvatureVector& k) {
    Vector d(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) {
        d(static_cast<Eigen::Index>(i)) = k[i];
    }
    return ShapeOperator(d.asDiagonal().toDenseMatrix());
}

NewtonFamily newton_family(const ShapeOperator& s) {
    const int n = s.dim();
    const Matrix& a = s.matrix();
    const Matrix id = Matrix::Identity(n, n);

    NewtonFamily family;
    // Conditioning: sigma from the eigenvalues, not from det(A - tI) coefficients.
    family.sigmas = elem_sym_all(s.curvatures());
    family.P.reserve(static_cast<std::size_t>(n) + 1);
    family.P.push_back(id);
    for (int r = 1; r <= n; ++r) {
        family.P.push_back(family.sigmas[static_cast<std::size_t>(r)] * id -
                           family.P.back() * a);
    }

    std::vector<Matrix> powers{id};
    for (int j = 1; j <= n; ++j) {
        powers.push_back(powers.back() * a);
    }
    double worst = 0.0;
    for (int r = 0; r <= n; ++r) {
        Matrix poly = Matrix::Zero(n, n);
        for (int j = 0; j <= r; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            poly += sign * family.sigmas[static_cast<std::size_t>(r - j)] *
                    powers[static_cast<std::size_t>(j)];
        }
        const double diff = (family.P[static_cast<std::size_t>(r)] - poly).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff / degree_scale(s.norm(), r));
    }
    family.polynomial_residual = worst;
    if (worst > Tolerances::identity) {
        throw NumericalError("Newton recurrence and polynomial form disagree (" +
                             std::to_string(worst) + ")");
    }
    return family;
}

Matrix sqrt_psd(const Matrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DomainError("sqrt_psd needs a non-empty square matrix");
    }
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver failed");
    }
    const double floor = -Tolerances::clamp * sym.norm();
    Vector roots = eig.eigenvalues();
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        if (roots(i) < floor) {
            throw NotPsdError("matrix is not positive semidefinite", roots(i));
        }
        roots(i) = std::sqrt(std::max(roots(i), 0.0));
    }
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

std::string_view to_string(DefinitenessClass c) noexcept {
    switch (c) {
        case DefinitenessClass::PositiveDefinite: return "PositiveDefinite";
        case DefinitenessClass::PositiveSemidefinite: return "PositiveSemidefinite";
        case DefinitenessClass::Indefinite: return "Indefinite";
        case DefinitenessClass::NegativeSemidefinite: return "NegativeSemidefinite";
        case DefinitenessClass::NegativeDefinite: return "NegativeDefinite";
    }
    return "Indefinite";
}

Definiteness classify_spectrum(double min_eigenvalue, double max_eigenvalue, double band) noexcept {
    Definiteness d;
    d.min_eigenvalue = min_eigenvalue;
    d.max_eigenvalue = max_eigenvalue;
    if (min_eigenvalue > band) {
        d.kind = DefinitenessClass::PositiveDefinite;
    } else if (min_eigenvalue >= -band) {
        d.kind = DefinitenessClass::PositiveSemidefinite;
    } else if (max_eigenvalue < -band) {
        d.kind = DefinitenessClass::NegativeDefinite;
    } else if (max_eigenvalue <= band) {
        d.kind = DefinitenessClass::NegativeSemidefinite;
    } else {
        d.kind = DefinitenessClass::Indefinite;
    }
    return d;
}

Definiteness definiteness(const Matrix& m, double tol) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DomainError("definiteness needs a non-empty square matrix");
    }
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const Vector& values = eig.eigenvalues();
    return classify_spectrum(values.minCoeff(), values.maxCoeff(), tol * std::max(1.0, sym.norm()));
}

double ModifiedNormRoutes::spread() const noexcept {
    const double hi = std::max({trace_form, frame_sum, symmetric_form});
    const double lo = std::min({trace_form, frame_sum, symmetric_form});
    return hi - lo;
}

ModifiedNormRoutes modified_sff_norm_sq_routes(const ShapeOperator& s, int r) {
    require_order(s, r);
    const NewtonFamily family = newton_family(s);
    const Matrix& a = s.matrix();
    const Matrix& p = family.P[static_cast<std::size_t>(r - 1)];
    const CurvatureVector& k = s.curvatures();
    const auto& sig = family.sigmas;
    const auto n = static_cast<std::size_t>(s.dim());
    const auto ru = static_cast<std::size_t>(r);

    ModifiedNormRoutes routes;
    routes.trace_form = (p * a * a).trace();
    const std::vector<double> lambdas = excluded_sigmas(k, r - 1);
    for (std::size_t j = 0; j < n; ++j) {
        routes.frame_sum += lambdas[j] * k[j] * k[j];
    }
    const double next = ru + 1 <= n ? sig[ru + 1] : 0.0;
    routes.symmetric_form = sig[1] * sig[ru] - static_cast<double>(r + 1) * next;

    const double lo = *std::min_element(lambdas.begin(), lambdas.end());
    const double hi = *std::max_element(lambdas.begin(), lambdas.end());
    const double band = Tolerances::identity * std::max(1.0, p.norm());
    routes.p_psd = classify_spectrum(lo, hi, band).is_psd();
    return routes;
}

double modified_sff_norm_sq(const ShapeOperator& s, int r) {
    const ModifiedNormRoutes routes = modified_sff_norm_sq_routes(s, r);
    if (routes.spread() > Tolerances::identity * degree_scale(s.norm(), r + 1)) {
        throw NumericalError("modified norm routes disagree by " + std::to_string(routes.spread()));
    }
    return routes.trace_form;
}

double TraceIdentityResiduals::max() const noexcept {
    return std::max({trace_p, trace_pa, trace_pa2});
}

TraceIdentityResiduals trace_identities(const ShapeOperator& s, int r) {
    require_order(s, r);
    const NewtonFamily family = newton_family(s);
    const Matrix& a = s.matrix();
    const Matrix& p = family.P[static_cast<std::size_t>(r - 1)];
    const auto& sig = family.sigmas;
    const int n = s.dim();
    const auto ru = static_cast<std::size_t>(r);
    const double next = r + 1 <= n ? sig[ru + 1] : 0.0;
    const double scale = degree_scale(s.norm(), r + 1);

    TraceIdentityResiduals res;
    res.trace_p = std::abs(p.trace() - static_cast<double>(n - r + 1) * sig[ru - 1]) / scale;
    res.trace_pa = std::abs((p * a).trace() - static_cast<double>(r) * sig[ru]) / scale;
    res.trace_pa2 = std::abs((p * a * a).trace() -
                             (sig[1] * sig[ru] - static_cast<double>(r + 1) * next)) /
                    scale;
    return res;
}

CauchySchwarzBound cauchy_schwarz_bound(const ShapeOperator& s, int r) {
    require_order(s, r);
    const NewtonFamily family = newton_family(s);
    const Matrix& p = family.P[static_cast<std::size_t>(r - 1)];
    const Definiteness d = definiteness(p, Tolerances::identity);
    if (!d.is_psd()) {
        throw NotPsdError("P_{r-1} is not positive semidefinite", d.min_eigenvalue);
    }
    const Matrix& a = s.matrix();
    const double sigma_r = family.sigmas[static_cast<std::size_t>(r)];
    return {static_cast<double>(r * r) * sigma_r * sigma_r, p.trace() * (p * a * a).trace()};
}

}  // namespace newton_flow::symfun
