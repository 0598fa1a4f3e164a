#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "newton_flow/errors.hpp"
#include "newton_flow/symfun.hpp"
#include "support/oracles.hpp"

using namespace newton_flow;
using namespace newton_flow::symfun;

namespace {

std::vector<double> random_curvatures(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> k(static_cast<std::size_t>(n));
    for (auto& x : k) {
        x = u(rng);
    }
    return k;
}

double scale(const ShapeOperator& s, int r) {
    return std::pow(1.0 + s.norm(), r + 1);
}

}  // namespace

TEST_CASE("binomial uses the zero convention outside 0..m") {
    CHECK(binomial(5, 0) == 1.0);
    CHECK(binomial(5, 2) == 10.0);
    CHECK(binomial(8, 4) == 70.0);
    CHECK(binomial(3, 4) == 0.0);
    CHECK(binomial(3, -1) == 0.0);
}

TEST_CASE("CurvatureVector rejects empty and non-finite input") {
    CHECK_THROWS_AS(CurvatureVector(std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(CurvatureVector({1.0, NAN}), DomainError);
    CHECK_THROWS_AS(CurvatureVector({INFINITY}), DomainError);
    const auto k = CurvatureVector::uniform(3, 0.5);
    CHECK(k.size() == 3);
    CHECK(k.without(1).size() == 2);
}

TEST_CASE("elem_sym small cases") {
    const CurvatureVector k({1.0, 2.0, 3.0});
    CHECK(elem_sym(k, 0) == 1.0);
    CHECK(elem_sym(k, 1) == 6.0);
    CHECK(elem_sym(k, 2) == 11.0);
    CHECK(elem_sym(k, 3) == 6.0);
    CHECK(elem_sym(k, 4) == 0.0);
    CHECK_THROWS_AS((void)elem_sym(k, -1), DomainError);
    CHECK(elem_sym(CurvatureVector::uniform(4, 0.0), 2) == 0.0);
}

TEST_CASE("elem_sym matches subset enumeration for n <= 12") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 12;
        const auto kv = random_curvatures(rng, n);
        const CurvatureVector k(kv);
        const auto all = elem_sym_all(k);
        REQUIRE(all.size() == kv.size() + 1);
        for (int r = 0; r <= n; ++r) {
            const double expected = oracle::sigma_subsets(kv, r);
            const double tol = 1e-12 * std::max(1.0, oracle::sigma_subsets_abs(kv, r));
            CHECK(std::abs(elem_sym(k, r) - expected) <= tol);
            CHECK(std::abs(all[static_cast<std::size_t>(r)] - expected) <= tol);
        }
    }
}

TEST_CASE("elem_sym_excluding drops one entry") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 8;
        auto kv = random_curvatures(rng, n);
        const CurvatureVector k(kv);
        for (std::size_t i = 0; i < kv.size(); ++i) {
            auto rest = kv;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            for (int r = 0; r <= n; ++r) {
                const double tol = 1e-12 * std::max(1.0, oracle::sigma_subsets_abs(rest, r));
                CHECK(std::abs(elem_sym_excluding(k, i, r) - oracle::sigma_subsets(rest, r)) <= tol);
            }
        }
    }
    const CurvatureVector single({3.0});
    CHECK(elem_sym_excluding(single, 0, 0) == 1.0);
    CHECK(elem_sym_excluding(single, 0, 1) == 0.0);
}

TEST_CASE("ShapeOperator symmetrizes and rejects asymmetry") {
    Matrix s(2, 2);
    s << 1.0, 1e-13, 0.0, 2.0;
    const ShapeOperator a(s);
    CHECK(a.matrix()(0, 1) == doctest::Approx(a.matrix()(1, 0)));
    CHECK(a.curvatures()[0] <= a.curvatures()[1]);
    s(0, 1) = 0.5;
    CHECK_THROWS_AS(ShapeOperator{s}, DomainError);
}

TEST_CASE("newton_family agrees with the matrix polynomial") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 6;
        const Matrix s = oracle::random_symmetric(rng, n, 1.0);
        const ShapeOperator a(s);
        const auto fam = newton_family(a);
        REQUIRE(fam.r_max() == n);
        CHECK(fam.P[0].isApprox(Matrix::Identity(n, n)));
        for (int r = 0; r <= n; ++r) {
            const double tol = 1e-10 * std::pow(1.0 + a.norm(), r);
            CHECK((fam.P[static_cast<std::size_t>(r)] - oracle::newton_polynomial(s, r)).norm() <= tol);
            CHECK(std::abs(fam.sigmas[static_cast<std::size_t>(r)] - oracle::sigma_principal_minors(s, r)) <= tol);
        }
        CHECK(fam.P[static_cast<std::size_t>(n)].norm() <= 1e-10 * std::pow(1.0 + a.norm(), n));
        CHECK(fam.polynomial_residual <= 1e-10);
    }
}

TEST_CASE("P_{r-1} has eigenvalues sigma_{r-1}(A_i) in the eigenframe") {
    const std::vector<double> kv{-1.0, 0.5, 1.5, 3.0};
    std::mt19937_64 rng(14);
    const ShapeOperator a(oracle::with_spectrum(rng, kv));
    const auto fam = newton_family(a);
    const Matrix& q = a.frame();
    for (int r = 1; r <= 4; ++r) {
        const Matrix d = q.transpose() * fam.P[static_cast<std::size_t>(r - 1)] * q;
        for (int i = 0; i < 4; ++i) {
            auto rest = kv;
            rest.erase(rest.begin() + i);
            CHECK(d(i, i) == doctest::Approx(oracle::sigma_subsets(rest, r - 1)).epsilon(1e-9));
            for (int j = 0; j < 4; ++j) {
                if (j != i) {
                    CHECK(std::abs(d(i, j)) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("sqrt_psd squares back and clamps round-off") {
    std::mt19937_64 rng(15);
    const Matrix m = oracle::with_spectrum(rng, {0.0, 0.3, 2.0});
    const Matrix root = sqrt_psd(m);
    CHECK((root * root - m).norm() <= 1e-10 * m.norm());
    Matrix tiny = Matrix::Identity(2, 2);
    tiny(1, 1) = -1e-15;
    CHECK_NOTHROW((void)sqrt_psd(tiny));
    CHECK_THROWS_AS((void)sqrt_psd(oracle::with_spectrum(rng, {-1.0, 1.0})), NotPsdError);
}

TEST_CASE("definiteness classes") {
    CHECK(definiteness(Matrix::Identity(3, 3), 1e-12).kind == DefinitenessClass::PositiveDefinite);
    Matrix d = Matrix::Zero(2, 2);
    d(1, 1) = 1.0;
    CHECK(definiteness(d, 1e-12).kind == DefinitenessClass::PositiveSemidefinite);
    d(0, 0) = -1.0;
    CHECK(definiteness(d, 1e-12).kind == DefinitenessClass::Indefinite);
    CHECK(definiteness(-Matrix::Identity(2, 2), 1e-12).kind == DefinitenessClass::NegativeDefinite);
    d(1, 1) = 0.0;
    CHECK(definiteness(d, 1e-12).kind == DefinitenessClass::NegativeSemidefinite);
    CHECK(classify_spectrum(-1e-13, 1.0, 1e-12).kind == DefinitenessClass::PositiveSemidefinite);
}

TEST_CASE("modified norm: three routes and closed forms") {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 6;
        const Matrix s = oracle::random_symmetric(rng, n, 1.0);
        const ShapeOperator a(s);
        for (int r = 1; r <= n; ++r) {
            const auto routes = modified_sff_norm_sq_routes(a, r);
            CHECK(routes.spread() <= 1e-10 * scale(a, r));
            const double symmetric = oracle::sigma_principal_minors(s, 1) * oracle::sigma_principal_minors(s, r) -
                                     (r + 1) * oracle::sigma_principal_minors(s, r + 1);
            CHECK(std::abs(modified_sff_norm_sq(a, r) - symmetric) <= 1e-10 * scale(a, r));
        }
    }
    SUBCASE("zero operator") {
        CHECK(modified_sff_norm_sq(ShapeOperator::diagonal(CurvatureVector::uniform(3, 0.0)), 2) == 0.0);
    }
    SUBCASE("sphere of radius R") {
        for (int n = 1; n <= 6; ++n) {
            for (int r = 1; r <= n; ++r) {
                const double radius = 1.7;
                const auto a = ShapeOperator::diagonal(CurvatureVector::uniform(static_cast<std::size_t>(n), 1.0 / radius));
                const double expected = r * oracle::binomial(n, r) * std::pow(radius, -(r + 1));
                CHECK(modified_sff_norm_sq(a, r) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
    SUBCASE("order out of range") {
        const auto a = ShapeOperator::diagonal(CurvatureVector::uniform(2, 1.0));
        CHECK_THROWS_AS((void)modified_sff_norm_sq(a, 0), DomainError);
        CHECK_THROWS_AS((void)modified_sff_norm_sq(a, 3), DomainError);
    }
}

TEST_CASE("trace identities") {
    const auto id = ShapeOperator::diagonal(CurvatureVector::uniform(3, 1.0));
    const auto fam = newton_family(id);
    CHECK(fam.P[1].trace() == doctest::Approx(6.0));
    CHECK((fam.P[1] * id.matrix()).trace() == doctest::Approx(6.0));
    CHECK(trace_identities(id, 2).max() <= 1e-14);
    CHECK(trace_identities(ShapeOperator::diagonal(CurvatureVector::uniform(3, 0.0)), 2).max() == 0.0);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 6;
        const ShapeOperator a(oracle::random_symmetric(rng, n, 2.0));
        for (int r = 1; r <= n; ++r) {
            CHECK(trace_identities(a, r).max() <= 1e-10);
        }
    }
}

TEST_CASE("Cauchy-Schwarz bound under positive curvatures") {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 6;
        std::vector<double> kv(static_cast<std::size_t>(n));
        for (auto& x : kv) {
            x = u(rng);
        }
        const ShapeOperator a(oracle::with_spectrum(rng, kv));
        for (int r = 1; r <= n; ++r) {
            const auto b = cauchy_schwarz_bound(a, r);
            CHECK(b.lhs <= b.rhs + 1e-10 * scale(a, r));
        }
    }
    const auto zero = cauchy_schwarz_bound(ShapeOperator::diagonal(CurvatureVector::uniform(2, 0.0)), 1);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
    const auto saddle = ShapeOperator::diagonal(CurvatureVector({-1.0, 2.0, 0.5}));
    CHECK_THROWS_AS((void)cauchy_schwarz_bound(saddle, 2), NotPsdError);
}

TEST_CASE("scalar outputs are invariant under a change of frame") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        const Matrix s = oracle::random_symmetric(rng, n, 1.0);
        const Matrix q = oracle::random_orthogonal(rng, n);
        const ShapeOperator a(s);
        const ShapeOperator b(q * s * q.transpose());
        const auto fa = newton_family(a);
        const auto fb = newton_family(b);
        for (int r = 1; r <= n; ++r) {
            CHECK(std::abs(fa.sigmas[static_cast<std::size_t>(r)] - fb.sigmas[static_cast<std::size_t>(r)]) <= 1e-10 * scale(a, r));
            CHECK(std::abs(modified_sff_norm_sq(a, r) - modified_sff_norm_sq(b, r)) <= 1e-10 * scale(a, r));
            const Matrix conj = q * fa.P[static_cast<std::size_t>(r)] * q.transpose();
            CHECK((conj - fb.P[static_cast<std::size_t>(r)]).norm() <= 1e-10 * scale(a, r));
        }
    }
}
