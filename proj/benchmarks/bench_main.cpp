#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "newton_flow/catalog.hpp"
#include "newton_flow/flow.hpp"
#include "newton_flow/operators.hpp"
#include "newton_flow/symfun.hpp"

using namespace newton_flow;

namespace {

symfun::CurvatureVector random_curvatures(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> k(n);
    for (auto& x : k) {
        x = u(rng);
    }
    return symfun::CurvatureVector(std::move(k));
}

void BM_ElemSymAll(benchmark::State& state) {
    const auto k = random_curvatures(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(symfun::elem_sym_all(k));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ElemSymAll)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oNSquared);

void BM_NewtonFamily(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    symfun::Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = g(rng);
        }
    }
    const symfun::ShapeOperator s(0.5 * (m + m.transpose()));
    for (auto _ : state) {
        benchmark::DoNotOptimize(symfun::newton_family(s));
    }
}
BENCHMARK(BM_NewtonFamily)->DenseRange(2, 8, 2);

void BM_CurveStep(benchmark::State& state) {
    const auto polygon = flow::regular_polygon(1.0, static_cast<std::size_t>(state.range(0)));
    const double dt = flow::curve_stable_dt(polygon.vertices, 0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow::step_curve(polygon, dt));
    }
}
BENCHMARK(BM_CurveStep)->RangeMultiplier(4)->Range(64, 1024);

void BM_RevolutionStep(benchmark::State& state) {
    const flow::RevolutionState s{catalog::closed_sphere_profile(2.0, static_cast<std::size_t>(state.range(0))), 1, 0.0, 0};
    const int r = static_cast<int>(state.range(1));
    const double dt = flow::revolution_stable_dt(s.profile, 1, r, 0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow::step_revolution(s, r, dt));
    }
}
BENCHMARK(BM_RevolutionStep)->ArgsProduct({{64, 256, 1024}, {1, 2}});

void BM_SupportIdentity(benchmark::State& state) {
    const auto surface = operators::DiscreteSurface::from_model(catalog::EllipsoidRev{}, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(operators::support_identity_residual(surface, 2));
    }
}
BENCHMARK(BM_SupportIdentity)->RangeMultiplier(2)->Range(64, 512);

}  // namespace

BENCHMARK_MAIN();
