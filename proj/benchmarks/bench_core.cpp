#include <benchmark/benchmark.h>

#include "bergman/bergman.hpp"

using namespace bergman;

static void BM_StructureConstants(benchmark::State& state) {
    for (auto _ : state) {
        double res = 0.0;
        benchmark::DoNotOptimize(structure_constants_from_matrices(generators(), &res));
    }
}
BENCHMARK(BM_StructureConstants);

static void BM_KAK(benchmark::State& state) {
    Rng rng(1);
    GroupElement g = exp_generator(random_algebra_element(rng, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(kak_decompose(g));
}
BENCHMARK(BM_KAK);

static void BM_Omega0Fock(benchmark::State& state) {
    RepConfig cfg{int(state.range(0)), 8, 300000};
    Rng rng(2);
    GroupElement g = random_compact(rng) * boost(0.3, 0.1) * random_compact(rng);
    omega0_fock(cfg, g);
    for (auto _ : state) benchmark::DoNotOptimize(omega0_fock(cfg, g));
}
BENCHMARK(BM_Omega0Fock)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_OmegaClosedForm(benchmark::State& state) {
    Rng rng(3);
    GroupElement g = exp_generator(random_algebra_element(rng, 0.5));
    CoherentParam x = sample_points(1)[0];
    for (auto _ : state) benchmark::DoNotOptimize(omega(g, x, 4));
}
BENCHMARK(BM_OmegaClosedForm);

static void BM_StarProduct(benchmark::State& state) {
    CoherentParam x = sample_points(1)[0];
    for (auto _ : state) benchmark::DoNotOptimize(star_product_coords(3, 14, x, 4));
}
BENCHMARK(BM_StarProduct);

static void BM_FullLaplacian(benchmark::State& state) {
    auto f = [](const Mat2& Z) { return std::exp(-(Z.adjoint() * Z).trace()); };
    Mat2 Z = Mat2::Zero();
    Z(0, 0) = 0.3;
    Z(1, 1) = 0.1;
    DomainPoint p(Z);
    for (auto _ : state) benchmark::DoNotOptimize(full_apply(5, f, p));
}
BENCHMARK(BM_FullLaplacian);

static void BM_MeasureNormalization(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mc_normalization(5, 100000, 7));
}
BENCHMARK(BM_MeasureNormalization)->Unit(benchmark::kMillisecond);

static void BM_TwoPoint(benchmark::State& state) {
    ModelParams p(SpectrumVariant::Substituted);
    p.m2 = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(two_point_check(p, 10000, 5));
}
BENCHMARK(BM_TwoPoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
