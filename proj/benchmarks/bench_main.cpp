#include "osbk/conic.hpp"
#include "osbk/correspondence.hpp"
#include "osbk/integrability.hpp"
#include "osbk/random.hpp"
#include "osbk/variational.hpp"
#include "osbk/wall.hpp"

#include <benchmark/benchmark.h>

using namespace osbk;

static void BM_StepCurve(benchmark::State& state)
{
    const auto curve = TrigImmersion::chebyshev();
    PhaseVector z(4);
    z << 1.7, -0.4, 0.9, 1.3;
    for (auto _ : state) benchmark::DoNotOptimize(step_curve(curve, z));
}
BENCHMARK(BM_StepCurve);

static void BM_StepEllipsoid(benchmark::State& state)
{
    const SymplecticEllipsoid e{{0.7, 1.8, 2.5}};
    PhaseVector z(6);
    z << 1.5, 0.2, -0.4, 1.9, 0.3, 2.0;
    for (auto _ : state) {
        z = step_ellipsoid(e, z, Branch::Plus).partner;
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_StepEllipsoid);

static void BM_ConicIntersections(benchmark::State& state)
{
    const ConicPair p = ConicPair::from_cubic({1, 0, 0, 1});
    for (auto _ : state) benchmark::DoNotOptimize(conic_intersections(p, 0.7, -0.3));
}
BENCHMARK(BM_ConicIntersections);

static void BM_GradGenFun(benchmark::State& state)
{
    const ManifoldSpec spec(TrigImmersion::symplectic_torus());
    std::vector<ParamPoint> u;
    Rng rng(1);
    for (int i = 0; i < state.range(0); ++i) u.push_back((ParamPoint(2) << rng.uniform(0, 6), rng.uniform(0, 6)).finished());
    const auto poly = make_polygon(spec, u);
    for (auto _ : state) benchmark::DoNotOptimize(grad_gen_fun(spec, poly, OrbitKind::Periodic));
}
BENCHMARK(BM_GradGenFun)->Arg(3)->Arg(9)->Arg(27);

static void BM_PeriodicSearch(benchmark::State& state)
{
    const ManifoldSpec spec(TrigImmersion::chebyshev());
    SearchOptions o;
    o.starts = 16;
    for (auto _ : state) benchmark::DoNotOptimize(find_periodic_orbit(spec, static_cast<int>(state.range(0)), o));
}
BENCHMARK(BM_PeriodicSearch)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_ClassifyCubic(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(classify_cubic_table({1, 0, 0, 1}, 1000, 1));
}
BENCHMARK(BM_ClassifyCubic)->Unit(benchmark::kMillisecond);

static void BM_MultiplicityCurve(benchmark::State& state)
{
    const auto curve = TrigImmersion::chebyshev();
    const PhaseVector p = curve.curve_derivative(0.3, 0) - 0.01 * curve.curve_derivative(0.3, 2);
    for (auto _ : state) benchmark::DoNotOptimize(multiplicity_curve(curve, p));
}
BENCHMARK(BM_MultiplicityCurve);

BENCHMARK_MAIN();
