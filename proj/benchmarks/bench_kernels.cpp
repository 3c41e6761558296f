#include <benchmark/benchmark.h>

#include "illss/coupling.hpp"
#include "illss/dynamics.hpp"
#include "illss/scenario.hpp"
#include "illss/solver.hpp"

using namespace illss;

namespace {

// Ellipse with two markers per grid cell on a box of side 16.
struct Setup {
    PlanPtr plan;
    Curve curve;
    CurveGeometry geom;

    explicit Setup(std::size_t m)
        : plan(make_plan(m, 16.0)), curve(redistribute(ellipse_curve(2.0, 1.0, m * 2))), geom(geometry(curve)) {}
};

void BM_Leray(benchmark::State& state) {
    const auto plan = make_plan(static_cast<std::size_t>(state.range(0)), 16.0);
    const auto f = gradient(random_band_limited(plan, 20, 1)) + rotated_gradient(random_band_limited(plan, 20, 2));
    for (auto _ : state) benchmark::DoNotOptimize(leray_project(f));
}

void BM_SpreadLineTension(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    const SpreadingKernel kernel;
    for (auto _ : state) benchmark::DoNotOptimize(spread_line_tension(s.curve, s.geom, s.plan, kernel));
}

void BM_Interpolate(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    const SpreadingKernel kernel;
    const auto u = surface_velocity(spread_line_tension(s.curve, s.geom, s.plan, kernel));
    for (auto _ : state) benchmark::DoNotOptimize(interpolate_velocity(u, s.curve, kernel));
}

void BM_Solve(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    const auto f = spread_line_tension(s.curve, s.geom, s.plan, SpreadingKernel{});
    for (auto _ : state) benchmark::DoNotOptimize(solve_surface_velocity(f));
}

// velocity only, without pressure recovery and residuals
void BM_Velocity(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    const auto f = spread_line_tension(s.curve, s.geom, s.plan, SpreadingKernel{});
    for (auto _ : state) benchmark::DoNotOptimize(surface_velocity(f));
}

void BM_Step(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    const VelocityPipeline pipe(s.plan, SpreadingKernel{});
    StepControl control;
    control.scheme = state.range(1) == 0 ? Scheme::RK4 : Scheme::Euler;
    control.stiffness = estimate_stiffness(pipe, s.curve);
    SimState init;
    init.curve = s.curve;
    for (auto _ : state) benchmark::DoNotOptimize(step(init, control, pipe));
}

}  // namespace

BENCHMARK(BM_Leray)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpreadLineTension)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Interpolate)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Solve)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Velocity)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Step)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
