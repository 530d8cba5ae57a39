#include <benchmark/benchmark.h>

#include "h3geo/conjugacy.hpp"
#include "h3geo/metrics.hpp"

using namespace h3geo;

namespace {

ConformalMetric bump() {
    return ConformalMetric::with_bumps({Bump{origin_point(), 1.2, 0.08}});
}

FlowState unit_state(const ConformalMetric& g) {
    FlowState s;
    s.x = {0.1, 0.05, -0.04};
    s.u = scale3(normalized3(Vec3{-0.3, 1.0, 0.25}),
                 std::exp(-g.psi_chart(s.x)));
    return s;
}

} // namespace

static void FlowUnitTime(benchmark::State& state) {
    const ConformalMetric g = bump();
    const FlowState s = unit_state(g);
    FlowOptions opts;
    opts.dt = 1e-3;
    opts.check_every = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow(g, s, 1.0, opts));
    }
}
BENCHMARK(FlowUnitTime);

static void TraceThroughBump(benchmark::State& state) {
    const ConformalMetric g = bump();
    const FlowState s = unit_state(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_geodesic(g, s));
    }
}
BENCHMARK(TraceThroughBump);

static void ConjugacyImage(benchmark::State& state) {
    const ConformalMetric g = bump();
    const FlowState s = unit_state(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chi(g, s));
    }
}
BENCHMARK(ConjugacyImage);

static void PureRayTrace(benchmark::State& state) {
    const ConformalMetric gbar;
    const FlowState s = unit_state(gbar);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_geodesic(gbar, s));
    }
}
BENCHMARK(PureRayTrace);
