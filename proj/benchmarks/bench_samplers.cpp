#include <benchmark/benchmark.h>

#include "h3geo/kinematic.hpp"

using namespace h3geo;

static void PlaneSample(benchmark::State& state) {
    const PlaneSampler planes(1.2, 0.5);
    Philox rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(planes.sample(rng));
    }
}
BENCHMARK(PlaneSample);

static void GeodesicSample(benchmark::State& state) {
    const GeodesicSampler geodesics(1.2, 2.0);
    Philox rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geodesics.sample(rng));
    }
}
BENCHMARK(GeodesicSample);

static void SegmentCroftonSample(benchmark::State& state) {
    const PlaneSampler planes(1.2, 0.5);
    const auto segment = axis_segment(1.0);
    Philox rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) {
        const RoundCircle c = planes.sample(rng);
        acc += mdot(segment[0], c.normal) * mdot(segment[1], c.normal) < 0.0;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(SegmentCroftonSample);

static void DiskCrossingSample(benchmark::State& state) {
    const GeodesicSampler geodesics(1.2, 2.0);
    const DiskPatch disk = equatorial_disk(1.0);
    Philox rng(1, 0);
    int acc = 0;
    for (auto _ : state) {
        acc += disk.crossings(geodesics.sample(rng));
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(DiskCrossingSample);

static void DiskAreaQuadrature(benchmark::State& state) {
    const PlaneSampler planes(1.2, 0.5);
    const Region ball = ball_region(origin_point(), 1.0);
    const int m = static_cast<int>(state.range(0));
    Philox rng(1, 0);
    for (auto _ : state) {
        // One plane's clipped-area quadrature at resolution m.
        McRun run;
        run.n = 1;
        run.shards = 1;
        run.seed = rng.next_u32();
        benchmark::DoNotOptimize(santalo_volume(ball, planes, run, m));
    }
    state.SetComplexityN(m);
}
BENCHMARK(DiskAreaQuadrature)->RangeMultiplier(2)->Range(32, 256)->Complexity();
