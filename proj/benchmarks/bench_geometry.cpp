#include <benchmark/benchmark.h>

#include "h3geo/boundary.hpp"
#include "h3geo/currents.hpp"

using namespace h3geo;

static void LinkingTest(benchmark::State& state) {
    Philox rng(2, 0);
    const RoundCircle c = RoundCircle::from_normal(LorentzVec{0.2, 1.0, 0.1, 0.3});
    const auto u = BoundaryPair::make(boundary_from_direction({0.1, 0.2, 0.97}),
                                      boundary_from_direction({-0.5, 0.3, -0.8}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(linking(c, u));
    }
}
BENCHMARK(LinkingTest);

static void GeodesicPlaneIntersection(benchmark::State& state) {
    const RoundCircle eq = RoundCircle::from_normal(LorentzVec{0, 0, 0, 1});
    const GeodesicLine axis = GeodesicLine::from_endpoints(
        LorentzVec{1, 0.1, 0.1, -0.99}, LorentzVec{1, -0.2, 0.1, 0.97});
    for (auto _ : state) {
        benchmark::DoNotOptimize(geodesic_plane_intersection(axis, eq));
    }
}
BENCHMARK(GeodesicPlaneIntersection);

static void CircleThrough(benchmark::State& state) {
    const LorentzVec a = boundary_from_direction({1.0, 0.1, 0.0});
    const LorentzVec b = boundary_from_direction({-0.4, 0.8, 0.4});
    const LorentzVec c = boundary_from_direction({0.0, -0.6, 0.8});
    for (auto _ : state) {
        benchmark::DoNotOptimize(circle_through(a, b, c));
    }
}
BENCHMARK(CircleThrough);

static void OrbitEnumeration(benchmark::State& state) {
    GroupAction group;
    Isometry h = Isometry::identity();
    h.at(0, 0) = std::cosh(1.0);
    h.at(0, 3) = std::sinh(1.0);
    h.at(3, 0) = std::sinh(1.0);
    h.at(3, 3) = std::cosh(1.0);
    group.generators.push_back(h);
    const int bound = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(group.enumerate_elements(bound));
    }
}
BENCHMARK(OrbitEnumeration)->Arg(4)->Arg(6)->Arg(8);
