#include <doctest.h>

#include <cmath>

#include "h3geo/errors.hpp"
#include "h3geo/kinematic.hpp"

using namespace h3geo;

namespace {

constexpr double kPi = 3.14159265358979323846;

double ball_volume(double r) { return kPi * (std::sinh(2.0 * r) - 2.0 * r); }
double disk_area(double r) { return 2.0 * kPi * (std::cosh(r) - 1.0); }

// One shared pair of calibration constants for the whole suite.
const Calibration& cal() {
    static const Calibration c = [] {
        McRun run;
        run.n = 300000;
        run.seed = 555;
        Calibration out = calibrate_nu(run, 1.2, 1.0, 0.02);
        run.stream = 50;
        const Calibration liou = calibrate_liouville(run, 1.2, 1.0, 0.02);
        out.c1 = liou.c1;
        out.se_c1 = liou.se_c1;
        return out;
    }();
    return c;
}

bool close3(const Estimate& e, double target, double floor_rel = 0.0) {
    const double tol = std::max(3.0 * e.se, floor_rel * std::abs(target));
    return std::abs(e.value - target) <= tol;
}

} // namespace

TEST_CASE("calibration of the plane measure") {
    const Calibration& c = cal();
    CHECK(c.c0 > 0.0);
    CHECK(c.se_c0 / c.c0 < 0.02);

    // Re-calibrating with a length-2 segment gives the same constant.
    McRun run;
    run.n = 300000;
    run.seed = 556;
    const Calibration c2 = calibrate_nu(run, 1.6, 2.0, 0.02);
    CHECK(std::abs(c2.c0 - c.c0) / c.c0 < 0.01);
}

TEST_CASE("crofton length of the calibration segment and a translate") {
    const PlaneSampler planes(1.2, cal().c0);
    McRun run;
    run.n = 400000;
    run.seed = 557;
    const Estimate len = crofton_length(axis_segment(1.0), planes, run);
    CHECK(len.value == doctest::Approx(1.0).epsilon(0.01));

    // Isometric translate, evaluated in a larger window.
    const Isometry shift = Isometry::boost_x(0.5) * Isometry::rotation({0, 0, 1}, 0.7);
    std::vector<LorentzVec> moved;
    for (const auto& p : axis_segment(1.0)) moved.push_back(apply_point(shift, p));
    const PlaneSampler wide(1.8, cal().c0);
    const Estimate len2 = crofton_length(moved, wide, run);
    CHECK(len2.value == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("crofton length: empty curve and window violation") {
    const PlaneSampler planes(1.2, cal().c0);
    McRun run;
    run.n = 1000;
    const Estimate zero = crofton_length({}, planes, run);
    CHECK(zero.value == 0.0);
    CHECK_THROWS_AS(crofton_length(axis_segment(3.0), planes, run), WindowError);
}

TEST_CASE("crofton length of a hyperbolic circle") {
    // Circle of radius 1 inside the equatorial plane, polyline approximation.
    std::vector<LorentzVec> pts;
    const int k = 512;
    for (int i = 0; i <= k; ++i) {
        const double phi = 2.0 * kPi * i / k;
        pts.push_back(LorentzVec{std::cosh(1.0), std::sinh(1.0) * std::cos(phi),
                                 std::sinh(1.0) * std::sin(phi), 0.0});
    }
    const PlaneSampler planes(1.3, cal().c0);
    McRun run;
    run.n = 400000;
    run.seed = 558;
    const Estimate len = crofton_length(pts, planes, run);
    CHECK(len.value == doctest::Approx(2.0 * kPi * std::sinh(1.0)).epsilon(0.02));
}

TEST_CASE("planes cross a geodesic segment at most once") {
    const PlaneSampler planes(1.4, cal().c0);
    Philox rng(600, 0);
    // Three collinear points along the axis; crossing counts stay 0 or 1.
    const auto g = GeodesicLine::from_endpoints(LorentzVec{1, 0, 0, -1},
                                                LorentzVec{1, 0, 0, 1});
    const std::vector<LorentzVec> pts{g.point_at(-1.0), g.point_at(0.2),
                                      g.point_at(1.0)};
    for (int i = 0; i < 20000; ++i) {
        const RoundCircle s = planes.sample(rng);
        int k = 0;
        for (int j = 0; j + 1 < 3; ++j)
            if (mdot(pts[j], s.normal) * mdot(pts[j + 1], s.normal) < 0.0) ++k;
        CHECK(k <= 1);
    }
}

TEST_CASE("santalo volume of balls") {
    const PlaneSampler planes(1.2, cal().c0);
    McRun run;
    run.n = 100000;
    run.seed = 559;
    const Estimate vol =
        santalo_volume(ball_region(origin_point(), 1.0), planes, run, 64);
    CHECK(vol.value == doctest::Approx(ball_volume(1.0)).epsilon(0.02));

    const Region empty{[](const LorentzVec&) { return false; }, 0.5};
    const Estimate zero = santalo_volume(empty, planes, run, 32);
    CHECK(zero.value == 0.0);

    // Isometry invariance: translated ball, wider window.
    const LorentzVec center = apply_point(Isometry::boost_x(0.4), origin_point());
    const PlaneSampler wide(1.6, cal().c0);
    const Estimate vol2 = santalo_volume(ball_region(center, 1.0), wide, run, 64);
    CHECK(vol2.value == doctest::Approx(ball_volume(1.0)).epsilon(0.03));
}

TEST_CASE("santalo area of a geodesic disk, zero patch, additivity") {
    const PlaneSampler planes(1.2, cal().c0);
    McRun run;
    run.n = 200000;
    run.seed = 560;
    const DiskPatch disk = equatorial_disk(1.0);
    const Estimate area = santalo_area(disk, planes, run);
    CHECK(area.value == doctest::Approx(disk_area(1.0)).epsilon(0.02));

    const UnionPatch nothing;
    CHECK(santalo_area(nothing, planes, run).value == 0.0);

    // Two disjoint congruent disks double the estimate.
    const Isometry shift = Isometry::boost_along({0.0, 0.0, 1.0}, 2.2);
    const RoundCircle plane2 = apply(shift, disk.plane());
    const LorentzVec center2 = apply_point(shift, disk.center());
    UnionPatch both;
    both.add(std::make_shared<DiskPatch>(disk.plane(), disk.center(), 1.0));
    both.add(std::make_shared<DiskPatch>(plane2, center2, 1.0));
    const PlaneSampler wide(3.4, cal().c0);
    run.n = 400000;
    const Estimate doubled = santalo_area(both, wide, run);
    CHECK(doubled.value == doctest::Approx(2.0 * disk_area(1.0)).epsilon(0.03));
}

TEST_CASE("triangulated disk area agrees through the same estimator") {
    const PlaneSampler planes(1.2, cal().c0);
    McRun run;
    run.n = 100000;
    run.seed = 561;
    const auto tri = make_triangulated_disk(
        RoundCircle::from_normal(LorentzVec{0, 0, 0, 1}), origin_point(), 1.0, 16, 32);
    const Estimate area = santalo_area(tri, planes, run);
    CHECK(area.value == doctest::Approx(disk_area(1.0)).epsilon(0.02));
}

TEST_CASE("liouville calibration cross-validates on a smaller disk") {
    const GeodesicSampler geods(1.2, cal().c1);
    McRun run;
    run.n = 400000;
    run.seed = 562;
    const DiskPatch small = equatorial_disk(0.5);
    const Estimate mass = mc_mean(geods.mass(), run.n, run.shards, run.seed,
                                  run.stream, [&](Philox& rng) {
                                      return static_cast<double>(
                                          small.crossings(geods.sample(rng)));
                                  });
    CHECK(mass.value == doctest::Approx(kPi * disk_area(0.5)).epsilon(0.02));
}

TEST_CASE("liouville constant is invariant under relocation of the disk") {
    McRun run;
    run.n = 400000;
    run.seed = 563;
    const Isometry shift = Isometry::boost_along({1.0, 1.0, 0.0}, 0.5);
    const DiskPatch disk = equatorial_disk(1.0);
    const RoundCircle plane2 = apply(shift, disk.plane());
    const LorentzVec center2 = apply_point(shift, disk.center());
    const DiskPatch moved(plane2, center2, 1.0);
    const GeodesicSampler geods(1.7, cal().c1);
    const Estimate mass = mc_mean(geods.mass(), run.n, run.shards, run.seed,
                                  run.stream, [&](Philox& rng) {
                                      return static_cast<double>(
                                          moved.crossings(geods.sample(rng)));
                                  });
    CHECK(mass.value == doctest::Approx(kPi * disk_area(1.0)).epsilon(0.012));
}

TEST_CASE("coarea identity") {
    const PlaneSampler planes(1.0, cal().c0);
    McRun run;
    run.n = 60000;
    run.seed = 564;

    // Plane-independent test function reduces to the volume identity.
    const Region ball = ball_region(origin_point(), 0.5);
    auto psi_ball = [&](const LorentzVec& x, const LorentzVec&) {
        return ball.contains(x) ? 1.0 : 0.0;
    };
    const auto [lhs, rhs] = coarea_check(psi_ball, 0.5, planes, run, 64);
    const double target = 2.0 * kPi * ball_volume(0.5);
    CHECK(close3(lhs, target, 0.01));
    CHECK(close3(rhs, target, 0.01));

    // Zero function gives exactly zero on both sides.
    const auto [z1, z2] = coarea_check(
        [](const LorentzVec&, const LorentzVec&) { return 0.0; }, 0.5, planes, run,
        32);
    CHECK(z1.value == 0.0);
    CHECK(z2.value == 0.0);

    // Plane-angle-weighted function: both routes agree within combined noise.
    auto psi_angle = [&](const LorentzVec& x, const LorentzVec& normal) {
        if (!ball.contains(x)) return 0.0;
        const double c = mdot(normal, LorentzVec{0, 0, 0, 1});
        return c * c;
    };
    const auto [a1, a2] = coarea_check(psi_angle, 0.5, planes, run, 64);
    const double combined = 3.0 * std::hypot(a1.se, a2.se) + 0.01 * std::abs(a1.value);
    CHECK(std::abs(a1.value - a2.value) <= combined);
}

TEST_CASE("weighted fiber crofton identity") {
    const GeodesicSampler geods(1.2, cal().c1);
    McRun run;
    run.n = 300000;
    run.seed = 565;
    const DiskPatch disk = equatorial_disk(1.0);

    const auto [l1, r1] = fiber_crofton_check(
        disk, [](const GeodesicLine&) { return 1.0; }, geods, run);
    const double target = kPi * disk_area(1.0);
    CHECK(close3(l1, target, 0.01));
    CHECK(close3(r1, target, 0.01));

    const auto [l0, r0] = fiber_crofton_check(
        disk, [](const GeodesicLine&) { return 0.0; }, geods, run);
    CHECK(l0.value == 0.0);
    CHECK(r0.value == 0.0);

    // Indicator of geodesics entering a half-space.
    const LorentzVec side{0.3, 1.1, 0.0, 0.2};
    const LorentzVec h = normalize_normal(side);
    auto crosses_halfspace = [h](const GeodesicLine& g) {
        return (mdot(g.xi, h) > 0.0 || mdot(g.eta, h) > 0.0) ? 1.0 : 0.0;
    };
    const auto [lh, rh] = fiber_crofton_check(disk, crosses_halfspace, geods, run);
    const double combined = 3.0 * std::hypot(lh.se, rh.se) + 0.01 * std::abs(lh.value);
    CHECK(std::abs(lh.value - rh.value) <= combined);
}

TEST_CASE("mobius invariance of the plane measure") {
    const PlaneSampler planes(1.5, cal().c0);
    McRun run;
    run.n = 200000;
    run.seed = 566;
    const LorentzVec k_center = ball_to_hyperboloid({0.15, -0.1, 0.2});
    const Estimate m1 = plane_mass_meeting_ball(k_center, 0.3, planes, run);
    const Isometry a = Isometry::rotation({0, 1, 0}, 1.1) * Isometry::boost_x(0.35);
    run.stream = 40;
    const Estimate m2 =
        plane_mass_meeting_ball(apply_point(a, k_center), 0.3, planes, run);
    CHECK(std::abs(m1.value - m2.value) <= 3.0 * std::hypot(m1.se, m2.se));
}

TEST_CASE("estimator variance shrinks like 1/n") {
    const PlaneSampler planes(1.2, cal().c0);
    McRun run;
    run.seed = 567;
    run.n = 200000;
    const Estimate e1 = crofton_length(axis_segment(1.0), planes, run);
    run.n = 400000;
    run.stream = 80;
    const Estimate e2 = crofton_length(axis_segment(1.0), planes, run);
    const double ratio = (e1.se * e1.se) / (e2.se * e2.se);
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}
