#pragma once

// Calibrated samplers for the invariant measure on totally geodesic planes
// and for the Liouville measure on the space of complete geodesics, plus the
// Monte Carlo verifiers of the Crofton/Santalo integral identities.
//
// Planes are parametrized by (t, u): signed foot distance from the origin and
// foot direction on S^2, with invariant density cosh^2(t) dt dOmega(u) (the
// de Sitter volume in these coordinates) up to the calibrated constant c0.
// Geodesics carry the Mobius-invariant pair kernel dOmega dOmega/|xi-eta|^4
// up to the calibrated constant c1; the window {geodesics meeting B_R(o)} is
// exactly {chordal gap >= 2/cosh R}, so no rejection is ever needed.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "h3geo/boundary.hpp"
#include "h3geo/estimate.hpp"
#include "h3geo/lorentz.hpp"
#include "h3geo/patch.hpp"

namespace h3geo {

struct McRun {
    std::uint64_t n = 100000;
    int shards = 4;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;  // base stream id; shards use stream..stream+shards-1
};

class PlaneSampler {
public:
    PlaneSampler(double window_radius, double c0, double margin = 0.1);

    double window_radius() const { return radius_; }
    double margin() const { return margin_; }
    double c0() const { return c0_; }
    // Total measure of {planes meeting B_R(o)}.
    double mass() const;

    RoundCircle sample(Philox& rng) const;

    // Throws WindowError unless the object's bounding radius fits inside
    // window_radius - margin.
    void require_inside(double object_radius) const;

private:
    double radius_;
    double margin_;
    double c0_;
    double half_mass_;  // integral of cosh^2 over [0, R]
};

class GeodesicSampler {
public:
    GeodesicSampler(double window_radius, double c1, double margin = 0.1);

    double window_radius() const { return radius_; }
    double margin() const { return margin_; }
    double c1() const { return c1_; }
    double mass() const;  // c1 * pi^2 * sinh^2(R)

    GeodesicLine sample(Philox& rng) const;

    void require_inside(double object_radius) const;

private:
    double radius_;
    double margin_;
    double c1_;
    double w_min_;  // sin^2(half separation angle) at the window boundary
};

struct Calibration {
    double c0 = 0.0;
    double se_c0 = 0.0;
    double c1 = 0.0;
    double se_c1 = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
};

// Fix c0 so that the plane-measure Crofton count over a unit geodesic
// segment equals pi. Throws CalibrationError if the relative standard error
// exceeds max_rel_se.
Calibration calibrate_nu(const McRun& run, double window_radius = 1.2,
                         double segment_length = 1.0, double max_rel_se = 0.005);

// Fix c1 so that the geodesic-measure Crofton count over the radius-1
// geodesic disk equals pi * area(disk).
Calibration calibrate_liouville(const McRun& run, double window_radius = 1.2,
                                double disk_radius = 1.0,
                                double max_rel_se = 0.005);

// Calibration fixture I/O ("key = value" decimal text, keys c0, c1, seed, n,
// se_c0, se_c1).
Calibration load_calibration(const std::string& path);
void save_calibration(const Calibration& cal, const std::string& path);

// Region given by an indicator plus a bounding radius around the origin.
struct Region {
    std::function<bool(const LorentzVec&)> contains;
    double bounding_radius = 0.0;
};

Region ball_region(const LorentzVec& center, double radius);

// Length of a curve (polyline of H^3 points, consecutive points joined by
// geodesic segments) from plane-crossing counts: (1/pi) * nu-integral of
// #(D(sigma) cap c).
Estimate crofton_length(const std::vector<LorentzVec>& polyline,
                        const PlaneSampler& planes, const McRun& run);

// Volume of a region from disk areas: (1/2pi) * nu-integral of
// area(D(sigma) cap Omega), disk areas by m x m polar quadrature.
Estimate santalo_volume(const Region& region, const PlaneSampler& planes,
                        const McRun& run, int quadrature = 256);

// Area of a surface patch from chord lengths: (2/pi^2) * nu-integral of
// length(D(sigma) cap S).
Estimate santalo_area(const SurfacePatch& patch, const PlaneSampler& planes,
                      const McRun& run);

// Both sides of the Grassmannian coarea identity for a compactly supported
// test function psi(x, unit plane normal at x): the direct integral over the
// plane bundle (fiber mass 2pi) versus the iterated disk integral.
std::pair<Estimate, Estimate> coarea_check(
    const std::function<double(const LorentzVec&, const LorentzVec&)>& psi,
    double support_radius, const PlaneSampler& planes, const McRun& run,
    int quadrature = 256);

// Both sides of the weighted-fiber Crofton identity on a geodesic disk:
// integral of #(gamma cap Sigma) F(gamma) against the geodesic measure vs
// (1/2) * area-integral over the fiber of F |<v, N>|.
std::pair<Estimate, Estimate> fiber_crofton_check(
    const DiskPatch& patch,
    const std::function<double(const GeodesicLine&)>& weight,
    const GeodesicSampler& geodesics, const McRun& run);

// Measure of {planes whose disk meets a ball}; used by invariance tests.
Estimate plane_mass_meeting_ball(const LorentzVec& center, double radius,
                                 const PlaneSampler& planes, const McRun& run);

// Default segment/disk fixtures used by the calibrations.
std::vector<LorentzVec> axis_segment(double length);  // centered on o, e3 axis
DiskPatch equatorial_disk(double radius);             // plane x3 = 0 at o

} // namespace h3geo
