#pragma once

// Atomic conformal/geodesic currents generated by discrete group orbits, the
// intersection form as a quotient pair count, and its windowed measure
// versions. Quotient counting uses the intersection-point-in-fundamental-
// domain criterion; elementary (cyclic) fixtures make the counts exact.

#include <functional>
#include <string>
#include <vector>

#include "h3geo/boundary.hpp"
#include "h3geo/estimate.hpp"
#include "h3geo/kinematic.hpp"
#include "h3geo/lorentz.hpp"
#include "h3geo/patch.hpp"

namespace h3geo {

struct GroupAction {
    std::vector<Isometry> generators;
    int word_bound = 6;
    std::function<bool(const LorentzVec&)> in_domain;  // fundamental domain
    double boundary_tol = 1e-9;

    // All distinct elements expressible as words of length <= bound in the
    // generators and their inverses (matrix dedup at 1e-8).
    std::vector<Isometry> enumerate_elements(int bound) const;
};

// Fundamental slab of a loxodromic translation along its axis:
// {x : lo <= B_eta(o, x) < lo + length}.
std::function<bool(const LorentzVec&)> busemann_slab(const LorentzVec& eta,
                                                     double lo, double length);

struct WeightedCircle {
    RoundCircle circle;
    double weight = 1.0;
};

struct WeightedPair {
    BoundaryPair pair;
    double weight = 1.0;
};

struct AtomicConformalCurrent {
    std::vector<WeightedCircle> seeds;  // one atom per coset representative
    std::vector<WeightedCircle> orbit(const std::vector<Isometry>& elements) const;
};

struct AtomicGeodesicCurrent {
    std::vector<WeightedPair> seeds;
    std::vector<WeightedPair> orbit(const std::vector<Isometry>& elements) const;
};

// Weighted count of linked orbit pairs whose intersection point lies in the
// fundamental domain. Throws NumericalError if the count is unstable under
// word_bound -> word_bound + 2, DegenerateError if a contributing pair sits
// inside the linking degeneracy band.
double intersection_form_atomic(const GroupAction& group,
                                const AtomicConformalCurrent& mu,
                                const AtomicGeodesicCurrent& lambda);

// Independent oracle: direct count of orbit translates of the seed disks
// crossing one fundamental segment of the quotient geodesic, [0, length)
// along the axis.
struct QuotientSurface {
    std::vector<RoundCircle> coset_planes;  // one per coset of the stabilizer
};

struct QuotientCurve {
    GeodesicLine axis;
    double translation_length = 1.0;
    // Start of the fundamental segment along the axis; any start gives the
    // same quotient count, an offset keeps crossings away from the ends.
    double segment_start = -0.5;
};

int geometric_intersection_oracle(const QuotientSurface& surface,
                                  const QuotientCurve& curve,
                                  const GroupAction& group);

// Measure of planes crossing a fundamental segment of a geodesic: the
// windowed length form, value pi * length. Segment is axis([t0, t0+len]).
Estimate intersection_nu_geodesic(const GeodesicLine& axis, double length,
                                  const PlaneSampler& planes, const McRun& run,
                                  double t0 = 0.0);

// (measure of geodesics hitting the patch, integral of crossing counts);
// equal for a totally geodesic patch, strictly ordered for a bent one.
EstimatePair intersection_plane_liouville(const SurfacePatch& patch,
                                          const GeodesicSampler& geodesics,
                                          const McRun& run);

struct WindowedIntersection {
    Estimate double_integral;  // pair-sampled (plane, geodesic) linked count
    double reference = 0.0;    // 2 pi^2 * vol(Omega)
};

// Windowed pairing of the plane measure with the geodesic measure over a
// region: MC over independent (sigma, u) pairs counting linked pairs whose
// intersection point falls in Omega.
WindowedIntersection windowed_intersection_check(const Region& region,
                                                 double region_volume,
                                                 const PlaneSampler& planes,
                                                 const GeodesicSampler& geodesics,
                                                 const McRun& run);

// ---------------------------------------------------------------------------
// Fixture files: generator matrices in row-major decimal text plus seeds,
// domain, oracle data, and the expected count.

struct IntersectionFixture {
    std::string name;
    GroupAction group;
    AtomicConformalCurrent mu;
    AtomicGeodesicCurrent lambda;
    QuotientSurface surface;
    QuotientCurve curve;
    double expected = 0.0;
};

IntersectionFixture load_fixture(const std::string& path);

} // namespace h3geo
