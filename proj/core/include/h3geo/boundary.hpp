#pragma once

// Round circles of S^2 = totally geodesic planes of H^3, stored as a unit
// spacelike normal with canonical sign. Linking numbers, plane/geodesic
// incidence, plane frames, and Hausdorff distance between boundary circles.

#include <optional>
#include <vector>

#include "h3geo/lorentz.hpp"

namespace h3geo {

struct RoundCircle {
    LorentzVec normal;  // unit spacelike, canonical sign

    static RoundCircle from_normal(const LorentzVec& v);

    // Totally geodesic disk D = {x in H^3 : <x, normal> = 0}; its boundary is
    // the circle {null n : <n, normal> = 0}.
    bool contains_boundary_point(const LorentzVec& n, double tol = 1e-10) const;

    bool same_circle(const RoundCircle& o, double tol = 1e-8) const;
};

RoundCircle apply(const Isometry& A, const RoundCircle& c);

// The unique circle through three distinct boundary points; throws
// DegenerateError when the 3x4 system is rank-deficient (collinear data).
RoundCircle circle_through(const LorentzVec& a, const LorentzVec& b,
                           const LorentzVec& c);

struct BoundaryPair {
    LorentzVec xi, eta;  // normalized boundary points, canonically ordered

    static BoundaryPair make(const LorentzVec& a, const LorentzVec& b);
    GeodesicLine line() const { return GeodesicLine::from_endpoints(xi, eta); }
    bool same_pair(const BoundaryPair& o, double tol = 1e-8) const;
};

BoundaryPair apply(const Isometry& A, const BoundaryPair& u);

inline constexpr double kLinkingDegeneracyBand = 1e-9;

struct LinkResult {
    int link = 0;           // 0 or 1; endpoints on the circle count as 0
    bool degenerate = false;  // an endpoint within the degeneracy band
};

LinkResult linking(const RoundCircle& circle, const BoundaryPair& pair,
                   double band = kLinkingDegeneracyBand);

// Unique intersection point of a geodesic with a totally geodesic disk when
// the boundaries link; absent when they do not. Throws DegenerateError when
// both endpoints sit inside the degeneracy band (tangency/containment).
std::optional<LorentzVec> geodesic_plane_intersection(const GeodesicLine& g,
                                                      const RoundCircle& circle);

// arcsinh |<x, normal>|
double dist_point_plane(const LorentzVec& x, const RoundCircle& circle);

// Signed distance of the geodesic line to the plane is not needed; incidence
// via the frame: the line crosses the plane iff |<w,v>| > |<p,v>|.
bool line_crosses_plane(const GeodesicLine& g, const RoundCircle& circle);

// Two-sided sampled Hausdorff distance between boundary circles in the round
// S^2 metric, n >= 16 samples per circle on a deterministic uniform grid.
double hausdorff_distance(const RoundCircle& a, const RoundCircle& b, int n);

// ---------------------------------------------------------------------------
// In-plane frame of a totally geodesic disk: foot point (closest point of the
// plane to the origin o), two unit spacelike tangent directions, and the
// boundary-circle parametrization on S^2.

struct PlaneFrame {
    RoundCircle circle;
    LorentzVec foot;      // closest point of the plane to o
    LorentzVec e1, e2;    // tangent frame of the plane at foot
    double foot_distance;  // signed parameter t, |t| = dist(o, plane)

    static PlaneFrame build(const RoundCircle& c);

    // Polar point on the disk around the foot.
    LorentzVec disk_point(double rho, double theta) const {
        return foot * std::cosh(rho) +
               (e1 * std::cos(theta) + e2 * std::sin(theta)) * std::sinh(rho);
    }

    // Direction on S^2 of the boundary circle at angle phi.
    Vec3 circle_direction(double phi) const;
};

// Intersection geodesic of two transverse planes (|<v1,v2>| < 1); absent when
// disjoint or asymptotic.
std::optional<GeodesicLine> plane_plane_intersection(const RoundCircle& a,
                                                     const RoundCircle& b);

// Length of {t : cosh dist(g(t), center) <= cosh(radius)}; zero if empty.
double clip_length_to_ball(const GeodesicLine& g, const LorentzVec& center,
                           double radius);
// The clipped parameter interval itself, if nonempty.
std::optional<std::array<double, 2>> clip_interval_to_ball(const GeodesicLine& g,
                                                           const LorentzVec& center,
                                                           double radius);

} // namespace h3geo
