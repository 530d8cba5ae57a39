#pragma once

// Surface patches used by the Crofton-type integrators: totally geodesic
// disks and half-disks (closed-form chords and crossings), triangulated
// piecewise-geodesic patches, and disjoint unions (used to build bent
// surfaces with multiplicity > 1).

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "h3geo/boundary.hpp"
#include "h3geo/lorentz.hpp"

namespace h3geo {

class SurfacePatch {
public:
    virtual ~SurfacePatch() = default;

    virtual double area() const = 0;
    // Number of transverse intersection points with a complete geodesic.
    virtual int crossings(const GeodesicLine& g) const = 0;
    // Length of the intersection with a totally geodesic disk.
    virtual double chord_length(const RoundCircle& plane) const = 0;
    // All points lie within this hyperbolic distance of the origin.
    virtual double bounding_radius() const = 0;
};

// Geodesic disk of given radius around a center lying on the plane.
class DiskPatch : public SurfacePatch {
public:
    DiskPatch(const RoundCircle& plane, const LorentzVec& center, double radius);

    double area() const override;
    int crossings(const GeodesicLine& g) const override;
    double chord_length(const RoundCircle& plane) const override;
    double bounding_radius() const override;

    const RoundCircle& plane() const { return plane_; }
    const LorentzVec& center() const { return center_; }
    double radius() const { return radius_; }

private:
    RoundCircle plane_;
    LorentzVec center_;
    double radius_;
};

// Half of a geodesic disk: the side {<x, side> >= 0} of a diameter geodesic.
// The side normal must be tangent to the plane and vanish at the center.
class HalfDiskPatch : public SurfacePatch {
public:
    HalfDiskPatch(const RoundCircle& plane, const LorentzVec& center,
                  double radius, const LorentzVec& side);

    double area() const override;
    int crossings(const GeodesicLine& g) const override;
    double chord_length(const RoundCircle& plane) const override;
    double bounding_radius() const override;

private:
    RoundCircle plane_;
    LorentzVec center_;
    double radius_;
    LorentzVec side_;
};

// Piecewise-geodesic triangulation; every triangle is a totally geodesic
// piece, so chords and crossings are closed-form per triangle.
class TriangulatedPatch : public SurfacePatch {
public:
    TriangulatedPatch(std::vector<LorentzVec> vertices,
                      std::vector<std::array<int, 3>> triangles);

    double area() const override;
    int crossings(const GeodesicLine& g) const override;
    double chord_length(const RoundCircle& plane) const override;
    double bounding_radius() const override;

    std::size_t triangle_count() const { return tris_.size(); }

private:
    struct Tri {
        LorentzVec a, b, c;
        RoundCircle plane;
        // Edge side functions: x inside iff <x, s_i> >= 0 for all i.
        std::array<LorentzVec, 3> sides;
        double area;
    };
    std::vector<Tri> tris_;
    double area_ = 0.0;
    double bound_ = 0.0;
};

class UnionPatch : public SurfacePatch {
public:
    void add(std::shared_ptr<SurfacePatch> p) { parts_.push_back(std::move(p)); }

    double area() const override;
    int crossings(const GeodesicLine& g) const override;
    double chord_length(const RoundCircle& plane) const override;
    double bounding_radius() const override;

private:
    std::vector<std::shared_ptr<SurfacePatch>> parts_;
};

// Hyperbolic triangle area by angle defect, pi - (sum of interior angles).
double triangle_area(const LorentzVec& a, const LorentzVec& b, const LorentzVec& c);

// Fan/ring triangulation of a geodesic disk; used to cross-check the
// closed-form DiskPatch against the generic triangulated path.
TriangulatedPatch make_triangulated_disk(const RoundCircle& plane,
                                         const LorentzVec& center, double radius,
                                         int rings, int sectors);

// Radius-rho disk folded along a diameter by the given dihedral angle; same
// area as the flat disk but no longer totally geodesic. Built around the
// origin: flap 1 in the plane fixed by `plane`, flap 2 rotated by fold_angle
// about the diameter direction `hinge` (a tangent at the center).
UnionPatch make_folded_disk(const RoundCircle& plane, const LorentzVec& center,
                            double radius, const LorentzVec& hinge,
                            double fold_angle);

} // namespace h3geo
