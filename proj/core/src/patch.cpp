#include "h3geo/patch.hpp"

#include <algorithm>
#include <cmath>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Vector Minkowski-orthogonal to three independent vectors (cofactor
// expansion of the 3x4 system (eta r_i) . v = 0).
LorentzVec mink_complement(const LorentzVec& a, const LorentzVec& b,
                           const LorentzVec& c) {
    double r[3][4];
    const LorentzVec* rows[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
        r[i][0] = -(*rows[i])[0];
        for (int j = 1; j < 4; ++j) r[i][j] = (*rows[i])[j];
    }
    auto det3 = [&](int c0, int c1, int c2) {
        return r[0][c0] * (r[1][c1] * r[2][c2] - r[1][c2] * r[2][c1]) -
               r[0][c1] * (r[1][c0] * r[2][c2] - r[1][c2] * r[2][c0]) +
               r[0][c2] * (r[1][c0] * r[2][c1] - r[1][c1] * r[2][c0]);
    };
    LorentzVec v;
    v[0] = -det3(1, 2, 3);
    v[1] = det3(0, 2, 3);
    v[2] = -det3(0, 1, 3);
    v[3] = det3(0, 1, 2);
    return v;
}

RoundCircle plane_through_points(const LorentzVec& a, const LorentzVec& b,
                                 const LorentzVec& c) {
    const LorentzVec v = mink_complement(a, b, c);
    if (mdot(v, v) <= 1e-18)
        throw DegenerateError("plane_through_points: collinear points");
    return RoundCircle::from_normal(v);
}

// Parameter set {t : A cosh t + B sinh t >= 0} intersected with [lo, hi].
void clip_halfspace(double A, double B, double& lo, double& hi) {
    if (std::abs(A) >= std::abs(B)) {
        if (A < 0.0) lo = hi = 0.0;  // empty (A >= |B| >= 0 keeps everything)
        return;
    }
    const double tz = std::atanh(-A / B);
    if (B > 0.0)
        lo = std::max(lo, tz);
    else
        hi = std::min(hi, tz);
}

// Unit tangent at a pointing toward b.
LorentzVec unit_tangent(const LorentzVec& a, const LorentzVec& b) {
    const double kappa = -mdot(a, b);  // cosh of the distance
    LorentzVec t = b - a * kappa;
    return t * (1.0 / std::sqrt(std::max(mdot(t, t), 1e-300)));
}

} // namespace

// ---------------------------------------------------------------------------

DiskPatch::DiskPatch(const RoundCircle& plane, const LorentzVec& center,
                     double radius)
    : plane_(plane), center_(normalize_point(center)), radius_(radius) {
    if (radius <= 0.0) throw DomainError("DiskPatch: radius must be positive");
    if (std::abs(mdot(center_, plane_.normal)) > 1e-9)
        throw DomainError("DiskPatch: center does not lie on the plane");
}

double DiskPatch::area() const { return 2.0 * kPi * (std::cosh(radius_) - 1.0); }

int DiskPatch::crossings(const GeodesicLine& g) const {
    const auto x = geodesic_plane_intersection(g, plane_);
    if (!x) return 0;
    return -mdot(*x, center_) <= std::cosh(radius_) ? 1 : 0;
}

double DiskPatch::chord_length(const RoundCircle& plane) const {
    const auto line = plane_plane_intersection(plane_, plane);
    if (!line) return 0.0;
    return clip_length_to_ball(*line, center_, radius_);
}

double DiskPatch::bounding_radius() const {
    return dist(origin_point(), center_) + radius_;
}

// ---------------------------------------------------------------------------

HalfDiskPatch::HalfDiskPatch(const RoundCircle& plane, const LorentzVec& center,
                             double radius, const LorentzVec& side)
    : plane_(plane), center_(normalize_point(center)), radius_(radius),
      side_(normalize_normal(side)) {
    if (radius <= 0.0) throw DomainError("HalfDiskPatch: radius must be positive");
    if (std::abs(mdot(center_, plane_.normal)) > 1e-9 ||
        std::abs(mdot(center_, side_)) > 1e-9 ||
        std::abs(mdot(side_, plane_.normal)) > 1e-9)
        throw DomainError("HalfDiskPatch: side must be an in-plane diameter normal");
}

double HalfDiskPatch::area() const { return kPi * (std::cosh(radius_) - 1.0); }

int HalfDiskPatch::crossings(const GeodesicLine& g) const {
    const auto x = geodesic_plane_intersection(g, plane_);
    if (!x) return 0;
    if (-mdot(*x, center_) > std::cosh(radius_)) return 0;
    return mdot(*x, side_) >= 0.0 ? 1 : 0;
}

double HalfDiskPatch::chord_length(const RoundCircle& plane) const {
    const auto line = plane_plane_intersection(plane_, plane);
    if (!line) return 0.0;
    const auto iv = clip_interval_to_ball(*line, center_, radius_);
    if (!iv) return 0.0;
    double lo = (*iv)[0], hi = (*iv)[1];
    clip_halfspace(mdot(line->p, side_), mdot(line->w, side_), lo, hi);
    return std::max(0.0, hi - lo);
}

double HalfDiskPatch::bounding_radius() const {
    return dist(origin_point(), center_) + radius_;
}

// ---------------------------------------------------------------------------

double triangle_area(const LorentzVec& a, const LorentzVec& b,
                     const LorentzVec& c) {
    auto angle = [](const LorentzVec& at, const LorentzVec& to1,
                    const LorentzVec& to2) {
        const double cosang =
            std::clamp(mdot(unit_tangent(at, to1), unit_tangent(at, to2)), -1.0, 1.0);
        return std::acos(cosang);
    };
    const double defect = kPi - angle(a, b, c) - angle(b, a, c) - angle(c, a, b);
    return std::max(0.0, defect);
}

TriangulatedPatch::TriangulatedPatch(std::vector<LorentzVec> vertices,
                                     std::vector<std::array<int, 3>> triangles) {
    for (auto& v : vertices) v = normalize_point(v);
    for (const auto& t : triangles) {
        Tri tri;
        tri.a = vertices[t[0]];
        tri.b = vertices[t[1]];
        tri.c = vertices[t[2]];
        tri.plane = plane_through_points(tri.a, tri.b, tri.c);
        const LorentzVec* vs[3] = {&tri.a, &tri.b, &tri.c};
        for (int e = 0; e < 3; ++e) {
            const LorentzVec& p = *vs[e];
            const LorentzVec& q = *vs[(e + 1) % 3];
            const LorentzVec& opp = *vs[(e + 2) % 3];
            LorentzVec s = mink_complement(p, q, tri.plane.normal);
            s = normalize_normal(s);
            if (mdot(opp, s) < 0.0) s = -s;
            tri.sides[e] = s;
        }
        tri.area = triangle_area(tri.a, tri.b, tri.c);
        area_ += tri.area;
        tris_.push_back(tri);
    }
    for (const auto& v : vertices)
        bound_ = std::max(bound_, dist(origin_point(), v));
}

double TriangulatedPatch::area() const { return area_; }

int TriangulatedPatch::crossings(const GeodesicLine& g) const {
    int n = 0;
    for (const auto& tri : tris_) {
        std::optional<LorentzVec> x;
        try {
            x = geodesic_plane_intersection(g, tri.plane);
        } catch (const DegenerateError&) {
            continue;  // line inside the triangle plane: measure zero, skip
        }
        if (!x) continue;
        bool inside = true;
        for (const auto& s : tri.sides)
            if (mdot(*x, s) < 0.0) {
                inside = false;
                break;
            }
        if (inside) ++n;
    }
    return n;
}

double TriangulatedPatch::chord_length(const RoundCircle& plane) const {
    double total = 0.0;
    for (const auto& tri : tris_) {
        const auto line = plane_plane_intersection(tri.plane, plane);
        if (!line) continue;
        double lo = -50.0, hi = 50.0;  // the side clips bound the segment
        for (const auto& s : tri.sides) {
            clip_halfspace(mdot(line->p, s), mdot(line->w, s), lo, hi);
            if (lo >= hi) break;
        }
        if (hi > lo) total += hi - lo;
    }
    return total;
}

double TriangulatedPatch::bounding_radius() const { return bound_; }

// ---------------------------------------------------------------------------

double UnionPatch::area() const {
    double a = 0.0;
    for (const auto& p : parts_) a += p->area();
    return a;
}

int UnionPatch::crossings(const GeodesicLine& g) const {
    int n = 0;
    for (const auto& p : parts_) n += p->crossings(g);
    return n;
}

double UnionPatch::chord_length(const RoundCircle& plane) const {
    double l = 0.0;
    for (const auto& p : parts_) l += p->chord_length(plane);
    return l;
}

double UnionPatch::bounding_radius() const {
    double r = 0.0;
    for (const auto& p : parts_) r = std::max(r, p->bounding_radius());
    return r;
}

// ---------------------------------------------------------------------------

namespace {

// In-plane orthonormal tangent frame at a point of a plane.
std::array<LorentzVec, 2> in_plane_frame(const RoundCircle& plane,
                                         const LorentzVec& at) {
    std::array<LorentzVec, 2> f;
    int have = 0;
    const LorentzVec seeds[4] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
    for (const auto& s : seeds) {
        LorentzVec y = s + at * mdot(s, at);
        y = y - plane.normal * mdot(y, plane.normal);
        for (int k = 0; k < have; ++k) y = y - f[k] * mdot(y, f[k]);
        const double q = mdot(y, y);
        if (q > 1e-14) f[have++] = y * (1.0 / std::sqrt(q));
        if (have == 2) break;
    }
    if (have != 2) throw DomainError("in_plane_frame: degenerate configuration");
    return f;
}

} // namespace

TriangulatedPatch make_triangulated_disk(const RoundCircle& plane,
                                         const LorentzVec& center, double radius,
                                         int rings, int sectors) {
    const auto frame = in_plane_frame(plane, center);
    auto at = [&](double rho, double theta) {
        return center * std::cosh(rho) +
               (frame[0] * std::cos(theta) + frame[1] * std::sin(theta)) *
                   std::sinh(rho);
    };
    std::vector<LorentzVec> verts;
    std::vector<std::array<int, 3>> tris;
    verts.push_back(normalize_point(center));
    for (int r = 1; r <= rings; ++r) {
        const double rho = radius * r / rings;
        for (int s = 0; s < sectors; ++s)
            verts.push_back(normalize_point(at(rho, 2.0 * kPi * s / sectors)));
    }
    auto idx = [&](int r, int s) { return 1 + (r - 1) * sectors + (s % sectors); };
    for (int s = 0; s < sectors; ++s)
        tris.push_back({0, idx(1, s), idx(1, s + 1)});
    for (int r = 1; r < rings; ++r)
        for (int s = 0; s < sectors; ++s) {
            tris.push_back({idx(r, s), idx(r + 1, s), idx(r + 1, s + 1)});
            tris.push_back({idx(r, s), idx(r + 1, s + 1), idx(r, s + 1)});
        }
    return TriangulatedPatch(std::move(verts), std::move(tris));
}

UnionPatch make_folded_disk(const RoundCircle& plane, const LorentzVec& center,
                            double radius, const LorentzVec& hinge,
                            double fold_angle) {
    const LorentzVec c = normalize_point(center);
    LorentzVec h = hinge;
    h = h + c * mdot(h, c);
    h = h - plane.normal * mdot(h, plane.normal);
    h = normalize_normal(h);
    // In-plane normal of the hinge diameter; canonical sign so the first flap
    // always occupies the canonical positive side.
    LorentzVec s1 = canonical_sign(normalize_normal(mink_complement(c, h, plane.normal)));

    // Rotation about the hinge geodesic: fixes {c, h}, rotates (s1, normal).
    const double cs = std::cos(fold_angle), sn = std::sin(fold_angle);
    const LorentzVec from[4] = {c, h, s1, plane.normal};
    const LorentzVec to[4] = {c, h, s1 * cs + plane.normal * sn,
                              s1 * (-sn) + plane.normal * cs};
    Isometry rot;
    for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double eps = (k == 0) ? -1.0 : 1.0;  // from[0] is timelike
                const double etaf = (col == 0) ? -from[k][col] : from[k][col];
                acc += eps * to[k][r] * etaf;
            }
            rot.at(r, col) = acc;
        }

    UnionPatch out;
    out.add(std::make_shared<HalfDiskPatch>(plane, c, radius, s1));
    const RoundCircle plane2 = apply(rot, plane);
    const LorentzVec side2 = normalize_normal(rot(-s1));
    out.add(std::make_shared<HalfDiskPatch>(plane2, c, radius, side2));
    return out;
}

} // namespace h3geo
