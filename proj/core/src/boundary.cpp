#include "h3geo/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "h3geo/errors.hpp"

namespace h3geo {

RoundCircle RoundCircle::from_normal(const LorentzVec& v) {
    return RoundCircle{canonical_sign(normalize_normal(v))};
}

bool RoundCircle::contains_boundary_point(const LorentzVec& n, double tol) const {
    return std::abs(mdot(normalize_boundary(n), normal)) <= tol;
}

bool RoundCircle::same_circle(const RoundCircle& o, double tol) const {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(normal[i] - o.normal[i]));
    return d <= tol;
}

RoundCircle apply(const Isometry& A, const RoundCircle& c) {
    return RoundCircle::from_normal(A(c.normal));
}

RoundCircle circle_through(const LorentzVec& a, const LorentzVec& b,
                           const LorentzVec& c) {
    const LorentzVec n[3] = {normalize_boundary(a), normalize_boundary(b),
                             normalize_boundary(c)};
    // <n_i, v> = 0  <=>  (eta n_i) . v = 0 Euclidean; the solution is the
    // generalized cross product of the three row vectors.
    double r[3][4];
    for (int i = 0; i < 3; ++i) {
        r[i][0] = -n[i][0];
        for (int j = 1; j < 4; ++j) r[i][j] = n[i][j];
    }
    auto det3 = [&](int c0, int c1, int c2) {
        return r[0][c0] * (r[1][c1] * r[2][c2] - r[1][c2] * r[2][c1]) -
               r[0][c1] * (r[1][c0] * r[2][c2] - r[1][c2] * r[2][c0]) +
               r[0][c2] * (r[1][c0] * r[2][c1] - r[1][c1] * r[2][c0]);
    };
    // Cofactor expansion: v_k = (-1)^k det(minor without column k), with the
    // sign pattern chosen so r_i . v = 0 for each row.
    LorentzVec v;
    v[0] = -det3(1, 2, 3);
    v[1] = det3(0, 2, 3);
    v[2] = -det3(0, 1, 3);
    v[3] = det3(0, 1, 2);
    const double q = mdot(v, v);
    double scale = 0.0;
    for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(v[i]));
    if (scale < 1e-10 || q <= 1e-18)
        throw DegenerateError("circle_through: rank-deficient configuration");
    return RoundCircle::from_normal(v);
}

BoundaryPair BoundaryPair::make(const LorentzVec& a, const LorentzVec& b) {
    LorentzVec x = normalize_boundary(a), y = normalize_boundary(b);
    if (chordal(x, y) <= 1e-10)
        throw DegenerateError("BoundaryPair: coincident boundary points");
    // Lexicographic order on the S^2 direction fixes the representative.
    const Vec3 ux = x.spatial(), uy = y.spatial();
    bool swap = false;
    for (int i = 0; i < 3; ++i) {
        if (ux[i] < uy[i] - 1e-15) break;
        if (ux[i] > uy[i] + 1e-15) {
            swap = true;
            break;
        }
    }
    if (swap) std::swap(x, y);
    return BoundaryPair{x, y};
}

bool BoundaryPair::same_pair(const BoundaryPair& o, double tol) const {
    return (chordal(xi, o.xi) <= tol && chordal(eta, o.eta) <= tol) ||
           (chordal(xi, o.eta) <= tol && chordal(eta, o.xi) <= tol);
}

BoundaryPair apply(const Isometry& A, const BoundaryPair& u) {
    return BoundaryPair::make(A(u.xi), A(u.eta));
}

LinkResult linking(const RoundCircle& circle, const BoundaryPair& pair,
                   double band) {
    const double a = mdot(pair.xi, circle.normal);
    const double b = mdot(pair.eta, circle.normal);
    LinkResult out;
    out.degenerate = std::abs(a) <= band || std::abs(b) <= band;
    out.link = (!out.degenerate && a * b < 0.0) ? 1 : 0;
    return out;
}

std::optional<LorentzVec> geodesic_plane_intersection(const GeodesicLine& g,
                                                      const RoundCircle& circle) {
    const double alpha = mdot(g.xi, circle.normal);
    const double beta = mdot(g.eta, circle.normal);
    if (std::abs(alpha) <= kLinkingDegeneracyBand &&
        std::abs(beta) <= kLinkingDegeneracyBand)
        throw DegenerateError("geodesic_plane_intersection: line lies in the plane");
    if (alpha * beta >= 0.0) return std::nullopt;
    // x = a n_xi + b n_eta with a alpha + b beta = 0, <x,x> = -1, x0 > 0.
    const double a = std::abs(beta), b = std::abs(alpha);
    const double s = g.endpoint_gram();
    const double scale = 1.0 / std::sqrt(2.0 * a * b * s);
    LorentzVec x = (g.xi * a + g.eta * b) * scale;
    return normalize_point(x);
}

double dist_point_plane(const LorentzVec& x, const RoundCircle& circle) {
    return std::asinh(std::abs(mdot(x, circle.normal)));
}

bool line_crosses_plane(const GeodesicLine& g, const RoundCircle& circle) {
    // f(t) = <g(t), v> = A cosh t + B sinh t has a sign change iff |B| > |A|.
    const double A = mdot(g.p, circle.normal);
    const double B = mdot(g.w, circle.normal);
    return std::abs(B) > std::abs(A);
}

namespace {

// Exact spherical distance from a direction to a boundary circle: the circle
// sits at polar angle acos(v0/|vs|) around its axis, and the nearest point
// lies on the meridian through w.
double point_circle_distance(const Vec3& w, const RoundCircle& c) {
    const Vec3 vs = c.normal.spatial();
    const double axis_norm = norm3(vs);
    const double polar = std::acos(std::clamp(c.normal[0] / axis_norm, -1.0, 1.0));
    const double beta =
        std::acos(std::clamp(dot3(w, scale3(vs, 1.0 / axis_norm)), -1.0, 1.0));
    return std::abs(beta - polar);
}

} // namespace

double hausdorff_distance(const RoundCircle& a, const RoundCircle& b, int n) {
    if (n < 16) throw DomainError("hausdorff_distance: need n >= 16 samples");
    // Sampled points measured against the exact other circle: refining the
    // (nested) grid can only increase the value, monotonically approaching
    // the true Hausdorff distance from below.
    const PlaneFrame fa = PlaneFrame::build(a), fb = PlaneFrame::build(b);
    const double step = 2.0 * 3.14159265358979323846 / n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, point_circle_distance(fa.circle_direction(i * step), b));
        worst = std::max(worst, point_circle_distance(fb.circle_direction(i * step), a));
    }
    return worst;
}

PlaneFrame PlaneFrame::build(const RoundCircle& c) {
    PlaneFrame f;
    f.circle = c;
    const LorentzVec& v = c.normal;
    // v = (sinh t, cosh t * u) for the foot parameters (t, u).
    const double t = std::asinh(v[0]);
    const double ch = std::cosh(t);
    const Vec3 u = scale3(v.spatial(), 1.0 / ch);
    f.foot_distance = t;
    f.foot = LorentzVec{ch, scale3(u, std::sinh(t))};
    // Tangent frame: (0, a), (0, b) with {a, b, u} orthonormal in R^3.
    Vec3 seed{1.0, 0.0, 0.0};
    if (std::abs(dot3(seed, u)) > 0.9) seed = Vec3{0.0, 1.0, 0.0};
    const Vec3 a = normalized3(cross3(u, seed));
    const Vec3 b = cross3(u, a);
    f.e1 = LorentzVec{0.0, a};
    f.e2 = LorentzVec{0.0, b};
    return f;
}

Vec3 PlaneFrame::circle_direction(double phi) const {
    // Boundary circle: directions w on S^2 with w.(cosh t * u) = sinh t.
    const double ch = std::cosh(foot_distance);
    const double cos_polar = std::tanh(foot_distance);  // sinh t / cosh t
    const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
    const Vec3 u = scale3(circle.normal.spatial(), 1.0 / ch);
    const Vec3 a = e1.spatial(), b = e2.spatial();
    Vec3 w = scale3(u, cos_polar);
    w = add3(w, scale3(a, sin_polar * std::cos(phi)));
    w = add3(w, scale3(b, sin_polar * std::sin(phi)));
    return w;
}

std::optional<GeodesicLine> plane_plane_intersection(const RoundCircle& a,
                                                     const RoundCircle& b) {
    const double g = mdot(a.normal, b.normal);
    if (std::abs(g) >= 1.0 - 1e-12) return std::nullopt;
    // Orthogonal complement of span{v1, v2} has signature (-,+): project the
    // origin for the timelike leg, then any seed for the spacelike leg.
    const double det = 1.0 - g * g;
    auto project_out = [&](const LorentzVec& x) {
        const double c1 = (mdot(x, a.normal) - g * mdot(x, b.normal)) / det;
        const double c2 = (mdot(x, b.normal) - g * mdot(x, a.normal)) / det;
        return x - a.normal * c1 - b.normal * c2;
    };
    LorentzVec p = project_out(origin_point());
    p = normalize_point(p);
    LorentzVec w;
    double best = -1.0;
    const LorentzVec seeds[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (const auto& s : seeds) {
        LorentzVec y = project_out(s);
        y = y + p * mdot(y, p);
        const double q = mdot(y, y);
        if (q > best) {
            best = q;
            w = y;
        }
    }
    if (best <= 1e-18) return std::nullopt;
    w = w * (1.0 / std::sqrt(best));
    GeodesicLine line;
    line.p = p;
    line.w = w;
    line.xi = normalize_boundary(p - w);
    line.eta = normalize_boundary(p + w);
    return line;
}

std::optional<std::array<double, 2>> clip_interval_to_ball(const GeodesicLine& g,
                                                           const LorentzVec& center,
                                                           double radius) {
    // cosh dist(g(t), c) = A cosh t + B sinh t = m cosh(t - t0).
    const double A = -mdot(g.p, center);
    const double B = -mdot(g.w, center);
    const double m2 = A * A - B * B;
    if (m2 <= 0.0) return std::nullopt;  // not a point/line pairing in H^3
    const double m = std::sqrt(m2);
    const double reach = std::cosh(radius) / m;
    if (reach < 1.0) return std::nullopt;
    const double t0 = std::atanh(-B / A);
    const double h = std::acosh(reach);
    return std::array<double, 2>{t0 - h, t0 + h};
}

double clip_length_to_ball(const GeodesicLine& g, const LorentzVec& center,
                           double radius) {
    const auto iv = clip_interval_to_ball(g, center, radius);
    return iv ? (*iv)[1] - (*iv)[0] : 0.0;
}

} // namespace h3geo
