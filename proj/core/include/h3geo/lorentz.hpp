#pragma once

// Hyperboloid model of H^3 in Minkowski R^{3,1}, signature (-,+,+,+).
// Points are unit timelike vectors (x0 > 0), boundary points normalized null
// vectors with x0 = 1, plane normals unit spacelike vectors. The Poincare
// ball is a presentation chart only; all geometry happens on the quadrics.

#include <array>
#include <cmath>
#include <optional>

#include "h3geo/rng.hpp"

namespace h3geo {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
inline Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 add3(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 sub3(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 scale3(const Vec3& a, double s) {
    return {a[0] * s, a[1] * s, a[2] * s};
}
inline Vec3 normalized3(const Vec3& a) {
    const double n = norm3(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

struct LorentzVec {
    std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};

    LorentzVec() = default;
    LorentzVec(double t, double x, double y, double z) : v{t, x, y, z} {}
    LorentzVec(double t, const Vec3& s) : v{t, s[0], s[1], s[2]} {}

    double operator[](int i) const { return v[i]; }
    double& operator[](int i) { return v[i]; }

    Vec3 spatial() const { return {v[1], v[2], v[3]}; }

    LorentzVec operator+(const LorentzVec& o) const {
        return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2], v[3] + o.v[3]};
    }
    LorentzVec operator-(const LorentzVec& o) const {
        return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2], v[3] - o.v[3]};
    }
    LorentzVec operator*(double s) const {
        return {v[0] * s, v[1] * s, v[2] * s, v[3] * s};
    }
    LorentzVec operator-() const { return {-v[0], -v[1], -v[2], -v[3]}; }
};

// Minkowski form <x,y> = -x0 y0 + x1 y1 + x2 y2 + x3 y3.
inline double mdot(const LorentzVec& a, const LorentzVec& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline LorentzVec origin_point() { return {1.0, 0.0, 0.0, 0.0}; }

// Projections back onto the quadrics; applied after every isometry to stop
// floating-point drift.
LorentzVec normalize_point(const LorentzVec& x);
LorentzVec normalize_boundary(const LorentzVec& x);  // scales to x0 = 1, |u| = 1
LorentzVec normalize_normal(const LorentzVec& x);    // unit spacelike, sign as given
LorentzVec canonical_sign(const LorentzVec& x);      // first nonzero coordinate > 0

bool is_point(const LorentzVec& x, double tol = 1e-12);
bool is_boundary(const LorentzVec& x, double tol = 1e-12);
bool is_normal(const LorentzVec& x, double tol = 1e-12);

// Boundary point from a direction on S^2.
inline LorentzVec boundary_from_direction(const Vec3& u) {
    return LorentzVec{1.0, normalized3(u)};
}

// Hyperbolic distance; throws DomainError if -<p,q> < 1 - 1e-9.
double dist(const LorentzVec& p, const LorentzVec& q);

// Poincare ball <-> hyperboloid. Throws DomainError at |p| >= 1.
LorentzVec ball_to_hyperboloid(const Vec3& p);
Vec3 hyperboloid_to_ball(const LorentzVec& x);

// ---------------------------------------------------------------------------
// Isometries: 4x4 matrices in SO+(3,1), row-major.

struct Isometry {
    std::array<double, 16> m{};

    static Isometry identity();
    static Isometry boost_x(double rapidity);
    static Isometry boost_along(const Vec3& direction, double rapidity);
    static Isometry rotation(const Vec3& axis, double angle);

    double at(int r, int c) const { return m[4 * r + c]; }
    double& at(int r, int c) { return m[4 * r + c]; }

    LorentzVec operator()(const LorentzVec& x) const;  // raw matrix-vector
    Isometry operator*(const Isometry& o) const;
    Isometry inverse() const;  // eta * A^T * eta

    // max-abs entry of A^T eta A - eta
    double form_residual() const;
    // Minkowski Gram-Schmidt on the columns; used during orbit enumeration.
    void reorthonormalize();
};

// Class-preserving application with renormalization.
LorentzVec apply_point(const Isometry& A, const LorentzVec& x);
LorentzVec apply_boundary(const Isometry& A, const LorentzVec& x);
LorentzVec apply_normal(const Isometry& A, const LorentzVec& x);

// Random element of SO+(3,1): rotation * boost * rotation, rapidity uniform
// in [0, max_rapidity].
Isometry random_isometry(Philox& rng, double max_rapidity = 1.0);
Isometry random_rotation(Philox& rng);

// ---------------------------------------------------------------------------
// Complete geodesics. Semantically an unordered pair of distinct boundary
// points; the realized parametrization is oriented by argument order:
// point_at(t) -> eta as t -> +inf and -> xi as t -> -inf, unit speed.

struct GeodesicLine {
    LorentzVec xi, eta;  // normalized boundary points
    LorentzVec p, w;     // orthonormal frame: <p,p>=-1, <w,w>=1, <p,w>=0

    static GeodesicLine from_endpoints(const LorentzVec& xi, const LorentzVec& eta);

    LorentzVec point_at(double t) const {
        return p * std::cosh(t) + w * std::sinh(t);
    }
    LorentzVec tangent_at(double t) const {
        return p * std::sinh(t) + w * std::cosh(t);
    }

    // -<n_xi, n_eta>, strictly positive for distinct endpoints.
    double endpoint_gram() const { return -mdot(xi, eta); }

    // True if the two lines have the same endpoint set within tol (chordal).
    bool same_line(const GeodesicLine& o, double tol = 1e-8) const;
};

// Geodesic through a point with a unit tangent (both on the hyperboloid,
// <x,u> = 0, <u,u> = 1); forward endpoint is x + u.
GeodesicLine geodesic_from_state(const LorentzVec& x, const LorentzVec& u);

// Busemann function B_xi(x, y) = ln((-<x,n_xi>)/(-<y,n_xi>)) with n_xi the
// x0 = 1 normalization. Along a unit-speed ray toward xi, B_xi(g(0), g(t)) = +t.
double busemann(const LorentzVec& xi, const LorentzVec& x, const LorentzVec& y);

// Chordal distance between boundary points (Euclidean distance of the S^2
// directions).
double chordal(const LorentzVec& a, const LorentzVec& b);

// Orthonormal tangent frame at a point: three unit spacelike vectors
// orthogonal to x and to each other.
std::array<LorentzVec, 3> tangent_frame(const LorentzVec& x);

} // namespace h3geo
