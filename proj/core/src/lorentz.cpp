#include "h3geo/lorentz.hpp"

#include <algorithm>
#include <cmath>

#include "h3geo/errors.hpp"

namespace h3geo {

LorentzVec normalize_point(const LorentzVec& x) {
    const double q = -mdot(x, x);
    if (q <= 0.0) throw DomainError("normalize_point: vector is not timelike");
    LorentzVec y = x * (1.0 / std::sqrt(q));
    if (y[0] < 0.0) y = -y;
    return y;
}

LorentzVec normalize_boundary(const LorentzVec& x) {
    if (x[0] == 0.0) throw DomainError("normalize_boundary: zero time component");
    const Vec3 u = scale3(x.spatial(), 1.0 / x[0]);
    const double n = norm3(u);
    if (n == 0.0) throw DomainError("normalize_boundary: zero direction");
    return LorentzVec{1.0, scale3(u, 1.0 / n)};
}

LorentzVec normalize_normal(const LorentzVec& x) {
    const double q = mdot(x, x);
    if (q <= 0.0) throw DomainError("normalize_normal: vector is not spacelike");
    return x * (1.0 / std::sqrt(q));
}

LorentzVec canonical_sign(const LorentzVec& x) {
    for (int i = 0; i < 4; ++i) {
        if (std::abs(x[i]) > 1e-12) return x[i] > 0.0 ? x : -x;
    }
    return x;
}

bool is_point(const LorentzVec& x, double tol) {
    return std::abs(mdot(x, x) + 1.0) <= tol && x[0] > 0.0;
}

bool is_boundary(const LorentzVec& x, double tol) {
    return std::abs(mdot(x, x)) <= tol && std::abs(x[0] - 1.0) <= tol;
}

bool is_normal(const LorentzVec& x, double tol) {
    return std::abs(mdot(x, x) - 1.0) <= tol;
}

double dist(const LorentzVec& p, const LorentzVec& q) {
    const double c = -mdot(p, q);
    if (c < 1.0 - 1e-9) throw DomainError("dist: inputs are not points of H^3");
    return std::acosh(std::max(c, 1.0));
}

LorentzVec ball_to_hyperboloid(const Vec3& p) {
    const double s = dot3(p, p);
    if (s >= 1.0) throw DomainError("ball_to_hyperboloid: |p| >= 1");
    const double f = 1.0 / (1.0 - s);
    return {(1.0 + s) * f, scale3(p, 2.0 * f)};
}

Vec3 hyperboloid_to_ball(const LorentzVec& x) {
    return scale3(x.spatial(), 1.0 / (1.0 + x[0]));
}

// ---------------------------------------------------------------------------

Isometry Isometry::identity() {
    Isometry a;
    for (int i = 0; i < 4; ++i) a.at(i, i) = 1.0;
    return a;
}

Isometry Isometry::boost_x(double rapidity) {
    Isometry a = identity();
    const double c = std::cosh(rapidity), s = std::sinh(rapidity);
    a.at(0, 0) = c;
    a.at(0, 1) = s;
    a.at(1, 0) = s;
    a.at(1, 1) = c;
    return a;
}

Isometry Isometry::rotation(const Vec3& axis, double angle) {
    const Vec3 u = normalized3(axis);
    const double c = std::cos(angle), s = std::sin(angle);
    Isometry a;
    a.at(0, 0) = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double r = c * (i == j ? 1.0 : 0.0) + (1.0 - c) * u[i] * u[j];
            a.at(i + 1, j + 1) = r;
        }
    // + s * [u]_x
    a.at(1, 2) += -s * u[2];
    a.at(1, 3) += s * u[1];
    a.at(2, 1) += s * u[2];
    a.at(2, 3) += -s * u[0];
    a.at(3, 1) += -s * u[1];
    a.at(3, 2) += s * u[0];
    return a;
}

Isometry Isometry::boost_along(const Vec3& direction, double rapidity) {
    const Vec3 u = normalized3(direction);
    // Rotate e1 onto u, boost along e1, rotate back.
    const Vec3 e1{1.0, 0.0, 0.0};
    Vec3 axis = cross3(e1, u);
    const double c = std::clamp(dot3(e1, u), -1.0, 1.0);
    Isometry r = Isometry::identity();
    if (norm3(axis) > 1e-14) {
        r = rotation(axis, std::acos(c));
    } else if (c < 0.0) {
        r = rotation(Vec3{0.0, 0.0, 1.0}, 3.14159265358979323846);
    }
    return r * boost_x(rapidity) * r.inverse();
}

LorentzVec Isometry::operator()(const LorentzVec& x) const {
    LorentzVec y;
    for (int r = 0; r < 4; ++r) {
        double s = 0.0;
        for (int c = 0; c < 4; ++c) s += at(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

Isometry Isometry::operator*(const Isometry& o) const {
    Isometry out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += at(r, k) * o.at(k, c);
            out.at(r, c) = s;
        }
    return out;
}

Isometry Isometry::inverse() const {
    // A^{-1} = eta A^T eta, eta = diag(-1,1,1,1).
    Isometry out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const double sign = ((r == 0) != (c == 0)) ? -1.0 : 1.0;
            out.at(r, c) = sign * at(c, r);
        }
    return out;
}

double Isometry::form_residual() const {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double ek = (k == 0) ? -1.0 : 1.0;
                s += at(k, i) * ek * at(k, j);
            }
            const double target = (i == j) ? ((i == 0) ? -1.0 : 1.0) : 0.0;
            worst = std::max(worst, std::abs(s - target));
        }
    return worst;
}

void Isometry::reorthonormalize() {
    // Columns of A are the images of the standard frame; re-impose Minkowski
    // orthonormality column by column (timelike column first).
    LorentzVec col[4];
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) col[c][r] = at(r, c);

    col[0] = normalize_point(col[0]);
    for (int c = 1; c < 4; ++c) {
        LorentzVec x = col[c];
        x = x + col[0] * mdot(x, col[0]);  // remove timelike component
        for (int k = 1; k < c; ++k) x = x - col[k] * mdot(x, col[k]);
        col[c] = x * (1.0 / std::sqrt(mdot(x, x)));
    }
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) at(r, c) = col[c][r];
}

LorentzVec apply_point(const Isometry& A, const LorentzVec& x) {
    return normalize_point(A(x));
}

LorentzVec apply_boundary(const Isometry& A, const LorentzVec& x) {
    return normalize_boundary(A(x));
}

LorentzVec apply_normal(const Isometry& A, const LorentzVec& x) {
    return normalize_normal(A(x));
}

Isometry random_rotation(Philox& rng) {
    // Uniform SO(3) via a random unit quaternion.
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& qi : q) {
            qi = rng.normal();
            n2 += qi * qi;
        }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    const double a = q[0] / n, b = q[1] / n, c = q[2] / n, d = q[3] / n;
    Isometry r;
    r.at(0, 0) = 1.0;
    r.at(1, 1) = a * a + b * b - c * c - d * d;
    r.at(1, 2) = 2.0 * (b * c - a * d);
    r.at(1, 3) = 2.0 * (b * d + a * c);
    r.at(2, 1) = 2.0 * (b * c + a * d);
    r.at(2, 2) = a * a - b * b + c * c - d * d;
    r.at(2, 3) = 2.0 * (c * d - a * b);
    r.at(3, 1) = 2.0 * (b * d - a * c);
    r.at(3, 2) = 2.0 * (c * d + a * b);
    r.at(3, 3) = a * a - b * b - c * c + d * d;
    return r;
}

Isometry random_isometry(Philox& rng, double max_rapidity) {
    const double chi = rng.uniform(0.0, max_rapidity);
    return random_rotation(rng) * Isometry::boost_x(chi) * random_rotation(rng);
}

// ---------------------------------------------------------------------------

GeodesicLine GeodesicLine::from_endpoints(const LorentzVec& xi_in,
                                          const LorentzVec& eta_in) {
    GeodesicLine g;
    g.xi = normalize_boundary(xi_in);
    g.eta = normalize_boundary(eta_in);
    if (chordal(g.xi, g.eta) <= 1e-10)
        throw DegenerateError("GeodesicLine: coincident boundary points");
    const double s = -mdot(g.xi, g.eta);  // = 1 - u.w > 0
    const double inv = 1.0 / std::sqrt(2.0 * s);
    g.p = (g.xi + g.eta) * inv;
    g.w = (g.eta - g.xi) * inv;
    return g;
}

bool GeodesicLine::same_line(const GeodesicLine& o, double tol) const {
    const bool direct = chordal(xi, o.xi) <= tol && chordal(eta, o.eta) <= tol;
    const bool flipped = chordal(xi, o.eta) <= tol && chordal(eta, o.xi) <= tol;
    return direct || flipped;
}

GeodesicLine geodesic_from_state(const LorentzVec& x, const LorentzVec& u) {
    // x + u and x - u are null; they are the forward/backward endpoints.
    return GeodesicLine::from_endpoints(normalize_boundary(x - u),
                                        normalize_boundary(x + u));
}

double busemann(const LorentzVec& xi, const LorentzVec& x, const LorentzVec& y) {
    const LorentzVec n = normalize_boundary(xi);
    const double a = -mdot(x, n);
    const double b = -mdot(y, n);
    if (a <= 0.0 || b <= 0.0)
        throw DomainError("busemann: inputs are not interior points");
    return std::log(a / b);
}

double chordal(const LorentzVec& a, const LorentzVec& b) {
    const LorentzVec na = normalize_boundary(a), nb = normalize_boundary(b);
    return norm3(sub3(na.spatial(), nb.spatial()));
}

std::array<LorentzVec, 3> tangent_frame(const LorentzVec& x) {
    std::array<LorentzVec, 3> f;
    const LorentzVec seeds[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    int have = 0;
    for (const auto& s : seeds) {
        LorentzVec y = s + x * mdot(s, x);  // project out the point direction
        for (int k = 0; k < have; ++k) y = y - f[k] * mdot(y, f[k]);
        const double q = mdot(y, y);
        if (q > 1e-20) f[have++] = y * (1.0 / std::sqrt(q));
        if (have == 3) break;
    }
    if (have != 3) throw DomainError("tangent_frame: degenerate input");
    return f;
}

} // namespace h3geo
