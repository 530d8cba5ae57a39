#include "h3geo/kinematic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cosh2_integral(double r) {  // integral of cosh^2 over [0, r]
    return 0.5 * (r + std::sinh(r) * std::cosh(r));
}

// Invert q = cosh2_integral(t) / cosh2_integral(R): bracketed Newton, the
// plain iterate overflows cosh for wide windows.
double invert_cosh2_cdf(double q, double total, double radius) {
    const double target = q * total;
    double lo = 0.0, hi = radius, t = q * radius;
    for (int i = 0; i < 60; ++i) {
        const double f = cosh2_integral(t) - target;
        (f > 0.0 ? hi : lo) = t;
        const double df = std::cosh(t) * std::cosh(t);
        double next = t - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) < 1e-15) return next;
        t = next;
    }
    return t;
}

} // namespace

// ---------------------------------------------------------------------------

PlaneSampler::PlaneSampler(double window_radius, double c0, double margin)
    : radius_(window_radius), margin_(margin), c0_(c0),
      half_mass_(cosh2_integral(window_radius)) {
    if (window_radius <= 0.0 || c0 <= 0.0)
        throw DomainError("PlaneSampler: radius and c0 must be positive");
}

double PlaneSampler::mass() const { return c0_ * 4.0 * kPi * 2.0 * half_mass_; }

RoundCircle PlaneSampler::sample(Philox& rng) const {
    // |t| from density cosh^2 on [0, R], sign uniform, foot direction uniform.
    const double t0 = invert_cosh2_cdf(rng.u01(), half_mass_, radius_);
    const double t = rng.u01() < 0.5 ? -t0 : t0;
    const Vec3 u = rng.unit_sphere();
    // Normal of the plane orthogonal to the ray at parameter t.
    const LorentzVec v{std::sinh(t), scale3(u, std::cosh(t))};
    return RoundCircle::from_normal(v);
}

void PlaneSampler::require_inside(double object_radius) const {
    if (object_radius > radius_ - margin_)
        throw WindowError("object of radius " + std::to_string(object_radius) +
                          " does not fit in plane window " +
                          std::to_string(radius_) + " minus margin");
}

GeodesicSampler::GeodesicSampler(double window_radius, double c1, double margin)
    : radius_(window_radius), margin_(margin), c1_(c1) {
    if (window_radius <= 0.0 || c1 <= 0.0)
        throw DomainError("GeodesicSampler: radius and c1 must be positive");
    const double ch = std::cosh(window_radius);
    w_min_ = 1.0 / (ch * ch);
}

double GeodesicSampler::mass() const {
    const double sh = std::sinh(radius_);
    return c1_ * kPi * kPi * sh * sh;
}

GeodesicLine GeodesicSampler::sample(Philox& rng) const {
    // w = sin^2(psi/2) with density 1/w^2 on [w_min, 1]; the geodesic with
    // endpoint separation psi meets B_R(o) iff w >= w_min, exactly.
    const double u = rng.u01();
    const double w = 1.0 / (1.0 / w_min_ + u * (1.0 - 1.0 / w_min_));
    const double psi = 2.0 * std::asin(std::min(1.0, std::sqrt(w)));
    const Vec3 xi = rng.unit_sphere();
    // Orthonormal pair completing xi.
    Vec3 seed{1.0, 0.0, 0.0};
    if (std::abs(dot3(seed, xi)) > 0.9) seed = Vec3{0.0, 1.0, 0.0};
    const Vec3 a = normalized3(cross3(xi, seed));
    const Vec3 b = cross3(xi, a);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    Vec3 eta = scale3(xi, std::cos(psi));
    eta = add3(eta, scale3(a, std::sin(psi) * std::cos(phi)));
    eta = add3(eta, scale3(b, std::sin(psi) * std::sin(phi)));
    return GeodesicLine::from_endpoints(LorentzVec{1.0, xi}, LorentzVec{1.0, eta});
}

void GeodesicSampler::require_inside(double object_radius) const {
    if (object_radius > radius_ - margin_)
        throw WindowError("object of radius " + std::to_string(object_radius) +
                          " does not fit in geodesic window " +
                          std::to_string(radius_) + " minus margin");
}

// ---------------------------------------------------------------------------

std::vector<LorentzVec> axis_segment(double length) {
    const double h = 0.5 * length;
    return {LorentzVec{std::cosh(h), 0.0, 0.0, -std::sinh(h)},
            LorentzVec{std::cosh(h), 0.0, 0.0, std::sinh(h)}};
}

DiskPatch equatorial_disk(double radius) {
    return DiskPatch(RoundCircle::from_normal(LorentzVec{0, 0, 0, 1}),
                     origin_point(), radius);
}

namespace {

int polyline_crossings(const std::vector<LorentzVec>& pts, const RoundCircle& c) {
    // Along each geodesic segment, <g(t), v> = A cosh t + B sinh t changes
    // sign at most once, so endpoint signs decide.
    int k = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double f0 = mdot(pts[i], c.normal);
        const double f1 = mdot(pts[i + 1], c.normal);
        if (f0 * f1 < 0.0) ++k;
    }
    return k;
}

double polyline_extent(const std::vector<LorentzVec>& pts) {
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, dist(origin_point(), p));
    return r;
}

} // namespace

Estimate crofton_length(const std::vector<LorentzVec>& polyline,
                        const PlaneSampler& planes, const McRun& run) {
    if (polyline.size() < 2) return Estimate{0.0, 0.0, run.n};
    planes.require_inside(polyline_extent(polyline));
    return mc_mean(planes.mass() / kPi, run.n, run.shards, run.seed, run.stream,
                   [&](Philox& rng) {
                       return static_cast<double>(
                           polyline_crossings(polyline, planes.sample(rng)));
                   });
}

Region ball_region(const LorentzVec& center, double radius) {
    const LorentzVec c = normalize_point(center);
    Region r;
    r.bounding_radius = dist(origin_point(), c) + radius;
    const double reach = std::cosh(radius);
    r.contains = [c, reach](const LorentzVec& x) { return -mdot(x, c) <= reach; };
    return r;
}

Estimate santalo_volume(const Region& region, const PlaneSampler& planes,
                        const McRun& run, int quadrature) {
    planes.require_inside(region.bounding_radius);
    const double reach = std::cosh(region.bounding_radius);
    const int m = std::max(quadrature, 8);
    // Angular directions are shared by all rings; precompute them per plane.
    const double dth = 2.0 * kPi / m;
    std::vector<double> cos_th(m), sin_th(m);
    for (int j = 0; j < m; ++j) {
        cos_th[j] = std::cos((j + 0.5) * dth);
        sin_th[j] = std::sin((j + 0.5) * dth);
    }
    return mc_mean(
        planes.mass() / (2.0 * kPi), run.n, run.shards, run.seed, run.stream,
        [&, m, reach](Philox& rng) {
            const RoundCircle sigma = planes.sample(rng);
            const PlaneFrame frame = PlaneFrame::build(sigma);
            const double ct = std::cosh(frame.foot_distance);
            if (ct >= reach) return 0.0;
            const double rho_max = std::acosh(reach / ct);
            const double dr = rho_max / m;
            std::vector<LorentzVec> dirs(m);
            for (int j = 0; j < m; ++j)
                dirs[j] = frame.e1 * cos_th[j] + frame.e2 * sin_th[j];
            double area = 0.0;
            for (int i = 0; i < m; ++i) {
                const double rho = (i + 0.5) * dr;
                const double ch = std::cosh(rho), sh = std::sinh(rho);
                const LorentzVec base = frame.foot * ch;
                const double wt = sh * dr * dth;
                for (int j = 0; j < m; ++j) {
                    if (region.contains(base + dirs[j] * sh)) area += wt;
                }
            }
            return area;
        });
}

Estimate santalo_area(const SurfacePatch& patch, const PlaneSampler& planes,
                      const McRun& run) {
    planes.require_inside(patch.bounding_radius());
    return mc_mean(planes.mass() * 2.0 / (kPi * kPi), run.n, run.shards, run.seed,
                   run.stream, [&](Philox& rng) {
                       return patch.chord_length(planes.sample(rng));
                   });
}

// ---------------------------------------------------------------------------

Calibration calibrate_nu(const McRun& run, double window_radius,
                         double segment_length, double max_rel_se) {
    if (run.n < 100000)
        throw CalibrationError("calibrate_nu: need n >= 1e5 samples");
    const PlaneSampler raw(window_radius, 1.0);
    const auto segment = axis_segment(segment_length);
    raw.require_inside(0.5 * segment_length);
    const Estimate counts =
        mc_mean(raw.mass(), run.n, run.shards, run.seed, run.stream,
                [&](Philox& rng) {
                    return static_cast<double>(
                        polyline_crossings(segment, raw.sample(rng)));
                });
    if (counts.value <= 0.0)
        throw CalibrationError("calibrate_nu: no crossings observed");
    Calibration cal;
    cal.c0 = kPi * segment_length / counts.value;
    cal.se_c0 = cal.c0 * (counts.se / counts.value);
    cal.seed = run.seed;
    cal.n = run.n;
    if (cal.se_c0 / cal.c0 > max_rel_se)
        throw CalibrationError("calibrate_nu: relative standard error " +
                               std::to_string(cal.se_c0 / cal.c0) +
                               " exceeds budget");
    return cal;
}

Calibration calibrate_liouville(const McRun& run, double window_radius,
                                double disk_radius, double max_rel_se) {
    if (run.n < 100000)
        throw CalibrationError("calibrate_liouville: need n >= 1e5 samples");
    const GeodesicSampler raw(window_radius, 1.0);
    const DiskPatch disk = equatorial_disk(disk_radius);
    raw.require_inside(disk_radius);
    const Estimate counts =
        mc_mean(raw.mass(), run.n, run.shards, run.seed, run.stream,
                [&](Philox& rng) {
                    return static_cast<double>(disk.crossings(raw.sample(rng)));
                });
    if (counts.value <= 0.0)
        throw CalibrationError("calibrate_liouville: no crossings observed");
    const double target = kPi * disk.area();
    Calibration cal;
    cal.c1 = target / counts.value;
    cal.se_c1 = cal.c1 * (counts.se / counts.value);
    cal.seed = run.seed;
    cal.n = run.n;
    if (cal.se_c1 / cal.c1 > max_rel_se)
        throw CalibrationError("calibrate_liouville: relative standard error " +
                               std::to_string(cal.se_c1 / cal.c1) +
                               " exceeds budget");
    return cal;
}

Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CalibrationError("calibration fixture missing: " + path);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key.empty() || key[0] == '#') continue;
        kv[key] = std::stod(line.substr(eq + 1));
    }
    for (const char* key : {"c0", "c1", "seed", "n", "se_c0", "se_c1"})
        if (!kv.count(key))
            throw CalibrationError("calibration fixture lacks key '" +
                                   std::string(key) + "': " + path);
    Calibration cal;
    cal.c0 = kv["c0"];
    cal.c1 = kv["c1"];
    cal.se_c0 = kv["se_c0"];
    cal.se_c1 = kv["se_c1"];
    cal.seed = static_cast<std::uint64_t>(kv["seed"]);
    cal.n = static_cast<std::uint64_t>(kv["n"]);
    return cal;
}

void save_calibration(const Calibration& cal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CalibrationError("cannot write calibration fixture: " + path);
    out.precision(17);
    out << "c0 = " << cal.c0 << "\n"
        << "c1 = " << cal.c1 << "\n"
        << "seed = " << cal.seed << "\n"
        << "n = " << cal.n << "\n"
        << "se_c0 = " << cal.se_c0 << "\n"
        << "se_c1 = " << cal.se_c1 << "\n";
}

// ---------------------------------------------------------------------------

std::pair<Estimate, Estimate> coarea_check(
    const std::function<double(const LorentzVec&, const LorentzVec&)>& psi,
    double support_radius, const PlaneSampler& planes, const McRun& run,
    int quadrature) {
    planes.require_inside(support_radius);

    // Direct side: x uniform in hyperbolic volume of B_r, plane normal
    // uniform on the tangent sphere; bundle volume = 2pi * vol(B_r).
    const double r = support_radius;
    const double vol = kPi * (std::sinh(2.0 * r) - 2.0 * r);
    const double radial_total = (std::sinh(r) * std::cosh(r) - r) / 2.0;
    auto sample_radius = [radial_total, r](double q) {
        const double target = q * radial_total;
        double lo = 0.0, hi = r, rho = r * std::cbrt(q);
        for (int i = 0; i < 60; ++i) {
            const double sh = std::sinh(rho);
            const double f = (sh * std::cosh(rho) - rho) / 2.0 - target;
            (f > 0.0 ? hi : lo) = rho;
            const double df = sh * sh;
            double next = df > 1e-30 ? rho - f / df : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - rho) < 1e-15) return next;
            rho = next;
        }
        return std::clamp(rho, 0.0, r);
    };
    const Estimate direct = mc_mean(
        2.0 * kPi * vol, run.n, run.shards, run.seed, run.stream,
        [&](Philox& rng) {
            const double rho = sample_radius(rng.u01());
            const Vec3 dir = rng.unit_sphere();
            const LorentzVec x{std::cosh(rho), scale3(dir, std::sinh(rho))};
            const auto frame = tangent_frame(x);
            const Vec3 d = rng.unit_sphere();
            const LorentzVec normal =
                frame[0] * d[0] + frame[1] * d[1] + frame[2] * d[2];
            return psi(x, normal);
        });

    // Iterated side: planes from the invariant measure, psi integrated over
    // each disk by polar quadrature.
    const double reach = std::cosh(support_radius);
    const int m = std::max(quadrature, 8);
    const Estimate iterated = mc_mean(
        planes.mass(), run.n, run.shards, run.seed, run.stream + 1000,
        [&, m, reach](Philox& rng) {
            const RoundCircle sigma = planes.sample(rng);
            const PlaneFrame frame = PlaneFrame::build(sigma);
            const double ct = std::cosh(frame.foot_distance);
            if (ct >= reach) return 0.0;
            const double rho_max = std::acosh(reach / ct);
            const double dr = rho_max / m;
            const double dth = 2.0 * kPi / m;
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                const double rho = (i + 0.5) * dr;
                const double wt = std::sinh(rho) * dr * dth;
                for (int j = 0; j < m; ++j) {
                    const LorentzVec x = frame.disk_point(rho, (j + 0.5) * dth);
                    acc += wt * psi(x, sigma.normal);
                }
            }
            return acc;
        });
    return {direct, iterated};
}

std::pair<Estimate, Estimate> fiber_crofton_check(
    const DiskPatch& patch,
    const std::function<double(const GeodesicLine&)>& weight,
    const GeodesicSampler& geodesics, const McRun& run) {
    geodesics.require_inside(patch.bounding_radius());

    const Estimate lhs = mc_mean(
        geodesics.mass(), run.n, run.shards, run.seed, run.stream,
        [&](Philox& rng) {
            const GeodesicLine g = geodesics.sample(rng);
            const int k = patch.crossings(g);
            return k == 0 ? 0.0 : k * weight(g);
        });

    // Fiber side: x uniform w.r.t. area on the disk, tangent direction v
    // uniform on the unit sphere at x; (1/2) integral of F(p2(x,v)) |<v,N>|
    // over the bundle carries total weight area * 2pi.
    const LorentzVec c = patch.center();
    const LorentzVec normal = patch.plane().normal;
    std::array<LorentzVec, 2> inplane;
    {
        int have = 0;
        const LorentzVec seeds[4] = {
            {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
        for (const auto& s : seeds) {
            LorentzVec y = s + c * mdot(s, c);
            y = y - normal * mdot(y, normal);
            for (int k = 0; k < have; ++k) y = y - inplane[k] * mdot(y, inplane[k]);
            const double q = mdot(y, y);
            if (q > 1e-14) inplane[have++] = y * (1.0 / std::sqrt(q));
            if (have == 2) break;
        }
        if (have != 2)
            throw DomainError("fiber_crofton_check: degenerate disk frame");
    }
    // E over (x ~ area/area, v ~ domega/4pi) scales back by area * 4pi.
    const double rho_cap = std::cosh(patch.radius()) - 1.0;
    const Estimate rhs = mc_mean(
        patch.area() * 4.0 * kPi, run.n, run.shards, run.seed, run.stream + 1000,
        [&](Philox& rng) {
            // Area density sinh(rho) d rho: cosh(rho) - 1 is uniform.
            const double rho = std::acosh(1.0 + rho_cap * rng.u01());
            const double theta = rng.uniform(0.0, 2.0 * kPi);
            const LorentzVec x =
                c * std::cosh(rho) +
                (inplane[0] * std::cos(theta) + inplane[1] * std::sin(theta)) *
                    std::sinh(rho);
            const auto frame = tangent_frame(x);
            const Vec3 d = rng.unit_sphere();
            const LorentzVec v =
                frame[0] * d[0] + frame[1] * d[1] + frame[2] * d[2];
            // Plane normal transported along the plane stays the global normal.
            const double incidence = std::abs(mdot(v, normal));
            if (incidence < 1e-14) return 0.0;
            const GeodesicLine g = geodesic_from_state(normalize_point(x), v);
            return 0.5 * weight(g) * incidence;
        });
    return {lhs, rhs};
}

Estimate plane_mass_meeting_ball(const LorentzVec& center, double radius,
                                 const PlaneSampler& planes, const McRun& run) {
    const LorentzVec c = normalize_point(center);
    planes.require_inside(dist(origin_point(), c) + radius);
    const double sh = std::sinh(radius);
    return mc_mean(planes.mass(), run.n, run.shards, run.seed, run.stream,
                   [&](Philox& rng) {
                       const RoundCircle sigma = planes.sample(rng);
                       return std::abs(mdot(c, sigma.normal)) < sh ? 1.0 : 0.0;
                   });
}

} // namespace h3geo
