#include "h3geo/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "h3geo/boundary.hpp"
#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double chart_radius_of(double hyperbolic_radius) {
    return std::tanh(0.5 * hyperbolic_radius);
}

double hyperbolic_radius_of_chart(double r) { return 2.0 * std::atanh(r); }

} // namespace

ConformalMetric ConformalMetric::homothety(double log_scale) {
    ConformalMetric m;
    m.constant_ = log_scale;
    return m;
}

ConformalMetric ConformalMetric::with_bumps(std::vector<Bump> bumps,
                                            double constant) {
    ConformalMetric m;
    m.constant_ = constant;
    m.bumps_ = std::move(bumps);
    for (const auto& b : m.bumps_) {
        if (b.radius <= 0.0) throw DomainError("bump radius must be positive");
        ChartBump cb;
        cb.center = hyperboloid_to_ball(normalize_point(b.center));
        cb.center_norm2 = dot3(cb.center, cb.center);
        cb.cosh_radius = std::cosh(b.radius);
        cb.amplitude = b.amplitude;
        m.chart_.push_back(cb);
    }
    return m;
}

double ConformalMetric::phi_chart(const Vec3& x) const {
    double value = constant_;
    if (chart_.empty()) return value;
    const double x2 = dot3(x, x);
    const double fx = 1.0 - x2;
    for (const auto& b : chart_) {
        const Vec3 d = sub3(x, b.center);
        const double u = 1.0 + 2.0 * dot3(d, d) / (fx * (1.0 - b.center_norm2));
        const double s = (u - 1.0) / (b.cosh_radius - 1.0);
        if (s >= 1.0) continue;
        const double w = 1.0 - s;
        value += b.amplitude * w * w * w * w;
    }
    return value;
}

Vec3 ConformalMetric::grad_phi_chart(const Vec3& x) const {
    Vec3 g{0, 0, 0};
    if (chart_.empty()) return g;
    const double x2 = dot3(x, x);
    const double fx = 1.0 - x2;
    for (const auto& b : chart_) {
        const Vec3 d = sub3(x, b.center);
        const double d2 = dot3(d, d);
        const double fc = 1.0 - b.center_norm2;
        const double u = 1.0 + 2.0 * d2 / (fx * fc);
        const double s = (u - 1.0) / (b.cosh_radius - 1.0);
        if (s >= 1.0) continue;
        const double w = 1.0 - s;
        // grad u = (4 d (1-|x|^2) + 4 x |d|^2) / ((1-|x|^2)^2 (1-|c|^2))
        const Vec3 grad_u = scale3(add3(scale3(d, 4.0 * fx), scale3(x, 4.0 * d2)),
                                   1.0 / (fx * fx * fc));
        const double factor = -4.0 * b.amplitude * w * w * w / (b.cosh_radius - 1.0);
        g = add3(g, scale3(grad_u, factor));
    }
    return g;
}

double ConformalMetric::psi_chart(const Vec3& x) const {
    return phi_chart(x) + std::log(2.0 / (1.0 - dot3(x, x)));
}

Vec3 ConformalMetric::grad_psi_chart(const Vec3& x) const {
    const double f = 2.0 / (1.0 - dot3(x, x));
    return add3(grad_phi_chart(x), scale3(x, f));
}

double ConformalMetric::support_radius() const {
    double r = 0.0;
    for (const auto& b : bumps_)
        r = std::max(r, dist(origin_point(), normalize_point(b.center)) + b.radius);
    return r;
}

double ConformalMetric::max_amplitude() const {
    double a = 0.0;
    for (const auto& b : bumps_) a = std::max(a, std::abs(b.amplitude));
    return a;
}

double ConformalMetric::max_speed() const {
    double min_phi = constant_;
    for (const auto& b : bumps_)
        min_phi = std::min(min_phi, constant_ + std::min(0.0, b.amplitude));
    return std::exp(-min_phi);
}

void ConformalMetric::validate(std::uint64_t seed, int probes) const {
    for (const auto& b : bumps_) {
        if (std::abs(b.amplitude) > 0.1)
            throw DomainError("bump amplitude exceeds the 0.1 cap");
        if (b.radius < 1.0)
            throw DomainError("bump radius below the minimum of 1");
    }
    if (bumps_.empty()) return;
    Philox rng(seed, 9001);
    const double reach = support_radius();
    for (int i = 0; i < probes; ++i) {
        // Random point in the support region, random tangent plane.
        const double rho = reach * std::cbrt(rng.u01());
        const LorentzVec x{std::cosh(rho), scale3(rng.unit_sphere(), std::sinh(rho))};
        const auto frame = tangent_frame(x);
        const Vec3 d1 = rng.unit_sphere();
        LorentzVec e1 = frame[0] * d1[0] + frame[1] * d1[1] + frame[2] * d1[2];
        const Vec3 d2 = rng.unit_sphere();
        LorentzVec e2 = frame[0] * d2[0] + frame[1] * d2[1] + frame[2] * d2[2];
        e2 = e2 - e1 * mdot(e1, e2);
        const double q = mdot(e2, e2);
        if (q < 1e-6) continue;
        e2 = e2 * (1.0 / std::sqrt(q));
        if (sectional_curvature(*this, x, e1, e2) >= 0.0)
            throw DomainError("conformal metric fails the negative-curvature probe");
        // Hyperbolic gradient cap |grad phi| <= 0.5.
        const Vec3 xb = hyperboloid_to_ball(x);
        const double gn = norm3(grad_phi_chart(xb)) * (1.0 - dot3(xb, xb)) / 2.0;
        if (gn > 0.5) throw DomainError("conformal factor gradient exceeds 0.5");
    }
}

double sectional_curvature(const ConformalMetric& g, const LorentzVec& x,
                           const LorentzVec& e1, const LorentzVec& e2,
                           double h) {
    auto phi_along = [&](const LorentzVec& dir, double t) {
        const LorentzVec p = x * std::cosh(t) + dir * std::sinh(t);
        return g.phi(normalize_point(p));
    };
    auto hess = [&](const LorentzVec& dir) {
        return (phi_along(dir, h) - 2.0 * g.phi(x) + phi_along(dir, -h)) / (h * h);
    };
    auto deriv = [&](const LorentzVec& dir) {
        return (phi_along(dir, h) - phi_along(dir, -h)) / (2.0 * h);
    };
    const auto frame = tangent_frame(x);
    double grad2 = 0.0;
    for (const auto& e : frame) {
        const double d = deriv(e);
        grad2 += d * d;
    }
    const double d1 = deriv(e1), d2 = deriv(e2);
    return std::exp(-2.0 * g.phi(x)) *
           (-1.0 - hess(e1) - hess(e2) + d1 * d1 + d2 * d2 - grad2);
}

// ---------------------------------------------------------------------------

FlowState make_state(const ConformalMetric& g, const LorentzVec& point,
                     const LorentzVec& tangent) {
    const LorentzVec p = normalize_point(point);
    FlowState s;
    s.x = hyperboloid_to_ball(p);
    // d/dt [ pvec / (1 + p0) ] = (wvec (1+p0) - pvec w0) / (1+p0)^2
    const Vec3 pv = p.spatial(), wv = tangent.spatial();
    const double a = 1.0 + p[0];
    Vec3 u = scale3(sub3(scale3(wv, a), scale3(pv, tangent[0])), 1.0 / (a * a));
    const double target = std::exp(-g.psi_chart(s.x));
    s.u = scale3(u, target / norm3(u));
    return s;
}

std::pair<LorentzVec, LorentzVec> hyperboloid_state(const FlowState& s) {
    const LorentzVec p = ball_to_hyperboloid(s.x);
    const double x2 = dot3(s.x, s.x);
    const double f = 1.0 - x2;
    // Differential of the chart map.
    const double c0 = 4.0 / (f * f);
    LorentzVec w;
    w[0] = c0 * dot3(s.x, s.u);
    for (int i = 0; i < 3; ++i)
        w[i + 1] = 2.0 * s.u[i] / f + c0 * s.x[i] * dot3(s.x, s.u) * 1.0;
    // Normalize to a gbar-unit tangent at p.
    w = w + p * mdot(w, p);
    const double q = mdot(w, w);
    return {p, w * (1.0 / std::sqrt(q))};
}

namespace {

struct OdeState {
    Vec3 x, u;
};

OdeState rhs(const ConformalMetric& g, const OdeState& s) {
    const Vec3 gp = g.grad_psi_chart(s.x);
    const double gu = dot3(gp, s.u);
    const double uu = dot3(s.u, s.u);
    return {s.u, add3(scale3(s.u, -2.0 * gu), scale3(gp, uu))};
}

OdeState rk4_step(const ConformalMetric& g, const OdeState& s, double dt) {
    const OdeState k1 = rhs(g, s);
    const OdeState s2{add3(s.x, scale3(k1.x, 0.5 * dt)), add3(s.u, scale3(k1.u, 0.5 * dt))};
    const OdeState k2 = rhs(g, s2);
    const OdeState s3{add3(s.x, scale3(k2.x, 0.5 * dt)), add3(s.u, scale3(k2.u, 0.5 * dt))};
    const OdeState k3 = rhs(g, s3);
    const OdeState s4{add3(s.x, scale3(k3.x, dt)), add3(s.u, scale3(k3.u, dt))};
    const OdeState k4 = rhs(g, s4);
    OdeState out;
    out.x = add3(s.x, scale3(add3(add3(k1.x, scale3(add3(k2.x, k3.x), 2.0)), k4.x), dt / 6.0));
    out.u = add3(s.u, scale3(add3(add3(k1.u, scale3(add3(k2.u, k3.u), 2.0)), k4.u), dt / 6.0));
    return out;
}

} // namespace

FlowState flow(const ConformalMetric& g, const FlowState& start, double t,
               const FlowOptions& opts, FlowDiagnostics* diag) {
    OdeState s{start.x, start.u};
    const double dt = t >= 0.0 ? opts.dt : -opts.dt;
    const long nsteps = static_cast<long>(std::floor(std::abs(t) / opts.dt));
    const double last = t - nsteps * dt;
    long since_check = 0;
    auto advance = [&](double step) {
        if (step == 0.0) return;
        OdeState next = rk4_step(g, s, step);
        if (opts.check_every > 0 && ++since_check >= opts.check_every) {
            since_check = 0;
            OdeState half = rk4_step(g, s, 0.5 * step);
            half = rk4_step(g, half, 0.5 * step);
            const double err = norm3(sub3(half.x, next.x)) + norm3(sub3(half.u, next.u));
            if (diag) diag->max_local_error = std::max(diag->max_local_error, err);
            if (err > opts.error_tol)
                throw NumericalError("flow: local error estimate exceeds budget");
            next = half;
        }
        s = next;
        if (norm3(s.x) >= opts.chart_limit)
            throw NumericalError("flow: trajectory left the chart");
        // Renormalize to unit g-speed; log the drift first.
        const double speed = norm3(s.u) * std::exp(g.psi_chart(s.x));
        if (diag)
            diag->max_speed_drift = std::max(diag->max_speed_drift, std::abs(speed - 1.0));
        s.u = scale3(s.u, 1.0 / speed);
    };
    for (long i = 0; i < nsteps; ++i) advance(dt);
    advance(last);
    FlowState out;
    out.x = s.x;
    out.u = s.u;
    out.t = start.t + t;
    return out;
}

// ---------------------------------------------------------------------------

LorentzVec GTrajectory::interior_point(double t) const {
    // Hermite interpolation between the bracketing samples.
    std::size_t lo = 0, hi = samples_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (samples_[mid].t <= t ? lo : hi) = mid;
    }
    const Sample& a = samples_[lo];
    const Sample& b = samples_[hi];
    const double h = b.t - a.t;
    if (h <= 0.0) return ball_to_hyperboloid(a.x);
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    Vec3 x{0, 0, 0};
    for (int i = 0; i < 3; ++i)
        x[i] = h00 * a.x[i] + h10 * h * a.u[i] + h01 * b.x[i] + h11 * h * b.u[i];
    return ball_to_hyperboloid(x);
}

LorentzVec GTrajectory::point_at(double t) const {
    if (pure_ray_) {
        const double s = rate_ * t;
        return normalize_point(ray_p_ * std::cosh(s) + ray_w_ * std::sinh(s));
    }
    if (t <= t_lo_) {
        const double s = rate_ * (t - t_lo_);
        return normalize_point(lo_p_ * std::cosh(s) + lo_w_ * std::sinh(s));
    }
    if (t >= t_hi_) {
        const double s = rate_ * (t - t_hi_);
        return normalize_point(hi_p_ * std::cosh(s) + hi_w_ * std::sinh(s));
    }
    return interior_point(t);
}

namespace {

// Zero of A cosh s + B sinh s restricted to the given half-line, if any.
std::optional<double> ray_zero(double A, double B, bool forward) {
    if (std::abs(B) <= std::abs(A)) return std::nullopt;
    const double s = std::atanh(-A / B);
    if (forward ? s >= 0.0 : s <= 0.0) return s;
    return std::nullopt;
}

} // namespace

int GTrajectory::patch_crossings(const SurfacePatch& patch) const {
    // Planar-patch crossing test via the disk interface.
    const auto* disk = dynamic_cast<const DiskPatch*>(&patch);
    if (!disk)
        throw DomainError("GTrajectory::patch_crossings supports disk patches");
    const LorentzVec& v = disk->plane().normal;
    const double reach = std::cosh(disk->radius());
    auto inside = [&](const LorentzVec& x) {
        return -mdot(x, disk->center()) <= reach;
    };
    if (pure_ray_) {
        // Full line: single possible crossing.
        const double A = mdot(ray_p_, v), B = mdot(ray_w_, v);
        if (std::abs(B) <= std::abs(A)) return 0;
        const double s = std::atanh(-A / B);
        const LorentzVec x =
            normalize_point(ray_p_ * std::cosh(s) + ray_w_ * std::sinh(s));
        return inside(x) ? 1 : 0;
    }
    int count = 0;
    // Backward ray: s <= 0 relative to the exit state.
    if (const auto s = ray_zero(mdot(lo_p_, v), mdot(lo_w_, v), false)) {
        const LorentzVec x =
            normalize_point(lo_p_ * std::cosh(*s) + lo_w_ * std::sinh(*s));
        if (inside(x)) ++count;
    }
    if (const auto s = ray_zero(mdot(hi_p_, v), mdot(hi_w_, v), true)) {
        const LorentzVec x =
            normalize_point(hi_p_ * std::cosh(*s) + hi_w_ * std::sinh(*s));
        if (inside(x)) ++count;
    }
    // Interior: sign changes on the sample grid, refined by bisection.
    for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
        const double fa = mdot(ball_to_hyperboloid(samples_[i].x), v);
        const double fb = mdot(ball_to_hyperboloid(samples_[i + 1].x), v);
        if (fa * fb >= 0.0) continue;
        double lo = samples_[i].t, hi = samples_[i + 1].t;
        double flo = fa;
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = mdot(interior_point(mid), v);
            if (fm * flo <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        if (inside(interior_point(0.5 * (lo + hi)))) ++count;
    }
    return count;
}

GTrajectory trace_geodesic(const ConformalMetric& g, const FlowState& start,
                           const FlowOptions& opts) {
    GTrajectory traj;
    const double rate_out = std::exp(-g.constant_part());
    traj.rate_ = rate_out;

    const auto [p0, w0] = hyperboloid_state(start);
    if (g.is_homothety()) {
        traj.pure_ray_ = true;
        traj.ray_p_ = p0;
        traj.ray_w_ = w0;
        traj.xi_ = normalize_boundary(p0 - w0);
        traj.eta_ = normalize_boundary(p0 + w0);
        return traj;
    }

    const double region = g.support_radius() + 0.1;
    const double region_reach = std::cosh(region);
    const double t_budget =
        4.0 * (region + 1.0) * std::exp(g.max_amplitude() + std::abs(g.constant_part()));

    // One direction: from the t=0 state, either a pure ray (never meets the
    // support region) or ray-to-entry, ODE across, exit state. All reported
    // tangents are oriented along increasing flow time.
    struct DirectionResult {
        bool touched = false;
        std::vector<GTrajectory::Sample> samples;  // |t| increasing
        double t_start = 0.0;  // ODE entry time (sign of the direction)
        LorentzVec entry_p, entry_w;
        double t_exit = 0.0;
        LorentzVec exit_p, exit_w;
    };
    auto run_direction = [&](double sign) {
        DirectionResult res;
        const LorentzVec w = sign > 0 ? w0 : -w0;
        const GeodesicLine ray{normalize_boundary(p0 - w), normalize_boundary(p0 + w),
                               p0, w};
        const auto iv = clip_interval_to_ball(ray, origin_point(), region);
        double entry_arc = 0.0;
        bool starts_inside = false;
        if (!iv || (*iv)[1] <= 0.0) {
            return res;  // never meets the region going this way
        }
        if ((*iv)[0] > 0.0) {
            entry_arc = (*iv)[0];
        } else {
            starts_inside = true;
        }
        res.touched = true;
        // Flow-time offset to the ODE start.
        const double t_entry = sign * entry_arc / rate_out;
        FlowState state;
        if (starts_inside) {
            state = start;
            res.entry_p = p0;
            res.entry_w = w0;
        } else {
            const LorentzVec pe = normalize_point(ray.point_at(entry_arc));
            const LorentzVec we = ray.tangent_at(entry_arc);
            state = make_state(g, pe, sign > 0 ? we : -we);
            res.entry_p = pe;
            res.entry_w = sign > 0 ? we : -we;
        }
        res.t_start = t_entry;
        // Integrate until the hyperbolic radius exceeds the region.
        OdeState s{state.x, state.u};
        double t = t_entry;
        res.samples.push_back({t, s.x, s.u});
        const double dt = sign * opts.dt;
        long guard = 0;
        const long max_steps =
            static_cast<long>(t_budget / opts.dt) + 16;
        while (true) {
            if (++guard > max_steps)
                throw NumericalError("trace_geodesic: no region exit within budget");
            OdeState next = rk4_step(g, s, dt);
            const double speed = norm3(next.u) * std::exp(g.psi_chart(next.x));
            next.u = scale3(next.u, 1.0 / speed);
            s = next;
            t += dt;
            res.samples.push_back({t, s.x, s.u});
            if (norm3(s.x) >= chart_radius_of(region)) break;
        }
        res.t_exit = t;
        FlowState exit_state;
        exit_state.x = s.x;
        exit_state.u = s.u;
        // The ODE state carries the forward-time velocity in both directions.
        const auto [pe, we] = hyperboloid_state(exit_state);
        res.exit_p = pe;
        res.exit_w = we;
        return res;
    };

    DirectionResult fwd = run_direction(+1.0);
    DirectionResult bwd = run_direction(-1.0);

    if (!fwd.touched && !bwd.touched) {
        traj.pure_ray_ = true;
        traj.ray_p_ = p0;
        traj.ray_w_ = w0;
        traj.xi_ = normalize_boundary(p0 - w0);
        traj.eta_ = normalize_boundary(p0 + w0);
        return traj;
    }

    // The ODE-backed interval is [t_lo_, t_hi_]; when only one direction
    // meets the region, the opposite anchor is that direction's entry state,
    // so the ray segment between the start and the entry stays a ray.
    traj.pure_ray_ = false;
    if (fwd.touched) {
        traj.t_hi_ = fwd.t_exit;
        traj.hi_p_ = fwd.exit_p;
        traj.hi_w_ = fwd.exit_w;
    } else {
        traj.t_hi_ = bwd.t_start;
        traj.hi_p_ = bwd.entry_p;
        traj.hi_w_ = bwd.entry_w;
    }
    if (bwd.touched) {
        traj.t_lo_ = bwd.t_exit;
        traj.lo_p_ = bwd.exit_p;
        traj.lo_w_ = bwd.exit_w;
    } else {
        traj.t_lo_ = fwd.t_start;
        traj.lo_p_ = fwd.entry_p;
        traj.lo_w_ = fwd.entry_w;
    }
    // Merge samples: backward reversed, then forward (skip duplicate t = 0).
    for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it)
        traj.samples_.push_back(*it);
    for (std::size_t i = traj.samples_.empty() ? 0 : 1; i < fwd.samples.size(); ++i)
        traj.samples_.push_back(fwd.samples[i]);
    if (traj.samples_.empty()) {
        const FlowState st = start;
        traj.samples_.push_back({0.0, st.x, st.u});
    }
    traj.eta_ = normalize_boundary(traj.hi_p_ + traj.hi_w_);
    traj.xi_ = normalize_boundary(traj.lo_p_ - traj.lo_w_);
    return traj;
}

// ---------------------------------------------------------------------------

StretchResult geodesic_stretch(const ConformalMetric& g, double window_radius,
                               double horizon, const McRun& run,
                               const FlowOptions& opts) {
    const double chart_span = hyperbolic_radius_of_chart(opts.chart_limit);
    if (window_radius + horizon * g.max_speed() > chart_span)
        throw NumericalError("geodesic_stretch: horizon would leave the chart");
    StretchResult result;
    const double bump_diameter = 2.0 * [&] {
        double r = 0.0;
        for (const auto& b : g.bumps()) r = std::max(r, b.radius);
        return r;
    }();
    result.horizon_warning = !g.bumps().empty() && horizon < 10.0 * bump_diameter;

    const double phi_cap = g.constant_part() + std::max(0.0, [&] {
        double a = 0.0;
        for (const auto& b : g.bumps()) a = std::max(a, b.amplitude);
        return a;
    }());
    const double accept_cap = std::exp(3.0 * phi_cap);
    const double radial_total =
        (std::sinh(window_radius) * std::cosh(window_radius) - window_radius) / 2.0;

    result.stretch = mc_mean(
        1.0, run.n, run.shards, run.seed, run.stream, [&](Philox& rng) {
            // Base point from the g-volume e^{3 phi} dvol, by rejection.
            LorentzVec x;
            for (;;) {
                const double target = rng.u01() * radial_total;
                double lo = 0.0, hi = window_radius, rho = window_radius * 0.5;
                for (int i = 0; i < 60; ++i) {
                    const double sh = std::sinh(rho);
                    const double f = (sh * std::cosh(rho) - rho) / 2.0 - target;
                    (f > 0.0 ? hi : lo) = rho;
                    double next = sh > 1e-15 ? rho - f / (sh * sh) : 0.5 * (lo + hi);
                    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                    if (std::abs(next - rho) < 1e-14) break;
                    rho = next;
                }
                x = LorentzVec{std::cosh(rho), scale3(rng.unit_sphere(), std::sinh(rho))};
                if (rng.u01() * accept_cap <= std::exp(3.0 * g.phi(x))) break;
            }
            const auto frame = tangent_frame(x);
            const Vec3 d = rng.unit_sphere();
            const LorentzVec tangent =
                frame[0] * d[0] + frame[1] * d[1] + frame[2] * d[2];
            const GTrajectory traj =
                trace_geodesic(g, make_state(g, x, tangent), opts);
            return dist(traj.point_at(0.0), traj.point_at(horizon)) / horizon;
        });
    return result;
}

double area_ratio_pointwise(const ConformalMetric& g, const LorentzVec& x,
                            const LorentzVec& normal, double delta,
                            int quadrature) {
    if (delta < 1e-6 || delta > 1e-2)
        throw DomainError("area_ratio_pointwise: delta outside [1e-6, 1e-2]");
    const LorentzVec p = normalize_point(x);
    LorentzVec n = normal + p * mdot(normal, p);
    n = normalize_normal(n);
    // In-plane frame at p.
    LorentzVec e[2];
    int have = 0;
    const LorentzVec seeds[4] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
    for (const auto& s : seeds) {
        LorentzVec y = s + p * mdot(s, p);
        y = y - n * mdot(y, n);
        for (int k = 0; k < have; ++k) y = y - e[k] * mdot(y, e[k]);
        const double q = mdot(y, y);
        if (q > 1e-14) e[have++] = y * (1.0 / std::sqrt(q));
        if (have == 2) break;
    }
    if (have != 2) throw DomainError("area_ratio_pointwise: degenerate frame");
    const double rho_max = std::acosh(1.0 + delta / (2.0 * kPi));
    const int m = std::max(quadrature, 8);
    const double dr = rho_max / m, dth = 2.0 * kPi / m;
    double area_g = 0.0;
    for (int i = 0; i < m; ++i) {
        const double rho = (i + 0.5) * dr;
        const double wt = std::sinh(rho) * dr * dth;
        for (int j = 0; j < m; ++j) {
            const double th = (j + 0.5) * dth;
            const LorentzVec y =
                p * std::cosh(rho) +
                (e[0] * std::cos(th) + e[1] * std::sin(th)) * std::sinh(rho);
            area_g += wt * std::exp(2.0 * g.phi(normalize_point(y)));
        }
    }
    return area_g / delta;
}

double disk_area_g(const ConformalMetric& g, const DiskPatch& patch,
                   int quadrature) {
    const LorentzVec& c = patch.center();
    const LorentzVec& n = patch.plane().normal;
    LorentzVec e[2];
    int have = 0;
    const LorentzVec seeds[4] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
    for (const auto& s : seeds) {
        LorentzVec y = s + c * mdot(s, c);
        y = y - n * mdot(y, n);
        for (int k = 0; k < have; ++k) y = y - e[k] * mdot(y, e[k]);
        const double q = mdot(y, y);
        if (q > 1e-14) e[have++] = y * (1.0 / std::sqrt(q));
        if (have == 2) break;
    }
    if (have != 2) throw DomainError("disk_area_g: degenerate frame");
    const int m = std::max(quadrature, 8);
    const double dr = patch.radius() / m, dth = 2.0 * kPi / m;
    double area = 0.0;
    for (int i = 0; i < m; ++i) {
        const double rho = (i + 0.5) * dr;
        const double wt = std::sinh(rho) * dr * dth;
        for (int j = 0; j < m; ++j) {
            const double th = (j + 0.5) * dth;
            const LorentzVec y =
                c * std::cosh(rho) +
                (e[0] * std::cos(th) + e[1] * std::sin(th)) * std::sinh(rho);
            area += wt * std::exp(2.0 * g.phi(normalize_point(y)));
        }
    }
    return area;
}

// ---------------------------------------------------------------------------

namespace {

// Orthonormal tangent pair on S^2 at a direction.
std::array<Vec3, 2> sphere_frame(const Vec3& d) {
    Vec3 seed{1.0, 0.0, 0.0};
    if (std::abs(dot3(seed, d)) > 0.9) seed = Vec3{0.0, 1.0, 0.0};
    const Vec3 a = normalized3(cross3(d, seed));
    return {a, cross3(d, a)};
}

Vec3 sphere_exp(const Vec3& d, const std::array<Vec3, 2>& frame, double a,
                double b) {
    const double r = std::hypot(a, b);
    if (r < 1e-15) return d;
    Vec3 t = add3(scale3(frame[0], a / r), scale3(frame[1], b / r));
    return add3(scale3(d, std::cos(r)), scale3(t, std::sin(r)));
}

} // namespace

GCroftonResult g_crofton_check(const ConformalMetric& g, const DiskPatch& patch,
                               const GeodesicSampler& geodesics, const McRun& run,
                               const FlowOptions& flow_opts,
                               const ShootingOptions& shoot_opts) {
    geodesics.require_inside(patch.bounding_radius());
    GCroftonResult result;
    result.target = kPi * disk_area_g(g, patch);

    // Lines staying this far out coincide with their gbar version on the
    // patch (outside the support the metrics agree and same-endpoint
    // geodesics are unique).
    const double reject_radius =
        std::max(g.support_radius(), patch.bounding_radius()) + 0.5;

    std::atomic<std::uint64_t> failures{0};

    auto count_for_line = [&](const GeodesicLine& line) -> double {
        if (g.is_homothety()) return patch.crossings(line);
        const auto meets =
            clip_interval_to_ball(line, origin_point(), reject_radius);
        if (!meets) return patch.crossings(line);

        // Shoot for the g-geodesic with the line's endpoints: vary the trial
        // forward endpoint until the traced forward endpoint matches.
        const LorentzVec xi = line.xi;
        const Vec3 target_dir = line.eta.spatial();
        const auto frame = sphere_frame(target_dir);

        auto shoot = [&](double a, double b, GTrajectory* out) {
            const Vec3 zeta = sphere_exp(target_dir, frame, a, b);
            const GeodesicLine trial =
                GeodesicLine::from_endpoints(xi, LorentzVec{1.0, zeta});
            const auto iv =
                clip_interval_to_ball(trial, origin_point(), reject_radius);
            if (!iv) {
                // Trial exits the interaction zone: it is its own g-geodesic.
                if (out) {
                    FlowState st = make_state(g, trial.p, trial.w);
                    *out = trace_geodesic(g, st, flow_opts);
                }
                const Vec3 e = trial.eta.spatial();
                const Vec3 r = sub3(e, scale3(target_dir, dot3(e, target_dir)));
                return std::array<double, 2>{dot3(r, frame[0]), dot3(r, frame[1])};
            }
            const LorentzVec entry = normalize_point(trial.point_at((*iv)[0]));
            const LorentzVec dir = trial.tangent_at((*iv)[0]);
            const GTrajectory traj =
                trace_geodesic(g, make_state(g, entry, dir), flow_opts);
            const Vec3 e = traj.forward_endpoint().spatial();
            if (out) *out = traj;
            const Vec3 r = sub3(e, scale3(target_dir, dot3(e, target_dir)));
            return std::array<double, 2>{dot3(r, frame[0]), dot3(r, frame[1])};
        };

        double va = 0.0, vb = 0.0;
        GTrajectory traj;
        bool converged = false;
        for (int it = 0; it < shoot_opts.max_iterations; ++it) {
            const auto r = shoot(va, vb, &traj);
            const double err = std::hypot(r[0], r[1]);
            if (err <= shoot_opts.tol) {
                converged = true;
                break;
            }
            const double h = shoot_opts.fd_step;
            const auto ra = shoot(va + h, vb, nullptr);
            const auto rb = shoot(va, vb + h, nullptr);
            const double j00 = (ra[0] - r[0]) / h, j10 = (ra[1] - r[1]) / h;
            const double j01 = (rb[0] - r[0]) / h, j11 = (rb[1] - r[1]) / h;
            const double det = j00 * j11 - j01 * j10;
            if (std::abs(det) < 1e-14) break;
            double da = -(j11 * r[0] - j01 * r[1]) / det;
            double db = -(-j10 * r[0] + j00 * r[1]) / det;
            const double step = std::hypot(da, db);
            if (step > 0.1) {  // damp long steps
                da *= 0.1 / step;
                db *= 0.1 / step;
            }
            va += da;
            vb += db;
        }
        if (!converged) {
            failures.fetch_add(1, std::memory_order_relaxed);
            return 0.0;
        }
        return traj.patch_crossings(patch);
    };

    result.crossing_mass =
        mc_mean(geodesics.mass(), run.n, run.shards, run.seed, run.stream,
                [&](Philox& rng) { return count_for_line(geodesics.sample(rng)); });
    result.shooting_failures = failures.load();
    if (result.shooting_failures * 1000 > run.n)
        throw NumericalError("g_crofton_check: more than 0.1% shooting failures");
    return result;
}

} // namespace h3geo
