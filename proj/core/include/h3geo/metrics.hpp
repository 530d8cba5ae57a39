#pragma once

// Conformally perturbed metrics g = e^{2 phi} gbar given by compactly
// supported radial bumps (plus an optional constant), their geodesic flow in
// the ball chart, the geodesic stretch estimator, the pointwise area ratio,
// and the Crofton identity check for the perturbed metric.
//
// In the chart the full metric is e^{2 psi} * euclidean with
// psi = phi + ln(2 / (1 - |x|^2)); unit speed means |x'| e^{psi} = 1 and the
// geodesic equation is x'' = -2 (grad psi . x') x' + |x'|^2 grad psi.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "h3geo/estimate.hpp"
#include "h3geo/kinematic.hpp"
#include "h3geo/lorentz.hpp"
#include "h3geo/patch.hpp"

namespace h3geo {

struct Bump {
    LorentzVec center;   // H^3 point
    double radius = 1.0;  // hyperbolic support radius
    double amplitude = 0.0;
};

class ConformalMetric {
public:
    ConformalMetric() = default;  // the hyperbolic metric itself

    static ConformalMetric hyperbolic() { return ConformalMetric(); }
    // g = e^{2c} gbar; c = ln(scale) gives the homothety scale^2 * gbar.
    static ConformalMetric homothety(double log_scale);
    static ConformalMetric with_bumps(std::vector<Bump> bumps, double constant = 0.0);

    double phi_chart(const Vec3& x) const;
    Vec3 grad_phi_chart(const Vec3& x) const;
    double phi(const LorentzVec& p) const { return phi_chart(hyperboloid_to_ball(p)); }

    double psi_chart(const Vec3& x) const;
    Vec3 grad_psi_chart(const Vec3& x) const;

    bool is_homothety() const { return bumps_.empty(); }
    double constant_part() const { return constant_; }
    const std::vector<Bump>& bumps() const { return bumps_; }

    // Radius of the smallest ball around the origin containing every bump
    // support; zero when there are none.
    double support_radius() const;
    double max_amplitude() const;  // max |amplitude|, bumps only
    // Largest gbar-speed of a g-unit vector, e^{-min phi}.
    double max_speed() const;

    // Amplitude/radius caps plus a numerical negativity spot check of the
    // sectional curvature at random points. Throws DomainError on violation.
    void validate(std::uint64_t seed = 1, int probes = 64) const;

private:
    std::vector<Bump> bumps_;
    double constant_ = 0.0;
    struct ChartBump {  // precomputed chart data
        Vec3 center;
        double center_norm2;
        double cosh_radius;
        double amplitude;
    };
    std::vector<ChartBump> chart_;
};

// Sectional curvature of the plane spanned by gbar-orthonormal tangent
// vectors e1, e2 at x, by finite differences along exact gbar-geodesics.
double sectional_curvature(const ConformalMetric& g, const LorentzVec& x,
                           const LorentzVec& e1, const LorentzVec& e2,
                           double h = 1e-3);

// ---------------------------------------------------------------------------

struct FlowState {
    Vec3 x{0, 0, 0};  // chart position
    Vec3 u{0, 0, 0};  // chart velocity, g-unit: |u| e^{psi} = 1
    double t = 0.0;   // elapsed flow parameter
};

// State from hyperboloid data: base point and gbar-unit tangent.
FlowState make_state(const ConformalMetric& g, const LorentzVec& point,
                     const LorentzVec& tangent);
// Base point and gbar-unit tangent of a chart state.
std::pair<LorentzVec, LorentzVec> hyperboloid_state(const FlowState& s);

struct FlowOptions {
    double dt = 1e-3;
    double chart_limit = 0.999;
    double error_tol = 1e-6;  // step-doubling local error budget
    int check_every = 8;      // steps between step-doubling checks (0 = off)
};

struct FlowDiagnostics {
    double max_speed_drift = 0.0;  // |g-speed - 1| before renormalization
    double max_local_error = 0.0;
};

// Classical fourth-order integration of the chart geodesic equation with
// per-step unit-speed renormalization. Throws NumericalError on chart exit
// or when the local error estimate exceeds the budget.
FlowState flow(const ConformalMetric& g, const FlowState& start, double t,
               const FlowOptions& opts = {}, FlowDiagnostics* diag = nullptr);

// ---------------------------------------------------------------------------
// Complete g-geodesic through a state: exact gbar rays outside the bump
// support, dense ODE samples inside. Positions are exact on the ray parts,
// Hermite-interpolated on the ODE part. Boundary endpoints come from the
// exit rays, so no long-time integration is ever needed.

class GTrajectory {
public:
    LorentzVec point_at(double t) const;
    const LorentzVec& forward_endpoint() const { return eta_; }
    const LorentzVec& backward_endpoint() const { return xi_; }

    // Interval outside which the trajectory is an exact ray.
    double ode_start() const { return t_lo_; }
    double ode_end() const { return t_hi_; }

    // Crossing count with a surface patch (rays closed-form, interior by
    // sign-change refinement on the sample grid).
    int patch_crossings(const SurfacePatch& patch) const;

private:
    friend GTrajectory trace_geodesic(const ConformalMetric&, const FlowState&,
                                      const FlowOptions&);
    struct Sample {
        double t;
        Vec3 x, u;
    };
    // Pure-ray trajectory: gbar-geodesic traversed at constant rate.
    bool pure_ray_ = true;
    double rate_ = 1.0;        // gbar-arclength per unit flow time on rays
    LorentzVec ray_p_, ray_w_;  // frame at t = 0 for the pure-ray case
    // Hybrid pieces.
    double t_lo_ = 0.0, t_hi_ = 0.0;
    LorentzVec lo_p_, lo_w_;  // backward exit state: ray for t <= t_lo_
    LorentzVec hi_p_, hi_w_;  // forward exit state: ray for t >= t_hi_
    std::vector<Sample> samples_;  // ODE samples covering [t_lo_, t_hi_]
    LorentzVec xi_, eta_;

    LorentzVec interior_point(double t) const;
};

GTrajectory trace_geodesic(const ConformalMetric& g, const FlowState& start,
                           const FlowOptions& opts = {});

// ---------------------------------------------------------------------------

struct StretchResult {
    Estimate stretch;
    bool horizon_warning = false;  // horizon < 10 x bump diameter
};

// Geodesic stretch of gbar against g: base points sampled from the g-volume
// in the window ball, directions uniform on the g-unit sphere, each
// trajectory flowed for the horizon and measured by gbar-displacement/time.
StretchResult geodesic_stretch(const ConformalMetric& g, double window_radius,
                               double horizon, const McRun& run,
                               const FlowOptions& opts = {});

// Ratio area_g(patch_delta)/delta for a gbar-geodesic patch of area delta
// tangent to the plane with unit normal `normal` at x; converges to
// e^{2 phi(x)}. delta must lie in [1e-6, 1e-2].
double area_ratio_pointwise(const ConformalMetric& g, const LorentzVec& x,
                            const LorentzVec& normal, double delta,
                            int quadrature = 64);

// g-area of a geodesic disk patch by polar quadrature of e^{2 phi}.
double disk_area_g(const ConformalMetric& g, const DiskPatch& patch,
                   int quadrature = 256);

struct GCroftonResult {
    Estimate crossing_mass;    // integral of #(gamma_g(u) cap Sigma)
    double target = 0.0;       // pi * area_g(Sigma)
    std::uint64_t shooting_failures = 0;
};

struct ShootingOptions {
    double tol = 1e-7;     // chordal endpoint error
    int max_iterations = 15;
    double fd_step = 1e-6;  // finite-difference step for the 2x2 Jacobian
};

// Eq.-style Crofton check in the perturbed metric: sample boundary pairs
// from the geodesic measure, realize each g-geodesic with those endpoints by
// shooting from the gbar entry data, count patch crossings. Runs with more
// than 0.1% shooting failures throw NumericalError.
GCroftonResult g_crofton_check(const ConformalMetric& g, const DiskPatch& patch,
                               const GeodesicSampler& geodesics, const McRun& run,
                               const FlowOptions& flow_opts = {},
                               const ShootingOptions& shoot_opts = {});

} // namespace h3geo
