#include "h3geo/conjugacy.hpp"

#include <algorithm>
#include <cmath>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
    int n = std::max(2, intervals);
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

BusemannShift::BusemannShift(const GTrajectory& traj)
    : traj_(&traj), n_eta_(traj.forward_endpoint()) {
    a0_ = -mdot(traj.point_at(0.0), n_eta_);
    if (a0_ <= 0.0) throw NumericalError("BusemannShift: invalid base point");
}

double BusemannShift::operator()(double t) const {
    const double a = -mdot(traj_->point_at(t), n_eta_);
    return std::log(a0_ / a);
}

double BusemannShift::sliding_average(double t, double tau, int intervals) const {
    const double st = (*this)(t);
    return simpson([&](double x) { return (*this)(t + x) - st; }, 0.0, tau,
                   intervals) /
           tau;
}

ChiResult chi(const ConformalMetric& g, const FlowState& v,
              const ConjugacyOptions& opts) {
    if (opts.tau <= 0.0) throw DomainError("chi: tau must be positive");
    const GTrajectory traj = trace_geodesic(g, v, opts.flow);
    const BusemannShift shift(traj);

    ChiResult out;
    out.straight = GeodesicLine::from_endpoints(traj.backward_endpoint(),
                                                traj.forward_endpoint());
    // On the straightened geodesic, <sigma(t), n_eta> = -sqrt(s/2) e^{-t};
    // the Busemann zero level through the base point solves in closed form.
    const double c = std::sqrt(0.5 * out.straight.endpoint_gram());
    const double a0 = -mdot(traj.point_at(0.0), out.straight.eta);
    const double t_zero = std::log(c / a0);
    out.r_value = shift.sliding_average(0.0, opts.tau, opts.quad_intervals);
    out.straight_time = t_zero + out.r_value;
    out.point = normalize_point(out.straight.point_at(out.straight_time));
    out.tangent = out.straight.tangent_at(out.straight_time);
    return out;
}

namespace {

double time_change_from(const BusemannShift& shift, double t, double tau,
                        int intervals) {
    return shift.sliding_average(t, tau, intervals) + shift(t) -
           shift.sliding_average(0.0, tau, intervals);
}

} // namespace

TimeChangeTable time_change(const ConformalMetric& g, const FlowState& v,
                            const std::vector<double>& t_grid,
                            const ConjugacyOptions& opts) {
    const GTrajectory traj = trace_geodesic(g, v, opts.flow);
    const BusemannShift shift(traj);
    TimeChangeTable table;
    table.t_grid = t_grid;
    table.r0 = shift.sliding_average(0.0, opts.tau, opts.quad_intervals);
    for (double t : t_grid)
        table.values.push_back(
            time_change_from(shift, t, opts.tau, opts.quad_intervals));
    // Richardson centered difference for Psi(v).
    auto T = [&](double t) {
        return time_change_from(shift, t, opts.tau, opts.quad_intervals);
    };
    const double h = 1e-2;
    const double d1 = (T(h) - T(-h)) / (2.0 * h);
    const double d2 = (T(0.5 * h) - T(-0.5 * h)) / h;
    table.rate0 = (4.0 * d2 - d1) / 3.0;
    return table;
}

double time_change_at(const ConformalMetric& g, const FlowState& v, double t,
                      const ConjugacyOptions& opts) {
    const GTrajectory traj = trace_geodesic(g, v, opts.flow);
    const BusemannShift shift(traj);
    return time_change_from(shift, t, opts.tau, opts.quad_intervals);
}

double conjugacy_residual(const ConformalMetric& g, const FlowState& v, double t,
                          const ConjugacyOptions& opts) {
    const ChiResult base = chi(g, v, opts);
    const double T = time_change_at(g, v, t, opts);
    const LorentzVec lhs_point =
        normalize_point(base.straight.point_at(base.straight_time + T));
    const LorentzVec lhs_tangent = base.straight.tangent_at(base.straight_time + T);

    const FlowState flowed = flow(g, v, t, opts.flow);
    const ChiResult moved = chi(g, flowed, opts);

    const double position = dist(lhs_point, moved.point);
    const double ct = std::clamp(mdot(lhs_tangent, moved.tangent), -1.0, 1.0);
    return position + std::acos(ct);
}

double cocycle_residual(const ConformalMetric& g, const FlowState& v,
                        const std::vector<double>& grid,
                        const ConjugacyOptions& opts) {
    const GTrajectory traj = trace_geodesic(g, v, opts.flow);
    const BusemannShift shift(traj);
    double worst = 0.0;
    for (double b : grid) {
        const FlowState flowed = flow(g, v, b, opts.flow);
        const GTrajectory traj_b = trace_geodesic(g, flowed, opts.flow);
        const BusemannShift shift_b(traj_b);
        const double Tb = time_change_from(shift, b, opts.tau, opts.quad_intervals);
        for (double a : grid) {
            const double lhs =
                time_change_from(shift, a + b, opts.tau, opts.quad_intervals);
            const double mid =
                time_change_from(shift_b, a, opts.tau, opts.quad_intervals);
            worst = std::max(worst, std::abs(lhs - mid - Tb));
        }
    }
    return worst;
}

double bounded_distance_check(const ConformalMetric& g, double window_radius,
                              std::uint64_t samples, std::uint64_t seed,
                              const ConjugacyOptions& opts) {
    Philox rng(seed, 17);
    double worst = 0.0;
    const double radial_total =
        (std::sinh(window_radius) * std::cosh(window_radius) - window_radius) / 2.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double target = rng.u01() * radial_total;
        double lo = 0.0, hi = window_radius, rho = 0.5 * window_radius;
        for (int it = 0; it < 60; ++it) {
            const double sh = std::sinh(rho);
            const double f = (sh * std::cosh(rho) - rho) / 2.0 - target;
            (f > 0.0 ? hi : lo) = rho;
            double next = sh > 1e-15 ? rho - f / (sh * sh) : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - rho) < 1e-14) break;
            rho = next;
        }
        const LorentzVec x{std::cosh(rho), scale3(rng.unit_sphere(), std::sinh(rho))};
        const auto frame = tangent_frame(x);
        const Vec3 d = rng.unit_sphere();
        const LorentzVec tangent =
            frame[0] * d[0] + frame[1] * d[1] + frame[2] * d[2];
        const ChiResult image = chi(g, make_state(g, x, tangent), opts);
        worst = std::max(worst, dist(image.point, x));
    }
    return worst;
}

PsiLengthResult psi_length_identity(const ConformalMetric& g, const FlowState& v,
                                    double t, const ConjugacyOptions& opts) {
    const GTrajectory traj = trace_geodesic(g, v, opts.flow);
    const BusemannShift shift(traj);
    auto T = [&](double x) {
        return time_change_from(shift, x, opts.tau, opts.quad_intervals);
    };
    PsiLengthResult out;
    out.shift = shift(t);
    // Psi along the flow from centered differences of T, then Simpson.
    const int n = 200;
    const double h = t / n;
    const double dh = std::min(1e-2, 0.5 * std::abs(h) + 1e-3);
    auto psi_at = [&](double s) { return (T(s + dh) - T(s - dh)) / (2.0 * dh); };
    out.psi_integral = simpson(psi_at, 0.0, t, n);
    for (int i = 0; i <= n; ++i)
        out.r_sup = std::max(
            out.r_sup,
            std::abs(shift.sliding_average(i * h, opts.tau, opts.quad_intervals)));
    return out;
}

HolderFit psi_holder_probe(const ConformalMetric& g, double window_radius,
                           std::uint64_t pairs, std::uint64_t seed,
                           const ConjugacyOptions& opts) {
    Philox rng(seed, 19);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::uint64_t kept = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const double rho = window_radius * std::cbrt(rng.u01());
        const LorentzVec x{std::cosh(rho), scale3(rng.unit_sphere(), std::sinh(rho))};
        const auto frame = tangent_frame(x);
        const Vec3 d = rng.unit_sphere();
        const LorentzVec tangent =
            frame[0] * d[0] + frame[1] * d[1] + frame[2] * d[2];
        const FlowState a = make_state(g, x, tangent);
        // Nearby state: flow a short random time, tilt slightly.
        const double eps = std::pow(10.0, rng.uniform(-3.0, -1.0));
        const FlowState b = flow(g, a, eps, opts.flow);
        const auto ta = time_change(g, a, {}, opts);
        const auto tb = time_change(g, b, {}, opts);
        const double gap = std::abs(ta.rate0 - tb.rate0);
        if (gap < 1e-12) continue;
        const double lx = std::log(eps), ly = std::log(gap);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++kept;
    }
    HolderFit fit;
    fit.pairs = kept;
    if (kept >= 2) {
        const double n = static_cast<double>(kept);
        fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        fit.log_prefactor = (sy - fit.exponent * sx) / n;
    }
    return fit;
}

} // namespace h3geo
