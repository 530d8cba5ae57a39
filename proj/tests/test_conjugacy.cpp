#include <doctest.h>

#include <cmath>

#include "h3geo/conjugacy.hpp"
#include "h3geo/errors.hpp"

using namespace h3geo;

namespace {

ConformalMetric bump_metric() {
    return ConformalMetric::with_bumps({Bump{origin_point(), 1.2, 0.08}});
}

FlowState state_at(const ConformalMetric& g, const Vec3& chart_x, const Vec3& dir) {
    FlowState s;
    s.x = chart_x;
    s.u = scale3(normalized3(dir), std::exp(-g.psi_chart(chart_x)));
    return s;
}

std::vector<FlowState> sample_states(const ConformalMetric& g, int n,
                                     std::uint64_t seed, double rmax = 0.4) {
    Philox rng(seed, 0);
    std::vector<FlowState> out;
    for (int i = 0; i < n; ++i) {
        const Vec3 x = scale3(rng.unit_sphere(), rmax * rng.u01());
        out.push_back(state_at(g, x, rng.unit_sphere()));
    }
    return out;
}

} // namespace

TEST_CASE("chi of the hyperbolic metric is the half-tau flow shift") {
    const ConformalMetric gbar;
    for (const auto& v : sample_states(gbar, 10, 41)) {
        const ChiResult image = chi(gbar, v);
        CHECK(std::abs(image.r_value - 0.5) <= 1e-9);
        const FlowState shifted = flow(gbar, v, 0.5);
        CHECK(dist(image.point, ball_to_hyperboloid(shifted.x)) <= 1e-7);
    }
}

TEST_CASE("chi preserves the boundary endpoints") {
    const ConformalMetric g = bump_metric();
    for (const auto& v : sample_states(g, 20, 43)) {
        const GTrajectory traj = trace_geodesic(g, v);
        const ChiResult image = chi(g, v);
        CHECK(chordal(image.straight.eta, traj.forward_endpoint()) <= 1e-6);
        CHECK(chordal(image.straight.xi, traj.backward_endpoint()) <= 1e-6);
        // Endpoint stability under extending the integration by 5 units:
        // past the support the trajectory is already an exact ray, so the
        // flowed state regenerates the same endpoints.
        const FlowState far = flow(g, v, traj.ode_end() + 5.0);
        const GTrajectory again = trace_geodesic(g, far);
        CHECK(chordal(again.forward_endpoint(), traj.forward_endpoint()) <= 1e-6);
    }
}

TEST_CASE("chi is equivariant under a common isometry") {
    const ConformalMetric g = bump_metric();
    Philox rng(47, 0);
    for (int i = 0; i < 5; ++i) {
        const Isometry A = random_isometry(rng, 0.7);
        // Transport the metric with the state: conjugation moves the bumps.
        std::vector<Bump> moved;
        for (const auto& b : g.bumps())
            moved.push_back(Bump{apply_point(A, b.center), b.radius, b.amplitude});
        const ConformalMetric gA = ConformalMetric::with_bumps(moved);

        const FlowState v = sample_states(g, 1, 100 + i)[0];
        const auto [p, w] = hyperboloid_state(v);
        const FlowState Av = make_state(gA, apply_point(A, p),
                                        normalize_normal(A(w)));
        const ChiResult lhs = chi(gA, Av);
        const ChiResult rhs = chi(g, v);
        CHECK(dist(lhs.point, apply_point(A, rhs.point)) <= 1e-6);
    }
}

TEST_CASE("time change of gbar is the identity with unit rate") {
    const ConformalMetric gbar;
    const FlowState v = state_at(gbar, {0.1, -0.05, 0.02}, {0.3, 1.0, -0.2});
    const std::vector<double> grid{-1.0, -0.3, 0.4, 1.1, 2.0};
    const TimeChangeTable table = time_change(gbar, v, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(table.values[i] - grid[i]) <= 1e-6);
    CHECK(std::abs(table.rate0 - 1.0) <= 1e-6);
}

TEST_CASE("time change of a homothety rescales time") {
    const ConformalMetric half = ConformalMetric::homothety(std::log(2.0));
    const FlowState v = state_at(half, {0.05, 0.1, 0.0}, {1.0, -0.4, 0.3});
    const std::vector<double> grid{0.5, 1.0, 2.0};
    const TimeChangeTable table = time_change(half, v, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(table.values[i] - 0.5 * grid[i]) <= 1e-4);
    CHECK(std::abs(table.rate0 - 0.5) <= 1e-4);
}

TEST_CASE("cocycle identity for the time change") {
    const ConformalMetric g = bump_metric();
    const FlowState v = state_at(g, {0.12, 0.03, -0.07}, {0.2, 0.9, 0.4});
    const std::vector<double> grid{0.4, 0.9, 1.4, 1.9, 2.4};
    CHECK(cocycle_residual(g, v, grid) <= 1e-5);
}

TEST_CASE("conjugacy residual") {
    const ConformalMetric gbar;
    const FlowState v0 = state_at(gbar, {0.05, 0.0, 0.1}, {1.0, 0.2, -0.1});
    CHECK(conjugacy_residual(gbar, v0, 1.5) <= 1e-7);

    const ConformalMetric g = bump_metric();
    double worst = 0.0;
    for (const auto& v : sample_states(g, 10, 53))
        for (double t : {0.5, 1.5, 3.0})
            worst = std::max(worst, conjugacy_residual(g, v, t));
    CHECK(worst <= 1e-4);

    // Halving all step sizes moves the residual by at most a factor two
    // (plus a tiny floor), so tolerances, not bias, dominate.
    const FlowState v = sample_states(g, 1, 59)[0];
    ConjugacyOptions fine;
    fine.flow.dt = 0.5e-3;
    fine.quad_intervals = 512;
    const double r_coarse = conjugacy_residual(g, v, 2.0);
    const double r_fine = conjugacy_residual(g, v, 2.0, fine);
    // Both sit at the roundoff floor of the angle comparison, far below the
    // budget; halving steps must not reveal a bias.
    CHECK(r_fine <= 2.0 * r_coarse + 1e-6);
}

TEST_CASE("bounded distance between a state and its image") {
    const ConformalMetric gbar;
    const double d = bounded_distance_check(gbar, 2.0, 100, 61);
    CHECK(d == doctest::Approx(0.5).epsilon(1e-6));  // exactly tau/2

    // Homothety log 2: r = tau/4, so the displacement is exactly tau/4.
    const ConformalMetric half = ConformalMetric::homothety(std::log(2.0));
    const double dh = bounded_distance_check(half, 2.0, 100, 67);
    CHECK(dh == doctest::Approx(0.25).epsilon(1e-4));

    // Bump metric: the maximal displacement stays bounded as the window
    // grows. States interacting with the bump thin out like 1/sinh^2(R), so
    // the larger window gets proportionally more samples.
    const ConformalMetric g = bump_metric();
    const double d3 = bounded_distance_check(g, 3.0, 2000, 71);
    const double d5 = bounded_distance_check(g, 5.0, 20000, 73);
    CHECK(std::isfinite(d3));
    CHECK(d3 >= 0.5 - 1e-9);
    CHECK(d5 <= 1.2 * std::max(d3, 0.5));
}

TEST_CASE("length identity along open trajectories") {
    const ConformalMetric gbar;
    const FlowState v0 = state_at(gbar, {0.0, 0.08, -0.03}, {0.6, -0.2, 1.0});
    const PsiLengthResult flat = psi_length_identity(gbar, v0, 2.0);
    CHECK(std::abs(flat.psi_integral - 2.0) <= 1e-6);
    CHECK(std::abs(flat.shift - 2.0) <= 1e-6);

    const ConformalMetric half = ConformalMetric::homothety(std::log(2.0));
    const PsiLengthResult scaled = psi_length_identity(half, v0, 2.0);
    CHECK(std::abs(scaled.psi_integral - 1.0) <= 1e-4);
    CHECK(std::abs(scaled.shift - 1.0) <= 1e-4);

    const ConformalMetric g = bump_metric();
    for (const auto& v : sample_states(g, 10, 79)) {
        const PsiLengthResult r = psi_length_identity(g, v, 5.0);
        CHECK(std::abs(r.psi_integral - r.shift) <= 2.0 * r.r_sup + 1e-4);
    }
}

TEST_CASE("rate is positive on sampled states") {
    const ConformalMetric g = bump_metric();
    for (const auto& v : sample_states(g, 20, 83)) {
        const TimeChangeTable t = time_change(g, v, {});
        CHECK(t.rate0 > 0.0);
    }
}

TEST_CASE("holder probe reports a sane fit") {
    const ConformalMetric g = bump_metric();
    const HolderFit fit = psi_holder_probe(g, 0.8, 40, 89);
    CHECK(fit.pairs >= 10);
    CHECK(std::isfinite(fit.exponent));
    MESSAGE("psi regularity fit: |dPsi| ~ exp(", fit.log_prefactor, ") * d^",
            fit.exponent, " from ", fit.pairs, " pairs");
}
