#pragma once

// Orbit equivalence between the geodesic flow of a conformally perturbed
// metric g and the hyperbolic flow, built from Busemann zero levels: the
// shift s(t,v) along the shared forward endpoint, its sliding average r(v),
// the conjugacy chi(v) on the straightened geodesic, the time change
// T(t,v) = r(flow_t v) + s(t,v) - r(v), and the rate Psi = dT/dt(0).

#include <cstdint>
#include <utility>
#include <vector>

#include "h3geo/estimate.hpp"
#include "h3geo/lorentz.hpp"
#include "h3geo/metrics.hpp"

namespace h3geo {

struct ConjugacyOptions {
    double tau = 1.0;          // averaging horizon for r(v); must be > 0
    FlowOptions flow{};        // trajectory tracing options
    int quad_intervals = 256;  // Simpson subdivisions per unit length
};

// Busemann shift along a traced trajectory toward its forward endpoint:
// s(t) = B_eta(x(0), x(t)), closed form on the ray parts.
class BusemannShift {
public:
    explicit BusemannShift(const GTrajectory& traj);
    double operator()(double t) const;
    // Sliding tau-average r(t) = (1/tau) integral of s(t+x) - s(t) dx.
    double sliding_average(double t, double tau, int intervals) const;

private:
    const GTrajectory* traj_;
    LorentzVec n_eta_;
    double a0_;  // -<x(0), n_eta>
};

struct ChiResult {
    GeodesicLine straight;  // gbar-geodesic with the trajectory's endpoints
    double straight_time;   // parameter of chi(v) on that geodesic
    LorentzVec point;       // realized base point
    LorentzVec tangent;     // forward gbar-unit tangent
    double r_value;         // the averaging shift r(v)
};

// The conjugacy image of a g-unit state: the Busemann zero of the
// straightened geodesic flowed by r(v). Endpoint extraction is exact on the
// ray parts of the trace, so no root finding is involved.
ChiResult chi(const ConformalMetric& g, const FlowState& v,
              const ConjugacyOptions& opts = {});

struct TimeChangeTable {
    std::vector<double> t_grid;
    std::vector<double> values;  // T(t, v) on the grid
    double rate0 = 0.0;          // Psi(v) = dT/dt at 0, Richardson difference
    double r0 = 0.0;             // r(v)
};

TimeChangeTable time_change(const ConformalMetric& g, const FlowState& v,
                            const std::vector<double>& t_grid,
                            const ConjugacyOptions& opts = {});

// T(t, v) at a single time, plus Psi at a given trajectory time (both from
// the same tabulated trajectory).
double time_change_at(const ConformalMetric& g, const FlowState& v, double t,
                      const ConjugacyOptions& opts = {});

// Phase-space gap between flowing chi(v) for T(t,v) and applying chi to the
// flowed state: position distance plus tangent angle.
double conjugacy_residual(const ConformalMetric& g, const FlowState& v, double t,
                          const ConjugacyOptions& opts = {});

// Largest cocycle defect |T(a+b,v) - T(a, flow_b(v)) - T(b,v)| over a grid
// of (a, b) pairs; the middle term is recomputed from a fresh trace.
double cocycle_residual(const ConformalMetric& g, const FlowState& v,
                        const std::vector<double>& grid,
                        const ConjugacyOptions& opts = {});

// max over sampled states of d_gbar(base(chi(v)), base(v)); states drawn
// from the gbar-Liouville measure in the window ball.
double bounded_distance_check(const ConformalMetric& g, double window_radius,
                              std::uint64_t samples, std::uint64_t seed,
                              const ConjugacyOptions& opts = {});

struct PsiLengthResult {
    double psi_integral = 0.0;  // integral of Psi along the flow over [0, t]
    double shift = 0.0;         // s(t, v)
    double r_sup = 0.0;         // sup of |r| seen along the way
};

// Open-trajectory surrogate of the closed-geodesic length identity:
// the integral of Psi equals s(t,v) up to the boundary terms r.
PsiLengthResult psi_length_identity(const ConformalMetric& g, const FlowState& v,
                                    double t, const ConjugacyOptions& opts = {});

struct HolderFit {
    double log_prefactor = 0.0;  // ln L
    double exponent = 0.0;       // alpha
    std::uint64_t pairs = 0;
};

// Least-squares fit of ln |Psi(v) - Psi(w)| against ln d(v, w) on sampled
// nearby state pairs; reported, never asserted.
HolderFit psi_holder_probe(const ConformalMetric& g, double window_radius,
                           std::uint64_t pairs, std::uint64_t seed,
                           const ConjugacyOptions& opts = {});

} // namespace h3geo
