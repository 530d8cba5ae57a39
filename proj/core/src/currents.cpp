#include "h3geo/currents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool same_matrix(const Isometry& a, const Isometry& b, double tol = 1e-8) {
    double scale = 1.0;
    for (int i = 0; i < 16; ++i) scale = std::max(scale, std::abs(a.m[i]));
    for (int i = 0; i < 16; ++i)
        if (std::abs(a.m[i] - b.m[i]) > tol * scale) return false;
    return true;
}

// Orbit atoms are deduplicated coarsely: images of one seed under elements
// differing by a stabilizer element drift apart by roughly exp(2 * word
// length) * eps near the fixed points, while genuinely distinct atoms that
// can contribute to a count are separated at word scale. Far-out atoms that
// this tolerance could confuse cross any fundamental domain far from it and
// contribute nothing; the enumeration-growth check guards the rest.
constexpr double kAtomDedupTol = 1e-4;

} // namespace

std::vector<Isometry> GroupAction::enumerate_elements(int bound) const {
    std::vector<Isometry> result{Isometry::identity()};
    std::vector<Isometry> moves;
    for (const auto& g : generators) {
        moves.push_back(g);
        moves.push_back(g.inverse());
    }
    // Plain products: Gram-Schmidt cleanup would inject |A|^2 * eps errors,
    // which destroys the contracting eigendirection at moderate rapidity.
    std::vector<Isometry> frontier = result;
    for (int depth = 0; depth < bound; ++depth) {
        std::vector<Isometry> next;
        for (const auto& w : frontier)
            for (const auto& m : moves) {
                Isometry candidate = w * m;
                const bool seen =
                    std::any_of(result.begin(), result.end(),
                                [&](const Isometry& e) { return same_matrix(e, candidate); }) ||
                    std::any_of(next.begin(), next.end(),
                                [&](const Isometry& e) { return same_matrix(e, candidate); });
                if (!seen) next.push_back(candidate);
            }
        if (next.empty()) break;
        result.insert(result.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return result;
}

std::function<bool(const LorentzVec&)> busemann_slab(const LorentzVec& eta,
                                                     double lo, double length) {
    const LorentzVec n = normalize_boundary(eta);
    const LorentzVec o = origin_point();
    const double hi = lo + length;
    return [n, o, lo, hi](const LorentzVec& x) {
        const double b = busemann(n, o, x);
        return b >= lo && b < hi;
    };
}

std::vector<WeightedCircle> AtomicConformalCurrent::orbit(
    const std::vector<Isometry>& elements) const {
    std::vector<WeightedCircle> out;
    for (const auto& g : elements)
        for (const auto& seed : seeds) {
            const RoundCircle image = apply(g, seed.circle);
            const bool seen = std::any_of(out.begin(), out.end(), [&](const WeightedCircle& c) {
                return c.circle.same_circle(image, kAtomDedupTol);
            });
            if (!seen) out.push_back({image, seed.weight});
        }
    return out;
}

std::vector<WeightedPair> AtomicGeodesicCurrent::orbit(
    const std::vector<Isometry>& elements) const {
    std::vector<WeightedPair> out;
    for (const auto& g : elements)
        for (const auto& seed : seeds) {
            const BoundaryPair image = apply(g, seed.pair);
            const bool seen = std::any_of(out.begin(), out.end(), [&](const WeightedPair& p) {
                return p.pair.same_pair(image, kAtomDedupTol);
            });
            if (!seen) out.push_back({image, seed.weight});
        }
    return out;
}

namespace {

double count_linked_pairs(const GroupAction& group,
                          const std::vector<WeightedCircle>& circles,
                          const std::vector<WeightedPair>& pairs) {
    double total = 0.0;
    for (const auto& wc : circles)
        for (const auto& wp : pairs) {
            const LinkResult lr = linking(wc.circle, wp.pair, group.boundary_tol);
            if (lr.link == 0) {
                if (lr.degenerate) {
                    // Only reject degeneracies that could change the count:
                    // the pair might cross inside the domain.
                    throw DegenerateError(
                        "intersection_form_atomic: orbit pair inside the "
                        "linking degeneracy band");
                }
                continue;
            }
            const auto x = geodesic_plane_intersection(wp.pair.line(), wc.circle);
            if (x && group.in_domain(*x)) total += wc.weight * wp.weight;
        }
    return total;
}

} // namespace

double intersection_form_atomic(const GroupAction& group,
                                const AtomicConformalCurrent& mu,
                                const AtomicGeodesicCurrent& lambda) {
    if (!group.in_domain)
        throw DomainError("intersection_form_atomic: fundamental domain required");
    const auto elements = group.enumerate_elements(group.word_bound);
    const double count =
        count_linked_pairs(group, mu.orbit(elements), lambda.orbit(elements));
    const auto grown = group.enumerate_elements(group.word_bound + 2);
    const double count2 =
        count_linked_pairs(group, mu.orbit(grown), lambda.orbit(grown));
    if (std::abs(count - count2) > 1e-9)
        throw NumericalError(
            "intersection_form_atomic: count unstable under enumeration growth (" +
            std::to_string(count) + " vs " + std::to_string(count2) + ")");
    return count;
}

int geometric_intersection_oracle(const QuotientSurface& surface,
                                  const QuotientCurve& curve,
                                  const GroupAction& group) {
    auto count_with = [&](int bound) {
        const auto elements = group.enumerate_elements(bound);
        std::vector<RoundCircle> translates;
        for (const auto& g : elements)
            for (const auto& plane : surface.coset_planes) {
                const RoundCircle image = apply(g, plane);
                const bool seen =
                    std::any_of(translates.begin(), translates.end(),
                                [&](const RoundCircle& c) { return c.same_circle(image); });
                if (!seen) translates.push_back(image);
            }
        int k = 0;
        for (const auto& plane : translates) {
            const double A = mdot(curve.axis.p, plane.normal);
            const double B = mdot(curve.axis.w, plane.normal);
            if (std::abs(A) < 1e-12 && std::abs(B) < 1e-12)
                throw DegenerateError(
                    "geometric_intersection_oracle: axis lies in a translate plane");
            if (std::abs(B) <= std::abs(A)) continue;  // no crossing
            const double t = std::atanh(-A / B);
            if (t >= curve.segment_start &&
                t < curve.segment_start + curve.translation_length)
                ++k;
        }
        return k;
    };
    const int k1 = count_with(group.word_bound);
    const int k2 = count_with(group.word_bound + 2);
    if (k1 != k2)
        throw NumericalError("geometric_intersection_oracle: unstable count");
    return k1;
}

Estimate intersection_nu_geodesic(const GeodesicLine& axis, double length,
                                  const PlaneSampler& planes, const McRun& run,
                                  double t0) {
    if (length <= 0.0) return Estimate{0.0, 0.0, run.n};
    const LorentzVec a = axis.point_at(t0);
    const LorentzVec b = axis.point_at(t0 + length);
    const double reach =
        std::max(dist(origin_point(), a), dist(origin_point(), b));
    planes.require_inside(reach);
    return mc_mean(planes.mass(), run.n, run.shards, run.seed, run.stream,
                   [&](Philox& rng) {
                       const RoundCircle sigma = planes.sample(rng);
                       const double fa = mdot(a, sigma.normal);
                       const double fb = mdot(b, sigma.normal);
                       return fa * fb < 0.0 ? 1.0 : 0.0;
                   });
}

EstimatePair intersection_plane_liouville(const SurfacePatch& patch,
                                          const GeodesicSampler& geodesics,
                                          const McRun& run) {
    geodesics.require_inside(patch.bounding_radius());
    return mc_mean_pair(geodesics.mass(), run.n, run.shards, run.seed, run.stream,
                        [&](Philox& rng, double* out) {
                            const int k = patch.crossings(geodesics.sample(rng));
                            out[0] = k >= 1 ? 1.0 : 0.0;
                            out[1] = static_cast<double>(k);
                        });
}

WindowedIntersection windowed_intersection_check(const Region& region,
                                                 double region_volume,
                                                 const PlaneSampler& planes,
                                                 const GeodesicSampler& geodesics,
                                                 const McRun& run) {
    planes.require_inside(region.bounding_radius);
    geodesics.require_inside(region.bounding_radius);
    WindowedIntersection out;
    out.reference = 2.0 * kPi * kPi * region_volume;
    out.double_integral = mc_mean(
        planes.mass() * geodesics.mass(), run.n, run.shards, run.seed, run.stream,
        [&](Philox& rng) {
            const RoundCircle sigma = planes.sample(rng);
            const GeodesicLine u = geodesics.sample(rng);
            const auto x = geodesic_plane_intersection(u, sigma);
            return (x && region.contains(*x)) ? 1.0 : 0.0;
        });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    double x;
    while (ss >> x) out.push_back(x);
    return out;
}

} // namespace

IntersectionFixture load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("fixture file missing: " + path);
    IntersectionFixture fx;
    bool have_domain = false, have_axis = false;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        const std::string value = line.substr(eq + 1);
        if (key == "name") {
            std::istringstream ss(value);
            ss >> fx.name;
        } else if (key == "generator") {
            const auto v = parse_numbers(value);
            if (v.size() != 16)
                throw ConfigError("fixture generator needs 16 entries: " + path);
            Isometry g;
            std::copy(v.begin(), v.end(), g.m.begin());
            if (g.form_residual() > 1e-8)
                throw ConfigError("fixture generator is not an isometry: " + path);
            fx.group.generators.push_back(g);
        } else if (key == "word_bound") {
            fx.group.word_bound = static_cast<int>(parse_numbers(value).at(0));
        } else if (key == "domain_slab") {
            const auto v = parse_numbers(value);
            if (v.size() != 6)
                throw ConfigError("domain_slab needs eta(4) lo length: " + path);
            fx.group.in_domain = busemann_slab(
                LorentzVec{v[0], v[1], v[2], v[3]}, v[4], v[5]);
            have_domain = true;
        } else if (key == "mu_circle") {
            const auto v = parse_numbers(value);
            if (v.size() != 5)
                throw ConfigError("mu_circle needs normal(4) weight: " + path);
            const RoundCircle c =
                RoundCircle::from_normal(LorentzVec{v[0], v[1], v[2], v[3]});
            fx.mu.seeds.push_back({c, v[4]});
            fx.surface.coset_planes.push_back(c);
        } else if (key == "lambda_pair") {
            const auto v = parse_numbers(value);
            if (v.size() != 9)
                throw ConfigError("lambda_pair needs xi(4) eta(4) weight: " + path);
            fx.lambda.seeds.push_back(
                {BoundaryPair::make(LorentzVec{v[0], v[1], v[2], v[3]},
                                    LorentzVec{v[4], v[5], v[6], v[7]}),
                 v[8]});
        } else if (key == "axis") {
            const auto v = parse_numbers(value);
            if (v.size() != 8) throw ConfigError("axis needs xi(4) eta(4): " + path);
            fx.curve.axis = GeodesicLine::from_endpoints(
                LorentzVec{v[0], v[1], v[2], v[3]}, LorentzVec{v[4], v[5], v[6], v[7]});
            have_axis = true;
        } else if (key == "translation_length") {
            fx.curve.translation_length = parse_numbers(value).at(0);
        } else if (key == "segment_start") {
            fx.curve.segment_start = parse_numbers(value).at(0);
        } else if (key == "expected") {
            fx.expected = parse_numbers(value).at(0);
        } else {
            throw ConfigError("unknown fixture key '" + key + "': " + path);
        }
    }
    if (fx.group.generators.empty() || !have_domain || fx.mu.seeds.empty() ||
        fx.lambda.seeds.empty() || !have_axis)
        throw ConfigError("fixture incomplete: " + path);
    return fx;
}

} // namespace h3geo
