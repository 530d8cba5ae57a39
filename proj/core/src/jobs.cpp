#include "h3geo/jobs.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "h3geo/conjugacy.hpp"
#include "h3geo/currents.hpp"
#include "h3geo/entropy.hpp"
#include "h3geo/errors.hpp"
#include "h3geo/metrics.hpp"

namespace h3geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ball_volume(double r) { return kPi * (std::sinh(2.0 * r) - 2.0 * r); }
double disk_area(double r) { return 2.0 * kPi * (std::cosh(r) - 1.0); }

// Stream-id blocks keep independent jobs on independent counter streams.
enum Stream : std::uint64_t {
    kCalC0 = 0,
    kCalC1 = 1 * 4096,
    kCrofton = 2 * 4096,
    kSantalo = 3 * 4096,
    kLiouville = 4 * 4096,
    kLengthForm = 5 * 4096,
    kThm1 = 6 * 4096,
    kStretch = 7 * 4096,
    kConjugacy = 8 * 4096,
    kDiagnostics = 15 * 4096,
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }
    double lap() {
        const double s = seconds();
        start_ = std::chrono::steady_clock::now();
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

McRun mc(const JobConfig& job, std::uint64_t n, std::uint64_t stream) {
    McRun run;
    run.n = n;
    run.shards = job.shards;
    run.seed = job.seed;
    run.stream = stream;
    return run;
}

std::string calibration_path(const JobConfig& job) {
    return job.config.get_string("calibration", "file", "data/calibration.txt");
}

void maybe_write_convergence_csv(const JobConfig& job, const std::string& task,
                                 std::uint64_t n,
                                 const std::function<Estimate(std::uint64_t,
                                                              std::uint64_t)>& eval) {
    if (!job.diagnostics_csv) return;
    std::filesystem::create_directories(job.out_dir);
    std::ofstream csv(job.out_dir + "/" + task + "_convergence.csv");
    csv << "n,estimate,standard_error\n";
    csv.precision(12);
    std::uint64_t stream = kDiagnostics;
    for (std::uint64_t k = n / 128; k <= n; k *= 2) {
        const Estimate e = eval(k, stream);
        stream += 64;
        csv << e.n << "," << e.value << "," << e.se << "\n";
        if (k == n) break;
        if (2 * k > n) k = n / 2;
    }
}

} // namespace

const std::vector<std::string>& job_names() {
    static const std::vector<std::string> names = {
        "calibrate",        "verify-crofton",    "verify-santalo",
        "verify-liouville", "verify-length-form", "verify-thm1",
        "intersect",        "stretch",            "conjugacy",
        "entropy-asymptotics"};
    return names;
}

bool is_job_name(const std::string& name) {
    if (name == "all") return true;
    for (const auto& n : job_names())
        if (n == name) return true;
    return false;
}

// ---------------------------------------------------------------------------

std::vector<Report> run_calibrate(const JobConfig& job, Calibration* out) {
    const std::uint64_t n = job.config.get_u64("calibration", "n", 1000000);
    const double window = job.config.get_double("calibration", "window", 1.2);
    const double budget = job.config.get_double("calibration", "max_rel_se", 0.005);
    std::vector<Report> reports;
    Timer timer;

    Calibration cal = calibrate_nu(mc(job, n, kCalC0), window, 1.0, budget);
    {
        Report r;
        r.task = "calibrate.c0";
        r.estimate = cal.c0;
        r.target = cal.c0;
        r.standard_error = cal.se_c0;
        r.n_samples = n;
        r.seed = job.seed;
        r.shards = job.shards;
        r.elapsed_s = timer.lap();
        r.pass = cal.se_c0 / cal.c0 <= budget;
        reports.push_back(r);
    }
    // Consistency: a length-2 segment in a wider window must reproduce c0.
    const Calibration cal2 =
        calibrate_nu(mc(job, n, kCalC0 + 64), 1.6, 2.0, budget);
    reports.push_back(make_report("calibrate.c0_consistency", cal2.c0, cal2.se_c0,
                                  n, job.seed, job.shards, cal.c0, 0.0, 0.01,
                                  timer.lap()));

    const Calibration liou =
        calibrate_liouville(mc(job, n, kCalC1), window, 1.0, budget);
    cal.c1 = liou.c1;
    cal.se_c1 = liou.se_c1;
    {
        Report r;
        r.task = "calibrate.c1";
        r.estimate = cal.c1;
        r.target = cal.c1;
        r.standard_error = cal.se_c1;
        r.n_samples = n;
        r.seed = job.seed;
        r.shards = job.shards;
        r.elapsed_s = timer.lap();
        r.pass = cal.se_c1 / cal.c1 <= budget;
        reports.push_back(r);
    }

    const std::string path = calibration_path(job);
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path().string().empty()
            ? "."
            : std::filesystem::path(path).parent_path().string());
    save_calibration(cal, path);
    if (out) *out = cal;
    return reports;
}

Calibration require_calibration(const JobConfig& job) {
    return load_calibration(calibration_path(job));
}

std::vector<Report> run_verify_crofton(const JobConfig& job, const Calibration& cal) {
    const std::uint64_t n = job.config.get_u64("crofton", "n", 1000000);
    const double window = job.config.get_double("crofton", "window", 1.2);
    const double rtol = job.config.get_double("crofton", "rtol", 0.01);
    const PlaneSampler planes(window, cal.c0);
    std::vector<Report> reports;
    Timer timer;

    const Estimate segment =
        crofton_length(axis_segment(1.0), planes, mc(job, n, kCrofton));
    reports.push_back(make_report("crofton.segment_length", segment, job.seed,
                                  job.shards, 1.0, 0.0, rtol, timer.lap()));
    maybe_write_convergence_csv(
        job, "crofton_segment", n, [&](std::uint64_t k, std::uint64_t stream) {
            return crofton_length(axis_segment(1.0), planes, mc(job, k, stream));
        });

    // Hyperbolic circle of radius 1: circumference 2 pi sinh 1.
    const std::uint64_t cn = job.config.get_u64("crofton", "circle_n", 400000);
    const int segments = job.config.get_int("crofton", "circle_segments", 512);
    std::vector<LorentzVec> circle;
    for (int i = 0; i <= segments; ++i) {
        const double phi = 2.0 * kPi * i / segments;
        circle.push_back(LorentzVec{std::cosh(1.0), std::sinh(1.0) * std::cos(phi),
                                    std::sinh(1.0) * std::sin(phi), 0.0});
    }
    const PlaneSampler wide(window + 0.1, cal.c0);
    const Estimate circ =
        crofton_length(circle, wide, mc(job, cn, kCrofton + 128));
    reports.push_back(make_report("crofton.circle_circumference", circ, job.seed,
                                  job.shards, 2.0 * kPi * std::sinh(1.0), 0.0,
                                  0.02, timer.lap()));
    return reports;
}

std::vector<Report> run_verify_santalo(const JobConfig& job, const Calibration& cal) {
    const double window = job.config.get_double("santalo", "window", 1.2);
    const double rtol = job.config.get_double("santalo", "rtol", 0.02);
    const int quad = job.config.get_int("santalo", "quadrature", 256);
    const PlaneSampler planes(window, cal.c0);
    std::vector<Report> reports;
    Timer timer;

    const std::uint64_t nv = job.config.get_u64("santalo", "n_volume", 200000);
    const Estimate vol = santalo_volume(ball_region(origin_point(), 1.0), planes,
                                        mc(job, nv, kSantalo), quad);
    reports.push_back(make_report("santalo.ball_volume", vol, job.seed, job.shards,
                                  ball_volume(1.0), 0.0, rtol, timer.lap()));

    const std::uint64_t na = job.config.get_u64("santalo", "n_area", 200000);
    const Estimate area = santalo_area(equatorial_disk(1.0), planes,
                                       mc(job, na, kSantalo + 128));
    reports.push_back(make_report("santalo.disk_area", area, job.seed, job.shards,
                                  disk_area(1.0), 0.0, rtol, timer.lap()));

    // Coarea identity: plane-independent function reduces to the volume
    // identity; an angle-weighted one is checked route-against-route.
    const std::uint64_t nc = job.config.get_u64("santalo", "n_coarea", 60000);
    const double cr = job.config.get_double("santalo", "coarea_radius", 0.5);
    const PlaneSampler tight(cr + 0.2, cal.c0);
    const Region ball = ball_region(origin_point(), cr);
    auto psi_ball = [&](const LorentzVec& x, const LorentzVec&) {
        return ball.contains(x) ? 1.0 : 0.0;
    };
    const auto [lhs, rhs] =
        coarea_check(psi_ball, cr, tight, mc(job, nc, kSantalo + 256), 64);
    const double coarea_target = 2.0 * kPi * ball_volume(cr);
    reports.push_back(make_report("coarea.ball_direct", lhs, job.seed, job.shards,
                                  coarea_target, 0.0, rtol, timer.lap()));
    reports.push_back(make_report("coarea.ball_iterated", rhs, job.seed,
                                  job.shards, coarea_target, 0.0, rtol,
                                  timer.lap()));
    auto psi_angle = [&](const LorentzVec& x, const LorentzVec& normal) {
        if (!ball.contains(x)) return 0.0;
        const double c = mdot(normal, LorentzVec{0, 0, 0, 1});
        return c * c;
    };
    const auto [alhs, arhs] =
        coarea_check(psi_angle, cr, tight, mc(job, nc, kSantalo + 512), 64);
    reports.push_back(make_report("coarea.angle_weighted", alhs.value,
                                  std::hypot(alhs.se, arhs.se), alhs.n, job.seed,
                                  job.shards, arhs.value, 0.0, 0.01,
                                  timer.lap()));
    return reports;
}

std::vector<Report> run_verify_liouville(const JobConfig& job,
                                         const Calibration& cal) {
    const std::uint64_t n = job.config.get_u64("liouville", "n", 1000000);
    const double window = job.config.get_double("liouville", "window", 1.2);
    const double rtol = job.config.get_double("liouville", "rtol", 0.02);
    const GeodesicSampler geodesics(window, cal.c1);
    std::vector<Report> reports;
    Timer timer;

    // Crossing mass of the calibration disk, then the independent smaller one.
    const DiskPatch unit = equatorial_disk(1.0);
    const Estimate own = mc_mean(geodesics.mass(), n, job.shards, job.seed,
                                 kLiouville, [&](Philox& rng) {
                                     return static_cast<double>(
                                         unit.crossings(geodesics.sample(rng)));
                                 });
    reports.push_back(make_report("liouville.calibration_disk", own, job.seed,
                                  job.shards, kPi * disk_area(1.0), 0.0, 0.01,
                                  timer.lap()));

    const double cross_r = job.config.get_double("liouville", "cross_radius", 0.5);
    const DiskPatch cross = equatorial_disk(cross_r);
    const Estimate crossing = mc_mean(geodesics.mass(), n, job.shards, job.seed,
                                      kLiouville + 128, [&](Philox& rng) {
                                          return static_cast<double>(cross.crossings(
                                              geodesics.sample(rng)));
                                      });
    reports.push_back(make_report("liouville.cross_disk", crossing, job.seed,
                                  job.shards, kPi * disk_area(cross_r), 0.0, rtol,
                                  timer.lap()));
    maybe_write_convergence_csv(
        job, "liouville_cross_disk", n, [&](std::uint64_t k, std::uint64_t stream) {
            return mc_mean(geodesics.mass(), k, job.shards, job.seed, stream,
                           [&](Philox& rng) {
                               return static_cast<double>(
                                   cross.crossings(geodesics.sample(rng)));
                           });
        });

    // Weighted fiber identity: unweighted case plus a half-space indicator.
    const std::uint64_t fn = job.config.get_u64("liouville", "fiber_n", 300000);
    const auto [l1, r1] = fiber_crofton_check(
        unit, [](const GeodesicLine&) { return 1.0; }, geodesics,
        mc(job, fn, kLiouville + 256));
    reports.push_back(make_report("fiber.unweighted_lhs", l1, job.seed, job.shards,
                                  kPi * disk_area(1.0), 0.0, rtol, timer.lap()));
    reports.push_back(make_report("fiber.unweighted_rhs", r1, job.seed, job.shards,
                                  kPi * disk_area(1.0), 0.0, rtol, timer.lap()));
    const LorentzVec h = normalize_normal(LorentzVec{0.3, 1.1, 0.0, 0.2});
    auto halfspace = [h](const GeodesicLine& g) {
        return (mdot(g.xi, h) > 0.0 || mdot(g.eta, h) > 0.0) ? 1.0 : 0.0;
    };
    const auto [lh, rh] = fiber_crofton_check(unit, halfspace, geodesics,
                                              mc(job, fn, kLiouville + 512));
    reports.push_back(make_report("fiber.halfspace_weighted", lh.value,
                                  std::hypot(lh.se, rh.se), lh.n, job.seed,
                                  job.shards, rh.value, 0.0, 0.01, timer.lap()));
    return reports;
}

std::vector<Report> run_verify_length_form(const JobConfig& job,
                                           const Calibration& cal) {
    const std::uint64_t n = job.config.get_u64("length_form", "n", 1000000);
    const double window = job.config.get_double("length_form", "window", 1.2);
    const double rtol = job.config.get_double("length_form", "rtol", 0.02);
    const auto lengths = job.config.get_doubles("length_form", "lengths", {1.0, 2.0});
    const PlaneSampler planes(window, cal.c0);
    const GeodesicLine axis = GeodesicLine::from_endpoints(LorentzVec{1, 0, 0, -1},
                                                           LorentzVec{1, 0, 0, 1});
    std::vector<Report> reports;
    Timer timer;
    std::uint64_t stream = kLengthForm;
    for (double len : lengths) {
        const Estimate mass = intersection_nu_geodesic(
            axis, len, planes, mc(job, n, stream), -0.5 * len);
        stream += 128;
        reports.push_back(make_report(
            "length_form.l_" + std::to_string(len).substr(0, 4), mass, job.seed,
            job.shards, kPi * len, 0.0, rtol, timer.lap()));
    }
    return reports;
}

std::vector<Report> run_verify_thm1(const JobConfig& job, const Calibration& cal) {
    std::vector<Report> reports;
    Timer timer;

    // Part (i): equality for a totally geodesic patch, strict deficit for an
    // equal-area folded one.
    const std::uint64_t np = job.config.get_u64("thm1", "n_patch", 400000);
    const double pr = job.config.get_double("thm1", "patch_radius", 1.0);
    const double pw = job.config.get_double("thm1", "patch_window", pr + 0.2);
    const double fold = job.config.get_double("thm1", "fold_angle", 0.5 * kPi);
    const GeodesicSampler patch_geodesics(pw, cal.c1);
    const DiskPatch flat = equatorial_disk(pr);
    const EstimatePair flat_pair = intersection_plane_liouville(
        flat, patch_geodesics, mc(job, np, kThm1));
    reports.push_back(make_report("thm1i.flat_hit_mass", flat_pair.first, job.seed,
                                  job.shards, kPi * flat.area(), 0.0, 0.02,
                                  timer.lap()));
    reports.push_back(make_report("thm1i.flat_equality", flat_pair.second.value,
                                  flat_pair.diff_se, flat_pair.second.n, job.seed,
                                  job.shards, flat_pair.first.value, 1e-12, 0.0,
                                  timer.lap()));
    const UnionPatch folded = make_folded_disk(
        flat.plane(), flat.center(), pr, LorentzVec{0, 0, 1, 0}, fold);
    const EstimatePair bent_pair = intersection_plane_liouville(
        folded, patch_geodesics, mc(job, np, kThm1 + 128));
    reports.push_back(make_exceeds_report(
        "thm1i.bent_deficit", bent_pair.second.value - bent_pair.first.value,
        bent_pair.diff_se, bent_pair.second.n, job.seed, job.shards, 0.0,
        timer.lap()));

    // Part (ii), windowed: pair-sampled double integral against the closed
    // form 2 pi^2 vol for the unperturbed metric.
    const std::uint64_t n = job.config.get_u64("thm1", "n_pairs", 400000);
    const double window = job.config.get_double("thm1", "window", 1.0);
    const double br = job.config.get_double("thm1", "ball_radius", 0.8);
    const double rtol = job.config.get_double("thm1", "rtol", 0.03);
    const PlaneSampler planes(window, cal.c0);
    const GeodesicSampler geodesics(window, cal.c1);
    const auto wi = windowed_intersection_check(ball_region(origin_point(), br),
                                                ball_volume(br), planes, geodesics,
                                                mc(job, n, kThm1 + 256));
    reports.push_back(make_report("thm1ii.windowed_pairing", wi.double_integral,
                                  job.seed, job.shards, wi.reference, 0.0, rtol,
                                  timer.lap()));
    return reports;
}

std::vector<Report> run_intersect(const JobConfig& job) {
    const std::vector<std::string> defaults = {
        "data/fixtures/cyclic_meridian.txt", "data/fixtures/cyclic_disjoint.txt",
        "data/fixtures/cyclic_double_cover.txt"};
    const auto fixtures = job.config.get_strings("intersect", "fixtures", defaults);
    std::vector<Report> reports;
    for (const auto& path : fixtures) {
        Timer timer;
        const IntersectionFixture fx = load_fixture(path);
        const double engine = intersection_form_atomic(fx.group, fx.mu, fx.lambda);
        const int oracle = geometric_intersection_oracle(fx.surface, fx.curve,
                                                         fx.group);
        reports.push_back(make_report("intersect." + fx.name + ".engine", engine,
                                      0.0, 0, job.seed, job.shards, fx.expected,
                                      1e-9, 0.0, timer.lap()));
        reports.push_back(make_report("intersect." + fx.name + ".oracle",
                                      static_cast<double>(oracle), 0.0, 0,
                                      job.seed, job.shards, fx.expected, 1e-9,
                                      0.0, timer.lap()));
        reports.push_back(make_report("intersect." + fx.name + ".engine_vs_oracle",
                                      engine, 0.0, 0, job.seed, job.shards,
                                      static_cast<double>(oracle), 1e-9, 0.0,
                                      timer.lap()));
    }
    return reports;
}

std::vector<Report> run_stretch(const JobConfig& job) {
    const std::uint64_t n = job.config.get_u64("stretch", "n", 2000);
    const double window = job.config.get_double("stretch", "window", 1.5);
    const double horizon = job.config.get_double("stretch", "horizon", 5.0);
    FlowOptions opts;
    opts.dt = job.config.get_double("stretch", "dt", 2e-3);
    std::vector<Report> reports;
    Timer timer;

    // Flow integrator certification: closed-form match and observed order.
    {
        FlowState s;
        const Vec3 dir = normalized3(Vec3{0.3, -1.0, 0.45});
        s.u = scale3(dir, 0.5);
        FlowOptions fine;
        fine.dt = 1e-3;
        double worst = 0.0;
        for (double t : {1.0, 2.5, 5.0}) {
            const FlowState end = flow(ConformalMetric(), s, t, fine);
            const Vec3 exact = hyperboloid_to_ball(
                LorentzVec{std::cosh(t), scale3(dir, std::sinh(t))});
            worst = std::max(worst, 2.0 * norm3(sub3(end.x, exact)) /
                                         (1.0 - dot3(end.x, end.x)));
        }
        reports.push_back(make_report("flow.closed_form_gap", worst, 0.0, 5000,
                                      job.seed, job.shards, 0.0, 1e-8, 0.0,
                                      timer.lap()));
        FlowOptions coarse;
        coarse.check_every = 0;
        coarse.dt = 0.05;
        FlowOptions reference;
        reference.check_every = 0;
        reference.dt = 0.05 / 16.0;
        const Vec3 ref = flow(ConformalMetric(), s, 2.0, reference).x;
        const double e1 = norm3(sub3(flow(ConformalMetric(), s, 2.0, coarse).x, ref));
        coarse.dt = 0.025;
        const double e2 = norm3(sub3(flow(ConformalMetric(), s, 2.0, coarse).x, ref));
        const double order = std::log2(e1 / e2);
        reports.push_back(make_report("flow.observed_order", order, 0.0, 0,
                                      job.seed, job.shards, 4.0, 1.0, 0.0,
                                      timer.lap()));
    }

    McRun run = mc(job, n, kStretch);
    const StretchResult flat =
        geodesic_stretch(ConformalMetric(), window, horizon, run, opts);
    reports.push_back(make_report("stretch.hyperbolic", flat.stretch.value,
                                  flat.stretch.se, flat.stretch.n, job.seed,
                                  job.shards, 1.0, 1e-6, 0.0, timer.lap()));

    const double scale = job.config.get_double("stretch", "scale", 2.0);
    run.stream = kStretch + 128;
    const StretchResult scaled = geodesic_stretch(
        ConformalMetric::homothety(std::log(scale)), window, horizon, run, opts);
    reports.push_back(make_report("stretch.homothety", scaled.stretch.value,
                                  scaled.stretch.se, scaled.stretch.n, job.seed,
                                  job.shards, 1.0 / scale, 1e-3, 0.0,
                                  timer.lap()));

    const double amp = job.config.get_double("stretch", "bump_amplitude", 0.08);
    const double rad = job.config.get_double("stretch", "bump_radius", 1.2);
    const ConformalMetric bump =
        ConformalMetric::with_bumps({Bump{origin_point(), rad, amp}});
    bump.validate(job.seed);
    run.stream = kStretch + 256;
    const StretchResult bent = geodesic_stretch(bump, window, horizon, run, opts);
    // Nonnegative conformal factors can only shorten displacements.
    Report upper;
    upper.task = "stretch.bump_upper_bound";
    upper.estimate = bent.stretch.value;
    upper.standard_error = bent.stretch.se;
    upper.n_samples = bent.stretch.n;
    upper.seed = job.seed;
    upper.shards = job.shards;
    upper.target = 1.0;
    upper.abs_err = std::abs(upper.estimate - upper.target);
    upper.rel_err = upper.abs_err;
    upper.elapsed_s = timer.lap();
    upper.pass = bent.stretch.value <= 1.0 + 3.0 * bent.stretch.se;
    reports.push_back(upper);
    return reports;
}

std::vector<Report> run_conjugacy(const JobConfig& job) {
    ConjugacyOptions opts;
    opts.tau = job.config.get_double("conjugacy", "tau", 1.0);
    opts.flow.dt = job.config.get_double("conjugacy", "dt", 1e-3);
    const double t_max = job.config.get_double("conjugacy", "t_max", 3.0);
    const std::uint64_t samples = job.config.get_u64("conjugacy", "samples", 100);
    const double residual_tol =
        job.config.get_double("conjugacy", "residual_tol", 1e-4);
    const double cocycle_tol =
        job.config.get_double("conjugacy", "cocycle_tol", 1e-5);
    const double exact_tol = job.config.get_double("conjugacy", "exact_tol", 1e-6);
    const double amp = job.config.get_double("conjugacy", "bump_amplitude", 0.08);
    const double rad = job.config.get_double("conjugacy", "bump_radius", 1.2);
    const double window = job.config.get_double("conjugacy", "window", 0.4);
    const ConformalMetric bump =
        ConformalMetric::with_bumps({Bump{origin_point(), rad, amp}});

    std::vector<Report> reports;
    Timer timer;

    // Unperturbed case: T(t) = t and unit rate to the exact tolerance.
    {
        FlowState v;
        v.x = {0.1, -0.05, 0.02};
        v.u = scale3(normalized3(Vec3{0.3, 1.0, -0.2}),
                     std::exp(-ConformalMetric().psi_chart(v.x)));
        const std::vector<double> grid{-1.0, -0.25, 0.5, 1.5, 2.5};
        const TimeChangeTable table = time_change(ConformalMetric(), v, grid, opts);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(table.values[i] - grid[i]));
        reports.push_back(make_report("conjugacy.identity_time_change", worst, 0.0,
                                      grid.size(), job.seed, job.shards, 0.0,
                                      exact_tol, 0.0, timer.lap()));
        reports.push_back(make_report("conjugacy.identity_rate", table.rate0, 0.0,
                                      1, job.seed, job.shards, 1.0, exact_tol,
                                      0.0, timer.lap()));
    }

    // Bump metric: conjugacy residual over sampled states and times.
    Philox rng(job.seed, kConjugacy);
    double worst_residual = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        FlowState v;
        v.x = scale3(rng.unit_sphere(), window * rng.u01());
        v.u = scale3(rng.unit_sphere(), std::exp(-bump.psi_chart(v.x)));
        const double t = (i % 3 + 1) * t_max / 3.0;
        worst_residual = std::max(worst_residual, conjugacy_residual(bump, v, t, opts));
    }
    reports.push_back(make_report("conjugacy.bump_residual", worst_residual, 0.0,
                                  samples, job.seed, job.shards, 0.0, residual_tol,
                                  0.0, timer.lap()));

    // Cocycle defect on a 5x5 grid.
    {
        FlowState v;
        v.x = {0.12, 0.03, -0.07};
        v.u = scale3(normalized3(Vec3{0.2, 0.9, 0.4}),
                     std::exp(-bump.psi_chart(v.x)));
        const double defect =
            cocycle_residual(bump, v, {0.4, 0.9, 1.4, 1.9, 2.4}, opts);
        reports.push_back(make_report("conjugacy.cocycle_defect", defect, 0.0, 25,
                                      job.seed, job.shards, 0.0, cocycle_tol, 0.0,
                                      timer.lap()));
    }

    // Displacement bound under window growth.
    {
        const double d3 = bounded_distance_check(bump, 3.0, 500, job.seed + 1, opts);
        const double d5 =
            bounded_distance_check(bump, 5.0, 5000, job.seed + 2, opts);
        Report r;
        r.task = "conjugacy.bounded_distance";
        r.estimate = d5;
        r.target = 1.2 * std::max(d3, 0.5 * opts.tau);
        r.abs_err = std::abs(r.estimate - r.target);
        r.rel_err = r.target != 0.0 ? r.abs_err / r.target : r.abs_err;
        r.n_samples = 5500;
        r.seed = job.seed;
        r.shards = job.shards;
        r.elapsed_s = timer.lap();
        r.pass = d5 <= r.target;
        reports.push_back(r);
    }

    // Length identity along open trajectories, bump metric.
    {
        double worst_excess = 0.0;
        Philox prng(job.seed, kConjugacy + 64);
        for (int i = 0; i < 25; ++i) {
            FlowState v;
            v.x = scale3(prng.unit_sphere(), window * prng.u01());
            v.u = scale3(prng.unit_sphere(), std::exp(-bump.psi_chart(v.x)));
            const PsiLengthResult pl = psi_length_identity(bump, v, 5.0, opts);
            worst_excess =
                std::max(worst_excess, std::abs(pl.psi_integral - pl.shift) -
                                           2.0 * pl.r_sup);
        }
        reports.push_back(make_report("conjugacy.length_identity_excess",
                                      std::max(worst_excess, 0.0), 0.0, 25,
                                      job.seed, job.shards, 0.0, 1e-4, 0.0,
                                      timer.lap()));
    }
    return reports;
}

std::vector<Report> run_entropy_asymptotics(const JobConfig& job) {
    const double l_max = job.config.get_double("entropy", "l_max", 1e8);
    const double rtol = job.config.get_double("entropy", "rtol", 0.05);
    const std::vector<double> grid{1e4, 1e5, 1e6, 1e7, l_max};
    std::vector<Report> reports;
    Timer timer;

    const double at_one = entropy_limit_extrapolated(1.0, grid);
    reports.push_back(make_report("entropy.extrapolated_A1", at_one, 0.0, 0,
                                  job.seed, job.shards, 2.0, 0.0, rtol,
                                  timer.lap()));
    const double at_two = entropy_limit_extrapolated(2.0, grid);
    reports.push_back(make_report("entropy.extrapolated_A2", at_two, 0.0, 0,
                                  job.seed, job.shards, 1.0, 0.0, rtol,
                                  timer.lap()));

    // Gauss-Bonnet round trip and covering arithmetic are exact.
    double worst = 0.0;
    for (int genus : {2, 3, 5}) {
        const double area = 4.0 * kPi * (genus - 1) * 0.75;
        const double defect = gauss_bonnet_defect(genus, area);
        worst = std::max(worst,
                         std::abs(area - (4.0 * kPi * (genus - 1) - 0.5 * defect)));
    }
    reports.push_back(make_report("entropy.gauss_bonnet_roundtrip", worst, 0.0, 3,
                                  job.seed, job.shards, 0.0, 1e-12, 0.0,
                                  timer.lap()));
    bool covers_ok = true;
    for (long long g : {2, 3, 7})
        for (long long k1 : {2, 5})
            for (long long k2 : {3, 4})
                covers_ok = covers_ok && cover_genus(cover_genus(g, k1), k2) ==
                                             cover_genus(g, k1 * k2);
    reports.push_back(make_report("entropy.cover_arithmetic", covers_ok ? 1.0 : 0.0,
                                  0.0, 12, job.seed, job.shards, 1.0, 0.0, 0.0,
                                  timer.lap()));
    return reports;
}

// ---------------------------------------------------------------------------

std::vector<Report> run_job(const std::string& name, const JobConfig& job) {
    std::vector<Report> reports;
    if (name == "all") {
        Calibration cal;
        reports = run_calibrate(job, &cal);
        struct Entry {
            const char* name;
            std::function<std::vector<Report>()> fn;
        };
        const std::vector<Entry> entries = {
            {"verify-crofton", [&] { return run_verify_crofton(job, cal); }},
            {"verify-santalo", [&] { return run_verify_santalo(job, cal); }},
            {"verify-liouville", [&] { return run_verify_liouville(job, cal); }},
            {"verify-length-form",
             [&] { return run_verify_length_form(job, cal); }},
            {"verify-thm1", [&] { return run_verify_thm1(job, cal); }},
            {"intersect", [&] { return run_intersect(job); }},
            {"stretch", [&] { return run_stretch(job); }},
            {"conjugacy", [&] { return run_conjugacy(job); }},
            {"entropy-asymptotics", [&] { return run_entropy_asymptotics(job); }},
        };
        for (const auto& entry : entries) {
            try {
                const auto batch = entry.fn();
                reports.insert(reports.end(), batch.begin(), batch.end());
            } catch (const Error& e) {
                // Collect the failure and keep going: `all` never
                // short-circuits.
                Report r;
                r.task = std::string(entry.name) + ".error";
                r.seed = job.seed;
                r.shards = job.shards;
                r.pass = false;
                reports.push_back(r);
            }
        }
    } else if (name == "calibrate") {
        reports = run_calibrate(job);
    } else if (name == "intersect") {
        reports = run_intersect(job);
    } else if (name == "stretch") {
        reports = run_stretch(job);
    } else if (name == "conjugacy") {
        reports = run_conjugacy(job);
    } else if (name == "entropy-asymptotics") {
        reports = run_entropy_asymptotics(job);
    } else {
        // The measure verifiers need the persisted calibration constants.
        const Calibration cal = require_calibration(job);
        if (name == "verify-crofton") {
            reports = run_verify_crofton(job, cal);
        } else if (name == "verify-santalo") {
            reports = run_verify_santalo(job, cal);
        } else if (name == "verify-liouville") {
            reports = run_verify_liouville(job, cal);
        } else if (name == "verify-length-form") {
            reports = run_verify_length_form(job, cal);
        } else if (name == "verify-thm1") {
            reports = run_verify_thm1(job, cal);
        } else {
            throw ConfigError("unknown subcommand: " + name);
        }
    }
    std::filesystem::create_directories(job.out_dir);
    write_reports(reports, job.out_dir + "/" + name + ".report");
    return reports;
}

} // namespace h3geo
