// Acceptance gate: every criterion from the published configuration runs at
// its stated tolerance and prints one pass/fail line. Exit status is zero
// only when all criteria hold.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "h3geo/config.hpp"
#include "h3geo/errors.hpp"
#include "h3geo/jobs.hpp"
#include "h3geo/report.hpp"

using namespace h3geo;

namespace {

struct Criterion {
    int id;
    std::string label;
    bool pass;
    std::string detail;
};

std::vector<Criterion> results;

void record(int id, const std::string& label, bool pass,
            const std::string& detail) {
    results.push_back({id, label, pass, detail});
    std::printf("[%2d] %s  %-28s %s\n", id, pass ? "PASS" : "FAIL", label.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

const Report& find(const std::vector<Report>& reports, const std::string& task) {
    for (const auto& r : reports)
        if (r.task == task) return r;
    throw Error("acceptance: missing report " + task);
}

std::string describe(const Report& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "estimate=%.6g target=%.6g rel=%.2e se=%.2e (%.1fs)",
                  r.estimate, r.target, r.rel_err, r.standard_error, r.elapsed_s);
    return buf;
}

} // namespace

int main() {
    const auto wall_start = std::chrono::steady_clock::now();
    const std::string source_dir = H3GEO_SOURCE_DIR;

    Config config = Config::parse_file(source_dir + "/configs/acceptance.cfg");
    JobConfig job = make_job_config(config);
    job.out_dir = "acceptance-out";

    int exit_code = 0;
    try {
        // Calibration is derived once, from the unit-segment identity alone,
        // and feeds every later plane-measure criterion.
        Calibration cal;
        {
            JobConfig cal_job = job;
            Config cal_cfg = Config::parse_string(
                "[run]\nseed = " + std::to_string(job.seed) +
                "\n[calibration]\nfile = acceptance-out/calibration.txt\n" +
                "n = " + std::to_string(config.get_u64("calibration", "n", 1000000)) +
                "\nwindow = " +
                std::to_string(config.get_double("calibration", "window", 1.2)) +
                "\nmax_rel_se = " +
                std::to_string(config.get_double("calibration", "max_rel_se", 0.005)) +
                "\n");
            cal_job.config = cal_cfg;
            run_calibrate(cal_job, &cal);
        }

        // 1. Crofton length of the unit segment.
        const auto crofton = run_verify_crofton(job, cal);
        {
            const Report& r = find(crofton, "crofton.segment_length");
            record(1, "crofton length", r.pass && r.elapsed_s <= 60.0,
                   describe(r));
        }

        // 2-3. Volume and area identities under the same constant.
        const auto santalo = run_verify_santalo(job, cal);
        {
            const Report& vol = find(santalo, "santalo.ball_volume");
            record(2, "volume identity", vol.pass && vol.elapsed_s <= 120.0,
                   describe(vol));
            const Report& area = find(santalo, "santalo.disk_area");
            record(3, "area identity", area.pass, describe(area));
        }

        // 4. Geodesic-measure Crofton cross-validated on the smaller disk.
        const auto liouville = run_verify_liouville(job, cal);
        {
            const Report& r = find(liouville, "liouville.cross_disk");
            record(4, "liouville crofton", r.pass, describe(r));
        }

        // 5. Length form at both segment lengths.
        const auto length_form = run_verify_length_form(job, cal);
        {
            const Report& l1 = find(length_form, "length_form.l_1.00");
            const Report& l2 = find(length_form, "length_form.l_2.00");
            record(5, "length form", l1.pass && l2.pass,
                   describe(l1) + " | " + describe(l2));
        }

        // 6-7. Flat equality, bent deficit, and the windowed pairing.
        const auto thm1 = run_verify_thm1(job, cal);
        {
            const Report& flat = find(thm1, "thm1i.flat_hit_mass");
            const Report& eq = find(thm1, "thm1i.flat_equality");
            const Report& bent = find(thm1, "thm1i.bent_deficit");
            record(6, "flat vs bent patches", flat.pass && eq.pass && bent.pass,
                   describe(flat) + " | deficit z=" +
                       std::to_string(bent.estimate / bent.standard_error));
            const Report& pairing = find(thm1, "thm1ii.windowed_pairing");
            record(7, "windowed pairing", pairing.pass, describe(pairing));
        }

        // 8. Intersection engine against the geometric oracle, exactly.
        {
            JobConfig fx_job = job;
            Config fx_cfg = Config::parse_string(
                "[run]\nseed = " + std::to_string(job.seed) +
                "\n[intersect]\nfixtures = " + source_dir +
                "/data/fixtures/cyclic_meridian.txt " + source_dir +
                "/data/fixtures/cyclic_disjoint.txt " + source_dir +
                "/data/fixtures/cyclic_double_cover.txt\n");
            fx_job.config = fx_cfg;
            const auto intersect = run_intersect(fx_job);
            bool all_exact = !intersect.empty();
            for (const auto& r : intersect) all_exact = all_exact && r.pass;
            record(8, "intersection engine", all_exact,
                   std::to_string(intersect.size()) + " exact integer checks");
        }

        // 9-10. Flow certification and the geodesic stretch.
        const auto stretch = run_stretch(job);
        {
            const Report& gap = find(stretch, "flow.closed_form_gap");
            const Report& order = find(stretch, "flow.observed_order");
            record(9, "geodesic flow", gap.pass && order.pass,
                   describe(gap) + " | order=" + std::to_string(order.estimate));
            const Report& flat = find(stretch, "stretch.hyperbolic");
            const Report& homothety = find(stretch, "stretch.homothety");
            const Report& bump = find(stretch, "stretch.bump_upper_bound");
            record(10, "geodesic stretch",
                   flat.pass && homothety.pass && bump.pass,
                   describe(flat) + " | " + describe(homothety));
        }

        // 11. Conjugacy residuals.
        const auto conj = run_conjugacy(job);
        {
            const Report& ident_t = find(conj, "conjugacy.identity_time_change");
            const Report& ident_r = find(conj, "conjugacy.identity_rate");
            const Report& residual = find(conj, "conjugacy.bump_residual");
            const Report& cocycle = find(conj, "conjugacy.cocycle_defect");
            record(11, "flow conjugacy",
                   ident_t.pass && ident_r.pass && residual.pass && cocycle.pass,
                   "residual=" + std::to_string(residual.estimate) +
                       " cocycle=" + std::to_string(cocycle.estimate));
        }

        // 12. Entropy arithmetic.
        const auto entropy = run_entropy_asymptotics(job);
        {
            const Report& a1 = find(entropy, "entropy.extrapolated_A1");
            const Report& a2 = find(entropy, "entropy.extrapolated_A2");
            const Report& gb = find(entropy, "entropy.gauss_bonnet_roundtrip");
            record(12, "entropy arithmetic", a1.pass && a2.pass && gb.pass,
                   describe(a1) + " | " + describe(a2));
        }

        // 13. Bit-reproducibility: identical seed and shard layout gives
        // byte-identical reports apart from elapsed time.
        {
            const auto again = run_verify_crofton(job, cal);
            bool identical = again.size() == crofton.size();
            for (std::size_t i = 0; identical && i < again.size(); ++i)
                identical = to_line_without_elapsed(again[i]) ==
                            to_line_without_elapsed(crofton[i]);
            record(13, "reproducibility", identical,
                   identical ? "byte-identical reports (elapsed masked)"
                             : "reports differ");
        }
    } catch (const Error& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        exit_code = 4;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
            .count();
    int passed = 0;
    for (const auto& c : results) passed += c.pass ? 1 : 0;
    std::printf("----\n%d/%zu criteria passed, wall clock %.1f s (budget 900 s)\n",
                passed, results.size(), wall);
    if (wall > 900.0) {
        std::printf("FAIL: wall clock exceeds the 15 minute budget\n");
        exit_code = exit_code ? exit_code : 1;
    }
    if (passed != static_cast<int>(results.size()) || results.size() != 13)
        exit_code = exit_code ? exit_code : 1;
    return exit_code;
}
