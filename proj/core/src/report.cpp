#include "h3geo/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

void fill_errors(Report& r) {
    r.abs_err = std::abs(r.estimate - r.target);
    r.rel_err = r.target != 0.0 ? r.abs_err / std::abs(r.target) : r.abs_err;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

Report make_report(const std::string& task, double estimate, double se,
                   std::uint64_t n, std::uint64_t seed, int shards,
                   double target, double atol, double rtol, double elapsed_s) {
    Report r;
    r.task = task;
    r.estimate = estimate;
    r.standard_error = se;
    r.n_samples = n;
    r.seed = seed;
    r.shards = shards;
    r.target = target;
    r.elapsed_s = elapsed_s;
    fill_errors(r);
    const double budget =
        std::max(atol, std::max(rtol * std::abs(target), 3.0 * se));
    r.pass = r.abs_err <= budget;
    return r;
}

Report make_report(const std::string& task, const Estimate& e,
                   std::uint64_t seed, int shards, double target, double atol,
                   double rtol, double elapsed_s) {
    return make_report(task, e.value, e.se, e.n, seed, shards, target, atol, rtol,
                       elapsed_s);
}

Report make_exceeds_report(const std::string& task, double estimate, double se,
                           std::uint64_t n, std::uint64_t seed, int shards,
                           double target, double elapsed_s) {
    Report r;
    r.task = task;
    r.estimate = estimate;
    r.standard_error = se;
    r.n_samples = n;
    r.seed = seed;
    r.shards = shards;
    r.target = target;
    r.elapsed_s = elapsed_s;
    fill_errors(r);
    r.pass = estimate - target > 3.0 * se;
    return r;
}

std::string to_line(const Report& r) {
    std::string line;
    line += "task=" + r.task;
    line += " estimate=" + fmt(r.estimate);
    line += " target=" + fmt(r.target);
    line += " abs_err=" + fmt(r.abs_err);
    line += " rel_err=" + fmt(r.rel_err);
    line += " standard_error=" + fmt(r.standard_error);
    line += " n_samples=" + std::to_string(r.n_samples);
    line += " seed=" + std::to_string(r.seed);
    line += " shards=" + std::to_string(r.shards);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.elapsed_s);
    line += " elapsed_s=" + std::string(buf);
    line += std::string(" pass=") + (r.pass ? "true" : "false");
    return line;
}

std::string to_line_without_elapsed(const Report& r) {
    Report masked = r;
    masked.elapsed_s = 0.0;
    return to_line(masked);
}

void write_reports(const std::vector<Report>& reports, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report file: " + path);
    for (const auto& r : reports) out << to_line(r) << "\n";
}

bool all_pass(const std::vector<Report>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

} // namespace h3geo
