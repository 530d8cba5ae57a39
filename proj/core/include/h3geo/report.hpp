#pragma once

// Machine-readable verification records: one line per task with the fields
// in fixed key order, byte-identical across reruns except for elapsed_s.

#include <cstdint>
#include <string>
#include <vector>

#include "h3geo/estimate.hpp"

namespace h3geo {

struct Report {
    std::string task;
    double estimate = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double standard_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    int shards = 0;
    double elapsed_s = 0.0;
    bool pass = false;
};

// Two-sided policy: pass iff |estimate - target| <= max(atol, rtol |target|,
// 3 standard errors).
Report make_report(const std::string& task, double estimate, double se,
                   std::uint64_t n, std::uint64_t seed, int shards,
                   double target, double atol, double rtol, double elapsed_s);

Report make_report(const std::string& task, const Estimate& e,
                   std::uint64_t seed, int shards, double target, double atol,
                   double rtol, double elapsed_s);

// One-sided variant used by strict-inequality criteria: pass iff
// estimate - target > 3 standard errors.
Report make_exceeds_report(const std::string& task, double estimate, double se,
                           std::uint64_t n, std::uint64_t seed, int shards,
                           double target, double elapsed_s);

// Fixed-key-order line serialization.
std::string to_line(const Report& r);

// Lines with elapsed_s masked; used by the reproducibility checks.
std::string to_line_without_elapsed(const Report& r);

void write_reports(const std::vector<Report>& reports, const std::string& path);

bool all_pass(const std::vector<Report>& reports);

} // namespace h3geo
