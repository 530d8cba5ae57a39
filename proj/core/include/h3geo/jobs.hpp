#pragma once

// Verification jobs shared by the command-line driver and the acceptance
// suite: each subcommand maps configuration to a list of reports. Stream ids
// are partitioned per job so runs decouple and stay reproducible.

#include <string>
#include <vector>

#include "h3geo/config.hpp"
#include "h3geo/kinematic.hpp"
#include "h3geo/report.hpp"

namespace h3geo {

// Known subcommand names in execution order of `all`.
const std::vector<std::string>& job_names();

bool is_job_name(const std::string& name);

// Computes c0 and c1, persists the fixture file, and reports the
// consistency re-calibration. The `all` runner starts with this.
std::vector<Report> run_calibrate(const JobConfig& job, Calibration* out = nullptr);

// Loads the persisted calibration fixture; throws CalibrationError when it
// is missing (callers map that onto exit code 3).
Calibration require_calibration(const JobConfig& job);

std::vector<Report> run_verify_crofton(const JobConfig& job, const Calibration& cal);
std::vector<Report> run_verify_santalo(const JobConfig& job, const Calibration& cal);
std::vector<Report> run_verify_liouville(const JobConfig& job, const Calibration& cal);
std::vector<Report> run_verify_length_form(const JobConfig& job,
                                           const Calibration& cal);
std::vector<Report> run_verify_thm1(const JobConfig& job, const Calibration& cal);
std::vector<Report> run_intersect(const JobConfig& job);
std::vector<Report> run_stretch(const JobConfig& job);
std::vector<Report> run_conjugacy(const JobConfig& job);
std::vector<Report> run_entropy_asymptotics(const JobConfig& job);

// Dispatch by name; `all` runs everything (calibrating first) and never
// short-circuits. Reports are also written to <out>/<name>.report.
std::vector<Report> run_job(const std::string& name, const JobConfig& job);

} // namespace h3geo
