#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "h3geo/config.hpp"
#include "h3geo/errors.hpp"
#include "h3geo/kinematic.hpp"
#include "h3geo/report.hpp"

using namespace h3geo;

TEST_CASE("config parsing and typed access") {
    const Config cfg = Config::parse_string(
        "# comment\n"
        "[run]\n"
        "seed = 42\n"
        "shards = 8\n"
        "[length_form]\n"
        "lengths = 1 2 3.5\n"
        "rtol = 0.02\n");
    CHECK(cfg.get_u64("run", "seed", 0) == 42);
    CHECK(cfg.get_int("run", "shards", 1) == 8);
    CHECK(cfg.get_double("length_form", "rtol", 0.0) == doctest::Approx(0.02));
    const auto lengths = cfg.get_doubles("length_form", "lengths", {});
    REQUIRE(lengths.size() == 3);
    CHECK(lengths[2] == doctest::Approx(3.5));
    CHECK(cfg.get_string("run", "out", "fallback") == "fallback");
}

TEST_CASE("schema validation rejects bad configs") {
    CHECK_THROWS_AS(Config::parse_string("[run]\nseed 42\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("key = 1\n"), ConfigError);

    // Unknown section, unknown key, missing seed, nonpositive tolerance.
    CHECK_THROWS_AS(Config::parse_string("[nonsense]\nx = 1\n").validate(),
                    ConfigError);
    CHECK_THROWS_AS(
        Config::parse_string("[run]\nseed = 1\n[crofton]\nbogus = 2\n").validate(),
        ConfigError);
    CHECK_THROWS_AS(Config::parse_string("[crofton]\nn = 10\n").validate(),
                    ConfigError);
    CHECK_THROWS_AS(
        Config::parse_string("[run]\nseed = 1\n[crofton]\nrtol = 0\n").validate(),
        ConfigError);

    CHECK_NOTHROW(
        Config::parse_string("[run]\nseed = 1\n[crofton]\nrtol = 0.01\n").validate());
}

TEST_CASE("job config carries overridable run parameters") {
    const Config cfg = Config::parse_string("[run]\nseed = 9\nshards = 3\nout = x\n");
    const JobConfig job = make_job_config(cfg);
    CHECK(job.seed == 9);
    CHECK(job.shards == 3);
    CHECK(job.out_dir == "x");
}

TEST_CASE("report lines carry the fields in fixed order") {
    const Report r = make_report("demo.task", 3.14, 0.01, 1000, 7, 4, 3.15, 0.0,
                                 0.05, 1.23456);
    const std::string line = to_line(r);
    CHECK(line.find("task=demo.task estimate=") == 0);
    CHECK(line.find("estimate=") < line.find("target="));
    CHECK(line.find("target=") < line.find("abs_err="));
    CHECK(line.find("abs_err=") < line.find("rel_err="));
    CHECK(line.find("rel_err=") < line.find("standard_error="));
    CHECK(line.find("standard_error=") < line.find("n_samples="));
    CHECK(line.find("n_samples=1000") != std::string::npos);
    CHECK(line.find("seed=7") != std::string::npos);
    CHECK(line.find("shards=4") != std::string::npos);
    CHECK(line.find("pass=true") != std::string::npos);
}

TEST_CASE("pass policy: atol, rtol, and three standard errors") {
    // Inside rtol.
    CHECK(make_report("t", 1.009, 0.0, 1, 1, 1, 1.0, 0.0, 0.01, 0.0).pass);
    CHECK_FALSE(make_report("t", 1.02, 0.0, 1, 1, 1, 1.0, 0.0, 0.01, 0.0).pass);
    // Rescued by the Monte Carlo band.
    CHECK(make_report("t", 1.02, 0.01, 1, 1, 1, 1.0, 0.0, 0.01, 0.0).pass);
    // Absolute tolerance for exact targets.
    CHECK(make_report("t", 1e-7, 0.0, 1, 1, 1, 0.0, 1e-6, 0.0, 0.0).pass);
    CHECK_FALSE(make_report("t", 1e-5, 0.0, 1, 1, 1, 0.0, 1e-6, 0.0, 0.0).pass);
    // One-sided exceedance.
    CHECK(make_exceeds_report("t", 0.5, 0.1, 1, 1, 1, 0.0, 0.0).pass);
    CHECK_FALSE(make_exceeds_report("t", 0.2, 0.1, 1, 1, 1, 0.0, 0.0).pass);
}

TEST_CASE("report lines are reproducible except for elapsed time") {
    const Report a = make_report("x", 1.0, 0.1, 10, 3, 2, 1.0, 0.0, 0.1, 0.111);
    Report b = a;
    b.elapsed_s = 9.999;
    CHECK(to_line(a) != to_line(b));
    CHECK(to_line_without_elapsed(a) == to_line_without_elapsed(b));
}

TEST_CASE("calibration fixture round-trip") {
    Calibration cal;
    cal.c0 = 0.5000123;
    cal.c1 = 1.9998877;
    cal.se_c0 = 1e-3;
    cal.se_c1 = 2e-3;
    cal.seed = 99;
    cal.n = 123456;
    const std::string path = "test_calibration_roundtrip.txt";
    save_calibration(cal, path);
    const Calibration back = load_calibration(path);
    CHECK(back.c0 == cal.c0);
    CHECK(back.c1 == cal.c1);
    CHECK(back.se_c0 == cal.se_c0);
    CHECK(back.se_c1 == cal.se_c1);
    CHECK(back.seed == cal.seed);
    CHECK(back.n == cal.n);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_calibration("definitely_missing_file.txt"),
                    CalibrationError);
}
