// Batch driver for the verification jobs: parses one declarative config,
// runs a subcommand (or all of them), prints and stores the reports.
//
// Exit codes: 0 all reports pass, 1 some report failed, 2 config/usage
// error, 3 calibration fixture missing, 4 numerical failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "h3geo/config.hpp"
#include "h3geo/errors.hpp"
#include "h3geo/jobs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"h3geo - integral-geometry verification runs on hyperbolic 3-space"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir;
    std::string seed_text;
    int shards = 0;
    bool check = false;

    app.add_option("--config", config_path, "declarative run configuration file")
        ->required();
    app.add_option("--seed", seed_text, "override [run] seed");
    app.add_option("--out", out_dir, "override [run] out directory");
    app.add_option("--shards", shards, "override [run] shards");
    app.add_flag("--check", check,
                 "nonzero exit when any report fails (also the default)");

    std::vector<CLI::App*> subs;
    for (const auto& name : h3geo::job_names())
        subs.push_back(app.add_subcommand(name)->fallthrough());
    subs.push_back(app.add_subcommand("all")->fallthrough());

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // unknown subcommand / bad usage
    }

    std::string job_name;
    for (auto* sub : subs)
        if (sub->parsed()) job_name = sub->get_name();
    if (job_name.empty()) {
        std::fprintf(stderr, "error: expected a subcommand (");
        for (const auto& n : h3geo::job_names()) std::fprintf(stderr, "%s, ", n.c_str());
        std::fprintf(stderr, "all)\n");
        return 2;
    }

    try {
        const h3geo::Config config = h3geo::Config::parse_file(config_path);
        h3geo::JobConfig job = h3geo::make_job_config(config);
        if (!seed_text.empty()) job.seed = std::stoull(seed_text);
        if (!out_dir.empty()) job.out_dir = out_dir;
        if (shards > 0) job.shards = shards;

        const auto reports = h3geo::run_job(job_name, job);
        for (const auto& r : reports) std::printf("%s\n", h3geo::to_line(r).c_str());
        return h3geo::all_pass(reports) ? 0 : 1;
    } catch (const h3geo::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const h3geo::CalibrationError& e) {
        std::fprintf(stderr, "calibration error: %s\n", e.what());
        return 3;
    } catch (const h3geo::Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
