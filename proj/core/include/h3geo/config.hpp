#pragma once

// Declarative run configuration: one INI-style file drives a whole
// verification run. Sections and keys are schema-checked before any
// computation starts; unknown keys are errors, tolerances must be positive,
// and the seed is mandatory (no wall-clock defaults).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace h3geo {

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    int get_int(const std::string& section, const std::string& key,
                int fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::vector<double> get_doubles(const std::string& section,
                                    const std::string& key,
                                    const std::vector<double>& fallback) const;
    std::vector<std::string> get_strings(
        const std::string& section, const std::string& key,
        const std::vector<std::string>& fallback) const;

    // Full schema check; throws ConfigError with a pointed message.
    void validate() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Effective job parameters: the parsed file plus command-line overrides.
struct JobConfig {
    Config config;
    std::uint64_t seed = 0;
    int shards = 4;
    std::string out_dir = "out";
    bool diagnostics_csv = false;
};

JobConfig make_job_config(const Config& config);

} // namespace h3geo
