#include "h3geo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty section name");
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any section");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

namespace {

const std::string* lookup(
    const std::map<std::string, std::map<std::string, std::string>>& sections,
    const std::string& section, const std::string& key) {
    const auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

} // namespace

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const auto* v = lookup(sections_, section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double out = std::stod(*v, &used);
        if (trim(v->substr(used)).empty()) return out;
    } catch (...) {
    }
    throw ConfigError("config [" + section + "] " + key + ": not a number: " + *v);
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const auto* v = lookup(sections_, section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double out = std::stod(*v, &used);
        if (trim(v->substr(used)).empty() && out >= 0.0)
            return static_cast<std::uint64_t>(out);
    } catch (...) {
    }
    throw ConfigError("config [" + section + "] " + key +
                      ": not a nonnegative integer: " + *v);
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    return static_cast<int>(get_u64(section, key, static_cast<std::uint64_t>(fallback)));
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    const auto* v = lookup(sections_, section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("config [" + section + "] " + key + ": not a boolean: " + *v);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const auto* v = lookup(sections_, section, key);
    return v ? *v : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key,
                                        const std::vector<double>& fallback) const {
    const auto* v = lookup(sections_, section, key);
    if (!v) return fallback;
    std::vector<double> out;
    std::istringstream ss(*v);
    double x;
    while (ss >> x) out.push_back(x);
    if (out.empty())
        throw ConfigError("config [" + section + "] " + key + ": empty list");
    return out;
}

std::vector<std::string> Config::get_strings(
    const std::string& section, const std::string& key,
    const std::vector<std::string>& fallback) const {
    const auto* v = lookup(sections_, section, key);
    if (!v) return fallback;
    std::vector<std::string> out;
    std::istringstream ss(*v);
    std::string s;
    while (ss >> s) out.push_back(s);
    return out;
}

void Config::validate() const {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"run", {"seed", "shards", "out", "diagnostics_csv"}},
        {"calibration", {"file", "n", "window", "max_rel_se"}},
        {"crofton", {"n", "window", "rtol", "circle_n", "circle_segments"}},
        {"santalo",
         {"n_volume", "n_area", "n_coarea", "window", "quadrature", "rtol",
          "coarea_radius"}},
        {"liouville", {"n", "window", "cross_radius", "rtol", "fiber_n"}},
        {"length_form", {"n", "window", "lengths", "rtol"}},
        {"thm1",
         {"n_pairs", "window", "ball_radius", "rtol", "n_patch", "patch_radius",
          "fold_angle", "patch_window"}},
        {"intersect", {"fixtures"}},
        {"stretch",
         {"n", "window", "horizon", "dt", "bump_amplitude", "bump_radius",
          "scale"}},
        {"conjugacy",
         {"samples", "t_max", "tau", "dt", "residual_tol", "cocycle_tol",
          "exact_tol", "bump_amplitude", "bump_radius", "window"}},
        {"entropy", {"l_max", "rtol"}},
    };
    for (const auto& [section, keys] : sections_) {
        const auto it = schema.find(section);
        if (it == schema.end())
            throw ConfigError("config: unknown section [" + section + "]");
        for (const auto& [key, value] : keys)
            if (!it->second.count(key))
                throw ConfigError("config [" + section + "]: unknown key '" + key +
                                  "'");
    }
    if (!has("run", "seed"))
        throw ConfigError("config [run]: seed is required (no wall-clock default)");
    get_u64("run", "seed", 0);
    // Every tolerance present must be positive.
    for (const auto& [section, keys] : sections_)
        for (const auto& [key, value] : keys)
            if (key.find("tol") != std::string::npos ||
                key == "max_rel_se")
                if (get_double(section, key, 1.0) <= 0.0)
                    throw ConfigError("config [" + section + "] " + key +
                                      ": tolerance must be positive");
}

JobConfig make_job_config(const Config& config) {
    config.validate();
    JobConfig job;
    job.config = config;
    job.seed = config.get_u64("run", "seed", 0);
    job.shards = config.get_int("run", "shards", 4);
    if (job.shards < 1)
        throw ConfigError("config [run] shards: must be at least 1");
    job.out_dir = config.get_string("run", "out", "out");
    job.diagnostics_csv = config.get_bool("run", "diagnostics_csv", false);
    return job;
}

} // namespace h3geo
