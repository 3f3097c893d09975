// config.hpp: run configuration: defaults, flat key = value files, flag overrides.
//
// Precedence, highest first: command-line flags, QBM_SEED (seed only), config file,
// profile defaults. Every problem is collected and reported in one ValidationError.

#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "qbm/errors.hpp"
#include "qbm/model.hpp"

namespace qbm {

inline constexpr const char* kVersionTag = "qbm-redundancy 1.0.0";

struct RunConfig {
    std::string profile = "full";
    BathSpec bath;                      // full-scale defaults: n = 1/2, Lambda = 20, gamma_0 = 0.1, N = 600
    double r = -5.0;
    SqueezeConvention squeeze_convention = SqueezeConvention::amplitude;
    double t_min = 0.0;
    double t_max = 10.0;
    std::size_t n_times = 40;
    std::uint64_t seed = 12345;
    std::size_t samples = 20;
    std::vector<double> f_grid;         // empty: default grid for the sampling units
    std::size_t band_groups = 0;        // 0: sample single oscillators; > 0: sample this many bands
    std::size_t n_bands = 30;           // bands for band-resolved correlations
    double delta_e = 0.2;
    double delta_i = 0.1;
    std::string output_dir = "qbm_out";
    std::string run_id = "run";
    std::size_t workers = 1;

    std::vector<double> times() const {
        std::vector<double> ts(n_times);
        for (std::size_t i = 0; i < n_times; ++i) {
            ts[i] = n_times == 1 ? t_min
                                 : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(n_times - 1);
        }
        return ts;
    }
};

using ConfigValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

}  // namespace detail

/// Parses `key = value` lines; '#' starts a comment, [sections] are ignored.
inline ConfigValues parse_config_text(const std::string& text) {
    ConfigValues out;
    std::vector<std::string> problems;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = detail::trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string value = detail::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
        out[detail::trim(line.substr(0, eq))] = detail::unquote(detail::trim(value));
    }
    if (!problems.empty()) throw ValidationError(problems);
    return out;
}

inline ConfigValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace detail {

class ConfigBuilder {
public:
    explicit ConfigBuilder(const ConfigValues& values) : values_(values) {}

    RunConfig build() {
        RunConfig c;
        if (auto p = take("profile")) {
            c.profile = *p;
            if (c.profile == "desk") {
                c.bath.n_oscillators = 150;
                c.n_times = 40;
            } else if (c.profile != "full") {
                problems_.push_back("profile: must be 'full' or 'desk' (got '" + c.profile + "')");
            }
        }
        real("exponent", c.bath.exponent);
        real("cutoff", c.bath.cutoff);
        real("gamma0", c.bath.coupling);
        count("n_oscillators", c.bath.n_oscillators);
        real("system_mass", c.bath.system_mass);
        real("bath_mass", c.bath.bath_mass);
        real("omega_s", c.bath.omega_s);
        real("r", c.r);
        if (auto v = take("squeeze_convention")) {
            if (*v == "amplitude") c.squeeze_convention = SqueezeConvention::amplitude;
            else if (*v == "ratio") c.squeeze_convention = SqueezeConvention::ratio;
            else problems_.push_back("squeeze_convention: must be 'amplitude' or 'ratio'");
        }
        real("t_min", c.t_min);
        real("t_max", c.t_max);
        count("n_times", c.n_times);
        if (auto v = take("seed")) {
            std::uint64_t s = 0;
            if (!parse_number(*v, s)) problems_.push_back("seed: not an unsigned integer: '" + *v + "'");
            else c.seed = s;
        }
        count("samples", c.samples);
        if (auto v = take("f_grid")) {
            std::stringstream ss(*v);
            std::string item;
            while (std::getline(ss, item, ',')) {
                double f = 0.0;
                if (!parse_number(trim(item), f)) problems_.push_back("f_grid: not a number: '" + item + "'");
                else c.f_grid.push_back(f);
            }
        }
        count("band_groups", c.band_groups);
        count("n_bands", c.n_bands);
        real("delta_e", c.delta_e);
        real("delta_i", c.delta_i);
        if (auto v = take("output_dir")) c.output_dir = *v;
        if (auto v = take("run_id")) c.run_id = *v;
        count("workers", c.workers);
        for (const auto& [k, v] : values_) {
            if (!used_.count(k)) problems_.push_back(k + ": unknown key");
        }
        check(c);
        if (!problems_.empty()) throw ValidationError(problems_);
        return c;
    }

private:
    template <typename T>
    static bool parse_number(const std::string& s, T& out) {
        const char* b = s.data();
        const char* e = s.data() + s.size();
        auto [p, ec] = std::from_chars(b, e, out);
        return ec == std::errc() && p == e;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        used_[key] = true;
        return it->second;
    }

    void real(const std::string& key, double& out) {
        if (auto v = take(key)) {
            if (!parse_number(*v, out)) problems_.push_back(key + ": not a number: '" + *v + "'");
        }
    }

    void count(const std::string& key, std::size_t& out) {
        if (auto v = take(key)) {
            if (!parse_number(*v, out)) problems_.push_back(key + ": not a non-negative integer: '" + *v + "'");
        }
    }

    void check(const RunConfig& c) {
        for (const auto& p : c.bath.problems()) problems_.push_back(p);
        if (!(c.t_min >= 0.0)) problems_.push_back("t_min must be >= 0");
        if (c.n_times < 1) problems_.push_back("n_times must be >= 1");
        if (c.n_times > 1 && !(c.t_max > c.t_min)) problems_.push_back("t_max must be > t_min");
        if (c.samples < 1) problems_.push_back("samples must be >= 1");
        for (double f : c.f_grid) {
            if (!(f > 0.0 && f <= 1.0)) problems_.push_back("f_grid: value " + std::to_string(f) + " outside (0, 1]");
        }
        if (c.band_groups > c.bath.n_oscillators) problems_.push_back("band_groups must not exceed n_oscillators");
        if (c.n_bands < 1 || c.n_bands > c.bath.n_oscillators) problems_.push_back("n_bands must lie in [1, n_oscillators]");
        if (!(c.delta_e > 0.0 && c.delta_e < 1.0)) problems_.push_back("delta_e must lie in (0, 1)");
        if (!(c.delta_i > 0.0 && c.delta_i < 1.0)) problems_.push_back("delta_i must lie in (0, 1)");
        if (!std::regex_match(c.run_id, std::regex("[A-Za-z0-9_.-]+")) || c.run_id == "." || c.run_id == "..") {
            problems_.push_back("run_id must be non-empty and use only [A-Za-z0-9_.-]");
        }
        if (c.workers < 1) problems_.push_back("workers must be >= 1");
    }

    const ConfigValues& values_;
    std::map<std::string, bool> used_;
    std::vector<std::string> problems_;
};

}  // namespace detail

/// Merges file values, the QBM_SEED environment variable and flags, then validates.
inline RunConfig parse_config(const ConfigValues& file_values, const ConfigValues& flag_values = {},
                              const char* env_seed = std::getenv("QBM_SEED")) {
    ConfigValues merged = file_values;
    if (env_seed != nullptr && *env_seed != '\0') merged["seed"] = env_seed;
    for (const auto& [k, v] : flag_values) merged[k] = v;
    return detail::ConfigBuilder(merged).build();
}

inline RunConfig parse_config_file(const std::string& path, const ConfigValues& flag_values = {},
                                   const char* env_seed = std::getenv("QBM_SEED")) {
    return parse_config(read_config_file(path), flag_values, env_seed);
}

}  // namespace qbm
