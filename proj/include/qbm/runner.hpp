// runner.hpp: experiment orchestration and result persistence.
//
// Pipeline: discretize -> propagator -> per-t evolve -> measures -> reports. Curves are
// written as CSV (one row per (t, f) or (t, band)); reports, the config sidecar and the
// manifest as JSON.

#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbm/analytic.hpp"
#include "qbm/config.hpp"
#include "qbm/correlations.hpp"
#include "qbm/errors.hpp"
#include "qbm/gaussian.hpp"
#include "qbm/model.hpp"
#include "qbm/redundancy.hpp"

namespace qbm {

enum class Stage { evolve, bands, piplot, peplot, redundancy, analytic, compare };

inline std::string stage_name(Stage s) {
    switch (s) {
        case Stage::evolve: return "evolve";
        case Stage::bands: return "bands";
        case Stage::piplot: return "piplot";
        case Stage::peplot: return "peplot";
        case Stage::redundancy: return "redundancy";
        case Stage::analytic: return "analytic";
        case Stage::compare: return "compare";
    }
    return "?";
}

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct OutputFile {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    RunConfig config;
    std::string version = kVersionTag;
    std::vector<StageTiming> timings;
    std::vector<OutputFile> outputs;
    std::vector<std::string> warnings;
};

// ------------------------------------------------------------------------------------------
// Formatting and digests
// ------------------------------------------------------------------------------------------

/// Shortest-safe round-trip representation of a double.
inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

inline std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path + " for digest");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 15> buf{};
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["profile"] = c.profile;
    j["exponent"] = c.bath.exponent;
    j["cutoff"] = c.bath.cutoff;
    j["gamma0"] = c.bath.coupling;
    j["n_oscillators"] = c.bath.n_oscillators;
    j["system_mass"] = c.bath.system_mass;
    j["bath_mass"] = c.bath.bath_mass;
    j["omega_s"] = c.bath.omega_s;
    j["r"] = c.r;
    j["squeeze_convention"] = c.squeeze_convention == SqueezeConvention::amplitude ? "amplitude" : "ratio";
    j["t_min"] = c.t_min;
    j["t_max"] = c.t_max;
    j["n_times"] = c.n_times;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["f_grid"] = c.f_grid;
    j["band_groups"] = c.band_groups;
    j["n_bands"] = c.n_bands;
    j["delta_e"] = c.delta_e;
    j["delta_i"] = c.delta_i;
    j["output_dir"] = c.output_dir;
    j["run_id"] = c.run_id;
    return j;
}

/// Digest of the physical parameters, used to tag curves.
inline std::string bath_hash(const RunConfig& c) {
    std::ostringstream key;
    key << fmt_num(c.bath.exponent) << '|' << fmt_num(c.bath.cutoff) << '|' << fmt_num(c.bath.coupling) << '|'
        << c.bath.n_oscillators << '|' << fmt_num(c.bath.system_mass) << '|' << fmt_num(c.bath.bath_mass) << '|'
        << fmt_num(c.bath.omega_s) << '|' << fmt_num(c.r);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char ch : key.str()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return buf.data();
}

// ------------------------------------------------------------------------------------------
// Experiment: the simulated system, shared read-only across stages
// ------------------------------------------------------------------------------------------

class Experiment {
public:
    explicit Experiment(const RunConfig& config)
        : config_(config),
          bath_(discretize_bath(config.bath)),
          propagator_(build_propagator(config.bath, bath_)),
          init_(make_squeezed_state(config.r, config.bath.system_mass, config.bath.omega_s, config.squeeze_convention)),
          sigma0_(initial_covariance(config.bath, bath_, init_)),
          branch_(analytic::make_branch_params(config.bath, bath_, init_)),
          times_(config.times()) {
        if (config.band_groups > 0) units_ = band_units(band_partition(bath_, config.band_groups));
        else units_ = oscillator_units(bath_);
        sampler_.rng_seed = config.seed;
        sampler_.samples_per_point = config.samples;
        sampler_.f_grid = config.f_grid.empty() ? default_f_grid(units_.size()) : config.f_grid;
        std::sort(sampler_.f_grid.begin(), sampler_.f_grid.end());
        for (double f : sampler_.f_grid) fraction_units(f, units_.size());
    }

    const RunConfig& config() const noexcept { return config_; }
    const DiscretizedBath& bath() const noexcept { return bath_; }
    const Propagator& propagator() const noexcept { return propagator_; }
    const SqueezedInitialState& initial_state() const noexcept { return init_; }
    const CovarianceMatrix& initial_covariance_matrix() const noexcept { return sigma0_; }
    const analytic::BranchModelParams& branch() const noexcept { return branch_; }
    const std::vector<double>& times() const noexcept { return times_; }
    const SamplingUnits& units() const noexcept { return units_; }
    const FractionSampler& sampler() const noexcept { return sampler_; }

    CovarianceMatrix state_at(double t) const { return evolve(propagator_, sigma0_, t); }

    FractionCurves curves_at(double t, bool mi, bool e, std::size_t workers) const {
        auto out = fraction_curves(state_at(t), sampler_, units_, t, mi, e, workers);
        const auto tag = bath_hash(config_);
        if (out.mutual_information) out.mutual_information->bath_hash = tag;
        if (out.log_negativity) out.log_negativity->bath_hash = tag;
        return out;
    }

private:
    RunConfig config_;
    DiscretizedBath bath_;
    Propagator propagator_;
    SqueezedInitialState init_;
    CovarianceMatrix sigma0_;
    analytic::BranchModelParams branch_;
    std::vector<double> times_;
    SamplingUnits units_;
    FractionSampler sampler_;
};

// ------------------------------------------------------------------------------------------
// Curve persistence
// ------------------------------------------------------------------------------------------

inline const char* kCurveHeader = "t,f,mean,stderr,n_samples,measure_tag\n";

inline void append_curve_rows(std::ostream& out, const CorrelationCurve& c) {
    if (c.measure == Measure::mutual_information) {
        out << fmt_num(c.t) << ",0," << fmt_num(c.h_system) << ",0,1,H_S\n";
    }
    const auto tag = measure_tag(c.measure);
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << fmt_num(c.t) << ',' << fmt_num(c.f_values[i]) << ',' << fmt_num(c.mean[i]) << ','
            << fmt_num(c.std_error[i]) << ',' << c.n_samples[i] << ',' << tag << '\n';
    }
}

/// Reads curves written by append_curve_rows, one per distinct t in file order.
inline std::vector<CorrelationCurve> read_curves_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open curve file " + path);
    std::string line;
    if (!std::getline(in, line) || line + "\n" != kCurveHeader) throw IoError(path + ": unexpected header");
    std::vector<CorrelationCurve> curves;
    std::map<std::string, std::size_t> by_t;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw IoError(path + ":" + std::to_string(lineno) + ": expected 6 columns");
        double t = 0.0, f = 0.0, mean = 0.0, se = 0.0;
        std::size_t n = 0;
        try {
            t = std::stod(cells[0]);
            f = std::stod(cells[1]);
            mean = std::stod(cells[2]);
            se = std::stod(cells[3]);
            n = static_cast<std::size_t>(std::stoull(cells[4]));
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": malformed number");
        }
        auto [it, inserted] = by_t.try_emplace(cells[0], curves.size());
        if (inserted) {
            curves.emplace_back();
            curves.back().t = t;
        }
        auto& c = curves[it->second];
        if (cells[5] == "H_S") {
            c.h_system = mean;
            continue;
        }
        c.measure = cells[5] == "MI" ? Measure::mutual_information : Measure::log_negativity;
        c.f_values.push_back(f);
        c.mean.push_back(mean);
        c.std_error.push_back(se);
        c.n_samples.push_back(n);
    }
    return curves;
}

// ------------------------------------------------------------------------------------------
// Numeric vs analytic comparison
// ------------------------------------------------------------------------------------------

struct ComparisonRow {
    double t = 0.0;
    double f = 0.0;
    Measure measure = Measure::log_negativity;
    double numeric = 0.0;
    double analytic = 0.0;
    double rel_dev = 0.0;
    bool suppressed = false;  // numeric E well below the branch-model bound
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    double max_dev_e = 0.0;
    double max_dev_mi = 0.0;
};

inline double relative_deviation(double numeric, double reference) {
    // Correlation-free points (t = 0) carry eigen-noise only.
    if (std::max(std::abs(numeric), std::abs(reference)) < 1e-9) return 0.0;
    if (reference == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(numeric - reference) / std::abs(reference);
}

/// Rows for every grid f in [f_lo, f_hi] at one time point.
inline void compare_curves(ComparisonTable& table, const analytic::BranchModelParams& branch, double t,
                           const CorrelationCurve* pi, const CorrelationCurve* pe, double f_lo = 0.1,
                           double f_hi = 0.9) {
    const double load = analytic::squeezing_load(t, branch);
    auto add = [&](const CorrelationCurve& c, Measure m) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double f = c.f_values[i];
            if (f < f_lo - 1e-12 || f > f_hi + 1e-12) continue;
            ComparisonRow row;
            row.t = t;
            row.f = f;
            row.measure = m;
            row.numeric = c.mean[i];
            row.analytic = m == Measure::log_negativity ? analytic::entanglement_analytic(f, load)
                                                        : analytic::mi_analytic(f, load);
            row.rel_dev = relative_deviation(row.numeric, row.analytic);
            row.suppressed = m == Measure::log_negativity && row.numeric < 0.9 * row.analytic;
            auto& worst = m == Measure::log_negativity ? table.max_dev_e : table.max_dev_mi;
            worst = std::max(worst, row.rel_dev);
            table.rows.push_back(row);
        }
    };
    if (pe) add(*pe, Measure::log_negativity);
    if (pi) add(*pi, Measure::mutual_information);
}

/// Numeric curves for every configured time against the branch model.
inline ComparisonTable compare_numeric_analytic(const RunConfig& config, double f_lo = 0.1, double f_hi = 0.9) {
    const Experiment exp(config);
    ComparisonTable table;
    for (double t : exp.times()) {
        const auto c = exp.curves_at(t, true, true, config.workers);
        compare_curves(table, exp.branch(), t, &*c.mutual_information, &*c.log_negativity, f_lo, f_hi);
    }
    return table;
}

// ------------------------------------------------------------------------------------------
// Orchestration
// ------------------------------------------------------------------------------------------

namespace detail {

class OutputSet {
public:
    explicit OutputSet(const RunConfig& c) : dir_(c.output_dir), run_id_(c.run_id) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
    }

    std::string path(const std::string& suffix) const {
        return (std::filesystem::path(dir_) / (run_id_ + "_" + suffix)).string();
    }

    std::ofstream open(const std::string& suffix) {
        const auto p = path(suffix);
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + p);
        written_.push_back(p);
        return out;
    }

    void remove_all() noexcept {
        for (const auto& p : written_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& written() const noexcept { return written_; }

private:
    std::string dir_;
    std::string run_id_;
    std::vector<std::string> written_;
};

inline void close_checked(std::ofstream& out, const std::string& what) {
    out.flush();
    if (!out) throw IoError("write failed for " + what);
    out.close();
}

}  // namespace detail

struct RunOptions {
    std::vector<std::string> pi_input;  // persisted PI curve file for the redundancy stage
    std::string pe_input;               // persisted PE curve file for the redundancy stage
    std::ostream* log = nullptr;
};

/// Runs the requested stages for one configuration and writes all outputs.
inline RunManifest run_experiment(const RunConfig& config, std::vector<Stage> stages, const RunOptions& options = {}) {
    RunManifest manifest;
    manifest.config = config;
    auto has = [&](Stage s) { return std::find(stages.begin(), stages.end(), s) != stages.end(); };
    detail::OutputSet outputs(config);
    auto log = [&](const std::string& msg) {
        if (options.log) *options.log << msg << '\n';
    };

    const double recurrence_guard = 0.5 * recurrence_time(config.bath);
    if (config.t_max > recurrence_guard) {
        manifest.warnings.push_back("t_max = " + fmt_num(config.t_max) + " exceeds pi N / Lambda = " +
                                    fmt_num(recurrence_guard) + "; discrete-bath recurrences may contaminate results");
        log("warning: " + manifest.warnings.back());
    }

    try {
        using clock = std::chrono::steady_clock;
        auto timed = [&](const std::string& name, auto&& body) {
            const auto t0 = clock::now();
            try {
                body();
            } catch (const ValidationError&) {
                throw;
            } catch (const Error& e) {
                throw Error(e.kind(), "stage " + name + ": " + e.what());
            }
            manifest.timings.push_back({name, std::chrono::duration<double>(clock::now() - t0).count()});
        };

        const bool from_files = has(Stage::redundancy) && !options.pi_input.empty() && !options.pe_input.empty();
        const bool need_sim = has(Stage::evolve) || has(Stage::bands) || has(Stage::piplot) || has(Stage::peplot) ||
                              has(Stage::compare) || (has(Stage::redundancy) && !from_files) || has(Stage::analytic);
        std::optional<Experiment> exp;
        if (need_sim) timed("setup", [&] { exp.emplace(config); });
        const auto times = config.times();

        {
            std::ofstream sidecar = outputs.open("config.json");
            sidecar << config_to_json(config).dump(2) << '\n';
            detail::close_checked(sidecar, "config sidecar");
        }

        if (has(Stage::evolve)) {
            timed("evolve", [&] {
                auto out = outputs.open("evolve.csv");
                out << "t,H_S,min_nu,max_purity_defect,energy,bath_energy,var_x,var_p,cov_xp\n";
                for (double t : times) {
                    const auto s = exp->state_at(t);
                    const auto spec = symplectic_eigenvalues(s);
                    double defect = 0.0;
                    for (double nu : spec.values) defect = std::max(defect, std::abs(nu - kVacuumNu));
                    const ModeSubset sys({0}, s.n_modes());
                    out << fmt_num(t) << ',' << fmt_num(subsystem_entropy(s, sys)) << ',' << fmt_num(spec.min()) << ','
                        << fmt_num(defect) << ',' << fmt_num(total_energy(config.bath, exp->bath(), s)) << ','
                        << fmt_num(bath_energy(exp->bath(), s)) << ',' << fmt_num(s(0, 0)) << ',' << fmt_num(s(1, 1))
                        << ',' << fmt_num(s(0, 1)) << '\n';
                }
                detail::close_checked(out, "evolve.csv");
            });
        }

        if (has(Stage::bands)) {
            timed("bands", [&] {
                const auto partition = band_partition(exp->bath(), config.n_bands);
                auto out = outputs.open("bands.csv");
                out << "t,band,center_frequency,MI,E\n";
                for (double t : times) {
                    const auto rows = band_correlations(exp->state_at(t), partition, config.workers);
                    for (std::size_t b = 0; b < rows.size(); ++b) {
                        out << fmt_num(t) << ',' << b << ',' << fmt_num(rows[b].center) << ','
                            << fmt_num(rows[b].mutual_information) << ',' << fmt_num(rows[b].log_negativity) << '\n';
                    }
                }
                detail::close_checked(out, "bands.csv");
            });
        }

        const bool want_mi = has(Stage::piplot) || has(Stage::compare) || (has(Stage::redundancy) && !from_files);
        const bool want_e = has(Stage::peplot) || has(Stage::compare) || (has(Stage::redundancy) && !from_files);
        std::vector<CorrelationCurve> pi_curves, pe_curves;
        if (want_mi || want_e) {
            timed("curves", [&] {
                for (double t : times) {
                    auto c = exp->curves_at(t, want_mi, want_e, config.workers);
                    if (c.mutual_information) pi_curves.push_back(std::move(*c.mutual_information));
                    if (c.log_negativity) pe_curves.push_back(std::move(*c.log_negativity));
                    log("curves done at t = " + fmt_num(t));
                }
            });
            if (has(Stage::piplot)) {
                auto out = outputs.open("MI.csv");
                out << kCurveHeader;
                for (const auto& c : pi_curves) append_curve_rows(out, c);
                detail::close_checked(out, "MI.csv");
            }
            if (has(Stage::peplot)) {
                auto out = outputs.open("E.csv");
                out << kCurveHeader;
                for (const auto& c : pe_curves) append_curve_rows(out, c);
                detail::close_checked(out, "E.csv");
            }
        }

        if (has(Stage::redundancy)) {
            timed("redundancy", [&] {
                if (from_files) {
                    pi_curves = read_curves_csv(options.pi_input.front());
                    pe_curves = read_curves_csv(options.pe_input);
                }
                if (pi_curves.size() != pe_curves.size()) {
                    throw InsufficientGrid("PI and PE inputs cover different numbers of time points");
                }
                auto csv = outputs.open("redundancy.csv");
                csv << "t,R_E,R_I,I_NR,analytic_R_E,flags\n";
                nlohmann::json reports = nlohmann::json::array();
                for (std::size_t i = 0; i < pi_curves.size(); ++i) {
                    nlohmann::json j;
                    j["t"] = pe_curves[i].t;
                    try {
                        const auto rep = redundancy_report(pi_curves[i], pe_curves[i], config.delta_e, config.delta_i,
                                                           exp ? &exp->branch() : nullptr);
                        std::string flags;
                        for (const auto& f : rep.flags) flags += (flags.empty() ? "" : ";") + f;
                        csv << fmt_num(rep.t) << ',' << fmt_num(rep.R_E) << ',' << fmt_num(rep.R_I) << ','
                            << fmt_num(rep.I_NR) << ',' << fmt_num(rep.analytic_R_E) << ',' << flags << '\n';
                        j["R_E"] = rep.R_E;
                        j["R_I"] = rep.R_I;
                        j["f_E"] = rep.f_E;
                        j["f_I"] = rep.f_I;
                        j["f_E_band"] = {fmt_num(rep.f_E_lo), fmt_num(rep.f_E_hi)};
                        j["f_I_band"] = {fmt_num(rep.f_I_lo), fmt_num(rep.f_I_hi)};
                        j["delta_E"] = rep.delta_E;
                        j["delta_I"] = rep.delta_I;
                        j["I_NR"] = rep.I_NR;
                        j["analytic_R_E"] = fmt_num(rep.analytic_R_E);
                        j["H_S"] = rep.H_S;
                        j["E_full"] = rep.E_full;
                        j["E_half"] = fmt_num(rep.E_half);
                        j["flags"] = rep.flags;
                    } catch (const Error& e) {
                        // t = 0 and other correlation-free points have no threshold crossing
                        csv << fmt_num(pe_curves[i].t) << ",nan,nan,nan,nan,undefined\n";
                        j["error"] = e.what();
                    }
                    reports.push_back(j);
                }
                detail::close_checked(csv, "redundancy.csv");
                auto js = outputs.open("redundancy.json");
                js << reports.dump(2) << '\n';
                detail::close_checked(js, "redundancy.json");
            });
        }

        if (has(Stage::analytic)) {
            timed("analytic", [&] {
                std::vector<double> grid = exp->sampler().f_grid;
                auto out = outputs.open("analytic.csv");
                out << "t,f,d,load,E_analytic,MI_analytic,E_universal,E_asymptotic\n";
                for (double t : times) {
                    const double d = analytic::d_total(t, exp->branch());
                    const double load = d * exp->branch().delta_x * exp->branch().delta_x;
                    for (double f : grid) {
                        out << fmt_num(t) << ',' << fmt_num(f) << ',' << fmt_num(d) << ',' << fmt_num(load) << ','
                            << fmt_num(analytic::entanglement_analytic(f, load)) << ','
                            << fmt_num(analytic::mi_analytic(f, load)) << ','
                            << (f < 1.0 ? fmt_num(analytic::e_universal(f)) : std::string("inf")) << ','
                            << (load > 0.0 ? fmt_num(analytic::e_asymptotic(f, load)) : std::string("nan")) << '\n';
                    }
                }
                detail::close_checked(out, "analytic.csv");
            });
        }

        if (has(Stage::compare)) {
            timed("compare", [&] {
                ComparisonTable table;
                for (std::size_t i = 0; i < times.size(); ++i) {
                    compare_curves(table, exp->branch(), times[i], &pi_curves[i], &pe_curves[i]);
                }
                auto out = outputs.open("compare.csv");
                out << "t,f,measure,numeric,analytic,rel_dev,flag\n";
                for (const auto& r : table.rows) {
                    out << fmt_num(r.t) << ',' << fmt_num(r.f) << ',' << measure_tag(r.measure) << ','
                        << fmt_num(r.numeric) << ',' << fmt_num(r.analytic) << ',' << fmt_num(r.rel_dev) << ','
                        << (r.suppressed ? "dissipation_suppressed" : "") << '\n';
                }
                detail::close_checked(out, "compare.csv");
                nlohmann::json j;
                j["max_rel_dev_E"] = fmt_num(table.max_dev_e);
                j["max_rel_dev_MI"] = fmt_num(table.max_dev_mi);
                j["rows"] = table.rows.size();
                auto js = outputs.open("compare.json");
                js << j.dump(2) << '\n';
                detail::close_checked(js, "compare.json");
            });
        }
    } catch (...) {
        outputs.remove_all();
        throw;
    }

    for (const auto& p : outputs.written()) manifest.outputs.push_back({p, sha256_file(p)});

    nlohmann::json m;
    m["version"] = manifest.version;
    m["config"] = config_to_json(config);
    m["stages"] = nlohmann::json::array();
    for (auto s : stages) m["stages"].push_back(stage_name(s));
    m["timings"] = nlohmann::json::array();
    for (const auto& t : manifest.timings) m["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    m["outputs"] = nlohmann::json::array();
    for (const auto& o : manifest.outputs) m["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
    m["warnings"] = manifest.warnings;
    const auto manifest_path = outputs.path("manifest.json");
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + manifest_path);
    out << m.dump(2) << '\n';
    return manifest;
}

}  // namespace qbm
