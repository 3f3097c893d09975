// correlations.hpp: band-resolved correlations and fraction-averaged PI / PE plots.
//
// A "unit" is what gets sampled when building a random environment fraction: a single
// oscillator by default, or a contiguous frequency band when bands are grouped first.
// Fractions are sampled in complementary pairs: a subset A at f and its complement at
// 1 - f share one random draw.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qbm/errors.hpp"
#include "qbm/gaussian.hpp"
#include "qbm/model.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

struct BandPartition {
    std::size_t n_bands = 0;
    std::vector<double> band_edges;                  // band-center frequencies
    std::vector<std::vector<std::size_t>> band_members;  // covariance mode indices (1..N)
};

/// Contiguous equal-count bands; the first N % n_bands bands get one extra mode.
inline BandPartition band_partition(const DiscretizedBath& bath, std::size_t n_bands) {
    const std::size_t n = bath.size();
    if (n_bands < 1 || n_bands > n) {
        throw BadBandCount("band count " + std::to_string(n_bands) + " outside [1, " + std::to_string(n) + "]");
    }
    BandPartition out;
    out.n_bands = n_bands;
    const std::size_t base = n / n_bands;
    const std::size_t extra = n % n_bands;
    std::size_t next = 0;
    for (std::size_t b = 0; b < n_bands; ++b) {
        const std::size_t count = base + (b < extra ? 1 : 0);
        std::vector<std::size_t> members(count);
        double wsum = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            members[j] = next + j + 1;
            wsum += bath.frequencies[next + j];
        }
        next += count;
        out.band_edges.push_back(wsum / static_cast<double>(count));
        out.band_members.push_back(std::move(members));
    }
    return out;
}

struct BandCorrelation {
    double center = 0.0;
    double mutual_information = 0.0;
    double log_negativity = 0.0;
};

/// MI(S, B) and log-negativity of S versus B (rest traced out), for every band B.
inline std::vector<BandCorrelation> band_correlations(const CovarianceMatrix& cov, const BandPartition& bands,
                                                      std::size_t workers = 1) {
    const std::size_t m = cov.n_modes();
    const ModeSubset system({0}, m);
    const double h_system = subsystem_entropy(cov, system);
    std::vector<BandCorrelation> out(bands.n_bands);
    parallel_for(bands.n_bands, workers, [&](std::size_t b) {
        const ModeSubset band(bands.band_members[b], m);
        const ModeSubset joint = system.united(band);
        const CovarianceMatrix reduced = partial_trace(cov, joint);
        const double h_band = subsystem_entropy(cov, band);
        const double h_joint = von_neumann_entropy(reduced);
        out[b].center = bands.band_edges[b];
        out[b].mutual_information = std::max(0.0, h_system + h_band - h_joint);
        out[b].log_negativity = log_negativity(reduced, ModeSubset({0}, reduced.n_modes()));
    });
    return out;
}

// ------------------------------------------------------------------------------------------
// Fraction sampling
// ------------------------------------------------------------------------------------------

/// Sampling units: each entry lists the covariance modes (1..N) making up one unit.
using SamplingUnits = std::vector<std::vector<std::size_t>>;

inline SamplingUnits oscillator_units(const DiscretizedBath& bath) {
    SamplingUnits units(bath.size());
    for (std::size_t k = 0; k < bath.size(); ++k) units[k] = {k + 1};
    return units;
}

inline SamplingUnits band_units(const BandPartition& bands) { return bands.band_members; }

struct FractionSampler {
    std::uint64_t rng_seed = 12345;
    std::size_t samples_per_point = 20;
    std::vector<double> f_grid;
};

/// Default grid: geometric spacing from ~1% of the units up to 1/2, mirrored about 1/2,
/// plus f = 1. Every value is k / n_units. For 150 units this gives 24 points.
inline std::vector<double> default_f_grid(std::size_t n_units, std::size_t points_per_half = 12) {
    if (n_units == 0) throw EmptyFraction("no sampling units");
    const std::size_t k_half = std::max<std::size_t>(1, n_units / 2);
    const double k_min = std::max(1.0, std::round(0.01 * static_cast<double>(n_units)));
    std::vector<std::size_t> ks;
    for (std::size_t j = 0; j < points_per_half; ++j) {
        const double frac = points_per_half == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(points_per_half - 1);
        const double k = k_min * std::pow(static_cast<double>(k_half) / k_min, frac);
        ks.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(k)), 1, k_half));
    }
    std::vector<std::size_t> all = ks;
    for (auto k : ks) all.push_back(n_units - k);
    all.push_back(n_units);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<double> grid;
    for (auto k : all) {
        if (k >= 1) grid.push_back(static_cast<double>(k) / static_cast<double>(n_units));
    }
    return grid;
}

/// Number of units in a fraction f of n_units.
inline std::size_t fraction_units(double f, std::size_t n_units) {
    if (!(f > 0.0 && f <= 1.0)) throw EmptyFraction("fraction " + std::to_string(f) + " outside (0, 1]");
    const auto k = static_cast<std::size_t>(std::llround(f * static_cast<double>(n_units)));
    if (k < 1) throw EmptyFraction("fraction " + std::to_string(f) + " rounds to zero units");
    return k;
}

/// Uniform draw without replacement of round(f * n_units) unit positions. The stream is
/// keyed by (seed, subset size, n_units, sample index) only, so the same draw is reused
/// at every time point.
inline ModeSubset sample_fraction(const FractionSampler& sampler, double f, std::size_t n_units,
                                  std::size_t sample_index) {
    const std::size_t k = fraction_units(f, n_units);
    std::vector<std::size_t> all(n_units);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (k == n_units) return ModeSubset(std::move(all), n_units);
    std::seed_seq seq{static_cast<std::uint32_t>(sampler.rng_seed), static_cast<std::uint32_t>(sampler.rng_seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(n_units),
                      static_cast<std::uint32_t>(sample_index)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> picked;
    picked.reserve(k);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
    return ModeSubset(std::move(picked), n_units);
}

/// Environment modes (covariance indices) covered by a subset of units.
inline ModeSubset expand_units(const ModeSubset& chosen, const SamplingUnits& units, std::size_t n_modes) {
    std::vector<std::size_t> modes;
    for (auto u : chosen.indices()) modes.insert(modes.end(), units[u].begin(), units[u].end());
    return ModeSubset(std::move(modes), n_modes);
}

// ------------------------------------------------------------------------------------------
// PI / PE plots
// ------------------------------------------------------------------------------------------

enum class Measure { mutual_information, log_negativity };

inline std::string measure_tag(Measure m) { return m == Measure::mutual_information ? "MI" : "E"; }

struct CorrelationCurve {
    Measure measure = Measure::mutual_information;
    double t = 0.0;
    std::vector<double> f_values;
    std::vector<double> mean;
    std::vector<double> std_error;
    std::vector<std::size_t> n_samples;
    std::vector<std::vector<double>> samples;  // raw per-sample values at each f
    double h_system = 0.0;                     // H(S), emitted with PI curves
    std::uint64_t seed = 0;
    std::size_t samples_per_point = 0;
    std::string bath_hash;

    std::size_t size() const noexcept { return f_values.size(); }

    /// Mean at the grid point equal to f (within 1e-12), if present.
    std::optional<double> at(double f) const {
        for (std::size_t i = 0; i < f_values.size(); ++i) {
            if (std::abs(f_values[i] - f) < 1e-12) return mean[i];
        }
        return std::nullopt;
    }
};

struct FractionCurves {
    std::optional<CorrelationCurve> mutual_information;
    std::optional<CorrelationCurve> log_negativity;
};

namespace detail {

// One random draw at a pairing level: subset A (size k) and, when paired, its complement.
struct FractionLevel {
    std::size_t grid_index = 0;                          // position of f = k / n_units
    std::optional<std::size_t> partner_index;            // position of 1 - f
    bool self_paired = false;                            // f = 1/2: complement lands on the same f
    double f = 0.0;
};

struct PairValues {
    double mi_a = 0.0, mi_b = 0.0, e_a = 0.0, e_b = 0.0;
};

inline std::vector<FractionLevel> pairing_levels(const std::vector<double>& grid, std::size_t n_units) {
    std::vector<FractionLevel> levels;
    std::vector<bool> covered(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (covered[i]) continue;
        const std::size_t k = fraction_units(grid[i], n_units);
        FractionLevel level;
        level.grid_index = i;
        level.f = grid[i];
        covered[i] = true;
        if (k < n_units) {
            for (std::size_t j = i; j < grid.size(); ++j) {
                if (fraction_units(grid[j], n_units) == n_units - k) {
                    if (j == i) level.self_paired = true;
                    else if (!covered[j]) {
                        level.partner_index = j;
                        covered[j] = true;
                    }
                    break;
                }
            }
        }
        levels.push_back(level);
    }
    return levels;
}

inline double stderr_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace detail

/// Mutual information and/or log-negativity between S and random fractions E_f.
inline FractionCurves fraction_curves(const CovarianceMatrix& cov, const FractionSampler& sampler,
                                      const SamplingUnits& units, double t, bool want_mi, bool want_e,
                                      std::size_t workers = 1) {
    const std::size_t m = cov.n_modes();
    const std::size_t n_units = units.size();
    if (sampler.f_grid.empty()) throw EmptyFraction("empty f grid");
    std::vector<double> grid = sampler.f_grid;
    std::sort(grid.begin(), grid.end());
    const auto levels = detail::pairing_levels(grid, n_units);

    const ModeSubset system({0}, m);
    const double h_system = subsystem_entropy(cov, system);

    struct Item {
        std::size_t level;
        std::size_t sample;
    };
    std::vector<Item> items;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        const bool full = fraction_units(levels[l].f, n_units) == n_units;
        const std::size_t reps = full ? 1 : sampler.samples_per_point;
        for (std::size_t s = 0; s < reps; ++s) items.push_back({l, s});
    }

    std::vector<detail::PairValues> values(items.size());
    parallel_for(items.size(), workers, [&](std::size_t i) {
        const auto& level = levels[items[i].level];
        const ModeSubset chosen = sample_fraction(sampler, level.f, n_units, items[i].sample);
        const ModeSubset env_a = expand_units(chosen, units, m);
        const ModeSubset joint_a = system.united(env_a);
        const bool paired = level.partner_index.has_value() || level.self_paired;
        auto& out = values[i];
        const CovarianceMatrix reduced_a = partial_trace(cov, joint_a);
        if (want_mi) {
            out.mi_a = h_system + subsystem_entropy(cov, env_a) - von_neumann_entropy(reduced_a);
        }
        if (want_e) out.e_a = log_negativity(reduced_a, ModeSubset({0}, reduced_a.n_modes()));
        if (paired) {
            const ModeSubset env_b = expand_units(chosen.complement(), units, m);
            const ModeSubset joint_b = system.united(env_b);
            const CovarianceMatrix reduced_b = partial_trace(cov, joint_b);
            if (want_mi) {
                out.mi_b = h_system + subsystem_entropy(cov, env_b) - von_neumann_entropy(reduced_b);
            }
            if (want_e) out.e_b = log_negativity(reduced_b, ModeSubset({0}, reduced_b.n_modes()));
        }
    });

    std::vector<std::vector<double>> mi_samples(grid.size()), e_samples(grid.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& level = levels[items[i].level];
        mi_samples[level.grid_index].push_back(values[i].mi_a);
        e_samples[level.grid_index].push_back(values[i].e_a);
        if (level.self_paired) {
            mi_samples[level.grid_index].push_back(values[i].mi_b);
            e_samples[level.grid_index].push_back(values[i].e_b);
        } else if (level.partner_index) {
            mi_samples[*level.partner_index].push_back(values[i].mi_b);
            e_samples[*level.partner_index].push_back(values[i].e_b);
        }
    }

    auto build = [&](Measure measure, std::vector<std::vector<double>>& raw) {
        CorrelationCurve c;
        c.measure = measure;
        c.t = t;
        c.f_values = grid;
        c.h_system = h_system;
        c.seed = sampler.rng_seed;
        c.samples_per_point = sampler.samples_per_point;
        for (auto& v : raw) {
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            c.mean.push_back(mean);
            c.std_error.push_back(detail::stderr_of(v, mean));
            c.n_samples.push_back(v.size());
        }
        c.samples = std::move(raw);
        return c;
    };

    FractionCurves out;
    if (want_mi) out.mutual_information = build(Measure::mutual_information, mi_samples);
    if (want_e) out.log_negativity = build(Measure::log_negativity, e_samples);
    return out;
}

/// Partial information plot: mean I(S, E_f) per f, with H(S) attached.
inline CorrelationCurve pi_plot(const CovarianceMatrix& cov, const FractionSampler& sampler,
                                const SamplingUnits& units, double t = 0.0, std::size_t workers = 1) {
    return *fraction_curves(cov, sampler, units, t, true, false, workers).mutual_information;
}

/// Partial entanglement plot: mean log-negativity of S versus E_f per f.
inline CorrelationCurve pe_plot(const CovarianceMatrix& cov, const FractionSampler& sampler,
                                const SamplingUnits& units, double t = 0.0, std::size_t workers = 1) {
    return *fraction_curves(cov, sampler, units, t, false, true, workers).log_negativity;
}

}  // namespace qbm
