// redundancy.hpp: entanglement / information redundancy and non-redundant information
// extracted from PE and PI curves.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qbm/analytic.hpp"
#include "qbm/correlations.hpp"
#include "qbm/errors.hpp"

namespace qbm {

/// Default deficits delta_E = 2 delta_I = 0.2.
inline constexpr double kDefaultDeltaE = 0.2;
inline constexpr double kDefaultDeltaI = 0.1;

/// Upper bound on the half-environment entanglement, ln sqrt 5.
inline const double kHalfEntanglementBound = 0.5 * std::log(5.0);

struct ThresholdResult {
    double fraction = 0.0;     // f_E or f_I
    double redundancy = 0.0;   // 1 / fraction
    double fraction_lo = std::numeric_limits<double>::quiet_NaN();  // re-solved on mean -/+ stderr
    double fraction_hi = std::numeric_limits<double>::quiet_NaN();
    bool non_monotone = false;
};

struct RedundancyReport {
    double t = 0.0;
    double R_E = 0.0;
    double R_I = 0.0;
    double f_E = 0.0;
    double f_I = 0.0;
    double delta_E = kDefaultDeltaE;
    double delta_I = kDefaultDeltaI;
    double I_NR = 0.0;
    double analytic_R_E = std::numeric_limits<double>::quiet_NaN();
    double H_S = 0.0;
    double E_full = 0.0;
    double E_half = std::numeric_limits<double>::quiet_NaN();
    double f_E_lo = std::numeric_limits<double>::quiet_NaN(), f_E_hi = std::numeric_limits<double>::quiet_NaN();
    double f_I_lo = std::numeric_limits<double>::quiet_NaN(), f_I_hi = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> flags;
};

namespace detail {

inline bool is_non_decreasing(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return b < a; }) == v.end();
}

inline void check_curve(const CorrelationCurve& c) {
    if (c.f_values.empty() || c.mean.size() != c.f_values.size()) throw InsufficientGrid("curve is empty or ragged");
    if (!std::is_sorted(c.f_values.begin(), c.f_values.end())) throw InsufficientGrid("curve f grid is not sorted");
}

// f_E on a given set of values. Walks down from f = 1 to the first grid point at or
// below target, then interpolates inside the segment above it. f_E is never smaller than
// the distance from 1 to the largest grid point below 1.
inline double solve_entanglement_threshold(const std::vector<double>& f, const std::vector<double>& e,
                                           double target) {
    const std::size_t last = f.size() - 1;
    if (e.front() > target) {
        throw NotReached("entanglement stays above the threshold down to f = " + std::to_string(f.front()));
    }
    std::size_t k = last;
    while (e[k] > target) --k;  // terminates because e.front() <= target
    double g = f[k];
    if (k < last && e[k + 1] > e[k]) {
        g = f[k] + (target - e[k]) * (f[k + 1] - f[k]) / (e[k + 1] - e[k]);
    }
    const double resolution = 1.0 - f[last - 1];
    return std::max(1.0 - g, resolution);
}

// f_I: first crossing of `target` walking up from the smallest f, interpolated from the
// previous grid point, or from the origin (I(0) = 0) before the first one.
inline double solve_information_threshold(const std::vector<double>& f, const std::vector<double>& info,
                                          double target) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (info[k] >= target) {
            const double f0 = k == 0 ? 0.0 : f[k - 1];
            const double i0 = k == 0 ? 0.0 : info[k - 1];
            double fi = f[k];
            if (info[k] > i0) fi = f0 + (target - i0) * (f[k] - f0) / (info[k] - i0);
            return std::max(fi, f.front());
        }
    }
    throw NotReached("mutual information never reaches the threshold");
}

template <typename Solve>
void fill_band(ThresholdResult& r, const CorrelationCurve& c, Solve&& solve) {
    std::vector<double> lo(c.mean), hi(c.mean);
    for (std::size_t i = 0; i < c.mean.size(); ++i) {
        const double s = i < c.std_error.size() ? c.std_error[i] : 0.0;
        lo[i] -= s;
        hi[i] += s;
    }
    try { r.fraction_lo = solve(lo); } catch (const NotReached&) {}
    try { r.fraction_hi = solve(hi); } catch (const NotReached&) {}
    if (r.fraction_lo > r.fraction_hi) std::swap(r.fraction_lo, r.fraction_hi);
}

}  // namespace detail

/// Smallest f_E with E(1 - f_E) <= delta_E E(1); R_E = 1 / f_E.
inline ThresholdResult entanglement_redundancy(const CorrelationCurve& curve, double delta_e) {
    detail::check_curve(curve);
    if (!(delta_e > 0.0 && delta_e < 1.0)) throw DomainError("delta_E must lie in (0, 1)");
    if (curve.f_values.size() < 2 || std::abs(curve.f_values.back() - 1.0) > 1e-12) {
        throw InsufficientGrid("entanglement curve must include f = 1 and at least one f < 1");
    }
    const double e_full = curve.mean.back();
    if (e_full < 1e-9) throw FlatCurve("E(f=1) = " + std::to_string(e_full) + " is below 1e-9");
    const double target = delta_e * e_full;

    ThresholdResult r;
    r.fraction = detail::solve_entanglement_threshold(curve.f_values, curve.mean, target);
    r.redundancy = 1.0 / r.fraction;
    r.non_monotone = !detail::is_non_decreasing(curve.mean);
    detail::fill_band(r, curve, [&](const std::vector<double>& v) {
        return detail::solve_entanglement_threshold(curve.f_values, v, delta_e * v.back());
    });
    return r;
}

/// Smallest f_I with I(f_I) >= (1 - delta_I) H(S); R_I = 1 / f_I.
inline ThresholdResult information_redundancy(const CorrelationCurve& curve, double delta_i, double h_system) {
    detail::check_curve(curve);
    if (!(delta_i > 0.0 && delta_i < 1.0)) throw DomainError("delta_I must lie in (0, 1)");
    if (!(h_system > 0.0)) throw FlatCurve("H(S) must be positive");
    const double target = (1.0 - delta_i) * h_system;

    ThresholdResult r;
    r.fraction = detail::solve_information_threshold(curve.f_values, curve.mean, target);
    r.redundancy = 1.0 / r.fraction;
    r.non_monotone = !detail::is_non_decreasing(curve.mean);
    detail::fill_band(r, curve, [&](const std::vector<double>& v) {
        return detail::solve_information_threshold(curve.f_values, v, target);
    });
    return r;
}

/// Slope of the PI curve at f = 1/2 from the nearest grid points on either side.
inline double non_redundant_info(const CorrelationCurve& curve) {
    detail::check_curve(curve);
    std::optional<std::size_t> below, above;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double f = curve.f_values[i];
        if (f < 0.5 - 1e-12) below = i;
        if (f > 0.5 + 1e-12 && !above) above = i;
    }
    if (!below || !above) throw InsufficientGrid("curve needs points on both sides of f = 1/2");
    return (curve.mean[*above] - curve.mean[*below]) / (curve.f_values[*above] - curve.f_values[*below]);
}

/// Deficit delta_E for which R_E and R_I coincide:
/// delta_E = delta_I H(S) / E(1) + E(1/2) / E(1).
inline double deficit_match(double delta_i, double h_system, double e_full, double e_half) {
    if (!(e_full > 0.0)) throw DomainError("deficit_match needs E(1) > 0");
    return delta_i * h_system / e_full + e_half / e_full;
}

/// Full report for one time point. `branch` supplies the analytic estimate when given.
inline RedundancyReport redundancy_report(const CorrelationCurve& pi, const CorrelationCurve& pe, double delta_e,
                                          double delta_i, const analytic::BranchModelParams* branch = nullptr) {
    RedundancyReport rep;
    rep.t = pe.t;
    rep.delta_E = delta_e;
    rep.delta_I = delta_i;
    rep.H_S = pi.h_system;
    rep.E_full = pe.mean.back();
    if (auto half = pe.at(0.5)) rep.E_half = *half;

    const auto re = entanglement_redundancy(pe, delta_e);
    rep.f_E = re.fraction;
    rep.R_E = re.redundancy;
    rep.f_E_lo = re.fraction_lo;
    rep.f_E_hi = re.fraction_hi;
    if (re.non_monotone) rep.flags.emplace_back("pe_non_monotone");

    const auto ri = information_redundancy(pi, delta_i, pi.h_system);
    rep.f_I = ri.fraction;
    rep.R_I = ri.redundancy;
    rep.f_I_lo = ri.fraction_lo;
    rep.f_I_hi = ri.fraction_hi;
    if (ri.non_monotone) rep.flags.emplace_back("pi_non_monotone");

    rep.I_NR = non_redundant_info(pi);
    if (!std::isnan(rep.E_half) && rep.E_half > kHalfEntanglementBound) rep.flags.emplace_back("e_half_above_bound");
    if (branch) rep.analytic_R_E = analytic::redundancy_estimate(delta_e, rep.t, *branch);
    return rep;
}

}  // namespace qbm
