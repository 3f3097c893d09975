// analytic.hpp: closed-form branch-state (Born-Oppenheimer) oracle.
//
// In the massive, under-damped limit every bath oscillator n is driven by the force
// c_n x(t) along a system trajectory fixed by the initial delocalized quadrature X:
//
//   position branch (r >= 0):  x(t) = X cos(Omega t)        (X = initial position)
//   velocity branch (r <  0):  x(t) = X sin(Omega t)        (Omega X = initial velocity)
//
// The forced displacement of oscillator n per unit X is (c_n / m_n) a_n(t); the overlap of
// displaced bath states decoheres the system as exp(-d(t) (X - X')^2) with
//   d(t) = sum_n c_n^2 (w_n^2 a_n^2 + a_n'^2) / (4 m_n w_n).
// Every correlation measure below depends on d(t) only through x = d(t) delta_x^2,
// where delta_x^2 = <X^2> is the spread of the delocalized quadrature.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qbm/errors.hpp"
#include "qbm/gaussian.hpp"
#include "qbm/model.hpp"

namespace qbm::analytic {

enum class Branch { position, velocity };

/// Heaviside convention theta(0) = 1: r = 0 maps to the position branch.
inline Branch branch_for(double r) noexcept { return r >= 0.0 ? Branch::position : Branch::velocity; }

struct BranchModelParams {
    double r = -5.0;
    double delta_x = 1.0;    // spread of the delocalized quadrature X
    double omega_s = 3.0;
    double system_mass = 1.0;
    double coupling = 0.1;   // gamma_0, only used by the super-Ohmic closed form
    Branch branch = Branch::velocity;
    DiscretizedBath bath;

    /// Ground-state position spread (1 / 2 m Omega_S)^{1/2}.
    double ground_spread() const { return std::sqrt(1.0 / (2.0 * system_mass * omega_s)); }
};

/// Branch parameters matching an actual initial state: delta_x is dx for the position
/// branch and dp / (m Omega_S) for the velocity branch.
inline BranchModelParams make_branch_params(const BathSpec& spec, const DiscretizedBath& bath,
                                            const SqueezedInitialState& init) {
    BranchModelParams p;
    p.r = init.r;
    p.branch = branch_for(init.r);
    p.omega_s = spec.omega_s;
    p.system_mass = spec.system_mass;
    p.coupling = spec.coupling;
    p.delta_x = p.branch == Branch::position ? init.dx : init.dp / (spec.system_mass * spec.omega_s);
    p.bath = bath;
    return p;
}

struct Amplitude {
    double value = 0.0;       // a_n(t)
    double derivative = 0.0;  // da_n/dt
};

/// Relative window |w^2 - Omega^2| < tol * Omega^2 inside which the secular limit is used.
inline constexpr double kResonanceWindow = 1e-9;

/// Forced-oscillator amplitude a_n(t) for bath frequency w.
inline Amplitude trajectory_amplitude(double w, double t, double omega, Branch branch) {
    const double gap = w * w - omega * omega;
    Amplitude a;
    if (std::abs(gap) < kResonanceWindow * omega * omega) {
        // w -> Omega: derivative of the numerators with respect to w over 2 Omega
        if (branch == Branch::position) {
            a.value = t * std::sin(omega * t) / (2.0 * omega);
            a.derivative = (std::sin(omega * t) + omega * t * std::cos(omega * t)) / (2.0 * omega);
        } else {
            a.value = (std::sin(omega * t) / omega - t * std::cos(omega * t)) / (2.0 * omega);
            a.derivative = t * std::sin(omega * t) / 2.0;
        }
        return a;
    }
    if (branch == Branch::position) {
        a.value = (std::cos(omega * t) - std::cos(w * t)) / gap;
        a.derivative = (w * std::sin(w * t) - omega * std::sin(omega * t)) / gap;
    } else {
        a.value = (std::sin(omega * t) - (omega / w) * std::sin(w * t)) / gap;
        a.derivative = omega * (std::cos(omega * t) - std::cos(w * t)) / gap;
    }
    return a;
}

inline Amplitude trajectory_amplitude(std::size_t mode, double t, const BranchModelParams& p) {
    return trajectory_amplitude(p.bath.frequencies.at(mode), t, p.omega_s, p.branch);
}

/// Per-oscillator contributions d_n(t).
inline std::vector<double> d_modes(double t, const BranchModelParams& p) {
    std::vector<double> out(p.bath.size());
    for (std::size_t n = 0; n < p.bath.size(); ++n) {
        const double w = p.bath.frequencies[n];
        const double c = p.bath.couplings[n];
        const auto a = trajectory_amplitude(w, t, p.omega_s, p.branch);
        out[n] = c * c * (w * w * a.value * a.value + a.derivative * a.derivative) / (4.0 * p.bath.masses[n] * w);
    }
    return out;
}

inline double d_total(double t, const BranchModelParams& p) {
    double d = 0.0;
    for (double v : d_modes(t, p)) d += v;
    return d;
}

/// Dimensionless x = d(t) delta_x^2.
inline double squeezing_load(double t, const BranchModelParams& p) { return d_total(t, p) * p.delta_x * p.delta_x; }

/// High-cutoff super-Ohmic (n = 3) closed form, valid for t >> 1/Lambda.
inline double d_superohmic_closed(double t, const BranchModelParams& p) {
    const double pref = p.system_mass * p.coupling / (2.0 * std::numbers::pi);
    const double s = std::sin(p.omega_s * t);
    const double c = std::cos(p.omega_s * t);
    return p.branch == Branch::velocity ? pref * s * s : pref * (1.0 + c * c);
}

/// chi(f) = sqrt(1/4 + 2 f x).
inline double chi(double f, double x) { return std::sqrt(0.25 + 2.0 * f * x); }

inline void check_fraction(double f) {
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("fraction must lie in [0, 1]");
}

/// Branch-model log-negativity between the system and a fraction f of the bath.
///
/// Closed form: E = -1/2 ln{1 + 4B - 4 sqrt(B^2 + 2 f x)}, B = x (1 + 3f). The bracket is
/// evaluated as [1 + 8 x (1 - f)] / [1 + 4B + 4 sqrt(B^2 + 2 f x)], which is the same
/// number without the cancellation at large x.
inline double entanglement_analytic(double f, double x) {
    check_fraction(f);
    const double b = x * (1.0 + 3.0 * f);
    const double root = std::sqrt(b * b + 2.0 * f * x);
    const double bracket = (1.0 + 8.0 * x * (1.0 - f)) / (1.0 + 4.0 * b + 4.0 * root);
    return std::max(0.0, -0.5 * std::log(bracket));
}

inline double entanglement_analytic(double f, double t, const BranchModelParams& p) {
    return entanglement_analytic(f, squeezing_load(t, p));
}

/// I(S, E_f) = h(chi(1)) + h(chi(f)) - h(chi(1 - f)).
inline double mi_analytic(double f, double x) {
    check_fraction(f);
    return entropy_function(chi(1.0, x)) + entropy_function(chi(f, x)) - entropy_function(chi(1.0 - f, x));
}

inline double mi_analytic(double f, double t, const BranchModelParams& p) {
    return mi_analytic(f, squeezing_load(t, p));
}

/// Spectral-density independent large-squeezing limit, an upper bound under dissipation.
inline double e_universal(double f) {
    if (!(f >= 0.0 && f < 1.0)) throw DomainError("e_universal needs 0 <= f < 1");
    return 0.5 * std::log((1.0 + 3.0 * f) / (1.0 - f));
}

/// Large-squeezing form 1/2 ln[(1+3f)^3 / ((1-f)(1+3f)^2 + 2f/x)].
inline double e_asymptotic(double f, double x) {
    check_fraction(f);
    const double g = 1.0 + 3.0 * f;
    return 0.5 * std::log(g * g * g / ((1.0 - f) * g * g + 2.0 * f / x));
}

inline double e_asymptotic(double f, double t, const BranchModelParams& p) {
    return e_asymptotic(f, squeezing_load(t, p));
}

inline constexpr double kSlopeStep = 1e-4;

/// dI/df at f = 1/2 by central difference.
inline double i_nr_analytic(double x) {
    return (mi_analytic(0.5 + kSlopeStep, x) - mi_analytic(0.5 - kSlopeStep, x)) / (2.0 * kSlopeStep);
}

inline double i_nr_analytic(double t, const BranchModelParams& p) { return i_nr_analytic(squeezing_load(t, p)); }

/// dI/df = h'(chi(f)) chi'(f) + h'(chi(1-f)) chi'(1-f), with h'(c) = ln((c+1/2)/(c-1/2)), chi' = x/chi.
inline double mi_slope_symbolic(double f, double x) {
    check_fraction(f);
    auto dh = [](double c) { return std::log((c + 0.5) / (c - 0.5)); };
    const double a = chi(f, x);
    const double b = chi(1.0 - f, x);
    return dh(a) * x / a + dh(b) * x / b;
}

/// Symplectic area estimate A = d delta_x^2 / delta_x0^2.
inline double symplectic_area(double x, const BranchModelParams& p) {
    const double g = p.ground_spread();
    return x / (g * g);
}

/// R_E ~ A^{2 delta_E}.
inline double redundancy_estimate_from_area(double delta_e, double area) { return std::pow(area, 2.0 * delta_e); }

inline double redundancy_estimate(double delta_e, double t, const BranchModelParams& p) {
    if (!(delta_e > 0.0 && delta_e < 1.0)) throw DomainError("deficit must lie in (0, 1)");
    return redundancy_estimate_from_area(delta_e, symplectic_area(squeezing_load(t, p), p));
}

/// Exponential form e^{4 delta_E E(1)} of the same estimate.
inline double redundancy_estimate_exponential(double delta_e, double e_full) { return std::exp(4.0 * delta_e * e_full); }

}  // namespace qbm::analytic
