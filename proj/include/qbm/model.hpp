// model.hpp: discretized quantum Brownian motion. Bath, Hamiltonian, initial state and
// the exact normal-mode propagator for covariance matrices.
//
// Mode 0 is the system particle, modes 1..N are bath oscillators. The bare system
// frequency carries the counterterm, so the total potential
//   V = m Omega_S^2 x^2 / 2 + sum_n m_n w_n^2 (q_n + c_n x / (m_n w_n^2))^2 / 2
// is a sum of squares and Omega_S is the renormalized (observed) frequency.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qbm/errors.hpp"
#include "qbm/gaussian.hpp"

namespace qbm {

struct BathSpec {
    double exponent = 0.5;        // 1 Ohmic, < 1 sub-Ohmic, > 1 super-Ohmic
    double cutoff = 20.0;         // Lambda
    double coupling = 0.1;        // gamma_0
    std::size_t n_oscillators = 600;
    double bath_mass = 1.0;       // m_n, shared by all oscillators
    double system_mass = 1.0;     // m
    double omega_s = 3.0;         // renormalized system frequency

    /// Human-readable list of violated invariants; empty when valid.
    std::vector<std::string> problems() const {
        std::vector<std::string> out;
        if (!(exponent > 0.0)) out.emplace_back("exponent must be > 0");
        if (!(cutoff > 0.0)) out.emplace_back("cutoff must be > 0");
        if (!(coupling >= 0.0)) out.emplace_back("coupling must be >= 0");
        if (n_oscillators < 1) out.emplace_back("n_oscillators must be >= 1");
        if (!(bath_mass > 0.0)) out.emplace_back("bath_mass must be > 0");
        if (!(system_mass > 0.0)) out.emplace_back("system_mass must be > 0");
        if (!(omega_s > 0.0)) out.emplace_back("omega_s must be > 0");
        return out;
    }

    void validate() const {
        auto p = problems();
        if (!p.empty()) throw ValidationError(std::move(p));
    }
};

struct DiscretizedBath {
    std::vector<double> frequencies;  // w_n, strictly increasing in (0, Lambda]
    std::vector<double> couplings;    // c_n
    std::vector<double> masses;       // m_n
    double delta_omega = 0.0;
    double counterterm = 0.0;         // sum_n c_n^2 / (m_n w_n^2)

    std::size_t size() const noexcept { return frequencies.size(); }
};

/// Squeezed system state with zero mean. dx * dp = 1/2.
struct SqueezedInitialState {
    double r = -5.0;
    double dx = 0.0;
    double dp = 0.0;
};

/// How the squeezing parameter r sets the spreads.
///
///   amplitude: dx = dx0 e^{r}, so |r| = ln(delta_x / dx0) for the delocalized quadrature.
///   ratio:     r = ln(m Omega_S dx / dp), i.e. dx^2 = e^{r} / (2 m Omega_S).
enum class SqueezeConvention { amplitude, ratio };

inline SqueezedInitialState make_squeezed_state(double r, double mass, double omega_s,
                                                SqueezeConvention convention = SqueezeConvention::amplitude) {
    if (!(mass > 0.0) || !(omega_s > 0.0)) throw DomainError("squeezed state needs positive mass and frequency");
    const double ground_dx2 = 1.0 / (2.0 * mass * omega_s);
    const double exponent = convention == SqueezeConvention::amplitude ? 2.0 * r : r;
    SqueezedInitialState s;
    s.r = r;
    s.dx = std::sqrt(ground_dx2 * std::exp(exponent));
    s.dp = 0.5 / s.dx;
    return s;
}

// ------------------------------------------------------------------------------------------

/// J(w) = 2 m gamma_0 w (w / Lambda)^{n-1} theta(Lambda - w) / pi.
inline double spectral_density(const BathSpec& spec, double omega) {
    if (!(omega >= 0.0)) throw DomainError("spectral density needs omega >= 0");
    if (omega > spec.cutoff) return 0.0;
    // written as Lambda (w/Lambda)^n so that sub-Ohmic exponents are finite at w = 0
    return 2.0 * spec.system_mass * spec.coupling * spec.cutoff * std::pow(omega / spec.cutoff, spec.exponent) /
           std::numbers::pi;
}

/// Uniform grid w_k = k Lambda / N with c_k^2 = 2 m_k w_k J(w_k) dw.
inline DiscretizedBath discretize_bath(const BathSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_oscillators;
    DiscretizedBath bath;
    bath.delta_omega = spec.cutoff / static_cast<double>(n);
    bath.frequencies.resize(n);
    bath.couplings.resize(n);
    bath.masses.assign(n, spec.bath_mass);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = spec.cutoff * static_cast<double>(k + 1) / static_cast<double>(n);
        const double c2 = 2.0 * spec.bath_mass * w * spectral_density(spec, w) * bath.delta_omega;
        bath.frequencies[k] = w;
        bath.couplings[k] = std::sqrt(c2);
        bath.counterterm += c2 / (spec.bath_mass * w * w);
    }
    return bath;
}

/// Mass-weighted potential matrix of the system plus bath, (N+1) x (N+1).
inline Eigen::MatrixXd potential_matrix(const BathSpec& spec, const DiscretizedBath& bath) {
    const auto n = static_cast<Eigen::Index>(bath.size());
    const double m = spec.system_mass;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n + 1, n + 1);
    v(0, 0) = spec.omega_s * spec.omega_s + bath.counterterm / m;
    double schur = v(0, 0);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double w2 = bath.frequencies[uk] * bath.frequencies[uk];
        v(k + 1, k + 1) = w2;
        const double off = bath.couplings[uk] / std::sqrt(m * bath.masses[uk]);
        v(0, k + 1) = off;
        v(k + 1, 0) = off;
        schur -= off * off / w2;
    }
    // V is PSD iff the Schur complement of the bath block (= Omega_S^2 for a consistent
    // counterterm) is non-negative.
    if (schur < -1e-10 * std::max(1.0, v(0, 0))) {
        throw NegativeEigenvalue("potential matrix is indefinite (Schur complement " + std::to_string(schur) + ")");
    }
    return v;
}

/// Interleaved per-mode masses (system first).
inline std::vector<double> mode_masses(const BathSpec& spec, const DiscretizedBath& bath) {
    std::vector<double> masses;
    masses.reserve(bath.size() + 1);
    masses.push_back(spec.system_mass);
    masses.insert(masses.end(), bath.masses.begin(), bath.masses.end());
    return masses;
}

/// Exact solution of the linear Heisenberg equations through the normal modes of V.
class Propagator {
public:
    Propagator(Eigen::VectorXd eigenfrequencies, Eigen::MatrixXd eigenbasis, std::vector<double> masses)
        : frequencies_(std::move(eigenfrequencies)), basis_(std::move(eigenbasis)), masses_(std::move(masses)) {}

    std::size_t n_modes() const noexcept { return masses_.size(); }
    const Eigen::VectorXd& eigenfrequencies() const noexcept { return frequencies_; }
    const Eigen::MatrixXd& eigenbasis() const noexcept { return basis_; }
    const std::vector<double>& masses() const noexcept { return masses_; }

    /// Phase-space propagator S(t) in interleaved (x, p) ordering: R(t) = S(t) R(0).
    Eigen::MatrixXd phase_space(double t) const {
        const Eigen::Index n = basis_.rows();
        Eigen::VectorXd c(n), s_over_w(n), w_s(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = frequencies_(k);
            c(k) = std::cos(w * t);
            w_s(k) = w * std::sin(w * t);
            s_over_w(k) = w > 0.0 ? std::sin(w * t) / w : t;  // w -> 0 limit
        }
        const Eigen::MatrixXd cc = basis_ * c.asDiagonal() * basis_.transpose();
        const Eigen::MatrixXd ss = basis_ * s_over_w.asDiagonal() * basis_.transpose();
        const Eigen::MatrixXd ws = basis_ * w_s.asDiagonal() * basis_.transpose();

        Eigen::MatrixXd out(2 * n, 2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double si = std::sqrt(masses_[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < n; ++j) {
                const double sj = std::sqrt(masses_[static_cast<std::size_t>(j)]);
                out(2 * i, 2 * j) = cc(i, j) * sj / si;
                out(2 * i, 2 * j + 1) = ss(i, j) / (si * sj);
                out(2 * i + 1, 2 * j) = -ws(i, j) * si * sj;
                out(2 * i + 1, 2 * j + 1) = cc(i, j) * si / sj;
            }
        }
        return out;
    }

private:
    Eigen::VectorXd frequencies_;
    Eigen::MatrixXd basis_;
    std::vector<double> masses_;
};

/// Orthogonal diagonalization V = O diag(lambda) O^T; eigenvalues in [-tol, 0] clamp to 0.
inline Propagator build_propagator(const Eigen::MatrixXd& v, std::vector<double> masses) {
    if (v.rows() != v.cols() || static_cast<std::size_t>(v.rows()) != masses.size()) {
        throw DimensionMismatch("potential matrix and mass list disagree in size");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(v);
    if (solver.info() != Eigen::Success) throw EigensolveFailure("symmetric eigensolve of V failed");
    const double clamp = 1e-10 * std::max(1.0, v.cwiseAbs().maxCoeff());
    Eigen::VectorXd w(v.rows());
    for (Eigen::Index k = 0; k < v.rows(); ++k) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda < -clamp) {
            throw NegativeEigenvalue("potential eigenvalue " + std::to_string(lambda) + " below clamp");
        }
        w(k) = std::sqrt(std::max(0.0, lambda));
    }
    return Propagator(std::move(w), solver.eigenvectors(), std::move(masses));
}

inline Propagator build_propagator(const BathSpec& spec, const DiscretizedBath& bath) {
    return build_propagator(potential_matrix(spec, bath), mode_masses(spec, bath));
}

/// Product state: squeezed system times bath ground state.
inline CovarianceMatrix initial_covariance(const BathSpec& spec, const DiscretizedBath& bath,
                                           const SqueezedInitialState& init) {
    const auto n = static_cast<Eigen::Index>(bath.size());
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * (n + 1), 2 * (n + 1));
    sigma(0, 0) = init.dx * init.dx;
    sigma(1, 1) = init.dp * init.dp;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double mw = bath.masses[uk] * bath.frequencies[uk];
        sigma(2 * (k + 1), 2 * (k + 1)) = 1.0 / (2.0 * mw);
        sigma(2 * (k + 1) + 1, 2 * (k + 1) + 1) = mw / 2.0;
    }
    (void)spec;
    return CovarianceMatrix(std::move(sigma));
}

/// sigma(t) = S(t) sigma0 S(t)^T.
inline CovarianceMatrix evolve(const Propagator& prop, const CovarianceMatrix& sigma0, double t) {
    if (sigma0.n_modes() != prop.n_modes()) {
        throw DimensionMismatch("state has " + std::to_string(sigma0.n_modes()) + " modes, propagator " +
                                std::to_string(prop.n_modes()));
    }
    if (!(t >= 0.0)) throw DomainError("evolve needs t >= 0");
    if (t == 0.0) return sigma0;
    const Eigen::MatrixXd s = prop.phase_space(t);
    Eigen::MatrixXd out = s * sigma0.data() * s.transpose();
    return CovarianceMatrix(std::move(out), sigma0.labels());
}

/// Matrix M of the quadratic form H = R^T M R / 2 in interleaved ordering.
inline Eigen::MatrixXd hamiltonian_matrix(const BathSpec& spec, const DiscretizedBath& bath) {
    const Eigen::MatrixXd v = potential_matrix(spec, bath);
    const auto masses = mode_masses(spec, bath);
    const Eigen::Index n = v.rows();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mi = masses[static_cast<std::size_t>(i)];
        h(2 * i + 1, 2 * i + 1) = 1.0 / mi;
        for (Eigen::Index j = 0; j < n; ++j) {
            h(2 * i, 2 * j) = std::sqrt(mi * masses[static_cast<std::size_t>(j)]) * v(i, j);
        }
    }
    return h;
}

/// <H> = trace(M sigma) / 2.
inline double total_energy(const BathSpec& spec, const DiscretizedBath& bath, const CovarianceMatrix& cov) {
    if (cov.n_modes() != bath.size() + 1) throw DimensionMismatch("state and bath disagree in mode count");
    return 0.5 * (hamiltonian_matrix(spec, bath).cwiseProduct(cov.data())).sum();
}

/// Energy held by the bare bath oscillators, sum_n <pi_n^2/2m_n + m_n w_n^2 q_n^2/2>.
inline double bath_energy(const DiscretizedBath& bath, const CovarianceMatrix& cov) {
    if (cov.n_modes() != bath.size() + 1) throw DimensionMismatch("state and bath disagree in mode count");
    double e = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(2 * (k + 1));
        const double m = bath.masses[k];
        const double w = bath.frequencies[k];
        e += cov(i + 1, i + 1) / (2.0 * m) + 0.5 * m * w * w * cov(i, i);
    }
    return e;
}

/// Time beyond which Poincare recurrences of the discrete bath appear, 2 pi N / Lambda.
inline double recurrence_time(const BathSpec& spec) {
    return 2.0 * std::numbers::pi * static_cast<double>(spec.n_oscillators) / spec.cutoff;
}

}  // namespace qbm
