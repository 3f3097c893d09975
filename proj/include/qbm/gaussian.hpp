// gaussian.hpp: symplectic linear algebra over zero-mean Gaussian states.
//
// States are represented by their covariance matrix of symmetrized second
// moments, sigma_ij = <{R_i, R_j}>/2, in mode-major (x1, p1, x2, p2, ...)
// ordering with hbar = 1. All entropies and negativities are in nats.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

/// Ground-state symplectic eigenvalue in hbar = 1 units.
inline constexpr double kVacuumNu = 0.5;
/// Width of the band below 1/2 that is treated as round-off and clamped.
inline constexpr double kNuClampBand = 1e-9;
/// Relative tolerance used when collapsing eigenvalue moduli into +-i nu pairs.
inline constexpr double kPairingTolerance = 1e-8;

// ------------------------------------------------------------------------------------------
// Domain types
// ------------------------------------------------------------------------------------------

class CovarianceMatrix {
public:
    CovarianceMatrix() = default;

    /// Takes ownership of a 2M x 2M matrix and symmetrizes it. Labels default to 0..M-1.
    explicit CovarianceMatrix(Eigen::MatrixXd data, std::vector<int> labels = {}) {
        if (data.rows() != data.cols() || data.rows() == 0 || data.rows() % 2 != 0) {
            throw DimensionMismatch("covariance matrix must be square with even, non-zero dimension (got " +
                                    std::to_string(data.rows()) + "x" + std::to_string(data.cols()) + ")");
        }
        const auto m = static_cast<std::size_t>(data.rows() / 2);
        symmetry_defect_ = (data - data.transpose()).cwiseAbs().maxCoeff();
        data_ = 0.5 * (data + data.transpose());
        if (labels.empty()) {
            labels.resize(m);
            std::iota(labels.begin(), labels.end(), 0);
        }
        if (labels.size() != m) {
            throw DimensionMismatch("label count " + std::to_string(labels.size()) + " does not match " +
                                    std::to_string(m) + " modes");
        }
        labels_ = std::move(labels);
    }

    std::size_t n_modes() const noexcept { return labels_.size(); }
    std::size_t dim() const noexcept { return 2 * labels_.size(); }
    const Eigen::MatrixXd& data() const noexcept { return data_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

    /// Largest |A - A^T| entry of the matrix handed to the constructor.
    double symmetry_defect() const noexcept { return symmetry_defect_; }

private:
    Eigen::MatrixXd data_;
    std::vector<int> labels_;
    double symmetry_defect_ = 0.0;
};

/// Sorted set of mode positions within a covariance matrix of `n_modes` modes.
class ModeSubset {
public:
    ModeSubset() = default;

    ModeSubset(std::vector<std::size_t> indices, std::size_t n_modes)
        : indices_(std::move(indices)), n_modes_(n_modes) {
        std::sort(indices_.begin(), indices_.end());
        if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
            throw SubsetError("mode subset contains duplicate indices");
        }
        if (!indices_.empty() && indices_.back() >= n_modes_) {
            throw IndexError("mode index " + std::to_string(indices_.back()) + " out of range for " +
                             std::to_string(n_modes_) + " modes");
        }
    }

    ModeSubset(std::initializer_list<std::size_t> indices, std::size_t n_modes)
        : ModeSubset(std::vector<std::size_t>(indices), n_modes) {}

    static ModeSubset all(std::size_t n_modes) {
        std::vector<std::size_t> idx(n_modes);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        return ModeSubset(std::move(idx), n_modes);
    }

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    std::size_t n_modes() const noexcept { return n_modes_; }
    std::size_t complement_size() const noexcept { return n_modes_ - indices_.size(); }

    bool contains(std::size_t i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

    ModeSubset complement() const {
        std::vector<std::size_t> out;
        out.reserve(complement_size());
        for (std::size_t i = 0; i < n_modes_; ++i) {
            if (!contains(i)) out.push_back(i);
        }
        return ModeSubset(std::move(out), n_modes_);
    }

    bool intersects(const ModeSubset& other) const {
        auto a = indices_.begin();
        auto b = other.indices_.begin();
        while (a != indices_.end() && b != other.indices_.end()) {
            if (*a == *b) return true;
            if (*a < *b) ++a; else ++b;
        }
        return false;
    }

    ModeSubset united(const ModeSubset& other) const {
        std::vector<std::size_t> out;
        std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                       std::back_inserter(out));
        return ModeSubset(std::move(out), std::max(n_modes_, other.n_modes_));
    }

    /// Position of mode `i` inside the sorted subset (i must be a member).
    std::size_t position_of(std::size_t i) const {
        return static_cast<std::size_t>(std::lower_bound(indices_.begin(), indices_.end(), i) - indices_.begin());
    }

private:
    std::vector<std::size_t> indices_;
    std::size_t n_modes_ = 0;
};

struct SymplecticSpectrum {
    std::vector<double> values;  // ascending
    double noise = 0.0;          // roundoff band on each value: 4 eps ||sigma||_F^2 >= eps kappa(sigma)

    std::size_t size() const noexcept { return values.size(); }
    double min() const { return values.front(); }
    double max() const { return values.back(); }
};

struct ValidityReport {
    double min_nu = 0.0;
    double symmetry_defect = 0.0;
    bool valid = false;
};

// ------------------------------------------------------------------------------------------
// Operations
// ------------------------------------------------------------------------------------------

/// Canonical commutator matrix: block-diagonal with 2x2 blocks [[0, 1], [-1, 0]].
inline Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
    if (n_modes == 0) throw DomainError("symplectic_form needs at least one mode");
    const auto d = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; k += 2) {
        omega(k, k + 1) = 1.0;
        omega(k + 1, k) = -1.0;
    }
    return omega;
}

namespace detail {

// Omega * a without forming Omega: row 2k <- row 2k+1, row 2k+1 <- -row 2k.
inline Eigen::MatrixXd apply_symplectic_form(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (Eigen::Index k = 0; k < a.rows(); k += 2) {
        out.row(k) = a.row(k + 1);
        out.row(k + 1) = -a.row(k);
    }
    return out;
}

// Pairs sorted values two by two. Neighbours must agree to kPairingTolerance relative,
// plus an absolute floor that reflects the eigensolver's backward error. `spread`
// receives the largest gap found inside a pair.
inline std::vector<double> pair_values(std::vector<double> values, double floor, double& spread) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    out.reserve(values.size() / 2);
    spread = 0.0;
    for (std::size_t k = 0; k + 1 < values.size(); k += 2) {
        const double a = values[k];
        const double b = values[k + 1];
        if (std::abs(a - b) > kPairingTolerance * std::max(std::abs(a), std::abs(b)) + floor) {
            throw PairingFailure("eigenvalue moduli " + std::to_string(a) + " and " + std::to_string(b) +
                                 " do not pair");
        }
        spread = std::max(spread, std::abs(a - b));
        out.push_back(0.5 * (a + b));
    }
    return out;
}

inline SymplecticSpectrum pair_moduli(std::vector<double> moduli) {
    const double top = moduli.empty() ? 0.0 : *std::max_element(moduli.begin(), moduli.end());
    SymplecticSpectrum spec;
    double spread = 0.0;
    spec.values = pair_values(std::move(moduli), 1e-10 * top, spread);
    return spec;
}

// Reference path: eigenvalues of the Hamiltonian-type matrix Omega * sigma are +-i nu.
inline SymplecticSpectrum spectrum_by_complex_eigensolve(const Eigen::MatrixXd& sigma) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(apply_symplectic_form(sigma), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw PairingFailure("eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    std::vector<double> moduli(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) moduli[static_cast<std::size_t>(i)] = std::abs(ev(i));
    return pair_moduli(std::move(moduli));
}

// Fast path for positive-definite sigma = L L^T: K = L^T Omega L is real antisymmetric and
// similar to Omega sigma, so K^T K is symmetric with eigenvalues nu^2, each twice.
inline bool spectrum_by_cholesky(const Eigen::MatrixXd& sigma, SymplecticSpectrum& out) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd k = l.transpose() * apply_symplectic_form(l);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k.rows(), k.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(k.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return false;
    const auto& ev = solver.eigenvalues();
    // Pair in the squared domain, where the eigensolver error is ~eps * nu_max^2.
    std::vector<double> squares(ev.data(), ev.data() + ev.size());
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(0.0, ev(ev.size() - 1));
    double spread = 0.0;
    auto paired = pair_values(std::move(squares), floor, spread);
    for (double& v : paired) v = std::sqrt(std::max(0.0, v));
    out = SymplecticSpectrum{std::move(paired)};
    return true;
}

}  // namespace detail

/// Symplectic eigenvalues of a raw 2M x 2M matrix (not symmetrized first).
///
/// Symmetric positive-definite input goes through a Cholesky-reduced symmetric
/// eigensolve; anything else falls back to the complex eigendecomposition of
/// Omega * sigma. Either way the 2M moduli must collapse into M pairs.
inline SymplecticSpectrum symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || sigma.rows() % 2 != 0) {
        throw DimensionMismatch("symplectic_eigenvalues needs a square matrix of even dimension");
    }
    if (!sigma.allFinite()) throw PairingFailure("matrix has non-finite entries");
    const double scale = std::max(sigma.cwiseAbs().maxCoeff(), 1e-300);
    const bool symmetric = (sigma - sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    SymplecticSpectrum spec;
    if (!(symmetric && detail::spectrum_by_cholesky(sigma, spec))) spec = detail::spectrum_by_complex_eigensolve(sigma);
    // A physical state obeys sigma^-1 <= 4 Omega^T sigma Omega, so kappa(sigma) <= 4 ||sigma||^2
    // and eigen-noise on nu is bounded by eps * kappa.
    spec.noise = 4.0 * std::numeric_limits<double>::epsilon() * sigma.squaredNorm();
    return spec;
}

inline SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cov) {
    return symplectic_eigenvalues(cov.data());
}

/// h(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2), in nats.
inline double entropy_function(double nu) {
    if (!(nu >= kVacuumNu - kNuClampBand)) {
        throw DomainError("entropy_function argument " + std::to_string(nu) + " is below 1/2");
    }
    if (nu <= kVacuumNu) return 0.0;
    const double up = nu + 0.5;
    const double down = nu - 0.5;
    return up * std::log(up) - down * std::log(down);
}

/// Values within the spectrum's roundoff band below 1/2 are treated as 1/2; the strict
/// kNuClampBand of entropy_function applies to anything further out.
inline double von_neumann_entropy(const SymplecticSpectrum& spec) {
    double s = 0.0;
    for (double nu : spec.values) {
        if (nu < kVacuumNu && nu >= kVacuumNu - spec.noise) nu = kVacuumNu;
        s += entropy_function(nu);
    }
    return s;
}

inline double von_neumann_entropy(const CovarianceMatrix& cov) {
    return von_neumann_entropy(symplectic_eigenvalues(cov));
}

namespace detail {

inline std::vector<Eigen::Index> quadrature_indices(const ModeSubset& modes) {
    std::vector<Eigen::Index> idx;
    idx.reserve(2 * modes.size());
    for (auto m : modes.indices()) {
        idx.push_back(static_cast<Eigen::Index>(2 * m));
        idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
    }
    return idx;
}

inline void check_subset_fits(const CovarianceMatrix& cov, const ModeSubset& s) {
    if (!s.empty() && s.indices().back() >= cov.n_modes()) {
        throw IndexError("mode index " + std::to_string(s.indices().back()) + " out of range for " +
                         std::to_string(cov.n_modes()) + " modes");
    }
}

}  // namespace detail

/// Reduced state on `keep`: the principal submatrix on the kept modes.
inline CovarianceMatrix partial_trace(const CovarianceMatrix& cov, const ModeSubset& keep) {
    detail::check_subset_fits(cov, keep);
    if (keep.empty()) throw SubsetError("partial_trace needs at least one kept mode");
    const auto idx = detail::quadrature_indices(keep);
    std::vector<int> labels;
    labels.reserve(keep.size());
    for (auto m : keep.indices()) labels.push_back(cov.labels()[m]);
    return CovarianceMatrix(cov.data()(idx, idx), std::move(labels));
}

/// P sigma P, with P flipping the momentum sign of every mode in `party_a`.
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& cov, const ModeSubset& party_a) {
    detail::check_subset_fits(cov, party_a);
    if (party_a.empty() || party_a.size() >= cov.n_modes()) {
        throw SubsetError("partial transpose needs a strict, non-empty subset of modes");
    }
    Eigen::MatrixXd out = cov.data();
    for (auto m : party_a.indices()) {
        const auto p = static_cast<Eigen::Index>(2 * m + 1);
        out.row(p) *= -1.0;
        out.col(p) *= -1.0;
    }
    return CovarianceMatrix(std::move(out), cov.labels());
}

/// max(0, -sum_{nu~ < 1/2} ln(2 nu~)) over the partially transposed spectrum.
inline double log_negativity(const CovarianceMatrix& cov, const ModeSubset& party_a) {
    const auto spec = symplectic_eigenvalues(partial_transpose(cov, party_a));
    double acc = 0.0;
    for (double nu : spec.values) {
        if (nu < kVacuumNu) acc -= std::log(2.0 * nu);
    }
    return std::max(0.0, acc);
}

/// Entropy of the reduced state on `modes`.
inline double subsystem_entropy(const CovarianceMatrix& cov, const ModeSubset& modes) {
    return von_neumann_entropy(partial_trace(cov, modes));
}

/// I(A, B) = H(A) + H(B) - H(A u B); modes outside A u B are traced out.
inline double mutual_information(const CovarianceMatrix& cov, const ModeSubset& part_a, const ModeSubset& part_b) {
    detail::check_subset_fits(cov, part_a);
    detail::check_subset_fits(cov, part_b);
    if (part_a.intersects(part_b)) throw OverlapError("mutual information parts share modes");
    const ModeSubset joint = part_a.united(part_b);
    return subsystem_entropy(cov, part_a) + subsystem_entropy(cov, part_b) - subsystem_entropy(cov, joint);
}

inline ValidityReport validate_state(const Eigen::MatrixXd& sigma, double tolerance = kNuClampBand) {
    ValidityReport report;
    const double scale = std::max(sigma.cwiseAbs().maxCoeff(), 1.0);
    report.symmetry_defect = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    try {
        const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
        report.min_nu = symplectic_eigenvalues(sym).min();
    } catch (const Error&) {
        report.min_nu = std::nan("");
        return report;
    }
    report.valid = report.min_nu >= kVacuumNu - tolerance && report.symmetry_defect <= tolerance * scale;
    return report;
}

inline ValidityReport validate_state(const CovarianceMatrix& cov, double tolerance = kNuClampBand) {
    ValidityReport report = validate_state(cov.data(), tolerance);
    report.symmetry_defect = std::max(report.symmetry_defect, cov.symmetry_defect());
    const double scale = std::max(cov.data().cwiseAbs().maxCoeff(), 1.0);
    report.valid = report.valid && report.symmetry_defect <= tolerance * scale;
    return report;
}

}  // namespace qbm
