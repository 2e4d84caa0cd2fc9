// qstate.hpp
// Finite-dimensional state vectors and observables over an integer-labelled
// basis |j>. Dimensions are small (a handful of levels), so everything is a
// dense Eigen vector or matrix.

#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wvsim {

using cplx = std::complex<double>;
using Label = int;

/// Normalization tolerance applied to every constructed state.
inline constexpr double kNormTolerance = 1e-12;

/// A normalized pure state over an ascending list of distinct basis labels.
class SystemState {
public:
    /// Builds a state from (label, amplitude) pairs and normalizes it.
    /// Pairs may come in any order; labels must be distinct.
    static SystemState from_pairs(std::span<const std::pair<Label, cplx>> pairs);
    static SystemState from_pairs(std::initializer_list<std::pair<Label, cplx>> pairs) {
        return from_pairs(std::span<const std::pair<Label, cplx>>(pairs.begin(), pairs.size()));
    }

    /// Normalizes `amplitudes` on an already sorted, distinct label list.
    static SystemState from_vector(std::vector<Label> labels, Eigen::VectorXcd amplitudes);

    /// The basis state |label> on the given label set.
    static SystemState basis(std::vector<Label> labels, Label label);

    const std::vector<Label>& labels() const noexcept { return labels_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    std::size_t dim() const noexcept { return labels_.size(); }

    /// Amplitude on `label`, zero if the label is not part of the basis.
    cplx amplitude(Label label) const;

private:
    SystemState(std::vector<Label> labels, Eigen::VectorXcd amps)
        : labels_(std::move(labels)), amps_(std::move(amps)) {}

    std::vector<Label> labels_;
    Eigen::VectorXcd amps_;
};

/// An eigenvalue together with its normalized eigenvector (label basis).
struct Eigenpair {
    double value;
    Eigen::VectorXcd vector;
};

/// Hermitian operator on an integer-labelled basis.
class Observable {
public:
    /// Checks Hermiticity to 1e-12 and stores the exactly symmetrized matrix.
    static Observable from_matrix(std::vector<Label> labels, Eigen::MatrixXcd matrix);

    /// Diagonal observable sum_j values[j] |j><j|; off-diagonals are exactly zero.
    static Observable diagonal(std::vector<Label> labels, std::span<const double> values);

    /// A = sum_j j |j><j| on the given labels.
    static Observable integer_spin(std::vector<Label> labels);

    /// |j><j| on the given labels. `j` must be one of them.
    static Observable projector(std::vector<Label> labels, Label j);

    /// sigma_z on the two-level basis {-1, +1} (eigenvalue equals the label).
    static Observable sigma_z();

    static Observable identity(std::vector<Label> labels);

    const std::vector<Label>& labels() const noexcept { return labels_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return labels_.size(); }

    bool is_diagonal() const;

    /// Eigenpairs in ascending eigenvalue order. Diagonal observables return
    /// the label basis vectors directly.
    std::vector<Eigenpair> eigenpairs() const;

private:
    Observable(std::vector<Label> labels, Eigen::MatrixXcd matrix)
        : labels_(std::move(labels)), matrix_(std::move(matrix)) {}

    std::vector<Label> labels_;
    Eigen::MatrixXcd matrix_;
};

/// <bra|ket> = sum_j conj(bra_j) ket_j.
cplx inner(const SystemState& bra, const SystemState& ket);

/// A|state>, not renormalized.
Eigen::VectorXcd apply(const Observable& a, const SystemState& state);

/// <state|A|state>; the imaginary residue is checked against 1e-12 and dropped.
double expectation(const Observable& a, const SystemState& state);

/// Throws BasisMismatch unless both label lists are identical.
void require_same_basis(std::span<const Label> lhs, std::span<const Label> rhs);

}  // namespace wvsim
