#include "wvsim/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wvsim/error.hpp"

namespace wvsim {

namespace {

void require_sorted_distinct(const std::vector<Label>& labels) {
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i] == labels[i - 1]) {
            throw Error(ErrorKind::DuplicateLabel, "label " + std::to_string(labels[i]) + " repeated");
        }
        if (labels[i] < labels[i - 1]) {
            throw Error(ErrorKind::InvalidData, "labels must be sorted ascending");
        }
    }
}

std::size_t index_of(const std::vector<Label>& labels, Label label) {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
        throw Error(ErrorKind::BasisMismatch, "label " + std::to_string(label) + " not in basis");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

SystemState SystemState::from_pairs(std::span<const std::pair<Label, cplx>> pairs) {
    std::vector<std::pair<Label, cplx>> sorted(pairs.begin(), pairs.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Label> labels;
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(sorted.size()));
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i].first == sorted[i - 1].first) {
            throw Error(ErrorKind::DuplicateLabel,
                        "label " + std::to_string(sorted[i].first) + " given twice");
        }
        labels.push_back(sorted[i].first);
        amps(static_cast<Eigen::Index>(i)) = sorted[i].second;
    }
    return from_vector(std::move(labels), std::move(amps));
}

SystemState SystemState::from_vector(std::vector<Label> labels, Eigen::VectorXcd amplitudes) {
    if (labels.size() != static_cast<std::size_t>(amplitudes.size())) {
        throw Error(ErrorKind::BasisMismatch, "label count differs from amplitude count");
    }
    require_sorted_distinct(labels);
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::ZeroVector, "state has no nonzero finite amplitude");
    }
    amplitudes /= norm;
    return SystemState(std::move(labels), std::move(amplitudes));
}

SystemState SystemState::basis(std::vector<Label> labels, Label label) {
    require_sorted_distinct(labels);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(labels.size()));
    amps(static_cast<Eigen::Index>(index_of(labels, label))) = 1.0;
    return SystemState(std::move(labels), std::move(amps));
}

cplx SystemState::amplitude(Label label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) return {0.0, 0.0};
    return amps_(it - labels_.begin());
}

Observable Observable::from_matrix(std::vector<Label> labels, Eigen::MatrixXcd matrix) {
    require_sorted_distinct(labels);
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (matrix.rows() != n || matrix.cols() != n) {
        throw Error(ErrorKind::BasisMismatch, "matrix shape does not match label count");
    }
    const double deviation = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (deviation > kNormTolerance) {
        throw Error(ErrorKind::NotHermitian,
                    "max |A - A^dagger| = " + std::to_string(deviation));
    }
    Eigen::MatrixXcd hermitian = 0.5 * (matrix + matrix.adjoint());
    return Observable(std::move(labels), std::move(hermitian));
}

Observable Observable::diagonal(std::vector<Label> labels, std::span<const double> values) {
    require_sorted_distinct(labels);
    if (values.size() != labels.size()) {
        throw Error(ErrorKind::BasisMismatch, "value count differs from label count");
    }
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
    return Observable(std::move(labels), std::move(m));
}

Observable Observable::integer_spin(std::vector<Label> labels) {
    std::vector<double> values(labels.begin(), labels.end());
    return diagonal(std::move(labels), values);
}

Observable Observable::projector(std::vector<Label> labels, Label j) {
    require_sorted_distinct(labels);
    std::vector<double> values(labels.size(), 0.0);
    values[index_of(labels, j)] = 1.0;
    return diagonal(std::move(labels), values);
}

Observable Observable::sigma_z() { return integer_spin({-1, 1}); }

Observable Observable::identity(std::vector<Label> labels) {
    std::vector<double> values(labels.size(), 1.0);
    return diagonal(std::move(labels), values);
}

bool Observable::is_diagonal() const {
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r)
        for (Eigen::Index c = 0; c < matrix_.cols(); ++c)
            if (r != c && matrix_(r, c) != cplx(0.0, 0.0)) return false;
    return true;
}

std::vector<Eigenpair> Observable::eigenpairs() const {
    const auto n = matrix_.rows();
    std::vector<Eigenpair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    if (is_diagonal()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            pairs.push_back({matrix_(i, i).real(), Eigen::VectorXcd::Unit(n, i)});
        }
        std::stable_sort(pairs.begin(), pairs.end(),
                         [](const Eigenpair& a, const Eigenpair& b) { return a.value < b.value; });
        return pairs;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
    for (Eigen::Index i = 0; i < n; ++i) {
        pairs.push_back({solver.eigenvalues()(i), solver.eigenvectors().col(i)});
    }
    return pairs;
}

void require_same_basis(std::span<const Label> lhs, std::span<const Label> rhs) {
    if (!std::equal(lhs.begin(), lhs.end(), rhs.begin(), rhs.end())) {
        throw Error(ErrorKind::BasisMismatch, "operands are defined on different label sets");
    }
}

cplx inner(const SystemState& bra, const SystemState& ket) {
    require_same_basis(bra.labels(), ket.labels());
    return bra.amplitudes().dot(ket.amplitudes());  // Eigen's dot conjugates the left operand
}

Eigen::VectorXcd apply(const Observable& a, const SystemState& state) {
    require_same_basis(a.labels(), state.labels());
    return a.matrix() * state.amplitudes();
}

double expectation(const Observable& a, const SystemState& state) {
    const cplx value = state.amplitudes().dot(apply(a, state));
    if (std::abs(value.imag()) > kNormTolerance) {
        throw Error(ErrorKind::NotHermitian,
                    "expectation has imaginary part " + std::to_string(value.imag()));
    }
    return value.real();
}

}  // namespace wvsim
