// measurement.hpp
// Impulsive von Neumann measurement: the system couples to the pointer
// momentum P through H_int = g A P for a time epsilon, so with free evolution
// neglected U = exp(-i g epsilon A (x) P). Each eigenvalue a of A translates
// the pointer by g * epsilon * a, which keeps the pointer inside the
// equal-width Gaussian family of pointer.hpp.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wvsim/pointer.hpp"
#include "wvsim/qstate.hpp"

namespace wvsim {

/// |<post|pre>| at or below this makes the weak value undefined.
inline constexpr double kOrthogonalityFloor = 1e-12;

/// Runs whose weakness metric exceeds this are reported as not weak.
inline constexpr double kWeaknessThreshold = 1e-2;

struct CouplingConfig {
    double g = 1.0;
    double epsilon = 0.0;
    double delta = 1.0;

    /// Validated constructor; g and delta must be positive, epsilon
    /// non-negative (zero means no interaction).
    static CouplingConfig make(double g, double epsilon, double delta);

    void validate() const;
    double unit_shift() const noexcept { return g * epsilon; }
    CouplingConfig with_epsilon(double eps) const { return make(g, eps, delta); }
};

/// One eigen-branch of the entangled system-pointer state: amplitude times
/// normalized system vector times a Gaussian pointer shifted by `shift`.
struct Branch {
    double shift;
    cplx amplitude;
    Eigen::VectorXcd system;
};

struct JointState {
    std::vector<Label> labels;
    double width;
    std::vector<Branch> branches;  // ascending shift, shifts distinct
};

struct PostSelectionResult {
    PointerState pointer;  // conditional pointer state, normalized
    double probability;
};

struct EffectiveShift {
    PointerState actual;  // post-selected pointer
    PointerState ideal;   // initial pointer translated by g eps Re(A_w)
    double distance;      // bures_pure(actual, ideal)
    double displacement;  // bures_pure(initial pointer, actual)
    cplx weak_value;
};

/// A_w = <post|A|pre> / <post|pre>.
cplx weak_value(const SystemState& pre, const SystemState& post, const Observable& a,
                double floor = kOrthogonalityFloor);

/// Applies the impulsive coupling to |pre> (x) pointer0. pointer0 must be a
/// single Gaussian; branches with coinciding shifts are merged.
JointState couple(const SystemState& pre, const Observable& a, const CouplingConfig& cfg,
                  const PointerState& pointer0);

/// Projects the system onto |post> and returns the renormalized pointer
/// together with the exact success probability.
PostSelectionResult post_select(const JointState& joint, const SystemState& post);

/// Reduced pointer state without post-selection: one Gaussian per branch,
/// weighted by the Born probability of that branch.
PointerMixture no_postselect_mixture(const JointState& joint);

/// How much the coupling disturbs the selection scalar product <post|pre>.
///
/// With w_k = <post|P_k|pre> for eigenspace projectors P_k, W = sum_k w_k and
/// K_k the overlap of the initial pointer with its k-shifted copy, returns the
/// larger of
///   |sum_k w_k K_k - W| / |W|                       (amplitude change)
///   |p(eps) - |W|^2| / |W|^2                        (probability change)
/// where p(eps) is the post-selection probability at finite coupling.
/// Both vanish as epsilon -> 0. The first alone is blind to disturbances that
/// are odd in the pointer momentum, which is exactly what happens for large
/// anomalous weak values.
double weakness_metric(const SystemState& pre, const SystemState& post, const Observable& a,
                       const CouplingConfig& cfg);

/// Compares the post-selected pointer with the initial pointer translated by
/// g eps Re(A_w).
EffectiveShift effective_shift_check(const SystemState& pre, const SystemState& post,
                                     const Observable& a, const CouplingConfig& cfg);

}  // namespace wvsim
