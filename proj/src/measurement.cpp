#include "wvsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wvsim/error.hpp"

namespace wvsim {

namespace {

struct SelectionWeight {
    double shift;
    cplx weight;  // <post|branch system> * branch amplitude
};

std::vector<SelectionWeight> selection_weights(const JointState& joint, const SystemState& post) {
    require_same_basis(joint.labels, post.labels());
    std::vector<SelectionWeight> out;
    out.reserve(joint.branches.size());
    for (const auto& b : joint.branches) {
        out.push_back({b.shift, post.amplitudes().dot(b.system) * b.amplitude});
    }
    return out;
}

cplx checked_selection_amplitude(const SystemState& pre, const SystemState& post, double floor) {
    const cplx s = inner(post, pre);
    if (std::abs(s) <= floor) {
        throw Error(ErrorKind::OrthogonalSelection,
                    "|<post|pre>| = " + std::to_string(std::abs(s)) + " is below the floor");
    }
    return s;
}

}  // namespace

CouplingConfig CouplingConfig::make(double g, double epsilon, double delta) {
    CouplingConfig cfg{g, epsilon, delta};
    cfg.validate();
    return cfg;
}

void CouplingConfig::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw Error(ErrorKind::InvalidConfig, "coupling g must be positive");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorKind::InvalidConfig, "duration epsilon must be non-negative");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorKind::InvalidWidth, "pointer width delta must be positive");
    }
}

cplx weak_value(const SystemState& pre, const SystemState& post, const Observable& a,
                double floor) {
    const cplx denominator = checked_selection_amplitude(pre, post, floor);
    require_same_basis(a.labels(), pre.labels());
    const cplx numerator = post.amplitudes().dot(apply(a, pre));
    return numerator / denominator;
}

JointState couple(const SystemState& pre, const Observable& a, const CouplingConfig& cfg,
                  const PointerState& pointer0) {
    cfg.validate();
    require_same_basis(a.labels(), pre.labels());
    if (pointer0.terms().size() != 1) {
        throw Error(ErrorKind::InvalidData, "initial pointer must be a single Gaussian");
    }
    if (pointer0.width() != cfg.delta) {
        throw Error(ErrorKind::WidthMismatch, "initial pointer width differs from cfg.delta");
    }
    const double center = pointer0.terms().front().shift;

    // Group eigenvectors whose pointer shifts coincide; the pointer cannot
    // tell those branches apart.
    struct Group {
        double shift;
        std::vector<Eigen::VectorXcd> vectors;
    };
    std::vector<Group> groups;
    for (auto& [value, vec] : a.eigenpairs()) {
        const double shift = center + cfg.unit_shift() * value;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return std::abs(g.shift - shift) <= kShiftMergeTolerance;
        });
        if (it == groups.end()) {
            groups.push_back({shift, {std::move(vec)}});
        } else {
            it->vectors.push_back(std::move(vec));
        }
    }

    JointState joint{pre.labels(), cfg.delta, {}};
    for (auto& group : groups) {
        if (group.vectors.size() == 1) {
            const cplx amp = group.vectors.front().dot(pre.amplitudes());
            if (amp == cplx(0.0, 0.0)) continue;
            joint.branches.push_back({group.shift, amp, std::move(group.vectors.front())});
            continue;
        }
        Eigen::VectorXcd projected = Eigen::VectorXcd::Zero(pre.amplitudes().size());
        for (const auto& v : group.vectors) projected += v * v.dot(pre.amplitudes());
        const double norm = projected.norm();
        if (norm == 0.0) continue;
        joint.branches.push_back({group.shift, cplx(norm, 0.0), projected / norm});
    }
    std::sort(joint.branches.begin(), joint.branches.end(),
              [](const Branch& x, const Branch& y) { return x.shift < y.shift; });
    return joint;
}

PostSelectionResult post_select(const JointState& joint, const SystemState& post) {
    std::vector<GaussianTerm> terms;
    for (const auto& [shift, weight] : selection_weights(joint, post)) {
        terms.push_back({shift, weight});
    }
    constexpr double kImpossible = kOrthogonalityFloor * kOrthogonalityFloor;
    try {
        const PointerState unnormalized = PointerState::combination(joint.width, std::move(terms));
        const double probability = unnormalized.norm_squared();
        if (probability <= kImpossible) {
            throw Error(ErrorKind::PostSelectionImpossible,
                        "post-selection probability " + std::to_string(probability));
        }
        return {unnormalized.normalized(), std::min(probability, 1.0)};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ZeroVector) {
            throw Error(ErrorKind::PostSelectionImpossible, "post-selected state is orthogonal to every branch");
        }
        throw;
    }
}

PointerMixture no_postselect_mixture(const JointState& joint) {
    std::vector<PointerMixture::Component> components;
    for (const auto& b : joint.branches) {
        components.push_back({std::norm(b.amplitude), PointerState::gaussian(b.shift, joint.width)});
    }
    // Absorb the last ulp of Born-weight roundoff so the weights sum to one.
    double total = 0.0;
    for (const auto& c : components) total += c.weight;
    for (auto& c : components) c.weight /= total;
    return PointerMixture(std::move(components));
}

double weakness_metric(const SystemState& pre, const SystemState& post, const Observable& a,
                       const CouplingConfig& cfg) {
    const cplx selection = checked_selection_amplitude(pre, post, kOrthogonalityFloor);
    const JointState joint = couple(pre, a, cfg, PointerState::gaussian(0.0, cfg.delta));
    const auto weights = selection_weights(joint, post);
    const double scale = 8.0 * cfg.delta * cfg.delta;

    // sum_k w_k (K_k - 1), with K_k = <G_0|G_shift_k>
    cplx amplitude_change{0.0, 0.0};
    for (const auto& [shift, w] : weights) amplitude_change += w * std::expm1(-shift * shift / scale);

    // p(eps) - |W|^2 = sum_{j != k} conj(w_j) w_k (K_jk - 1)
    double probability_change = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        for (std::size_t k = j + 1; k < weights.size(); ++k) {
            const double d = weights[j].shift - weights[k].shift;
            probability_change +=
                2.0 * (std::conj(weights[j].weight) * weights[k].weight).real() * std::expm1(-d * d / scale);
        }
    }

    const double amplitude_metric = std::abs(amplitude_change) / std::abs(selection);
    const double probability_metric = std::abs(probability_change) / std::norm(selection);
    return std::max(amplitude_metric, probability_metric);
}

EffectiveShift effective_shift_check(const SystemState& pre, const SystemState& post,
                                     const Observable& a, const CouplingConfig& cfg) {
    const cplx aw = weak_value(pre, post, a);
    if (!std::isfinite(aw.real())) {
        throw Error(ErrorKind::InvalidData, "weak value has no finite real part");
    }
    const PointerState initial = PointerState::gaussian(0.0, cfg.delta);
    auto [actual, probability] = post_select(couple(pre, a, cfg, initial), post);
    (void)probability;
    PointerState ideal = PointerState::gaussian(cfg.unit_shift() * aw.real(), cfg.delta);
    const double distance = bures_pure(actual, ideal);
    const double displacement = bures_pure(initial, actual);
    return {std::move(actual), std::move(ideal), distance, displacement, aw};
}

}  // namespace wvsim
