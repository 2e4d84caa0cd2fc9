#include "wvsim/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wvsim/error.hpp"

namespace wvsim {

namespace {

constexpr double kMixtureWeightTolerance = 1e-12;
constexpr double kSelfOverlapTolerance = 1e-10;

double gaussian_kernel(double d, double width) {
    return std::exp(-d * d / (8.0 * width * width));
}

// kernel - 1, accurate when the shifts nearly coincide
double gaussian_kernel_m1(double d, double width) {
    return std::expm1(-d * d / (8.0 * width * width));
}

void require_width(double width) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw Error(ErrorKind::InvalidWidth, "pointer width must be positive, got " + std::to_string(width));
    }
}

void require_same_width(double a, double b) {
    if (a != b) {
        throw Error(ErrorKind::WidthMismatch,
                    "pointer widths differ: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

// Sorts by shift, folds shifts within kShiftMergeTolerance together and drops
// exactly vanishing coefficients.
std::vector<GaussianTerm> merge_terms(std::vector<GaussianTerm> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const GaussianTerm& a, const GaussianTerm& b) { return a.shift < b.shift; });
    std::vector<GaussianTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && t.shift - merged.back().shift <= kShiftMergeTolerance) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const GaussianTerm& t) { return t.coeff == cplx(0.0, 0.0); });
    return merged;
}

// |psi|^2 written as |sum c|^2 + sum conj(c_i) c_j (K_ij - 1). When the terms
// nearly cancel this avoids subtracting numbers of order one.
double split_norm_squared(const std::vector<GaussianTerm>& terms, double width) {
    cplx total{0.0, 0.0};
    for (const auto& t : terms) total += t.coeff;
    double correction = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            const double k = gaussian_kernel_m1(terms[i].shift - terms[j].shift, width);
            correction += 2.0 * (std::conj(terms[i].coeff) * terms[j].coeff).real() * k;
        }
    }
    return std::max(0.0, std::norm(total) + correction);
}

// 1 - |<a|b>|^2 for normalized a, b, computed as the squared norm of the
// component of b orthogonal to a.
double sin_squared_angle(const PointerState& a, const PointerState& b, cplx ab) {
    std::vector<GaussianTerm> residual = b.terms();
    for (const auto& t : a.terms()) residual.push_back({t.shift, -ab * t.coeff});
    return std::clamp(split_norm_squared(merge_terms(std::move(residual)), a.width()), 0.0, 1.0);
}

void require_normalized(const PointerState& s, const char* what) {
    if (!s.is_normalized()) {
        throw Error(ErrorKind::NotNormalized, std::string(what) + " must be a normalized pointer state");
    }
}

}  // namespace

PointerState PointerState::gaussian(double center, double width) {
    require_width(width);
    if (!std::isfinite(center)) throw Error(ErrorKind::InvalidData, "gaussian center must be finite");
    return PointerState(width, {{center, cplx(1.0, 0.0)}}, true);
}

PointerState PointerState::superpose(std::span<const std::pair<cplx, PointerState>> terms) {
    if (terms.empty()) throw Error(ErrorKind::ZeroVector, "empty superposition");
    const double width = terms.front().second.width();
    std::vector<GaussianTerm> flat;
    for (const auto& [coeff, state] : terms) {
        require_same_width(width, state.width());
        for (const auto& t : state.terms()) flat.push_back({t.shift, coeff * t.coeff});
    }
    return combination(width, std::move(flat)).normalized();
}

PointerState PointerState::combination(double width, std::vector<GaussianTerm> terms) {
    require_width(width);
    auto merged = merge_terms(std::move(terms));
    if (merged.empty()) throw Error(ErrorKind::ZeroVector, "all pointer coefficients vanish");
    return PointerState(width, std::move(merged), false);
}

double PointerState::norm_squared() const { return split_norm_squared(terms_, width_); }

PointerState PointerState::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw Error(ErrorKind::ZeroVector, "pointer state has zero norm");
    const double scale = 1.0 / std::sqrt(n2);
    std::vector<GaussianTerm> scaled = terms_;
    for (auto& t : scaled) t.coeff *= scale;
    return PointerState(width_, std::move(scaled), true);
}

cplx PointerState::operator()(double q) const {
    const double prefactor = std::pow(2.0 * std::numbers::pi * width_ * width_, -0.25);
    cplx value{0.0, 0.0};
    for (const auto& t : terms_) {
        const double d = q - t.shift;
        value += t.coeff * std::exp(-d * d / (4.0 * width_ * width_));
    }
    return prefactor * value;
}

PointerMixture::PointerMixture(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorKind::InvalidData, "mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0) || c.weight > 1.0 + kMixtureWeightTolerance) {
            throw Error(ErrorKind::InvalidData, "mixture weight outside (0, 1]: " + std::to_string(c.weight));
        }
        require_normalized(c.state, "mixture component");
        require_same_width(components_.front().state.width(), c.state.width());
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kMixtureWeightTolerance) {
        throw Error(ErrorKind::InvalidData, "mixture weights sum to " + std::to_string(total));
    }
}

cplx overlap(const PointerState& a, const PointerState& b) {
    require_same_width(a.width(), b.width());
    cplx sum{0.0, 0.0};
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            sum += std::conj(ta.coeff) * tb.coeff * gaussian_kernel(ta.shift - tb.shift, a.width());
        }
    }
    return sum;
}

// arccos|<a|b>| evaluated as atan2(sin, cos) with the sine taken from the
// orthogonal residual; arccos alone loses half the digits near zero angle.
double bures_pure(const PointerState& a, const PointerState& b) {
    require_normalized(a, "first argument");
    require_normalized(b, "second argument");
    const cplx ab = overlap(a, b);
    const double cos_angle = std::min(std::abs(ab), 1.0);
    const double sin_angle = std::sqrt(sin_squared_angle(a, b, ab));
    return std::atan2(sin_angle, cos_angle);
}

double bures_mixed(const PointerState& pure, const PointerMixture& mix) {
    require_normalized(pure, "pure state");
    double fidelity = 0.0;    // <psi|rho|psi>
    double infidelity = 0.0;  // 1 - <psi|rho|psi>
    for (const auto& [weight, state] : mix.components()) {
        const cplx s = overlap(pure, state);
        fidelity += weight * std::min(std::norm(s), 1.0);
        infidelity += weight * sin_squared_angle(pure, state, s);
    }
    fidelity = std::clamp(fidelity, 0.0, 1.0);
    infidelity = std::clamp(infidelity, 0.0, 1.0);
    return std::atan2(std::sqrt(infidelity), std::sqrt(fidelity));
}

double mean_position(const PointerState& s) {
    const auto& terms = s.terms();
    double numerator = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        numerator += std::norm(terms[i].coeff) * terms[i].shift;
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            const double k = gaussian_kernel(terms[i].shift - terms[j].shift, s.width());
            const double mid = 0.5 * (terms[i].shift + terms[j].shift);
            numerator += 2.0 * (std::conj(terms[i].coeff) * terms[j].coeff).real() * mid * k;
        }
    }
    return numerator / s.norm_squared();
}

GridFunction to_grid(const PointerState& s, double q_min, double q_max, std::size_t n) {
    if (n < 16) throw Error(ErrorKind::InvalidData, "grid needs at least 16 points");
    const double margin = kGridMarginWidths * s.width();
    if (s.min_shift() - margin < q_min || s.max_shift() + margin > q_max) {
        throw Error(ErrorKind::RangeTooNarrow, "grid [" + std::to_string(q_min) + ", " +
                                                   std::to_string(q_max) +
                                                   "] does not cover shifts +- 8 widths");
    }
    GridFunction grid{q_min, q_max, std::vector<cplx>(n)};
    const double h = grid.step();
    for (std::size_t k = 0; k < n; ++k) {
        grid.values[k] = s(q_min + h * static_cast<double>(k));
    }
    return grid;
}

std::pair<double, double> grid_range(std::span<const PointerState> states) {
    if (states.empty()) throw Error(ErrorKind::InvalidData, "no states to cover");
    double lo = states.front().min_shift() - kGridMarginWidths * states.front().width();
    double hi = states.front().max_shift() + kGridMarginWidths * states.front().width();
    for (const auto& s : states) {
        lo = std::min(lo, s.min_shift() - kGridMarginWidths * s.width());
        hi = std::max(hi, s.max_shift() + kGridMarginWidths * s.width());
    }
    return {lo, hi};
}

cplx grid_inner(const GridFunction& a, const GridFunction& b) {
    if (a.n() != b.n() || a.q_min != b.q_min || a.q_max != b.q_max) {
        throw Error(ErrorKind::InvalidData, "grid functions live on different grids");
    }
    cplx sum{0.0, 0.0};
    for (std::size_t k = 0; k < a.n(); ++k) {
        const double w = (k == 0 || k + 1 == a.n()) ? 0.5 : 1.0;
        sum += w * std::conj(a.values[k]) * b.values[k];
    }
    return sum * a.step();
}

cplx grid_overlap(const PointerState& a, const PointerState& b, std::size_t n) {
    const PointerState both[] = {a, b};
    const auto [lo, hi] = grid_range(both);
    return grid_inner(to_grid(a, lo, hi, n), to_grid(b, lo, hi, n));
}

}  // namespace wvsim
