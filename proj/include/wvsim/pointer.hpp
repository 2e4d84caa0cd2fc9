// pointer.hpp
// Pointer wavefunctions over the pointer coordinate Q, stored exactly as
// complex superpositions of equal-width Gaussians
//
//     psi(Q) = sum_k c_k G(Q; mu_k),   G(Q; mu) = (2 pi D^2)^(-1/4) exp(-(Q - mu)^2 / 4 D^2)
//
// Each G is unit-normalized, so <G(mu)|G(nu)> = exp(-(mu - nu)^2 / 8 D^2) and
// every inner product, moment and Bures angle has a closed form. The grid
// functions at the bottom evaluate the same wavefunctions pointwise and are
// only used to cross-check the closed forms by quadrature.

#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace wvsim {

using cplx = std::complex<double>;

/// Shifts closer than this are treated as the same Gaussian.
inline constexpr double kShiftMergeTolerance = 1e-12;

struct GaussianTerm {
    double shift;
    cplx coeff;
};

class PointerState {
public:
    /// A single normalized Gaussian centred at `center`.
    static PointerState gaussian(double center, double width);

    /// Normalized superposition sum_i coeff_i * state_i. All states must share
    /// one width.
    static PointerState superpose(std::span<const std::pair<cplx, PointerState>> terms);
    static PointerState superpose(std::initializer_list<std::pair<cplx, PointerState>> terms) {
        return superpose(std::span<const std::pair<cplx, PointerState>>(terms.begin(), terms.size()));
    }

    /// Merged but unnormalized combination of Gaussians of the given width.
    /// Throws ZeroVector if every merged coefficient vanishes.
    static PointerState combination(double width, std::vector<GaussianTerm> terms);

    double width() const noexcept { return width_; }
    const std::vector<GaussianTerm>& terms() const noexcept { return terms_; }
    bool is_normalized() const noexcept { return normalized_; }

    /// <psi|psi> from the Gram matrix of the terms.
    double norm_squared() const;

    /// Copy rescaled to unit norm.
    PointerState normalized() const;

    /// psi(q).
    cplx operator()(double q) const;

    double min_shift() const { return terms_.front().shift; }
    double max_shift() const { return terms_.back().shift; }

private:
    PointerState(double width, std::vector<GaussianTerm> terms, bool normalized)
        : width_(width), terms_(std::move(terms)), normalized_(normalized) {}

    double width_;
    std::vector<GaussianTerm> terms_;  // sorted by shift, shifts distinct
    bool normalized_;
};

/// Convex combination sum_i p_i |phi_i><phi_i| of normalized pointer states.
class PointerMixture {
public:
    struct Component {
        double weight;
        PointerState state;
    };

    /// Weights must lie in (0, 1] and sum to 1 within 1e-12; states must be
    /// normalized and share one width.
    explicit PointerMixture(std::vector<Component> components);

    const std::vector<Component>& components() const noexcept { return components_; }
    double width() const { return components_.front().state.width(); }

private:
    std::vector<Component> components_;
};

/// <a|b>. Both states must have the same width.
cplx overlap(const PointerState& a, const PointerState& b);

/// Bures angle arccos|<a|b>| of two normalized pure states, in [0, pi/2].
double bures_pure(const PointerState& a, const PointerState& b);

/// Bures angle arccos sqrt(<psi|rho|psi>) between a pure state and a mixture.
double bures_mixed(const PointerState& pure, const PointerMixture& mix);

/// <psi|Q|psi> / <psi|psi>.
double mean_position(const PointerState& s);

// ---------------------------------------------------------------------------
// Quadrature oracle

struct GridFunction {
    double q_min;
    double q_max;
    std::vector<cplx> values;

    std::size_t n() const noexcept { return values.size(); }
    double step() const { return (q_max - q_min) / static_cast<double>(values.size() - 1); }
};

inline constexpr std::size_t kDefaultGridPoints = 4096;
inline constexpr double kGridMarginWidths = 8.0;

/// Samples `s` at n equally spaced points on [q_min, q_max]. The range must
/// contain every shift padded by 8 widths.
GridFunction to_grid(const PointerState& s, double q_min, double q_max,
                     std::size_t n = kDefaultGridPoints);

/// [min shift - 8 width, max shift + 8 width] over all given states.
std::pair<double, double> grid_range(std::span<const PointerState> states);

/// Trapezoidal approximation of the integral of conj(a) b.
cplx grid_inner(const GridFunction& a, const GridFunction& b);

/// <a|b> by trapezoidal quadrature on the default range covering both states.
cplx grid_overlap(const PointerState& a, const PointerState& b,
                  std::size_t n = kDefaultGridPoints);

}  // namespace wvsim
