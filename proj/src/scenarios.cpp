#include "wvsim/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wvsim/error.hpp"

namespace wvsim {

namespace {

constexpr std::size_t kMinFitPoints = 4;

SystemState selected_post(const ScenarioSpec& spec) {
    if (!spec.post) {
        throw Error(ErrorKind::InvalidConfig, "scenario '" + spec.name + "' has no post-selection");
    }
    return *spec.post;
}

}  // namespace

void validate_epsilon_grid(std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorKind::InvalidConfig, "epsilon grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw Error(ErrorKind::InvalidConfig, "epsilon values must be positive");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::InvalidConfig, "epsilon grid must be strictly increasing");
        }
    }
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || n == 0 || (n > 1 && hi == lo)) {
        throw Error(ErrorKind::InvalidConfig, "log grid needs 0 < lo < hi and n >= 1");
    }
    if (n == 1) return {lo};
    std::vector<double> grid(n);
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = std::exp(log_lo + step * static_cast<double>(i));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (!(hi >= lo) || n == 0 || (n > 1 && hi == lo)) {
        throw Error(ErrorKind::InvalidConfig, "linear grid needs lo < hi and n >= 1");
    }
    if (n == 1) return {lo};
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

std::vector<double> default_epsilon_grid() { return log_grid(1e-3, 1e-2, 8); }

ScenarioSpec aav_spin_scenario(double alpha, const CouplingConfig& cfg) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
        throw Error(ErrorKind::InvalidAngle, "alpha must lie in (0, pi), got " + std::to_string(alpha));
    }
    // z basis: label +1 = up, -1 = down. |+x> = (|+1> + |-1>)/sqrt2,
    // |-x> = (|+1> - |-1>)/sqrt2.
    const double c = std::cos(alpha / 2.0);
    const double s = std::sin(alpha / 2.0);
    auto pre = SystemState::from_pairs({{1, c + s}, {-1, c - s}});
    auto post = SystemState::from_pairs({{1, 1.0}, {-1, 1.0}});
    return {"aav-spin", std::move(pre), std::move(post), Observable::sigma_z(), cfg, default_epsilon_grid()};
}

ScenarioSpec eigenstate_scenario(const CouplingConfig& cfg) {
    const std::vector<Label> labels{-1, 0, 1};
    return {"eigenstate", SystemState::basis(labels, 1), std::nullopt,
            Observable::integer_spin(labels), cfg, default_epsilon_grid()};
}

ScenarioSpec two_state_weak_scenario(const CouplingConfig& cfg) {
    const std::vector<Label> labels{-1, 0, 1};
    auto pre = SystemState::from_pairs({{-1, 1.0}, {0, 1.0}, {1, 0.0}});
    auto post = SystemState::from_pairs({{-1, 1.0}, {0, -2.0}, {1, 0.0}});
    return {"two-state-weak", std::move(pre), std::move(post), Observable::integer_spin(labels), cfg, default_epsilon_grid()};
}

ScenarioSpec expectation_scenario(const CouplingConfig& cfg) {
    const std::vector<Label> labels{0, 1, 2};
    auto pre = SystemState::from_pairs({{0, 1.0}, {1, 0.0}, {2, 1.0}});
    return {"expectation", std::move(pre), std::nullopt, Observable::integer_spin(labels), cfg, default_epsilon_grid()};
}

ComparisonSet standard_comparison(const CouplingConfig& cfg) {
    return {eigenstate_scenario(cfg), two_state_weak_scenario(cfg), expectation_scenario(cfg)};
}

std::vector<ComparisonRow> run_comparison(const ComparisonSet& set, std::span<const double> epsilon_grid) {
    validate_epsilon_grid(epsilon_grid);
    const CouplingConfig& base = set.eigen.cfg;
    for (const ScenarioSpec* s : {&set.weak, &set.expectation}) {
        if (s->cfg.g != base.g || s->cfg.delta != base.delta) {
            throw Error(ErrorKind::InvalidConfig, "scenarios in a comparison must share g and delta");
        }
    }
    const SystemState weak_post = selected_post(set.weak);
    const PointerState initial = PointerState::gaussian(0.0, base.delta);

    std::vector<ComparisonRow> rows;
    rows.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) {
        const CouplingConfig cfg = base.with_epsilon(eps);

        const PointerMixture eigen_mix =
            no_postselect_mixture(couple(set.eigen.pre, set.eigen.observable, cfg, initial));
        if (eigen_mix.components().size() != 1) {
            throw Error(ErrorKind::InvalidConfig, "reference scenario must be an eigenstate");
        }
        const PointerState& eigen_pointer = eigen_mix.components().front().state;

        const auto selected = post_select(couple(set.weak.pre, set.weak.observable, cfg, initial), weak_post);
        const PointerMixture expect_mix =
            no_postselect_mixture(couple(set.expectation.pre, set.expectation.observable, cfg, initial));

        rows.push_back({eps, bures_pure(initial, eigen_pointer), bures_pure(eigen_pointer, selected.pointer),
                        bures_mixed(eigen_pointer, expect_mix), selected.probability,
                        weakness_metric(set.weak.pre, weak_post, set.weak.observable, cfg)});
    }
    return rows;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
    if (points.size() < kMinFitPoints) {
        throw Error(ErrorKind::InvalidData, "power-law fit needs at least 4 points");
    }
    const auto n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
            throw Error(ErrorKind::InvalidData, "power-law fit needs positive finite data");
        }
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::InvalidData, "power-law fit needs distinct abscissae");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double residual = 0.0;
    for (const auto& [x, y] : points) {
        residual = std::max(residual, std::abs(std::log(y) - (intercept + slope * std::log(x))));
    }
    return {slope, std::exp(intercept), residual};
}

ComparisonFits fit_comparison(std::span<const ComparisonRow> rows) {
    auto column = [&](double ComparisonRow::*member) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rows) pts.emplace_back(r.epsilon, r.*member);
        return fit_power_law(pts);
    };
    return {column(&ComparisonRow::d_eigen), column(&ComparisonRow::d_weak_vs_eigen),
            column(&ComparisonRow::d_expect_vs_eigen)};
}

std::vector<AmplificationRow> amplification_sweep(std::span<const double> alphas, const CouplingConfig& cfg) {
    cfg.validate();
    if (!(cfg.epsilon > 0.0)) throw Error(ErrorKind::InvalidConfig, "amplification needs epsilon > 0");
    const PointerState initial = PointerState::gaussian(0.0, cfg.delta);
    std::vector<AmplificationRow> rows;
    rows.reserve(alphas.size());
    for (double alpha : alphas) {
        const ScenarioSpec spec = aav_spin_scenario(alpha, cfg);
        const SystemState post = selected_post(spec);
        const auto selected = post_select(couple(spec.pre, spec.observable, cfg, initial), post);
        const double weakness = weakness_metric(spec.pre, post, spec.observable, cfg);
        rows.push_back({std::tan(alpha / 2.0), mean_position(selected.pointer) / cfg.unit_shift(),
                        selected.probability, weakness, weakness <= kWeaknessThreshold});
    }
    return rows;
}

}  // namespace wvsim
