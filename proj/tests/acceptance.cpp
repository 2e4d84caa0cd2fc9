// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracle.hpp"
#include "wvsim/cli.hpp"
#include "wvsim/measurement.hpp"
#include "wvsim/scenarios.hpp"

using namespace wvsim;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

const CouplingConfig kUnit = CouplingConfig::make(1.0, 0.01, 1.0);

std::vector<ComparisonRow> default_sweep() {
    return run_comparison(standard_comparison(kUnit), default_epsilon_grid());
}

Outcome weak_value_identities() {
    const auto two_state = two_state_weak_scenario(kUnit);
    const cplx aw = weak_value(two_state.pre, *two_state.post, two_state.observable);
    const auto spin = aav_spin_scenario(2.0 * std::atan(100.0), kUnit);
    const cplx sz = weak_value(spin.pre, *spin.post, spin.observable);
    const double e1 = std::abs(aw - 1.0), e2 = std::abs(sz - 100.0);
    return {e1 <= 1e-12 && e2 <= 1e-9, fmt::format("|A_w - 1| = {:.3g} (tol 1e-12), |(sz)_w - 100| = {:.3g} (tol 1e-9)", e1, e2)};
}

Outcome fit_check(double ComparisonRow::*column, double exponent, double coefficient, double coeff_tol) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : default_sweep()) pts.emplace_back(r.epsilon, r.*column);
    const auto fit = fit_power_law(pts);
    const double rel = std::abs(fit.coefficient / coefficient - 1.0);
    const bool ok = std::abs(fit.exponent - exponent) <= 0.05 && rel <= coeff_tol;
    return {ok, fmt::format("exponent {:.6f} (want {} +- 0.05), coefficient {:.6f} (want {:.6f} +- {}%)", fit.exponent,
                            exponent, fit.coefficient, coefficient, coeff_tol * 100.0)};
}

Outcome expectation_distance() {
    auto out = fit_check(&ComparisonRow::d_expect_vs_eigen, 1.0, 0.5, 0.02);
    double worst = 0.0;
    for (const auto& r : default_sweep()) worst = std::max(worst, r.d_weak_vs_eigen / r.d_expect_vs_eigen);
    out.pass = out.pass && worst < 0.05;
    out.detail += fmt::format("; max d_weak/d_expect = {:.3g} (want < 0.05)", worst);
    return out;
}

Outcome postselection_probability() {
    const auto s = two_state_weak_scenario(kUnit);
    const auto cfg = kUnit.with_epsilon(1e-4);
    const auto sel = post_select(couple(s.pre, s.observable, cfg, PointerState::gaussian(0.0, 1.0)), *s.post);
    const double err = std::abs(sel.probability - 0.1);
    return {err <= 1e-4, fmt::format("p = {:.12f}, |p - 0.1| = {:.3g} (tol 1e-4)", sel.probability, err)};
}

Outcome oracle_equivalence() {
    const auto set = standard_comparison(kUnit);
    const auto phi0 = PointerState::gaussian(0.0, 1.0);
    double worst = 0.0;
    for (double eps : default_epsilon_grid()) {
        const auto cfg = kUnit.with_epsilon(eps);
        const auto phi_e = no_postselect_mixture(couple(set.eigen.pre, set.eigen.observable, cfg, phi0)).components()[0].state;
        const auto phi_w = post_select(couple(set.weak.pre, set.weak.observable, cfg, phi0), *set.weak.post).pointer;
        const auto rho = no_postselect_mixture(couple(set.expectation.pre, set.expectation.observable, cfg, phi0));
        std::vector<PointerState> states{phi0, phi_e, phi_w, rho.components()[0].state, rho.components()[1].state};
        for (const auto& a : states) {
            for (const auto& b : states) {
                const cplx closed = overlap(a, b);
                const cplx numeric = grid_overlap(a, b, kDefaultGridPoints);
                worst = std::max(worst, std::abs(closed - numeric) / std::abs(closed));
            }
        }
    }
    return {worst <= 1e-6, fmt::format("max relative deviation {:.3g} over 25 pairs x 8 eps (tol 1e-6)", worst)};
}

Outcome cnumber_replacement() {
    const auto s = two_state_weak_scenario(kUnit);
    const auto check = effective_shift_check(s.pre, *s.post, s.observable, kUnit.with_epsilon(1e-3));
    const double ratio = check.distance / check.displacement;
    return {ratio < 0.02, fmt::format("D(actual, ideal) / D(Phi0, actual) = {:.3g} (want < 0.02)", ratio)};
}

Outcome amplification() {
    const std::vector<double> tans{1.0, 10.0, 100.0};
    std::vector<double> alphas;
    for (double t : tans) alphas.push_back(2.0 * std::atan(t));
    const auto rows = amplification_sweep(alphas, kUnit.with_epsilon(1e-4));
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double shift_err = std::abs(rows[i].mean_shift_over_g_eps / tans[i] - 1.0);
        const double half = std::atan(tans[i]);
        const double p_err = std::abs(rows[i].postselect_probability - std::cos(half) * std::cos(half));
        ok = ok && shift_err <= 0.02 && p_err <= 1e-3;
        detail += fmt::format("{}tan={}: shift/g eps={:.6f}, |dp|={:.2g}", i ? "; " : "", tans[i],
                              rows[i].mean_shift_over_g_eps, p_err);
    }
    return {ok, detail};
}

Outcome property_suite() {
    std::mt19937_64 rng(1234);
    std::normal_distribution<double> n(0.0, 1.0);
    int failures = 0;
    auto expect = [&](bool cond) { failures += cond ? 0 : 1; };

    auto make_state = [&](const std::vector<Label>& labels, const std::vector<cplx>& v) {
        Eigen::VectorXcd a(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) a(static_cast<Eigen::Index>(i)) = v[i];
        return SystemState::from_vector(labels, a);
    };

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 2 + trial % 5;
        std::vector<Label> labels;
        for (std::size_t k = 0; k < dim; ++k) labels.push_back(static_cast<Label>(k) - 1);
        const auto a = Observable::integer_spin(labels);
        auto vpre = oracle::random_state(rng, dim);
        const auto pre = make_state(labels, vpre);
        const auto post = make_state(labels, oracle::random_state(rng, dim));

        // degeneration to the expectation value
        expect(std::abs(weak_value(pre, pre, a) - expectation(a, pre)) <= 1e-12);

        // phase/scale invariance
        const cplx aw = weak_value(pre, post, a);
        const cplx factor = std::polar(std::exp(n(rng)), n(rng));
        for (auto& x : vpre) x *= factor;
        expect(std::abs(weak_value(make_state(labels, vpre), post, a) - aw) <= 1e-12 * std::max(1.0, std::abs(aw)));

        // completeness over the label basis
        const auto joint = couple(pre, a, kUnit.with_epsilon(std::abs(n(rng))), PointerState::gaussian(0.0, 1.0));
        double total = 0.0;
        for (Label l : labels) total += post_select(joint, SystemState::basis(labels, l)).probability;
        expect(std::abs(total - 1.0) <= 1e-10);
    }

    // Bures bounds on every sweep row, plus a far-apart pair
    for (const auto& r : run_comparison(standard_comparison(kUnit), log_grid(1e-4, 5.0, 30))) {
        for (double d : {r.d_eigen, r.d_weak_vs_eigen, r.d_expect_vs_eigen}) expect(d >= 0.0 && d <= std::numbers::pi / 2);
    }
    const double far = bures_pure(PointerState::gaussian(0.0, 1.0), PointerState::gaussian(80.0, 1.0));
    expect(far >= 0.0 && far <= std::numbers::pi / 2);

    // byte-identical CLI output
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"compare"}, std::vector<std::string>{"amplify", "--alpha-tan", "1,10,100"}}) {
        std::ostringstream a1, a2, e1, e2;
        expect(cli::run(args, a1, e1) == 0 && cli::run(args, a2, e2) == 0 && a1.str() == a2.str());
    }
    return {failures == 0, fmt::format("{} property violations", failures)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 weak-value identities", weak_value_identities},
        {"2 eigenvalue distance law",
         [] { return fit_check(&ComparisonRow::d_eigen, 1.0, 0.5, 0.02); }},
        {"3 weak-vs-eigen separation",
         [] { return fit_check(&ComparisonRow::d_weak_vs_eigen, 2.0, 1.0 / (2.0 * std::sqrt(2.0)), 0.05); }},
        {"4 expectation-vs-eigen distance", expectation_distance},
        {"5 post-selection probability", postselection_probability},
        {"6 oracle equivalence", oracle_equivalence},
        {"7 c-number replacement", cnumber_replacement},
        {"8 amplification", amplification},
        {"9 property suite", property_suite},
    };

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << '\n';
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failed)) << '\n';
    return failed == 0 ? 0 : 1;
}
