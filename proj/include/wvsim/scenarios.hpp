// scenarios.hpp
// Named measurement set-ups and the epsilon sweeps built on them:
//
//   * eigenstate      |1> of A = sum_j j|j><j|                (pointer -> Phi_e)
//   * two-state       pre (|-1>+|0>)/sqrt2, post (<-1|-2<0|)/sqrt5, A_w = 1
//   * expectation     (|0>+|2>)/sqrt2 without post-selection, <A> = 1
//   * AAV spin        cos(a/2)|+x> + sin(a/2)|-x>, post |+x>, (sigma_z)_w = tan(a/2)
//
// run_comparison puts the three A = 1 cases side by side for each epsilon and
// fit_power_law extracts the small-epsilon scaling of each distance.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wvsim/measurement.hpp"
#include "wvsim/pointer.hpp"
#include "wvsim/qstate.hpp"

namespace wvsim {

struct ScenarioSpec {
    std::string name;
    SystemState pre;
    std::optional<SystemState> post;  // empty: pre-selected only
    Observable observable;
    CouplingConfig cfg;
    std::vector<double> epsilon_grid;
};

/// Throws InvalidConfig unless the grid is non-empty, strictly positive and
/// strictly increasing.
void validate_epsilon_grid(std::span<const double> grid);

/// n points from lo to hi inclusive, logarithmically or linearly spaced.
std::vector<double> log_grid(double lo, double hi, std::size_t n);
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// 8 log-spaced points on [1e-3, 1e-2].
std::vector<double> default_epsilon_grid();

ScenarioSpec aav_spin_scenario(double alpha, const CouplingConfig& cfg);
ScenarioSpec eigenstate_scenario(const CouplingConfig& cfg);
ScenarioSpec two_state_weak_scenario(const CouplingConfig& cfg);
ScenarioSpec expectation_scenario(const CouplingConfig& cfg);

/// The three A = 1 systems compared against each other.
struct ComparisonSet {
    ScenarioSpec eigen;
    ScenarioSpec weak;
    ScenarioSpec expectation;
};

ComparisonSet standard_comparison(const CouplingConfig& cfg);

struct ComparisonRow {
    double epsilon;
    double d_eigen;             // bures_pure(Phi_0, Phi_e)
    double d_weak_vs_eigen;     // bures_pure(Phi_e, Phi_w)
    double d_expect_vs_eigen;   // bures_mixed(Phi_e, rho_ex)
    double postselect_probability;
    double weakness;
};

/// One row per epsilon, in grid order.
std::vector<ComparisonRow> run_comparison(const ComparisonSet& set, std::span<const double> epsilon_grid);

struct PowerLawFit {
    double exponent;
    double coefficient;
    double residual;  // max |log d - log fit| over the points
};

/// Least-squares line through (log eps, log d). Needs at least 4 points.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

/// Fits of d_eigen, d_weak_vs_eigen and d_expect_vs_eigen against epsilon.
struct ComparisonFits {
    PowerLawFit eigen;
    PowerLawFit weak_vs_eigen;
    PowerLawFit expect_vs_eigen;
};

ComparisonFits fit_comparison(std::span<const ComparisonRow> rows);

struct AmplificationRow {
    double tan_half_alpha;
    double mean_shift_over_g_eps;
    double postselect_probability;
    double weakness;
    bool weak;  // weakness <= kWeaknessThreshold
};

/// AAV spin scenario for each alpha at the coupling in cfg. A non-weak row
/// is flagged, not rejected.
std::vector<AmplificationRow> amplification_sweep(std::span<const double> alphas, const CouplingConfig& cfg);

}  // namespace wvsim
