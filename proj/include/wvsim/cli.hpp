// cli.hpp
// Front end behind the `wvsim` executable. Kept in the library so the test
// suites can drive it in-process.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wvsim/qstate.hpp"

namespace wvsim::cli {

enum class ExitCode : int {
    Ok = 0,
    Usage = 2,
    Physics = 3,
};

enum class Format { Csv, Pretty };

struct RunConfig {
    std::string command;
    double g = 1.0;
    double delta = 1.0;
    std::optional<double> epsilon;
    std::optional<std::string> epsilon_grid;
    std::vector<double> alpha_tan;
    std::string pre;
    std::string post;
    std::string obs;
    std::string out = "-";
    Format format = Format::Csv;
};

/// "a", "a+bi", "a-bi" or "bi" (a bare "i" means unit imaginary).
cplx parse_amplitude(std::string_view text);

/// Comma-separated "label:amplitude" pairs.
std::vector<std::pair<Label, cplx>> parse_state_spec(std::string_view text);

/// "lo:hi:n:log" or "lo:hi:n:lin".
std::vector<double> parse_epsilon_grid(std::string_view text);

/// "diag", "proj:j" or "sigmaz" on the given sorted labels.
Observable parse_observable(std::string_view text, const std::vector<Label>& labels);

/// Shared format for every number in tabular output: 12 significant digits,
/// '.' decimal separator regardless of locale.
std::string format_number(double x);

/// Weak value as "<re> + <im>i" with 12 decimals.
std::string format_complex(cplx z);

/// Parses argv-style arguments (without the program name) and runs the
/// selected subcommand. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wvsim::cli
