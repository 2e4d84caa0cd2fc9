#include "wvsim/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvsim/error.hpp"
#include "wvsim/measurement.hpp"
#include "wvsim/scenarios.hpp"

namespace wvsim::cli {

namespace {

using Flags = std::map<std::string, std::string>;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

[[noreturn]] void parse_fail(std::string_view what, std::string_view text) {
    throw Error(ErrorKind::ParseError, fmt::format("cannot parse {} '{}'", what, text));
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        parse_fail(what, text);
    }
    return value;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) parse_fail(what, text);
    return value;
}

// Coefficient of i in "+", "-", "", "+2.5" ...
double parse_imaginary(std::string_view text) {
    if (text.empty() || text == "+") return 1.0;
    if (text == "-") return -1.0;
    return parse_double(text, "imaginary part");
}

double positive(double v, std::string_view name) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidConfig, fmt::format("--{} must be positive", name));
    return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
    std::vector<double> values;
    for (auto part : split(text, ',')) {
        if (trim(part).empty()) continue;
        values.push_back(parse_double(part, what));
    }
    return values;
}

// JSON config values become the same strings a user would type on the
// command line.
std::string json_to_flag(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return fmt::format("{:.17g}", v.get<double>());
    if (v.is_array()) {
        std::string joined;
        for (const auto& item : v) {
            if (!joined.empty()) joined += ',';
            joined += json_to_flag(item);
        }
        return joined;
    }
    throw Error(ErrorKind::InvalidConfig, "config values must be strings, numbers or arrays");
}

void merge_config_file(const std::string& path, Flags& flags, const std::set<std::string>& allowed) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config file " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config file: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::InvalidConfig, "config file must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.contains(key)) {
            throw Error(ErrorKind::InvalidConfig, "config key '" + key + "' is not valid for this command");
        }
        flags.try_emplace(key, json_to_flag(value));  // command-line flags win
    }
}

RunConfig to_run_config(const std::string& command, const Flags& flags) {
    RunConfig cfg;
    cfg.command = command;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = flags.find(key);
        return it == flags.end() ? nullptr : &it->second;
    };
    if (auto v = get("g")) cfg.g = positive(parse_double(*v, "--g"), "g");
    if (auto v = get("delta")) cfg.delta = positive(parse_double(*v, "--delta"), "delta");
    if (auto v = get("eps")) cfg.epsilon = positive(parse_double(*v, "--eps"), "eps");
    if (auto v = get("eps-grid")) cfg.epsilon_grid = *v;
    if (cfg.epsilon && cfg.epsilon_grid) {
        throw Error(ErrorKind::InvalidConfig, "--eps and --eps-grid are mutually exclusive");
    }
    if (auto v = get("alpha-tan")) cfg.alpha_tan = parse_list(*v, "--alpha-tan");
    if (auto v = get("pre")) cfg.pre = *v;
    if (auto v = get("post")) cfg.post = *v;
    if (auto v = get("obs")) cfg.obs = *v;
    if (auto v = get("out")) cfg.out = *v;
    if (auto v = get("format")) {
        if (*v == "csv") {
            cfg.format = Format::Csv;
        } else if (*v == "pretty") {
            cfg.format = Format::Pretty;
        } else {
            throw Error(ErrorKind::InvalidConfig, "--format must be csv or pretty");
        }
    }
    return cfg;
}

// Renders rows either as CSV or as right-aligned columns.
class Table {
public:
    Table(Format format, std::vector<std::string> header) : format_(format), header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& os) const {
        if (format_ == Format::Csv) {
            write_csv_line(os, header_);
            for (const auto& r : rows_) write_csv_line(os, r);
            return;
        }
        std::vector<std::size_t> widths(header_.size());
        for (std::size_t c = 0; c < header_.size(); ++c) {
            widths[c] = header_[c].size();
            for (const auto& r : rows_) widths[c] = std::max(widths[c], r[c].size());
        }
        write_padded(os, header_, widths);
        for (const auto& r : rows_) write_padded(os, r, widths);
    }

private:
    static void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
        os << '\n';
    }

    static void write_padded(std::ostream& os, const std::vector<std::string>& cells,
                             const std::vector<std::size_t>& widths) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << (c ? "  " : "") << fmt::format("{:>{}}", cells[c], widths[c]);
        }
        os << '\n';
    }

    Format format_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::vector<Label> union_labels(const std::vector<std::pair<Label, cplx>>& a,
                                const std::vector<std::pair<Label, cplx>>& b) {
    std::set<Label> labels;
    for (const auto& [l, _] : a) labels.insert(l);
    for (const auto& [l, _] : b) labels.insert(l);
    return {labels.begin(), labels.end()};
}

SystemState embed(const std::vector<std::pair<Label, cplx>>& pairs, const std::vector<Label>& labels) {
    std::vector<std::pair<Label, cplx>> full = pairs;
    for (Label l : labels) {
        if (std::none_of(pairs.begin(), pairs.end(), [&](const auto& p) { return p.first == l; })) {
            full.emplace_back(l, cplx(0.0, 0.0));
        }
    }
    return SystemState::from_pairs(full);
}

std::string cmd_weak_value(const RunConfig& cfg) {
    if (cfg.pre.empty() || cfg.post.empty()) {
        throw Error(ErrorKind::InvalidConfig, "weak-value needs --pre and --post");
    }
    const auto pre_pairs = parse_state_spec(cfg.pre);
    const auto post_pairs = parse_state_spec(cfg.post);
    std::vector<Label> labels = union_labels(pre_pairs, post_pairs);

    const std::string obs_spec = cfg.obs.empty() ? "diag" : cfg.obs;
    // the observable may need basis states that neither selection populates
    if (obs_spec == "sigmaz") {
        labels = union_labels({{-1, 0.0}, {1, 0.0}}, pre_pairs);
    } else if (obs_spec.starts_with("proj:")) {
        const Label j = parse_int<Label>(std::string_view(obs_spec).substr(5), "projector label");
        if (!std::binary_search(labels.begin(), labels.end(), j)) {
            labels.insert(std::upper_bound(labels.begin(), labels.end(), j), j);
        }
    }
    const Observable a = parse_observable(obs_spec, labels);
    const cplx aw = weak_value(embed(pre_pairs, labels), embed(post_pairs, labels), a);
    return format_complex(aw) + "\n";
}

std::string cmd_compare(const RunConfig& cfg) {
    std::vector<double> grid;
    std::string grid_echo;
    if (cfg.epsilon) {
        grid = {*cfg.epsilon};
        grid_echo = format_number(*cfg.epsilon);
    } else {
        grid_echo = cfg.epsilon_grid.value_or("1e-3:1e-2:8:log");
        grid = parse_epsilon_grid(grid_echo);
    }
    validate_epsilon_grid(grid);
    const auto coupling = CouplingConfig::make(cfg.g, grid.front(), cfg.delta);
    const auto rows = run_comparison(standard_comparison(coupling), grid);

    std::ostringstream os;
    os << "# wvsim compare: eigenvalue vs weak value vs expectation value (A = 1)\n";
    os << "# g=" << format_number(cfg.g) << " delta=" << format_number(cfg.delta) << " epsilon_grid=" << grid_echo
       << '\n';
    os << "# weakness threshold=" << format_number(kWeaknessThreshold)
       << " (report label only; not derived from the model)\n";

    Table table(cfg.format,
                {"epsilon", "d_eigen", "d_weak_vs_eigen", "d_expect_vs_eigen", "p_postselect", "weakness"});
    for (const auto& r : rows) {
        table.add({format_number(r.epsilon), format_number(r.d_eigen), format_number(r.d_weak_vs_eigen),
                   format_number(r.d_expect_vs_eigen), format_number(r.postselect_probability),
                   format_number(r.weakness)});
    }
    table.write(os);

    if (rows.size() >= 4) {
        const auto fits = fit_comparison(rows);
        auto fit_line = [&](std::string_view name, const PowerLawFit& f) {
            os << "# fit " << name << " exponent=" << format_number(f.exponent)
               << " coefficient=" << format_number(f.coefficient) << " residual=" << format_number(f.residual)
               << '\n';
        };
        fit_line("d_eigen", fits.eigen);
        fit_line("d_weak_vs_eigen", fits.weak_vs_eigen);
        fit_line("d_expect_vs_eigen", fits.expect_vs_eigen);
    }
    return os.str();
}

std::string cmd_amplify(const RunConfig& cfg) {
    if (cfg.alpha_tan.empty()) throw Error(ErrorKind::InvalidConfig, "amplify needs a non-empty --alpha-tan list");
    if (cfg.epsilon_grid) throw Error(ErrorKind::InvalidConfig, "amplify takes a single --eps");
    std::vector<double> alphas;
    for (double t : cfg.alpha_tan) {
        if (!(t > 0.0)) throw Error(ErrorKind::InvalidAngle, "tan(alpha/2) must be positive");
        alphas.push_back(2.0 * std::atan(t));
    }
    const auto coupling = CouplingConfig::make(cfg.g, cfg.epsilon.value_or(1e-4), cfg.delta);
    const auto rows = amplification_sweep(alphas, coupling);

    std::ostringstream os;
    os << "# wvsim amplify: AAV spin, post-selected on |+x>\n";
    os << "# g=" << format_number(coupling.g) << " delta=" << format_number(coupling.delta)
       << " epsilon=" << format_number(coupling.epsilon) << '\n';
    os << "# weakness threshold=" << format_number(kWeaknessThreshold)
       << " (report label only; not derived from the model)\n";
    Table table(cfg.format, {"tan_half_alpha", "mean_shift_over_g_eps", "p_postselect", "weak_flag"});
    for (const auto& r : rows) {
        table.add({format_number(r.tan_half_alpha), format_number(r.mean_shift_over_g_eps),
                   format_number(r.postselect_probability), r.weak ? "true" : "false"});
    }
    table.write(os);
    return os.str();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out == "-") {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::InvalidConfig, "cannot open output file " + cfg.out);
    file << text;
    if (!file) throw Error(ErrorKind::InvalidConfig, "failed writing " + cfg.out);
}

}  // namespace

cplx parse_amplitude(std::string_view text) {
    text = trim(text);
    if (text.empty()) parse_fail("amplitude", text);
    if (text.back() != 'i') return {parse_double(text, "amplitude"), 0.0};

    const std::string_view body = text.substr(0, text.size() - 1);
    // the last sign that is not a leading sign or an exponent sign splits re/im
    std::size_t split_at = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    if (split_at == std::string_view::npos) return {0.0, parse_imaginary(body)};
    return {parse_double(body.substr(0, split_at), "real part"), parse_imaginary(body.substr(split_at))};
}

std::vector<std::pair<Label, cplx>> parse_state_spec(std::string_view text) {
    std::vector<std::pair<Label, cplx>> pairs;
    for (auto item : split(text, ',')) {
        item = trim(item);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) parse_fail("state entry (want label:amplitude)", item);
        pairs.emplace_back(parse_int<Label>(item.substr(0, colon), "label"),
                           parse_amplitude(item.substr(colon + 1)));
    }
    return pairs;
}

std::vector<double> parse_epsilon_grid(std::string_view text) {
    const auto parts = split(trim(text), ':');
    if (parts.size() != 4) parse_fail("epsilon grid (want lo:hi:n:log|lin)", text);
    const double lo = parse_double(parts[0], "grid lower bound");
    const double hi = parse_double(parts[1], "grid upper bound");
    const auto n = parse_int<std::size_t>(parts[2], "grid point count");
    const auto kind = trim(parts[3]);
    if (kind == "log") return log_grid(lo, hi, n);
    if (kind == "lin") return linear_grid(lo, hi, n);
    parse_fail("grid spacing (want log or lin)", kind);
}

Observable parse_observable(std::string_view text, const std::vector<Label>& labels) {
    text = trim(text);
    if (text == "diag") return Observable::integer_spin(labels);
    if (text == "sigmaz") {
        if (labels != std::vector<Label>{-1, 1}) {
            throw Error(ErrorKind::BasisMismatch, "sigmaz acts on labels -1 and 1 only");
        }
        return Observable::sigma_z();
    }
    if (text.starts_with("proj:")) {
        return Observable::projector(labels, parse_int<Label>(text.substr(5), "projector label"));
    }
    parse_fail("observable (want diag, proj:j or sigmaz)", text);
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    return fmt::format("{:.12g}", x);
}

std::string format_complex(cplx z) {
    const double re = z.real() == 0.0 ? 0.0 : z.real();
    const double im = z.imag();
    return fmt::format("{:.12f} {} {:.12f}i", re, im < 0.0 ? '-' : '+', std::abs(im));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weak measurements on pre- and post-selected systems", "wvsim"};
    app.require_subcommand(1);

    std::map<std::string, std::string> raw;
    auto add = [&](CLI::App* cmd, const std::string& name, const std::string& help) {
        cmd->add_option("--" + name, raw[cmd->get_name() + "/" + name], help);
    };
    const std::vector<std::pair<std::string, std::string>> common{
        {"g", "coupling strength g (default 1)"},
        {"delta", "pointer width (default 1)"},
        {"out", "output path, '-' for stdout"},
        {"format", "csv or pretty"},
        {"config", "JSON file with defaults for these flags"},
    };

    auto* wv = app.add_subcommand("weak-value", "Evaluate A_w = <post|A|pre>/<post|pre>");
    auto* cmp = app.add_subcommand("compare", "Bures distances of eigenvalue, weak value and expectation pointers");
    auto* amp = app.add_subcommand("amplify", "AAV spin amplification sweep");
    for (auto* cmd : {wv, cmp, amp}) {
        for (const auto& [name, help] : common) add(cmd, name, help);
    }
    add(wv, "pre", "pre-selected state, e.g. '-1:1,0:1'");
    add(wv, "post", "post-selected state");
    add(wv, "obs", "diag | proj:j | sigmaz");
    for (auto* cmd : {cmp, amp}) add(cmd, "eps", "interaction duration epsilon");
    add(cmp, "eps-grid", "lo:hi:n:log|lin");
    add(amp, "alpha-tan", "comma-separated tan(alpha/2) values");

    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 wants reverse order
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return static_cast<int>(ExitCode::Ok);
    } catch (const CLI::ParseError& e) {
        err << "wvsim: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    }

    CLI::App* cmd = app.get_subcommands().front();
    const std::string prefix = cmd->get_name() + "/";
    Flags flags;
    std::set<std::string> allowed;
    for (const CLI::Option* opt : cmd->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config") continue;
        allowed.insert(name);
        if (opt->count() > 0) flags[name] = raw[prefix + name];
    }

    try {
        if (const std::string& config = raw[prefix + "config"]; !config.empty()) {
            merge_config_file(config, flags, allowed);
        }
        const RunConfig cfg = to_run_config(cmd->get_name(), flags);
        std::string text;
        if (cfg.command == "weak-value") {
            text = cmd_weak_value(cfg);
        } else if (cfg.command == "compare") {
            text = cmd_compare(cfg);
        } else {
            text = cmd_amplify(cfg);
        }
        emit(cfg, text, out);
        return static_cast<int>(ExitCode::Ok);
    } catch (const Error& e) {
        err << "wvsim: " << e.what() << '\n';
        return static_cast<int>(e.is_physics_domain() ? ExitCode::Physics : ExitCode::Usage);
    }
}

}  // namespace wvsim::cli
