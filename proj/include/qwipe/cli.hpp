#pragma once

#include <cstddef>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwipe/csv.hpp"
#include "qwipe/errors.hpp"
#include "qwipe/experiments.hpp"

namespace qwipe::cli {

enum class Command { none, factors, eta, simulate, compare, convergence };

inline const char *command_name(Command c) {
    switch (c) {
    case Command::factors: return "factors";
    case Command::eta: return "eta";
    case Command::simulate: return "simulate";
    case Command::compare: return "compare";
    case Command::convergence: return "convergence";
    default: return "none";
    }
}

/// Fully resolved invocation: command, model and sweep parameters, output.
/// Field defaults are the figure-reproduction values.
struct CliConfig {
    Command command = Command::none;

    double a = 0.5;
    double b_re = 0.5;
    double b_im = 0.0;
    double c = 1e3;
    double tau = 1e-3;
    double p = 0.0;
    double epsilon = 0.0;

    std::vector<double> p_list = {0.0, 0.25, 0.5, 0.75, 0.95, 1.0};
    std::vector<double> epsilon_list = {0.0, 0.25, 0.8};
    std::vector<double> dt_list = {1e-4, 5e-5, 2.5e-5};

    double dt = 1e-5;
    double t_final = 1e-2;
    std::size_t t_steps = 1000;
    std::size_t record_stride = 1;
    LnxOverCRange lnx_over_c;
    double tol = 5e-3;

    std::string out_path = "-";
    int precision = 9;
};

namespace detail {

inline double parse_double(const std::string &text, const std::string &what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw UsageError("invalid number '" + text + "' for " + what);
    }
}

inline std::size_t parse_size(const std::string &text, const std::string &what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size() || v < 0)
            throw std::invalid_argument("not a non-negative integer");
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
        throw UsageError("invalid integer '" + text + "' for " + what);
    }
}

inline std::vector<double> parse_list(const std::string &text, const std::string &what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        values.push_back(parse_double(part, what));
    if (values.empty())
        throw UsageError("empty list for " + what);
    return values;
}

inline LnxOverCRange parse_range(const std::string &text, const std::string &what) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':'))
        parts.push_back(part);
    if (parts.size() != 3)
        throw UsageError("expected min:max:steps for " + what + ", got '" + text + "'");
    LnxOverCRange range;
    range.min = parse_double(parts[0], what);
    range.max = parse_double(parts[1], what);
    range.steps = parse_size(parts[2], what);
    if (!(range.min <= range.max) || range.steps == 0)
        throw UsageError("range for " + what + " must satisfy min <= max with steps >= 1");
    return range;
}

inline std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace detail

/// Applies one `key = value` setting. Throws UsageError on unknown keys or
/// malformed values; callers add file/line context.
inline void apply_key(CliConfig &config, const std::string &key, const std::string &value) {
    using detail::parse_double;
    using detail::parse_list;
    using detail::parse_range;
    using detail::parse_size;
    const std::string what = "key '" + key + "'";

    if (key == "a") config.a = parse_double(value, what);
    else if (key == "b-re") config.b_re = parse_double(value, what);
    else if (key == "b-im") config.b_im = parse_double(value, what);
    else if (key == "c") config.c = parse_double(value, what);
    else if (key == "tau") config.tau = parse_double(value, what);
    else if (key == "p") config.p = parse_double(value, what);
    else if (key == "epsilon") config.epsilon = parse_double(value, what);
    else if (key == "p-list") config.p_list = parse_list(value, what);
    else if (key == "epsilon-list") config.epsilon_list = parse_list(value, what);
    else if (key == "dt-list") config.dt_list = parse_list(value, what);
    else if (key == "dt") config.dt = parse_double(value, what);
    else if (key == "t-final") config.t_final = parse_double(value, what);
    else if (key == "t-steps") config.t_steps = parse_size(value, what);
    else if (key == "record-stride") config.record_stride = parse_size(value, what);
    else if (key == "lnx-over-c") config.lnx_over_c = parse_range(value, what);
    else if (key == "tol") config.tol = parse_double(value, what);
    else if (key == "out") config.out_path = value;
    else if (key == "precision") config.precision = static_cast<int>(parse_size(value, what));
    else throw UsageError("unknown key '" + key + "'");
}

/// Reads a `key = value` config file ('#' starts a comment). Returns defaults
/// overlaid with the file's settings; command-line flags override both.
inline CliConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file '" + path + "'");

    CliConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("missing '=' (line " + std::to_string(line_no) + ")");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            apply_key(config, key, value);
        } catch (const UsageError &e) {
            throw UsageError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
        }
    }
    return config;
}

/// Parses the `# qwipe <command> key=value ...` header comment emitted at the
/// top of every CSV back into a CliConfig.
inline CliConfig parse_header_comment(const std::string &header) {
    std::stringstream ss(header);
    std::string tag, name, command;
    ss >> tag >> name >> command;
    if (tag != "#" || name != "qwipe")
        throw UsageError("not a qwipe CSV header: '" + header + "'");

    CliConfig config;
    if (command == "factors") config.command = Command::factors;
    else if (command == "eta") config.command = Command::eta;
    else if (command == "simulate") config.command = Command::simulate;
    else if (command == "compare") config.command = Command::compare;
    else if (command == "convergence") config.command = Command::convergence;
    else throw UsageError("unknown command '" + command + "' in CSV header");

    std::string token;
    while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw UsageError("malformed header token '" + token + "'");
        apply_key(config, token.substr(0, eq), token.substr(eq + 1));
    }
    return config;
}

namespace detail {

inline std::string range_text(const LnxOverCRange &r) {
    return format_full(r.min) + ":" + format_full(r.max) + ":" + std::to_string(r.steps);
}

inline std::string header_comment(const CliConfig &cfg) {
    std::string h = std::string("# qwipe ") + command_name(cfg.command);
    const auto kv = [&h](const std::string &key, const std::string &value) {
        h += ' ';
        h += key;
        h += '=';
        h += value;
    };
    switch (cfg.command) {
    case Command::factors:
        kv("epsilon-list", format_list(cfg.epsilon_list));
        kv("lnx-over-c", range_text(cfg.lnx_over_c));
        kv("c", format_full(cfg.c));
        break;
    case Command::eta:
        kv("p-list", format_list(cfg.p_list));
        kv("epsilon", format_full(cfg.epsilon));
        kv("a", format_full(cfg.a));
        kv("b-re", format_full(cfg.b_re));
        kv("b-im", format_full(cfg.b_im));
        kv("c", format_full(cfg.c));
        kv("tau", format_full(cfg.tau));
        kv("t-final", format_full(cfg.t_final));
        kv("t-steps", std::to_string(cfg.t_steps));
        break;
    case Command::simulate:
        kv("a", format_full(cfg.a));
        kv("b-re", format_full(cfg.b_re));
        kv("b-im", format_full(cfg.b_im));
        kv("p", format_full(cfg.p));
        kv("epsilon", format_full(cfg.epsilon));
        kv("c", format_full(cfg.c));
        kv("tau", format_full(cfg.tau));
        kv("dt", format_full(cfg.dt));
        kv("t-final", format_full(cfg.t_final));
        kv("record-stride", std::to_string(cfg.record_stride));
        break;
    case Command::compare:
        kv("a", format_full(cfg.a));
        kv("b-re", format_full(cfg.b_re));
        kv("b-im", format_full(cfg.b_im));
        kv("p", format_full(cfg.p));
        kv("epsilon", format_full(cfg.epsilon));
        kv("c", format_full(cfg.c));
        kv("tau", format_full(cfg.tau));
        kv("dt", format_full(cfg.dt));
        kv("t-final", format_full(cfg.t_final));
        kv("tol", format_full(cfg.tol));
        break;
    case Command::convergence:
        kv("a", format_full(cfg.a));
        kv("b-re", format_full(cfg.b_re));
        kv("b-im", format_full(cfg.b_im));
        kv("p", format_full(cfg.p));
        kv("epsilon", format_full(cfg.epsilon));
        kv("c", format_full(cfg.c));
        kv("tau", format_full(cfg.tau));
        kv("dt-list", format_list(cfg.dt_list));
        kv("t-final", format_full(cfg.t_final));
        break;
    default:
        break;
    }
    kv("precision", std::to_string(cfg.precision));
    return h;
}

inline ModelParams model_params(const CliConfig &cfg, double p, double epsilon) {
    return ModelParams(cfg.a, Complex(cfg.b_re, cfg.b_im), cfg.c,
                       DissipationParams(p, cfg.tau), epsilon);
}

inline void write_output(const CliConfig &cfg, const std::string &text) {
    if (cfg.out_path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out)
        throw UsageError("cannot open output file '" + cfg.out_path + "'");
    out << text;
    if (!out)
        throw UsageError("failed writing output file '" + cfg.out_path + "'");
}

} // namespace detail

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitToleranceExceeded = 3;
inline constexpr int kExitNumericFailure = 4;

/// Executes a validated config. Returns the process exit code.
inline int execute(const CliConfig &config) {
    if (config.precision < 1 || config.precision > 17)
        throw UsageError("precision must be between 1 and 17");

    std::ostringstream out;
    int code = kExitOk;

    switch (config.command) {
    case Command::factors: {
        SweepSpec spec{SweepKind::factors,
                       detail::model_params(config, 0.0, 0.0),
                       config.epsilon_list,
                       {},
                       config.lnx_over_c,
                       {},
                       {}};
        write_factors_csv(out, detail::header_comment(config), sweep_factors(spec),
                          config.precision);
        break;
    }
    case Command::eta: {
        SweepSpec spec{SweepKind::eta,
                       detail::model_params(config, 0.0, config.epsilon),
                       {config.epsilon},
                       config.p_list,
                       {},
                       {config.t_final, config.t_steps},
                       {}};
        write_eta_csv(out, detail::header_comment(config), sweep_eta(spec), config.precision);
        break;
    }
    case Command::simulate: {
        const ModelParams params = detail::model_params(config, config.p, config.epsilon);
        const EvolutionConfig cfg(config.dt, config.t_final, config.record_stride);
        write_simulate_csv(out, detail::header_comment(config), simulate_rows(params, cfg),
                           config.precision);
        break;
    }
    case Command::compare: {
        const ModelParams params = detail::model_params(config, config.p, config.epsilon);
        const EvolutionConfig cfg(config.dt, config.t_final);
        const double err = compare_discrete_analytic(params, cfg);
        write_compare_csv(out, detail::header_comment(config), err, config.precision);
        if (!(err <= config.tol))
            code = kExitToleranceExceeded;
        break;
    }
    case Command::convergence: {
        const ModelParams params = detail::model_params(config, config.p, config.epsilon);
        const ConvergenceReport report =
            convergence_order(params, config.dt_list, config.t_final);
        write_convergence_csv(out, detail::header_comment(config), report, config.precision);
        break;
    }
    default:
        throw UsageError("no command selected");
    }

    detail::write_output(config, out.str());
    return code;
}

/// Parses argv (without the program name), merges an optional config file
/// (flags win), validates, and runs the selected experiment.
inline int run(const std::vector<std::string> &args, std::ostream &err_stream = std::cerr) {
    CliConfig config;

    // The config file must be applied before flag values land, so find it first.
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size())
                    throw UsageError("--config requires a file path");
                config = load_config(args[i + 1]);
            } else if (args[i].rfind("--config=", 0) == 0) {
                config = load_config(args[i].substr(9));
            }
        }
    } catch (const UsageError &e) {
        err_stream << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"coherence conservation under a fast-dissipating thermal environment",
                 "qwipe"};
    app.require_subcommand(1);

    std::string config_path; // consumed above; registered so CLI11 accepts it
    std::string p_list_text, epsilon_list_text, dt_list_text, lnx_range_text;

    const auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "key = value config file; flags override it");
        cmd->add_option("--out", config.out_path, "output path, or - for stdout");
        cmd->add_option("--precision", config.precision, "significant digits in CSV values");
    };
    const auto add_model = [&](CLI::App *cmd) {
        cmd->add_option("--a", config.a, "initial population of the principal qubit");
        cmd->add_option("--b-re", config.b_re, "initial coherence, real part");
        cmd->add_option("--b-im", config.b_im, "initial coherence, imaginary part");
        cmd->add_option("--c", config.c, "Ising coupling coefficient (1/s)");
        cmd->add_option("--tau", config.tau, "dissipation interval tau (s)");
    };

    CLI::App *factors = app.add_subcommand("factors", "decoherence factors over -(ln x)/c");
    add_common(factors);
    factors->add_option("--epsilon-list", epsilon_list_text, "comma-separated polarizations");
    factors->add_option("--lnx-over-c", lnx_range_text, "grid as min:max:steps");
    factors->add_option("--c", config.c, "Ising coupling coefficient (1/s)");

    CLI::App *eta = app.add_subcommand("eta", "closed-form |eta(t)|/|b| curves");
    add_common(eta);
    add_model(eta);
    eta->add_option("--p-list", p_list_text, "comma-separated dissipation probabilities");
    eta->add_option("--epsilon", config.epsilon, "thermal polarization");
    eta->add_option("--t-final", config.t_final, "time horizon (s)");
    eta->add_option("--t-steps", config.t_steps, "number of grid times");

    CLI::App *simulate = app.add_subcommand("simulate", "discrete-map trajectory diagnostics");
    add_common(simulate);
    add_model(simulate);
    simulate->add_option("--p", config.p, "dissipation probability per tau");
    simulate->add_option("--epsilon", config.epsilon, "thermal polarization");
    simulate->add_option("--dt", config.dt, "map time step (s)");
    simulate->add_option("--t-final", config.t_final, "time horizon (s)");
    simulate->add_option("--record-stride", config.record_stride, "record every k-th step");

    CLI::App *compare = app.add_subcommand("compare", "discrete map vs closed form");
    add_common(compare);
    add_model(compare);
    compare->add_option("--p", config.p, "dissipation probability per tau");
    compare->add_option("--epsilon", config.epsilon, "thermal polarization");
    compare->add_option("--dt", config.dt, "map time step (s)");
    compare->add_option("--t-final", config.t_final, "time horizon (s)");
    compare->add_option("--tol", config.tol, "max allowed |coherence| mismatch");

    CLI::App *convergence = app.add_subcommand("convergence", "error vs dt order estimate");
    add_common(convergence);
    add_model(convergence);
    convergence->add_option("--p", config.p, "dissipation probability per tau");
    convergence->add_option("--epsilon", config.epsilon, "thermal polarization");
    convergence->add_option("--dt-list", dt_list_text, "comma-separated, strictly decreasing");
    convergence->add_option("--t-final", config.t_final, "time horizon (s)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e, std::cout, err_stream);
        return kExitUsage;
    }

    try {
        if (factors->parsed()) config.command = Command::factors;
        else if (eta->parsed()) config.command = Command::eta;
        else if (simulate->parsed()) config.command = Command::simulate;
        else if (compare->parsed()) config.command = Command::compare;
        else if (convergence->parsed()) config.command = Command::convergence;

        if (!p_list_text.empty())
            config.p_list = detail::parse_list(p_list_text, "--p-list");
        if (!epsilon_list_text.empty())
            config.epsilon_list = detail::parse_list(epsilon_list_text, "--epsilon-list");
        if (!dt_list_text.empty())
            config.dt_list = detail::parse_list(dt_list_text, "--dt-list");
        if (!lnx_range_text.empty())
            config.lnx_over_c = detail::parse_range(lnx_range_text, "--lnx-over-c");

        return execute(config);
    } catch (const UsageError &e) {
        err_stream << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        err_stream << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        err_stream << "numeric failure: " << e.what() << '\n';
        return kExitNumericFailure;
    }
}

inline int run(int argc, char **argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc) - 1 : 0);
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args);
}

} // namespace qwipe::cli
