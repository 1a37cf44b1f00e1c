#pragma once

// `peri-richards run|converge|operator-check`.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical instability, 4 I/O error.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "peri_richards/analysis.hpp"
#include "peri_richards/config.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/output.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/time_stepper.hpp"

namespace peri_richards::cli {

enum ExitCode : int { ok = 0, config_error = 2, instability = 3, io_error = 4 };

struct Options {
    std::string preset;
    std::string config;
    std::string out;
    std::string svg;
    std::string report;
    std::vector<double> times;
    std::vector<double> levels;
    std::string axis;
    std::optional<std::size_t> degree;
    std::optional<double> dt;
    std::optional<double> delta;
};

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Scenario from --config or --preset, with --N/--dt/--delta applied on top.
inline ConfigFile resolve_config(const Options& o, bool scenario_required = true) {
    if (!o.preset.empty() && !o.config.empty()) {
        throw ConfigError("", 0, "give either --preset or --config, not both");
    }
    ConfigFile cfg;
    if (!o.config.empty()) {
        cfg = parse_config(read_file(o.config));
    } else if (!o.preset.empty()) {
        try {
            cfg.scenario = scenarios::by_name(o.preset);
        } catch (const InvalidArgument& e) {
            throw ConfigError("preset", 0, e.what());
        }
    } else if (scenario_required) {
        throw ConfigError("", 0, "a scenario is required: pass --preset <name> or --config <path>");
    } else {
        cfg.scenario = scenarios::example1();
    }
    if (o.degree) cfg.scenario.degree = *o.degree;
    if (o.dt) cfg.scenario.dt = *o.dt;
    if (o.delta) cfg.scenario.delta = *o.delta;
    try {
        cfg.scenario.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("", 0, e.what());
    }
    return cfg;
}

inline int cmd_run(const Options& o, std::ostream& out) {
    const ConfigFile cfg = resolve_config(o);
    const Scenario& s = cfg.scenario;

    std::vector<double> times = !o.times.empty() ? o.times : cfg.output.times;
    if (times.empty()) {
        for (int i = 0; i <= 4; ++i) times.push_back(s.final_time * i / 4.0);
    }
    for (double t : times) {
        if (t < 0.0 || t > s.final_time * (1.0 + 1e-12)) {
            throw ConfigError("times", 0, "snapshot time " + format_double(t) + " outside [0, T]");
        }
    }
    const std::string csv = !o.out.empty() ? o.out : (!cfg.output.csv.empty() ? cfg.output.csv : "profiles.csv");
    const std::string svg = !o.svg.empty() ? o.svg : cfg.output.svg;

    const RunRecord rec = run(s, times);
    if (!rec.complete) {
        throw InstabilityError(rec.failure_step, "run aborted at step " +
                                                     std::to_string(rec.failure_step) + ": " + rec.failure);
    }
    write_profiles_csv(rec, s, csv);
    if (!svg.empty()) write_profiles_svg(rec, s, svg);

    double stability_sup = 0.0;
    for (double v : rec.stability_series) stability_sup = std::max(stability_sup, v);
    out << "steps: " << rec.steps << "\n"
        << "wall time: " << format_fixed(rec.wall_seconds, 3) << " s\n"
        << "stability functional sup: " << format_sci(stability_sup) << "\n"
        << "max-principle violations: " << rec.max_principle_violations.size() << "\n";
    for (const auto& v : rec.max_principle_violations) {
        out << "  step " << v.step << ": max theta " << format_double(v.max_theta) << " > bound "
            << format_double(v.bound) << "\n";
    }
    out << "profiles: " << csv << "\n";
    if (!svg.empty()) out << "plot: " << svg << "\n";
    return ok;
}

inline std::string default_report_path(const std::string& csv) {
    std::filesystem::path p(csv);
    p.replace_extension();
    return p.string() + "_report.txt";
}

inline int cmd_converge(const Options& o, std::ostream& out) {
    const ConfigFile cfg = resolve_config(o);
    Axis axis = cfg.study ? cfg.study->axis : Axis::time;
    if (!o.axis.empty()) {
        if (o.axis == "time") axis = Axis::time;
        else if (o.axis == "space") axis = Axis::space;
        else throw ConfigError("axis", 0, "expected time or space");
    }
    const std::vector<double> levels = !o.levels.empty() ? o.levels
                                       : cfg.study        ? cfg.study->levels
                                                          : std::vector<double>{};
    if (levels.size() < 3) throw ConfigError("levels", 0, "a study needs at least 3 levels");

    ConvergenceStudy study;
    try {
        if (axis == Axis::time) {
            study = temporal_order(cfg.scenario, levels);
        } else {
            std::vector<std::size_t> degrees;
            for (double l : levels) {
                if (l < 2.0 || l != std::floor(l)) throw ConfigError("levels", 0, "degrees must be integers >= 2");
                degrees.push_back(static_cast<std::size_t>(l));
            }
            study = spatial_order(cfg.scenario, degrees);
        }
    } catch (const StudyError& e) {
        throw ConfigError("levels", 0, e.what());
    }

    const std::string csv = !o.out.empty() ? o.out : (!cfg.output.csv.empty() ? cfg.output.csv : "study.csv");
    const std::string report_path =
        !o.report.empty() ? o.report : (!cfg.output.report.empty() ? cfg.output.report : default_report_path(csv));
    const std::string report = format_study_report(study);
    write_text_file(csv, format_study_csv(study));
    write_text_file(report_path, report);
    out << report << "\ntable: " << csv << "\nreport: " << report_path << "\n";
    return ok;
}

inline int cmd_operator_check(const Options& o, std::ostream& out) {
    const bool have_scenario = !o.preset.empty() || !o.config.empty();
    const ConfigFile cfg = resolve_config(o, false);
    const double delta = o.delta ? *o.delta : (have_scenario ? cfg.scenario.delta : 0.15);
    std::vector<std::size_t> degrees;
    for (double l : o.levels.empty() ? std::vector<double>{32, 64, 128, 256} : o.levels) {
        if (l < 2.0 || l != std::floor(l)) throw ConfigError("levels", 0, "degrees must be integers >= 2");
        degrees.push_back(static_cast<std::size_t>(l));
    }
    const auto table = operator_gap_study(delta, default_test_pairs(), degrees, cfg.scenario.beta_mode);
    const std::string csv = !o.out.empty() ? o.out : "operator_gap.csv";
    const std::string text = format_gap_csv(table);
    write_text_file(csv, text);
    out << text << "table: " << csv << "\n";
    return ok;
}

/// Entry point shared by the executable and the tests.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral solver for a peridynamic formulation of Richards' equation", "peri-richards"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--preset", o.preset, "Built-in scenario: example1 or example2");
        sub->add_option("--config", o.config, "Scenario configuration file");
        sub->add_option("--out", o.out, "Output CSV path");
        auto* n = sub->add_option_function<std::size_t>("--N", [&](std::size_t v) { o.degree = v; }, "Spectral degree");
        n->check(CLI::Range(std::size_t{2}, std::size_t{65536}));
        sub->add_option_function<double>("--dt", [&](double v) { o.dt = v; }, "Time step [s]");
        sub->add_option_function<double>("--delta", [&](double v) { o.delta = v; }, "Horizon in (0, 1)");
    };

    auto* run_cmd = app.add_subcommand("run", "March a scenario and write profile snapshots");
    add_common(run_cmd);
    run_cmd->add_option("--svg", o.svg, "Also write an SVG plot of the profiles");
    run_cmd->add_option("--times", o.times, "Snapshot times, comma separated [s]")->delimiter(',');

    auto* conv_cmd = app.add_subcommand("converge", "Self-convergence study in time or space");
    add_common(conv_cmd);
    conv_cmd->add_option("--axis", o.axis, "time or space")->check(CLI::IsMember({"time", "space"}));
    conv_cmd->add_option("--levels", o.levels, "dt values or degrees, comma separated")->delimiter(',');
    conv_cmd->add_option("--report", o.report, "Text report path");

    auto* op_cmd = app.add_subcommand("operator-check", "Spectral vs quadrature operator gap table");
    add_common(op_cmd);
    op_cmd->add_option("--levels", o.levels, "Degrees, comma separated")->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(o, out);
        if (conv_cmd->parsed()) return cmd_converge(o, out);
        return cmd_operator_check(o, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const StudyError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const InstabilityError& e) {
        err << "numerical instability: " << e.what() << "\n";
        return instability;
    } catch (const WaterContentRangeError& e) {
        err << "numerical instability: " << e.what() << "\n";
        return instability;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return io_error;
    }
}

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args, out, err);
}

}  // namespace peri_richards::cli
