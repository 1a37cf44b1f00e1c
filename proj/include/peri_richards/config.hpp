#pragma once

// Scenario configuration files.
//
// The format is a small subset of TOML: `[section]` headers, `key = value` lines, `#` comments.
// Values are numbers, booleans, double-quoted strings, or single-line arrays of numbers.
// Sections and keys:
//
//   [scenario]
//   preset = "example1"            # optional starting point; other keys override it
//   Z = 30.0                       # column length, cm
//   T = 60.0                       # final time, s
//   N = 100                        # spectral degree
//   dt = 0.06                      # time step, s
//   delta = 0.15                   # horizon, in (0, 1)
//   sink = -700.0                  # S as written in the scenario
//   sink_scale = 1e-6              # multiplier applied to sink (default 1)
//   soil = "example1_sand"         # or "example2_berino"; individual keys below override
//   theta_r = 0.075
//   theta_s = 0.287
//   alpha = 0.036
//   n = 1.56
//   K_s = 0.00094
//   ic = "example1_kinked"         # "example2_cosine", "polynomial", "table"
//   ic_coeffs = [0.2, 0.01]        # polynomial: monomial coefficients in x
//   ic_x = [-1, 0, 1]              # table: abscissae in x, increasing, covering [-1, 1]
//   ic_theta = [0.13, 0.2, 0.22]
//   bc_top = [0.2234, 0.1810]      # ramp start/end at z = 0
//   bc_bottom = [0.1386, 0.1174]   # ramp start/end at z = Z
//   jacobian_scaling = false
//   beta = "discrete"              # or "closed_form"
//
//   [output]
//   times = [0, 15, 30, 45, 60]
//   csv = "profiles.csv"
//   svg = "profiles.svg"
//   report = "study.txt"
//
//   [study]
//   axis = "time"                  # or "space"
//   levels = [0.24, 0.12, 0.06, 0.03]
//
// Unknown sections or keys are errors.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "peri_richards/analysis.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/peridynamic_operator.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/soil.hpp"

namespace peri_richards {

struct OutputSection {
    std::vector<double> times;
    std::string csv;
    std::string svg;
    std::string report;

    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct StudySection {
    Axis axis = Axis::time;
    std::vector<double> levels;

    friend bool operator==(const StudySection&, const StudySection&) = default;
};

struct ConfigFile {
    Scenario scenario;
    OutputSection output;
    std::optional<StudySection> study;

    friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

/// Shortest decimal string that reads back to the same double; locale independent.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace config_detail {

using Value = std::variant<double, bool, std::string, std::vector<double>>;

struct Entry {
    Value value;
    int line;
};

using Section = std::map<std::string, Entry>;

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text, const std::string& key, int line) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty() ||
        !std::isfinite(v)) {
        throw ConfigError(key, line, "malformed number '" + std::string(text) + "'");
    }
    return v;
}

// Strips a trailing comment that is not inside a string literal.
inline std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '\\' && in_string) {
            ++i;
        } else if (c == '"') {
            in_string = !in_string;
        } else if (c == '#' && !in_string) {
            return line.substr(0, i);
        }
    }
    return line;
}

inline Value parse_value(std::string_view text, const std::string& key, int line) {
    text = trim(text);
    if (text.empty()) throw ConfigError(key, line, "missing value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') throw ConfigError(key, line, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            char c = text[i];
            if (c == '\\') {
                if (i + 2 >= text.size()) throw ConfigError(key, line, "dangling escape in string");
                c = text[++i];
                if (c != '"' && c != '\\') throw ConfigError(key, line, "unsupported escape in string");
            } else if (c == '"') {
                throw ConfigError(key, line, "unexpected quote inside string");
            }
            out.push_back(c);
        }
        return out;
    }
    if (text.front() == '[') {
        if (text.back() != ']') throw ConfigError(key, line, "unterminated array");
        std::vector<double> out;
        std::string_view body = trim(text.substr(1, text.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const auto item = trim(body.substr(0, comma));
            if (item.empty()) {
                if (comma == std::string_view::npos) break;  // trailing comma
                throw ConfigError(key, line, "empty array element");
            }
            out.push_back(parse_number(item, key, line));
            if (comma == std::string_view::npos) break;
            body = trim(body.substr(comma + 1));
        }
        return out;
    }
    if (text == "true") return true;
    if (text == "false") return false;
    return parse_number(text, key, line);
}

inline std::map<std::string, Section> tokenize(std::string_view text) {
    static const std::set<std::string> known_sections{"scenario", "output", "study"};
    std::map<std::string, Section> sections;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                              : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", line_no, "malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_sections.count(current)) {
                throw ConfigError(current, line_no, "unknown section [" + current + "]");
            }
            if (sections.count(current)) {
                throw ConfigError(current, line_no, "duplicate section [" + current + "]");
            }
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("", line_no, "missing key before '='");
        if (current.empty()) throw ConfigError(key, line_no, "key outside of any section");
        auto& sec = sections[current];
        if (sec.count(key)) throw ConfigError(key, line_no, "duplicate key");
        sec.emplace(key, Entry{parse_value(line.substr(eq + 1), key, line_no), line_no});
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(std::string name, const Section* section, std::set<std::string> allowed)
        : name_(std::move(name)), section_(section), allowed_(std::move(allowed)) {
        if (!section_) return;
        for (const auto& [key, entry] : *section_) {
            if (!allowed_.count(key)) {
                throw ConfigError(key, entry.line, "unknown key in [" + name_ + "]");
            }
        }
    }

    bool has(const std::string& key) const { return section_ && section_->count(key); }
    int line(const std::string& key) const { return has(key) ? section_->at(key).line : 0; }

    double number(const std::string& key) const {
        const auto& e = entry(key);
        if (const auto* v = std::get_if<double>(&e.value)) return *v;
        throw ConfigError(key, e.line, "expected a number");
    }

    bool boolean(const std::string& key) const {
        const auto& e = entry(key);
        if (const auto* v = std::get_if<bool>(&e.value)) return *v;
        throw ConfigError(key, e.line, "expected true or false");
    }

    std::string string(const std::string& key) const {
        const auto& e = entry(key);
        if (const auto* v = std::get_if<std::string>(&e.value)) return *v;
        throw ConfigError(key, e.line, "expected a quoted string");
    }

    std::vector<double> array(const std::string& key) const {
        const auto& e = entry(key);
        if (const auto* v = std::get_if<std::vector<double>>(&e.value)) return *v;
        throw ConfigError(key, e.line, "expected an array of numbers");
    }

    const Entry& entry(const std::string& key) const {
        if (!has(key)) throw ConfigError(key, 0, "missing required key in [" + name_ + "]");
        return section_->at(key);
    }

private:
    std::string name_;
    const Section* section_;
    std::set<std::string> allowed_;
};

inline VanGenuchtenParams soil_preset(const std::string& name, int line) {
    if (name == "example1_sand") return soils::example1_sand();
    if (name == "example2_berino") return soils::example2_berino();
    throw ConfigError("soil", line, "unknown soil preset '" + name + "'");
}

inline Scenario read_scenario(const SectionReader& r) {
    Scenario s;
    bool from_preset = false;
    if (r.has("preset")) {
        try {
            s = scenarios::by_name(r.string("preset"));
        } catch (const InvalidArgument& e) {
            throw ConfigError("preset", r.line("preset"), e.what());
        }
        from_preset = true;
    }
    auto required = [&](const std::string& key) {
        if (!from_preset && !r.has(key)) {
            throw ConfigError(key, 0, "missing required key in [scenario]");
        }
        return r.has(key);
    };
    auto range = [&](const std::string& key, bool ok, const std::string& what) {
        if (!ok) throw ConfigError(key, r.line(key), key + " out of range: " + what);
    };

    if (required("Z")) {
        s.length = r.number("Z");
        range("Z", s.length > 0.0, "must be positive");
    }
    if (required("T")) {
        s.final_time = r.number("T");
        range("T", s.final_time >= 0.0, "must be >= 0");
    }
    if (required("N")) {
        const double n = r.number("N");
        range("N", n == std::floor(n) && n >= 2.0 && n <= 65536.0, "must be an integer >= 2");
        s.degree = static_cast<std::size_t>(n);
    }
    if (required("dt")) {
        s.dt = r.number("dt");
        range("dt", s.dt > 0.0, "must be positive");
    }
    if (required("delta")) {
        s.delta = r.number("delta");
        range("delta", s.delta > 0.0 && s.delta < 1.0, "must lie in (0, 1)");
    }
    if (required("sink")) s.sink = r.number("sink");
    if (r.has("sink_scale")) s.sink_scale = r.number("sink_scale");
    if (r.has("jacobian_scaling")) s.jacobian_scaling = r.boolean("jacobian_scaling");
    if (r.has("beta")) {
        const auto b = r.string("beta");
        if (b == "discrete") s.beta_mode = BetaMode::discrete;
        else if (b == "closed_form") s.beta_mode = BetaMode::closed_form;
        else throw ConfigError("beta", r.line("beta"), "expected \"discrete\" or \"closed_form\"");
    }

    // Soil: preset name, then individual overrides; without either, all five keys are required.
    const std::vector<std::string> soil_keys{"theta_r", "theta_s", "alpha", "n", "K_s"};
    bool have_soil = from_preset;
    if (r.has("soil")) {
        s.soil = soil_preset(r.string("soil"), r.line("soil"));
        have_soil = true;
    }
    if (!have_soil) {
        for (const auto& k : soil_keys) {
            if (!r.has(k)) throw ConfigError(k, 0, "missing soil parameter (or give soil = \"<preset>\")");
        }
    }
    int soil_line = r.line("soil");
    double* fields[] = {&s.soil.theta_r, &s.soil.theta_s, &s.soil.alpha, &s.soil.n, &s.soil.K_s};
    for (std::size_t i = 0; i < soil_keys.size(); ++i) {
        if (r.has(soil_keys[i])) {
            *fields[i] = r.number(soil_keys[i]);
            soil_line = r.line(soil_keys[i]);
        }
    }
    s.soil.m = 1.0 - 1.0 / s.soil.n;
    try {
        s.soil.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("soil", soil_line, e.what());
    }

    if (required("ic")) {
        const auto kind = r.string("ic");
        const int line = r.line("ic");
        if (kind == "example1_kinked") {
            s.ic = KinkedLinearProfile{};
        } else if (kind == "example2_cosine") {
            s.ic = CosineProfile{};
        } else if (kind == "polynomial") {
            s.ic = PolynomialProfile{r.array("ic_coeffs")};
        } else if (kind == "table") {
            s.ic = TableProfile{r.array("ic_x"), r.array("ic_theta")};
        } else {
            throw ConfigError("ic", line, "unknown initial profile '" + kind + "'");
        }
    }
    const std::string kind = profile_kind(s.ic);
    if (r.has("ic_coeffs") && kind != "polynomial") {
        throw ConfigError("ic_coeffs", r.line("ic_coeffs"), "only valid with ic = \"polynomial\"");
    }
    for (const char* k : {"ic_x", "ic_theta"}) {
        if (r.has(k) && kind != "table") throw ConfigError(k, r.line(k), "only valid with ic = \"table\"");
    }

    auto ramp = [&](const std::string& key, LinearRamp& out) {
        if (!required(key)) return;
        const auto v = r.array(key);
        if (v.size() != 2) throw ConfigError(key, r.line(key), "expected [start, end]");
        out = {v[0], v[1]};
    };
    ramp("bc_top", s.bc_top);
    ramp("bc_bottom", s.bc_bottom);

    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        const std::string key = msg.find("polynomial") != std::string::npos ? "ic_coeffs"
                                : msg.find("table") != std::string::npos    ? "ic_x"
                                : msg.find("bc_") != std::string::npos      ? "ic"
                                                                            : "";
        throw ConfigError(key, r.line(key.empty() ? "ic" : key), msg);
    }
    return s;
}

}  // namespace config_detail

inline ConfigFile parse_config(std::string_view text) {
    using namespace config_detail;
    const auto sections = tokenize(text);
    auto find = [&](const std::string& name) -> const Section* {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };

    if (!find("scenario")) throw ConfigError("scenario", 0, "missing [scenario] section");
    const SectionReader scen("scenario", find("scenario"),
                             {"preset", "Z", "T", "N", "dt", "delta", "sink", "sink_scale", "soil",
                              "theta_r", "theta_s", "alpha", "n", "K_s", "ic", "ic_coeffs", "ic_x",
                              "ic_theta", "bc_top", "bc_bottom", "jacobian_scaling", "beta"});
    ConfigFile cfg;
    cfg.scenario = read_scenario(scen);

    const SectionReader out("output", find("output"), {"times", "csv", "svg", "report"});
    if (out.has("times")) {
        cfg.output.times = out.array("times");
        for (double t : cfg.output.times) {
            if (t < 0.0 || t > cfg.scenario.final_time * (1.0 + 1e-12)) {
                throw ConfigError("times", out.line("times"), "snapshot time outside [0, T]");
            }
        }
    }
    if (out.has("csv")) cfg.output.csv = out.string("csv");
    if (out.has("svg")) cfg.output.svg = out.string("svg");
    if (out.has("report")) cfg.output.report = out.string("report");

    if (const Section* sec = find("study")) {
        const SectionReader st("study", sec, {"axis", "levels"});
        StudySection study;
        const auto axis = st.string("axis");
        if (axis == "time") study.axis = Axis::time;
        else if (axis == "space") study.axis = Axis::space;
        else throw ConfigError("axis", st.line("axis"), "expected \"time\" or \"space\"");
        study.levels = st.array("levels");
        if (study.levels.size() < 3) {
            throw ConfigError("levels", st.line("levels"), "a study needs at least 3 levels");
        }
        cfg.study = study;
    }
    return cfg;
}

inline std::string serialize_config(const ConfigFile& cfg) {
    const Scenario& s = cfg.scenario;
    auto array = [](const std::vector<double>& v) {
        std::string out = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ", ";
            out += format_double(v[i]);
        }
        return out + "]";
    };
    auto quoted = [](const std::string& v) {
        std::string out = "\"";
        for (char c : v) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out + "\"";
    };

    std::ostringstream os;
    os << "[scenario]\n";
    os << "Z = " << format_double(s.length) << "\n";
    os << "T = " << format_double(s.final_time) << "\n";
    os << "N = " << s.degree << "\n";
    os << "dt = " << format_double(s.dt) << "\n";
    os << "delta = " << format_double(s.delta) << "\n";
    os << "sink = " << format_double(s.sink) << "\n";
    os << "sink_scale = " << format_double(s.sink_scale) << "\n";
    os << "theta_r = " << format_double(s.soil.theta_r) << "\n";
    os << "theta_s = " << format_double(s.soil.theta_s) << "\n";
    os << "alpha = " << format_double(s.soil.alpha) << "\n";
    os << "n = " << format_double(s.soil.n) << "\n";
    os << "K_s = " << format_double(s.soil.K_s) << "\n";
    os << "ic = " << quoted(profile_kind(s.ic)) << "\n";
    if (const auto* p = std::get_if<PolynomialProfile>(&s.ic)) os << "ic_coeffs = " << array(p->coeffs) << "\n";
    if (const auto* t = std::get_if<TableProfile>(&s.ic)) {
        os << "ic_x = " << array(t->x) << "\n";
        os << "ic_theta = " << array(t->theta) << "\n";
    }
    os << "bc_top = " << array({s.bc_top.start, s.bc_top.end}) << "\n";
    os << "bc_bottom = " << array({s.bc_bottom.start, s.bc_bottom.end}) << "\n";
    os << "jacobian_scaling = " << (s.jacobian_scaling ? "true" : "false") << "\n";
    os << "beta = " << quoted(s.beta_mode == BetaMode::discrete ? "discrete" : "closed_form") << "\n";

    const auto& o = cfg.output;
    if (!o.times.empty() || !o.csv.empty() || !o.svg.empty() || !o.report.empty()) {
        os << "\n[output]\n";
        if (!o.times.empty()) os << "times = " << array(o.times) << "\n";
        if (!o.csv.empty()) os << "csv = " << quoted(o.csv) << "\n";
        if (!o.svg.empty()) os << "svg = " << quoted(o.svg) << "\n";
        if (!o.report.empty()) os << "report = " << quoted(o.report) << "\n";
    }
    if (cfg.study) {
        os << "\n[study]\n";
        os << "axis = " << quoted(axis_name(cfg.study->axis)) << "\n";
        os << "levels = " << array(cfg.study->levels) << "\n";
    }
    return os.str();
}

}  // namespace peri_richards
