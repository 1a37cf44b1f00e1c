#pragma once

// Profile CSV, SVG plots, and study tables/reports.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "peri_richards/analysis.hpp"
#include "peri_richards/config.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/time_stepper.hpp"

namespace peri_richards {

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

/// Fixed-point formatting with `digits` decimals, locale independent.
inline std::string format_fixed(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

inline std::string format_sci(double v, int digits = 6) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, digits);
    return std::string(buf, res.ptr);
}

/// z_cm column (ascending depth) followed by one `t=<seconds>` column per snapshot.
inline std::string format_profiles_csv(const RunRecord& record, const Scenario& s) {
    if (!record.complete) throw InvalidArgument("cannot export an incomplete run");
    const GridPtr grid = record.snapshots.empty() ? scenario_grid(s) : record.snapshots.front().theta.grid();
    const auto x = grid->nodes();

    std::string out = "z_cm";
    for (const auto& snap : record.snapshots) out += ",t=" + format_double(snap.requested_time);
    out += "\n";
    // Node 0 is x = +1, i.e. z = 0, so node order is already ascending in depth.
    for (std::size_t h = 0; h < grid->size(); ++h) {
        out += format_double(physical_depth(s, x[h]));
        for (const auto& snap : record.snapshots) out += "," + format_double(snap.theta[h]);
        out += "\n";
    }
    return out;
}

inline void write_profiles_csv(const RunRecord& record, const Scenario& s, const std::string& path) {
    write_text_file(path, format_profiles_csv(record, s));
}

/// 800x600 SVG with one polyline per snapshot: depth z (cm) on the horizontal axis, water
/// content on the vertical axis.
inline std::string render_profiles_svg(const RunRecord& record, const Scenario& s) {
    constexpr double width = 800.0, height = 600.0;
    constexpr double left = 80.0, right = 150.0, top = 30.0, bottom = 70.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& snap : record.snapshots) {
        for (double v : snap.theta.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.01, hi += 0.01;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    auto px = [&](double z) { return left + plot_w * z / s.length; };
    auto py = [&](double th) { return top + plot_h * (hi - th) / (hi - lo); };
    auto f1 = [](double v) { return format_fixed(v, 1); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
          "viewBox=\"0 0 800 600\">\n"
       << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
       << "<rect x=\"" << f1(left) << "\" y=\"" << f1(top) << "\" width=\"" << f1(plot_w)
       << "\" height=\"" << f1(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double z = s.length * i / ticks;
        const double th = lo + (hi - lo) * i / ticks;
        os << "<line x1=\"" << f1(px(z)) << "\" y1=\"" << f1(top + plot_h) << "\" x2=\"" << f1(px(z))
           << "\" y2=\"" << f1(top + plot_h + 6) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << f1(px(z)) << "\" y=\"" << f1(top + plot_h + 22)
           << "\" font-size=\"13\" text-anchor=\"middle\">" << format_fixed(z, 1) << "</text>\n"
           << "<line x1=\"" << f1(left - 6) << "\" y1=\"" << f1(py(th)) << "\" x2=\"" << f1(left)
           << "\" y2=\"" << f1(py(th)) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << f1(left - 10) << "\" y=\"" << f1(py(th) + 4)
           << "\" font-size=\"13\" text-anchor=\"end\">" << format_fixed(th, 3) << "</text>\n";
    }
    os << "<text x=\"" << f1(left + plot_w / 2) << "\" y=\"" << f1(height - 20)
       << "\" font-size=\"15\" text-anchor=\"middle\">z (cm)</text>\n"
       << "<text x=\"20\" y=\"" << f1(top + plot_h / 2) << "\" font-size=\"15\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 20 " << f1(top + plot_h / 2) << ")\">θ</text>\n";

    const auto x = record.snapshots.empty() ? std::span<const double>{}
                                            : record.snapshots.front().theta.grid()->nodes();
    for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
        const auto& snap = record.snapshots[i];
        const char* color = colors[i % std::size(colors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t h = 0; h < snap.theta.size(); ++h) {
            if (h) os << ' ';
            os << format_fixed(px(physical_depth(s, x[h])), 2) << ',' << format_fixed(py(snap.theta[h]), 2);
        }
        os << "\"/>\n";
        const double ly = top + 20.0 + 22.0 * static_cast<double>(i);
        os << "<line x1=\"" << f1(width - right + 15) << "\" y1=\"" << f1(ly) << "\" x2=\""
           << f1(width - right + 45) << "\" y2=\"" << f1(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << f1(width - right + 52) << "\" y=\"" << f1(ly + 4)
           << "\" font-size=\"13\">t = " << format_double(snap.requested_time) << " s</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void write_profiles_svg(const RunRecord& record, const Scenario& s, const std::string& path) {
    write_text_file(path, render_profiles_svg(record, s));
}

inline std::string format_study_csv(const ConvergenceStudy& st) {
    std::string out = "level,ref_error_max,ref_error_l2w,diff_max,diff_l2w,order_max,order_l2w\n";
    for (std::size_t i = 0; i < st.levels.size(); ++i) {
        out += format_double(st.levels[i]);
        auto cell = [&](const std::vector<double>& v, std::size_t j) {
            out += ",";
            if (j < v.size()) out += format_double(v[j]);
        };
        cell(st.reference_error_max, i);
        cell(st.reference_error_l2, i);
        cell(st.successive_diff_max, i);
        cell(st.successive_diff_l2, i);
        cell(st.observed_orders_max, i);
        cell(st.observed_orders_l2, i);
        out += "\n";
    }
    return out;
}

inline std::string format_study_report(const ConvergenceStudy& st) {
    const Scenario& s = st.base;
    const bool time = st.axis == Axis::time;
    std::ostringstream os;
    os << (time ? "Temporal" : "Spatial") << " self-convergence study\n"
       << "==============================\n\n"
       << "Scenario: Z = " << format_double(s.length) << " cm, T = " << format_double(s.final_time)
       << " s, delta = " << format_double(s.delta) << ", S = " << format_double(s.effective_sink())
       << " 1/s\n"
       << (time ? "Fixed degree N = " + std::to_string(s.degree)
                : "Fixed time step dt = " + format_double(s.dt) + " s")
       << "\n"
       << "Compared at t = T on the " << st.comparison_grid->size()
       << " nodes of the coarsest grid.\n\n"
       << "No exact solution is available: errors are measured against the finest level, and\n"
       << "observed orders come from differences between consecutive levels,\n"
       << "p_i = log(d_i / d_(i+1)) / log(refinement ratio).\n\n";

    os << (time ? "  dt [s]" : "       N") << "   err_max(ref)   err_l2w(ref)   diff_max       diff_l2w\n";
    for (std::size_t i = 0; i < st.levels.size(); ++i) {
        std::string lvl = time ? format_double(st.levels[i]) : std::to_string(static_cast<long>(st.levels[i]));
        os << std::string(8 > lvl.size() ? 8 - lvl.size() : 0, ' ') << lvl;
        if (i < st.reference_error_max.size()) {
            os << "   " << format_sci(st.reference_error_max[i], 4) << "     "
               << format_sci(st.reference_error_l2[i], 4) << "     "
               << format_sci(st.successive_diff_max[i], 4) << "     "
               << format_sci(st.successive_diff_l2[i], 4);
        } else {
            os << "   (reference)";
        }
        os << "\n";
    }
    os << "\nObserved orders (max-norm): ";
    for (std::size_t i = 0; i < st.observed_orders_max.size(); ++i) {
        os << (i ? ", " : "") << format_fixed(st.observed_orders_max[i], 3);
    }
    os << "\nObserved orders (L2_w):     ";
    for (std::size_t i = 0; i < st.observed_orders_l2.size(); ++i) {
        os << (i ? ", " : "") << format_fixed(st.observed_orders_l2[i], 3);
    }
    os << "\nReference errors monotone (5% slack on coarsest pair): "
       << (is_monotone_nonincreasing(st.reference_error_max) ? "yes" : "no") << "\n";
    return os.str();
}

inline std::string format_gap_csv(const OperatorGapTable& table) {
    std::string out = "pair,N,gap_max,operator_scale,monotone\n";
    for (const auto& r : table.rows) {
        out += r.pair + "," + std::to_string(r.degree) + "," + format_double(r.gap) + "," +
               format_double(r.scale) + "," + (table.monotone(r.pair) ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace peri_richards
