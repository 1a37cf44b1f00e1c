#pragma once

// Self-convergence studies and the spectral-vs-quadrature operator comparison.
//
// No closed-form solutions exist for the column scenarios, so every study compares levels of
// one discretisation against each other. Solutions are compared at T on the nodes of the
// coarsest grid; finer solutions are brought there by Chebyshev interpolation, which is exact
// when the grids are nested (N doubling).

#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "peri_richards/chebyshev.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/peridynamic_operator.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/time_stepper.hpp"

namespace peri_richards {

enum class Axis { time, space };

inline const char* axis_name(Axis a) { return a == Axis::time ? "time" : "space"; }

struct ConvergenceStudy {
    Axis axis = Axis::time;
    Scenario base;
    std::vector<double> levels;          ///< dt values (time) or degrees (space), coarse to fine
    GridPtr comparison_grid;             ///< nodes on which levels are compared
    std::vector<GridFunction> solutions;  ///< level solutions at T on the comparison nodes

    // Against the finest level; one entry per non-reference level.
    std::vector<double> reference_error_max;
    std::vector<double> reference_error_l2;

    // Between consecutive levels; entry i compares level i with level i+1.
    std::vector<double> successive_diff_max;
    std::vector<double> successive_diff_l2;

    // log(d_i / d_{i+1}) / log(refinement ratio); entry i uses successive differences i, i+1.
    std::vector<double> observed_orders_max;
    std::vector<double> observed_orders_l2;
};

/// True when every consecutive ratio seq[i+1]/seq[i] <= 1, with `first_allowance` relative slack
/// on the first (coarsest) pair.
inline bool is_monotone_nonincreasing(const std::vector<double>& seq, double first_allowance = 0.05) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const double slack = i == 0 ? first_allowance : 0.0;
        if (seq[i + 1] > seq[i] * (1.0 + slack)) return false;
    }
    return true;
}

namespace detail {

inline double observed_order(double coarse_diff, double fine_diff, double ratio) {
    if (coarse_diff == 0.0 && fine_diff == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(coarse_diff / fine_diff) / std::log(ratio);
}

inline GridFunction difference(const GridFunction& a, const GridFunction& b) {
    std::vector<double> d(a.size());
    for (std::size_t h = 0; h < d.size(); ++h) d[h] = a[h] - b[h];
    return GridFunction(a.grid(), std::move(d));
}

inline std::string format_level(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline GridFunction solve_to_final_time(const Scenario& s) {
    const double T = s.final_time;
    RunRecord rec = run(s, std::span<const double>(&T, 1));
    if (!rec.complete) {
        throw InstabilityError(rec.failure_step, "study aborted: level run (N = " +
                                                     std::to_string(s.degree) + ", dt = " +
                                                     format_level(s.dt) + ") failed: " + rec.failure);
    }
    return rec.snapshots.front().theta;
}

inline void check_final_time_reached(const Scenario& s) {
    const double steps = s.final_time / s.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
        throw StudyError("dt = " + std::to_string(s.dt) + " does not divide T = " +
                         std::to_string(s.final_time));
    }
}

inline ConvergenceStudy assemble(Axis axis, const Scenario& base, std::vector<double> levels,
                                 const std::vector<Scenario>& runs, std::vector<double> ratios) {
    // Independent runs; results are placed by level index.
    std::vector<std::future<GridFunction>> pending;
    pending.reserve(runs.size());
    for (const auto& s : runs) {
        pending.push_back(std::async(std::launch::async, [s] { return solve_to_final_time(s); }));
    }
    std::vector<GridFunction> raw;
    raw.reserve(runs.size());
    for (auto& f : pending) raw.push_back(f.get());

    ConvergenceStudy study;
    study.axis = axis;
    study.base = base;
    study.levels = std::move(levels);
    study.comparison_grid = raw.front().grid();
    for (const auto& sol : raw) {
        study.solutions.push_back(sol.grid()->degree() == study.comparison_grid->degree()
                                      ? sol
                                      : interpolate_to(sol, study.comparison_grid));
    }

    const auto& finest = study.solutions.back();
    for (std::size_t i = 0; i + 1 < study.solutions.size(); ++i) {
        const auto err = difference(study.solutions[i], finest);
        study.reference_error_max.push_back(max_norm(err.values()));
        study.reference_error_l2.push_back(weighted_norm(err));
        const auto diff = difference(study.solutions[i], study.solutions[i + 1]);
        study.successive_diff_max.push_back(max_norm(diff.values()));
        study.successive_diff_l2.push_back(weighted_norm(diff));
    }
    for (std::size_t i = 0; i + 1 < study.successive_diff_max.size(); ++i) {
        study.observed_orders_max.push_back(observed_order(
            study.successive_diff_max[i], study.successive_diff_max[i + 1], ratios[i]));
        study.observed_orders_l2.push_back(observed_order(
            study.successive_diff_l2[i], study.successive_diff_l2[i + 1], ratios[i]));
    }
    return study;
}

}  // namespace detail

/// Temporal self-convergence at fixed N over a refining list of time steps.
inline ConvergenceStudy temporal_order(const Scenario& base, const std::vector<double>& dts) {
    if (dts.size() < 3) throw StudyError("a convergence study needs at least 3 levels");
    std::vector<Scenario> runs;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        if (!(dts[i] > 0.0)) throw StudyError("time steps must be positive");
        if (i > 0 && !(dts[i] < dts[i - 1])) throw StudyError("time steps must strictly decrease");
        if (i > 0) ratios.push_back(dts[i - 1] / dts[i]);
        Scenario s = base;
        s.dt = dts[i];
        s.validate();
        detail::check_final_time_reached(s);
        runs.push_back(s);
    }
    // Ratios pair with successive differences: order i uses ratio between levels i+1 and i+2.
    ratios.erase(ratios.begin());
    return detail::assemble(Axis::time, base, dts, runs, ratios);
}

/// Spatial self-convergence at fixed dt over an increasing list of degrees.
inline ConvergenceStudy spatial_order(const Scenario& base, const std::vector<std::size_t>& degrees) {
    if (degrees.size() < 3) throw StudyError("a convergence study needs at least 3 levels");
    detail::check_final_time_reached(base);
    std::vector<Scenario> runs;
    std::vector<double> levels;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (i > 0 && !(degrees[i] > degrees[i - 1])) throw StudyError("degrees must strictly increase");
        if (i > 0) ratios.push_back(static_cast<double>(degrees[i]) / static_cast<double>(degrees[i - 1]));
        Scenario s = base;
        s.degree = degrees[i];
        s.validate();
        runs.push_back(s);
        levels.push_back(static_cast<double>(degrees[i]));
    }
    ratios.erase(ratios.begin());
    return detail::assemble(Axis::space, base, levels, runs, ratios);
}

/// A (K, H) pair on [-1, 1] for operator comparisons.
struct OperatorTestPair {
    std::string name;
    std::function<double(double)> conductivity;
    std::function<double(double)> potential;
};

inline std::vector<OperatorTestPair> default_test_pairs() {
    return {
        {"constant", [](double) { return 1.5; }, [](double) { return -40.0; }},
        {"smooth", [](double x) { return 2.0 + std::sin(std::numbers::pi * x); },
         [](double x) { return x * x; }},
    };
}

struct OperatorGapRow {
    std::string pair;
    std::size_t degree;
    double gap;    ///< max-norm |spectral - quadrature|
    double scale;  ///< max-norm of the quadrature operator
};

struct OperatorGapTable {
    double delta;
    std::vector<OperatorGapRow> rows;

    std::vector<double> gaps(const std::string& pair) const {
        std::vector<double> out;
        for (const auto& r : rows) {
            if (r.pair == pair) out.push_back(r.gap);
        }
        return out;
    }

    /// Monotone non-increasing gap under refinement, 5% slack on the coarsest pair.
    bool monotone(const std::string& pair) const { return is_monotone_nonincreasing(gaps(pair)); }
};

inline OperatorInputs sample_inputs(const GridPtr& grid, const OperatorTestPair& pair, double delta) {
    return OperatorInputs::make(sample(grid, pair.conductivity), sample(grid, pair.potential), delta);
}

inline OperatorGapTable operator_gap_study(double delta, const std::vector<OperatorTestPair>& pairs,
                                           const std::vector<std::size_t>& degrees,
                                           BetaMode mode = BetaMode::discrete) {
    if (degrees.empty()) throw StudyError("operator gap study needs at least one degree");
    check_horizon(delta);
    OperatorGapTable table{delta, {}};
    for (const auto& pair : pairs) {
        for (std::size_t n : degrees) {
            const GridPtr grid = cached_grid(n);
            const auto in = sample_inputs(grid, pair, delta);
            const GridFunction zero(grid, 0.0);
            const auto spectral = apply_spectral(in, zero, mode);
            const auto quad = apply_quadrature(in, zero);
            table.rows.push_back({pair.name, n, max_norm(detail::difference(spectral, quad).values()),
                                  max_norm(quad.values())});
        }
    }
    return table;
}

}  // namespace peri_richards
