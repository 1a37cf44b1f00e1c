#pragma once

// Explicit Euler marching of the projected nonlocal operator:
//
//   theta_n = theta_{n-1} + dt * P_N[ L(theta_{n-1}) + S ],   theta_0 = P_N theta^0,
//
// with the endpoint nodes overwritten by the boundary ramps after every step. The run loop
// also tracks the discrete stability functional and the nonlocal maximum-principle bound.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peri_richards/chebyshev.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/peridynamic_operator.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/soil.hpp"

namespace peri_richards {

struct SolverState {
    double t = 0.0;
    GridFunction theta;
    long step_index = 0;
};

struct Snapshot {
    double requested_time;  ///< time asked for
    long step_index;        ///< step whose state was recorded
    double time;            ///< step_index * dt
    GridFunction theta;
};

struct MaxPrincipleSample {
    double max_theta;
    double bound;
};

struct MaxPrincipleViolation {
    long step;
    double max_theta;
    double bound;
};

struct RunRecord {
    std::vector<Snapshot> snapshots;
    std::vector<double> stability_series;                   ///< entry m-1 is the functional at step m
    std::vector<MaxPrincipleSample> max_principle_series;   ///< one per step
    std::vector<MaxPrincipleViolation> max_principle_violations;
    long steps = 0;
    double wall_seconds = 0.0;
    bool complete = false;
    std::string failure;    ///< empty when complete
    long failure_step = -1;
    std::optional<SolverState> final_state;
};

inline GridPtr scenario_grid(const Scenario& s) { return cached_grid(s.degree); }

/// Nodal physical depths z_h = Z (1 - x_h)/2.
inline std::vector<double> physical_nodes(const Scenario& s, const ChebGrid& g) {
    std::vector<double> z(g.size());
    for (std::size_t h = 0; h < z.size(); ++h) z[h] = physical_depth(s, g.nodes()[h]);
    return z;
}

/// L(theta) at the nodes: theta -> h_m -> (K, H = h_m + z) -> spectral operator.
inline GridFunction nonlocal_term(const Scenario& s, const GridFunction& theta) {
    const ChebGrid& g = *theta.grid();
    const auto z = physical_nodes(s, g);
    const WaterContentClamp clamp;
    std::vector<double> K(g.size());
    std::vector<double> H(g.size());
    for (std::size_t h = 0; h < g.size(); ++h) {
        const double th = clamp.apply(s.soil, h, theta[h]);
        const double hm = matric_head(s.soil, th);
        K[h] = hydraulic_conductivity(s.soil, hm);
        H[h] = hydraulic_potential(hm, z[h]);
    }
    auto inputs = OperatorInputs::make(GridFunction(theta.grid(), std::move(K)),
                                       GridFunction(theta.grid(), std::move(H)), s.delta);
    GridFunction l = spectral_operator(inputs, s.beta_mode);
    if (!s.jacobian_scaling) return l;
    std::vector<double> scaled(l.values().begin(), l.values().end());
    for (double& v : scaled) v *= s.length / 2.0;
    return GridFunction(theta.grid(), std::move(scaled));
}

/// theta_0 = P_N theta^0 sampled at the nodes, endpoints pinned to the t = 0 boundary values.
inline SolverState initial_state(const Scenario& s) {
    s.validate();
    const GridPtr grid = scenario_grid(s);
    GridFunction sampled = sample(grid, [&](double x) { return evaluate(s.ic, x); });
    GridFunction projected = project(sampled, grid->degree());
    std::vector<double> v(projected.values().begin(), projected.values().end());
    v.front() = s.bc_top.at(0.0, s.final_time);
    v.back() = s.bc_bottom.at(0.0, s.final_time);
    return {0.0, GridFunction(grid, std::move(v)), 0};
}

namespace detail {

// One explicit update given the operator value at the current state.
inline SolverState advance(const Scenario& s, const SolverState& state, const GridFunction& l) {
    const GridPtr& grid = state.theta.grid();
    const double sink = s.effective_sink();
    std::vector<double> rhs(grid->size());
    for (std::size_t h = 0; h < rhs.size(); ++h) rhs[h] = l[h] + sink;

    const long next = state.step_index + 1;
    for (double r : rhs) {
        if (!std::isfinite(r)) {
            throw InstabilityError(next, "non-finite operator value at step " + std::to_string(next));
        }
    }
    const GridFunction projected = project(GridFunction(grid, std::move(rhs)), grid->degree());

    const double t = static_cast<double>(next) * s.dt;
    std::vector<double> v(grid->size());
    for (std::size_t h = 0; h < v.size(); ++h) v[h] = state.theta[h] + s.dt * projected[h];
    v.front() = s.bc_top.at(t, s.final_time);
    v.back() = s.bc_bottom.at(t, s.final_time);
    for (std::size_t h = 0; h < v.size(); ++h) {
        if (!std::isfinite(v[h])) {
            throw InstabilityError(next, "non-finite water content at node " + std::to_string(h) +
                                             " after step " + std::to_string(next));
        }
    }
    return {t, GridFunction(grid, std::move(v)), next};
}

}  // namespace detail

/// One explicit Euler step from `state`.
inline SolverState step(const SolverState& state, const Scenario& s) {
    if (state.step_index >= s.step_count()) {
        throw InvalidArgument("step " + std::to_string(state.step_index + 1) +
                              " would march past the final time");
    }
    if (state.theta.grid()->degree() != s.degree) {
        throw InvalidArgument("state grid degree does not match the scenario");
    }
    return detail::advance(s, state, nonlocal_term(s, state.theta));
}

/// Time-independent parts of the maximum-principle bound
///   e^{t/2} ||S||_{L2_w} + max{sup theta^0, sup bc_top, sup bc_bottom}.
struct MaxPrincipleBound {
    double sink_norm = 0.0;
    double data_sup = 0.0;

    static MaxPrincipleBound make(const Scenario& s) {
        const GridPtr grid = scenario_grid(s);
        double sup_ic = -std::numeric_limits<double>::infinity();
        for (double x : grid->nodes()) sup_ic = std::max(sup_ic, evaluate(s.ic, x));
        constexpr int dense = 4096;
        for (int i = 0; i <= dense; ++i) {
            sup_ic = std::max(sup_ic, evaluate(s.ic, -1.0 + 2.0 * i / dense));
        }
        return {weighted_norm(GridFunction(grid, s.effective_sink())),
                std::max({sup_ic, s.bc_top.max(), s.bc_bottom.max()})};
    }

    double at(double t) const noexcept { return std::exp(t / 2.0) * sink_norm + data_sup; }
};

inline double max_principle_bound(const Scenario& s, double t) {
    return MaxPrincipleBound::make(s).at(t);
}

/// Value of the stability functional after step m (1-based) of a recorded run.
inline double stability_functional(const RunRecord& record, long m) {
    if (m < 1 || m > static_cast<long>(record.stability_series.size())) {
        throw InvalidArgument("stability functional needs 1 <= m <= " +
                              std::to_string(record.stability_series.size()));
    }
    return record.stability_series[static_cast<std::size_t>(m - 1)];
}

/// Step index recorded for a requested snapshot time: nearest step, ties to the earlier one.
inline long snapshot_step(const Scenario& s, double t) {
    const double tol = 1e-9 * std::max(1.0, s.final_time);
    if (!(t >= -tol && t <= s.final_time + tol)) {
        throw InvalidArgument("snapshot time " + std::to_string(t) + " outside [0, T]");
    }
    const long n = static_cast<long>(std::ceil(t / s.dt - 0.5 - 1e-9));
    return std::clamp(n, 0L, s.step_count());
}

inline RunRecord run(const Scenario& s, std::span<const double> snapshot_times) {
    const auto started = std::chrono::steady_clock::now();
    s.validate();
    const long total = s.step_count();

    std::vector<long> wanted(snapshot_times.size());
    for (std::size_t i = 0; i < wanted.size(); ++i) wanted[i] = snapshot_step(s, snapshot_times[i]);

    RunRecord rec;
    rec.snapshots.reserve(wanted.size());
    rec.stability_series.reserve(static_cast<std::size_t>(total));
    rec.max_principle_series.reserve(static_cast<std::size_t>(total));

    std::vector<std::optional<Snapshot>> slots(wanted.size());
    auto take_snapshots = [&](const SolverState& st) {
        for (std::size_t i = 0; i < wanted.size(); ++i) {
            if (wanted[i] == st.step_index) {
                slots[i] = Snapshot{snapshot_times[i], st.step_index, st.t, st.theta};
            }
        }
    };

    SolverState state = initial_state(s);
    take_snapshots(state);
    const auto bound_of = MaxPrincipleBound::make(s);

    try {
        if (total > 0) {
            GridFunction l = nonlocal_term(s, state.theta);
            double increments = 0.0;
            double operator_energy = 0.0;
            for (long n = 1; n <= total; ++n) {
                SolverState next = detail::advance(s, state, l);

                std::vector<double> diff(next.theta.size());
                for (std::size_t h = 0; h < diff.size(); ++h) diff[h] = next.theta[h] - state.theta[h];
                const double inc = weighted_norm(GridFunction(next.theta.grid(), std::move(diff)));

                l = nonlocal_term(s, next.theta);
                const double ln = weighted_norm(l);
                const double tn = weighted_norm(next.theta);
                increments += inc * inc;
                operator_energy += s.dt * ln * ln;
                rec.stability_series.push_back(increments + tn * tn + operator_energy);

                const auto vals = next.theta.values();
                const double top = *std::max_element(vals.begin(), vals.end());
                const double bound = bound_of.at(next.t);
                rec.max_principle_series.push_back({top, bound});
                if (top > bound) rec.max_principle_violations.push_back({n, top, bound});

                state = std::move(next);
                rec.steps = n;
                take_snapshots(state);
            }
        }
        rec.complete = true;
    } catch (const InstabilityError& e) {
        rec.failure = e.what();
        rec.failure_step = e.step();
    } catch (const WaterContentRangeError& e) {
        rec.failure = e.what();
        rec.failure_step = rec.steps + 1;
    }

    for (auto& slot : slots) {
        if (slot) rec.snapshots.push_back(std::move(*slot));
    }
    rec.final_state = state;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

inline RunRecord run(const Scenario& s, std::initializer_list<double> snapshot_times) {
    return run(s, std::span<const double>(snapshot_times.begin(), snapshot_times.size()));
}

}  // namespace peri_richards
