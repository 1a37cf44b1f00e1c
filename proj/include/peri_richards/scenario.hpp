#pragma once

// Column scenarios: physical column [0, Z] cm mapped affinely onto x in [-1, 1] by
// x = (Z - 2z)/Z, so the top of the column (z = 0) sits on node 0 (x = +1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "peri_richards/chebyshev.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/peridynamic_operator.hpp"
#include "peri_richards/soil.hpp"

namespace peri_richards {

/// theta(t) = start (1 - t/T) + end t/T, held at `end` past T.
struct LinearRamp {
    double start = 0.0;
    double end = 0.0;

    double at(double t, double final_time) const noexcept {
        if (final_time <= 0.0) return start;
        const double s = std::clamp(t / final_time, 0.0, 1.0);
        return start * (1.0 - s) + end * s;
    }
    double max() const noexcept { return std::max(start, end); }

    friend bool operator==(const LinearRamp&, const LinearRamp&) = default;
};

/// Piecewise-linear profile with a slope change at x = 0 (first column scenario).
struct KinkedLinearProfile {
    double operator()(double x) const noexcept {
        return x <= 0.0 ? 0.1386 + 0.0594 * (x + 1.0) : 0.2234 + 0.0254 * (x - 1.0);
    }
    friend bool operator==(const KinkedLinearProfile&, const KinkedLinearProfile&) = default;
};

/// Half-period cosine profile (second column scenario).
struct CosineProfile {
    double operator()(double x) const noexcept {
        return -0.0674 * std::cos((x + 1.0) / 2.0 * std::numbers::pi) + 0.1972;
    }
    friend bool operator==(const CosineProfile&, const CosineProfile&) = default;
};

/// sum_j coeffs[j] x^j.
struct PolynomialProfile {
    std::vector<double> coeffs;

    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * x + coeffs[j];
        return acc;
    }
    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    friend bool operator==(const PolynomialProfile&, const PolynomialProfile&) = default;
};

/// Piecewise-linear interpolation of tabulated (x, theta) pairs covering [-1, 1].
struct TableProfile {
    std::vector<double> x;
    std::vector<double> theta;

    double operator()(double xq) const {
        auto it = std::upper_bound(x.begin(), x.end(), xq);
        if (it == x.begin()) return theta.front();
        if (it == x.end()) return theta.back();
        const auto i = static_cast<std::size_t>(it - x.begin());
        const double s = (xq - x[i - 1]) / (x[i] - x[i - 1]);
        return theta[i - 1] + s * (theta[i] - theta[i - 1]);
    }

    void validate() const {
        if (x.size() < 2 || x.size() != theta.size()) {
            throw InvalidArgument("initial profile table needs >= 2 matching (x, theta) pairs");
        }
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (!(x[i] > x[i - 1])) throw InvalidArgument("initial profile table x must increase");
        }
        if (x.front() > -1.0 || x.back() < 1.0) {
            throw InvalidArgument("initial profile table must cover [-1, 1]");
        }
    }
    friend bool operator==(const TableProfile&, const TableProfile&) = default;
};

using InitialProfile =
    std::variant<KinkedLinearProfile, CosineProfile, PolynomialProfile, TableProfile>;

inline double evaluate(const InitialProfile& ic, double x) {
    return std::visit([x](const auto& p) { return p(x); }, ic);
}

inline std::string profile_kind(const InitialProfile& ic) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, KinkedLinearProfile>) return "example1_kinked";
            else if constexpr (std::is_same_v<T, CosineProfile>) return "example2_cosine";
            else if constexpr (std::is_same_v<T, PolynomialProfile>) return "polynomial";
            else return "table";
        },
        ic);
}

struct Scenario {
    double length = 30.0;      ///< Z [cm]
    double final_time = 60.0;  ///< T [s]
    std::size_t degree = 100;  ///< N
    double dt = 0.06;          ///< [s]
    double delta = 0.15;       ///< horizon on the mapped interval
    VanGenuchtenParams soil;
    double sink = 0.0;         ///< S as written in the scenario
    double sink_scale = 1.0;   ///< multiplier applied to `sink` before it enters the state equation
    InitialProfile ic = KinkedLinearProfile{};
    LinearRamp bc_top;         ///< theta at z = 0 (x = +1)
    LinearRamp bc_bottom;      ///< theta at z = Z (x = -1)
    bool jacobian_scaling = false;  ///< multiply L by Z/2
    BetaMode beta_mode = BetaMode::discrete;

    double effective_sink() const noexcept { return sink * sink_scale; }

    /// ceil(T/dt) with a relative guard so that T = 60, dt = 0.06 gives 1000 steps.
    long step_count() const {
        if (final_time <= 0.0) return 0;
        return static_cast<long>(std::ceil(final_time / dt * (1.0 - 1e-12)));
    }

    void validate() const {
        auto fail = [](const std::string& what) { throw InvalidArgument("scenario: " + what); };
        if (!(length > 0.0) || !std::isfinite(length)) fail("length Z must be positive");
        if (!(final_time >= 0.0) || !std::isfinite(final_time)) fail("final time T must be >= 0");
        if (!(dt > 0.0) || !std::isfinite(dt)) fail("time step dt must be positive");
        if (degree < 2) fail("degree N must be >= 2");
        check_horizon(delta);
        soil.validate();
        if (!std::isfinite(sink) || !std::isfinite(sink_scale)) fail("sink must be finite");
        if (const auto* poly = std::get_if<PolynomialProfile>(&ic)) {
            if (poly->coeffs.empty()) fail("polynomial initial profile needs coefficients");
            if (poly->degree() > degree) fail("polynomial initial profile degree exceeds N");
        }
        if (const auto* table = std::get_if<TableProfile>(&ic)) table->validate();
        constexpr double compat = 1e-12;
        if (std::abs(evaluate(ic, 1.0) - bc_top.start) > compat) {
            fail("initial profile at the top (x = 1) does not match bc_top at t = 0");
        }
        if (std::abs(evaluate(ic, -1.0) - bc_bottom.start) > compat) {
            fail("initial profile at the bottom (x = -1) does not match bc_bottom at t = 0");
        }
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Physical depth z in [0, Z] to the mapped coordinate x = (Z - 2z)/Z.
inline double coordinate_map(const Scenario& s, double z_physical) {
    const double tol = 1e-12 * s.length;
    if (!(z_physical >= -tol && z_physical <= s.length + tol)) {
        throw InvalidArgument("depth " + std::to_string(z_physical) + " cm outside [0, " +
                              std::to_string(s.length) + "]");
    }
    return (s.length - 2.0 * z_physical) / s.length;
}

/// Inverse of coordinate_map.
inline double physical_depth(const Scenario& s, double x) noexcept { return s.length * (1.0 - x) / 2.0; }

namespace scenarios {

/// Sand column with a kinked initial profile.
inline Scenario example1() {
    Scenario s;
    s.length = 30.0;
    s.final_time = 60.0;
    s.degree = 100;
    s.dt = 0.06;
    s.delta = 0.15;
    s.soil = soils::example1_sand();
    s.sink = -700.0;
    s.sink_scale = 1e-6;
    s.ic = KinkedLinearProfile{};
    s.bc_top = {0.2234, 0.1810};
    s.bc_bottom = {0.1386, 0.1174};
    return s;
}

/// Loamy fine sand column with a smooth cosine initial profile.
inline Scenario example2() {
    Scenario s;
    s.length = 30.0;
    s.final_time = 60.0;
    s.degree = 100;
    s.dt = 0.06;
    s.delta = 0.15;
    s.soil = soils::example2_berino();
    s.sink = -1000.0;
    s.sink_scale = 1e-6;
    s.ic = CosineProfile{};
    s.bc_top = {0.2646, 0.1972};
    s.bc_bottom = {0.1298, 0.0960};
    return s;
}

inline Scenario by_name(const std::string& name) {
    if (name == "example1") return example1();
    if (name == "example2") return example2();
    throw InvalidArgument("unknown preset '" + name + "' (expected example1 or example2)");
}

}  // namespace scenarios

}  // namespace peri_richards
