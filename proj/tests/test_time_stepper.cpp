#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "peri_richards/errors.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/time_stepper.hpp"

using namespace peri_richards;
using Catch::Approx;

namespace {

Scenario small_example(Scenario s, std::size_t degree = 24, double final_time = 6.0) {
    s.degree = degree;
    s.final_time = final_time;
    return s;
}

double interior_max_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t h = 1; h + 1 < a.size(); ++h) m = std::max(m, std::abs(a[h] - b[h]));
    return m;
}

}  // namespace

TEST_CASE("coordinate map sends the column onto [-1, 1] with the surface at +1", "[scenario]") {
    const auto s = scenarios::example1();
    CHECK(coordinate_map(s, 0.0) == 1.0);
    CHECK(coordinate_map(s, 30.0) == -1.0);
    CHECK(coordinate_map(s, 15.0) == 0.0);
    CHECK(coordinate_map(s, 7.5) == 0.5);
    for (double z : {0.0, 3.3, 12.0, 29.9}) CHECK(physical_depth(s, coordinate_map(s, z)) == Approx(z));
    CHECK_THROWS_AS(coordinate_map(s, -0.1), InvalidArgument);
    CHECK_THROWS_AS(coordinate_map(s, 30.5), InvalidArgument);
}

TEST_CASE("preset initial profiles", "[scenario]") {
    const KinkedLinearProfile kinked;
    CHECK(std::abs(kinked(0.0) - 0.1980) <= 1e-12);
    CHECK(std::abs((0.1386 + 0.0594 * (0.0 + 1.0)) - 0.1980) <= 1e-12);
    CHECK(std::abs((0.2234 + 0.0254 * (0.0 - 1.0)) - 0.1980) <= 1e-12);
    CHECK(kinked(-1.0) == Approx(0.1386));
    CHECK(kinked(1.0) == Approx(0.2234));
    const CosineProfile cosine;
    CHECK(cosine(-1.0) == Approx(0.1298));
    CHECK(cosine(1.0) == Approx(0.2646));
    CHECK(cosine(0.0) == Approx(0.1972));
}

TEST_CASE("ramps interpolate linearly and clamp to [0, T]", "[scenario]") {
    const LinearRamp r{0.2234, 0.1810};
    CHECK(r.at(0.0, 60.0) == 0.2234);
    CHECK(r.at(60.0, 60.0) == 0.1810);
    CHECK(r.at(30.0, 60.0) == Approx(0.2022));
    CHECK(r.at(90.0, 60.0) == 0.1810);
    CHECK(r.at(5.0, 0.0) == 0.2234);
}

TEST_CASE("presets validate and take 1000 steps", "[scenario]") {
    for (const auto& s : {scenarios::example1(), scenarios::example2()}) {
        CHECK_NOTHROW(s.validate());
        CHECK(s.step_count() == 1000);
    }
    CHECK_THROWS_AS(scenarios::by_name("example3"), InvalidArgument);
}

TEST_CASE("scenario validation rejects bad inputs", "[scenario]") {
    auto s = scenarios::example1();
    s.delta = 1.5;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = scenarios::example1();
    s.dt = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = scenarios::example1();
    s.bc_top.start = 0.25;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = scenarios::example1();
    s.ic = PolynomialProfile{{0.1, 0.2}};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("snapshot times map to the nearest step with ties going earlier", "[time_stepper]") {
    const auto s = scenarios::example1();
    CHECK(snapshot_step(s, 0.0) == 0);
    CHECK(snapshot_step(s, 60.0) == 1000);
    CHECK(snapshot_step(s, 15.0) == 250);
    CHECK(snapshot_step(s, 0.09) == 1);
    CHECK(snapshot_step(s, 0.1) == 2);
    CHECK_THROWS_AS(snapshot_step(s, 61.0), InvalidArgument);
}

TEST_CASE("zero operator advances the interior by dt times the projected sink", "[time_stepper]") {
    auto s = small_example(scenarios::example2());
    const auto st0 = initial_state(s);
    const auto st1 = detail::advance(s, st0, GridFunction(st0.theta.grid(), 0.0));
    CHECK(st1.step_index == 1);
    CHECK(st1.t == Approx(s.dt));
    for (std::size_t h = 1; h + 1 < st1.theta.size(); ++h) {
        CHECK(st1.theta[h] == Approx(st0.theta[h] + s.dt * s.effective_sink()).margin(1e-15));
    }
    CHECK(st1.theta[0] == s.bc_top.at(s.dt, s.final_time));
    CHECK(st1.theta[s.degree] == s.bc_bottom.at(s.dt, s.final_time));
}

TEST_CASE("one step matches the hand-assembled update", "[time_stepper]") {
    const auto s = small_example(scenarios::example1());
    const auto st0 = initial_state(s);
    const auto st1 = step(st0, s);

    const auto g = st0.theta.grid();
    const WaterContentClamp clamp;
    std::vector<double> K(g->size()), H(g->size());
    for (std::size_t h = 0; h < g->size(); ++h) {
        const double hm = matric_head(s.soil, clamp.apply(s.soil, h, st0.theta[h]));
        K[h] = hydraulic_conductivity(s.soil, hm);
        H[h] = hm + s.length * (1.0 - g->nodes()[h]) / 2.0;
    }
    const auto in = OperatorInputs::make(GridFunction(g, K), GridFunction(g, H), s.delta);
    const auto rhs = project(apply_spectral(in, GridFunction(g, s.effective_sink())), s.degree);
    for (std::size_t h = 1; h + 1 < g->size(); ++h) {
        CHECK(st1.theta[h] == Approx(st0.theta[h] + s.dt * rhs[h]).epsilon(1e-14));
    }
}

TEST_CASE("initial state is the projected profile with pinned endpoints", "[time_stepper]") {
    const auto s = small_example(scenarios::example2());
    const auto st = initial_state(s);
    CHECK(st.step_index == 0);
    CHECK(st.theta[0] == 0.2646);
    CHECK(st.theta[s.degree] == 0.1298);
    for (std::size_t h = 0; h < st.theta.size(); ++h) {
        CHECK(st.theta[h] == Approx(CosineProfile{}(st.theta.grid()->nodes()[h])).margin(1e-14));
    }
}

TEST_CASE("zero final time returns the initial state without stepping", "[time_stepper]") {
    auto s = small_example(scenarios::example1());
    s.final_time = 0.0;
    const auto rec = run(s, {0.0});
    CHECK(rec.complete);
    CHECK(rec.steps == 0);
    REQUIRE(rec.snapshots.size() == 1);
    const auto st = initial_state(s);
    for (std::size_t h = 0; h < st.theta.size(); ++h) CHECK(rec.snapshots[0].theta[h] == st.theta[h]);
    CHECK_THROWS_AS(step(st, s), InvalidArgument);
}

TEST_CASE("boundary nodes follow the ramps exactly at every snapshot", "[time_stepper]") {
    const auto s = small_example(scenarios::example1(), 24, 60.0);
    const auto rec = run(s, {0.0, 12.0, 30.0, 47.94, 60.0});
    REQUIRE(rec.complete);
    REQUIRE(rec.snapshots.size() == 5);
    for (const auto& snap : rec.snapshots) {
        const double t = static_cast<double>(snap.step_index) * s.dt;
        CHECK(snap.theta[0] == s.bc_top.at(t, s.final_time));
        CHECK(snap.theta[s.degree] == s.bc_bottom.at(t, s.final_time));
    }
    CHECK(rec.snapshots.back().theta[0] == 0.1810);
    CHECK(rec.snapshots.back().theta[s.degree] == 0.1174);
}

TEST_CASE("runs are bitwise deterministic", "[time_stepper]") {
    const auto s = small_example(scenarios::example2(), 32, 6.0);
    const auto a = run(s, {6.0});
    const auto b = run(s, {6.0});
    REQUIRE(a.complete);
    for (std::size_t h = 0; h < a.snapshots[0].theta.size(); ++h) {
        CHECK(a.snapshots[0].theta[h] == b.snapshots[0].theta[h]);
    }
    CHECK(a.stability_series == b.stability_series);
}

TEST_CASE("one-step local error shrinks quadratically in dt", "[time_stepper]") {
    auto s = small_example(scenarios::example2(), 24, 60.0);
    auto local_gap = [&](double dt) {
        Scenario coarse = s;
        coarse.dt = dt;
        Scenario fine = s;
        fine.dt = dt / 2;
        // The ramps are linear, so both paths pin the same boundary values at t = dt.
        const auto one = step(initial_state(coarse), coarse);
        const auto two = step(step(initial_state(fine), fine), fine);
        return interior_max_diff(one.theta, two.theta);
    };
    const double e1 = local_gap(0.24);
    const double e2 = local_gap(0.12);
    const double e3 = local_gap(0.06);
    CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
    CHECK(e2 / e3 == Approx(4.0).epsilon(0.1));
}

TEST_CASE("stability functional accumulates the documented terms", "[time_stepper][monitors]") {
    const auto s = small_example(scenarios::example1(), 20, 0.18);
    const auto rec = run(s, {0.18});
    REQUIRE(rec.complete);
    REQUIRE(rec.steps == 3);
    REQUIRE(rec.stability_series.size() == 3);

    auto st = initial_state(s);
    double increments = 0.0, energy = 0.0;
    for (long m = 1; m <= 3; ++m) {
        const auto next = step(st, s);
        std::vector<double> d(next.theta.size());
        for (std::size_t h = 0; h < d.size(); ++h) d[h] = next.theta[h] - st.theta[h];
        const double inc = weighted_norm(GridFunction(next.theta.grid(), d));
        const double l = weighted_norm(nonlocal_term(s, next.theta));
        const double th = weighted_norm(next.theta);
        increments += inc * inc;
        energy += s.dt * l * l;
        CHECK(stability_functional(rec, m) == Approx(increments + th * th + energy).epsilon(1e-12));
        st = next;
    }
    CHECK_THROWS_AS(stability_functional(rec, 0), InvalidArgument);
    CHECK_THROWS_AS(stability_functional(rec, 4), InvalidArgument);
}

TEST_CASE("maximum-principle bound holds and is recorded per step", "[time_stepper][monitors]") {
    const auto s = small_example(scenarios::example1(), 32, 12.0);
    const auto rec = run(s, {12.0});
    REQUIRE(rec.complete);
    REQUIRE(rec.max_principle_series.size() == static_cast<std::size_t>(rec.steps));
    CHECK(rec.max_principle_violations.empty());
    for (const auto& sample : rec.max_principle_series) CHECK(sample.max_theta <= sample.bound);
    const auto bound = MaxPrincipleBound::make(s);
    CHECK(bound.data_sup == Approx(0.2234));
    CHECK(max_principle_bound(s, 0.0) == Approx(0.2234 + bound.sink_norm));
}

TEST_CASE("maximum-principle violations carry the step index", "[time_stepper][monitors]") {
    // With the Z/2 scaling the coarse explicit scheme overshoots the data maximum near the top.
    auto s = small_example(scenarios::example1(), 16, 60.0);
    s.sink = 0.0;
    s.jacobian_scaling = true;
    const auto rec = run(s, {60.0});
    REQUIRE(rec.complete);
    REQUIRE_FALSE(rec.max_principle_violations.empty());
    for (const auto& v : rec.max_principle_violations) {
        CHECK(v.step >= 1);
        CHECK(v.max_theta > v.bound);
        CHECK(rec.max_principle_series[static_cast<std::size_t>(v.step - 1)].max_theta == v.max_theta);
    }
}

TEST_CASE("an unscaled sink drives the run out of the admissible range at step 1", "[time_stepper]") {
    auto s = scenarios::example1();
    s.sink_scale = 1.0;
    const auto rec = run(s, {60.0});
    CHECK_FALSE(rec.complete);
    CHECK(rec.failure_step == 1);
    CHECK_FALSE(rec.failure.empty());
}
