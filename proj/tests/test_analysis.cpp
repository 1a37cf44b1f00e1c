#include <catch_amalgamated.hpp>

#include <cmath>

#include "peri_richards/analysis.hpp"
#include "peri_richards/errors.hpp"

using namespace peri_richards;
using Catch::Approx;

namespace {

Scenario short_example(std::size_t degree = 16) {
    auto s = scenarios::example2();
    s.degree = degree;
    s.final_time = 0.48;
    return s;
}

}  // namespace

TEST_CASE("monotonicity check allows slack only on the coarsest pair", "[analysis]") {
    CHECK(is_monotone_nonincreasing({1.0, 0.5, 0.25}));
    CHECK(is_monotone_nonincreasing({1.0, 1.04, 0.5}));
    CHECK_FALSE(is_monotone_nonincreasing({1.0, 1.06, 0.5}));
    CHECK_FALSE(is_monotone_nonincreasing({1.0, 0.5, 0.5001}));
    CHECK(is_monotone_nonincreasing({}));
}

TEST_CASE("observed order of an exact power law", "[analysis]") {
    CHECK(detail::observed_order(4.0, 1.0, 2.0) == Approx(2.0));
    CHECK(detail::observed_order(1e-3, 1e-4, 10.0) == Approx(1.0));
    CHECK(std::isnan(detail::observed_order(0.0, 0.0, 2.0)));
}

TEST_CASE("studies need at least three levels", "[analysis]") {
    const auto s = short_example();
    CHECK_THROWS_AS(temporal_order(s, {0.12, 0.06}), StudyError);
    CHECK_THROWS_AS(spatial_order(s, {16, 32}), StudyError);
    CHECK_THROWS_AS(temporal_order(s, {0.06, 0.12, 0.03}), StudyError);
    CHECK_THROWS_AS(spatial_order(s, {16, 16, 32}), StudyError);
}

TEST_CASE("time steps that do not land on T are rejected", "[analysis]") {
    CHECK_THROWS_AS(temporal_order(short_example(), {0.24, 0.1, 0.05}), StudyError);
}

TEST_CASE("temporal study on a short run reports first-order behaviour", "[analysis]") {
    const auto st = temporal_order(short_example(24), {0.24, 0.12, 0.06, 0.03});
    REQUIRE(st.solutions.size() == 4);
    REQUIRE(st.reference_error_max.size() == 3);
    REQUIRE(st.successive_diff_max.size() == 3);
    REQUIRE(st.observed_orders_max.size() == 2);
    CHECK(st.comparison_grid->degree() == 24);
    for (double p : st.observed_orders_max) CHECK(p == Approx(1.0).margin(0.2));
    CHECK(is_monotone_nonincreasing(st.reference_error_max));
}

TEST_CASE("nested-grid comparison of a low-degree polynomial has zero error", "[analysis]") {
    // Nested grids interpolate exactly, so a solution that is itself a polynomial of degree
    // <= the coarsest N must show zero interpolation error.
    const auto coarse = cached_grid(8);
    const auto fine = cached_grid(32);
    const auto f = sample(fine, [](double x) { return 0.2 + 0.01 * x - 0.003 * x * x * x; });
    const auto down = interpolate_to(f, coarse);
    const auto exact = sample(coarse, [](double x) { return 0.2 + 0.01 * x - 0.003 * x * x * x; });
    CHECK(max_norm(detail::difference(down, exact).values()) <= 1e-15);
}

TEST_CASE("spatial study compares on the coarsest grid", "[analysis]") {
    auto s = short_example();
    s.final_time = 0.12;
    const auto st = spatial_order(s, {8, 16, 32});
    CHECK(st.comparison_grid->degree() == 8);
    CHECK(st.levels == std::vector<double>{8, 16, 32});
    CHECK(st.observed_orders_max.size() == 1);
    for (const auto& sol : st.solutions) CHECK(sol.size() == 9);
}

TEST_CASE("operator gap study rejects an empty degree list", "[analysis]") {
    CHECK_THROWS_AS(operator_gap_study(0.15, default_test_pairs(), {}), StudyError);
    CHECK_THROWS_AS(operator_gap_study(1.5, default_test_pairs(), {16}), InvalidArgument);
}

TEST_CASE("operator gap table lists each pair at each degree", "[analysis]") {
    const auto t = operator_gap_study(0.15, default_test_pairs(), {16, 32});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.gaps("constant").size() == 2);
    for (double g : t.gaps("constant")) CHECK(g <= 1e-12);
    for (double g : t.gaps("smooth")) CHECK(g > 0.0);
}
