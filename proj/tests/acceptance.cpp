// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
//
// Criteria are evaluated as stated; a failing criterion is reported, never relaxed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "peri_richards.hpp"

using namespace peri_richards;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double v) { return format_sci(v, 3); }

// ---------------------------------------------------------------------------------------------
// 1. Transform roundtrip and discrete orthogonality.
Outcome transforms() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double roundtrip = 0.0;
    double ortho = 0.0;
    for (std::size_t n : {8, 64, 256, 512}) {
        const auto g = cached_grid(n);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> c(g->size());
            for (double& v : c) v = dist(rng);
            const ChebCoeffs coeffs(g, c);
            const auto back = forward_transform(inverse_transform(coeffs));
            for (std::size_t k = 0; k < c.size(); ++k) roundtrip = std::max(roundtrip, std::abs(back[k] - c[k]));
        }
        for (std::size_t j = 0; j + 1 <= n; ++j) {
            std::vector<double> tj(g->basis_row(j).begin(), g->basis_row(j).end());
            const auto rec = forward_transform(GridFunction(g, std::move(tj)));
            for (std::size_t k = 0; k <= n; ++k) {
                ortho = std::max(ortho, std::abs(rec[k] - (k == j ? 1.0 : 0.0)));
            }
        }
    }
    return {roundtrip <= 1e-12 && ortho <= 1e-12,
            "roundtrip max err " + sci(roundtrip) + ", orthogonality max err " + sci(ortho) + " (<= 1e-12)"};
}

// 2. Closed-form kernel integral vs adaptive quadrature.
Outcome kernel_integral() {
    double worst = 0.0;
    for (double delta : {0.05, 0.15, 0.5, 0.9}) worst = std::max(worst, std::abs(beta(delta) - beta_by_quadrature(delta)));
    return {worst <= 1e-8, "max |beta - quadrature| " + sci(worst) + " (<= 1e-8)"};
}

// 3. Constant potential, zero source: both operator paths vanish.
Outcome null_case() {
    double worst = 0.0;
    for (std::size_t n : {16, 64, 256}) {
        const auto g = cached_grid(n);
        const auto K = sample(g, [](double x) { return 2.0 + std::sin(std::numbers::pi * x); });
        const GridFunction H(g, -40.0);
        const auto in = OperatorInputs::make(K, H, 0.15);
        const GridFunction zero(g, 0.0);
        const double scale = max_norm(in.flux.values());
        worst = std::max(worst, max_norm(apply_spectral(in, zero).values()) / scale);
        worst = std::max(worst, max_norm(apply_quadrature(in, zero).values()) / scale);
    }
    return {worst <= 1e-10, "max relative output " + sci(worst) + " (<= 1e-10)"};
}

// 4. Spectral-vs-quadrature gap for the smooth pair.
constexpr double pinned_gap_n256 = 0.46811941388338796;

Outcome operator_oracle() {
    const auto pairs = default_test_pairs();
    const OperatorTestPair& smooth = pairs.at(1);
    const auto table = operator_gap_study(0.15, {smooth}, {32, 64, 128, 256});
    const auto gaps = table.gaps(smooth.name);
    const bool monotone = table.monotone(smooth.name);
    const bool pinned = std::abs(gaps.back() - pinned_gap_n256) <= 0.10 * pinned_gap_n256;
    std::ostringstream os;
    os << "gaps N=32,64,128,256: ";
    for (std::size_t i = 0; i < gaps.size(); ++i) os << (i ? ", " : "") << format_sci(gaps[i], 6);
    os << "; monotone " << (monotone ? "yes" : "no") << "; N=256 within 10% of pinned "
       << format_sci(pinned_gap_n256, 6) << ": " << (pinned ? "yes" : "no");
    return {monotone && pinned, os.str()};
}

// 5. Temporal order, Example 2 at N = 64.
Outcome temporal() {
    auto s = scenarios::example2();
    s.degree = 64;
    const auto st = temporal_order(s, {0.24, 0.12, 0.06, 0.03});
    bool ok = !st.observed_orders_max.empty();
    std::ostringstream os;
    os << "max-norm orders ";
    for (std::size_t i = 0; i < st.observed_orders_max.size(); ++i) {
        const double p = st.observed_orders_max[i];
        ok = ok && p >= 0.8 && p <= 1.2;
        os << (i ? ", " : "") << format_fixed(p, 3);
    }
    os << " (in [0.8, 1.2])";
    return {ok, os.str()};
}

// 6. Spatial order: Example 1 order, Example 2 error decay.
constexpr double spatial_dt = 0.0075;

Outcome spatial() {
    auto s1 = scenarios::example1();
    s1.dt = spatial_dt;
    const auto st1 = spatial_order(s1, {16, 32, 64, 128});
    double min_order = std::numeric_limits<double>::infinity();
    for (double p : st1.observed_orders_max) min_order = std::min(min_order, p);

    auto s2 = scenarios::example2();
    s2.dt = spatial_dt;
    const auto st2 = spatial_order(s2, {16, 32, 64, 128});
    const double ratio = st2.reference_error_max[0] / st2.reference_error_max[2];

    std::ostringstream os;
    os << "example1 max-norm orders ";
    for (std::size_t i = 0; i < st1.observed_orders_max.size(); ++i) {
        os << (i ? ", " : "") << format_fixed(st1.observed_orders_max[i], 3);
    }
    os << " (>= 1.7); example2 err(16)/err(64) = " << format_fixed(ratio, 2) << " (>= 1e3)";
    return {min_order >= 1.7 && ratio >= 1e3, os.str()};
}

// 7. Both presets complete with finite profiles and exact boundary ramps.
Outcome scenario_reproduction() {
    bool ok = true;
    std::ostringstream os;
    for (const auto& name : {"example1", "example2"}) {
        const auto s = scenarios::by_name(name);
        std::vector<double> times;
        for (long n = 0; n <= s.step_count(); ++n) times.push_back(static_cast<double>(n) * s.dt);
        const auto rec = run(s, times);
        bool finite = rec.complete;
        bool ramps = rec.complete && rec.snapshots.size() == times.size();
        for (const auto& snap : rec.snapshots) {
            for (double v : snap.theta.values()) finite = finite && std::isfinite(v);
            const double t = static_cast<double>(snap.step_index) * s.dt;
            ramps = ramps && snap.theta[0] == s.bc_top.at(t, s.final_time) &&
                    snap.theta[s.degree] == s.bc_bottom.at(t, s.final_time);
        }
        const auto& last = rec.snapshots.back().theta;
        ramps = ramps && last[0] == s.bc_top.end && last[s.degree] == s.bc_bottom.end;
        ok = ok && rec.steps == 1000 && finite && ramps;
        os << name << ": " << rec.steps << " steps, finite " << (finite ? "yes" : "no") << ", ramps exact "
           << (ramps ? "yes" : "no") << "; ";
    }
    const double left = 0.1386 + 0.0594 * (0.0 + 1.0);
    const double right = 0.2234 + 0.0254 * (0.0 - 1.0);
    const double kink = std::max({std::abs(left - 0.1980), std::abs(right - 0.1980),
                                  std::abs(KinkedLinearProfile{}(0.0) - 0.1980)});
    ok = ok && kink <= 1e-12;
    os << "kink continuity err " << sci(kink);
    return {ok, os.str()};
}

// 8. Stability functional bounded on [T/2, T]; maximum principle respected.
Outcome monitors() {
    bool ok = true;
    std::ostringstream os;
    for (const auto& name : {"example1", "example2"}) {
        const auto s = scenarios::by_name(name);
        const auto rec = run(s, {s.final_time});
        if (!rec.complete) return {false, std::string(name) + " did not complete: " + rec.failure};
        const long half = rec.steps / 2;
        const double f_half = stability_functional(rec, half);
        double f_max = 0.0;
        for (long m = half; m <= rec.steps; ++m) f_max = std::max(f_max, stability_functional(rec, m));
        const bool bounded = f_max <= 2.0 * f_half;
        const bool principle = rec.max_principle_violations.empty();
        ok = ok && bounded && principle;
        os << name << ": F(T/2) " << sci(f_half) << ", sup F on [T/2,T] " << sci(f_max) << ", violations "
           << rec.max_principle_violations.size();
        for (const auto& v : rec.max_principle_violations) os << " [step " << v.step << "]";
        os << "; ";
    }
    return {ok, os.str()};
}

// 9. Two CLI runs produce byte-identical CSV.
Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "peri_richards_acceptance";
    std::filesystem::create_directories(dir);
    auto run_once = [&](const std::string& file) {
        std::ostringstream out, err;
        const auto path = (dir / file).string();
        const int rc = cli::run_command({"run", "--preset", "example1", "--out", path}, out, err);
        if (rc != 0) return std::string("exit code ") + std::to_string(rc);
        std::ifstream f(path, std::ios::binary);
        std::ostringstream bytes;
        bytes << f.rdbuf();
        return bytes.str();
    };
    const auto a = run_once("first.csv");
    const auto b = run_once("second.csv");
    const bool same = !a.empty() && a == b && a.rfind("z_cm,", 0) == 0;
    return {same, std::to_string(a.size()) + " bytes, identical " + (same ? "yes" : "no")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"1 transform roundtrip and orthogonality", transforms},
        {"2 kernel integral vs quadrature", kernel_integral},
        {"3 operator null case", null_case},
        {"4 operator oracle convergence", operator_oracle},
        {"5 temporal order (example2, N=64)", temporal},
        {"6 spatial order (example1 order, example2 decay)", spatial},
        {"7 scenario reproduction", scenario_reproduction},
        {"8 stability and maximum-principle monitors", monitors},
        {"9 determinism of run --preset example1", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.name << ": " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
