#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace peri_richards {

/// Composite Simpson rule on `panels` uniform panels (rounded up to an even count).
template <typename F>
double composite_simpson(F&& f, double a, double b, std::size_t panels) {
    if (b <= a) return 0.0;
    panels = std::max<std::size_t>(2, panels + (panels % 2));
    const double h = (b - a) / static_cast<double>(panels);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) {
        const double x = a + h * static_cast<double>(i);
        acc += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
    }
    return acc * h / 3.0;
}

/// Adaptive Gauss-Kronrod (15-point) integral of f over [a, b] split at sorted breakpoints.
template <typename F>
double adaptive_integral(F&& f, std::vector<double> breakpoints, double tol = 1e-13) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, breakpoints[i], breakpoints[i + 1], 20, tol);
    }
    return total;
}

}  // namespace peri_richards
