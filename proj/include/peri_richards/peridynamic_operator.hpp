#pragma once

// The nonlocal operator
//
//   L(theta)(z) = int phi_bar(z' - z) (K(z) + K(z'))/2 (H(z') - H(z)) dz'
//
// with the distributed influence function phi(y) = (|y| - 1 + delta)/delta on
// 1 - delta <= |y| <= 1 (zero inside the dead zone) and phi_bar(y) = phi(y)/|y|.
//
// Two discretisations live here: the spectral form, where every kernel integral is replaced
// by the inverse transform of a coefficient-wise product,
//
//   L_h = 1/2 [C(Lambda) + K C(H)] - 1/2 [H C(K) + b Lambda],   Lambda = K H,
//
// and a direct composite-Simpson quadrature of the integral that serves as an oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "peri_richards/chebyshev.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/quadrature.hpp"

namespace peri_richards {

inline void check_horizon(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument("horizon delta = " + std::to_string(delta) + " outside (0, 1)");
    }
}

inline double phi_delta(double delta, double z) {
    check_horizon(delta);
    const double a = std::abs(z);
    return a >= 1.0 - delta ? (a - 1.0 + delta) / delta : 0.0;
}

/// phi_delta(z)/|z|; zero at the origin, which lies inside the dead zone.
inline double phi_bar(double delta, double z) {
    const double p = phi_delta(delta, z);
    return p == 0.0 ? 0.0 : p / std::abs(z);
}

/// Closed form of int_{-1}^{1} phi_bar(z) dz.
inline double beta(double delta) {
    check_horizon(delta);
    return 2.0 * (1.0 + (1.0 - delta) / delta * std::log1p(-delta));
}

/// Kernel integral by adaptive quadrature, split at the kinks; independent check on beta().
inline double beta_by_quadrature(double delta, double tol = 1e-13) {
    check_horizon(delta);
    const double edge = 1.0 - delta;
    return adaptive_integral([delta](double z) { return phi_bar(delta, z); },
                             {-1.0, -edge, 0.0, edge, 1.0}, tol);
}

/// Which constant multiplies Lambda in the last term of the spectral operator.
enum class BetaMode {
    /// Zeroth discrete coefficient of the sampled kernel, i.e. C(1). Makes the operator vanish
    /// identically for constant potential.
    discrete,
    /// The exact kernel integral beta(delta).
    closed_form,
};

/// Discrete Chebyshev coefficients of phi_bar sampled on a grid.
struct KernelSpectrum {
    double delta;
    ChebCoeffs coeffs;

    double beta_discrete() const noexcept { return coeffs[0]; }
};

inline KernelSpectrum make_kernel_spectrum(const GridPtr& grid, double delta) {
    check_horizon(delta);
    return {delta, forward_transform(sample(grid, [delta](double z) { return phi_bar(delta, z); }))};
}

/// Kernel coefficients keyed by (N, delta); loop-invariant across time steps.
inline std::shared_ptr<const KernelSpectrum> cached_kernel(const GridPtr& grid, double delta) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, double>, std::shared_ptr<const KernelSpectrum>> cache;
    const auto key = std::make_pair(grid->degree(), delta);
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto spectrum = std::make_shared<const KernelSpectrum>(make_kernel_spectrum(grid, delta));
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(spectrum)).first->second;
}

/// Nodal conductivity, potential and their product on a shared grid.
struct OperatorInputs {
    GridFunction conductivity;  ///< K [cm/s]
    GridFunction potential;     ///< H [cm]
    GridFunction flux;          ///< Lambda = K H
    double delta;

    static OperatorInputs make(GridFunction conductivity, GridFunction potential, double delta) {
        require_same_grid(conductivity.grid(), potential.grid());
        check_horizon(delta);
        std::vector<double> lambda(conductivity.size());
        for (std::size_t h = 0; h < lambda.size(); ++h) lambda[h] = conductivity[h] * potential[h];
        GridFunction flux(conductivity.grid(), std::move(lambda));
        return {std::move(conductivity), std::move(potential), std::move(flux), delta};
    }

    const GridPtr& grid() const noexcept { return conductivity.grid(); }

    void validate() const {
        require_same_grid(conductivity.grid(), potential.grid());
        require_same_grid(conductivity.grid(), flux.grid());
        check_horizon(delta);
    }
};

namespace detail {

// inverse_transform(kernel_hat .* forward_transform(f))
inline std::vector<double> kernel_product(const KernelSpectrum& kernel, const GridFunction& f) {
    const ChebCoeffs fc = forward_transform(f);
    std::vector<double> prod(fc.size());
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = kernel.coeffs[k] * fc[k];
    const GridFunction back = inverse_transform(ChebCoeffs(f.grid(), std::move(prod)));
    return {back.values().begin(), back.values().end()};
}

inline void require_source_grid(const OperatorInputs& in, const GridFunction& source) {
    in.validate();
    require_same_grid(in.grid(), source.grid());
}

}  // namespace detail

/// Spectral nonlocal operator without the source term.
inline GridFunction spectral_operator(const OperatorInputs& in, BetaMode mode = BetaMode::discrete) {
    in.validate();
    const auto kernel = cached_kernel(in.grid(), in.delta);
    const double b = mode == BetaMode::discrete ? kernel->beta_discrete() : beta(in.delta);

    const auto c_lambda = detail::kernel_product(*kernel, in.flux);
    const auto c_h = detail::kernel_product(*kernel, in.potential);
    const auto c_k = detail::kernel_product(*kernel, in.conductivity);

    std::vector<double> out(in.flux.size());
    for (std::size_t h = 0; h < out.size(); ++h) {
        const double K = in.conductivity[h];
        const double H = in.potential[h];
        out[h] = 0.5 * (c_lambda[h] + K * c_h[h]) - 0.5 * (H * c_k[h] + b * in.flux[h]);
    }
    return GridFunction(in.grid(), std::move(out));
}

inline GridFunction apply_spectral(const OperatorInputs& in, const GridFunction& source,
                                   BetaMode mode = BetaMode::discrete) {
    detail::require_source_grid(in, source);
    const GridFunction l = spectral_operator(in, mode);
    std::vector<double> out(l.size());
    for (std::size_t h = 0; h < out.size(); ++h) out[h] = l[h] + source[h];
    return GridFunction(in.grid(), std::move(out));
}

/// Direct quadrature of the nonlocal integral at every node plus the source.
///
/// The integral over [-1, 1] is split wherever the kernel is not smooth (|z' - z_h| equal to
/// 1 - delta or 1) and each piece gets a share of at least `panels_per_degree * N` Simpson panels.
/// K and H between nodes come from the Chebyshev interpolant of the nodal data.
inline GridFunction apply_quadrature(const OperatorInputs& in, const GridFunction& source,
                                     std::size_t panels_per_degree = 4) {
    detail::require_source_grid(in, source);
    const ChebGrid& g = *in.grid();
    const auto z = g.nodes();
    const double delta = in.delta;
    const double edge = 1.0 - delta;
    const double total_panels = static_cast<double>(std::max<std::size_t>(panels_per_degree, 4) * g.degree());

    std::vector<double> out(g.size());
    for (std::size_t h = 0; h < g.size(); ++h) {
        const double zh = z[h];
        const double Kh = in.conductivity[h];
        const double Hh = in.potential[h];
        auto integrand = [&](double zp) {
            const double y = zp - zh;
            if (std::abs(y) > 1.0) return 0.0;
            const double kernel = phi_bar(delta, y);
            if (kernel == 0.0) return 0.0;
            const double K = interpolate(in.conductivity, zp);
            const double H = interpolate(in.potential, zp);
            return kernel * 0.5 * (Kh + K) * (H - Hh);
        };

        std::vector<double> cuts{-1.0, 1.0};
        for (double c : {zh - 1.0, zh - edge, zh + edge, zh + 1.0}) {
            if (c > -1.0 && c < 1.0) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());

        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i];
            const double b = cuts[i + 1];
            if (b - a <= 0.0) continue;
            const auto panels = static_cast<std::size_t>(std::ceil(total_panels * (b - a) / 2.0));
            // Evaluate strictly inside the piece so the kernel jump at |y| = 1 is never sampled
            // from the wrong side.
            const double eps = 1e-15 * (1.0 + std::abs(a) + std::abs(b));
            acc += composite_simpson(
                [&](double x) { return integrand(std::clamp(x, a + eps, b - eps)); }, a, b, panels);
        }
        out[h] = acc + source[h];
    }
    return GridFunction(in.grid(), std::move(out));
}

}  // namespace peri_richards
