#pragma once

// Van Genuchten-Mualem constitutive relations for the unsaturated zone.
//
//   theta(h) = theta_r + (theta_s - theta_r) / (1 + |alpha h|^n)^m,   m = 1 - 1/n
//   K(h)     = K_s * u^(m/2) * (1 - (1 - u)^m)^2,                      u = 1 / (1 + |alpha h|^n)
//
// Matric head is non-positive in the unsaturated zone; theta_s maps to h = 0.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>

#include "peri_richards/errors.hpp"

namespace peri_richards {

struct VanGenuchtenParams {
    double theta_r = 0.0;  ///< residual water content [-]
    double theta_s = 0.0;  ///< saturated water content [-]
    double alpha = 0.0;    ///< [1/cm]
    double n = 0.0;        ///< [-], > 1
    double m = 0.0;        ///< 1 - 1/n
    double K_s = 0.0;      ///< saturated conductivity [cm/s]

    /// Builds a validated parameter set; m is derived from n.
    static VanGenuchtenParams make(double theta_r, double theta_s, double alpha, double n,
                                   double K_s) {
        VanGenuchtenParams p{theta_r, theta_s, alpha, n, 1.0 - 1.0 / n, K_s};
        p.validate();
        return p;
    }

    void validate() const {
        auto fail = [](const std::string& what) { throw InvalidArgument("soil parameters: " + what); };
        if (!(theta_r >= 0.0 && theta_r < theta_s && theta_s <= 1.0)) {
            fail("need 0 <= theta_r < theta_s <= 1");
        }
        if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be positive");
        if (!(n > 1.0) || !std::isfinite(n)) fail("n must exceed 1");
        if (!(K_s > 0.0) || !std::isfinite(K_s)) fail("K_s must be positive");
        if (m != 1.0 - 1.0 / n) fail("m must equal 1 - 1/n");
    }

    double range() const noexcept { return theta_s - theta_r; }

    friend bool operator==(const VanGenuchtenParams&, const VanGenuchtenParams&) = default;
};

namespace soils {

/// Sand used in the first column scenario.
inline VanGenuchtenParams example1_sand() {
    return VanGenuchtenParams::make(0.075, 0.287, 0.036, 1.56, 0.00094);
}

/// Hills Berino loamy fine sand used in the second column scenario.
inline VanGenuchtenParams example2_berino() {
    return VanGenuchtenParams::make(0.0286, 0.3658, 0.028, 2.2390, 0.0063);
}

}  // namespace soils

inline double water_content(const VanGenuchtenParams& p, double h_m) {
    const double s = std::pow(std::abs(p.alpha * h_m), p.n);
    return p.theta_r + p.range() / std::pow(1.0 + s, p.m);
}

inline double hydraulic_conductivity(const VanGenuchtenParams& p, double h_m) {
    const double u = 1.0 / (1.0 + std::pow(std::abs(p.alpha * h_m), p.n));
    // 1 - (1-u)^m loses everything to cancellation when u is tiny; expm1/log1p keep it.
    const double bracket = -std::expm1(p.m * std::log1p(-u));
    return p.K_s * std::pow(u, p.m / 2.0) * bracket * bracket;
}

/// Closed-form inverse of water_content on (theta_r, theta_s].
inline double matric_head(const VanGenuchtenParams& p, double theta) {
    if (!(theta > p.theta_r) || !(theta <= p.theta_s)) {
        std::ostringstream os;
        os.precision(17);
        os << "water content " << theta << " outside (" << p.theta_r << ", " << p.theta_s << "]";
        throw WaterContentRangeError(0, theta, os.str());
    }
    const double se = (theta - p.theta_r) / p.range();
    if (se >= 1.0) return 0.0;
    // Se^(-1/m) - 1 evaluated as expm1 to keep precision near saturation.
    const double t = std::expm1(-std::log(se) / p.m);
    return -std::pow(t, 1.0 / p.n) / p.alpha;
}

inline double hydraulic_potential(double h_m, double z) { return h_m + z; }

/// Clamping policy applied to nodal water contents before inversion.
///
/// Values inside [theta_r + floor, theta_s] pass through; values within `tolerance` outside
/// that band are clamped; anything further out raises WaterContentRangeError naming the node.
struct WaterContentClamp {
    double floor_fraction = 1e-9;
    double tolerance_fraction = 1e-6;

    double apply(const VanGenuchtenParams& p, std::size_t node, double theta) const {
        const double lo = p.theta_r + floor_fraction * p.range();
        const double hi = p.theta_s;
        const double tol = tolerance_fraction * p.range();
        if (!std::isfinite(theta) || theta < lo - tol || theta > hi + tol) {
            std::ostringstream os;
            os.precision(17);
            os << "water content " << theta << " at node " << node << " outside admissible range ["
               << lo << ", " << hi << "]";
            throw WaterContentRangeError(node, theta, os.str());
        }
        if (theta < lo) return lo;
        if (theta > hi) return hi;
        return theta;
    }
};

}  // namespace peri_richards
