#pragma once

// Chebyshev-Gauss-Lobatto grids and the discrete Chebyshev transform pair.
//
// Nodes are ordered z_h = cos(h*pi/N), h = 0..N, so node 0 is +1 and node N is -1.
// The discrete coefficients are
//
//   c_k = (1/gamma_k) * sum_h f(z_h) T_k(z_h) w_h
//
// with w_h = pi/(2N) at the endpoints and pi/N elsewhere, gamma_k = pi at k = 0, N and
// pi/2 elsewhere. Transforms are direct O(N^2) sums over a cached basis table.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peri_richards/errors.hpp"

namespace peri_richards {

/// T_k(x) by the three-term recurrence T_{k+1} = 2x T_k - T_{k-1}.
inline double chebyshev_t(std::size_t k, double x) {
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (std::size_t j = 1; j < k; ++j) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

class ChebGrid {
public:
    explicit ChebGrid(std::size_t degree) : degree_(degree) {
        if (degree < 2) {
            throw InvalidArgument("invalid degree " + std::to_string(degree) +
                                  ": Chebyshev grid needs N >= 2");
        }
        const std::size_t n = degree_ + 1;
        const double pi = std::numbers::pi;
        const double nd = static_cast<double>(degree_);

        nodes_.resize(n);
        quad_weights_.resize(n);
        normalizers_.resize(n);
        for (std::size_t h = 0; h < n; ++h) {
            nodes_[h] = node_value(h);
            const bool end = (h == 0 || h == degree_);
            quad_weights_[h] = end ? pi / (2.0 * nd) : pi / nd;
            normalizers_[h] = end ? pi : pi / 2.0;
        }

        // T_k(z_h) = cos(k h pi / N); the table is symmetric in (k, h). Reducing k*h modulo
        // 2N keeps the cosine argument in [0, 2pi) so large products stay accurate.
        basis_.resize(n * n);
        const std::size_t period = 2 * degree_;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t h = k; h < n; ++h) {
                const double v = reduced_cos((k * h) % period);
                basis_[k * n + h] = v;
                basis_[h * n + k] = v;
            }
        }
    }

    std::size_t degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return degree_ + 1; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> quad_weights() const noexcept { return quad_weights_; }
    std::span<const double> normalizers() const noexcept { return normalizers_; }

    /// T_k(z_h).
    double basis(std::size_t k, std::size_t h) const noexcept { return basis_[k * size() + h]; }

    /// Row k of the basis table, i.e. T_k at every node.
    std::span<const double> basis_row(std::size_t k) const noexcept {
        return std::span<const double>(basis_).subspan(k * size(), size());
    }

private:
    // cos(j pi / N) for j in [0, 2N), symmetrised so that cos(pi/2) is exactly zero and
    // nodes are exactly antisymmetric about the midpoint.
    double reduced_cos(std::size_t j) const {
        const std::size_t period = 2 * degree_;
        if (j > degree_) j = period - j;  // cos is even about pi
        if (2 * j == degree_) return 0.0;
        if (2 * j > degree_) return -reduced_cos(degree_ - j);
        return std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(degree_));
    }

    double node_value(std::size_t h) const { return reduced_cos(h); }

    std::size_t degree_;
    std::vector<double> nodes_;
    std::vector<double> quad_weights_;
    std::vector<double> normalizers_;
    std::vector<double> basis_;
};

using GridPtr = std::shared_ptr<const ChebGrid>;

inline GridPtr make_grid(std::size_t degree) { return std::make_shared<const ChebGrid>(degree); }

/// Process-wide grid cache keyed by degree. Grids are immutable, so sharing is free.
inline GridPtr cached_grid(std::size_t degree) {
    static std::mutex mutex;
    static std::map<std::size_t, GridPtr> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(degree);
    if (it != cache.end()) return it->second;
    auto grid = make_grid(degree);
    cache.emplace(degree, grid);
    return grid;
}

namespace detail {

inline void check_conforming(const GridPtr& grid, std::size_t length, const char* what) {
    if (!grid) throw InvalidArgument(std::string(what) + " has no grid");
    if (length != grid->size()) {
        throw InvalidArgument(std::string(what) + " has " + std::to_string(length) +
                              " entries, grid needs " + std::to_string(grid->size()));
    }
}

inline void check_finite(std::span<const double> v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw InvalidArgument(std::string(what) + " entry " + std::to_string(i) +
                                  " is not finite");
        }
    }
}

}  // namespace detail

/// Nodal samples on a CGL grid.
class GridFunction {
public:
    GridFunction(GridPtr grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        detail::check_conforming(grid_, values_.size(), "grid function");
        detail::check_finite(values_, "grid function");
    }

    /// Constant function.
    GridFunction(GridPtr grid, double value)
        : GridFunction(grid, std::vector<double>(grid ? grid->size() : 0, value)) {}

    const GridPtr& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t h) const noexcept { return values_[h]; }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Discrete Chebyshev coefficients on a CGL grid.
class ChebCoeffs {
public:
    ChebCoeffs(GridPtr grid, std::vector<double> coeffs)
        : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
        detail::check_conforming(grid_, coeffs_.size(), "coefficient vector");
        detail::check_finite(coeffs_, "coefficient vector");
    }

    const GridPtr& grid() const noexcept { return grid_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    double operator[](std::size_t k) const noexcept { return coeffs_[k]; }

private:
    GridPtr grid_;
    std::vector<double> coeffs_;
};

/// Samples a callable at the grid nodes.
template <typename F>
GridFunction sample(const GridPtr& grid, F&& f) {
    std::vector<double> v(grid->size());
    const auto z = grid->nodes();
    for (std::size_t h = 0; h < v.size(); ++h) v[h] = f(z[h]);
    return GridFunction(grid, std::move(v));
}

inline void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a != b && a->degree() != b->degree()) {
        throw InvalidArgument("grid mismatch: degree " + std::to_string(a->degree()) + " vs " +
                              std::to_string(b->degree()));
    }
}

inline ChebCoeffs forward_transform(const GridFunction& f) {
    const ChebGrid& g = *f.grid();
    const std::size_t n = g.size();
    const auto w = g.quad_weights();
    const auto gamma = g.normalizers();

    std::vector<double> fw(n);
    for (std::size_t h = 0; h < n; ++h) fw[h] = f[h] * w[h];

    std::vector<double> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto row = g.basis_row(k);
        double acc = 0.0;
        for (std::size_t h = 0; h < n; ++h) acc += fw[h] * row[h];
        c[k] = acc / gamma[k];
    }
    return ChebCoeffs(f.grid(), std::move(c));
}

inline GridFunction inverse_transform(const ChebCoeffs& c) {
    const ChebGrid& g = *c.grid();
    const std::size_t n = g.size();
    std::vector<double> v(n);
    // Symmetric table: row h holds T_k(z_h) for all k.
    for (std::size_t h = 0; h < n; ++h) {
        const auto row = g.basis_row(h);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += c[k] * row[k];
        v[h] = acc;
    }
    return GridFunction(c.grid(), std::move(v));
}

/// Orthogonal projection onto span{T_0..T_M}: truncate the discrete coefficients above M.
inline GridFunction project(const GridFunction& f, std::size_t max_degree) {
    const std::size_t n = f.grid()->degree();
    if (max_degree > n) {
        throw InvalidArgument("projection degree " + std::to_string(max_degree) +
                              " exceeds grid degree " + std::to_string(n));
    }
    if (max_degree == n) return f;
    const ChebCoeffs c = forward_transform(f);
    std::vector<double> kept(c.coeffs().begin(), c.coeffs().end());
    for (std::size_t k = max_degree + 1; k < kept.size(); ++k) kept[k] = 0.0;
    return inverse_transform(ChebCoeffs(f.grid(), std::move(kept)));
}

/// Evaluates sum_k c_k T_k(x) at an arbitrary x in [-1, 1] (Clenshaw).
inline double evaluate(const ChebCoeffs& c, double x) {
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c[0];
}

/// Value at x of the degree-N interpolant through the nodal data (barycentric form for
/// CGL points: weights (-1)^h, halved at the endpoints).
inline double interpolate(const GridFunction& f, double x) {
    const auto z = f.grid()->nodes();
    const std::size_t n = f.size();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
        const double diff = x - z[h];
        if (diff == 0.0) return f[h];
        double w = (h % 2 == 0) ? 1.0 : -1.0;
        if (h == 0 || h + 1 == n) w *= 0.5;
        const double t = w / diff;
        num += t * f[h];
        den += t;
    }
    return num / den;
}

/// Resamples f onto the nodes of another grid through its interpolant.
inline GridFunction interpolate_to(const GridFunction& f, const GridPtr& target) {
    return sample(target, [&](double x) { return interpolate(f, x); });
}

/// Discrete weighted inner product sum_h f_h g_h w_h.
inline double weighted_inner(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid());
    const auto w = f.grid()->quad_weights();
    double acc = 0.0;
    for (std::size_t h = 0; h < f.size(); ++h) acc += f[h] * g[h] * w[h];
    return acc;
}

/// Discrete L2_w norm by CGL quadrature.
inline double weighted_norm(const GridFunction& f) { return std::sqrt(weighted_inner(f, f)); }

inline double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace peri_richards
