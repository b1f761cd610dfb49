#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace solwave {

// Uniform periodic grid on [-L, L), n points, spacing dx = 2L/n.
// Wavenumbers follow the FFT ordering: k[i] = m * pi/L with
// m = i for i <= n/2 and m = i - n otherwise.
// Immutable after construction; share freely across threads.
struct Grid {
    std::size_t n = 0;
    double half_length = 0.0;  // L
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> k;
    std::vector<bool> dealias_mask;  // true = mode is zeroed (top third of |k|)

    double length() const { return 2.0 * half_length; }
    // signed mode index for position i
    long mode(std::size_t i) const {
        return i <= n / 2 ? static_cast<long>(i)
                          : static_cast<long>(i) - static_cast<long>(n);
    }
    std::size_t nyquist_index() const { return n / 2; }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::size_t n, double L) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("make_grid: n must be even and >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");

    auto g = std::make_shared<Grid>();
    g->n = n;
    g->half_length = L;
    g->dx = 2.0 * L / static_cast<double>(n);
    g->x.resize(n);
    g->k.resize(n);
    g->dealias_mask.resize(n);
    const double k0 = std::numbers::pi / L;
    const double third = static_cast<double>(n) / 3.0;
    for (std::size_t i = 0; i < n; ++i) {
        g->x[i] = -L + static_cast<double>(i) * g->dx;
        const long m = g->mode(i);
        g->k[i] = k0 * static_cast<double>(m);
        g->dealias_mask[i] = std::abs(static_cast<double>(m)) >= third;
    }
    return g;
}

inline bool same_grid(const Grid& a, const Grid& b) {
    return a.n == b.n && a.half_length == b.half_length;
}

}  // namespace solwave
