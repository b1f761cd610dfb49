#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "solwave/fft.hpp"
#include "solwave/field.hpp"

namespace solwave {

// Normalized spectral coefficients, FFT ordering. With this normalization a
// single mode e^{i k x} has |coefficient| 1 (up to a unimodular phase from
// the x-origin at -L, which diagonal multipliers never see).
inline std::vector<cplx> to_spectral(const Field& f) {
    std::vector<cplx> c = f.v;
    fft::forward(c);
    const double s = 1.0 / static_cast<double>(f.size());
    for (auto& z : c) z *= s;
    return c;
}

inline Field from_spectral(GridPtr g, std::vector<cplx> c) {
    for (auto& z : c) z *= static_cast<double>(g->n);
    // inverse() divides by n again; keep the 1/n normalization symmetric
    fft::inverse(c);
    return Field(std::move(g), std::move(c));
}

// Applies a diagonal Fourier multiplier m(k, mode_index).
inline Field apply_multiplier(const Field& f,
                              const std::function<cplx(double, std::size_t)>& m) {
    std::vector<cplx> c = f.v;
    fft::forward(c);
    const Grid& g = f.g();
    for (std::size_t i = 0; i < g.n; ++i) c[i] *= m(g.k[i], i);
    fft::inverse(c);
    return Field(f.grid, std::move(c));
}

// Spectral d/dx. The Nyquist mode is zeroed (odd-order derivative of a real
// field has no consistent Nyquist representation).
inline Field derivative(const Field& f) {
    const std::size_t nyq = f.g().nyquist_index();
    return apply_multiplier(f, [nyq](double k, std::size_t i) {
        if (i == nyq) return cplx(0.0, 0.0);
        return cplx(0.0, k);
    });
}

// Hilbert transform, multiplier -i*sgn(k), sgn(0) = 0.
inline Field hilbert(const Field& f) {
    return apply_multiplier(f, [](double k, std::size_t) {
        if (k == 0.0) return cplx(0.0, 0.0);
        return cplx(0.0, k > 0.0 ? -1.0 : 1.0);
    });
}

// |D|^s, multiplier |k|^s. For s > 0 the Nyquist mode is zeroed so that
// |D| == d/dx ∘ H holds mode by mode on the grid.
inline Field frac_derivative(const Field& f, double s) {
    if (s < 0.0) throw std::invalid_argument("frac_derivative: s must be >= 0");
    if (s == 0.0) return f;
    const std::size_t nyq = f.g().nyquist_index();
    return apply_multiplier(f, [s, nyq](double k, std::size_t i) {
        if (i == nyq) return cplx(0.0, 0.0);
        return cplx(std::pow(std::abs(k), s), 0.0);
    });
}

// Zeroes the top third of |k| modes (two-thirds rule). Idempotent.
inline Field dealias(const Field& f) {
    const Grid& g = f.g();
    return apply_multiplier(f, [&g](double, std::size_t i) {
        return g.dealias_mask[i] ? cplx(0.0, 0.0) : cplx(1.0, 0.0);
    });
}

// Translation f(x) -> f(x - s), exact for band-limited fields.
inline Field spectral_shift(const Field& f, double s) {
    return apply_multiplier(f, [s](double k, std::size_t) {
        return std::exp(cplx(0.0, -k * s));
    });
}

// L2 inner product <f, g> = dx * sum f conj(g).
inline cplx inner(const Field& f, const Field& g) {
    require_same_grid(f, g);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.v[i] * std::conj(g.v[i]);
    return f.g().dx * acc;
}

inline double inner_real(const Field& f, const Field& g) { return inner(f, g).real(); }

// Spectral-side inner product; equals inner() by Parseval.
inline cplx inner_spectral(const Field& f, const Field& g) {
    require_same_grid(f, g);
    auto cf = to_spectral(f);
    auto cg = to_spectral(g);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < cf.size(); ++i) acc += cf[i] * std::conj(cg[i]);
    return f.g().length() * acc;
}

inline double integral_real(const Field& f) {
    double s = 0.0;
    for (const auto& z : f.v) s += z.real();
    return f.g().dx * s;
}

// dx * sum |f|^p
inline double lp_power_sum(const Field& f, int p) {
    double s = 0.0;
    for (const auto& z : f.v) s += std::pow(std::abs(z), p);
    return f.g().dx * s;
}

}  // namespace solwave
