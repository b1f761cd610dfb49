#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "solwave/functionals.hpp"
#include "solwave/params.hpp"
#include "solwave/spectral.hpp"

namespace solwave {

// Thrown when a requested phase factor is not 2L-periodic on the box.
struct PhaseWrapError : std::runtime_error {
    double suggested_c;
    explicit PhaseWrapError(double suggestion, const std::string& what)
        : std::runtime_error(what), suggested_c(suggestion) {}
};

struct GaugeContext {
    PhysicalParams p;
    // gauge integral anchored at the left grid edge (-L); the line version
    // anchors at -infinity, differing by a constant phase
};

// Left-anchored cumulative trapezoid of a real sampled density.
inline std::vector<double> cumtrapz(const Field& rho) {
    const double dx = rho.g().dx;
    std::vector<double> c(rho.size());
    c[0] = 0.0;
    for (std::size_t i = 1; i < rho.size(); ++i)
        c[i] = c[i - 1] + 0.5 * dx * (rho.v[i - 1].real() + rho.v[i].real());
    return c;
}

namespace detail {
inline Field gauge_apply(const Field& u, double coeff) {
    auto c = cumtrapz(density(u));
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        out.v[i] = u.v[i] * std::exp(cplx(0.0, coeff * c[i]));
    return out;
}
}  // namespace detail

// phi = u * exp(-i (alpha+beta)/4 int_{-L}^x |u|^2)
inline Field gauge_forward(const Field& u, const GaugeContext& ctx) {
    return detail::gauge_apply(u, -(ctx.p.alpha + ctx.p.beta) / 4.0);
}

// Inverse map; |phi| = |u| makes the exponent integrand known.
inline Field gauge_inverse(const Field& phi, const GaugeContext& ctx) {
    return detail::gauge_apply(phi, (ctx.p.alpha + ctx.p.beta) / 4.0);
}

// Neglected tail of the line gauge integral: mass outside the box is not
// representable; report the boundary density as a proxy diagnostic.
inline double gauge_tail_diagnostic(const Field& u) {
    return std::norm(u.v.front()) * u.g().half_length;
}

inline bool phase_admissible(double c, double L, double tol = 1e-9) {
    const double ratio = c * L / (2.0 * std::numbers::pi);
    return std::abs(ratio - std::round(ratio)) <= tol;
}

inline double nearest_admissible_c(double c, double L) {
    return std::round(c * L / (2.0 * std::numbers::pi)) * 2.0 * std::numbers::pi / L;
}

// Multiplication by e^{-i c x / 2}; requires the factor to be 2L-periodic.
inline Field phase_rotate(const Field& psi, double c) {
    const double L = psi.g().half_length;
    if (!phase_admissible(c, L))
        throw PhaseWrapError(nearest_admissible_c(c, L),
                             "phase_rotate: e^{-icx/2} not box-periodic");
    return map_field(psi, [&](cplx z, std::size_t i) {
        return z * std::exp(cplx(0.0, -0.5 * c * psi.g().x[i]));
    });
}

inline Field phase_unrotate(const Field& phi, double c) { return phase_rotate(phi, -c); }

struct Reconstruction {
    Field u;
    bool phase_periodic = true;  // false only in diagnostic mode
    double gauge_winding = 0.0;  // total gauge phase across the box, mod 2pi mismatch
    double tail_mass = 0.0;
};

// u(x,t) = psi(x-ct) exp(i w t - i c/2 (x-ct) + i(alpha+beta)/4 int_{-inf}^{x-ct}|psi|^2).
// Translation by ct is a spectral shift. When the composite phase fails to be
// box-periodic this throws PhaseWrap unless diagnostic mode is on, in which
// case the field is produced as-is and flagged.
inline Reconstruction reconstruct_traveling_wave(const Field& psi,
                                                 const PhysicalParams& p, double t,
                                                 bool diagnostic = false) {
    const double L = psi.g().half_length;
    Reconstruction rec{Field(psi.grid)};

    Field shifted = spectral_shift(psi, p.c * t);
    Field rho = density(shifted);
    auto cum = cumtrapz(rho);
    const double ab4 = (p.alpha + p.beta) / 4.0;
    const double total_mass = cum.back() +
        0.5 * psi.g().dx * (rho.v.back().real() + rho.v.front().real());
    const double winding = ab4 * total_mass;
    const double two_pi = 2.0 * std::numbers::pi;
    const bool gauge_ok =
        std::abs(winding / two_pi - std::round(winding / two_pi)) <= 1e-9 ||
        winding == 0.0;
    const bool rot_ok = phase_admissible(p.c, L);
    if (!(gauge_ok && rot_ok) && !diagnostic)
        throw PhaseWrapError(nearest_admissible_c(p.c, L),
                             "reconstruct: composite phase not box-periodic");
    rec.phase_periodic = gauge_ok && rot_ok;
    rec.gauge_winding = winding;
    rec.tail_mass = gauge_tail_diagnostic(shifted);

    const double tphase = p.omega * t + 0.5 * p.c * p.c * t;  // w t + c^2 t / 2
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = psi.g().x[i];
        const double phase = tphase - 0.5 * p.c * x + ab4 * cum[i];
        rec.u.v[i] = shifted.v[i] * std::exp(cplx(0.0, phase));
    }
    return rec;
}

}  // namespace solwave
