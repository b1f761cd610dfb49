#pragma once

#include <cmath>
#include <stdexcept>

#include "solwave/params.hpp"
#include "solwave/spectral.hpp"

#include <json.hpp>

namespace solwave {

// All functionals below act on the rotated profile psi; the momentum term of
// the phi-form has been absorbed into nu = omega + c^2/4.
//
// The nonlocal quadratic uses the multiplier |k| restricted to the dealiased
// band, so every functional here is an exact polynomial in the retained
// modes and the discrete gradients are its exact derivatives.

enum class KConvention { Subcritical, Critical };

// |D| rho on the dealiased band (== (H rho)' there).
inline Field nonlocal_deriv(const Field& rho) {
    const Grid& g = rho.g();
    return apply_multiplier(rho, [&g](double k, std::size_t i) {
        return g.dealias_mask[i] ? cplx(0.0, 0.0) : cplx(std::abs(k), 0.0);
    });
}

inline Field density(const Field& psi) {
    return map_field(psi, [](cplx z, std::size_t) { return cplx(std::norm(z), 0.0); });
}

// int |psi|^2 (H(|psi|^2))' dx  ==  || |D|^{1/2} |psi|^2 ||^2  (>= 0)
inline double nonlocal_quadratic(const Field& psi) {
    Field rho = density(psi);
    return inner_real(nonlocal_deriv(rho), rho);
}

namespace detail {
struct KPieces {
    double quad = 0.0;     // int(|psi'|^2 - nu|psi|^2)
    double quartic = 0.0;  // int |psi|^4
    double sextic = 0.0;   // int |psi|^6
    double nonlocal = 0.0; // int rho (H rho)'
    double dirichlet = 0.0;
    double mass = 0.0;     // int |psi|^2
};

inline KPieces pieces(const Field& psi, const ReducedParams& r) {
    KPieces p;
    p.dirichlet = lp_power_sum(derivative(psi), 2);
    p.mass = lp_power_sum(psi, 2);
    p.quad = p.dirichlet - r.nu * p.mass;
    p.quartic = lp_power_sum(psi, 4);
    p.sextic = lp_power_sum(psi, 6);
    p.nonlocal = nonlocal_quadratic(psi);
    return p;
}
}  // namespace detail

inline double action_E(const Field& psi, const ReducedParams& r) {
    auto p = detail::pieces(psi, r);
    return 0.5 * p.quad + r.A / 4.0 * p.quartic + r.B / 6.0 * p.sextic +
           r.gamma / 4.0 * p.nonlocal;
}

struct NehariValues {
    double K = 0.0;
    double KQ = 0.0;
    double KN = 0.0;
};

inline NehariValues nehari_K(const Field& psi, const ReducedParams& r,
                             KConvention conv = KConvention::Subcritical) {
    auto p = detail::pieces(psi, r);
    NehariValues out;
    out.K = p.quad + r.A * p.quartic + r.B * p.sextic + r.gamma * p.nonlocal;
    out.KQ = p.quad;
    if (conv == KConvention::Critical) out.KQ += r.A * p.quartic;
    out.KN = out.KQ - out.K;
    return out;
}

inline double mountain_W(const Field& psi, const ReducedParams& r, KConvention conv) {
    auto p = detail::pieces(psi, r);
    if (conv == KConvention::Subcritical)
        return 0.25 * (p.quad - r.B / 3.0 * p.sextic);
    return (p.dirichlet + r.A / 4.0 * p.quartic + r.gamma / 4.0 * p.nonlocal) / 3.0;
}

inline double q_meanflow(const Field& psi, double a1, double a2) {
    if (a1 == 0.0 && a2 == 0.0)
        throw std::invalid_argument("q_meanflow: alpha1^2 + alpha2^2 must be nonzero");
    return 0.25 * (a1 * a1 * nonlocal_quadratic(psi) + a2 * a2 * lp_power_sum(psi, 4));
}

inline double q_quartic(const Field& psi) { return 0.25 * lp_power_sum(psi, 4); }

// --- conserved quantities of the full PDE ---

struct Conserved {
    double M = 0.0;
    double P = 0.0;
    double E = 0.0;  // action functional of the time-dependent problem
};

inline Conserved conserved_quantities(const Field& u, const PhysicalParams& p) {
    Field ux = derivative(u);
    Field rho = density(u);
    Field nld = nonlocal_deriv(rho);
    const double dx = u.g().dx;
    double m = 0.0, mom = 0.0, e = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r2 = std::norm(u.v[i]);
        const double im_uxubar = (ux.v[i] * std::conj(u.v[i])).imag();
        m += r2;
        mom += im_uxubar - 0.5 * p.beta * r2 * r2;
        e += std::norm(ux.v[i]) - p.b / 2.0 * r2 * r2 +
             p.beta * (p.alpha + p.beta) / 6.0 * r2 * r2 * r2 -
             (p.alpha + p.beta) / 2.0 * r2 * im_uxubar +
             p.gamma / 2.0 * r2 * nld.v[i].real();
    }
    return {0.5 * dx * m, dx * mom, dx * e};
}

// For beta = 0 the PDE is Hamiltonian with H = -E(u; beta=0).
inline double hamiltonian_beta0(const Field& u, const PhysicalParams& p) {
    PhysicalParams p0 = p;
    p0.beta = 0.0;
    return -conserved_quantities(u, p0).E;
}

// --- discrete L2 gradients ---

inline Field laplacian(const Field& f) {
    const std::size_t nyq = f.g().nyquist_index();
    return apply_multiplier(f, [nyq](double k, std::size_t i) {
        if (i == nyq) return cplx(0.0, 0.0);
        return cplx(-k * k, 0.0);
    });
}

// grad E = -psi'' - nu psi + A|psi|^2 psi + B|psi|^4 psi + gamma psi (H|psi|^2)'.
// Normalized so grad_E(psi) = 0 is exactly the discrete profile equation.
inline Field grad_E(const Field& psi, const ReducedParams& r) {
    Field lap = laplacian(psi);
    Field nld = nonlocal_deriv(density(psi));
    Field out(psi.grid);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double r2 = std::norm(psi.v[i]);
        out.v[i] = -lap.v[i] - r.nu * psi.v[i] +
                   (r.A * r2 + r.B * r2 * r2 + r.gamma * nld.v[i].real()) * psi.v[i];
    }
    return out;
}

inline Field grad_K(const Field& psi, const ReducedParams& r) {
    Field lap = laplacian(psi);
    Field nld = nonlocal_deriv(density(psi));
    Field out(psi.grid);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double r2 = std::norm(psi.v[i]);
        out.v[i] = 2.0 * (-lap.v[i] - r.nu * psi.v[i]) +
                   (4.0 * r.A * r2 + 6.0 * r.B * r2 * r2 +
                    4.0 * r.gamma * nld.v[i].real()) *
                       psi.v[i];
    }
    return out;
}

inline Field grad_q_quartic(const Field& psi) {
    return map_field(psi, [](cplx z, std::size_t) { return std::norm(z) * z; });
}

inline Field grad_q_meanflow(const Field& psi, double a1, double a2) {
    Field nld = nonlocal_deriv(density(psi));
    Field out(psi.grid);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double r2 = std::norm(psi.v[i]);
        out.v[i] = (a1 * a1 * nld.v[i].real() + a2 * a2 * r2) * psi.v[i];
    }
    return out;
}

// --- report ---

struct FunctionalReport {
    double E = 0.0, K = 0.0, KQ = 0.0, KN = 0.0, W = 0.0;
    double Q_meanflow = 0.0, Q_quartic = 0.0;
    double M = 0.0, P = 0.0, Eaction = 0.0;
};

inline FunctionalReport make_report(const Field& psi, const ReducedParams& r,
                                    KConvention conv, double a1 = 1.0,
                                    double a2 = 1.0,
                                    const PhysicalParams* phys = nullptr) {
    FunctionalReport rep;
    rep.E = action_E(psi, r);
    auto kv = nehari_K(psi, r, conv);
    rep.K = kv.K;
    rep.KQ = kv.KQ;
    rep.KN = kv.KN;
    rep.W = mountain_W(psi, r, conv);
    rep.Q_meanflow = q_meanflow(psi, a1, a2);
    rep.Q_quartic = q_quartic(psi);
    if (phys) {
        auto cq = conserved_quantities(psi, *phys);
        rep.M = cq.M;
        rep.P = cq.P;
        rep.Eaction = cq.E;
    }
    return rep;
}

inline void to_json(nlohmann::json& j, const FunctionalReport& r) {
    j = nlohmann::json{{"E", r.E},
                       {"K", r.K},
                       {"KQ", r.KQ},
                       {"KN", r.KN},
                       {"W", r.W},
                       {"Q_meanflow", r.Q_meanflow},
                       {"Q_quartic", r.Q_quartic},
                       {"M", r.M},
                       {"P", r.P},
                       {"Eaction", r.Eaction}};
}

}  // namespace solwave
