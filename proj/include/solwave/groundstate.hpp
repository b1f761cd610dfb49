#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solwave/functionals.hpp"
#include "solwave/gauge.hpp"
#include "solwave/params.hpp"
#include "solwave/spectral.hpp"

#include <json.hpp>

namespace solwave {

struct InfeasibleStartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PositiveEnergyStallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergentFactorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GuessKind { Gaussian, Sech, Algebraic, Custom };

struct SolveConfig {
    GridPtr grid;
    GuessKind guess = GuessKind::Sech;
    double guess_width = 1.0;       // width for gaussian/sech, 'a' for algebraic
    std::optional<Field> custom_guess;
    double eta0 = 1.0;              // initial step size
    std::size_t max_iters = 20000;
    double tol_residual = 1e-9;     // normalized EL residual
    double tol_change = 1e-13;      // relative objective change
    double bisect_tol = 1e-15;      // relative tolerance for Nehari lambda roots
    double precond_shift = 1.0;     // mass shift of the spectral preconditioner
    std::size_t rearrange_every = 0;  // 0 = off
    std::uint64_t seed = 0;         // reserved for randomized perturbations
};

struct GroundState {
    Field psi;
    double mu = 0.0;
    FunctionalReport values;
    double residual = 0.0;      // normalized
    double residual_raw = 0.0;
    std::size_t iterations = 0;
    std::string regime;
    double A_derived = std::numeric_limits<double>::quiet_NaN();
    double gamma_derived = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    ReducedParams effective;    // coefficients of the EL equation this state solves
};

struct NoConvergenceError : std::runtime_error {
    GroundState partial;
    NoConvergenceError(const std::string& what, GroundState gs)
        : std::runtime_error(what), partial(std::move(gs)) {}
};

inline nlohmann::json groundstate_to_json(const GroundState& gs,
                                          const std::string& field_csv = "") {
    nlohmann::json j;
    j["regime"] = gs.regime;
    j["mu"] = gs.mu;
    j["residual"] = gs.residual;
    j["residual_raw"] = gs.residual_raw;
    j["iterations"] = gs.iterations;
    j["converged"] = gs.converged;
    j["A_derived"] = gs.A_derived;
    j["gamma_derived"] = gs.gamma_derived;
    j["params"] = {{"A", gs.effective.A}, {"B", gs.effective.B},
                   {"nu", gs.effective.nu}, {"gamma", gs.effective.gamma}};
    j["functionals"] = gs.values;
    j["field_csv"] = field_csv;
    return j;
}

// --- helpers ---

// H1-like scale used to normalize EL residuals.
inline double residual_scale(const Field& psi, double nu) {
    const double d = lp_power_sum(derivative(psi), 2);
    const double m = lp_power_sum(psi, 2);
    return std::max(std::sqrt(d + (1.0 + std::abs(nu)) * m), 1e-300);
}

// Circular shift putting the magnitude peak at x = 0 (leftmost max wins).
inline Field recenter(const Field& psi) {
    std::size_t best = 0;
    double bm = -1.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double a = std::abs(psi.v[i]);
        if (a > bm) { bm = a; best = i; }
    }
    const std::size_t n = psi.size();
    const std::size_t target = n / 2;  // x[n/2] = 0
    const std::size_t rot = (best + n - target) % n;
    if (rot == 0) return psi;
    Field out(psi.grid);
    for (std::size_t i = 0; i < n; ++i) out.v[i] = psi.v[(i + rot) % n];
    return out;
}

// Decreasing rearrangement about x = 0: magnitudes are sorted and placed
// symmetrically around the center sample. A pure permutation, so every Lp
// sum is preserved exactly.
inline Field canonicalize(const Field& psi) {
    const std::size_t n = psi.size();
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(psi.v[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    Field out(psi.grid);
    const std::size_t c = n / 2;
    out.v[c] = mags[0];
    std::size_t rank = 1;
    for (std::size_t off = 1; rank < n; ++off) {
        out.v[(c + off) % n] = mags[rank++];
        if (rank < n) out.v[(c + n - off) % n] = mags[rank++];
    }
    return out;
}

inline Field initial_guess(const SolveConfig& cfg) {
    if (cfg.guess == GuessKind::Custom) {
        if (!cfg.custom_guess) throw std::invalid_argument("custom guess missing");
        return *cfg.custom_guess;
    }
    Field f(cfg.grid);
    const double w = cfg.guess_width;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = cfg.grid->x[i];
        double val = 0.0;
        switch (cfg.guess) {
            case GuessKind::Gaussian: val = std::exp(-(x * x) / (w * w)); break;
            case GuessKind::Sech: val = 1.0 / std::cosh(x / w); break;
            case GuessKind::Algebraic: val = 1.0 / std::sqrt(w * w + x * x); break;
            default: break;
        }
        f.v[i] = val;
    }
    return f;
}

namespace detail {

// Preconditioner (k^2 + m)^{-1}; m chosen positive.
inline Field precondition(const Field& f, double m) {
    return apply_multiplier(f, [m](double k, std::size_t) {
        return cplx(1.0 / (k * k + m), 0.0);
    });
}

struct KTerms {
    double t2 = 0.0, t4 = 0.0, t6 = 0.0;
    double eval(double lam) const {
        const double l2 = lam * lam;
        return l2 * (t2 + l2 * (t4 + l2 * t6));
    }
};

inline KTerms k_terms(const Field& psi, const ReducedParams& r) {
    auto p = pieces(psi, r);
    KTerms t;
    t.t2 = p.quad;
    t.t4 = r.A * p.quartic + r.gamma * p.nonlocal;
    t.t6 = r.B * p.sextic;
    return t;
}

// Unique lambda > 0 with K(lambda psi) = 0, by bracketed bisection.
// K > 0 near 0; the upper bracket is doubled until the sign changes.
inline double nehari_root(const KTerms& t, double bisect_tol) {
    double lo = 1e-6, hi = 1.0;
    if (t.eval(lo) <= 0.0)
        throw InfeasibleStartError("nehari_root: K not positive near the origin");
    int doublings = 0;
    while (t.eval(hi) > 0.0) {
        hi *= 2.0;
        if (++doublings > 60)
            throw InfeasibleStartError(
                "nehari_root: no lambda with K(lambda psi) <= 0 (InfeasibleStart)");
    }
    // invariant: sign change across [lo, hi]
    for (int it = 0; it < 500 && (hi - lo) > bisect_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (t.eval(mid) > 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline Field rescale_to_nehari(const Field& psi, const ReducedParams& r,
                               double bisect_tol) {
    const double lam = nehari_root(k_terms(psi, r), bisect_tol);
    return lam * psi;
}

inline Field real_part(const Field& f) {
    return map_field(f, [](cplx z, std::size_t) { return cplx(z.real(), 0.0); });
}

}  // namespace detail

// --- Nehari-manifold minimization (subcritical and critical conventions) ---
//
// Preconditioned gradient descent of W restricted to {K = 0}: the descent
// direction is the W-gradient with its K-normal component removed, and each
// candidate is rescaled back onto the manifold by the lambda-bisection.
// On the manifold the projected gradients of W and E coincide, so the
// stationarity check is the EL residual of E itself.
inline GroundState solve_nehari(const ReducedParams& r, const SolveConfig& cfg,
                                KConvention conv) {
    if (!cfg.grid) throw std::invalid_argument("solve config needs a grid");
    const double pm = std::max(-r.nu, cfg.precond_shift);

    // The default guess width may land where K(lambda psi) never changes sign
    // (e.g. the nonlocal term dominating the quartic); widening the guess
    // lowers the degree-4 coefficient, so scan widths before giving up.
    Field psi;
    {
        bool feasible = false;
        std::exception_ptr last;
        for (int j = 0; j <= 10 && !feasible; ++j) {
            SolveConfig trial = cfg;
            trial.guess_width = cfg.guess_width * std::pow(2.0, j);
            try {
                psi = detail::rescale_to_nehari(
                    recenter(detail::real_part(initial_guess(trial))), r,
                    cfg.bisect_tol);
                feasible = true;
            } catch (const InfeasibleStartError&) {
                last = std::current_exception();
            }
            if (cfg.guess == GuessKind::Custom) break;  // nothing to scan
        }
        if (!feasible) std::rethrow_exception(last);
    }

    double eta = cfg.eta0;
    double W_prev = mountain_W(psi, r, conv);
    double res = std::numeric_limits<double>::infinity();
    double mu = 0.0;
    std::size_t iter = 0;
    bool converged = false;

    for (; iter < cfg.max_iters; ++iter) {
        Field gE = grad_E(psi, r);
        Field gK = grad_K(psi, r);
        const double gK2 = inner_real(gK, gK);
        mu = inner_real(gE, gK) / std::max(gK2, 1e-300);
        res = norm_l2(gE) / residual_scale(psi, r.nu);
        if (res <= cfg.tol_residual) { converged = true; break; }

        Field pE = detail::precondition(gE, pm);
        Field pK = detail::precondition(gK, pm);
        const double theta =
            inner_real(pE, gK) / std::max(inner_real(pK, gK), 1e-300);
        Field dir = pE - theta * pK;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            Field cand;
            try {
                cand = detail::rescale_to_nehari(recenter(psi - eta * dir), r,
                                                 cfg.bisect_tol);
            } catch (const InfeasibleStartError&) {
                eta *= 0.5;
                continue;
            }
            const double Wc = mountain_W(cand, r, conv);
            // Near the minimum the objective decrement drops below round-off;
            // accepting ties there lets the iterate random-walk at a residual
            // plateau. Require either a clear decrease or, failing that, a
            // strict improvement in the residual itself.
            bool take = Wc <= W_prev - 1e-13 * std::abs(W_prev);
            if (!take && Wc <= W_prev + 1e-13 * std::abs(W_prev)) {
                const double rc =
                    norm_l2(grad_E(cand, r)) / residual_scale(cand, r.nu);
                take = rc < res;
            }
            if (take) {
                psi = std::move(cand);
                W_prev = Wc;
                eta = std::min(eta * 1.25, 64.0 * cfg.eta0);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;  // no descent direction left at machine scale

        if (cfg.rearrange_every && (iter + 1) % cfg.rearrange_every == 0) {
            Field cand = detail::rescale_to_nehari(canonicalize(psi), r, cfg.bisect_tol);
            const double Wc = mountain_W(cand, r, conv);
            if (Wc <= W_prev + 1e-14 * std::abs(W_prev)) {
                psi = std::move(cand);
                W_prev = Wc;
            }
        }
    }

    // The symmetric-decreasing rearrangement is not smooth: applied to an
    // already-converged profile it can inject high-frequency error. Offer it
    // and a smooth even-symmetrization as candidates and keep whichever has
    // the smallest residual.
    {
        auto resid_of = [&](const Field& f) {
            return norm_l2(grad_E(f, r)) / residual_scale(f, r.nu);
        };
        double best = resid_of(psi);
        const std::size_t n = psi.size();
        Field sym = psi;
        for (std::size_t j = 1; j < n; ++j)
            sym.v[j] = 0.5 * (psi.v[j] + psi.v[n - j]);
        try {
            sym = detail::rescale_to_nehari(sym, r, cfg.bisect_tol);
            const double rs = resid_of(sym);
            if (rs < best) { best = rs; psi = std::move(sym); }
        } catch (const InfeasibleStartError&) {}
        Field canon = detail::rescale_to_nehari(canonicalize(psi), r, cfg.bisect_tol);
        if (resid_of(canon) <= best) psi = std::move(canon);
    }
    GroundState gs;
    gs.psi = psi;
    gs.effective = r;
    {
        Field gE = grad_E(psi, r);
        Field gK = grad_K(psi, r);
        gs.mu = inner_real(gE, gK) / std::max(inner_real(gK, gK), 1e-300);
        gs.residual_raw = norm_l2(gE);
        gs.residual = gs.residual_raw / residual_scale(psi, r.nu);
    }
    gs.values = make_report(psi, r, conv);
    gs.iterations = iter;
    gs.regime = conv == KConvention::Subcritical ? "SubcriticalNehari" : "CriticalNehari";
    gs.converged = gs.residual <= cfg.tol_residual;
    if (!gs.converged)
        throw NoConvergenceError("solve_nehari: residual " + std::to_string(gs.residual) +
                                     " above tolerance after " + std::to_string(iter) +
                                     " iterations",
                                 gs);
    return gs;
}

inline GroundState solve_nehari_subcritical(const ReducedParams& r,
                                            const SolveConfig& cfg) {
    return solve_nehari(r, cfg, KConvention::Subcritical);
}

inline GroundState solve_nehari_critical(const ReducedParams& r,
                                         const SolveConfig& cfg) {
    return solve_nehari(r, cfg, KConvention::Critical);
}

// --- constrained minimization with an exact degree-4 rescale projection ---

namespace detail {

struct ConstrainedProblem {
    std::function<double(const Field&)> objective;
    std::function<Field(const Field&)> grad_objective;
    std::function<double(const Field&)> constraint;
    std::function<Field(const Field&)> grad_constraint;
    double target = 0.0;  // constraint level q
};

inline Field project_q(const Field& psi, const ConstrainedProblem& pb) {
    const double Q = pb.constraint(psi);
    if (!(Q > 1e-300))
        throw DegenerateConstraintError("constraint value underflowed");
    return std::pow(pb.target / Q, 0.25) * psi;
}

struct DescentResult {
    Field psi;
    double mu_lsq = 0.0;     // least-squares multiplier <gE,gQ>/<gQ,gQ>
    double residual = 0.0;   // normalized || gE - mu gQ ||
    double residual_raw = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

inline DescentResult constrained_descent(Field psi, const ConstrainedProblem& pb,
                                         const SolveConfig& cfg, double nu,
                                         double precond_mass) {
    psi = project_q(recenter(psi), pb);
    double eta = cfg.eta0;
    double E_prev = pb.objective(psi);
    DescentResult out;

    for (out.iterations = 0; out.iterations < cfg.max_iters; ++out.iterations) {
        Field gE = pb.grad_objective(psi);
        Field gQ = pb.grad_constraint(psi);
        const double gQ2 = inner_real(gQ, gQ);
        out.mu_lsq = inner_real(gE, gQ) / std::max(gQ2, 1e-300);
        Field resid = gE - out.mu_lsq * gQ;
        out.residual_raw = norm_l2(resid);
        out.residual = out.residual_raw / residual_scale(psi, nu);
        if (out.residual <= cfg.tol_residual) { out.converged = true; break; }

        Field pE = precondition(gE, precond_mass);
        Field pQ = precondition(gQ, precond_mass);
        const double theta =
            inner_real(pE, gQ) / std::max(inner_real(pQ, gQ), 1e-300);
        Field dir = pE - theta * pQ;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            Field cand = project_q(recenter(psi - eta * dir), pb);
            const double Ec = pb.objective(cand);
            if (Ec <= E_prev + 1e-14 * std::abs(E_prev)) {
                psi = std::move(cand);
                E_prev = Ec;
                eta = std::min(eta * 1.25, 64.0 * cfg.eta0);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
    }
    out.psi = std::move(psi);
    return out;
}

}  // namespace detail

// Fixed nonlocal mean flow + quartic constraint (subcritical, nu < 0).
// Minimizes the quadratic action under Q(psi) = q; the multiplier rebuilds
// gamma = -a1^2 mu and A = -a2^2 mu of the profile equation.
inline GroundState solve_fixed_meanflow(double q, double a1, double a2, double nu,
                                        const SolveConfig& cfg) {
    if (!(q > 0.0)) throw std::invalid_argument("meanflow: q must be positive");
    if (a1 == 0.0 && a2 == 0.0)
        throw std::invalid_argument("meanflow: alpha1^2 + alpha2^2 must be nonzero");
    if (!(nu < 0.0)) throw std::invalid_argument("meanflow: requires nu < 0");

    ReducedParams quad;  // objective = action with A = B = gamma = 0
    quad.nu = nu;
    detail::ConstrainedProblem pb;
    pb.objective = [quad](const Field& f) { return action_E(f, quad); };
    pb.grad_objective = [quad](const Field& f) { return grad_E(f, quad); };
    pb.constraint = [a1, a2](const Field& f) { return q_meanflow(f, a1, a2); };
    pb.grad_constraint = [a1, a2](const Field& f) { return grad_q_meanflow(f, a1, a2); };
    pb.target = q;

    Field guess = detail::real_part(initial_guess(cfg));
    auto res = detail::constrained_descent(guess, pb, cfg, nu, -nu);

    Field psi = detail::project_q(canonicalize(res.psi), pb);
    Field gE = pb.grad_objective(psi);
    Field gQ = pb.grad_constraint(psi);
    const double mu = inner_real(gE, gQ) / std::max(inner_real(gQ, gQ), 1e-300);

    GroundState gs;
    gs.psi = psi;
    gs.mu = mu;
    gs.A_derived = -a2 * a2 * mu;
    gs.gamma_derived = -a1 * a1 * mu;
    gs.effective = ReducedParams{gs.A_derived, 0.0, 0.0, nu, gs.gamma_derived};
    gs.residual_raw = norm_l2(gE - mu * gQ);
    gs.residual = gs.residual_raw / residual_scale(psi, nu);
    gs.values = make_report(psi, gs.effective, KConvention::Subcritical, a1, a2);
    gs.values.E = pb.objective(psi);  // report the section-5 objective
    gs.iterations = res.iterations;
    gs.regime = "FixedMeanFlow";
    gs.converged = gs.residual <= cfg.tol_residual;
    if (!gs.converged)
        throw NoConvergenceError("solve_fixed_meanflow: residual " +
                                     std::to_string(gs.residual) + " above tolerance",
                                 gs);
    return gs;
}

// Fixed quartic constraint at nu = 0 with B < 0, gamma >= 0.
// The minimum is negative; a width scan (which leaves Q invariant) finds a
// negative-energy start before the descent.
inline GroundState solve_fixed_quartic(double q, double B, double gamma,
                                       const SolveConfig& cfg) {
    if (!(q > 0.0)) throw std::invalid_argument("quartic: q must be positive");
    if (!(B < 0.0)) throw std::invalid_argument("quartic: requires B < 0");
    if (gamma < 0.0) throw std::invalid_argument("quartic: requires gamma >= 0");

    ReducedParams robj;  // objective = action with nu = 0, A = 0
    robj.B = B;
    robj.gamma = gamma;
    detail::ConstrainedProblem pb;
    pb.objective = [robj](const Field& f) { return action_E(f, robj); };
    pb.grad_objective = [robj](const Field& f) { return grad_E(f, robj); };
    pb.constraint = [](const Field& f) { return q_quartic(f); };
    pb.grad_constraint = [](const Field& f) { return grad_q_quartic(f); };
    pb.target = q;

    // width scan for a negative-energy start
    Field best(cfg.grid);
    double bestE = std::numeric_limits<double>::infinity();
    for (int j = -8; j <= 5; ++j) {
        const double w = cfg.guess_width * std::pow(2.0, j);
        Field f(cfg.grid);
        for (std::size_t i = 0; i < f.size(); ++i)
            f.v[i] = 1.0 / std::cosh(cfg.grid->x[i] / w);
        try {
            f = detail::project_q(f, pb);
        } catch (const DegenerateConstraintError&) {
            continue;
        }
        const double Ef = pb.objective(f);
        if (Ef < bestE) { bestE = Ef; best = f; }
    }
    if (!(bestE < 0.0))
        throw PositiveEnergyStallError(
            "solve_fixed_quartic: no negative-energy start found");

    auto res = detail::constrained_descent(best, pb, cfg, 0.0, cfg.precond_shift);

    Field psi = detail::project_q(canonicalize(res.psi), pb);
    Field gE = pb.grad_objective(psi);
    Field gQ = pb.grad_constraint(psi);
    const double mu = inner_real(gE, psi) / std::max(inner_real(gQ, psi), 1e-300);

    GroundState gs;
    gs.psi = psi;
    gs.mu = mu;
    gs.A_derived = -mu;
    gs.effective = ReducedParams{-mu, B, 0.0, 0.0, gamma};
    gs.residual_raw = norm_l2(gE - mu * gQ);
    gs.residual = gs.residual_raw / residual_scale(psi, 0.0);
    gs.values = make_report(psi, gs.effective, KConvention::Critical);
    gs.values.E = pb.objective(psi);  // report the section-6 objective
    gs.iterations = res.iterations;
    gs.regime = "FixedQuartic";
    gs.converged = gs.residual <= cfg.tol_residual;
    if (gs.converged && !(gs.values.E < 0.0))
        throw PositiveEnergyStallError("solve_fixed_quartic: converged with E >= 0");
    if (!gs.converged)
        throw NoConvergenceError("solve_fixed_quartic: residual " +
                                     std::to_string(gs.residual) + " above tolerance",
                                 gs);
    return gs;
}

// --- Petviashvili fixed-point iteration for the profile equation ---
//
// (-d_xx + m) psi = N(psi),  m = -nu > 0,
// N(psi) = -(A|psi|^2 psi + B|psi|^4 psi + gamma psi (H|psi|^2)'),
// stabilized by S = <psi, L psi> / <psi, N(psi)> raised to sigma = p/(p-1)
// with p the dominant nonlinearity degree.
inline GroundState petviashvili_solve(const ReducedParams& r, const SolveConfig& cfg) {
    double m = -r.nu;
    if (!(m > 0.0)) {
        // nu = 0 needs a positive spectral shift to keep L invertible
        if (cfg.precond_shift > 0.0) m = cfg.precond_shift;
        else throw std::invalid_argument("petviashvili: requires nu < 0");
    }
    const double shift = m + r.nu;  // extra mass moved to the right-hand side
    const double p_dom = (r.A != 0.0 || r.gamma != 0.0) ? 3.0 : 5.0;
    const double sigma = p_dom / (p_dom - 1.0);

    auto apply_L = [m](const Field& f) {
        Field lap = laplacian(f);
        return map_field(f, [&](cplx z, std::size_t i) { return -lap.v[i] + m * z; });
    };
    auto apply_Linv = [m](const Field& f) {
        return apply_multiplier(f, [m](double k, std::size_t) {
            return cplx(1.0 / (k * k + m), 0.0);
        });
    };
    auto nonlin = [&](const Field& f) {
        Field nld = nonlocal_deriv(density(f));
        Field out(f.grid);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double r2 = std::norm(f.v[i]);
            out.v[i] = shift * f.v[i] -
                       (r.A * r2 + r.B * r2 * r2 + r.gamma * nld.v[i].real()) * f.v[i];
        }
        return out;
    };

    Field psi = recenter(detail::real_part(initial_guess(cfg)));
    double res = std::numeric_limits<double>::infinity();
    double S = 1.0;
    std::size_t iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        Field N = nonlin(psi);
        const double num = inner_real(psi, apply_L(psi));
        const double den = inner_real(psi, N);
        S = num / den;
        if (!(S > 1e-6 && S < 1e6) || !std::isfinite(S))
            throw DivergentFactorError("petviashvili: stabilizing factor " +
                                       std::to_string(S) + " out of range");
        psi = recenter(std::pow(S, sigma) * apply_Linv(N));
        res = norm_l2(grad_E(psi, r)) / residual_scale(psi, r.nu);
        if (res <= cfg.tol_residual) break;
    }

    GroundState gs;
    gs.psi = psi;
    gs.effective = r;
    gs.mu = S - 1.0;  // distance of the stabilizing factor from its fixed point
    gs.residual_raw = norm_l2(grad_E(psi, r));
    gs.residual = gs.residual_raw / residual_scale(psi, r.nu);
    gs.values = make_report(psi, r, KConvention::Subcritical);
    gs.iterations = iter;
    gs.regime = "Petviashvili";
    gs.converged = gs.residual <= cfg.tol_residual;
    if (!gs.converged)
        throw NoConvergenceError("petviashvili: residual " + std::to_string(gs.residual) +
                                     " above tolerance",
                                 gs);
    return gs;
}

}  // namespace solwave
