#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "solwave/functionals.hpp"

using namespace solwave;

namespace {

Field random_real_field(GridPtr g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    Field f(g);
    for (auto& z : f.v) z = cplx(d(rng), 0.0);
    return f;
}

// directional derivative by central difference vs <grad, h>
void check_gradient(const std::function<double(const Field&)>& F,
                    const std::function<Field(const Field&)>& G, GridPtr g,
                    std::uint64_t seed) {
    Field psi = random_real_field(g, seed);
    Field h = random_real_field(g, seed + 1000);
    const double eps = 1e-5;
    const double fd = (F(psi + eps * h) - F(psi - eps * h)) / (2.0 * eps);
    const double an = inner_real(G(psi), h);
    REQUIRE(fd == Catch::Approx(an).epsilon(1e-6).margin(1e-10));
}

Field sech_profile(GridPtr g, double amp) {
    Field f(g);
    for (std::size_t i = 0; i < g->n; ++i) f.v[i] = amp / std::cosh(g->x[i]);
    return f;
}

}  // namespace

TEST_CASE("gradients match finite differences", "[functionals]") {
    auto g = make_grid(256, 10.0);
    ReducedParams r;
    r.A = 0.7;
    r.B = -0.4;
    r.nu = -1.3;
    r.gamma = 0.9;

    for (std::uint64_t s = 0; s < 20; ++s) {
        check_gradient([&](const Field& f) { return action_E(f, r); },
                       [&](const Field& f) { return grad_E(f, r); }, g, 10 + s);
        check_gradient([&](const Field& f) { return nehari_K(f, r).K; },
                       [&](const Field& f) { return grad_K(f, r); }, g, 200 + s);
        check_gradient([&](const Field& f) { return q_quartic(f); },
                       [&](const Field& f) { return grad_q_quartic(f); }, g, 300 + s);
        check_gradient([&](const Field& f) { return q_meanflow(f, 0.8, 1.2); },
                       [&](const Field& f) { return grad_q_meanflow(f, 0.8, 1.2); }, g,
                       400 + s);
    }
}

TEST_CASE("nehari K homogeneity bookkeeping", "[functionals]") {
    auto g = make_grid(512, 20.0);
    Field psi = sech_profile(g, 1.1);
    ReducedParams r;
    r.A = -1.0;
    r.B = -0.2;
    r.nu = -1.0;
    r.gamma = 0.3;

    auto p0 = nehari_K(psi, r);
    // K(lambda psi) = lambda^2 t2 + lambda^4 t4 + lambda^6 t6
    const double quad = lp_power_sum(derivative(psi), 2) - r.nu * lp_power_sum(psi, 2);
    const double t4 = r.A * lp_power_sum(psi, 4) + r.gamma * nonlocal_quadratic(psi);
    const double t6 = r.B * lp_power_sum(psi, 6);
    const double lam = 1.7;
    auto pl = nehari_K(lam * psi, r);
    const double want = lam * lam * quad + std::pow(lam, 4) * t4 + std::pow(lam, 6) * t6;
    REQUIRE(pl.K == Catch::Approx(want).epsilon(1e-12));
    REQUIRE(p0.K == Catch::Approx(p0.KQ - p0.KN).epsilon(1e-12));
}

TEST_CASE("K split conventions", "[functionals]") {
    auto g = make_grid(512, 20.0);
    Field psi = sech_profile(g, 0.9);
    ReducedParams r;
    r.A = 0.5;
    r.B = -1.0;
    r.nu = -0.7;
    r.gamma = 0.2;
    auto sub = nehari_K(psi, r, KConvention::Subcritical);
    auto crit = nehari_K(psi, r, KConvention::Critical);
    REQUIRE(sub.K == Catch::Approx(crit.K).epsilon(1e-14));  // only the split moves
    REQUIRE(crit.KQ - sub.KQ == Catch::Approx(r.A * lp_power_sum(psi, 4)).epsilon(1e-12));
}

TEST_CASE("nonlocal quadratic is nonnegative and matches |D|^{1/2} form",
          "[functionals]") {
    auto g = make_grid(1u << 10, 30.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        Field psi = random_real_field(g, 77 + s);
        const double v = nonlocal_quadratic(psi);
        REQUIRE(v >= 0.0);
        Field half = frac_derivative(dealias(density(psi)), 0.5);
        REQUIRE(v == Catch::Approx(inner_real(half, half)).epsilon(1e-10).margin(1e-12));
    }
}

TEST_CASE("sech closed-form integrals", "[functionals]") {
    auto g = make_grid(1u << 12, 40.0);
    Field psi = sech_profile(g, 1.0);
    // int sech^2 = 2, int sech^4 = 4/3, int sech^6 = 16/15, int (sech')^2 = 2/3
    REQUIRE(lp_power_sum(psi, 2) == Catch::Approx(2.0).epsilon(1e-10));
    REQUIRE(lp_power_sum(psi, 4) == Catch::Approx(4.0 / 3.0).epsilon(1e-10));
    REQUIRE(lp_power_sum(psi, 6) == Catch::Approx(16.0 / 15.0).epsilon(1e-10));
    REQUIRE(lp_power_sum(derivative(psi), 2) == Catch::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("action, W and report coherence on the sech oracle", "[functionals]") {
    auto g = make_grid(1u << 12, 40.0);
    Field psi = sech_profile(g, std::sqrt(2.0));
    ReducedParams r;
    r.A = -1.0;
    r.nu = -1.0;
    // sqrt(2) sech solves the cubic profile equation: K = 0 and E = W there
    auto rep = make_report(psi, r, KConvention::Subcritical);
    REQUIRE(std::abs(rep.K) < 1e-9);
    REQUIRE(rep.E == Catch::Approx(rep.W).margin(1e-9));
    REQUIRE(rep.Q_quartic == Catch::Approx(lp_power_sum(psi, 4) / 4.0).epsilon(1e-14));
}

TEST_CASE("meanflow constraint validation", "[functionals]") {
    auto g = make_grid(128, 10.0);
    Field psi = sech_profile(g, 1.0);
    CHECK_THROWS_AS(q_meanflow(psi, 0.0, 0.0), std::invalid_argument);
    REQUIRE(q_meanflow(psi, 1.0, 0.0) ==
            Catch::Approx(0.25 * nonlocal_quadratic(psi)).epsilon(1e-14));
    REQUIRE(q_meanflow(psi, 0.0, 1.0) ==
            Catch::Approx(q_quartic(psi)).epsilon(1e-14));
}

TEST_CASE("conserved quantities: mass and momentum of a plane wave", "[functionals]") {
    auto g = make_grid(256, 8.0);
    const double k0 = g->k[4];
    const double A0 = 0.7;
    Field u(g);
    for (std::size_t i = 0; i < g->n; ++i)
        u.v[i] = A0 * std::exp(cplx(0.0, k0 * g->x[i]));
    PhysicalParams p;
    p.b = 1.0;
    p.alpha = 0.5;
    p.beta = 0.25;
    auto c = conserved_quantities(u, p);
    const double box = g->length();
    REQUIRE(c.M == Catch::Approx(0.5 * A0 * A0 * box).epsilon(1e-12));
    REQUIRE(c.P == Catch::Approx((k0 * A0 * A0 - 0.5 * p.beta * std::pow(A0, 4)) * box)
                       .epsilon(1e-12));
}
