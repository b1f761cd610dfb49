#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "solwave/gauge.hpp"

using namespace solwave;

namespace {
Field gaussian(GridPtr g, double amp, double w) {
    Field f(g);
    for (std::size_t i = 0; i < g->n; ++i)
        f.v[i] = amp * std::exp(-g->x[i] * g->x[i] / (w * w));
    return f;
}
}  // namespace

TEST_CASE("gauge round trip", "[gauge]") {
    auto g = make_grid(1u << 10, 30.0);
    GaugeContext ctx;
    ctx.p.alpha = 0.6;
    ctx.p.beta = -0.2;
    Field u = gaussian(g, 1.3, 2.0);
    for (std::size_t i = 0; i < g->n; ++i)
        u.v[i] *= std::exp(cplx(0.0, 0.3 * std::sin(g->x[i] / 10.0)));
    Field back = gauge_inverse(gauge_forward(u, ctx), ctx);
    REQUIRE(norm_l2(back - u) < 1e-12 * norm_l2(u));
    // the map is modulus-preserving
    Field phi = gauge_forward(u, ctx);
    for (std::size_t i = 0; i < g->n; ++i)
        REQUIRE(std::abs(phi.v[i]) == Catch::Approx(std::abs(u.v[i])).margin(1e-13));
}

TEST_CASE("gauge is identity when alpha + beta = 0", "[gauge]") {
    auto g = make_grid(256, 10.0);
    GaugeContext ctx;
    ctx.p.alpha = 1.0;
    ctx.p.beta = -1.0;
    Field u = gaussian(g, 1.0, 1.0);
    REQUIRE(norm_l2(gauge_forward(u, ctx) - u) == 0.0);
}

TEST_CASE("phase admissibility on the box", "[gauge]") {
    const double L = 32.0 * std::numbers::pi;
    // c L / (2 pi) must be an integer: c = m/16 here
    REQUIRE(phase_admissible(1.0 / 16.0, L));
    REQUIRE(phase_admissible(1.0, L));
    REQUIRE(!phase_admissible(0.03, L));
    // admissible speeds are multiples of 2 pi / (2L)... here 1/16
    REQUIRE(nearest_admissible_c(0.05, L) == Catch::Approx(1.0 / 16.0));
    REQUIRE(nearest_admissible_c(0.02, L) == Catch::Approx(0.0).margin(1e-15));
    auto g = make_grid(64, L);
    Field u = gaussian(g, 1.0, 1.0);
    CHECK_THROWS_AS(phase_rotate(u, 0.03), PhaseWrapError);
    try {
        phase_rotate(u, 0.03);
    } catch (const PhaseWrapError& e) {
        REQUIRE(phase_admissible(e.suggested_c, L));
    }
    Field rot = phase_rotate(u, 1.0);
    REQUIRE(norm_l2(phase_unrotate(rot, 1.0) - u) < 1e-12 * norm_l2(u));
}

TEST_CASE("stationary reconstruction reduces to the gauge phase", "[gauge]") {
    auto g = make_grid(1u << 10, 32.0 * std::numbers::pi);
    PhysicalParams p;  // alpha + beta = 0: no gauge winding at all
    p.alpha = 0.5;
    p.beta = -0.5;
    p.omega = -1.0;
    Field psi = gaussian(g, 1.0, 2.0);
    auto rec = reconstruct_traveling_wave(psi, p, 0.0);
    REQUIRE(rec.phase_periodic);
    REQUIRE(norm_l2(rec.u - psi) < 1e-12 * norm_l2(psi));
    // at t > 0 only the e^{i omega t} phase appears
    auto rec2 = reconstruct_traveling_wave(psi, p, 0.7);
    for (std::size_t i = 0; i < g->n; ++i) {
        const cplx want = psi.v[i] * std::exp(cplx(0.0, p.omega * 0.7));
        REQUIRE(std::abs(rec2.u.v[i] - want) < 1e-12);
    }
}

TEST_CASE("reconstruction flags non-periodic composite phases", "[gauge]") {
    auto g = make_grid(1u << 10, 32.0 * std::numbers::pi);
    PhysicalParams p;
    p.alpha = 1.0;  // winding = (alpha+beta)/4 * mass, generically not 2 pi k
    Field psi = gaussian(g, 1.2, 2.0);
    CHECK_THROWS_AS(reconstruct_traveling_wave(psi, p, 0.0), PhaseWrapError);
    auto rec = reconstruct_traveling_wave(psi, p, 0.0, /*diagnostic=*/true);
    REQUIRE(!rec.phase_periodic);
    REQUIRE(rec.gauge_winding != 0.0);
    for (std::size_t i = 0; i < g->n; ++i)
        REQUIRE(std::abs(rec.u.v[i]) == Catch::Approx(std::abs(psi.v[i])).margin(1e-13));
}

TEST_CASE("traveling reconstruction shifts the modulus", "[gauge]") {
    auto g = make_grid(1u << 11, 32.0 * std::numbers::pi);
    PhysicalParams p;
    p.alpha = 0.3;
    p.beta = -0.3;
    p.c = 1.0;  // admissible: c L / 2 pi = 16
    p.omega = -1.0;
    Field psi = gaussian(g, 1.0, 3.0);
    const double t = 2.0;
    auto rec = reconstruct_traveling_wave(psi, p, t);
    Field want = spectral_shift(psi, p.c * t);
    for (std::size_t i = 0; i < g->n; ++i)
        REQUIRE(std::abs(rec.u.v[i]) ==
                Catch::Approx(std::abs(want.v[i])).margin(1e-10));
}
