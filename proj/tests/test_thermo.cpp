#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ekwhitham/error.hpp"
#include "ekwhitham/thermo.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace ekw;

namespace {

OrbitSpec sw(double j, double v_inf, double v_star) {
    return {j, 0.0, v_inf, v_star, PressureLaw::shallow_water(), Capillarity::constant(1.0)};
}

const double kFixtures[][3] = {{1.0, 0.9, 1.2}, {1.0, 0.84, 1.0}, {4.0, 0.3, 0.5}, {2.0, 0.5, 0.6}, {0.5, 1.2, 2.0}};

}  // namespace

TEST_CASE("Lagrangian means against the closed-form oracle") {
    for (const auto& c : kFixtures) {
        Orbit o = build_orbit(sw(c[0], c[1], c[2]));
        ThermoState t = lagrangian_thermo(o);
        auto ref = oracle::shallow_water_moments(c[0], c[1], c[2]);
        const long double j = c[0];
        const long double lambda = -j * j * c[1] - 1.0L / ((long double)c[1] * c[1]);
        const long double mu = 1.0L / c[2] - 0.5L * j * j * c[2] * c[2] - lambda * c[2];
        long double mean_n = oracle::shallow_water_mean(c[0], c[1], c[2], [&](long double v) {
            return 1.0L / v - 0.5L * j * j * v * v - lambda * v - mu;
        });
        long double mean_f = oracle::shallow_water_mean(c[0], c[1], c[2], [](long double v) { return 1.0L / v; });
        long double delta = j * (ref.mean_v2 - ref.mean_v * ref.mean_v);
        CHECK(t.Delta == doctest::Approx((double)delta).epsilon(1e-7));
        CHECK(t.Theta == doctest::Approx((double)(2.0L * mean_n / ref.k)).epsilon(1e-7));
        CHECK(t.e == doctest::Approx((double)(mean_f + mean_n + 0.5L * j * delta)).epsilon(1e-8));
        CHECK(t.p_bar == doctest::Approx((double)(-lambda - j * j * ref.mean_v)).epsilon(1e-9));
    }
}

TEST_CASE("Eulerian identities") {
    for (const auto& c : kFixtures) {
        Orbit o = build_orbit(sw(c[0], c[1], c[2]));
        ThermoState t = lagrangian_thermo(o);
        EulerianState e = to_eulerian(t, o);
        CHECK(e.mean_rho * t.v_bar == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(e.K == doctest::Approx(t.k / t.v_bar).epsilon(1e-10));
        CHECK(e.D == doctest::Approx(e.rho_bar * e.rho_bar * t.Delta).epsilon(1e-10));
        CHECK(e.E == doctest::Approx(e.rho_bar * t.e).epsilon(1e-10));
        CHECK(e.Theta_eulerian == doctest::Approx(t.Theta).epsilon(1e-6));
        // momentum: <rho u>_E = (sigma + j <V>) / <V>
        CHECK(e.mean_rho_u == doctest::Approx(c[0] + t.sigma * e.rho_bar).epsilon(1e-10));
    }
}

TEST_CASE("vacuum") {
    Orbit o = build_orbit(sw(1.0, 0.9, 1.2));
    ThermoState t = lagrangian_thermo(o);
    t.v_bar = 0.0;
    try {
        to_eulerian(t, o);
        FAIL("expected vacuum");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Vacuum);
    }
}

TEST_CASE("Gibbs relations converge under step halving") {
    const Direction dirs[] = {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0.3, 0.2, 0.5, 1.0}};
    for (const auto& c : kFixtures) {
        const double scale = std::min(c[2] - c[1], 0.05 * c[1]);
        for (const auto& d : dirs) {
            GibbsResult r = gibbs_residual(sw(c[0], c[1], c[2]), d, 0.1 * scale);
            CAPTURE(c[0]);
            CAPTURE(c[1]);
            CHECK(r.order >= 1.9);
            CHECK(r.eulerian_order >= 1.9);
        }
    }
    // a van der Waals orbit in the single-loop regime
    OrbitSpec vdw{0.3, 0.0, 2.0, 2.2, PressureLaw::van_der_waals(0.4), Capillarity::constant(1.0)};
    GibbsResult r = gibbs_residual(vdw, {0, 0.5, 1, 0}, 0.01);
    CHECK(r.order >= 1.9);
    CHECK(r.eulerian_order >= 1.9);
}

TEST_CASE("a wrong pressure term breaks the relation") {
    // sanity check of the residual itself: an O(h) error shows up as order ~1
    OrbitSpec s = sw(1.0, 0.9, 1.2);
    auto e_at = [&](double h) {
        OrbitSpec q = s;
        q.v_star += h;
        ThermoState t = lagrangian_thermo(build_orbit(q));
        return t;
    };
    ThermoState mid = e_at(0.0);
    auto bad = [&](double h) {
        ThermoState p = e_at(h), m = e_at(-h);
        return std::abs((p.e - m.e) - (+mid.p_bar * (p.v_bar - m.v_bar) + mid.Theta * (p.k - m.k) +
                                       mid.j * (p.Delta - m.Delta)));
    };
    CHECK(std::log2(bad(0.01) / bad(0.005)) < 1.5);
}

TEST_CASE("convexity report") {
    ConvexityReport r = convexity_check(sw(1.0, 0.9, 1.2));
    CHECK_FALSE(r.singular_map);
    CHECK(r.asymmetry < 1e-3);
    CHECK(r.verdict != Convexity::Indeterminate);
    CHECK(std::string(to_string(Convexity::StrictlyConvex)) == "strictly_convex");
}
