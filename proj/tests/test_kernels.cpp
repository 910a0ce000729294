#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracsemi/kernels.hpp"
#include "fracsemi/torus_grid.hpp"

using namespace fracsemi;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("gaussian profile peak matches (4 pi)^(-1/2)") {
    TorusGrid g(1, 40.0, 1024);
    auto p = build_profile(1.0, g);
    CHECK(p.values[0] == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-10));
    // Pointwise Gaussian along the axis.
    for (int i : {1, 5, 40}) {
        double z = g.coord(i);
        double exact = std::exp(-z * z / 4.0) / std::sqrt(4.0 * kPi);
        CHECK(p.values[i] == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("mu = 1/2 profile approaches the Poisson kernel") {
    TorusGrid g(1, 80.0, 2048);
    auto p = build_profile(0.5, g);
    // k0(z) = (1/pi) / (1 + z^2); periodization perturbs the heavy tail, so
    // compare near the core.
    for (double z : {0.0, 1.0, 3.0, 8.0}) {
        double exact = 1.0 / (kPi * (1.0 + z * z));
        CHECK(p.value_at_radius(z) == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("fractional constant closed forms") {
    CHECK(fractional_constant(1, 0.5) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
    CHECK(fractional_constant(2, 0.5) ==
          doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(fractional_constant(1, 0.25) > 0.0);
    CHECK_THROWS_AS(fractional_constant(3, 0.5), config_error);
}

TEST_CASE("profile bounds H and I sandwich each other") {
    for (double mu : {0.25, 0.5, 0.75}) {
        const double ratio = std::pow(2.0, 0.5 * (1.0 + 2.0 * mu));
        for (double rho : {0.0, 0.5, 1.0, 2.0, 10.0}) {
            double H = profile_bound_H(1, mu, rho);
            double I = profile_bound_I(1, mu, rho);
            CHECK(I <= H + 1e-15);
            CHECK(H <= ratio * I + 1e-15);
        }
    }
}

TEST_CASE("certify_bounds brackets the profile for mu < 1") {
    TorusGrid g(1, 80.0, 2048);
    for (double mu : {0.5, 0.75}) {
        auto p = build_profile(mu, g);
        auto [c1, c2] = certify_bounds(p);
        CHECK(c1 > 0.0);
        CHECK(c1 <= c2);
        // Sample at grid nodes so interpolation cannot dip below the
        // certified nodal infimum.
        for (int i : {0, 25, 128, 384}) {
            double z = i * g.spacing();
            double k = p.value_at_radius(z);
            double H = profile_bound_H(1, mu, z);
            CHECK(k >= c1 * H - 1e-12);
            CHECK(k <= c2 * H + 1e-12);
        }
    }
}

TEST_CASE("certify_bounds rejects the gaussian case") {
    TorusGrid g(1, 40.0, 1024);
    auto p = build_profile(1.0, g);
    CHECK_THROWS_AS(certify_bounds(p), config_error);
}

TEST_CASE("value_at applies the self-similar rescaling") {
    TorusGrid g(1, 80.0, 2048);
    auto p = build_profile(0.5, g);
    for (double t : {0.25, 1.0, 4.0}) {
        for (double rho : {0.0, 1.0, 5.0}) {
            double expected = std::pow(t, -1.0) * p.value_at_radius(rho / t);
            CHECK(p.value_at(t, rho) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    // Gaussian cross-check: k(t, z) = (4 pi t)^(-1/2) exp(-z^2/4t).
    TorusGrid gg(1, 40.0, 1024);
    auto pg = build_profile(1.0, gg);
    double exact = std::exp(-1.0 / 2.0) / std::sqrt(2.0 * kPi);
    CHECK(pg.value_at(0.5, 1.0) == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("strict mode rejects under-resolved grids, relaxed mode builds") {
    TorusGrid coarse(1, 80.0, 256);  // xi_max too small for mu = 0.25
    CHECK_THROWS_AS(build_profile(0.25, coarse), config_error);
    ProfileOptions relaxed;
    relaxed.strict = false;
    auto p = build_profile(0.25, coarse, relaxed);
    // Mass is exact by construction even when the shape is unresolved.
    double mass = 0.0;
    for (double v : p.values.values) mass += v;
    CHECK(mass * coarse.spacing() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profile mass is one for resolved orders") {
    TorusGrid g(1, 80.0, 2048);
    for (double mu : {0.5, 0.75, 1.0}) {
        auto p = build_profile(mu, g);
        double mass = 0.0;
        for (double v : p.values.values) mass += v;
        CHECK(mass * g.spacing() == doctest::Approx(1.0).epsilon(1e-12));
    }
}
