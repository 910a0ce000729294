#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracsemi/subordinator.hpp"
#include "fracsemi/torus_grid.hpp"

using namespace fracsemi;

// mu = 1/2 stable density in closed form (Levy distribution):
//   f(s) = (1 / (2 sqrt(pi))) s^(-3/2) exp(-1/(4s))
static double levy_half(double s) {
    return 0.5 / std::sqrt(std::numbers::pi) * std::pow(s, -1.5) *
           std::exp(-0.25 / s);
}

TEST_CASE("pointwise density matches the mu = 1/2 closed form") {
    for (double s : {0.05, 0.25, 1.0, 4.0, 50.0, 1e4}) {
        double got = stable_density_point(0.5, s);
        CHECK(got == doctest::Approx(levy_half(s)).epsilon(1e-9));
    }
}

TEST_CASE("pointwise density is nonnegative and decays in both tails") {
    for (double mu : {0.25, 0.5, 0.75, 0.9}) {
        CHECK(stable_density_point(mu, 1e-8) == 0.0);  // essential zero
        CHECK(stable_density_point(mu, 1.0) > 0.0);
        CHECK(stable_density_point(mu, 1e6) < stable_density_point(mu, 1e2));
        CHECK(stable_density_point(mu, 1e2) >= 0.0);
    }
}

TEST_CASE("build_density validates input") {
    CHECK_THROWS_AS(build_density(1.0), config_error);
    CHECK_THROWS_AS(build_density(0.0), config_error);
    CHECK_THROWS_AS(build_density(0.5, 10), config_error);
}

TEST_CASE("tabulated density carries tiny mass and clamp defects") {
    for (double mu : {0.25, 0.5, 0.75}) {
        auto d = build_density(mu);
        CHECK(d.mass_defect < 1e-6);
        CHECK(d.clamp_mass < 1e-9);
        CHECK(d.tail_coeff > 0.0);
        CHECK(d.tail_mass > 0.0);
        CHECK(d.s_nodes.size() == d.values.size());
    }
}

TEST_CASE("evaluate interpolates the table and extends by the fitted tail") {
    auto d = build_density(0.5);
    for (double s : {0.5, 1.0, 3.0, 20.0}) {
        CHECK(d.evaluate(s) == doctest::Approx(levy_half(s)).epsilon(1e-5));
    }
    // Beyond the last node the algebraic tail c s^(-1-mu) takes over.
    double far = 4.0 * d.s_nodes.back();
    CHECK(d.evaluate(far) ==
          doctest::Approx(d.tail_coeff * std::pow(far, -1.5)).epsilon(1e-12));
    CHECK(d.evaluate(0.5 * d.s_nodes.front()) == 0.0);
}

TEST_CASE("Laplace transform reproduces exp(-lambda^mu)") {
    for (double mu : {0.25, 0.5, 0.75}) {
        auto d = build_density(mu);
        for (double lambda : {0.1, 1.0, 10.0}) {
            double exact = std::exp(-std::pow(lambda, mu));
            CHECK(laplace_transform(d, lambda) ==
                  doctest::Approx(exact).epsilon(2e-5));
        }
    }
}

TEST_CASE("subordination against the heat semigroup matches the multiplier") {
    TorusGrid g(1, 20.0, 128);
    Field f = random_field(g, 11);
    for (double mu : {0.5, 0.75}) {
        FractionalOrder order(mu);
        auto d = build_density(mu);
        auto heat = [](const Field& u, double s) {
            return free_semigroup_apply(u, FractionalOrder(1.0), s);
        };
        for (double t : {0.25, 1.0}) {
            Field sub = subordinate(f, d, t, heat);
            Field direct = free_semigroup_apply(f, order, t);
            double worst = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                worst = std::max(worst, std::abs(sub[i] - direct[i]));
            CHECK(worst < 1e-4);
        }
    }
    CHECK_THROWS_AS(subordinate(f, build_density(0.5), -1.0,
                                [](const Field& u, double) { return u; }),
                    config_error);
}
