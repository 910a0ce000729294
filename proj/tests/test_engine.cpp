#include <doctest.h>

#include <cmath>

#include "fracsemi/engine.hpp"
#include "fracsemi/potential.hpp"
#include "fracsemi/torus_grid.hpp"

using namespace fracsemi;

namespace {

EvolutionConfig cfg_for(EngineKind k, double dt = 0.01) {
    EvolutionConfig c;
    c.engine = k;
    c.dt = dt;
    return c;
}

double sup_diff(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("zero potential reduces every engine to the free semigroup") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 21);
    Field zero(g, 0.0);
    FractionalOrder mu(0.5);
    Field exact = free_semigroup_apply(u0, mu, 0.8);
    for (auto k : {EngineKind::picard, EngineKind::splitting, EngineKind::dense_oracle}) {
        auto r = evolve(u0, zero, mu, 0.8, cfg_for(k));
        CHECK(sup_diff(r.final, exact) < 1e-8);
    }
}

TEST_CASE("constant potential factors out exactly") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 22);
    Field V(g, 0.9);
    FractionalOrder mu(0.75);
    Field exact = free_semigroup_apply(u0, mu, 1.0);
    for (auto& v : exact.values) v *= std::exp(-0.9);
    CHECK(sup_diff(evolve(u0, V, mu, 1.0, cfg_for(EngineKind::picard)).final, exact) < 1e-8);
    CHECK(sup_diff(evolve(u0, V, mu, 1.0, cfg_for(EngineKind::dense_oracle)).final, exact) < 1e-8);
    // Splitting is exact for constant V (the operators commute).
    CHECK(sup_diff(evolve(u0, V, mu, 1.0, cfg_for(EngineKind::splitting, 0.1)).final, exact) < 1e-10);
}

TEST_CASE("engines agree on a generic potential") {
    TorusGrid g(1, 20.0, 256);
    Field u0 = random_field(g, 23);
    Potential V = make_well(g, 1.0, 2.0);
    FractionalOrder mu(0.5);
    Field fp = evolve(u0, V, mu, 0.5, cfg_for(EngineKind::picard)).final;
    Field fd = evolve(u0, V, mu, 0.5, cfg_for(EngineKind::dense_oracle)).final;
    Field fs = evolve(u0, V, mu, 0.5, cfg_for(EngineKind::splitting, 0.001)).final;
    CHECK(sup_diff(fp, fd) < 1e-6);
    CHECK(sup_diff(fs, fd) < 1e-5);
}

TEST_CASE("splitting satisfies the discrete semigroup law") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 24);
    Potential V = make_bump_array(g, 1.0, 0.5, 5.0);
    FractionalOrder mu(0.5);
    auto cfg = cfg_for(EngineKind::splitting, 0.1);
    Field joint = evolve(u0, V, mu, 0.5, cfg).final;
    Field step1 = evolve(u0, V, mu, 0.2, cfg).final;
    Field two = evolve(step1, V, mu, 0.3, cfg).final;
    CHECK(sup_diff(joint, two) < 1e-12);
}

TEST_CASE("evolution results carry trace and bookkeeping") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 25, 0.02, true);
    Potential V = make_well(g, 1.0, 2.0);
    auto r = evolve(u0, V, FractionalOrder(0.5), 1.0, cfg_for(EngineKind::splitting, 0.1));
    CHECK(r.steps == 10);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.front().t == doctest::Approx(0.0));
    CHECK(r.trace.back().t == doctest::Approx(1.0));
    // Norm trace of a nonnegative solution is nonincreasing.
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(r.trace[i].l1 <= r.trace[i - 1].l1 + 1e-12);
        CHECK(r.trace[i].linf <= r.trace[i - 1].linf + 1e-12);
    }
    CHECK_THROWS_AS(evolve(u0, V, FractionalOrder(0.5), -1.0, cfg_for(EngineKind::splitting)),
                    config_error);
}

TEST_CASE("dense oracle refuses grids above the cap") {
    TorusGrid g(2, 10.0, 128);  // 16384 points
    Field u0(g, 1.0);
    Field V(g, 0.5);
    CHECK_THROWS_AS(evolve(u0, V, FractionalOrder(0.5), 0.1, cfg_for(EngineKind::dense_oracle)),
                    capability_error);
}

TEST_CASE("operator norms: contraction and the constant-potential value") {
    TorusGrid g(1, 20.0, 128);
    Field V(g, 1.0);
    FractionalOrder mu(0.5);
    auto cfg = cfg_for(EngineKind::dense_oracle);
    double n_inf = operator_norm_inf(V, mu, 1.0, cfg);
    CHECK(n_inf == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(operator_norm_2(V, mu, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    Field Vneg(g, 0.0);
    Vneg[0] = -1.0;
    CHECK_THROWS_AS(operator_norm_inf(Vneg, mu, 1.0, cfg), config_error);
}

TEST_CASE("comparison check holds for ordered potentials") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 26, 0.02, true);
    Potential V1 = make_well(g, 2.0, 2.0);
    Potential V2 = make_well(g, 1.0, 2.0);
    auto rep = comparison_check(u0, V1.values, V2.values, FractionalOrder(0.5), 0.5,
                                cfg_for(EngineKind::dense_oracle), 1e-8);
    CHECK(rep.ok);
    CHECK(rep.max_negative <= 1e-8);
    CHECK(rep.max_order_violation <= 1e-8);
    CHECK(rep.max_free_violation <= 1e-8);
    // Reversed order must be rejected up front.
    CHECK_THROWS_AS(comparison_check(u0, V2.values, V1.values, FractionalOrder(0.5), 0.5,
                                     cfg_for(EngineKind::dense_oracle), 1e-8),
                    config_error);
}

TEST_CASE("truncation deltas shrink along the M ladder and vanish past sup V") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 27, 0.02, true);
    Potential V = make_bump_array(g, 3.0, 0.5, 5.0);
    auto deltas = truncation_convergence(u0, V, FractionalOrder(0.5), 0.5,
                                         {0.5, 1.0, 2.0, 4.0},
                                         cfg_for(EngineKind::dense_oracle));
    REQUIRE(deltas.size() == 4);
    for (std::size_t i = 1; i < deltas.size(); ++i)
        CHECK(deltas[i].dinf <= deltas[i - 1].dinf + 1e-12);
    CHECK(deltas.back().dinf < 1e-12);  // M = 4 > sup V: V_M = V
    CHECK_THROWS_AS(truncation_convergence(u0, V, FractionalOrder(0.5), 0.5, {2.0, 1.0},
                                           cfg_for(EngineKind::dense_oracle)),
                    config_error);
}

TEST_CASE("picard window cap enforces the contraction condition") {
    TorusGrid g(1, 20.0, 128);
    Field u0 = random_field(g, 28);
    Field V(g, 2.0);
    EvolutionConfig cfg = cfg_for(EngineKind::picard);
    cfg.window = 1.0;  // T0 ||V|| = 2 > 1/2
    CHECK_THROWS_AS(evolve(u0, V, FractionalOrder(0.5), 1.0, cfg), config_error);
}
