#include <doctest.h>

#include <cmath>

#include "fracsemi/decay.hpp"

using namespace fracsemi;

TEST_CASE("a_star closed forms and invariances") {
    TorusGrid g(1, 20.0, 256);
    FractionalOrder mu(0.5);
    CHECK(a_star(Field(g, 0.0), mu) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(a_star(Field(g, 0.7), mu) == doctest::Approx(0.7).epsilon(1e-10));

    // Shift invariance: a_*(V + c) = a_*(V) + c.
    Field V = random_field(g, 31, 0.02, true);
    double base = a_star(V, mu);
    Field Vc = V;
    for (auto& v : Vc.values) v += 0.3;
    CHECK(a_star(Vc, mu) == doctest::Approx(base + 0.3).epsilon(1e-9));

    // Monotonicity: V1 >= V2 implies a_*(V1) >= a_*(V2).
    CHECK(a_star(Vc, mu) >= base - 1e-12);
}

TEST_CASE("a_star iterative route matches the constant closed form above the cap") {
    TorusGrid g(2, 10.0, 128);  // 16384 points: beyond the dense oracle
    CHECK(a_star(Field(g, 0.4), FractionalOrder(0.5)) ==
          doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("estimate_omega: flat traces give zero, constants give the constant") {
    TorusGrid g(1, 20.0, 256);
    FractionalOrder mu(0.5);
    EvolutionConfig cfg;
    cfg.engine = EngineKind::dense_oracle;
    std::vector<double> ts;
    for (int i = 0; i <= 12; ++i) ts.push_back(0.5 + 0.25 * i);
    CHECK(estimate_omega(Field(g, 0.0), mu, kInfinity, ts, cfg) ==
          doctest::Approx(0.0));
    for (double p : {1.0, 2.0, kInfinity}) {
        CHECK(estimate_omega(Field(g, 1.0), mu, p, ts, cfg) ==
              doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("decay_rate_chain verdicts") {
    // Consistent pair within the sandwich.
    auto ok = decay_rate_chain(1.0, 0.9, 1, 0.5);
    CHECK(ok.ok());
    CHECK(ok.tol == doctest::Approx(0.05));
    // Upper violation: omega_inf above omega_2.
    auto bad_upper = decay_rate_chain(0.5, 0.9, 1, 0.5);
    CHECK(!bad_upper.upper_ok);
    // Lower violation: omega_inf far below omega_2 / (1 + N/(4 mu)).
    auto bad_lower = decay_rate_chain(1.0, 0.1, 1, 0.5);
    CHECK(!bad_lower.lower_ok);
    // mu = 1 requires equality within tolerance.
    auto gauss = decay_rate_chain(1.0, 0.8, 1, 1.0);
    CHECK(!gauss.equal_ok);
    CHECK(decay_rate_chain(1.0, 0.99, 1, 1.0).ok());
    // Tiny rates switch to the absolute tolerance.
    CHECK(decay_rate_chain(5e-3, 5e-3, 1, 0.5).tol == doctest::Approx(1e-3));
}

TEST_CASE("omega_equals_astar closes the gap for a confining potential") {
    TorusGrid g(1, 20.0, 256);
    Potential V = make_constant(g, 0.8);
    auto res = omega_equals_astar(V.values, FractionalOrder(0.5));
    CHECK(res.a_star == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(res.omega2 == doctest::Approx(0.8).epsilon(0.02));
    CHECK(res.rel_gap <= 0.02);
}

TEST_CASE("certificate for a constant potential") {
    TorusGrid g(1, 20.0, 256);
    FractionalOrder mu(0.5);
    Potential V = make_constant(g, 0.5);
    TruncatedPotential VM = truncate(V, 1.0);  // clamp above sup: V_M = V
    TorusGrid wide(1, 160.0, 4096);
    auto profile = build_profile(0.5, wide);
    double c = ball_criterion(VM, 1.0).inf_value;
    REQUIRE(c > 0.0);
    EvolutionConfig cfg;
    cfg.engine = EngineKind::splitting;
    cfg.dt = 0.005;
    auto cert = decay_certificate(VM, mu, 0.5, 1.0, c, profile, cfg);
    CHECK(cert.ok);
    CHECK(cert.bound_value < 1.0);
    CHECK(cert.simulated_value == doctest::Approx(std::exp(-0.25)).epsilon(1e-6));
    CHECK(cert.simulated_value <= cert.bound_value + 1e-6);
    // Preconditions: t must stay below 1 / ||V_M||.
    CHECK_THROWS_AS(decay_certificate(VM, mu, 3.0, 1.0, c, profile, cfg), config_error);
    CHECK_THROWS_AS(decay_certificate(VM, mu, 0.5, 1.0, 0.0, profile, cfg), config_error);
}

TEST_CASE("assemble_report verdicts and JSON shape") {
    TorusGrid g(1, 20.0, 256);
    Potential zero = make_constant(g, 0.0);
    Potential small = make_constant(g, 1e-6);
    Potential strong = make_constant(g, 1.0);

    ReportInputs in;
    in.potential = &zero;
    in.order = FractionalOrder(0.5);
    in.ball_criterion_table = {{0.5, 0.0}, {1.0, 0.0}};
    CHECK(assemble_report(in).verdict == DecayVerdict::no_decay);

    in.potential = &small;
    in.a_star = 1e-6;
    in.ball_criterion_table = {{1.0, 1e-6}};
    CHECK(assemble_report(in).verdict == DecayVerdict::inconclusive);

    in.potential = &strong;
    in.a_star = 1.0;
    in.omega_2 = 1.0;
    in.omega_inf = 1.0;
    in.chain = decay_rate_chain(1.0, 1.0, 1, 0.5);
    in.ball_criterion_table = {{1.0, 2.0}};
    DecayReport rep = assemble_report(in);
    CHECK(rep.verdict == DecayVerdict::decay);

    auto j = to_json(rep);
    CHECK(j["schema"] == 1);
    CHECK(j["grid"]["points"] == 256);
    CHECK(j["potential_family"] == "constant");
    CHECK(j["omega_2"] == doctest::Approx(1.0));
    CHECK(j["a_star"] == doctest::Approx(1.0));
    CHECK(j["verdict"] == "decay");
    CHECK(j.contains("chain"));
    CHECK(j.contains("ball_criterion_table"));
}

TEST_CASE("verdict names") {
    CHECK(verdict_name(DecayVerdict::decay) == "decay");
    CHECK(verdict_name(DecayVerdict::no_decay) == "no_decay");
    CHECK(verdict_name(DecayVerdict::inconclusive) == "inconclusive");
}
