#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "plgb/randexpr.hpp"

using namespace plgb;
using fixtures::expr;
using fixtures::form;

TEST_CASE("bracket covariance of the self action") {
    const auto& g = fixtures::su2();
    const auto& act = *g.action;
    const size_t H = act.fibre().index_of("H");
    // {a,b} acted by H equals {a acted,b} + {a,b acted}; the cocycle term
    // vanishes because the cobracket kills H
    CHECK(plg_action_defect(act, g.poisson, H, expr(g, "a"), expr(g, "b")).is_zero());
    CHECK(act.act_scalar(H, g.poisson.bracket(expr(g, "a"), expr(g, "b"))) ==
          expr(g, "-a*b"));
    // constants are transparent
    const size_t Xp = act.fibre().index_of("X+");
    CHECK(plg_action_defect(act, g.poisson, Xp, ScalarExpr::constant(g.ring, 1),
                            expr(g, "a*d - b"))
              .is_zero());
}

TEST_CASE("bracket covariance of the circle action on su2") {
    const auto& g = fixtures::hopf();
    const auto& act = *g.action;
    // the weight field kills {a,d} = -bc, and the two bracket terms cancel
    CHECK(act.act_scalar(0, g.poisson.bracket(expr(g, "a"), expr(g, "d"))).is_zero());
    CHECK(plg_action_defect(act, g.poisson, 0, expr(g, "a"), expr(g, "d")).is_zero());
}

TEST_CASE("connection covariance: worked weight computation") {
    const auto& g = fixtures::hopf();
    const auto& act = *g.action;
    // H acting on nabla_{da} e+ with weights: both routes give -3/2 a e+
    const OneForm da = differential(expr(g, "a"), g.frame);
    const OneForm ep = OneForm::unit(g.frame, 1);
    CHECK(act.act_form(0, g.connection.apply(g.poisson, da, ep)) ==
          form(g, {{"e+", "-3/2*a"}}));
    CHECK(conn_covariance_defect(act, g.poisson, g.connection, 0, da, ep).is_zero());
}

TEST_CASE("connection covariance of the self action, ladder generator") {
    const auto& g = fixtures::su2();
    const auto& act = *g.action;
    const size_t Xp = act.fibre().index_of("X+");
    const OneForm da = differential(expr(g, "a"), g.frame);
    const OneForm e0 = OneForm::unit(g.frame, 0);
    // both sides are -c e0: left-invariant frames are inert and a moves to c
    CHECK(act.act_form(Xp, g.connection.apply(g.poisson, da, e0)) ==
          form(g, {{"e0", "-c"}}));
    CHECK(g.connection.apply(g.poisson, differential(act.act_scalar(Xp, expr(g, "a")),
                                                     g.frame),
                             e0) == form(g, {{"e0", "-c"}}));
    CHECK(conn_covariance_defect(act, g.poisson, g.connection, Xp, da, e0).is_zero());
}

TEST_CASE("covariance defects are module maps in both form slots") {
    // the cocycle interior term must use the action's own fields; this is
    // what makes the defect function-linear, so spanning-set zeros extend
    const auto& g = fixtures::su2();
    const auto& act = *g.action;
    std::mt19937_64 rng(43);
    for (size_t b = 0; b < act.fibre().dim(); ++b)
        for (int it = 0; it < 6; ++it) {
            const OneForm eta = random_oneform(g.ring, g.frame, rng, 3);
            const OneForm tau = random_oneform(g.ring, g.frame, rng, 3);
            const ScalarExpr p = random_scalar(g.ring, g.frame, rng, 3);
            const OneForm d0 = conn_covariance_defect(act, g.poisson, g.connection, b, eta, tau);
            CHECK(conn_covariance_defect(act, g.poisson, g.connection, b, eta.scaled(p), tau) ==
                  d0.scaled(p));
            CHECK(conn_covariance_defect(act, g.poisson, g.connection, b, eta, tau.scaled(p)) ==
                  d0.scaled(p));
        }
}

TEST_CASE("plg defect is a derivation in each slot") {
    const auto& g = fixtures::hopf();
    const auto& act = *g.action;
    std::mt19937_64 rng(47);
    for (int it = 0; it < 10; ++it) {
        const ScalarExpr p = random_scalar(g.ring, g.frame, rng, 3);
        const ScalarExpr q = random_scalar(g.ring, g.frame, rng, 3);
        const ScalarExpr r = random_scalar(g.ring, g.frame, rng, 3);
        // defect(pq, r) = p defect(q,r) + q defect(p,r) given zero cobracket
        CHECK(plg_action_defect(act, g.poisson, 0, p * q, r) ==
              p * plg_action_defect(act, g.poisson, 0, q, r) +
                  q * plg_action_defect(act, g.poisson, 0, p, r));
    }
}

TEST_CASE("schouten covariance on exact and mixed pairs") {
    const auto& g = fixtures::su2();
    const auto& act = *g.action;
    const size_t H = act.fibre().index_of("H");
    const size_t Xp = act.fibre().index_of("X+");
    const OneForm da = differential(expr(g, "a"), g.frame);
    const OneForm db = differential(expr(g, "b"), g.frame);
    CHECK(schouten_covariance_defect(act, g.poisson, H, da, db).is_zero());
    CHECK(schouten_covariance_defect(act, g.poisson, H, OneForm::unit(g.frame, 1), db)
              .is_zero());
    // the ladder elements carry a nonzero cocycle bivector term
    CHECK(schouten_covariance_defect(act, g.poisson, Xp, OneForm::unit(g.frame, 1), db)
              .is_zero());
    std::mt19937_64 rng(53);
    const OneForm eta = random_oneform(g.ring, g.frame, rng, 3);
    const OneForm tau = random_oneform(g.ring, g.frame, rng, 3);
    CHECK(schouten_covariance_defect(act, g.poisson, Xp, eta, tau).is_zero());
}

TEST_CASE("form action tables are cross-checked against the Cartan formula") {
    const auto& g = fixtures::hopf();
    // replacing the weight-2 entry with a wrong one must be caught
    auto bad = g.source;
    bad["action"]["form_action"]["H"]["e+"] = {{"e+", "3"}};
    CHECK_THROWS_WITH_AS(GeometrySpec::from_json(bad, "bad"),
                         doctest::Contains("Cartan"), spec_error);
}
