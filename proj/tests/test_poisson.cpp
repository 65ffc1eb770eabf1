#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "plgb/randexpr.hpp"

using namespace plgb;
using fixtures::expr;
using fixtures::form;

TEST_CASE("bracket values and Leibniz extension") {
    const auto& g = fixtures::su2();
    CHECK(g.poisson.bracket(expr(g, "a"), expr(g, "d")) == expr(g, "-b*c"));
    const ScalarExpr p = expr(g, "a*b - c^2");
    CHECK(g.poisson.bracket(p, p).is_zero());
    CHECK(g.poisson.bracket(expr(g, "a^2"), expr(g, "b")) == expr(g, "-a^2*b"));
}

TEST_CASE("bracket is a biderivation") {
    const auto& g = fixtures::su2();
    std::mt19937_64 rng(7);
    for (int it = 0; it < 30; ++it) {
        const ScalarExpr p = random_scalar(g.ring, g.frame, rng, 4);
        const ScalarExpr q = random_scalar(g.ring, g.frame, rng, 4);
        const ScalarExpr r = random_scalar(g.ring, g.frame, rng, 4);
        CHECK(g.poisson.bracket(p * q, r) ==
              p * g.poisson.bracket(q, r) + q * g.poisson.bracket(p, r));
    }
}

TEST_CASE("jacobiator vanishes for the bundled structures") {
    const auto& g = fixtures::su2();
    CHECK(g.poisson.jacobiator(expr(g, "a"), expr(g, "b"), expr(g, "c")).is_zero());
    const ScalarExpr p = expr(g, "a*d - 2*b");
    const ScalarExpr q = expr(g, "c");
    CHECK(g.poisson.jacobiator(p, p, q).is_zero());

    // sphere structure, standalone
    auto ring = RingSpec::make({"z", "zs", "x"}, {}, {{"zs*z", "x-x^2"}}, {"2*x-1"});
    auto pi = PoissonStructure::make(
        ring, {{"z,x", parse_expr(ring, "z*x")},
               {"zs,x", parse_expr(ring, "-zs*x")},
               {"z,zs", parse_expr(ring, "x-2*x^2")}});
    pi.check_respects_relations();
    CHECK(pi.jacobiator(parse_expr(ring, "z"), parse_expr(ring, "zs"), parse_expr(ring, "x"))
              .is_zero());
}

TEST_CASE("antisymmetric storage rejects diagonal and doubled entries") {
    const auto& g = fixtures::su2();
    CHECK_THROWS_WITH_AS(
        PoissonStructure::make(g.ring, {{"a,a", expr(g, "b")}}),
        doctest::Contains("antisymmetry"), ring_error);
    CHECK_THROWS_WITH_AS(
        PoissonStructure::make(g.ring,
                               {{"a,b", expr(g, "b")}, {"b,a", expr(g, "b")}}),
        doctest::Contains("twice"), ring_error);
}

TEST_CASE("schouten bracket of exact forms") {
    const auto& g = fixtures::su2();
    const OneForm da = differential(expr(g, "a"), g.frame);
    const OneForm db = differential(expr(g, "b"), g.frame);
    // [da,db] = d{a,b} = -1/2 d(ab)
    CHECK(schouten(g.poisson, da, db) == form(g, {{"e+", "-1/2*b^2"}, {"e-", "-1/2*a^2"}}));
    CHECK(schouten(g.poisson, da, da).is_zero());

    std::mt19937_64 rng(13);
    for (int it = 0; it < 30; ++it) {
        const ScalarExpr p = random_scalar(g.ring, g.frame, rng, 4);
        const ScalarExpr q = random_scalar(g.ring, g.frame, rng, 4);
        CHECK(schouten(g.poisson, differential(p, g.frame), differential(q, g.frame)) ==
              differential(g.poisson.bracket(p, q), g.frame));
    }
}

TEST_CASE("schouten extension rule oracle") {
    const auto& g = fixtures::su2();
    // [p dg, q dh] = pq d{g,h} + p{g,q} dh - q{h,p} dg, expanded by hand
    const ScalarExpr p = expr(g, "a");
    const ScalarExpr q = expr(g, "d^2 - b");
    const ScalarExpr gb = expr(g, "b");
    const ScalarExpr hc = expr(g, "c");
    const OneForm lhs = schouten(g.poisson, differential(gb, g.frame).scaled(p),
                                 differential(hc, g.frame).scaled(q));
    const OneForm rhs =
        differential(g.poisson.bracket(gb, hc), g.frame).scaled(p * q) +
        differential(hc, g.frame).scaled(p * g.poisson.bracket(gb, q)) -
        differential(gb, g.frame).scaled(q * g.poisson.bracket(hc, p));
    CHECK(lhs == rhs);
}

TEST_CASE("connection application") {
    const auto& g = fixtures::su2();
    const OneForm da = differential(expr(g, "a"), g.frame);
    CHECK(g.connection.apply(g.poisson, da, OneForm::unit(g.frame, 0)) ==
          form(g, {{"e0", "-a"}}));
    CHECK(g.connection.apply(g.poisson, da,
                             OneForm::unit(g.frame, 0).scaled(expr(g, "b"))) ==
          form(g, {{"e0", "-3/2*a*b"}}));

    const auto& s = fixtures::s1();
    const OneForm dt = differential(fixtures::expr(s, "t"), s.frame);
    CHECK(s.connection.apply(s.poisson, dt, dt) ==
          fixtures::form(s, {{"e", "-t^2"}}));  // i.e. -t dt
}

TEST_CASE("compatibility defect vanishes on the bundled data") {
    const auto& g = fixtures::su2();
    const OneForm da = differential(expr(g, "a"), g.frame);
    const OneForm db = differential(expr(g, "b"), g.frame);
    CHECK(compatibility_defect(g.connection, g.poisson, da, db).is_zero());
    std::mt19937_64 rng(19);
    const OneForm eta = random_oneform(g.ring, g.frame, rng, 3);
    CHECK(compatibility_defect(g.connection, g.poisson, eta, eta).is_zero());

    const auto& s = fixtures::s1();
    const OneForm dt = differential(fixtures::expr(s, "t"), s.frame);
    CHECK(compatibility_defect(s.connection, s.poisson, dt, dt).is_zero());
}

TEST_CASE("curvature of the 3d calculus connection vanishes") {
    const auto& g = fixtures::su2();
    const OneForm da = differential(expr(g, "a"), g.frame);
    const OneForm db = differential(expr(g, "b"), g.frame);
    CHECK(curvature(g.connection, g.poisson, da, db, OneForm::unit(g.frame, 0)).is_zero());
    std::mt19937_64 rng(29);
    const OneForm eta = random_oneform(g.ring, g.frame, rng, 3);
    const OneForm sig = random_oneform(g.ring, g.frame, rng, 3);
    CHECK(curvature(g.connection, g.poisson, eta, eta, sig).is_zero());
}

TEST_CASE("curvature is tensorial in both direction slots") {
    const auto& g = fixtures::su2();
    std::mt19937_64 rng(37);
    for (int it = 0; it < 10; ++it) {
        const OneForm eta = random_oneform(g.ring, g.frame, rng, 3);
        const OneForm tau = random_oneform(g.ring, g.frame, rng, 3);
        const OneForm sig = random_oneform(g.ring, g.frame, rng, 3);
        const ScalarExpr p = random_scalar(g.ring, g.frame, rng, 3);
        CHECK(curvature(g.connection, g.poisson, eta.scaled(p), tau, sig) ==
              curvature(g.connection, g.poisson, eta, tau, sig).scaled(p));
        CHECK(curvature(g.connection, g.poisson, eta, tau.scaled(p), sig) ==
              curvature(g.connection, g.poisson, eta, tau, sig).scaled(p));
    }
}
