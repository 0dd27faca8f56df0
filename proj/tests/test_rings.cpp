#include "doctest.h"

#include "idring/rings.hpp"

#include <random>

using namespace idr;

namespace {

const std::vector<std::string> kTags = {"qx",         "laurentlog",    "exppoly:rec", "exppoly:eval0",
                                        "hurwitz:0,8", "hurwitz:5,8", "shifted:1",   "shifted:-1/2",
                                        "matrix:2,laurentlog", "matrix:2,exppoly:rec"};

}  // namespace

TEST_CASE("ring axioms on random elements") {
    for (const auto& tag : kTags) {
        CAPTURE(tag);
        RingPtr r = make_ring(tag);
        std::mt19937_64 rng(7);
        for (int t = 0; t < 150; ++t) {
            RingElem f = r->random(rng), g = r->random(rng);
            CHECK(r->derive(f * g) == r->derive(f) * g + f * r->derive(g));
            CHECK(r->derive(r->integrate(f)) == f);
            CHECK(r->integrate(r->derive(f)) == f - r->evaluate(f));
            RingElem ef = r->evaluate(f);
            CHECK(r->evaluate(ef) == ef);
            CHECK(r->derive(ef).is_zero());
            CHECK(r->evaluate(r->integrate(f)).is_zero());
            RingElem c = r->evaluate(g);
            CHECK(r->integrate(c * f) == c * r->integrate(f));
        }
    }
}

TEST_CASE("polynomial basics") {
    RingPtr r = make_poly();
    CHECK(r->derive(r->parse("x^2")) == r->parse("2*x"));
    CHECK(r->integrate(r->parse("x^3")) == r->parse("x^4/4"));
    CHECK(r->parse("3*x - 2 + x^2").str() == "-2 + 3*x + x^2");
    CHECK_FALSE(multiplicativity_witness(r).has_value());
}

TEST_CASE("laurent-log integration and evaluation") {
    RingPtr r = make_laurent_log();
    CHECK(r->derive(r->parse("ln(x)")) == r->parse("x^-1"));
    CHECK(r->integrate(r->parse("x^-1")) == r->parse("ln(x)"));
    CHECK(r->integrate(r->parse("x^-1*ln(x)")) == r->parse("ln(x)^2/2"));
    CHECK(r->integrate(r->parse("x*ln(x)")) == r->parse("x^2/2*ln(x) - x^2/4"));
    CHECK(r->integrate(r->one()) == r->parse("x"));
    CHECK(r->evaluate(r->parse("3 + 2*x^-1 + 5*ln(x)")) == r->constant(3));
    auto w = multiplicativity_witness(r);
    REQUIRE(w);
    CHECK(w->first == r->parse("x"));
    CHECK(w->second == r->parse("x^-1"));
    CHECK(*r->invert(r->parse("2*x^3")) == r->parse("x^-3/2"));
    CHECK_FALSE(r->invert(r->parse("ln(x)")));
}

TEST_CASE("exponential polynomials") {
    RingPtr r = make_exppoly_rec();
    CHECK(r->integrate(r->parse("x*exp(2*x)")) == r->parse("x/2*exp(2*x) - exp(2*x)/4"));
    auto w = multiplicativity_witness(r);
    REQUIRE(w);
    CHECK(w->first == r->parse("exp(x)"));
    CHECK(w->second == r->parse("exp(-x)"));
    CHECK(r->parse("x^2*exp(3/2 x)").str() == "x^2*exp(3/2*x)");

    RingPtr e0 = make_exppoly_eval0();
    CHECK(e0->integrate(e0->parse("exp(3*x)")) == e0->parse("exp(3*x)/3 - 1/3"));
    CHECK(e0->evaluate(e0->parse("exp(3*x) + x")) == e0->one());
    CHECK_FALSE(multiplicativity_witness(e0).has_value());
}

TEST_CASE("shifted integration") {
    RingPtr r = make_shifted(Const(1));
    CHECK(r->integrate(r->one()) == r->parse("x + 1"));
    CHECK(r->integrate(r->parse("x^2")) == r->parse("x^3/3 + 1"));
    RingPtr s = make_shifted(Const(3, 2));
    RingElem x1 = s->integrate(s->one());
    Const c(3, 2);
    CHECK(s->evaluate(x1 * x1) == s->constant(-c * c - Const(2) * c));
    CHECK(multiplicativity_witness(s).has_value());
    CHECK_FALSE(multiplicativity_witness(make_shifted(Const(0))).has_value());
}

TEST_CASE("hurwitz divided powers mod p") {
    RingPtr r = make_ring("hurwitz:5,8");
    CHECK(r->parse("x_2*x_3") == r->parse("10*x_5"));
    CHECK(r->parse("x_2*x_3").is_zero());
    CHECK(r->parse("x_1*x_1") == r->parse("2*x_2"));
    CHECK(r->derive(r->parse("x_3")) == r->parse("x_2"));
}

TEST_CASE("matrix ring") {
    RingPtr r = make_ring("matrix:2,laurentlog");
    RingElem a = r->parse("[[x, 1], [0, x^-1]]");
    RingElem b = r->parse("[[0, ln(x)], [1, 0]]");
    CHECK(a * b != b * a);
    CHECK(a.str() == "[[x, 1], [0, x^-1]]");
    auto ai = r->invert(a);
    REQUIRE(ai);
    CHECK(a * *ai == r->one());
    CHECK(r->parse("x") == r->parse("[[x, 0], [0, x]]"));
    CHECK(matrix_entry(b, 0, 1) == make_laurent_log()->parse("ln(x)"));
}

TEST_CASE("ring tags") {
    CHECK_THROWS_AS(make_ring("nope"), RingError);
    CHECK_THROWS_AS(make_ring("hurwitz:4,8"), RingError);
    CHECK(make_ring("matrix:3,shifted:2")->tag() == "matrix:3,shifted:2");
}
