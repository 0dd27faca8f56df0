#include "doctest.h"

#include "idring/elimination.hpp"
#include "idring/rings.hpp"
#include "idring/wronskian.hpp"

using namespace idr;

TEST_CASE("left elimination") {
    auto l = OpContext::create(make_laurent_log());
    const Ring& r = *l->ring();
    NormalForm L = l->normalize(l->parse("x*i*x^-1 + d"));
    auto res = eliminate_integrals_left(L);
    REQUIRE(res.h.size() == 1);
    CHECK(res.h[0] == r.parse("x"));
    CHECK(res.differential == l->normalize(l->parse("x*d^2 - d + x")));

    NormalForm g = l->normalize(l->parse("i*x^2"));
    auto res2 = eliminate_integrals_left(g);
    CHECK(res2.h == std::vector<RingElem>{r.one()});
    CHECK(res2.differential == l->coeff(r.parse("x^2")));

    NormalForm diff = l->normalize(l->parse("x*d^2 + ln(x)"));
    auto res3 = eliminate_integrals_left(diff);
    CHECK(res3.h.empty());
    CHECK(res3.differential == diff);

    NormalForm big = l->normalize(l->parse("x*i*ln(x) + x^-1*i*x^2 + ln(x)*e*x*i*x + x^2*e*d"));
    auto res4 = eliminate_integrals_left(big);
    CHECK(res4.h.size() == 4);
    CHECK_FALSE(res4.differential.is_zero());

    CHECK_THROWS_WITH_AS(eliminate_integrals_left(l->normalize(l->parse("x*e*d"))), "is-initial-operator", OpError);
    auto m = OpContext::create(make_ring("hurwitz:5,8"));
    CHECK_THROWS_WITH_AS(eliminate_integrals_left(m->normalize(m->parse("i"))), "domain-required", OpError);
}

TEST_CASE("right elimination") {
    auto q = OpContext::create(make_poly());
    auto res = eliminate_integrals_right(q->normalize(q->parse("e*x*i")));
    CHECK(res.h == std::vector<RingElem>{q->ring()->one()});
    CHECK(res.differential == q->coeff(q->ring()->parse("x")));

    auto l = OpContext::create(make_laurent_log());
    auto res2 = eliminate_integrals_right(l->normalize(l->parse("e*x*i*x^-1")));
    CHECK(res2.h == std::vector<RingElem>{l->ring()->parse("x^-1")});

    auto res3 = eliminate_integrals_right(l->normalize(l->parse("e*d")));
    CHECK(res3.h.empty());
    CHECK(res3.differential == l->d());

    auto res4 = eliminate_integrals_right(l->normalize(l->parse("e*x*i*x^-1 + e*ln(x)*i*x^2 + e*x*d^2")));
    CHECK(res4.h.size() == 2);
    CHECK_THROWS_WITH_AS(eliminate_integrals_right(l->normalize(l->parse("x*e"))), "not-monic-initial", OpError);
}

TEST_CASE("f*e extraction") {
    auto q = OpContext::create(make_poly());
    auto a = extract_fE(q->normalize(q->parse("d^2")));
    CHECK(a.k == 2);
    CHECK(a.f == q->ring()->one());
    auto b = extract_fE(q->normalize(q->parse("3")));
    CHECK(b.k == 0);
    CHECK(b.f == q->ring()->constant(3));
    auto c = extract_fE(q->normalize(q->parse("x*d + x^2")));
    CHECK(c.k == 0);
    CHECK(c.f == q->ring()->parse("x^2"));
    CHECK_THROWS_WITH_AS(extract_fE(q->zero()), "zero-operator", OpError);
}

TEST_CASE("wronskian") {
    RingPtr q = make_poly(), l = make_laurent_log();
    CHECK(wronskian(*q, {q->one(), q->parse("x")}) == q->one());
    CHECK(wronskian(*l, {l->parse("x"), l->parse("x^2")}) == l->parse("x^2"));
    CHECK(wronskian(*l, {l->parse("ln(x)")}) == l->parse("ln(x)"));
    CHECK(wronskian(*q, {q->parse("x"), q->parse("2*x")}).is_zero());
    CHECK_THROWS_WITH_AS(wronskian(*make_ring("matrix:2,qx"), {}), "commutative-required", RingError);
}
