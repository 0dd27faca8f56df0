#include "doctest.h"

#include "idring/opalg.hpp"
#include "idring/rings.hpp"

#include <random>

using namespace idr;

namespace {

std::string norm(const OpContextPtr& ctx, const std::string& s) { return ctx->normalize(ctx->parse(s)).str(); }

}  // namespace

TEST_CASE("basic normal forms") {
    auto q = OpContext::create(make_poly());
    CHECK(norm(q, "d*i") == "1");
    CHECK(norm(q, "i*d") == "1 - e");
    CHECK(norm(q, "e*i") == "0");
    CHECK(norm(q, "e*e") == "e");
    CHECK(norm(q, "d*x") == "x*d + 1");
    CHECK(norm(q, "d*e") == "0");

    auto l = OpContext::create(make_laurent_log());
    CHECK(l->normalize(l->parse("i*x^-2*i")) == l->normalize(l->parse("(-x^-1)*i - i*(-x^-1) - e*(-x^-1)*i")));
    CHECK(l->normalize(l->parse("i*x^-2*d")) == l->normalize(l->parse("x^-2 - e*x^-2 - i*(-2*x^-3)")));
    auto dec = l->decompose(l->normalize(l->parse("i*x^-1*d")));
    CHECK(dec.differential.str() == "x^-1");
    CHECK(dec.integral.str() == "i*x^-2");
    CHECK(dec.initial.str() == "-e*x^-1");
}

TEST_CASE("prover examples") {
    auto l = OpContext::create(make_laurent_log());
    ElemDefs defs{{"f", make_laurent_log()->parse("x^-1")}};
    CHECK(l->prove_equal(l->parse("i*f*d", &defs), l->parse("f - e*f - i*(D f)", &defs)).equal);
    CHECK(l->prove_equal(l->parse("i*i"), l->parse("I1*i - i*I1 - e*I1*i")).equal);
    auto r = l->prove_equal(l->parse("d*i"), l->parse("i*d"));
    CHECK_FALSE(r.equal);
    CHECK(r.difference.str() == "e");
}

TEST_CASE("action agrees with direct evaluation") {
    for (const char* tag : {"qx", "laurentlog", "exppoly:rec", "shifted:1", "hurwitz:5,6"}) {
        CAPTURE(tag);
        RingPtr ring = make_ring(tag);
        auto ctx = OpContext::create(ring);
        std::mt19937_64 rng(11);
        std::vector<std::string> exprs = {"i*f*d*g", "e*f*i*g*i", "d*d*f*i*i*g", "i*f*i*g*d*d", "f*e*g*d - i*e*i",
                                          "(d + f)*(i - g*e)*i"};
        for (int t = 0; t < 20; ++t) {
            ElemDefs defs{{"f", ring->random(rng)}, {"g", ring->random(rng)}};
            RingElem h = ring->random(rng);
            for (const auto& s : exprs) {
                OperatorExpr e = ctx->parse(s, &defs);
                NormalForm nf = ctx->normalize(e);
                CHECK(ctx->apply(nf, h) == ctx->eval_expr(e, h));
            }
        }
    }
}

TEST_CASE("random strategies agree") {
    auto l = OpContext::create(make_laurent_log(), {"res"});
    OperatorExpr e = l->parse("(i*x^-2 + phi:res*x)*(d*ln(x) + i*i)*(e*x*i + d)*i*x");
    NormalForm ref = l->normalize(e);
    for (std::uint64_t s = 1; s <= 50; ++s) {
        RewriteOptions o;
        o.strategy = RewriteOptions::Random;
        o.seed = s;
        CHECK(l->normalize(e, o) == ref);
    }
}

TEST_CASE("multiplication is associative and agrees with products") {
    auto q = OpContext::create(make_shifted(Const(1)), {"at1"});
    NormalForm a = q->normalize(q->parse("i*x + phi:at1*d")), b = q->normalize(q->parse("x*e*i*x^2 + d^2")),
               c = q->normalize(q->parse("i*i - x"));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == q->normalize(q->parse("(i*x + phi:at1*d)*(x*e*i*x^2 + d^2)")));
    CHECK(a * q->one() == a);
}

TEST_CASE("multiplicative evaluation collapses initial terms") {
    auto q = OpContext::create(make_poly(), {}, {"e"});
    NormalForm nf = q->normalize(q->parse("x*e*x^2*i*x + e*x*d"));
    for (const auto& [k, c] : nf.terms()) {
        if (k.kind == TermKey::PhiI) FAIL("integral after multiplicative evaluation");
        if (k.kind == TermKey::PhiD) CHECK(k.h == Key{0});
    }
}

TEST_CASE("parse errors carry positions") {
    auto q = OpContext::create(make_poly());
    CHECK_THROWS_AS(q->parse("d*(i"), ParseError);
    CHECK_THROWS_AS(q->parse("d*y"), ParseError);
    CHECK_THROWS_AS(q->parse("phi:nope"), ParseError);
    CHECK_THROWS_AS(q->parse("i/x"), ParseError);
}
