#include "doctest.h"

#include "idring/odes.hpp"
#include "idring/rings.hpp"

#include <random>

using namespace idr;

namespace {

std::vector<RingElem> elems(const Ring& r, std::initializer_list<const char*> texts) {
    std::vector<RingElem> out;
    for (const char* t : texts) out.push_back(r.parse(t));
    return out;
}

// L applied after H gives back every corpus element.
void check_solution_property(const OpContext& ctx, const NormalForm& L, const NormalForm& H) {
    for (const auto& f : ring_corpus(ctx.ring())) CHECK(ctx.apply(L, ctx.apply(H, f)) == f);
}

}  // namespace

TEST_CASE("first-order right inverses") {
    auto q = OpContext::create(make_poly());
    FirstOrderProblem triv{q->ring()->zero(), q->ring()->one(), {}, {}};
    CHECK(right_inverse_first_order(q, triv).at(0, 0) == q->i());
    CHECK(green_first_order(q, triv).at(0, 0) == q->i());

    auto l = OpContext::create(make_laurent_log());
    const Ring& r = *l->ring();
    FirstOrderProblem p{r.parse("-x^-1"), r.parse("x"), {}, {}};
    OpMatrix H = right_inverse_first_order(l, p);
    CHECK(H.at(0, 0) == l->normalize(l->parse("x*i*x^-1")));
    CHECK(first_order_operator(l, p) * H == OpMatrix::identity(l, 1));
    CHECK_THROWS_WITH(green_first_order(l, p), "Ez-not-invertible");
    CHECK_THROWS_WITH(right_inverse_first_order(l, {r.zero(), r.parse("x + 1"), {}, {}}), "no-inverse");
}

TEST_CASE("first-order green's operator on exponentials") {
    for (int c : {1, 2, -3}) {
        auto ctx = OpContext::create(make_exppoly_eval0());
        const Ring& r = *ctx->ring();
        std::string cs = std::to_string(c);
        FirstOrderProblem p{r.constant(Const(-c)), r.parse(("exp(" + cs + "*x)").c_str()), {}, {}};
        NormalForm G = green_first_order(ctx, p).at(0, 0);
        NormalForm expect = ctx->normalize(ctx->parse("(1 - exp(" + cs + "*x)*e)*exp(" + cs + "*x)*i*exp(" + std::to_string(-c) + "*x)"));
        CHECK(G == expect);
        NormalForm L = first_order_operator(ctx, p).at(0, 0);
        CHECK(L * G == ctx->one());
        CHECK((ctx->e() * G).is_zero());
        check_solution_property(*ctx, L, G);

        auto rec = OpContext::create(make_exppoly_rec());
        FirstOrderProblem pr{rec->ring()->constant(Const(-c)), rec->ring()->parse(("exp(" + cs + "*x)").c_str()), {}, {}};
        CHECK(first_order_operator(rec, pr) * right_inverse_first_order(rec, pr) == OpMatrix::identity(rec, 1));
        CHECK_THROWS_WITH(green_first_order(rec, pr), "Ez-not-invertible");
    }
    auto mult = OpContext::create(make_exppoly_eval0(), {}, {"e"});
    FirstOrderProblem p{mult->ring()->parse("-2"), mult->ring()->parse("exp(2*x)"), {}, {}};
    CHECK(green_first_order(mult, p) == right_inverse_first_order(mult, p));
    auto plain = OpContext::create(make_exppoly_eval0());
    CHECK_FALSE(green_first_order(plain, p) == right_inverse_first_order(plain, p));
}

TEST_CASE("first-order systems with matrix coefficients") {
    auto ctx = OpContext::create(make_exppoly_eval0());
    auto m = make_matrix(2, ctx->ring());
    FirstOrderProblem p{m->parse("[[0, -1], [-1, 0]]"), m->parse("[[exp(x), exp(-x)], [exp(x), -exp(-x)]]"), {}, {}};
    OpMatrix L = first_order_operator(ctx, p);
    OpMatrix H = right_inverse_first_order(ctx, p);
    CHECK(L * H == OpMatrix::identity(ctx, 2));
    OpMatrix G = green_first_order(ctx, p);
    CHECK(L * G == OpMatrix::identity(ctx, 2));
    CHECK((OpMatrix::diag(2, ctx->e()) * G == OpMatrix(ctx, 2)));

    auto rec = OpContext::create(make_exppoly_rec());
    auto mr = make_matrix(2, rec->ring());
    FirstOrderProblem pr{mr->parse("[[0, -1], [-1, 0]]"), mr->parse("[[exp(x), exp(-x)], [exp(x), -exp(-x)]]"), {}, {}};
    CHECK(first_order_operator(rec, pr) * right_inverse_first_order(rec, pr) == OpMatrix::identity(rec, 2));
    CHECK_THROWS_WITH(green_first_order(rec, pr), "Ez-not-invertible");
}

TEST_CASE("scalar variation of constants") {
    auto l = OpContext::create(make_laurent_log());
    const Ring& r = *l->ring();

    ScalarProblem one{elems(r, {"-x^-1"}), elems(r, {"x"}), {}, {}};
    CHECK(variation_of_constants(l, one) == right_inverse_first_order(l, {r.parse("-x^-1"), r.parse("x"), {}, {}}).at(0, 0));

    ScalarProblem two{elems(r, {"2*x^-2", "-2*x^-1"}), elems(r, {"x", "x^2"}), {}, {}};
    NormalForm H = variation_of_constants(l, two);
    CHECK(H == l->normalize(l->parse("-x*i + x^2*i*x^-1")));
    NormalForm L2 = scalar_operator(*l, two.a);
    CHECK(L2 * H == l->one());
    check_solution_property(*l, L2, H);
    CHECK(companion_route(l, two).entry == H);

    ScalarProblem three{elems(r, {"-6*x^-3", "6*x^-2", "-3*x^-1"}), elems(r, {"x", "x^2", "x^3"}), {}, {}};
    NormalForm H3 = variation_of_constants(l, three);
    NormalForm L3 = scalar_operator(*l, three.a);
    CHECK(L3 * H3 == l->one());
    check_solution_property(*l, L3, H3);
    auto route = companion_route(l, three);
    CHECK(route.system * route.solution == OpMatrix::identity(l, 3));
    CHECK(route.entry == H3);
    for (unsigned i = 0; i < 3; ++i) CHECK(route.solution.at(i, 2) == l->d().pow(i) * route.entry);

    ScalarProblem bad{elems(r, {"2*x^-2", "-2*x^-1"}), elems(r, {"x", "2*x"}), {}, {}};
    CHECK_THROWS_WITH(variation_of_constants(l, bad), "wronskian-not-invertible");
    ScalarProblem wrong{elems(r, {"2*x^-2", "-2*x^-1"}), elems(r, {"x", "x^3"}), {}, {}};
    CHECK_THROWS_WITH(variation_of_constants(l, wrong), "not-a-solution");
}

TEST_CASE("scalar green's operators") {
    auto q = OpContext::create(make_poly());
    const Ring& r = *q->ring();
    ScalarProblem p{elems(r, {"0", "0"}), elems(r, {"1", "x"}), {}, {{{Const(1), Const(0)}, {Const(0), Const(1)}}}};
    NormalForm G = green_scalar(q, p);
    NormalForm L = scalar_operator(*q, p.a);
    CHECK(L * G == q->one());
    CHECK((q->e() * G).is_zero());
    CHECK((q->e() * q->d() * G).is_zero());
    check_solution_property(*q, L, G);
    // E is multiplicative on Q[x], so the right inverse already satisfies the initial conditions.
    auto qm = OpContext::create(make_poly(), {}, {"e"});
    CHECK(green_scalar(qm, p) == variation_of_constants(qm, p));

    ScalarProblem badc = p;
    badc.c = {{{Const(1), Const(0)}, {Const(0), Const(2)}}};
    CHECK_THROWS_WITH(green_scalar(q, badc), "initial-matrix-invalid");

    auto l = OpContext::create(make_laurent_log());
    ScalarProblem two{elems(*l->ring(), {"2*x^-2", "-2*x^-1"}), elems(*l->ring(), {"x", "x^2"}), {}, {}};
    CHECK_THROWS_WITH(green_scalar(l, two), "initial-matrix-invalid");

    auto ex = OpContext::create(make_exppoly_eval0());
    ScalarProblem osc{elems(*ex->ring(), {"-1", "0"}), elems(*ex->ring(), {"exp(x)", "exp(-x)"}), {}, {}};
    NormalForm Ge = green_scalar(ex, osc);
    NormalForm Le = scalar_operator(*ex, osc.a);
    CHECK(Le * Ge == ex->one());
    CHECK((ex->e() * Ge).is_zero());
    CHECK((ex->e() * ex->d() * Ge).is_zero());
    check_solution_property(*ex, Le, Ge);
    auto route = companion_route(ex, osc, true);
    CHECK(route.entry == Ge);
    CHECK(route.solution.at(1, 1) == ex->d() * Ge);

    ScalarProblem cubic{elems(*ex->ring(), {"-6", "11", "-6"}), elems(*ex->ring(), {"exp(x)", "exp(2*x)", "exp(3*x)"}), {}, {}};
    NormalForm G3 = green_scalar(ex, cubic);
    CHECK(scalar_operator(*ex, cubic.a) * G3 == ex->one());
    for (unsigned i = 0; i < 3; ++i) CHECK((ex->e() * ex->d().pow(i) * G3).is_zero());
    CHECK(companion_route(ex, cubic, true).entry == G3);
}

TEST_CASE("companion matrix") {
    auto base = make_laurent_log();
    RingElem a0 = base->parse("x"), a1 = base->parse("ln(x)");
    RingElem A = companion_matrix(base, {a0, a1});
    CHECK(A == make_matrix(2, base)->parse("[[0, -1], [x, ln(x)]]"));
    CHECK(companion_matrix(base, {a0}) == make_matrix(1, base)->parse("[[x]]"));
}

TEST_CASE("matrix and scalar operator views") {
    auto ctx = OpContext::create(make_poly());
    auto m = make_matrix(2, ctx->ring());
    CHECK(matrix_to_scalar(ctx, OperatorExpr::d(), 2) == OpMatrix::diag(2, ctx->d()));

    OpMatrix e12(ctx, 2);
    e12.at(0, 1) = ctx->i();
    OperatorExpr psi = scalar_to_matrix(e12, m);
    CHECK(matrix_to_scalar(ctx, psi, 2) == e12);
    CHECK(matrix_to_scalar(ctx, OperatorExpr::of(m->parse("[[0, 1], [0, 0]]")) * OperatorExpr::i(), 2) == e12);

    std::mt19937_64 rng(20240611);
    const Ring& r = *ctx->ring();
    std::vector<std::string> words = {"d", "i", "e", "x*d", "i*x", "e*x*i", "x^2*e*d", "d^2", "x*i*x^2"};
    for (int trial = 0; trial < 20; ++trial) {
        OpMatrix M(ctx, 2);
        for (unsigned i = 0; i < 2; ++i)
            for (unsigned j = 0; j < 2; ++j) {
                M.at(i, j) = ctx->coeff(r.random(rng, 2, 2)) * ctx->normalize(ctx->parse(words[rng() % words.size()]));
            }
        OperatorExpr back = scalar_to_matrix(M, m);
        CHECK(matrix_to_scalar(ctx, back, 2) == M);
        RingElem F = m->random(rng, 3, 3);
        ElemMatrix Fe{{matrix_entry(F, 0, 0), matrix_entry(F, 0, 1)}, {matrix_entry(F, 1, 0), matrix_entry(F, 1, 1)}};
        CHECK(matrix_from_entries(m, M.apply(Fe)) == act_matrix(*m, back, F));

        OperatorExpr a = OperatorExpr::of(m->random(rng, 2, 2)) * OperatorExpr::i() * OperatorExpr::of(m->random(rng, 2, 2));
        OperatorExpr b = OperatorExpr::e() * OperatorExpr::of(m->random(rng, 2, 2)) * OperatorExpr::d();
        OpMatrix ab = matrix_to_scalar(ctx, a, 2) * matrix_to_scalar(ctx, b, 2);
        CHECK(matrix_from_entries(m, ab.apply(Fe)) == act_matrix(*m, a * b, F));
    }
    CHECK_THROWS_WITH(matrix_to_scalar(ctx, OperatorExpr::of(make_matrix(3, ctx->ring())->one()), 2), "size-mismatch");
}

TEST_CASE("pairwise wronskians stay independent") {
    for (std::string tag : {"qx", "laurentlog", "exppoly:rec"}) {
        auto r = make_ring(tag);
        auto corpus = ring_corpus(r);
        for (std::size_t s = 0; s + 3 <= corpus.size(); ++s) {
            std::vector<RingElem> f(corpus.begin() + s, corpus.begin() + s + 3);
            if (wronskian(*r, f).is_zero()) continue;
            std::vector<RingElem> g{wronskian(*r, {f[0], f[2]}), wronskian(*r, {f[1], f[2]})};
            CHECK_MESSAGE(!wronskian(*r, g).is_zero(), tag);
        }
    }
}
