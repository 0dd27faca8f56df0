#include "doctest.h"

#include "idring/rings.hpp"
#include "idring/tenred.hpp"

#include "json.hpp"

#include <algorithm>
#include <random>

using namespace idr;
using namespace idr::tenred;

namespace {

Slot letter(Letter l) { return Slot{l, -1, l == Letter::E ? "E" : ""}; }
Slot rt(int id) { return Slot{Letter::Rt, id, ""}; }

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

const AmbiguityResult* find_item(const AmbiguityReport& rep, const std::string& label) {
    for (const auto& it : rep.items)
        if (it.label == label) return &it;
    return nullptr;
}

}  // namespace

TEST_CASE("reduce on single words") {
    SymbolicAlgebra alg;
    auto diff = shipped_system("diff");
    auto t = pure_tensor(alg, {letter(Letter::D), rt(alg.x_slot())});
    CHECK(tensor_str(alg, reduce(alg, diff, t)) == "1 + x (x) D");

    auto ido = shipped_system("ido");
    CHECK(reduce(alg, ido, pure_tensor(alg, {letter(Letter::E), letter(Letter::I)})).empty());
    CHECK(tensor_str(alg, reduce(alg, ido, pure_tensor(alg, {Slot{Letter::K, -1, ""}}))) == "1");

    auto q = OpContext::create(make_poly());
    ConcreteAlgebra conc(q);
    auto split = conc.split(conc.add(q->ring()->parse("x")));
    REQUIRE(split.slots.size() == 1);
    auto u = pure_tensor(conc, {letter(Letter::D), rt(split.slots[0].first)});
    CHECK(tensor_str(conc, reduce(conc, diff, u)) == "1 + x (x) D");
}

TEST_CASE("rule order and parse errors") {
    auto bad = ReductionSystem::parse("bad", {}, "UP: R D -> D R[f]\n");
    SymbolicAlgebra alg;
    Word w{rt(alg.generic_slot("f")), letter(Letter::D)};
    CHECK_THROWS_AS(apply_rule(alg, bad, bad.rules()[0], w, 0), std::logic_error);
    CHECK_THROWS_AS(ReductionSystem::parse("x", {}, "A: Q -> 0"), OpError);
    CHECK_THROWS_AS(ReductionSystem::parse("x", {}, "A: D -> R[g]"), OpError);
    CHECK_THROWS_AS(ReductionSystem::parse("x", {}, "A D -> 0"), OpError);

    Word a{letter(Letter::I)}, b{letter(Letter::D), letter(Letter::D)};
    CHECK(word_less(b, a));
    CHECK(word_less(Word{rt(0), letter(Letter::D)}, Word{letter(Letter::D), rt(0)}));
    CHECK(word_less(Word{letter(Letter::E), rt(0)}, Word{letter(Letter::I)}));
}

TEST_CASE("ambiguity enumeration") {
    auto ambs = enumerate_ambiguities(shipped_system("ido-phi"));
    CHECK(ambs.size() == 54);

    auto diff = shipped_system("diff");
    bool drr = false;
    for (const auto& a : enumerate_ambiguities(diff)) {
        if (diff.rules()[a.r1].name == "DR" && diff.rules()[a.r2].name == "RR" &&
            a.word == std::vector<Letter>{Letter::D, Letter::R, Letter::R})
            drr = true;
    }
    CHECK(drr);

    auto disjoint = ReductionSystem::parse("disjoint", {}, "A: D -> 0\nB: I -> eps\n");
    CHECK(enumerate_ambiguities(disjoint).empty());
}

TEST_CASE("completed systems are confluent") {
    for (const std::string name : {"diff", "ido", "ido-phi", "ido-phi-mult"}) {
        CAPTURE(name);
        auto rep = check_confluence(shipped_system(name));
        CHECK(rep.confluent);
        CHECK(rep.unresolved() == 0);
    }
    auto rep = check_confluence(shipped_system("ido-phi"), true);
    CHECK(rep.items.size() == 54);
    const auto* ird = find_item(rep, "SP(IRD, DR) on I R D R");
    REQUIRE(ird != nullptr);
    CHECK(ird->resolved);
    CHECK(ird->checks.size() == 4);
    const auto* item = find_item(rep, "SP(PhiPhi, EI) on Phi E I");
    REQUIRE(item != nullptr);
    CHECK(item->resolved);

    auto j = nlohmann::json::parse(rep.json(true));
    CHECK(j["ambiguities"] == 54);
    CHECK(j["unresolved"] == 0);
    CHECK(j["items"][0].contains("specializations"));
}

TEST_CASE("defining systems are not confluent") {
    for (const std::string name : {"ido-defining", "ido-phi-defining"}) {
        CAPTURE(name);
        auto rep = check_confluence(shipped_system(name));
        CHECK_FALSE(rep.confluent);
        CHECK(rep.unresolved() >= 1);
    }
}

TEST_CASE("completed systems generate the defining ideals") {
    for (auto [def, done] : {std::pair{"ido-defining", "ido"}, std::pair{"ido-phi-defining", "ido-phi"}}) {
        CAPTURE(def);
        for (const auto& [rule, ok] : same_ideal(shipped_system(def), shipped_system(done))) {
            CAPTURE(rule);
            CHECK(ok);
        }
    }
}

TEST_CASE("irreducible words") {
    CHECK(irreducible_shapes(shipped_system("diff")) == std::vector<std::string>{"D^j", "R~ D^j"});

    auto s = irreducible_shapes(shipped_system("ido-phi"));
    for (const auto* w : {"R~ D^j", "R~ I R~", "R~ Phi~ R~ D^j", "R~ Phi~ R~ I R~", "E R~ I", "I", "D^j"}) CHECK(has(s, w));
    CHECK_FALSE(has(s, "E I"));
    CHECK_FALSE(has(s, "E I R~"));
    CHECK_FALSE(has(s, "R~ E I R~"));
    for (const auto& w : s) {
        CAPTURE(w);
        CHECK(std::count(w.begin(), w.end(), 'I') <= 1);
    }

    auto m = irreducible_shapes(shipped_system("ido-phi-mult"));
    CHECK(has(m, "R~ Phim~ I R~"));
    CHECK(has(m, "R~ Phi~ R~ I R~"));
    CHECK_FALSE(has(m, "R~ Phim~ R~ D^j"));
    CHECK_FALSE(has(m, "R~ E R~ I"));

    auto words = irreducible_words(shipped_system("diff"), 3);
    CHECK(words == std::vector<std::string>{"eps", "R~", "D", "R~ D", "D D", "R~ D D", "D D D"});
}

TEST_CASE("reduction order does not matter") {
    for (const std::string name : {"ido", "ido-phi", "ido-phi-mult"}) {
        CAPTURE(name);
        auto sys = shipped_system(name);
        std::mt19937 rng(7);
        for (int trial = 0; trial < 40; ++trial) {
            SymbolicAlgebra alg(sys.config().e_multiplicative);
            alg.declare_functional("phi", false);
            alg.declare_functional("mu", true);
            std::vector<int> slots{alg.generic_slot("f"), alg.generic_slot("g"), alg.x_slot()};
            std::vector<Slot> letters{letter(Letter::D), letter(Letter::I), letter(Letter::E), Slot{Letter::K, -1, ""}};
            if (sys.config().phi) letters.push_back(Slot{Letter::Phit, -1, "phi"});
            if (sys.config().phim) letters.push_back(Slot{Letter::Phimt, -1, "mu"});
            for (int s : slots) letters.push_back(rt(s));
            Tensor t;
            for (int term = 0; term < 3; ++term) {
                std::vector<Slot> w;
                int len = 2 + static_cast<int>(rng() % 5);
                for (int k = 0; k < len; ++k) w.push_back(letters[rng() % letters.size()]);
                tensor_add(t, pure_tensor(alg, w), poly_const(Const(static_cast<long>(rng() % 5) - 2)));
            }
            Tensor a = reduce(alg, sys, t);
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                ReduceOptions opt;
                opt.strategy = ReduceOptions::Random;
                opt.seed = seed + static_cast<std::uint64_t>(trial) * 10;
                CHECK(tensor_str(alg, reduce(alg, sys, t, opt)) == tensor_str(alg, a));
            }
        }
    }
}

TEST_CASE("agrees with operator normal forms") {
    std::vector<std::pair<OpContextPtr, std::string>> ctxs{{OpContext::create(make_poly()), ""},
                                                           {OpContext::create(make_laurent_log(), {"res"}), "x^-1*ln(x)"},
                                                           {OpContext::create(make_poly(), {}, {"e"}), ""},
                                                           {OpContext::create(make_shifted(Const(1)), {"at1"}), ""}};
    const std::vector<std::string> gens{"d", "i", "e", "x", "x^2", "3", "x+1"};
    std::mt19937 rng(11);
    for (const auto& [ctx, extra] : ctxs) {
        auto sys = system_for(*ctx);
        std::vector<std::string> g = gens;
        for (std::size_t k = 1; k < ctx->functionals().size(); ++k) g.push_back(ctx->phi_name(static_cast<int>(k)));
        if (!extra.empty()) g.push_back(extra);
        for (int trial = 0; trial < 30; ++trial) {
            std::string text;
            int terms = 1 + static_cast<int>(rng() % 2);
            for (int t = 0; t < terms; ++t) {
                if (t) text += " + ";
                int len = 1 + static_cast<int>(rng() % 5);
                for (int k = 0; k < len; ++k) text += (k ? "*" : "") + std::string("(") + g[rng() % g.size()] + ")";
            }
            CAPTURE(text);
            auto expr = ctx->parse(text);
            ConcreteAlgebra alg(ctx);
            Tensor t = reduce(alg, sys, operator_tensor(alg, expr));
            CHECK(tensor_operator(alg, t) == ctx->normalize(expr));
        }
    }
}
