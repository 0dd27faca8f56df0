#include "CLI11.hpp"
#include "json.hpp"

#include "idring/calculus.hpp"
#include "idring/lexer.hpp"
#include "idring/odes.hpp"
#include "idring/rings.hpp"
#include "idring/syntax.hpp"
#include "idring/tenred.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace idr;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Unequal = 1, Usage = 2, Domain = 3 };

struct Session {
    std::string ring_tag = "qx";
    std::vector<std::string> defs;
    std::vector<std::string> phis;
    std::vector<std::string> mult;
    bool as_json = false;
    bool trace = false;

    RingPtr ring;
    OpContextPtr ctx;
    ElemDefs elems;

    void open() {
        ring = make_ring(ring_tag);
        ctx = OpContext::create(ring, phis, mult);
        for (const auto& d : defs) {
            auto eq = d.find('=');
            if (eq == std::string::npos || eq == 0) throw ParseError("definition must read name=element", 0);
            std::string name = d.substr(0, eq);
            elems[name] = elem(d.substr(eq + 1));
        }
    }

    RingElem elem(const std::string& text) const {
        Lexer lx(text);
        RingElem r = parse_sum(*ring, lx, &elems);
        if (!lx.at_end()) throw ParseError("unexpected '" + lx.peek().text + "'", lx.position());
        return r;
    }

    OperatorExpr op(const std::string& text) const { return ctx->parse(text, &elems); }
    std::string str(const RingElem& f) const { return ring->format(f); }
};

void print_trace(const std::vector<std::string>& steps) {
    for (const auto& s : steps) std::cout << "  " << s << "\n";
}

int cmd_normalize(Session& s, const std::string& text) {
    std::vector<std::string> steps;
    RewriteOptions opt;
    if (s.trace) opt.trace = &steps;
    NormalForm nf = s.ctx->normalize(s.op(text), opt);
    if (s.as_json) {
        json j = json::parse(nf.json());
        if (s.trace) j["trace"] = steps;
        std::cout << j.dump(2) << "\n";
        return Ok;
    }
    if (s.trace) print_trace(steps);
    std::cout << nf.str() << "\n";
    return Ok;
}

int cmd_prove(Session& s, const std::string& lhs, const std::string& rhs) {
    std::vector<std::string> steps;
    if (s.trace) {
        RewriteOptions opt;
        opt.trace = &steps;
        s.ctx->normalize(s.op(lhs), opt);
        steps.push_back("--");
        s.ctx->normalize(s.op(rhs), opt);
    }
    ProofResult r = s.ctx->prove_equal(s.op(lhs), s.op(rhs));
    if (s.as_json) {
        json j{{"equal", r.equal}, {"difference", r.difference.str()}};
        if (s.trace) j["trace"] = steps;
        std::cout << j.dump(2) << "\n";
    } else {
        if (s.trace) print_trace(steps);
        std::cout << (r.equal ? "equal" : "unequal") << "\n";
        if (!r.equal) std::cout << "witness: " << r.difference.str() << "\n";
    }
    return r.equal ? Ok : Unequal;
}

int cmd_confluence(Session& s, const std::string& name, const std::string& rules_file) {
    auto sys = [&] {
        if (rules_file.empty()) return tenred::shipped_system(name);
        std::ifstream in(rules_file);
        if (!in) throw ParseError("cannot read " + rules_file, 0);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        tenred::SystemConfig cfg;
        cfg.phi = text.find("Phi") != std::string::npos;
        cfg.phim = text.find("Phim") != std::string::npos;
        return tenred::ReductionSystem::parse(name.empty() ? rules_file : name, cfg, text);
    }();
    auto rep = tenred::check_confluence(sys, s.trace);
    if (s.as_json) {
        std::cout << rep.json(s.trace) << "\n";
    } else {
        for (const auto& it : rep.items) {
            std::cout << (it.resolved ? "resolved   " : "UNRESOLVED ") << it.label << "\n";
            for (const auto& c : it.checks) {
                if (!c.resolved) std::cout << "    [" << c.word << "] residue " << c.residue << "\n";
                if (s.trace) {
                    std::cout << "    [" << c.word << "] S = " << c.spoly << "\n";
                    for (const auto& step : c.trace) std::cout << "      " << step << "\n";
                }
            }
        }
        std::cout << sys.name() << ": " << rep.items.size() << " ambiguities, " << rep.unresolved() << " unresolved\n";
    }
    return rep.confluent ? Ok : Unequal;
}

IntegralWord word_of(const Session& s, const std::vector<std::string>& parts) {
    IntegralWord w;
    for (const auto& p : parts) w.push_back(s.elem(p));
    return w;
}

std::string shuffle_str(const Session& s, const ShuffleTensor& t) {
    if (t.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : t) {
        std::string ws;
        for (const auto& f : w) ws += (ws.empty() ? "" : ", ") + s.str(f);
        std::string term = (c == Const(1) ? "" : c.str() + "*") + "[" + ws + "]";
        out += (out.empty() ? "" : " + ") + term;
    }
    return out;
}

int cmd_shuffle(Session& s, const std::vector<std::string>& f, const std::vector<std::string>& g) {
    auto fw = word_of(s, f), gw = word_of(s, g);
    auto gs = generalized_shuffle_expand(*s.ring, fw, gw);
    RingElem lhs = nested_integral(*s.ring, fw) * nested_integral(*s.ring, gw);
    RingElem rhs = gs.value(*s.ring);
    if (s.as_json) {
        json corr = json::array();
        for (const auto& c : gs.corrections)
            corr.push_back({{"i", c.i}, {"j", c.j}, {"e", c.e.str()}, {"lower", shuffle_str(s, c.lower)}});
        std::cout << json{{"main", shuffle_str(s, gs.main)}, {"corrections", corr}, {"product", s.str(lhs)},
                          {"holds", lhs == rhs}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "main: " << shuffle_str(s, gs.main) << "\n";
        for (const auto& c : gs.corrections)
            std::cout << "correction (" << c.i << ", " << c.j << "): " << c.e.str() << " * (" << shuffle_str(s, c.lower) << ")\n";
        std::cout << "product: " << s.str(lhs) << "\n";
        std::cout << (lhs == rhs ? "identity holds" : "identity FAILS") << "\n";
    }
    return lhs == rhs ? Ok : Unequal;
}

int cmd_taylor(Session& s, const std::string& f, unsigned n) {
    auto t = taylor_parts(*s.ring, s.elem(f), n);
    if (s.as_json) {
        std::cout << json{{"poly", s.str(t.poly)}, {"remainder", s.str(t.remainder)}, {"correction", s.str(t.correction)}}.dump(2)
                  << "\n";
    } else {
        std::cout << "poly: " << s.str(t.poly) << "\nremainder: " << s.str(t.remainder) << "\ncorrection: " << s.str(t.correction)
                  << "\n";
    }
    return Ok;
}

int cmd_xn(Session& s, unsigned n) {
    json j{{"x", json::array()}, {"c", json::array()}};
    for (unsigned k = 1; k <= n; ++k) {
        std::string v = s.str(x_n(*s.ring, k));
        j["x"].push_back(v);
        if (!s.as_json) std::cout << "x_" << k << " = " << v << "\n";
    }
    for (unsigned m = 1; m <= n; ++m) {
        json row = json::array();
        std::string line;
        for (unsigned k = 1; k <= n; ++k) {
            std::string c = c_mn(*s.ring, m, k).str();
            row.push_back(c);
            line += (k > 1 ? " " : "") + c;
        }
        j["c"].push_back(row);
        if (!s.as_json) std::cout << "c_" << m << ",* = " << line << "\n";
    }
    if (s.as_json) std::cout << j.dump(2) << "\n";
    return Ok;
}

ScalarProblem scalar_problem(const Session& s, const std::vector<std::string>& a, const std::vector<std::string>& z) {
    ScalarProblem p;
    for (const auto& t : a) p.a.push_back(s.elem(t));
    for (const auto& t : z) p.z.push_back(s.elem(t));
    return p;
}

int cmd_voc(Session& s, const std::vector<std::string>& a, const std::vector<std::string>& z, bool green) {
    auto p = scalar_problem(s, a, z);
    NormalForm h = green ? green_scalar(s.ctx, p) : variation_of_constants(s.ctx, p);
    NormalForm l = scalar_operator(*s.ctx, p.a);
    bool inverse = s.ctx->multiply(l, h) == s.ctx->one();
    if (s.as_json) {
        json j = json::parse(h.json());
        std::cout << json{{green ? "green" : "right_inverse", j}, {"text", h.str()}, {"L*H=1", inverse}}.dump(2) << "\n";
    } else {
        std::cout << (green ? "G = " : "H = ") << h.str() << "\n";
        std::cout << "L*" << (green ? "G" : "H") << " = 1: " << (inverse ? "yes" : "no") << "\n";
    }
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integro-differential operator toolbox"};
    app.require_subcommand(1);
    Session s;
    app.add_option("--ring", s.ring_tag, "qx | laurentlog | exppoly:rec | exppoly:eval0 | hurwitz:p,N | shifted:c | matrix:n,<ring>");
    app.add_option("--def", s.defs, "named element, name=element (repeatable)");
    app.add_option("--phi", s.phis, "extra functional of the ring, by name (repeatable)");
    app.add_option("--mult", s.mult, "functional taken as multiplicative, e included (repeatable)");
    app.add_flag("--json", s.as_json, "machine-readable output");
    app.add_flag("--trace", s.trace, "print every rewrite step");

    std::string expr, lhs, rhs, sys_name, rules_file, f;
    unsigned n = 2;
    std::vector<std::string> fw, gw, a, z;
    std::function<int()> run;

    auto* norm = app.add_subcommand("normalize", "normal form of an operator expression");
    norm->add_option("expr", expr)->required();
    norm->callback([&] { run = [&] { return cmd_normalize(s, expr); }; });

    auto* prove = app.add_subcommand("prove", "decide equality of two operator expressions");
    prove->add_option("lhs", lhs)->required();
    prove->add_option("rhs", rhs)->required();
    prove->callback([&] { run = [&] { return cmd_prove(s, lhs, rhs); }; });

    auto* conf = app.add_subcommand("confluence", "check all ambiguities of a reduction system");
    conf->add_option("system", sys_name, "diff | ido-defining | ido | ido-phi-defining | ido-phi | ido-phi-mult");
    conf->add_option("--rules", rules_file, "rule file, one 'NAME: PATTERN -> TEMPLATE' per line");
    conf->callback([&] {
        if (sys_name.empty() && rules_file.empty()) throw CLI::ValidationError("confluence", "give a system name or --rules");
        run = [&] { return cmd_confluence(s, sys_name, rules_file); };
    });

    auto* shuf = app.add_subcommand("shuffle", "product of two nested integrals");
    shuf->add_option("--f", fw, "integrands f_1 .. f_m")->required();
    shuf->add_option("--g", gw, "integrands g_1 .. g_n")->required();
    shuf->callback([&] { run = [&] { return cmd_shuffle(s, fw, gw); }; });

    auto* tay = app.add_subcommand("taylor", "Taylor polynomial, remainder and correction");
    tay->add_option("f", f)->required();
    tay->add_option("n", n)->required();
    tay->callback([&] { run = [&] { return cmd_taylor(s, f, n); }; });

    auto* xn = app.add_subcommand("xn", "repeated integrals x_k and the values c_mk");
    xn->add_option("n", n)->required();
    xn->callback([&] { run = [&] { return cmd_xn(s, n); }; });

    bool green = false;
    for (auto [name, is_green] : {std::pair{"voc", false}, std::pair{"green", true}}) {
        auto* sub = app.add_subcommand(name, is_green ? "Green's operator of an initial value problem"
                                                      : "right inverse by variation of constants");
        sub->add_option("--a", a, "coefficients a_0 .. a_(n-1)")->required();
        sub->add_option("--z", z, "fundamental system z_1 .. z_n")->required();
        sub->callback([&, is_green] {
            green = is_green;
            run = [&] { return cmd_voc(s, a, z, green); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : Usage;
    }
    try {
        s.open();
        return run();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return Usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Domain;
    }
}
