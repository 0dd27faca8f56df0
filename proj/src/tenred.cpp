#include "idring/tenred.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>

namespace idr::tenred {

namespace {

int rank(Letter l) {
    switch (l) {
        case Letter::D: return 5;
        case Letter::I: return 4;
        case Letter::K:
        case Letter::Rt:
        case Letter::R: return 3;
        default: return 2;
    }
}

bool is_functional(Letter l) {
    return l == Letter::E || l == Letter::Phit || l == Letter::Phimt || l == Letter::Phi || l == Letter::Phim;
}

std::string word_str(const std::vector<Letter>& w) {
    std::string out;
    for (Letter l : w) out += (out.empty() ? "" : " ") + letter_str(l);
    return out.empty() ? "eps" : out;
}

// --- rule text parser -------------------------------------------------------

class RuleParser {
public:
    RuleParser(std::string src, int nvars, int nfns) : s_(std::move(src)), nvars_(nvars), nfns_(nfns) {}

    std::vector<TTerm> terms() {
        std::vector<TTerm> out;
        skip();
        if (peek_word("0")) {
            pos_ += 1;
            skip();
            if (pos_ != s_.size()) fail("trailing input");
            return out;
        }
        bool first = true;
        while (true) {
            skip();
            if (pos_ >= s_.size()) break;
            Const sign(1);
            if (s_[pos_] == '+' || s_[pos_] == '-') {
                if (s_[pos_] == '-') sign = Const(-1);
                ++pos_;
            } else if (!first) {
                fail("expected + or -");
            }
            first = false;
            out.push_back(term(sign));
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw OpError("rule template: " + what + " at '" + s_.substr(std::min(pos_, s_.size())) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek_word(const std::string& w) const { return s_.compare(pos_, w.size(), w) == 0; }
    std::string ident() {
        std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(b, pos_ - b);
    }
    int fn_ref(const std::string& name) {
        if (name == "E") return -1;
        static const std::vector<std::string> names{"phi", "psi"};
        for (int i = 0; i < static_cast<int>(names.size()); ++i)
            if (names[i] == name) {
                if (i >= nfns_) fail("functional " + name + " not bound by the pattern");
                return i;
            }
        fail("unknown functional " + name);
    }

    TTerm term(Const sign) {
        TTerm t;
        t.coeff = sign;
        skip();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
            t.coeff *= Const::parse(s_.substr(b, pos_ - b));
        }
        while (true) {
            skip();
            if (pos_ >= s_.size() || s_[pos_] == '+' || s_[pos_] == '-') break;
            if (s_[pos_] == '<') {
                ++pos_;
                TFactor f;
                f.kind = TFactor::Scalar;
                f.fn = fn_ref(ident());
                if (pos_ >= s_.size() || s_[pos_] != ':') fail("expected ':'");
                ++pos_;
                f.expr = expr();
                skip();
                if (pos_ >= s_.size() || s_[pos_] != '>') fail("expected '>'");
                ++pos_;
                t.factors.push_back(std::move(f));
                continue;
            }
            std::string id = ident();
            if (id.empty()) fail("expected a factor");
            TFactor f;
            if (id == "eps") continue;
            if (id == "D" || id == "I" || id == "E") {
                f.kind = TFactor::Letter_;
                f.letter = id == "D" ? Letter::D : id == "I" ? Letter::I : Letter::E;
            } else if (id == "R") {
                if (pos_ >= s_.size() || s_[pos_] != '[') fail("expected '['");
                ++pos_;
                f.kind = TFactor::RSlot;
                f.expr = expr();
                skip();
                if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
                ++pos_;
            } else {
                f.kind = TFactor::FnVar;
                f.fn = fn_ref(id);
            }
            t.factors.push_back(std::move(f));
        }
        return t;
    }

    PExpr expr() {
        PExpr a = atom();
        while (true) {
            skip();
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                PExpr m;
                m.kind = PExpr::Mul;
                m.kids = {std::move(a), atom()};
                a = std::move(m);
            } else {
                return a;
            }
        }
    }

    PExpr atom() {
        skip();
        PExpr e;
        if (pos_ < s_.size() && s_[pos_] == '1') {
            ++pos_;
            e.kind = PExpr::One;
            return e;
        }
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            e = expr();
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        std::string id = ident();
        if (id == "d" || id == "i") {
            skip();
            if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '('");
            ++pos_;
            e.kind = id == "d" ? PExpr::Der : PExpr::Int;
            e.kids = {expr()};
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        static const std::string vars = "fgh";
        if (id.size() == 1 && vars.find(id[0]) != std::string::npos) {
            e.kind = PExpr::Var;
            e.var = static_cast<int>(vars.find(id[0]));
            if (e.var >= nvars_) fail("variable " + id + " not bound by the pattern");
            return e;
        }
        fail("unknown payload '" + id + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
    int nvars_, nfns_;
};

Letter parse_letter(const std::string& s) {
    static const std::map<std::string, Letter> m{{"K", Letter::K},     {"R", Letter::R},       {"D", Letter::D},
                                                 {"I", Letter::I},     {"E", Letter::E},       {"Phi", Letter::Phi},
                                                 {"Phim", Letter::Phim}, {"R~", Letter::Rt},   {"Phi~", Letter::Phit},
                                                 {"Phim~", Letter::Phimt}};
    auto it = m.find(s);
    if (it == m.end()) throw OpError("unknown pattern letter: " + s);
    return it->second;
}

// --- rule application -------------------------------------------------------

struct Bindings {
    std::vector<int> vars;         // expression handles of R-like pattern slots
    std::vector<Slot> fns;         // functional slots, in pattern order
};

int eval_pexpr(PayloadAlgebra& alg, const PExpr& e, const Bindings& b) {
    switch (e.kind) {
        case PExpr::Var: return b.vars[static_cast<std::size_t>(e.var)];
        case PExpr::One: return alg.one();
        case PExpr::Mul: return alg.mul(eval_pexpr(alg, e.kids[0], b), eval_pexpr(alg, e.kids[1], b));
        case PExpr::Der: return alg.der(eval_pexpr(alg, e.kids[0], b));
        case PExpr::Int: return alg.integ(eval_pexpr(alg, e.kids[0], b));
    }
    return alg.one();
}

Slot fn_slot(const TFactor& f, const Bindings& b) {
    if (f.fn < 0) return Slot{Letter::E, -1, "E"};
    return b.fns[static_cast<std::size_t>(f.fn)];
}

Tensor expand_term(PayloadAlgebra& alg, const TTerm& t, const Bindings& b) {
    Tensor cur{{Word{}, poly_const(t.coeff)}};
    for (const auto& f : t.factors) {
        Tensor next;
        switch (f.kind) {
            case TFactor::Letter_:
            case TFactor::FnVar: {
                Slot s = f.kind == TFactor::FnVar ? fn_slot(f, b) : Slot{f.letter, -1, f.letter == Letter::E ? "E" : ""};
                for (const auto& [w, c] : cur) {
                    Word x = w;
                    x.push_back(s);
                    tensor_add(next, x, c);
                }
                break;
            }
            case TFactor::Scalar: {
                Poly v = alg.functional(fn_slot(f, b).fn, eval_pexpr(alg, f.expr, b));
                for (const auto& [w, c] : cur) tensor_add(next, w, poly_mul(c, v));
                break;
            }
            case TFactor::RSlot: {
                auto sp = alg.split(eval_pexpr(alg, f.expr, b));
                for (const auto& [w, c] : cur) {
                    tensor_add(next, w, poly_mul(c, sp.constant));
                    for (const auto& [slot, sc] : sp.slots) {
                        Word x = w;
                        x.push_back(Slot{Letter::Rt, slot, ""});
                        tensor_add(next, x, poly_mul(c, sc));
                    }
                }
                break;
            }
        }
        cur = std::move(next);
    }
    return cur;
}

bool matches(const ReductionSystem& sys, const Rule& r, const Word& w, std::size_t pos) {
    if (pos + r.pattern.size() > w.size()) return false;
    for (std::size_t i = 0; i < r.pattern.size(); ++i)
        if (!sys.admits(r.pattern[i], w[pos + i].letter)) return false;
    return true;
}

std::string slot_str(const PayloadAlgebra& alg, const Slot& s) {
    switch (s.letter) {
        case Letter::Rt: {
            std::string p = alg.slot_str(s.id);
            return p;
        }
        case Letter::K: return "1";
        case Letter::D: return "D";
        case Letter::I: return "I";
        case Letter::E: return "E";
        default: return s.fn;
    }
}

std::string word_text(const PayloadAlgebra& alg, const Word& w) {
    if (w.empty()) return "eps";
    std::string out;
    for (const auto& s : w) out += (out.empty() ? "" : " (x) ") + slot_str(alg, s);
    return out;
}

}  // namespace

std::string letter_str(Letter l) {
    switch (l) {
        case Letter::K: return "K";
        case Letter::Rt: return "R~";
        case Letter::D: return "D";
        case Letter::I: return "I";
        case Letter::E: return "E";
        case Letter::Phit: return "Phi~";
        case Letter::Phimt: return "Phim~";
        case Letter::R: return "R";
        case Letter::Phi: return "Phi";
        case Letter::Phim: return "Phim";
    }
    return "?";
}

void tensor_add(Tensor& t, const Word& w, const Poly& c) {
    if (c.empty()) return;
    auto it = t.find(w);
    if (it == t.end()) {
        t.emplace(w, c);
        return;
    }
    poly_add(it->second, c);
    if (it->second.empty()) t.erase(it);
}

void tensor_add(Tensor& t, const Tensor& u, const Poly& scale) {
    for (const auto& [w, c] : u) tensor_add(t, w, poly_mul(c, scale));
}

std::string tensor_str(const PayloadAlgebra& alg, const Tensor& t) {
    if (t.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : t) {
        std::string cs = alg.poly_str(c);
        std::string ws = word_text(alg, w);
        std::string term;
        if (w.empty()) term = cs;
        else if (cs == "1") term = ws;
        else if (cs == "-1") term = "-" + ws;
        else if (c.size() == 1) term = cs + "*" + ws;
        else term = "(" + cs + ")*" + ws;
        if (out.empty()) out = term;
        else if (term[0] == '-') out += " - " + term.substr(1);
        else out += " + " + term;
    }
    return out;
}

ReductionSystem::ReductionSystem(std::string name, SystemConfig cfg, std::vector<Rule> rules)
    : name_(std::move(name)), cfg_(cfg), rules_(std::move(rules)) {}

ReductionSystem ReductionSystem::parse(std::string name, SystemConfig cfg, const std::string& text) {
    std::vector<Rule> rules;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto colon = line.find(':');
        auto arrow = line.find("->");
        if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
            throw OpError("rule line needs 'NAME: PATTERN -> TEMPLATE': " + line);
        Rule r;
        std::istringstream nm(line.substr(0, colon));
        nm >> r.name;
        std::istringstream pat(line.substr(colon + 1, arrow - colon - 1));
        std::string tok;
        int nvars = 0, nfns = 0;
        while (pat >> tok) {
            Letter l = parse_letter(tok);
            if (l == Letter::R || l == Letter::K || l == Letter::Rt) ++nvars;
            if (is_functional(l) && l != Letter::E) ++nfns;
            r.pattern.push_back(l);
        }
        if (r.name.empty() || r.pattern.empty()) throw OpError("empty rule name or pattern: " + line);
        r.rhs = RuleParser(line.substr(arrow + 2), nvars, nfns).terms();
        auto b = line.find_first_not_of(" \t");
        auto e = line.find_last_not_of(" \t\r");
        r.text = line.substr(b, e - b + 1);
        rules.push_back(std::move(r));
    }
    return ReductionSystem(std::move(name), cfg, std::move(rules));
}

std::string ReductionSystem::text() const {
    std::string out;
    for (const auto& r : rules_) out += r.text + "\n";
    return out;
}

std::vector<Letter> ReductionSystem::specializations(Letter z) const {
    switch (z) {
        case Letter::R: return {Letter::K, Letter::Rt};
        case Letter::Phi: {
            std::vector<Letter> s{Letter::E};
            if (cfg_.phim) s.push_back(Letter::Phimt);
            if (cfg_.phi) s.push_back(Letter::Phit);
            return s;
        }
        case Letter::Phim: {
            std::vector<Letter> s;
            if (cfg_.e_multiplicative) s.push_back(Letter::E);
            if (cfg_.phim) s.push_back(Letter::Phimt);
            return s;
        }
        default: return {z};
    }
}

std::vector<Letter> ReductionSystem::alphabet() const {
    std::set<Letter> seen;
    for (const auto& r : rules_)
        for (Letter z : r.pattern)
            for (Letter x : specializations(z)) seen.insert(x);
    return {seen.begin(), seen.end()};
}

bool ReductionSystem::admits(Letter z, Letter x) const {
    if (z == x) return true;
    auto s = specializations(z);
    return std::find(s.begin(), s.end(), x) != s.end();
}

bool word_less(const Word& a, const Word& b) {
    auto icount = [](const Word& w) { return std::count_if(w.begin(), w.end(), [](const Slot& s) { return s.letter == Letter::I; }); };
    auto ia = icount(a), ib = icount(b);
    if (ia != ib) return ia < ib;
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (rank(a[i].letter) != rank(b[i].letter)) return rank(a[i].letter) < rank(b[i].letter);
    return false;
}

Tensor apply_rule(PayloadAlgebra& alg, const ReductionSystem& sys, const Rule& r, const Word& w, std::size_t pos) {
    if (!matches(sys, r, w, pos)) throw OpError("rule " + r.name + " does not match");
    Bindings b;
    for (std::size_t i = 0; i < r.pattern.size(); ++i) {
        const Slot& s = w[pos + i];
        if (s.letter == Letter::K) b.vars.push_back(alg.one());
        else if (s.letter == Letter::Rt) b.vars.push_back(alg.slot_expr(s.id));
        else if (is_functional(r.pattern[i]) && r.pattern[i] != Letter::E) b.fns.push_back(s);
    }
    Word pre(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
    Word post(w.begin() + static_cast<std::ptrdiff_t>(pos + r.pattern.size()), w.end());
    Tensor out;
    for (const auto& t : r.rhs)
        for (const auto& [mid, c] : expand_term(alg, t, b)) {
            Word x = pre;
            x.insert(x.end(), mid.begin(), mid.end());
            x.insert(x.end(), post.begin(), post.end());
            if (!word_less(x, w)) throw std::logic_error("rule " + r.name + " does not decrease the word order");
            tensor_add(out, x, c);
        }
    return out;
}

Tensor pure_tensor(PayloadAlgebra& alg, const std::vector<Slot>& letters) {
    Tensor t{{Word{}, poly_const(Const(1))}};
    for (const auto& s : letters) {
        Tensor next;
        for (const auto& [w, c] : t) {
            Word x = w;
            x.push_back(s);
            tensor_add(next, x, c);
        }
        t = std::move(next);
    }
    (void)alg;
    return t;
}

Tensor reduce(PayloadAlgebra& alg, const ReductionSystem& sys, Tensor t, const ReduceOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const std::size_t limit = 1000000;
    for (std::size_t step = 0; step < limit; ++step) {
        struct Site {
            Word word;
            std::size_t rule, pos;
        };
        std::vector<Site> sites;
        for (const auto& [w, c] : t) {
            for (std::size_t pos = 0; pos < w.size(); ++pos) {
                for (std::size_t ri = 0; ri < sys.rules().size(); ++ri)
                    if (matches(sys, sys.rules()[ri], w, pos)) {
                        sites.push_back({w, ri, pos});
                        if (opt.strategy == ReduceOptions::Leftmost) break;
                    }
                if (opt.strategy == ReduceOptions::Leftmost && !sites.empty()) break;
            }
            if (opt.strategy == ReduceOptions::Leftmost && !sites.empty()) break;
        }
        if (sites.empty()) return t;
        const Site& s = opt.strategy == ReduceOptions::Random ? sites[rng() % sites.size()] : sites.front();
        Poly c = t.at(s.word);
        t.erase(s.word);
        const Rule& r = sys.rules()[s.rule];
        Tensor repl = apply_rule(alg, sys, r, s.word, s.pos);
        tensor_add(t, repl, c);
        if (opt.trace) opt.trace->push_back(r.name + ": " + word_text(alg, s.word) + " -> " + tensor_str(alg, repl));
    }
    throw std::logic_error("reduction did not terminate");
}

// --- ambiguities --------------------------------------------------------------

namespace {

// Z letter whose specializations are the common ones of a and b, if any.
std::optional<Letter> meet(const ReductionSystem& sys, Letter a, Letter b) {
    auto sa = sys.specializations(a), sb = sys.specializations(b);
    std::vector<Letter> common;
    for (Letter x : sa)
        if (std::find(sb.begin(), sb.end(), x) != sb.end()) common.push_back(x);
    if (common.empty()) return std::nullopt;
    auto same = [&](const std::vector<Letter>& s) { return std::is_permutation(s.begin(), s.end(), common.begin(), common.end()); };
    if (same(sa)) return a;
    if (same(sb)) return b;
    if (common.size() == 1) return common[0];
    throw std::logic_error("no letter for a common specialization");
}

}  // namespace

std::vector<Ambiguity> enumerate_ambiguities(const ReductionSystem& sys) {
    std::vector<Ambiguity> out;
    std::set<std::tuple<std::size_t, std::size_t, std::vector<Letter>>> seen;
    const auto& rules = sys.rules();
    auto push = [&](Ambiguity a) {
        if (seen.insert({a.r1, a.r2, a.word}).second) out.push_back(std::move(a));
    };
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (std::size_t j = 0; j < rules.size(); ++j) {
            const auto& P = rules[i].pattern;
            const auto& Q = rules[j].pattern;
            std::size_t p = P.size(), q = Q.size();
            for (std::size_t k = 1; k < p && k < q; ++k) {
                std::vector<Letter> w(P.begin(), P.end() - static_cast<std::ptrdiff_t>(k));
                bool ok = true;
                for (std::size_t t = 0; t < k && ok; ++t) {
                    auto m = meet(sys, P[p - k + t], Q[t]);
                    if (!m) ok = false;
                    else w.push_back(*m);
                }
                if (!ok) continue;
                w.insert(w.end(), Q.begin() + static_cast<std::ptrdiff_t>(k), Q.end());
                push({Ambiguity::Overlap, i, j, p - k, w});
            }
            if (i == j || q > p) continue;
            for (std::size_t s = 0; s + q <= p; ++s) {
                std::vector<Letter> w = P;
                bool ok = true;
                for (std::size_t t = 0; t < q && ok; ++t) {
                    auto m = meet(sys, P[s + t], Q[t]);
                    if (!m) ok = false;
                    else w[s + t] = *m;
                }
                if (ok) push({Ambiguity::Inclusion, i, j, s, w});
            }
        }
    return out;
}

std::size_t AmbiguityReport::unresolved() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const AmbiguityResult& a) { return !a.resolved; }));
}

std::string AmbiguityReport::json(bool traces) const {
    nlohmann::json j;
    j["system"] = system;
    j["confluent"] = confluent;
    j["ambiguities"] = items.size();
    j["unresolved"] = unresolved();
    auto arr = nlohmann::json::array();
    for (const auto& it : items) {
        nlohmann::json a;
        a["label"] = it.label;
        a["kind"] = it.amb.kind == Ambiguity::Overlap ? "overlap" : "inclusion";
        a["word"] = word_str(it.amb.word);
        a["resolved"] = it.resolved;
        auto checks = nlohmann::json::array();
        for (const auto& c : it.checks) {
            nlohmann::json x{{"word", c.word}, {"spoly", c.spoly}, {"residue", c.residue}, {"resolved", c.resolved}};
            if (traces) x["trace"] = c.trace;
            checks.push_back(std::move(x));
        }
        a["specializations"] = std::move(checks);
        arr.push_back(std::move(a));
    }
    j["items"] = std::move(arr);
    return j.dump(2);
}

namespace {

// Generic pure word for a specialization: fresh atoms for R~ slots, fresh functionals for Phi~ slots.
Word generic_word(SymbolicAlgebra& alg, const std::vector<Letter>& v) {
    static const std::vector<std::string> atoms{"f", "g", "h", "u", "v", "w"};
    static const std::vector<std::string> fns{"phi", "psi", "chi", "rho"};
    std::size_t na = 0, nf = 0;
    Word w;
    for (Letter l : v) {
        Slot s{l, -1, ""};
        if (l == Letter::Rt) s.id = alg.generic_slot(atoms.at(na++));
        if (l == Letter::E) s.fn = "E";
        if (l == Letter::Phit || l == Letter::Phimt) {
            s.fn = (l == Letter::Phimt ? "mu_" : "") + fns.at(nf++);
            alg.declare_functional(s.fn, l == Letter::Phimt);
        }
        w.push_back(s);
    }
    return w;
}

void specializations_of(const ReductionSystem& sys, const std::vector<Letter>& w, std::size_t i, std::vector<Letter>& cur,
                        std::vector<std::vector<Letter>>& out) {
    if (i == w.size()) {
        out.push_back(cur);
        return;
    }
    for (Letter x : sys.specializations(w[i])) {
        cur.push_back(x);
        specializations_of(sys, w, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<Letter>> all_specializations(const ReductionSystem& sys, const std::vector<Letter>& w) {
    std::vector<std::vector<Letter>> out;
    std::vector<Letter> cur;
    specializations_of(sys, w, 0, cur, out);
    return out;
}

}  // namespace

AmbiguityReport check_confluence(const ReductionSystem& sys, bool traces) {
    AmbiguityReport rep;
    rep.system = sys.name();
    for (const auto& amb : enumerate_ambiguities(sys)) {
        AmbiguityResult res;
        res.amb = amb;
        const auto& r1 = sys.rules()[amb.r1];
        const auto& r2 = sys.rules()[amb.r2];
        res.label = (amb.kind == Ambiguity::Overlap ? "SP(" : "SP-incl(") + r1.name + ", " + r2.name + ") on " + word_str(amb.word);
        for (const auto& v : all_specializations(sys, amb.word)) {
            SymbolicAlgebra alg(sys.config().e_multiplicative);
            Word w = generic_word(alg, v);
            SpecializationCheck chk;
            chk.word = word_str(v);
            Tensor sp = apply_rule(alg, sys, r1, w, 0);
            tensor_add(sp, apply_rule(alg, sys, r2, w, amb.pos), poly_const(Const(-1)));
            chk.spoly = tensor_str(alg, sp);
            ReduceOptions opt;
            if (traces) opt.trace = &chk.trace;
            Tensor nf = reduce(alg, sys, sp, opt);
            chk.residue = tensor_str(alg, nf);
            chk.resolved = nf.empty();
            if (!chk.resolved) res.resolved = false;
            res.checks.push_back(std::move(chk));
        }
        if (!res.resolved) rep.confluent = false;
        rep.items.push_back(std::move(res));
    }
    return rep;
}

std::vector<std::pair<std::string, bool>> same_ideal(const ReductionSystem& defining, const ReductionSystem& complete) {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& r : defining.rules()) {
        bool ok = true;
        for (const auto& v : all_specializations(complete, r.pattern)) {
            SymbolicAlgebra alg(complete.config().e_multiplicative);
            Word w = generic_word(alg, v);
            Tensor diff{{w, poly_const(Const(1))}};
            tensor_add(diff, apply_rule(alg, defining, r, w, 0), poly_const(Const(-1)));
            if (!reduce(alg, complete, diff).empty()) ok = false;
        }
        out.emplace_back(r.name, ok);
    }
    return out;
}

namespace {

bool irreducible_letters(const ReductionSystem& sys, const std::vector<Letter>& w) {
    Word ws;
    for (Letter l : w) ws.push_back({l, -1, ""});
    for (std::size_t pos = 0; pos < ws.size(); ++pos)
        for (const auto& r : sys.rules())
            if (matches(sys, r, ws, pos)) return false;
    return true;
}

std::vector<std::vector<Letter>> irreducible_letter_words(const ReductionSystem& sys, std::size_t max_len) {
    std::vector<std::vector<Letter>> out{{}};
    std::vector<std::vector<Letter>> frontier{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : frontier)
            for (Letter l : sys.alphabet()) {
                auto x = w;
                x.push_back(l);
                if (irreducible_letters(sys, x)) next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

}  // namespace

std::vector<std::string> irreducible_words(const ReductionSystem& sys, std::size_t max_len) {
    std::vector<std::string> out;
    for (const auto& w : irreducible_letter_words(sys, max_len)) out.push_back(word_str(w));
    return out;
}

// Irreducible words with trailing D runs folded into D^j. A word is reported
// with D^j when it stays irreducible after appending D, which for the shipped
// systems means for every j.
std::vector<std::string> irreducible_shapes(const ReductionSystem& sys, std::size_t max_len) {
    std::set<std::string> shapes;
    for (const auto& w : irreducible_letter_words(sys, max_len)) {
        if (!w.empty() && w.back() == Letter::D) continue;
        auto wd = w;
        wd.push_back(Letter::D);
        bool tail = irreducible_letters(sys, wd);
        std::string base = w.empty() ? "" : word_str(w);
        if (tail) shapes.insert(base.empty() ? "D^j" : base + " D^j");
        else shapes.insert(base.empty() ? "eps" : base);
    }
    return {shapes.begin(), shapes.end()};
}

// --- shipped systems ----------------------------------------------------------

namespace {

const char* kDiff = R"(
K: K -> eps
RR: R R -> R[f*g]
DR: D R -> R[f] D + R[d(f)]
)";

const char* kIdoDefining = R"(
K: K -> eps
RR: R R -> R[f*g]
DR: D R -> R[f] D + R[d(f)]
DI: D I -> eps
ID: I D -> eps - E
DRE: D R E -> R[d(f)] E
IRE: I R E -> R[i(f)] E
ERE: E R E -> <E:f> E
)";

const char* kIdo = R"(
K: K -> eps
RR: R R -> R[f*g]
DR: D R -> R[f] D + R[d(f)]
DE: D E -> 0
DI: D I -> eps
ERE: E R E -> <E:f> E
EE: E E -> E
EI: E I -> 0
IRD: I R D -> R[f] - E R[f] - I R[d(f)]
IRE: I R E -> R[i(f)] E
IRI: I R I -> R[i(f)] I - E R[i(f)] I - I R[i(f)]
ID: I D -> eps - E
IE: I E -> R[i(1)] E
II: I I -> R[i(1)] I - E R[i(1)] I - I R[i(1)]
)";

const char* kIdoPhiDefining = R"(
K: K -> eps
RR: R R -> R[f*g]
DR: D R -> R[f] D + R[d(f)]
DI: D I -> eps
ID: I D -> eps - E
DRPhi: D R Phi -> R[d(f)] phi
IRPhi: I R Phi -> R[i(f)] phi
PhiRPhi: Phi R Phi -> <phi:f> psi
)";

const char* kIdoPhi = R"(
K: K -> eps
RR: R R -> R[f*g]
DR: D R -> R[f] D + R[d(f)]
DPhi: D Phi -> 0
DI: D I -> eps
PhiRPhi: Phi R Phi -> <phi:f> psi
PhiPhi: Phi Phi -> <phi:1> psi
EI: E I -> 0
IRD: I R D -> R[f] - E R[f] - I R[d(f)]
IRPhi: I R Phi -> R[i(f)] phi
IRI: I R I -> R[i(f)] I - E R[i(f)] I - I R[i(f)]
ID: I D -> eps - E
IPhi: I Phi -> R[i(1)] phi
II: I I -> R[i(1)] I - E R[i(1)] I - I R[i(1)]
)";

const char* kPhimR = R"(
PhimR: Phim R -> <phi:f> phi
)";

}  // namespace

std::vector<std::string> shipped_system_names() {
    return {"diff", "ido-defining", "ido", "ido-phi-defining", "ido-phi", "ido-phi-mult"};
}

ReductionSystem shipped_system(const std::string& name) {
    if (name == "diff") return ReductionSystem::parse(name, {}, kDiff);
    if (name == "ido-defining") return ReductionSystem::parse(name, {}, kIdoDefining);
    if (name == "ido") return ReductionSystem::parse(name, {}, kIdo);
    if (name == "ido-phi-defining") return ReductionSystem::parse(name, {true, false, false}, kIdoPhiDefining);
    if (name == "ido-phi") return ReductionSystem::parse(name, {true, false, false}, kIdoPhi);
    if (name == "ido-phi-mult")
        return ReductionSystem::parse(name, {true, true, true}, std::string(kIdoPhi) + kPhimR);
    throw OpError("unknown reduction system: " + name);
}

ReductionSystem system_for(const OpContext& ctx) {
    SystemConfig cfg{true, false, ctx.functionals()[0].multiplicative};
    for (std::size_t k = 1; k < ctx.functionals().size(); ++k)
        if (ctx.functionals()[k].multiplicative) cfg.phim = true;
    std::string text = kIdoPhi;
    if (cfg.phim || cfg.e_multiplicative) text += kPhimR;
    return ReductionSystem::parse("ido-phi", cfg, text);
}

// --- operators over a concrete ring ------------------------------------------

Tensor operator_tensor(ConcreteAlgebra& alg, const OperatorExpr& e) {
    const OpContext& ctx = *alg.ctx();
    switch (e.kind) {
        case OperatorExpr::Sum: {
            Tensor t;
            for (const auto& k : e.kids) tensor_add(t, operator_tensor(alg, k), poly_const(Const(1)));
            return t;
        }
        case OperatorExpr::Prod: {
            Tensor t{{Word{}, poly_const(Const(1))}};
            for (const auto& k : e.kids) {
                Tensor rhs = operator_tensor(alg, k), next;
                for (const auto& [a, ca] : t)
                    for (const auto& [b, cb] : rhs) {
                        Word w = a;
                        w.insert(w.end(), b.begin(), b.end());
                        tensor_add(next, w, poly_mul(ca, cb));
                    }
                t = std::move(next);
            }
            return t;
        }
        case OperatorExpr::Coeff: {
            auto sp = alg.split(alg.add(e.coeff));
            Tensor t;
            tensor_add(t, Word{}, sp.constant);
            for (const auto& [slot, c] : sp.slots) tensor_add(t, Word{Slot{Letter::Rt, slot, ""}}, c);
            return t;
        }
        case OperatorExpr::Scalar: return Tensor{{Word{}, poly_const(e.scalar)}};
        case OperatorExpr::Gen:
            if (e.gen == OperatorExpr::D) return Tensor{{Word{Slot{Letter::D, -1, ""}}, poly_const(Const(1))}};
            if (e.gen == OperatorExpr::I) return Tensor{{Word{Slot{Letter::I, -1, ""}}, poly_const(Const(1))}};
            if (e.phi == "e") return Tensor{{Word{Slot{Letter::E, -1, "E"}}, poly_const(Const(1))}};
            {
                int idx = ctx.phi_index(e.phi);
                bool mult = ctx.functionals()[static_cast<std::size_t>(idx)].multiplicative;
                return Tensor{{Word{Slot{mult ? Letter::Phimt : Letter::Phit, -1, ctx.functionals()[static_cast<std::size_t>(idx)].name}},
                               poly_const(Const(1))}};
            }
    }
    return {};
}

NormalForm tensor_operator(const ConcreteAlgebra& alg, const Tensor& t) {
    const OpContext& ctx = *alg.ctx();
    NormalForm out = ctx.zero();
    for (const auto& [w, c] : t) {
        if (c.size() > 1 || (c.size() == 1 && !c.begin()->first.empty())) throw OpError("symbolic coefficient in a concrete tensor");
        NormalForm term = ctx.scalar(c.empty() ? Const(0) : c.begin()->second);
        for (const auto& s : w) {
            switch (s.letter) {
                case Letter::K: break;
                case Letter::Rt: term = term * ctx.coeff(alg.slot_value(s.id)); break;
                case Letter::D: term = term * ctx.d(); break;
                case Letter::I: term = term * ctx.i(); break;
                case Letter::E: term = term * ctx.e(); break;
                default: term = term * ctx.phi(ctx.phi_index(s.fn)); break;
            }
        }
        out += term;
    }
    return out;
}

}  // namespace idr::tenred
