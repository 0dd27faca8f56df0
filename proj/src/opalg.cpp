#include "idring/opalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

namespace idr {

namespace {

// ------------------------------------------------------------ words

struct Letter {
    enum Kind : std::uint8_t { R, D, I, Phi };
    Kind kind = R;
    int phi = 0;
    RingElem f;

    friend bool operator<(const Letter& a, const Letter& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.phi != b.phi) return a.phi < b.phi;
        return a.f < b.f;
    }
    friend bool operator==(const Letter& a, const Letter& b) {
        return a.kind == b.kind && a.phi == b.phi && a.f == b.f;
    }
};

using Word = std::vector<Letter>;
using Poly = std::map<Word, Const>;

Letter R(RingElem f) { return Letter{Letter::R, 0, std::move(f)}; }
Letter D() { return Letter{Letter::D, 0, {}}; }
Letter I() { return Letter{Letter::I, 0, {}}; }
Letter Phi(int idx) { return Letter{Letter::Phi, idx, {}}; }

void add_mono(Poly& p, const Word& w, const Const& c) {
    if (c.is_zero()) return;
    for (const auto& l : w)
        if (l.kind == Letter::R && l.f.is_zero()) return;
    auto it = p.find(w);
    if (it == p.end()) {
        p.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
}

std::string paren(const RingElem& f) {
    std::string s = f.str();
    return f.terms().size() > 1 ? "(" + s + ")" : s;
}

std::string word_str(const OpContext& ctx, const Word& w) {
    std::vector<std::string> parts;
    for (const auto& l : w) {
        switch (l.kind) {
            case Letter::R: parts.push_back(paren(l.f)); break;
            case Letter::D: parts.push_back("d"); break;
            case Letter::I: parts.push_back("i"); break;
            case Letter::Phi: parts.push_back(ctx.phi_name(l.phi)); break;
        }
    }
    if (parts.empty()) return "1";
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "*") + p;
    return out;
}

std::string mono_str(const OpContext& ctx, const Word& w, const Const& c) {
    std::string body = word_str(ctx, w);
    if (w.empty()) return c.str();
    if (c.is_one()) return body;
    if (c == Const(-1) && c.modulus() == 0) return "-" + body;
    return c.str() + "*" + body;
}

std::string poly_str(const OpContext& ctx, const Poly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : p) {
        std::string m = mono_str(ctx, w, c);
        if (out.empty()) out = m;
        else if (m[0] == '-') out += " - " + m.substr(1);
        else out += " + " + m;
    }
    return out;
}

// ---------------------------------------------------------- rewriter

enum Rule { K, RR, DR, DPhi, DI, PhiRPhi, PhiPhi, EI, IRD, IRPhi, IRI, ID, IPhi, II, PhiM, ERI, kRuleCount };

const char* rule_name(Rule r) {
    static const char* names[] = {"K",   "RR",  "DR",  "DPhi", "DI", "PhiRPhi", "PhiPhi", "EI",
                                  "IRD", "IRPhi", "IRI", "ID",  "IPhi", "II",  "PhiM",    "ERI"};
    return names[r];
}

struct Match {
    std::size_t pos;
    std::size_t len;
    Rule rule;
};

using Fragment = std::vector<std::pair<Const, Word>>;

class Rewriter {
public:
    explicit Rewriter(const OpContext& ctx) : ctx_(ctx), ring_(*ctx.ring()) {}

    bool try_rule(Rule r, const Word& w, std::size_t p, Fragment* out) const {
        auto at = [&](std::size_t k, Letter::Kind kind) { return p + k < w.size() && w[p + k].kind == kind; };
        auto emit = [&](Const c, Word frag) {
            if (out) out->emplace_back(std::move(c), std::move(frag));
        };
        const Const one(1), minus(-1);
        switch (r) {
            case K:
                if (!at(0, Letter::R) || !ring_.is_constant(w[p].f)) return false;
                if (out) emit(ring_.evaluate_scalar(w[p].f), {});
                return true;
            case RR:
                if (!at(0, Letter::R) || !at(1, Letter::R)) return false;
                if (out) emit(one, {R(w[p].f * w[p + 1].f)});
                return true;
            case DR:
                if (!at(0, Letter::D) || !at(1, Letter::R)) return false;
                if (out) {
                    emit(one, {w[p + 1], D()});
                    emit(one, {R(ring_.derive(w[p + 1].f))});
                }
                return true;
            case DPhi:
                return at(0, Letter::D) && at(1, Letter::Phi);
            case DI:
                if (!at(0, Letter::D) || !at(1, Letter::I)) return false;
                emit(one, {});
                return true;
            case PhiRPhi:
                if (!at(0, Letter::Phi) || !at(1, Letter::R) || !at(2, Letter::Phi)) return false;
                if (out) emit(ctx_.phi_value(w[p].phi, w[p + 1].f), {w[p + 2]});
                return true;
            case PhiPhi:
                if (!at(0, Letter::Phi) || !at(1, Letter::Phi)) return false;
                if (out) emit(ctx_.phi_value(w[p].phi, ring_.one()), {w[p + 1]});
                return true;
            case EI:
                return at(0, Letter::Phi) && w[p].phi == 0 && at(1, Letter::I);
            case IRD:
                if (!at(0, Letter::I) || !at(1, Letter::R) || !at(2, Letter::D)) return false;
                if (out) {
                    const RingElem& f = w[p + 1].f;
                    emit(one, {R(f)});
                    emit(minus, {Phi(0), R(f)});
                    emit(minus, {I(), R(ring_.derive(f))});
                }
                return true;
            case IRPhi:
                if (!at(0, Letter::I) || !at(1, Letter::R) || !at(2, Letter::Phi)) return false;
                if (out) emit(one, {R(ring_.integrate(w[p + 1].f)), w[p + 2]});
                return true;
            case IRI:
                if (!at(0, Letter::I) || !at(1, Letter::R) || !at(2, Letter::I)) return false;
                if (out) integral_product(ring_.integrate(w[p + 1].f), *out);
                return true;
            case ID:
                if (!at(0, Letter::I) || !at(1, Letter::D)) return false;
                emit(one, {});
                emit(minus, {Phi(0)});
                return true;
            case IPhi:
                if (!at(0, Letter::I) || !at(1, Letter::Phi)) return false;
                if (out) emit(one, {R(ring_.integrate(ring_.one())), w[p + 1]});
                return true;
            case II:
                if (!at(0, Letter::I) || !at(1, Letter::I)) return false;
                if (out) integral_product(ring_.integrate(ring_.one()), *out);
                return true;
            case PhiM:
                if (!at(0, Letter::Phi) || !ctx_.functionals()[w[p].phi].multiplicative || !at(1, Letter::R))
                    return false;
                if (out) emit(ctx_.phi_value(w[p].phi, w[p + 1].f), {w[p]});
                return true;
            case ERI: {
                if (!at(0, Letter::Phi) || w[p].phi != 0 || !at(1, Letter::R) || !at(2, Letter::I)) return false;
                const RingElem& h = w[p + 1].f;
                RingElem eh = ring_.evaluate(h);
                if (eh.is_zero()) return false;
                if (out) emit(one, {Phi(0), R(h - eh), I()});
                return true;
            }
            default:
                return false;
        }
    }

    static std::size_t rule_length(Rule r) {
        switch (r) {
            case K: return 1;
            case PhiRPhi: case IRD: case IRPhi: case IRI: case ERI: return 3;
            default: return 2;
        }
    }

    std::optional<Match> first_match(const Word& w) const {
        for (std::size_t p = 0; p < w.size(); ++p)
            for (int r = 0; r < kRuleCount; ++r)
                if (try_rule(Rule(r), w, p, nullptr)) return Match{p, rule_length(Rule(r)), Rule(r)};
        return std::nullopt;
    }

    std::vector<Match> all_matches(const Word& w) const {
        std::vector<Match> out;
        for (std::size_t p = 0; p < w.size(); ++p)
            for (int r = 0; r < kRuleCount; ++r)
                if (try_rule(Rule(r), w, p, nullptr)) out.push_back(Match{p, rule_length(Rule(r)), Rule(r)});
        return out;
    }

    Poly rewrite_at(const Word& w, const Const& c, const Match& m) const {
        Fragment frag;
        try_rule(m.rule, w, m.pos, &frag);
        Poly out;
        for (auto& [k, piece] : frag) {
            Word nw(w.begin(), w.begin() + m.pos);
            nw.insert(nw.end(), piece.begin(), piece.end());
            nw.insert(nw.end(), w.begin() + m.pos + m.len, w.end());
            add_mono(out, nw, c * k);
        }
        return out;
    }

    Poly normalize(Poly pending, const RewriteOptions& opt) const {
        Poly done;
        std::mt19937_64 rng(opt.seed);
        while (!pending.empty()) {
            auto it = pending.begin();
            if (opt.strategy == RewriteOptions::Random && pending.size() > 1)
                std::advance(it, std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(rng));
            Word w = it->first;
            Const c = it->second;
            pending.erase(it);
            std::optional<Match> m;
            if (opt.strategy == RewriteOptions::Random) {
                auto ms = all_matches(w);
                if (!ms.empty()) m = ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
            } else {
                m = first_match(w);
            }
            if (!m) {
                add_mono(done, w, c);
                continue;
            }
            Poly res = rewrite_at(w, c, *m);
            if (opt.trace)
                opt.trace->push_back(std::string(rule_name(m->rule)) + ": " + mono_str(ctx_, w, c) + " -> " +
                                     poly_str(ctx_, res));
            for (const auto& [nw, nc] : res) add_mono(pending, nw, nc);
        }
        return done;
    }

private:
    // i*f*i and i*i share one shape with F = integral of the middle factor.
    void integral_product(const RingElem& F, Fragment& out) const {
        out.emplace_back(Const(1), Word{R(F), I()});
        out.emplace_back(Const(-1), Word{Phi(0), R(F), I()});
        out.emplace_back(Const(-1), Word{I(), R(F)});
    }

    const OpContext& ctx_;
    const Ring& ring_;
};

// ------------------------------------------------- word <-> normal form

NormalForm::TermMap to_terms(const OpContext& ctx, const Poly& p, const Key& one) {
    NormalForm::TermMap out;
    RingElem unit = ctx.ring()->one();
    auto add = [&](const TermKey& k, const Const& c) {
        if (c.is_zero()) return;
        auto it = out.find(k);
        if (it == out.end()) {
            out.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (const auto& [w, c] : p) {
        std::size_t i = 0;
        auto take_r = [&]() -> RingElem {
            if (i < w.size() && w[i].kind == Letter::R) return w[i++].f;
            return unit;
        };
        RingElem f = take_r();
        int phi = -1;
        RingElem h = unit;
        if (i < w.size() && w[i].kind == Letter::Phi) {
            phi = w[i++].phi;
            h = take_r();
        }
        bool integral = false;
        std::int64_t j = 0;
        RingElem g = unit;
        if (i < w.size() && w[i].kind == Letter::I) {
            integral = true;
            ++i;
            g = take_r();
        } else {
            while (i < w.size() && w[i].kind == Letter::D) ++j, ++i;
        }
        if (i != w.size()) throw std::logic_error("irreducible word of unexpected shape: " + word_str(ctx, w));

        TermKey k;
        k.kind = phi < 0 ? (integral ? TermKey::Int : TermKey::Diff) : (integral ? TermKey::PhiI : TermKey::PhiD);
        k.phi = std::max(phi, 0);
        k.j = j;
        for (const auto& [kf, cf] : f.terms())
            for (const auto& [kh, ch] : h.terms()) {
                if (k.kind == TermKey::PhiI && k.phi == 0 && kh == one) continue;
                for (const auto& [kg, cg] : g.terms()) {
                    TermKey t = k;
                    t.f = kf;
                    if (phi >= 0) t.h = kh;
                    if (integral) t.g = kg;
                    add(t, c * cf * ch * cg);
                }
            }
    }
    return out;
}

Poly to_poly(const OpContext& ctx, const NormalForm& nf, const Key& one) {
    Poly p;
    const Ring& r = *ctx.ring();
    for (const auto& [k, c] : nf.terms()) {
        Word w;
        if (k.f != one) w.push_back(R(r.basis(k.f)));
        if (k.kind == TermKey::PhiD || k.kind == TermKey::PhiI) {
            w.push_back(Phi(k.phi));
            if (k.h != one) w.push_back(R(ctx.slot_h(k)));
        }
        if (k.kind == TermKey::Int || k.kind == TermKey::PhiI) {
            w.push_back(I());
            if (k.g != one) w.push_back(R(r.basis(k.g)));
        } else {
            for (std::int64_t j = 0; j < k.j; ++j) w.push_back(D());
        }
        add_mono(p, w, c);
    }
    return p;
}

Poly concat(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            add_mono(out, w, ca * cb);
        }
    return out;
}

Poly expand(const OpContext& ctx, const OperatorExpr& e) {
    switch (e.kind) {
        case OperatorExpr::Sum: {
            Poly out;
            for (const auto& k : e.kids)
                for (const auto& [w, c] : expand(ctx, k)) add_mono(out, w, c);
            return out;
        }
        case OperatorExpr::Prod: {
            Poly out{{Word{}, Const(1)}};
            for (const auto& k : e.kids) out = concat(out, expand(ctx, k));
            return out;
        }
        case OperatorExpr::Coeff: {
            Poly out;
            add_mono(out, Word{R(e.coeff)}, Const(1));
            return out;
        }
        case OperatorExpr::Scalar: {
            Poly out;
            add_mono(out, Word{}, ctx.ring()->lift(e.scalar));
            return out;
        }
        case OperatorExpr::Gen:
            switch (e.gen) {
                case OperatorExpr::D: return Poly{{Word{D()}, Const(1)}};
                case OperatorExpr::I: return Poly{{Word{I()}, Const(1)}};
                case OperatorExpr::Phi: return Poly{{Word{Phi(ctx.phi_index(e.phi))}, Const(1)}};
            }
    }
    return {};
}

// Print order: differential part by descending order, then integral, then initial.
bool print_less(const Ring& r, const TermKey& a, const TermKey& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.phi != b.phi) return a.phi < b.phi;
    if (a.j != b.j) return a.j > b.j;
    for (auto slot : {&TermKey::f, &TermKey::h, &TermKey::g}) {
        const Key &x = a.*slot, &y = b.*slot;
        if (x == y) continue;
        if (x.empty() || y.empty()) return x.empty();
        return r.key_less(x, y);
    }
    return false;
}

std::string term_with_coeff(const OpContext& ctx, const TermKey& k, const Const& c) {
    std::string body = ctx.term_str(k);
    if (body == "1") return c.str();
    if (c.is_one()) return body;
    if (c.modulus() == 0 && c == Const(-1)) return "-" + body;
    return c.str() + "*" + body;
}

}  // namespace

// ---------------------------------------------------------- NormalForm

NormalForm::NormalForm(OpContextPtr ctx, TermMap terms) : ctx_(std::move(ctx)) {
    for (auto& [k, c] : terms)
        if (!c.is_zero()) terms_.emplace(k, c);
}

NormalForm NormalForm::operator-() const { return Const(-1) * *this; }

NormalForm& NormalForm::operator+=(const NormalForm& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

NormalForm& NormalForm::operator-=(const NormalForm& o) { return *this += -o; }

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
    const OpContextPtr& ctx = a.ctx_ ? a.ctx_ : b.ctx_;
    if (!ctx) return NormalForm();
    return ctx->multiply(a, b);
}

NormalForm operator*(const Const& c, const NormalForm& a) {
    NormalForm::TermMap t;
    if (!c.is_zero())
        for (const auto& [k, v] : a.terms_) {
            Const x = v * c;
            if (!x.is_zero()) t.emplace(k, x);
        }
    return NormalForm(a.ctx_, std::move(t));
}

NormalForm NormalForm::pow(unsigned n) const {
    NormalForm r = ctx_->one();
    for (unsigned k = 0; k < n; ++k) r = r * *this;
    return r;
}

NormalForm NormalForm::filter(std::initializer_list<TermKey::Kind> kinds) const {
    TermMap t;
    for (const auto& [k, c] : terms_)
        if (std::find(kinds.begin(), kinds.end(), k.kind) != kinds.end()) t.emplace(k, c);
    return NormalForm(ctx_, std::move(t));
}

static std::vector<std::pair<TermKey, Const>> sorted_terms(const NormalForm& nf) {
    std::vector<std::pair<TermKey, Const>> v(nf.terms().begin(), nf.terms().end());
    const Ring& r = *nf.ctx()->ring();
    std::stable_sort(v.begin(), v.end(), [&r](const auto& a, const auto& b) { return print_less(r, a.first, b.first); });
    return v;
}

std::string NormalForm::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : sorted_terms(*this)) {
        std::string m = term_with_coeff(*ctx_, k, c);
        if (out.empty()) out = m;
        else if (m[0] == '-') out += " - " + m.substr(1);
        else out += " + " + m;
    }
    return out;
}

std::string NormalForm::json() const {
    using nlohmann::json;
    json diff = json::array(), integral = json::array(), initial = json::array();
    if (!ctx_) return json{{"diff", diff}, {"integral", integral}, {"initial", initial}}.dump();
    const Ring& r = *ctx_->ring();
    auto slot = [&](const Key& k) { return r.key_str(k).empty() ? std::string("1") : r.key_str(k); };
    for (const auto& [k, c] : sorted_terms(*this)) {
        json t{{"coeff", c.str()}, {"f", slot(k.f)}};
        switch (k.kind) {
            case TermKey::Diff:
                t["order"] = k.j;
                diff.push_back(t);
                break;
            case TermKey::Int:
                t["g"] = slot(k.g);
                integral.push_back(t);
                break;
            case TermKey::PhiD:
            case TermKey::PhiI:
                t["functional"] = ctx_->phi_name(k.phi);
                t["h"] = k.kind == TermKey::PhiI && k.phi == 0 ? ctx_->slot_h(k).str() : slot(k.h);
                if (k.kind == TermKey::PhiD) {
                    t["order"] = k.j;
                } else {
                    t["integral"] = true;
                    t["g"] = slot(k.g);
                }
                initial.push_back(t);
                break;
        }
    }
    return json{{"text", str()}, {"diff", diff}, {"integral", integral}, {"initial", initial}}.dump();
}

// -------------------------------------------------------- OperatorExpr

OperatorExpr OperatorExpr::sum(std::vector<OperatorExpr> k) {
    OperatorExpr e;
    e.kind = Sum;
    e.kids = std::move(k);
    return e;
}

OperatorExpr OperatorExpr::prod(std::vector<OperatorExpr> k) {
    OperatorExpr e;
    e.kind = Prod;
    e.kids = std::move(k);
    return e;
}

OperatorExpr OperatorExpr::of(RingElem f) {
    OperatorExpr e;
    e.kind = Coeff;
    e.coeff = std::move(f);
    return e;
}

OperatorExpr OperatorExpr::constant(Const c) {
    OperatorExpr e;
    e.kind = Scalar;
    e.scalar = std::move(c);
    return e;
}

static OperatorExpr generator(OperatorExpr::GenKind g, std::string phi = {}) {
    OperatorExpr e;
    e.kind = OperatorExpr::Gen;
    e.gen = g;
    e.phi = std::move(phi);
    return e;
}

OperatorExpr OperatorExpr::d() { return generator(D); }
OperatorExpr OperatorExpr::i() { return generator(I); }
OperatorExpr OperatorExpr::e() { return generator(Phi, "e"); }
OperatorExpr OperatorExpr::functional(std::string name) { return generator(Phi, std::move(name)); }

OperatorExpr operator-(OperatorExpr a, OperatorExpr b) {
    return OperatorExpr::sum({std::move(a), OperatorExpr::prod({OperatorExpr::constant(Const(-1)), std::move(b)})});
}

std::string OperatorExpr::str() const {
    switch (kind) {
        case Sum: {
            if (kids.empty()) return "0";
            std::string out;
            for (const auto& k : kids) out += (out.empty() ? "" : " + ") + k.str();
            return "(" + out + ")";
        }
        case Prod: {
            if (kids.empty()) return "1";
            std::string out;
            for (const auto& k : kids) out += (out.empty() ? "" : "*") + k.str();
            return out;
        }
        case Coeff: return paren(coeff);
        case Scalar: return scalar.sign() < 0 ? "(" + scalar.str() + ")" : scalar.str();
        case Gen:
            if (gen == D) return "d";
            if (gen == I) return "i";
            return phi == "e" ? "e" : "phi:" + phi;
    }
    return "?";
}

// ----------------------------------------------------------- OpContext

OpContextPtr OpContext::create(RingPtr ring, const std::vector<std::string>& phis,
                               const std::vector<std::string>& multiplicative) {
    if (!ring->one_key()) throw OpError("operator ring needs coefficients with a scalar unit: " + ring->tag());
    std::shared_ptr<OpContext> ctx(new OpContext(ring));
    ctx->one_ = *ring->one_key();
    Ring const* rp = ring.get();
    Functional ev{"e", [rp](const Key& k) { return rp->evaluate_scalar(rp->basis(k)); }, false};
    ctx->phis_.push_back(PhiEntry{"e", ev, false});
    for (const auto& name : phis) {
        if (name == "e") continue;
        auto fn = ring->functional(name);
        if (!fn) throw OpError("ring " + ring->tag() + " has no functional '" + name + "'");
        ctx->phis_.push_back(PhiEntry{name, *fn, false});
    }
    for (const auto& name : multiplicative) {
        int idx = ctx->phi_index(name == "e" ? "e" : name);
        PhiEntry& p = ctx->phis_[idx];
        if (p.fn(ring->one()) == Const(1)) p.multiplicative = true;
    }
    return ctx;
}

int OpContext::phi_index(const std::string& name) const {
    std::string n = name.rfind("phi:", 0) == 0 ? name.substr(4) : name;
    for (std::size_t k = 0; k < phis_.size(); ++k)
        if (phis_[k].name == n) return static_cast<int>(k);
    throw OpError("unknown functional '" + name + "'");
}

Const OpContext::phi_value(int idx, const RingElem& f) const { return ring_->lift(phis_.at(idx).fn(f)); }

NormalForm OpContext::zero() const { return NormalForm(shared_from_this(), {}); }

NormalForm OpContext::scalar(const Const& c) const {
    TermKey k;
    k.f = one_;
    return NormalForm(shared_from_this(), {{k, ring_->lift(c)}});
}

NormalForm OpContext::one() const { return scalar(Const(1)); }

NormalForm OpContext::coeff(const RingElem& f) const {
    NormalForm::TermMap t;
    for (const auto& [k, c] : f.terms()) {
        TermKey tk;
        tk.f = k;
        t.emplace(tk, c);
    }
    return NormalForm(shared_from_this(), std::move(t));
}

NormalForm OpContext::d() const {
    TermKey k;
    k.f = one_;
    k.j = 1;
    return NormalForm(shared_from_this(), {{k, Const(1)}});
}

NormalForm OpContext::i() const {
    TermKey k;
    k.kind = TermKey::Int;
    k.f = one_;
    k.g = one_;
    return NormalForm(shared_from_this(), {{k, Const(1)}});
}

NormalForm OpContext::phi(int idx) const {
    TermKey k;
    k.kind = TermKey::PhiD;
    k.phi = idx;
    k.f = one_;
    k.h = one_;
    return NormalForm(shared_from_this(), {{k, Const(1)}});
}

NormalForm OpContext::e() const { return phi(0); }

NormalForm OpContext::normalize(const OperatorExpr& expr, const RewriteOptions& opt) const {
    Rewriter rw(*this);
    return NormalForm(shared_from_this(), to_terms(*this, rw.normalize(expand(*this, expr), opt), one_));
}

NormalForm OpContext::multiply(const NormalForm& a, const NormalForm& b, const RewriteOptions& opt) const {
    Rewriter rw(*this);
    Poly p = concat(to_poly(*this, a, one_), to_poly(*this, b, one_));
    return NormalForm(shared_from_this(), to_terms(*this, rw.normalize(std::move(p), opt), one_));
}

ProofResult OpContext::prove_equal(const OperatorExpr& a, const OperatorExpr& b) const {
    NormalForm d = normalize(a - b);
    return ProofResult{d.is_zero(), d};
}

Decomposition OpContext::decompose(const NormalForm& nf) const {
    return Decomposition{nf.filter({TermKey::Diff}), nf.filter({TermKey::Int}),
                         nf.filter({TermKey::PhiD, TermKey::PhiI})};
}

RingElem OpContext::slot_h(const TermKey& k) const {
    RingElem h = ring_->basis(k.h);
    if (k.kind == TermKey::PhiI && k.phi == 0) h -= ring_->evaluate(h);
    return h;
}

RingElem OpContext::apply(const NormalForm& op, const RingElem& g) const {
    const Ring& r = *ring_;
    RingElem out = r.zero();
    for (const auto& [k, c] : op.terms()) {
        RingElem f = r.basis(k.f);
        auto derivs = [&](std::int64_t j) {
            RingElem x = g;
            for (std::int64_t t = 0; t < j; ++t) x = r.derive(x);
            return x;
        };
        RingElem v;
        switch (k.kind) {
            case TermKey::Diff: v = f * derivs(k.j); break;
            case TermKey::Int: v = f * r.integrate(r.basis(k.g) * g); break;
            case TermKey::PhiD: v = phi_value(k.phi, r.basis(k.h) * derivs(k.j)) * f; break;
            case TermKey::PhiI: v = phi_value(k.phi, slot_h(k) * r.integrate(r.basis(k.g) * g)) * f; break;
        }
        out += c * v;
    }
    return out;
}

RingElem OpContext::eval_expr(const OperatorExpr& e, const RingElem& f) const {
    const Ring& r = *ring_;
    switch (e.kind) {
        case OperatorExpr::Sum: {
            RingElem s = r.zero();
            for (const auto& k : e.kids) s += eval_expr(k, f);
            return s;
        }
        case OperatorExpr::Prod: {
            RingElem x = f;
            for (auto it = e.kids.rbegin(); it != e.kids.rend(); ++it) x = eval_expr(*it, x);
            return x;
        }
        case OperatorExpr::Coeff: return e.coeff * f;
        case OperatorExpr::Scalar: return e.scalar * f;
        case OperatorExpr::Gen:
            if (e.gen == OperatorExpr::D) return r.derive(f);
            if (e.gen == OperatorExpr::I) return r.integrate(f);
            return r.constant(phi_value(phi_index(e.phi), f));
    }
    return r.zero();
}

std::string OpContext::term_str(const TermKey& k) const {
    const Ring& r = *ring_;
    std::vector<std::string> parts;
    auto slot = [&](const Key& key) {
        if (key != one_) parts.push_back(r.key_str(key));
    };
    auto dpow = [&](std::int64_t j) {
        if (j == 1) parts.push_back("d");
        else if (j > 1) parts.push_back("d^" + std::to_string(j));
    };
    slot(k.f);
    if (k.kind == TermKey::PhiD || k.kind == TermKey::PhiI) {
        parts.push_back(phi_name(k.phi));
        if (k.kind == TermKey::PhiI && k.phi == 0) parts.push_back(paren(slot_h(k)));
        else slot(k.h);
    }
    if (k.kind == TermKey::Int || k.kind == TermKey::PhiI) {
        parts.push_back("i");
        slot(k.g);
    } else {
        dpow(k.j);
    }
    if (parts.empty()) return "1";
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "*") + p;
    return out;
}

// ------------------------------------------------------------- parser

namespace {

class OpParser {
public:
    OpParser(const OpContext& ctx, const std::string& text, const ElemDefs* defs)
        : ctx_(ctx), ring_(*ctx.ring()), lx_(text), defs_(defs) {}

    OperatorExpr run() {
        OperatorExpr e = sum();
        if (!lx_.at_end()) throw ParseError("unexpected '" + lx_.peek().text + "'", lx_.position());
        return e;
    }

private:
    OperatorExpr sum() {
        std::vector<OperatorExpr> terms;
        bool neg = lx_.accept_sym("-");
        if (!neg) lx_.accept_sym("+");
        terms.push_back(signed_term(neg));
        while (true) {
            if (lx_.accept_sym("+")) terms.push_back(signed_term(false));
            else if (lx_.accept_sym("-")) terms.push_back(signed_term(true));
            else break;
        }
        return terms.size() == 1 ? terms[0] : OperatorExpr::sum(std::move(terms));
    }

    OperatorExpr signed_term(bool neg) {
        OperatorExpr t = term();
        if (!neg) return t;
        return OperatorExpr::prod({OperatorExpr::constant(Const(-1)), std::move(t)});
    }

    OperatorExpr term() {
        std::vector<OperatorExpr> fs{factor()};
        while (lx_.accept_sym("*")) fs.push_back(factor());
        return fs.size() == 1 ? fs[0] : OperatorExpr::prod(std::move(fs));
    }

    OperatorExpr factor() {
        OperatorExpr a = atom();
        if (!lx_.peek_sym("^")) return a;
        lx_.next();
        const Token& t = lx_.peek();
        if (t.kind != Token::Number) throw ParseError("expected exponent", t.pos);
        unsigned n = static_cast<unsigned>(std::stoul(lx_.next().text));
        if (a.kind == OperatorExpr::Coeff) return OperatorExpr::of(a.coeff.pow(n));
        return OperatorExpr::prod(std::vector<OperatorExpr>(n, a));
    }

    RingElem element() {
        RingElem e = parse_power(ring_, lx_, defs_);
        while (lx_.peek_sym("/")) {
            std::size_t pos = lx_.next().pos;
            RingElem d = parse_power(ring_, lx_, defs_);
            auto inv = ring_.invert(d);
            if (!inv) throw ParseError("'" + d.str() + "' is not invertible in this representation", pos);
            e = e * *inv;
        }
        return e;
    }

    OperatorExpr atom() {
        const Token& t = lx_.peek();
        if (lx_.peek_sym("(")) {
            lx_.next();
            OperatorExpr e = sum();
            lx_.expect_sym(")");
            return e;
        }
        if (t.kind == Token::Ident) {
            if (t.text == "d") return lx_.next(), OperatorExpr::d();
            if (t.text == "i") return lx_.next(), OperatorExpr::i();
            if (t.text == "e") return lx_.next(), OperatorExpr::e();
            if (t.text == "I1") return lx_.next(), OperatorExpr::of(ring_.integrate(ring_.one()));
            if (t.text == "phi" && lx_.peek_sym(":", 1)) {
                std::size_t pos = t.pos;
                lx_.next();
                lx_.next();
                const Token& n = lx_.peek();
                if (n.kind != Token::Ident) throw ParseError("expected functional name", n.pos);
                std::string name = lx_.next().text;
                try {
                    ctx_.phi_index(name);
                } catch (const OpError& e) {
                    throw ParseError(e.what(), pos);
                }
                return OperatorExpr::functional(name);
            }
            if (t.text == "D" || t.text == "I") {
                bool deriv = t.text == "D";
                lx_.next();
                RingElem f = parse_power(ring_, lx_, defs_);
                return OperatorExpr::of(deriv ? ring_.derive(f) : ring_.integrate(f));
            }
        }
        if (starts_element(ring_, lx_, defs_)) {
            RingElem f = element();
            return OperatorExpr::of(f);
        }
        if (t.kind == Token::End) throw ParseError("unexpected end of input", t.pos);
        throw ParseError("unexpected '" + t.text + "'", t.pos);
    }

    const OpContext& ctx_;
    const Ring& ring_;
    Lexer lx_;
    const ElemDefs* defs_;
};

}  // namespace

OperatorExpr OpContext::parse(const std::string& text, const ElemDefs* defs) const {
    return OpParser(*this, text, defs).run();
}

}  // namespace idr
