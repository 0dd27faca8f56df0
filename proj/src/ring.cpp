#include "idring/ring.hpp"

#include "idring/syntax.hpp"

#include <algorithm>

namespace idr {

void add_term(Terms& t, const Key& k, const Const& c) {
    if (c.is_zero()) return;
    auto it = t.find(k);
    if (it == t.end()) {
        t.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
}

void add_terms(Terms& t, const Terms& u, const Const& scale) {
    for (const auto& [k, c] : u) add_term(t, k, c * scale);
}

Terms scale_terms(const Terms& t, const Const& c) {
    Terms out;
    if (c.is_zero()) return out;
    for (const auto& [k, v] : t) add_term(out, k, v * c);
    return out;
}

// ---------------------------------------------------------------- RingElem

RingElem::RingElem(RingPtr ring, Terms terms) : ring_(std::move(ring)) {
    for (auto& [k, c] : terms) {
        Const v = ring_ ? ring_->lift(c) : c;
        if (!v.is_zero()) terms_.emplace(k, v);
    }
}

Const RingElem::coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? (ring_ ? ring_->lift(Const(0)) : Const(0)) : it->second;
}

RingElem RingElem::operator-() const { return RingElem(ring_, scale_terms(terms_, Const(-1))); }

static const RingPtr& pick_ring(const RingPtr& a, const RingPtr& b) {
    if (a && b && a != b && a->tag() != b->tag())
        throw RingError("mixing elements of rings " + a->tag() + " and " + b->tag());
    return a ? a : b;
}

RingElem& RingElem::operator+=(const RingElem& o) {
    ring_ = pick_ring(ring_, o.ring_);
    add_terms(terms_, o.terms_);
    return *this;
}

RingElem& RingElem::operator-=(const RingElem& o) {
    ring_ = pick_ring(ring_, o.ring_);
    add_terms(terms_, o.terms_, Const(-1));
    return *this;
}

RingElem operator*(const RingElem& a, const RingElem& b) {
    const RingPtr& r = pick_ring(a.ring_, b.ring_);
    if (!r) throw RingError("product of elements without a ring");
    return r->mul(a, b);
}

RingElem operator*(const Const& c, const RingElem& a) {
    return RingElem(a.ring_, scale_terms(a.terms_, a.ring_ ? a.ring_->lift(c) : c));
}

bool operator==(const RingElem& a, const RingElem& b) { return a.terms_ == b.terms_; }

RingElem RingElem::pow(unsigned n) const {
    RingElem r = ring_->one();
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
}

std::string RingElem::str() const { return ring_ ? ring_->format(*this) : "0"; }

Const Functional::operator()(const RingElem& f) const {
    Const s(0);
    for (const auto& [k, c] : f.terms()) s += c * on_key(k);
    return s;
}

// -------------------------------------------------------------------- Ring

Terms Ring::one_terms() const {
    auto k = one_key();
    if (!k) throw RingError(tag() + " has no single basis key for 1");
    return Terms{{*k, lift(Const(1))}};
}

std::optional<RingElem> Ring::invert(const RingElem& f) const {
    auto ok = one_key();
    if (ok && f.terms().size() == 1 && f.terms().begin()->first == *ok)
        return constant(f.terms().begin()->second.inverse());
    return std::nullopt;
}

std::optional<Functional> Ring::functional(const std::string&) const { return std::nullopt; }

std::optional<Terms> Ring::atom(const std::string&, const std::optional<Const>&) const { return std::nullopt; }

Terms Ring::matrix_literal(const std::vector<std::vector<RingElem>>&) const {
    throw RingError(tag() + " has no matrix literals");
}

RingElem Ring::parse(const std::string& text) const {
    Lexer lx(text);
    RingElem r = parse_sum(*this, lx);
    if (!lx.at_end()) throw ParseError("unexpected '" + lx.peek().text + "'", lx.position());
    return r;
}

std::string Ring::format(const RingElem& f) const {
    if (f.is_zero()) return "0";
    std::vector<Key> keys;
    for (const auto& kv : f.terms()) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end(), [this](const Key& a, const Key& b) { return key_less(a, b); });
    std::string out;
    bool first = true;
    for (const Key& k : keys) {
        Const c = f.terms().at(k);
        std::string mono = key_str(k);
        bool neg = modulus() == 0 && c.sign() < 0;
        Const mag = neg ? -c : c;
        std::string body;
        if (mono.empty()) {
            body = mag.str();
        } else if (mag.is_one()) {
            body = mono;
        } else {
            body = mag.str() + "*" + mono;
        }
        if (first) {
            out += neg ? "-" + body : body;
        } else {
            out += neg ? " - " + body : " + " + body;
        }
        first = false;
    }
    return out;
}

RingElem Ring::elem(Terms t) const { return RingElem(self(), std::move(t)); }
RingElem Ring::zero() const { return elem({}); }
RingElem Ring::one() const { return elem(one_terms()); }
RingElem Ring::constant(const Const& c) const { return elem(scale_terms(one_terms(), lift(c))); }
RingElem Ring::basis(const Key& k) const { return elem(Terms{{k, lift(Const(1))}}); }

RingElem Ring::random(std::mt19937_64& rng, int terms, int size) const {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 3), count(1, terms);
    Terms t;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        Const c = modulus() ? Const(num(rng)) : Const(num(rng), den(rng));
        add_term(t, random_key(rng, size), lift(c));
    }
    return elem(std::move(t));
}

Terms Ring::apply_linear(const Terms& t, const std::function<Terms(const Key&)>& op) const {
    Terms out;
    for (const auto& [k, c] : t) add_terms(out, op(k), c);
    return out;
}

RingElem Ring::derive(const RingElem& f) const {
    return elem(apply_linear(f.terms(), [this](const Key& k) { return derive_key(k); }));
}

RingElem Ring::integrate(const RingElem& f) const {
    return elem(apply_linear(f.terms(), [this](const Key& k) { return integrate_key(k); }));
}

RingElem Ring::evaluate(const RingElem& f) const {
    return elem(apply_linear(f.terms(), [this](const Key& k) { return evaluate_key(k); }));
}

RingElem Ring::mul(const RingElem& f, const RingElem& g) const {
    Terms out;
    for (const auto& [a, ca] : f.terms())
        for (const auto& [b, cb] : g.terms()) add_terms(out, mul_keys(a, b), ca * cb);
    return elem(std::move(out));
}

Const Ring::evaluate_scalar(const RingElem& f) const {
    RingElem e = evaluate(f);
    auto ok = one_key();
    if (!ok) throw RingError(tag() + ": evaluation is not a scalar multiple of 1");
    for (const auto& [k, c] : e.terms())
        if (k != *ok) throw RingError(tag() + ": evaluation is not a scalar multiple of 1");
    return e.coeff(*ok);
}

// ------------------------------------------------------- induced integration

namespace {

class InducedRing final : public Ring {
public:
    InducedRing(RingPtr base, Functional e, std::string tag, bool mult)
        : base_(std::move(base)), e_(std::move(e)), tag_(std::move(tag)), mult_(mult) {}

    std::string tag() const override { return tag_; }
    std::uint32_t modulus() const override { return base_->modulus(); }
    bool commutative() const override { return base_->commutative(); }
    bool integral_domain() const override { return base_->integral_domain(); }
    bool evaluation_multiplicative() const override { return mult_; }
    std::optional<Key> one_key() const override { return base_->one_key(); }
    Terms one_terms() const override { return base_->one_terms(); }
    Terms mul_keys(const Key& a, const Key& b) const override { return base_->mul_keys(a, b); }
    Terms derive_key(const Key& a) const override { return base_->derive_key(a); }

    Terms integrate_key(const Key& a) const override {
        Terms t = base_->integrate_key(a);
        Const shift = e_(RingElem(base_, t));
        add_terms(t, base_->one_terms(), -shift);
        return t;
    }

    Terms evaluate_key(const Key& a) const override {
        return scale_terms(base_->one_terms(), e_.on_key(a));
    }

    std::optional<RingElem> invert(const RingElem& f) const override {
        auto r = base_->invert(RingElem(base_, f.terms()));
        if (!r) return std::nullopt;
        return elem(r->terms());
    }

    std::vector<std::string> functional_names() const override { return base_->functional_names(); }
    std::optional<Functional> functional(const std::string& name) const override {
        return base_->functional(name);
    }
    std::string key_str(const Key& k) const override { return base_->key_str(k); }
    bool key_less(const Key& a, const Key& b) const override { return base_->key_less(a, b); }
    std::optional<Terms> atom(const std::string& ident, const std::optional<Const>& arg) const override {
        return base_->atom(ident, arg);
    }
    Key random_key(std::mt19937_64& rng, int size) const override { return base_->random_key(rng, size); }

private:
    RingPtr base_;
    Functional e_;
    std::string tag_;
    bool mult_;
};

}  // namespace

RingPtr induced_integration(RingPtr base, Functional e, std::string tag, bool multiplicative) {
    if (e(base->one()) != Const(1))
        throw RingError("functional " + e.name + " is not an evaluation: e(1) != 1");
    return std::make_shared<InducedRing>(std::move(base), std::move(e), std::move(tag), multiplicative);
}

}  // namespace idr
