#include "idring/calculus.hpp"

namespace idr {

namespace {

void add_word(ShuffleTensor& t, const IntegralWord& w, const Const& c) {
    if (c.is_zero()) return;
    auto it = t.find(w);
    if (it == t.end()) {
        t.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
}

IntegralWord slice(const IntegralWord& w, std::size_t from, std::size_t to) {
    return IntegralWord(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to));
}

RingElem derivs(const Ring& r, RingElem f, unsigned k) {
    for (unsigned t = 0; t < k; ++t) f = r.derive(f);
    return f;
}

OperatorExpr power(OperatorExpr a, unsigned n) {
    if (n == 0) return OperatorExpr::constant(Const(1));
    return OperatorExpr::prod(std::vector<OperatorExpr>(n, a));
}

Const sign(long k) { return Const(k % 2 == 0 ? 1 : -1); }

void check_taylor_hypothesis(const Ring& r, unsigned n) {
    for (unsigned a = 1; a <= n + 1; ++a)
        for (unsigned b = 1; b <= n + 1; ++b)
            if (!c_mn(r, a, b).is_zero()) throw RingError("hypothesis-violated");
}

}  // namespace

ShuffleTensor shuffle(const IntegralWord& a, const IntegralWord& b) {
    ShuffleTensor out;
    if (a.empty() || b.empty()) {
        add_word(out, a.empty() ? b : a, Const(1));
        return out;
    }
    for (const auto& [w, c] : shuffle(slice(a, 1, a.size()), b)) {
        IntegralWord x{a[0]};
        x.insert(x.end(), w.begin(), w.end());
        add_word(out, x, c);
    }
    for (const auto& [w, c] : shuffle(a, slice(b, 1, b.size()))) {
        IntegralWord x{b[0]};
        x.insert(x.end(), w.begin(), w.end());
        add_word(out, x, c);
    }
    return out;
}

ShuffleTensor shuffle(const ShuffleTensor& a, const ShuffleTensor& b) {
    ShuffleTensor out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b)
            for (const auto& [w, c] : shuffle(wa, wb)) add_word(out, w, ca * cb * c);
    return out;
}

RingElem nested_integral(const Ring& r, const IntegralWord& w) {
    RingElem v = r.one();
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = r.integrate(*it * v);
    return v;
}

RingElem nested_integral(const Ring& r, const ShuffleTensor& t) {
    RingElem v = r.zero();
    for (const auto& [w, c] : t) v += c * nested_integral(r, w);
    return v;
}

std::string tensor_str(const ShuffleTensor& t) {
    if (t.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : t) {
        std::string word;
        for (const auto& f : w) word += (word.empty() ? "" : " (x) ") + (f.terms().size() > 1 ? "(" + f.str() + ")" : f.str());
        if (word.empty()) word = "eps";
        std::string term = c.is_one() ? word : c.str() + "*[" + word + "]";
        if (out.empty()) out = term;
        else if (term[0] == '-') out += " - " + term.substr(1);
        else out += " + " + term;
    }
    return out;
}

RingElem GeneralizedShuffle::value(const Ring& ring) const {
    RingElem v = nested_integral(ring, main);
    for (const auto& c : corrections) v += c.e * nested_integral(ring, c.lower);
    return v;
}

GeneralizedShuffle generalized_shuffle_expand(const Ring& r, const IntegralWord& f, const IntegralWord& g) {
    if (!r.commutative()) throw RingError("commutative-ring-required");
    GeneralizedShuffle out;
    out.main = shuffle(f, g);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            RingElem tail = nested_integral(r, slice(f, i, f.size())) * nested_integral(r, slice(g, j, g.size()));
            Const e = r.evaluate_scalar(tail);
            if (e.is_zero()) continue;
            out.corrections.push_back({i, j, e, shuffle(slice(f, 0, i), slice(g, 0, j))});
        }
    return out;
}

RingElem x_n(const Ring& r, unsigned n) {
    RingElem x = r.one();
    for (unsigned k = 0; k < n; ++k) x = r.integrate(x);
    return x;
}

Const c_mn(const Ring& r, unsigned m, unsigned n) { return r.evaluate_scalar(x_n(r, m) * x_n(r, n)); }

Const c_mn_recursive(const Ring& r, unsigned m, unsigned n) {
    if (m == 1) return c_mn(r, 1, n);
    Const s = binomial(m + n - 1, m - 1) * c_mn(r, 1, m + n - 1);
    for (unsigned j = 0; j + 2 <= m; ++j)
        for (unsigned k = 1; k + 1 <= n; ++k)
            s += binomial(j + k, j) * c_mn(r, 1, j + k) * c_mn_recursive(r, m - j - 1, n - k);
    return s / Const(static_cast<long>(m));
}

RingElem x_n_from_powers(const Ring& r, unsigned n) {
    if (n == 0) return r.one();
    RingElem x1 = x_n(r, 1);
    RingElem v = factorial(n).inverse() * x1.pow(n);
    for (unsigned i = 2; i <= n; ++i)
        v -= factorial(i).inverse() * r.evaluate_scalar(x1.pow(i)) * x_n_from_powers(r, n - i);
    return v;
}

RotaBaxterReport rota_baxter_check(const Ring& r, const RingElem& f, const RingElem& g) {
    RotaBaxterReport rep;
    RingElem F = r.integrate(f), G = r.integrate(g);
    RingElem lhs = F * G;
    RingElem nested = r.integrate(f * G) + r.integrate(F * g);
    RingElem ev = r.evaluate(lhs);
    rep.e_term = ev;
    rep.with_evaluation = lhs == nested + ev;
    rep.classical = lhs == nested;
    RingElem Fd = r.integrate(r.derive(f)), Gd = r.integrate(r.derive(g));
    rep.differential = Fd * Gd == Fd * g + f * Gd - r.integrate(r.derive(f * g)) - r.evaluate(Fd * Gd);
    return rep;
}

TaylorParts taylor_parts(const Ring& r, const RingElem& f, unsigned n) {
    check_taylor_hypothesis(r, n);
    TaylorParts p{r.zero(), r.zero(), r.zero()};
    std::vector<RingElem> x;
    for (unsigned k = 0; k <= n; ++k) x.push_back(x_n(r, k));
    RingElem top = derivs(r, f, n + 1);
    for (unsigned k = 0; k <= n; ++k) {
        p.poly += x[k] * r.evaluate(derivs(r, f, k));
        p.remainder += sign(n - k) * (x[k] * r.integrate(x[n - k] * top));
    }
    for (unsigned k = 0; k < n; ++k)
        for (unsigned j = 1; j <= n - k; ++j)
            p.correction -= sign(n - k - j) * (x[k] * r.evaluate(x[j] * r.integrate(x[n - k - j] * top)));
    return p;
}

std::pair<OperatorExpr, OperatorExpr> taylor_first_identity(const OpContext& ctx, unsigned n) {
    std::vector<OperatorExpr> terms;
    for (unsigned i = 0; i <= n; ++i)
        terms.push_back(OperatorExpr::prod({power(OperatorExpr::i(), i), OperatorExpr::e(), power(OperatorExpr::d(), i)}));
    terms.push_back(power(OperatorExpr::i(), n + 1) * power(OperatorExpr::d(), n + 1));
    (void)ctx;
    return {OperatorExpr::constant(Const(1)), OperatorExpr::sum(std::move(terms))};
}

namespace {

// Right-hand side of the repeated-integral identity, each term multiplied by `tail` on the right.
std::vector<OperatorExpr> repeated_integral_terms(const OpContext& ctx, unsigned n, const OperatorExpr& tail) {
    const Ring& r = *ctx.ring();
    auto X = [&](unsigned k) { return OperatorExpr::of(x_n(r, k)); };
    std::vector<OperatorExpr> terms;
    for (unsigned k = 0; k <= n; ++k)
        terms.push_back(OperatorExpr::prod({OperatorExpr::constant(sign(n - k)), X(k), OperatorExpr::i(), X(n - k), tail}));
    for (unsigned k = 0; k < n; ++k)
        for (unsigned j = 1; j <= n - k; ++j)
            terms.push_back(OperatorExpr::prod({OperatorExpr::constant(-sign(n - k - j)), X(k), OperatorExpr::e(), X(j),
                                                OperatorExpr::i(), X(n - k - j), tail}));
    return terms;
}

}  // namespace

std::pair<OperatorExpr, OperatorExpr> repeated_integral_identity(const OpContext& ctx, unsigned n) {
    return {power(OperatorExpr::i(), n + 1),
            OperatorExpr::sum(repeated_integral_terms(ctx, n, OperatorExpr::constant(Const(1))))};
}

std::pair<OperatorExpr, OperatorExpr> taylor_operator_identity(const OpContext& ctx, unsigned n) {
    const Ring& r = *ctx.ring();
    std::vector<OperatorExpr> terms;
    for (unsigned k = 0; k <= n; ++k)
        terms.push_back(OperatorExpr::prod({OperatorExpr::of(x_n(r, k)), OperatorExpr::e(), power(OperatorExpr::d(), k)}));
    for (auto& t : repeated_integral_terms(ctx, n, power(OperatorExpr::d(), n + 1))) terms.push_back(std::move(t));
    return {OperatorExpr::constant(Const(1)), OperatorExpr::sum(std::move(terms))};
}

}  // namespace idr
