#include "idring/elimination.hpp"

#include "idring/wronskian.hpp"

namespace idr {

namespace {

void require_domain(const Ring& r) {
    if (!r.integral_domain() || !r.commutative()) throw OpError("domain-required");
}

void certify_independent(const Ring& r, const std::vector<RingElem>& fs) {
    if (fs.empty()) return;
    if (wronskian(r, fs).is_zero()) throw OpError("independence-not-certified");
}

NormalForm single(const OpContextPtr& ctx, const TermKey& k, const Const& c) {
    return NormalForm(ctx, {{k, c}});
}

}  // namespace

NormalForm left_factor(const OpContextPtr& ctx, const RingElem& h) {
    return ctx->coeff(h) * ctx->d() - ctx->coeff(ctx->ring()->derive(h));
}

NormalForm right_factor(const OpContextPtr& ctx, const RingElem& h) {
    return ctx->coeff(h) * ctx->d() + ctx->coeff(Const(2) * ctx->ring()->derive(h));
}

LeftElimination eliminate_integrals_left(const NormalForm& L) {
    const OpContextPtr& ctx = L.ctx();
    const Ring& r = *ctx->ring();
    require_domain(r);
    auto dec = ctx->decompose(L);
    if (dec.differential.is_zero() && dec.integral.is_zero()) throw OpError("is-initial-operator");

    // L = L0 + sum_i f_i * T_i with f_i distinct basis elements and T_i = i*g_i + (initial part).
    std::map<Key, NormalForm> tails;
    std::map<Key, RingElem> gs;
    for (const auto& [k, c] : L.terms()) {
        if (k.kind == TermKey::Diff) continue;
        TermKey t = k;
        t.f = *r.one_key();
        auto [it, _] = tails.try_emplace(k.f, ctx->zero());
        it->second += single(ctx, t, c);
        auto [gi, __] = gs.try_emplace(k.f, r.zero());
        if (k.kind == TermKey::Int) gi->second += c * r.basis(k.g);
    }
    NormalForm L0 = dec.differential;
    std::vector<RingElem> f, g;
    for (const auto& [key, tail] : tails) {
        f.push_back(r.basis(key));
        g.push_back(gs[key]);
    }
    // An entry with a nonzero integral goes first, i.e. is eliminated last, so the result stays nonzero.
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g[i].is_zero()) {
            std::swap(f[0], f[i]);
            std::swap(g[0], g[i]);
            break;
        }
    certify_independent(r, f);

    LeftElimination out;
    NormalForm product = ctx->one();
    while (!f.empty()) {
        RingElem fn = f.back();
        RingElem dfn = r.derive(fn);
        NormalForm factor = left_factor(ctx, fn);
        NormalForm next = factor * L0;
        for (std::size_t i = 0; i < f.size(); ++i) next += ctx->coeff(fn * f[i] * g[i]);
        L0 = next;
        f.pop_back();
        g.pop_back();
        for (auto& fi : f) fi = fn * r.derive(fi) - dfn * fi;
        certify_independent(r, f);
        out.h.insert(out.h.begin(), fn);
        product = factor * product;
    }
    NormalForm check = product * L;
    if (check != L0 || !check.filter({TermKey::Int, TermKey::PhiD, TermKey::PhiI}).is_zero() || check.is_zero())
        throw std::logic_error("left elimination did not produce the expected differential operator");
    out.differential = check;
    return out;
}

RightElimination eliminate_integrals_right(const NormalForm& L) {
    const OpContextPtr& ctx = L.ctx();
    const Ring& r = *ctx->ring();
    require_domain(r);
    if (L.is_zero()) throw OpError("zero-operator");
    Key one = *r.one_key();

    NormalForm L0 = ctx->zero();
    std::map<Key, RingElem> fs;  // g basis key -> f
    for (const auto& [k, c] : L.terms()) {
        if ((k.kind != TermKey::PhiD && k.kind != TermKey::PhiI) || k.phi != 0 || k.f != one)
            throw OpError("not-monic-initial");
        if (k.kind == TermKey::PhiD) {
            TermKey t;
            t.f = k.h;
            t.j = k.j;
            L0 += single(ctx, t, c);
        } else {
            auto [it, _] = fs.try_emplace(k.g, r.zero());
            it->second += c * ctx->slot_h(k);
        }
    }
    std::vector<RingElem> f, g;
    for (const auto& [key, fi] : fs) {
        f.push_back(fi);
        g.push_back(r.basis(key));
    }
    certify_independent(r, g);

    RightElimination out;
    NormalForm product = ctx->one();
    while (!g.empty()) {
        RingElem gn = g.back();
        RingElem dgn = r.derive(gn);
        NormalForm factor = right_factor(ctx, gn);
        NormalForm next = L0 * factor;
        for (std::size_t i = 0; i < g.size(); ++i) next += ctx->coeff(f[i] * g[i] * gn);
        L0 = next;
        f.pop_back();
        g.pop_back();
        for (auto& gi : g) gi = gi * dgn - r.derive(gi) * gn;
        certify_independent(r, g);
        out.h.push_back(gn);
        product = product * factor;
    }
    NormalForm check = L * product;
    NormalForm expected = ctx->e() * L0;
    if (L0.is_zero() || check != expected)
        throw std::logic_error("right elimination did not produce e times a differential operator");
    out.differential = L0;
    return out;
}

FEExtraction extract_fE(const NormalForm& L) {
    const OpContextPtr& ctx = L.ctx();
    if (L.is_zero()) throw OpError("zero-operator");
    const Ring& r = *ctx->ring();
    FEExtraction out;
    out.k = -1;
    for (const auto& [k, c] : L.terms()) {
        if (k.kind != TermKey::Diff) throw OpError("not-differential");
        if (out.k < 0 || k.j < out.k) out.k = k.j;
    }
    out.f = r.zero();
    for (const auto& [k, c] : L.terms())
        if (k.j == out.k) out.f += c * r.basis(k.f);
    NormalForm check = L * ctx->i().pow(static_cast<unsigned>(out.k)) * ctx->e();
    if (check != ctx->coeff(out.f) * ctx->e()) throw std::logic_error("f*e extraction failed");
    return out;
}

}  // namespace idr
