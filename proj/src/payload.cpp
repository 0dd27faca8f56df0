#include "idring/tenred.hpp"

#include <algorithm>

namespace idr::tenred {

Poly poly_const(const Const& c) {
    Poly p;
    if (!c.is_zero()) p[{}] = c;
    return p;
}

void poly_add(Poly& a, const Poly& b, const Const& scale) {
    for (const auto& [k, c] : b) {
        Const v = c * scale;
        if (v.is_zero()) continue;
        auto it = a.find(k);
        if (it == a.end()) {
            a.emplace(k, v);
            continue;
        }
        it->second += v;
        if (it->second.is_zero()) a.erase(it);
    }
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            std::vector<int> k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            std::sort(k.begin(), k.end());
            poly_add(out, Poly{{k, ca * cb}});
        }
    return out;
}

std::string PayloadAlgebra::poly_str(const Poly& p) const {
    if (p.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : p) {
        std::string mono;
        for (int s : k) mono += (mono.empty() ? "" : "*") + symbol_str(s);
        std::string term;
        if (mono.empty()) term = c.str();
        else if (c.is_one()) term = mono;
        else if (c == Const(-1)) term = "-" + mono;
        else term = c.str() + "*" + mono;
        if (out.empty()) out = term;
        else if (term[0] == '-') out += " - " + term.substr(1);
        else out += " + " + term;
    }
    return out;
}

// ---------------------------------------------------------------------------

SymbolicAlgebra::SymbolicAlgebra(bool e_multiplicative) {
    monos_.push_back({});
    mono_ids_[{}] = 0;
    fns_["E"] = {e_multiplicative, true};
    one_expr_ = intern(Expr{{0, poly_const(Const(1))}});
}

void SymbolicAlgebra::declare_functional(const std::string& name, bool multiplicative) {
    fns_[name] = {multiplicative, false};
}

int SymbolicAlgebra::intern(const Expr& e) {
    auto it = expr_ids_.find(e);
    if (it != expr_ids_.end()) return it->second;
    exprs_.push_back(e);
    return expr_ids_[e] = static_cast<int>(exprs_.size() - 1);
}

int SymbolicAlgebra::intern_mono(const std::vector<int>& f) {
    auto it = mono_ids_.find(f);
    if (it != mono_ids_.end()) return it->second;
    monos_.push_back(f);
    return mono_ids_[f] = static_cast<int>(monos_.size() - 1);
}

int SymbolicAlgebra::intern_factor(const Factor& f) {
    auto it = factor_ids_.find(f);
    if (it != factor_ids_.end()) return it->second;
    factors_.push_back(f);
    return factor_ids_[f] = static_cast<int>(factors_.size() - 1);
}

int SymbolicAlgebra::intern_symbol(const Symbol& s) {
    auto it = symbol_ids_.find(s);
    if (it != symbol_ids_.end()) return it->second;
    symbols_.push_back(s);
    return symbol_ids_[s] = static_cast<int>(symbols_.size() - 1);
}

SymbolicAlgebra::Expr SymbolicAlgebra::mono_expr(int m, const Poly& c) const {
    Expr e;
    if (!c.empty()) e[m] = c;
    return e;
}

namespace {

void expr_add(std::map<int, Poly>& a, const std::map<int, Poly>& b, const Poly& scale) {
    for (const auto& [m, c] : b) {
        Poly v = poly_mul(c, scale);
        if (v.empty()) continue;
        Poly& slot = a[m];
        poly_add(slot, v);
        if (slot.empty()) a.erase(m);
    }
}

}  // namespace

int SymbolicAlgebra::generic_slot(const std::string& name) {
    int atom = intern_factor({false, name, 0, -1});
    int inner = intern(Expr{{intern_mono({atom}), poly_const(Const(1))}});
    return intern_mono({intern_factor({true, "", 0, inner})});
}

int SymbolicAlgebra::x_slot() { return intern_mono({intern_factor({true, "", 0, one_expr_})}); }

int SymbolicAlgebra::slot_expr(int slot) {
    Expr e = mono_expr(slot, poly_const(Const(1)));
    expr_add(e, mono_expr(0, fn_mono("E", slot)), poly_const(Const(-1)));
    return intern(e);
}

SymbolicAlgebra::Expr SymbolicAlgebra::mul_expr(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::vector<int> f = monos_[ma];
            const auto& g = monos_[mb];
            f.insert(f.end(), g.begin(), g.end());
            expr_add(out, mono_expr(intern_mono(f), poly_mul(ca, cb)), poly_const(Const(1)));
        }
    return out;
}

int SymbolicAlgebra::mul(int a, int b) {
    const Expr x = exprs_[a], y = exprs_[b];
    return intern(mul_expr(x, y));
}

SymbolicAlgebra::Expr SymbolicAlgebra::der_expr(const Expr& a) {
    Expr out;
    for (const auto& [m, c] : a) {
        std::vector<int> f = monos_[m];
        for (std::size_t i = 0; i < f.size(); ++i) {
            Expr left = mono_expr(intern_mono({f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i)}), poly_const(Const(1)));
            Expr right = mono_expr(intern_mono({f.begin() + static_cast<std::ptrdiff_t>(i) + 1, f.end()}), poly_const(Const(1)));
            const Factor fac = factors_[f[i]];
            Expr mid;
            if (fac.integral) mid = exprs_[fac.expr];
            else mid = mono_expr(intern_mono({intern_factor({false, fac.name, fac.order + 1, -1})}), poly_const(Const(1)));
            expr_add(out, mul_expr(mul_expr(left, mid), right), c);
        }
    }
    return out;
}

int SymbolicAlgebra::der(int a) {
    const Expr x = exprs_[a];
    return intern(der_expr(x));
}

// Integrals of monomials, by the leading factor of the integrand:
//   i 1 = x and i(x^k) = (x^(k+1) - E(x^(k+1)))/(k+1);
//   atom f^(k+1): i(f^(k+1)*r) = f^(k)*r - E(f^(k)*r) - i(f^(k)*d r);
//   x: i(x*b) = i(b*x) + x*B - B*x - E(x*B) + E(B*x) with B = i b;
//   other integral: i(i(a)*b) = i(a)*B - E(i(a)*B) - i(a*B).
// Products stay plain concatenations. Anything else stays a formal integral.
SymbolicAlgebra::Expr SymbolicAlgebra::integ_mono(int m) {
    struct Depth {
        int& d;
        explicit Depth(int& v) : d(v) {
            if (++d > 400) throw std::logic_error("symbolic integration does not terminate");
        }
        ~Depth() { --d; }
    } guard(depth_);
    const std::vector<int> f = monos_[m];
    const int x = intern_factor({true, "", 0, one_expr_});
    auto mono = [&](const std::vector<int>& g) { return mono_expr(intern_mono(g), poly_const(Const(1))); };
    auto minus_e = [&](Expr& e, const Expr& p, const Const& sign) { expr_add(e, mono_expr(0, fn_expr("E", p)), poly_const(sign)); };

    if (std::all_of(f.begin(), f.end(), [&](int g) { return g == x; })) {
        std::vector<int> up = f;
        up.push_back(x);
        const long k1 = static_cast<long>(up.size());
        Expr e = mono(up);
        minus_e(e, mono(up), Const(-1));
        Expr out;
        expr_add(out, e, poly_const(Const(mpz_class(1), mpz_class(k1))));
        return out;
    }
    const Factor lead = factors_[f[0]];
    const std::vector<int> rest(f.begin() + 1, f.end());
    if (!lead.integral) {
        if (lead.order == 0) return mono({intern_factor({true, "", 0, intern(mono(f))})});
        const Expr low = mono({intern_factor({false, lead.name, lead.order - 1, -1})});
        Expr r = mono(rest);
        Expr e = mul_expr(low, r);
        minus_e(e, e, Const(-1));
        expr_add(e, integ_expr(mul_expr(low, der_expr(r))), poly_const(Const(-1)));
        return e;
    }
    if (f[0] == x) {
        const Expr xe = mono({x});
        const Expr B = integ_mono(intern_mono(rest));
        Expr e = integ_expr(mul_expr(mono(rest), xe));
        Expr xb = mul_expr(xe, B), bx = mul_expr(B, xe);
        expr_add(e, xb, poly_const(Const(1)));
        expr_add(e, bx, poly_const(Const(-1)));
        minus_e(e, xb, Const(-1));
        minus_e(e, bx, Const(1));
        return e;
    }
    const Expr a = exprs_[lead.expr];
    const Expr B = rest.empty() ? mono({x}) : integ_mono(intern_mono(rest));
    Expr prod = mul_expr(mono({f[0]}), B);
    Expr e = prod;
    minus_e(e, prod, Const(-1));
    expr_add(e, integ_expr(mul_expr(a, B)), poly_const(Const(-1)));
    return e;
}

SymbolicAlgebra::Expr SymbolicAlgebra::integ_expr(const Expr& a) {
    Expr out;
    for (const auto& [m, c] : a) expr_add(out, integ_mono(m), c);
    return out;
}

int SymbolicAlgebra::integ(int a) {
    const Expr x = exprs_[a];
    return intern(integ_expr(x));
}

Poly SymbolicAlgebra::fn_mono(const std::string& fn, int m) {
    auto it = fns_.find(fn);
    if (it == fns_.end()) throw OpError("unknown functional: " + fn);
    const FnInfo info = it->second;
    const auto f = monos_[m];
    if (f.empty()) return info.multiplicative || info.evaluation ? poly_const(Const(1)) : Poly{{{intern_symbol({fn, 0})}, Const(1)}};
    if (info.evaluation && f.size() == 1 && factors_[f[0]].integral) return {};
    if (info.multiplicative && f.size() > 1) {
        Poly p = poly_const(Const(1));
        for (int x : f) p = poly_mul(p, fn_mono(fn, intern_mono({x})));
        return p;
    }
    return Poly{{{intern_symbol({fn, m})}, Const(1)}};
}

Poly SymbolicAlgebra::fn_expr(const std::string& fn, const Expr& a) {
    Poly out;
    for (const auto& [m, c] : a) poly_add(out, poly_mul(c, fn_mono(fn, m)));
    return out;
}

Poly SymbolicAlgebra::functional(const std::string& fn, int a) {
    const Expr x = exprs_[a];
    return fn_expr(fn, x);
}

PayloadAlgebra::Split SymbolicAlgebra::split(int a) {
    Split s;
    s.constant = fn_expr("E", exprs_[a]);
    for (const auto& [m, c] : exprs_[a])
        if (m != 0) s.slots.emplace_back(m, c);
    return s;
}

std::string SymbolicAlgebra::mono_str(int m) const {
    const auto& f = monos_[m];
    if (f.empty()) return "1";
    std::string out;
    for (int x : f) {
        const Factor& fac = factors_[x];
        std::string s;
        if (fac.integral) {
            s = fac.expr == one_expr_ ? "x" : "i(" + expr_str(fac.expr) + ")";
        } else {
            s = fac.name;
            if (fac.order <= 3) s += std::string(static_cast<std::size_t>(fac.order), '\'');
            else s = "d^" + std::to_string(fac.order) + "(" + s + ")";
        }
        out += (out.empty() ? "" : "*") + s;
    }
    return out;
}

std::string SymbolicAlgebra::str(const Expr& e) const {
    if (e.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : e) {
        std::string cs = poly_str(c);
        std::string term;
        if (m == 0) term = cs;
        else if (cs == "1") term = mono_str(m);
        else if (cs == "-1") term = "-" + mono_str(m);
        else if (c.size() == 1) term = cs + "*" + mono_str(m);
        else term = "(" + cs + ")*" + mono_str(m);
        if (out.empty()) out = term;
        else if (term[0] == '-') out += " - " + term.substr(1);
        else out += " + " + term;
    }
    return out;
}

std::string SymbolicAlgebra::expr_str(int a) const { return str(exprs_[a]); }

std::string SymbolicAlgebra::symbol_str(int sym) const {
    const Symbol& s = symbols_[sym];
    return s.fn + "(" + mono_str(s.mono) + ")";
}

// ---------------------------------------------------------------------------

ConcreteAlgebra::ConcreteAlgebra(OpContextPtr ctx) : ctx_(std::move(ctx)) { one_ = add(ctx_->ring()->one()); }

int ConcreteAlgebra::add(const RingElem& f) {
    exprs_.push_back(f);
    return static_cast<int>(exprs_.size() - 1);
}

int ConcreteAlgebra::slot(const Key& k) {
    auto it = slot_ids_.find(k);
    if (it != slot_ids_.end()) return it->second;
    slot_keys_.push_back(k);
    return slot_ids_[k] = static_cast<int>(slot_keys_.size() - 1);
}

RingElem ConcreteAlgebra::slot_value(int s) const {
    const Ring& r = *ctx_->ring();
    RingElem b = r.basis(slot_keys_[s]);
    return b - r.evaluate(b);
}

int ConcreteAlgebra::der(int a) { return add(ctx_->ring()->derive(exprs_[a])); }
int ConcreteAlgebra::integ(int a) { return add(ctx_->ring()->integrate(exprs_[a])); }

Poly ConcreteAlgebra::functional(const std::string& fn, int a) {
    if (fn == "E") return poly_const(ctx_->ring()->evaluate_scalar(exprs_[a]));
    return poly_const(ctx_->phi_value(ctx_->phi_index(fn), exprs_[a]));
}

PayloadAlgebra::Split ConcreteAlgebra::split(int a) {
    const Ring& r = *ctx_->ring();
    Split s;
    s.constant = poly_const(r.evaluate_scalar(exprs_[a]));
    auto one = r.one_key();
    for (const auto& [k, c] : exprs_[a].terms())
        if (k != *one) s.slots.emplace_back(slot(k), poly_const(c));
    return s;
}

std::string ConcreteAlgebra::slot_str(int s) const {
    const Ring& r = *ctx_->ring();
    RingElem b = r.basis(slot_keys_[s]);
    Const e = r.evaluate_scalar(b);
    return e.is_zero() ? b.str() : "(" + (b - r.evaluate(b)).str() + ")";
}

}  // namespace idr::tenred
