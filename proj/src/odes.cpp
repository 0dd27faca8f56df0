#include "idring/odes.hpp"

#include "idring/rings.hpp"

namespace idr {

namespace {

bool is_matrix(const RingElem& m) { return m.ring()->entry_ring() != nullptr; }

RingElem derivs(const Ring& r, RingElem f, unsigned k) {
    for (unsigned t = 0; t < k; ++t) f = r.derive(f);
    return f;
}

std::optional<RingElem> try_invert(const RingElem& f) {
    if (f.is_zero()) return std::nullopt;
    try {
        return f.ring()->invert(f);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Inverse of a square matrix over the constants, or nullopt when singular.
std::optional<std::vector<std::vector<Const>>> invert_constants(std::vector<std::vector<Const>> m) {
    std::size_t n = m.size();
    std::vector<std::vector<Const>> inv(n, std::vector<Const>(n, Const(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Const(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Const s = m[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] *= s;
            inv[col][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Const f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

RingElem wronskian_or_one(const Ring& r, const std::vector<RingElem>& z) {
    return z.empty() ? r.one() : wronskian(r, z);
}

std::vector<RingElem> without(const std::vector<RingElem>& z, std::size_t k) {
    std::vector<RingElem> out;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (i != k) out.push_back(z[i]);
    return out;
}

Const sign(std::size_t k) { return Const(k % 2 == 0 ? 1 : -1); }

void check_solutions(const OpContext& ctx, const ScalarProblem& p) {
    if (p.z.size() != p.a.size() || p.z.empty()) throw OpError("size-mismatch");
    NormalForm L = scalar_operator(ctx, p.a);
    for (const auto& z : p.z)
        if (!ctx.apply(L, z).is_zero()) throw OpError("not-a-solution");
}

RingElem inverse_wronskian(const Ring& r, const ScalarProblem& p) {
    RingElem w = wronskian(r, p.z);
    std::optional<RingElem> inv = p.w_inv ? p.w_inv : try_invert(w);
    if (!inv || w * *inv != r.one()) throw OpError("wronskian-not-invertible");
    return *inv;
}

// c with sum_i E(d^k z_i) c_ij = delta_kj, checked or computed.
std::vector<std::vector<Const>> initial_matrix(const Ring& r, const ScalarProblem& p) {
    std::size_t n = p.z.size();
    std::vector<std::vector<Const>> ez(n, std::vector<Const>(n));
    try {
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) ez[k][i] = r.evaluate_scalar(derivs(r, p.z[i], static_cast<unsigned>(k)));
    } catch (const RingError&) {
        throw OpError("initial-matrix-invalid");
    }
    if (!p.c) {
        auto inv = invert_constants(ez);
        if (!inv) throw OpError("initial-matrix-invalid");
        return *inv;
    }
    const auto& c = *p.c;
    if (c.size() != n) throw OpError("initial-matrix-invalid");
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            if (c[k].size() != n) throw OpError("initial-matrix-invalid");
            Const s(0);
            for (std::size_t i = 0; i < n; ++i) s += c[i][j] * ez[k][i];
            if (s != Const(j == k ? 1 : 0)) throw OpError("initial-matrix-invalid");
        }
    return c;
}

RingElem unit_entry(const RingPtr& mring, unsigned i, unsigned j, const RingElem& f) {
    unsigned n = matrix_size(*mring);
    RingPtr base = mring->entry_ring();
    std::vector<std::vector<RingElem>> rows(n, std::vector<RingElem>(n, base->zero()));
    rows[i][j] = f;
    return matrix_from_entries(mring, rows);
}

OperatorExpr d_power(std::int64_t j) {
    if (j == 0) return OperatorExpr::constant(Const(1));
    return OperatorExpr::prod(std::vector<OperatorExpr>(static_cast<std::size_t>(j), OperatorExpr::d()));
}

}  // namespace

OpMatrix::OpMatrix(OpContextPtr ctx, unsigned n) : ctx_(std::move(ctx)) {
    e_.assign(n, std::vector<NormalForm>(n, ctx_->zero()));
}

OpMatrix OpMatrix::identity(OpContextPtr ctx, unsigned n) { return diag(n, ctx->one()); }

OpMatrix OpMatrix::diag(unsigned n, const NormalForm& op) {
    OpMatrix m(op.ctx(), n);
    for (unsigned i = 0; i < n; ++i) m.e_[i][i] = op;
    return m;
}

OpMatrix OpMatrix::of(OpContextPtr ctx, const RingElem& m) {
    if (!is_matrix(m)) {
        OpMatrix out(ctx, 1);
        out.e_[0][0] = ctx->coeff(m);
        return out;
    }
    if (m.ring()->entry_ring()->tag() != ctx->ring()->tag()) throw OpError("size-mismatch");
    unsigned n = matrix_size(*m.ring());
    OpMatrix out(ctx, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) out.e_[i][j] = ctx->coeff(matrix_entry(m, i, j));
    return out;
}

void OpMatrix::check(const OpMatrix& o) const {
    if (size() != o.size()) throw OpError("size-mismatch");
}

OpMatrix& OpMatrix::operator+=(const OpMatrix& o) {
    check(o);
    for (unsigned i = 0; i < size(); ++i)
        for (unsigned j = 0; j < size(); ++j) e_[i][j] += o.e_[i][j];
    return *this;
}

OpMatrix& OpMatrix::operator-=(const OpMatrix& o) {
    check(o);
    for (unsigned i = 0; i < size(); ++i)
        for (unsigned j = 0; j < size(); ++j) e_[i][j] -= o.e_[i][j];
    return *this;
}

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) {
    a.check(b);
    unsigned n = a.size();
    OpMatrix out(a.ctx_, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned k = 0; k < n; ++k) {
            if (a.e_[i][k].is_zero()) continue;
            for (unsigned j = 0; j < n; ++j)
                if (!b.e_[k][j].is_zero()) out.e_[i][j] += a.e_[i][k] * b.e_[k][j];
        }
    return out;
}

ElemMatrix OpMatrix::apply(const ElemMatrix& f) const {
    unsigned n = size();
    if (f.size() != n) throw OpError("size-mismatch");
    std::size_t cols = f.empty() ? 0 : f[0].size();
    ElemMatrix out(n, std::vector<RingElem>(cols, ctx_->ring()->zero()));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
            for (std::size_t k = 0; k < cols; ++k) out[i][k] += ctx_->apply(e_[i][j], f[j][k]);
    return out;
}

std::string OpMatrix::str() const {
    std::string out = "[";
    for (unsigned i = 0; i < size(); ++i) {
        out += i ? ", [" : "[";
        for (unsigned j = 0; j < size(); ++j) out += (j ? ", " : "") + e_[i][j].str();
        out += "]";
    }
    return out + "]";
}

OpMatrix first_order_operator(OpContextPtr ctx, const FirstOrderProblem& p) {
    OpMatrix A = OpMatrix::of(ctx, p.a);
    return OpMatrix::diag(A.size(), ctx->d()) + A;
}

OpMatrix right_inverse_first_order(OpContextPtr ctx, const FirstOrderProblem& p) {
    const Ring& r = *p.z.ring();
    std::optional<RingElem> zi = p.z_inv ? p.z_inv : try_invert(p.z);
    if (!zi || p.z * *zi != r.one()) throw OpError("no-inverse");
    if (!(r.derive(p.z) + p.a * p.z).is_zero()) throw OpError("not-a-solution");
    OpMatrix Z = OpMatrix::of(ctx, p.z);
    return Z * OpMatrix::diag(Z.size(), ctx->i()) * OpMatrix::of(ctx, *zi);
}

OpMatrix green_first_order(OpContextPtr ctx, const FirstOrderProblem& p) {
    const Ring& r = *p.z.ring();
    RingElem ez = r.evaluate(p.z);
    std::optional<RingElem> inv = p.ez_inv ? p.ez_inv : try_invert(ez);
    if (!inv || !r.is_constant(*inv) || ez * *inv != r.one()) throw OpError("Ez-not-invertible");
    OpMatrix H = right_inverse_first_order(ctx, p);
    unsigned n = H.size();
    OpMatrix P = OpMatrix::of(ctx, p.z * *inv) * OpMatrix::diag(n, ctx->e());
    return (OpMatrix::identity(ctx, n) - P) * H;
}

NormalForm scalar_operator(const OpContext& ctx, const std::vector<RingElem>& a) {
    NormalForm L = ctx.d().pow(static_cast<unsigned>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) L += ctx.coeff(a[i]) * ctx.d().pow(static_cast<unsigned>(i));
    return L;
}

NormalForm variation_of_constants(OpContextPtr ctx, const ScalarProblem& p) {
    const Ring& r = *ctx->ring();
    check_solutions(*ctx, p);
    RingElem winv = inverse_wronskian(r, p);
    std::size_t n = p.z.size();
    NormalForm H = ctx->zero();
    for (std::size_t k = 0; k < n; ++k)
        H += sign(n - 1 - k) * (ctx->coeff(p.z[k]) * ctx->i() * ctx->coeff(wronskian_or_one(r, without(p.z, k)) * winv));
    return H;
}

NormalForm green_scalar(OpContextPtr ctx, const ScalarProblem& p) {
    const Ring& r = *ctx->ring();
    check_solutions(*ctx, p);
    RingElem winv = inverse_wronskian(r, p);
    auto c = initial_matrix(r, p);
    std::size_t n = p.z.size();
    NormalForm G = ctx->zero();
    for (std::size_t k = 0; k < n; ++k) {
        NormalForm left = ctx->coeff(p.z[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (c[i][j].is_zero()) continue;
                left -= c[i][j] * (ctx->coeff(p.z[i]) * ctx->e() * ctx->coeff(derivs(r, p.z[k], static_cast<unsigned>(j))));
            }
        G += sign(n - 1 - k) * (left * ctx->i() * ctx->coeff(wronskian_or_one(r, without(p.z, k)) * winv));
    }
    return G;
}

RingElem companion_matrix(const RingPtr& base, const std::vector<RingElem>& a) {
    unsigned n = static_cast<unsigned>(a.size());
    if (n == 0) throw OpError("size-mismatch");
    RingPtr mring = make_matrix(n, base);
    std::vector<std::vector<RingElem>> rows(n, std::vector<RingElem>(n, base->zero()));
    for (unsigned i = 0; i + 1 < n; ++i) rows[i][i + 1] = -base->one();
    for (unsigned j = 0; j < n; ++j) rows[n - 1][j] = a[j];
    return matrix_from_entries(mring, rows);
}

RingElem wronski_matrix(const RingPtr& base, const std::vector<RingElem>& z) {
    unsigned n = static_cast<unsigned>(z.size());
    RingPtr mring = make_matrix(n, base);
    std::vector<std::vector<RingElem>> rows(n);
    for (unsigned k = 0; k < n; ++k)
        for (unsigned j = 0; j < n; ++j) rows[k].push_back(derivs(*base, z[j], k));
    return matrix_from_entries(mring, rows);
}

CompanionRoute companion_route(OpContextPtr ctx, const ScalarProblem& p, bool green) {
    const RingPtr& base = ctx->ring();
    check_solutions(*ctx, p);
    unsigned n = static_cast<unsigned>(p.z.size());
    FirstOrderProblem fp;
    fp.a = companion_matrix(base, p.a);
    fp.z = wronski_matrix(base, p.z);
    fp.z_inv = try_invert(fp.z);
    if (!fp.z_inv || fp.z * *fp.z_inv != fp.z.ring()->one()) throw OpError("wronskian-not-invertible");
    CompanionRoute out;
    out.system = first_order_operator(ctx, fp);
    if (green) {
        auto c = initial_matrix(*base, p);
        std::vector<std::vector<RingElem>> rows(n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) rows[i].push_back(base->constant(c[i][j]));
        fp.ez_inv = matrix_from_entries(fp.z.ring(), rows);
        out.solution = green_first_order(ctx, fp);
    } else {
        out.solution = right_inverse_first_order(ctx, fp);
    }
    out.entry = out.solution.at(0, n - 1);
    return out;
}

OpMatrix matrix_to_scalar(OpContextPtr ctx, const OperatorExpr& op, unsigned n) {
    switch (op.kind) {
        case OperatorExpr::Sum: {
            OpMatrix acc(ctx, n);
            for (const auto& k : op.kids) acc += matrix_to_scalar(ctx, k, n);
            return acc;
        }
        case OperatorExpr::Prod: {
            OpMatrix acc = OpMatrix::identity(ctx, n);
            for (const auto& k : op.kids) acc = acc * matrix_to_scalar(ctx, k, n);
            return acc;
        }
        case OperatorExpr::Coeff: {
            OpMatrix m = OpMatrix::of(ctx, op.coeff);
            if (m.size() != n) throw OpError("size-mismatch");
            return m;
        }
        case OperatorExpr::Scalar: return OpMatrix::diag(n, ctx->scalar(op.scalar));
        case OperatorExpr::Gen:
            if (op.gen == OperatorExpr::D) return OpMatrix::diag(n, ctx->d());
            if (op.gen == OperatorExpr::I) return OpMatrix::diag(n, ctx->i());
            return OpMatrix::diag(n, ctx->phi(ctx->phi_index(op.phi)));
    }
    throw OpError("size-mismatch");
}

OperatorExpr scalar_to_matrix(const OpMatrix& m, const RingPtr& mring) {
    if (!mring->entry_ring() || matrix_size(*mring) != m.size()) throw OpError("size-mismatch");
    const OpContext& ctx = *m.ctx();
    const Ring& r = *ctx.ring();
    std::vector<OperatorExpr> terms;
    for (unsigned i = 0; i < m.size(); ++i)
        for (unsigned j = 0; j < m.size(); ++j)
            for (const auto& [k, c] : m.at(i, j).terms()) {
                auto slot = [&](const RingElem& f) { return OperatorExpr::of(unit_entry(mring, j, j, f)); };
                std::vector<OperatorExpr> f{OperatorExpr::of(unit_entry(mring, i, j, c * r.basis(k.f)))};
                OperatorExpr phi = k.phi == 0 ? OperatorExpr::e() : OperatorExpr::functional(ctx.functionals()[k.phi].name);
                switch (k.kind) {
                    case TermKey::Diff: f.push_back(d_power(k.j)); break;
                    case TermKey::Int: f.insert(f.end(), {OperatorExpr::i(), slot(r.basis(k.g))}); break;
                    case TermKey::PhiD: f.insert(f.end(), {phi, slot(r.basis(k.h)), d_power(k.j)}); break;
                    case TermKey::PhiI:
                        f.insert(f.end(), {phi, slot(ctx.slot_h(k)), OperatorExpr::i(), slot(r.basis(k.g))});
                        break;
                }
                terms.push_back(OperatorExpr::prod(std::move(f)));
            }
    return OperatorExpr::sum(std::move(terms));
}

RingElem act_matrix(const Ring& mring, const OperatorExpr& op, const RingElem& f) {
    switch (op.kind) {
        case OperatorExpr::Sum: {
            RingElem s = mring.zero();
            for (const auto& k : op.kids) s += act_matrix(mring, k, f);
            return s;
        }
        case OperatorExpr::Prod: {
            RingElem x = f;
            for (auto it = op.kids.rbegin(); it != op.kids.rend(); ++it) x = act_matrix(mring, *it, x);
            return x;
        }
        case OperatorExpr::Coeff: return op.coeff * f;
        case OperatorExpr::Scalar: return op.scalar * f;
        case OperatorExpr::Gen:
            if (op.gen == OperatorExpr::D) return mring.derive(f);
            if (op.gen == OperatorExpr::I) return mring.integrate(f);
            if (op.phi == "e") return mring.evaluate(f);
            throw OpError("unsupported-functional");
    }
    return mring.zero();
}

}  // namespace idr
