#include "idring/rings.hpp"

#include "idring/lexer.hpp"
#include "idring/syntax.hpp"

#include <algorithm>
#include <numeric>

namespace idr {

namespace {

std::string power_str(const std::string& base, std::int64_t k) {
    if (k == 1) return base;
    return base + "^" + std::to_string(k);
}

std::string join_factors(const std::vector<std::string>& fs) {
    std::string out;
    for (const auto& f : fs) {
        if (f.empty()) continue;
        if (!out.empty()) out += "*";
        out += f;
    }
    return out;
}

// ------------------------------------------------------------------ Q[x]

class PolyRing final : public Ring {
public:
    std::string tag() const override { return "qx"; }
    bool evaluation_multiplicative() const override { return true; }
    std::optional<Key> one_key() const override { return Key{0}; }

    Terms mul_keys(const Key& a, const Key& b) const override { return {{Key{a[0] + b[0]}, Const(1)}}; }
    Terms derive_key(const Key& a) const override {
        if (a[0] == 0) return {};
        return {{Key{a[0] - 1}, Const(a[0])}};
    }
    Terms integrate_key(const Key& a) const override { return {{Key{a[0] + 1}, Const(1, a[0] + 1)}}; }
    Terms evaluate_key(const Key& a) const override {
        if (a[0] != 0) return {};
        return {{Key{0}, Const(1)}};
    }

    std::vector<std::string> functional_names() const override { return {"at0", "at1"}; }
    std::optional<Functional> functional(const std::string& name) const override {
        if (name == "at0") return Functional{name, [](const Key& k) { return Const(k[0] == 0 ? 1 : 0); }, true};
        if (name == "at1") return Functional{name, [](const Key&) { return Const(1); }, true};
        return std::nullopt;
    }

    std::string key_str(const Key& k) const override { return k[0] == 0 ? "" : power_str("x", k[0]); }
    std::optional<Terms> atom(const std::string& id, const std::optional<Const>& arg) const override {
        if (id == "x" && !arg) return Terms{{Key{1}, Const(1)}};
        return std::nullopt;
    }
    Key random_key(std::mt19937_64& rng, int size) const override {
        return Key{std::uniform_int_distribution<std::int64_t>(0, size)(rng)};
    }
};

// ------------------------------------------------- x^k ln(x)^n, k in Z

class LaurentLogRing final : public Ring {
public:
    std::string tag() const override { return "laurentlog"; }
    bool evaluation_multiplicative() const override { return false; }
    std::optional<Key> one_key() const override { return Key{0, 0}; }

    Terms mul_keys(const Key& a, const Key& b) const override {
        return {{Key{a[0] + b[0], a[1] + b[1]}, Const(1)}};
    }
    Terms derive_key(const Key& a) const override {
        auto [k, n] = std::pair{a[0], a[1]};
        Terms t;
        add_term(t, Key{k - 1, n}, Const(k));
        if (n > 0) add_term(t, Key{k - 1, n - 1}, Const(n));
        return t;
    }
    Terms integrate_key(const Key& a) const override {
        auto [k, n] = std::pair{a[0], a[1]};
        if (k == -1) return {{Key{0, n + 1}, Const(1, n + 1)}};
        Terms t{{Key{k + 1, n}, Const(1, k + 1)}};
        if (n > 0) add_terms(t, integrate_key(Key{k, n - 1}), Const(-n, k + 1));
        return t;
    }
    Terms evaluate_key(const Key& a) const override {
        if (a[0] != 0 || a[1] != 0) return {};
        return {{Key{0, 0}, Const(1)}};
    }

    std::optional<RingElem> invert(const RingElem& f) const override {
        if (f.terms().size() != 1) return std::nullopt;
        const auto& [k, c] = *f.terms().begin();
        if (k[1] != 0) return std::nullopt;
        return elem({{Key{-k[0], 0}, c.inverse()}});
    }

    std::vector<std::string> functional_names() const override { return {"res"}; }
    std::optional<Functional> functional(const std::string& name) const override {
        if (name == "res")
            return Functional{name, [](const Key& k) { return Const(k[0] == -1 && k[1] == 0 ? 1 : 0); }, false};
        return std::nullopt;
    }

    std::string key_str(const Key& k) const override {
        return join_factors({k[0] == 0 ? "" : power_str("x", k[0]), k[1] == 0 ? "" : power_str("ln(x)", k[1])});
    }
    std::optional<Terms> atom(const std::string& id, const std::optional<Const>& arg) const override {
        if (arg) return std::nullopt;
        if (id == "x") return Terms{{Key{1, 0}, Const(1)}};
        if (id == "ln") return Terms{{Key{0, 1}, Const(1)}};
        return std::nullopt;
    }
    Key random_key(std::mt19937_64& rng, int size) const override {
        std::int64_t k = std::uniform_int_distribution<std::int64_t>(-size, size)(rng);
        std::int64_t n = std::uniform_int_distribution<std::int64_t>(0, std::max(1, size / 2))(rng);
        return Key{k, n};
    }
};

// ------------------------------------------- x^k exp(q x), q rational

Key exp_key(const Const& q, std::int64_t k) {
    const mpq_class& r = q.rational();
    return Key{r.get_num().get_si(), r.get_den().get_si(), k};
}

Const exp_rate(const Key& a) { return Const(mpz_class(static_cast<long>(a[0])), mpz_class(static_cast<long>(a[1]))); }

// Rising factorial a (a+1) ... (a+m-1).
Const pochhammer(long a, long m) {
    Const r(1);
    for (long t = 0; t < m; ++t) r *= Const(a + t);
    return r;
}

class ExpPolyRing final : public Ring {
public:
    std::string tag() const override { return "exppoly:rec"; }
    bool evaluation_multiplicative() const override { return false; }
    std::optional<Key> one_key() const override { return Key{0, 1, 0}; }

    Terms mul_keys(const Key& a, const Key& b) const override {
        return {{exp_key(exp_rate(a) + exp_rate(b), a[2] + b[2]), Const(1)}};
    }
    Terms derive_key(const Key& a) const override {
        Const q = exp_rate(a);
        std::int64_t k = a[2];
        Terms t;
        if (k > 0) add_term(t, Key{a[0], a[1], k - 1}, Const(k));
        add_term(t, a, q);
        return t;
    }
    Terms integrate_key(const Key& a) const override {
        Const q = exp_rate(a);
        std::int64_t k = a[2];
        if (q.is_zero()) return {{Key{0, 1, k + 1}, Const(1, k + 1)}};
        Terms t;
        Const qinv = q.inverse();
        for (std::int64_t i = 0; i <= k; ++i) {
            Const c = pochhammer(-k, k - i);
            for (std::int64_t e = 0; e < k - i + 1; ++e) c *= qinv;
            add_term(t, Key{a[0], a[1], i}, c);
        }
        return t;
    }
    Terms evaluate_key(const Key& a) const override {
        if (a != Key{0, 1, 0}) return {};
        return {{a, Const(1)}};
    }

    std::optional<RingElem> invert(const RingElem& f) const override {
        if (f.terms().size() != 1) return std::nullopt;
        const auto& [k, c] = *f.terms().begin();
        if (k[2] != 0) return std::nullopt;
        return elem({{exp_key(-exp_rate(k), 0), c.inverse()}});
    }

    std::vector<std::string> functional_names() const override { return {"at0"}; }
    std::optional<Functional> functional(const std::string& name) const override {
        if (name == "at0") return Functional{name, [](const Key& k) { return Const(k[2] == 0 ? 1 : 0); }, true};
        return std::nullopt;
    }

    bool key_less(const Key& a, const Key& b) const override {
        Const qa = exp_rate(a), qb = exp_rate(b);
        if (qa != qb) return qa < qb;
        return a[2] < b[2];
    }
    std::string key_str(const Key& k) const override {
        Const q = exp_rate(k);
        std::string e;
        if (q.is_one()) e = "exp(x)";
        else if (q == Const(-1)) e = "exp(-x)";
        else if (!q.is_zero()) e = "exp(" + q.str() + "*x)";
        return join_factors({k[2] == 0 ? "" : power_str("x", k[2]), e});
    }
    std::optional<Terms> atom(const std::string& id, const std::optional<Const>& arg) const override {
        if (id == "x" && !arg) return Terms{{Key{0, 1, 1}, Const(1)}};
        if (id == "exp" && arg) return Terms{{exp_key(*arg, 0), Const(1)}};
        return std::nullopt;
    }
    Key random_key(std::mt19937_64& rng, int size) const override {
        static const Const rates[] = {Const(-2), Const(-1), Const(-1, 2), Const(0), Const(0), Const(1), Const(3, 2), Const(2)};
        Const q = rates[std::uniform_int_distribution<int>(0, 7)(rng)];
        return exp_key(q, std::uniform_int_distribution<std::int64_t>(0, std::max(1, size - 1))(rng));
    }
};

// ------------------------------------------------ divided powers x_n

class HurwitzRing final : public Ring {
public:
    HurwitzRing(std::uint32_t p, unsigned length) : p_(p), length_(length) {}

    std::string tag() const override { return "hurwitz:" + std::to_string(p_) + "," + std::to_string(length_); }
    std::uint32_t modulus() const override { return p_; }
    bool integral_domain() const override { return p_ == 0; }
    bool evaluation_multiplicative() const override { return true; }
    std::optional<Key> one_key() const override { return Key{0}; }

    Terms mul_keys(const Key& a, const Key& b) const override {
        return {{Key{a[0] + b[0]}, lift(binomial(a[0] + b[0], a[0]))}};
    }
    Terms derive_key(const Key& a) const override {
        if (a[0] == 0) return {};
        return {{Key{a[0] - 1}, lift(Const(1))}};
    }
    Terms integrate_key(const Key& a) const override { return {{Key{a[0] + 1}, lift(Const(1))}}; }
    Terms evaluate_key(const Key& a) const override {
        if (a[0] != 0) return {};
        return {{Key{0}, lift(Const(1))}};
    }

    std::vector<std::string> functional_names() const override { return {"c1"}; }
    std::optional<Functional> functional(const std::string& name) const override {
        if (name == "c1") {
            std::uint32_t p = p_;
            return Functional{name, [p](const Key& k) { return Const::mod(k[0] == 1 ? 1 : 0, p); }, false};
        }
        return std::nullopt;
    }

    std::string key_str(const Key& k) const override { return k[0] == 0 ? "" : "x_" + std::to_string(k[0]); }
    std::optional<Terms> atom(const std::string& id, const std::optional<Const>& arg) const override {
        if (arg) return std::nullopt;
        if (id == "x") return Terms{{Key{1}, lift(Const(1))}};
        if (id.size() > 2 && id.rfind("x_", 0) == 0 &&
            std::all_of(id.begin() + 2, id.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return Terms{{Key{std::stoll(id.substr(2))}, lift(Const(1))}};
        return std::nullopt;
    }
    Key random_key(std::mt19937_64& rng, int size) const override {
        int hi = std::min<int>(size, static_cast<int>(length_));
        return Key{std::uniform_int_distribution<std::int64_t>(0, std::max(hi, 0))(rng)};
    }

private:
    std::uint32_t p_;
    unsigned length_;
};

// ----------------------------------------------------- n x n matrices

class MatrixRing final : public Ring {
public:
    MatrixRing(unsigned n, RingPtr base) : n_(n), base_(std::move(base)) {
        if (n_ == 0) throw RingError("matrix size must be positive");
        if (!base_->one_key()) throw RingError("matrix entries need a ring with a scalar unit");
    }

    unsigned size() const { return n_; }
    const RingPtr& base() const { return base_; }

    std::string tag() const override { return "matrix:" + std::to_string(n_) + "," + base_->tag(); }
    std::uint32_t modulus() const override { return base_->modulus(); }
    bool commutative() const override { return n_ == 1 && base_->commutative(); }
    bool integral_domain() const override { return false; }
    bool evaluation_multiplicative() const override { return base_->evaluation_multiplicative(); }
    std::optional<Key> one_key() const override { return std::nullopt; }
    Terms one_terms() const override { return scalar_terms(base_->one_terms()); }

    Terms mul_keys(const Key& a, const Key& b) const override {
        if (a[1] != b[0]) return {};
        return wrap(a[0], b[1], base_->mul_keys(tail(a), tail(b)));
    }
    Terms derive_key(const Key& a) const override { return wrap(a[0], a[1], base_->derive_key(tail(a))); }
    Terms integrate_key(const Key& a) const override { return wrap(a[0], a[1], base_->integrate_key(tail(a))); }
    Terms evaluate_key(const Key& a) const override { return wrap(a[0], a[1], base_->evaluate_key(tail(a))); }

    std::optional<RingElem> invert(const RingElem& f) const override {
        if (!base_->commutative()) return std::nullopt;
        std::vector<std::vector<RingElem>> m(n_, std::vector<RingElem>(n_));
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) m[i][j] = matrix_entry(f, i, j);
        auto dinv = base_->invert(det(m));
        if (!dinv) return std::nullopt;
        std::vector<std::vector<RingElem>> inv(n_, std::vector<RingElem>(n_));
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) {
                RingElem cof = det(minor(m, j, i));
                if ((i + j) % 2) cof = -cof;
                inv[i][j] = cof * *dinv;
            }
        return elem(literal(inv));
    }

    std::string format(const RingElem& f) const override {
        std::string out = "[";
        for (unsigned i = 0; i < n_; ++i) {
            out += i ? ", [" : "[";
            for (unsigned j = 0; j < n_; ++j) {
                if (j) out += ", ";
                out += matrix_entry(f, i, j).str();
            }
            out += "]";
        }
        return out + "]";
    }
    std::string key_str(const Key& k) const override {
        std::string e = base_->key_str(tail(k));
        return "E" + std::to_string(k[0] + 1) + std::to_string(k[1] + 1) + (e.empty() ? "" : "*" + e);
    }
    std::optional<Terms> atom(const std::string& id, const std::optional<Const>& arg) const override {
        auto t = base_->atom(id, arg);
        if (!t) return std::nullopt;
        return scalar_terms(*t);
    }
    RingPtr entry_ring() const override { return base_; }
    Terms matrix_literal(const std::vector<std::vector<RingElem>>& rows) const override {
        if (rows.size() != n_) throw RingError("expected " + std::to_string(n_) + " rows");
        for (const auto& r : rows)
            if (r.size() != n_) throw RingError("expected " + std::to_string(n_) + " columns");
        return literal(rows);
    }
    Key random_key(std::mt19937_64& rng, int size) const override {
        std::uniform_int_distribution<std::int64_t> idx(0, n_ - 1);
        Key k{idx(rng), idx(rng)};
        Key b = base_->random_key(rng, size);
        k.insert(k.end(), b.begin(), b.end());
        return k;
    }

    RingElem entry(const RingElem& f, unsigned i, unsigned j) const {
        Terms t;
        for (const auto& [k, c] : f.terms())
            if (k[0] == i && k[1] == j) t.emplace(tail(k), c);
        return RingElem(base_, std::move(t));
    }

    Terms literal(const std::vector<std::vector<RingElem>>& rows) const {
        Terms t;
        for (unsigned i = 0; i < rows.size(); ++i)
            for (unsigned j = 0; j < rows[i].size(); ++j) add_terms(t, wrap(i, j, rows[i][j].terms()));
        return t;
    }

private:
    static Key tail(const Key& k) { return Key(k.begin() + 2, k.end()); }

    static Terms wrap(std::int64_t i, std::int64_t j, const Terms& base) {
        Terms t;
        for (const auto& [k, c] : base) {
            Key key{i, j};
            key.insert(key.end(), k.begin(), k.end());
            t.emplace(std::move(key), c);
        }
        return t;
    }

    Terms scalar_terms(const Terms& base) const {
        Terms t;
        for (unsigned i = 0; i < n_; ++i) add_terms(t, wrap(i, i, base));
        return t;
    }

    static std::vector<std::vector<RingElem>> minor(const std::vector<std::vector<RingElem>>& m, unsigned r, unsigned c) {
        std::vector<std::vector<RingElem>> out;
        for (unsigned i = 0; i < m.size(); ++i) {
            if (i == r) continue;
            std::vector<RingElem> row;
            for (unsigned j = 0; j < m.size(); ++j)
                if (j != c) row.push_back(m[i][j]);
            out.push_back(std::move(row));
        }
        return out;
    }

    RingElem det(const std::vector<std::vector<RingElem>>& m) const {
        if (m.empty()) return base_->one();
        if (m.size() == 1) return m[0][0];
        RingElem s = base_->zero();
        for (unsigned j = 0; j < m.size(); ++j) {
            RingElem t = m[0][j] * det(minor(m, 0, j));
            if (j % 2) s -= t;
            else s += t;
        }
        return s;
    }

    unsigned n_;
    RingPtr base_;
};

const MatrixRing& as_matrix(const Ring& r) {
    auto* m = dynamic_cast<const MatrixRing*>(&r);
    if (!m) throw RingError(r.tag() + " is not a matrix ring");
    return *m;
}

std::vector<std::string> corpus_text(const std::string& tag) {
    if (tag == "qx" || tag.rfind("shifted:", 0) == 0)
        return {"1", "x", "x^2 + 1", "3*x - 2", "x^3 - x/2", "2", "x^4 + x^2"};
    if (tag == "laurentlog")
        return {"1", "x", "x^-1", "ln(x)", "x^-2", "x*ln(x)", "3 + 2*x^-1 + 5*ln(x)", "x^2 - ln(x)^2"};
    if (tag.rfind("exppoly", 0) == 0)
        return {"1", "exp(x)", "exp(-x)", "x", "x*exp(2*x)", "exp(1/2*x) + x^2", "exp(-3/2*x) - 1"};
    if (tag.rfind("hurwitz", 0) == 0) return {"1", "x_1", "x_2 + x_3", "2*x_1 + x_4", "x_5 - 3"};
    return {};
}

}  // namespace

RingPtr make_poly() { return std::make_shared<PolyRing>(); }
RingPtr make_laurent_log() { return std::make_shared<LaurentLogRing>(); }
RingPtr make_exppoly_rec() { return std::make_shared<ExpPolyRing>(); }

RingPtr make_exppoly_eval0() {
    RingPtr base = make_exppoly_rec();
    return induced_integration(base, *base->functional("at0"), "exppoly:eval0", true);
}

RingPtr make_hurwitz(std::uint32_t p, unsigned length) { return std::make_shared<HurwitzRing>(p, length); }

RingPtr make_shifted(const Const& c) {
    Functional e{"shift", [c](const Key& k) { return Const(k[0] == 0 ? 1 : 0) - c * Const(k[0]); }, c.is_zero()};
    return induced_integration(make_poly(), e, "shifted:" + c.str(), c.is_zero());
}

RingPtr make_matrix(unsigned n, RingPtr base) { return std::make_shared<MatrixRing>(n, std::move(base)); }

RingPtr make_ring(const std::string& tag) {
    auto bad = [&] { return RingError("unknown ring '" + tag + "'"); };
    if (tag == "qx") return make_poly();
    if (tag == "laurentlog") return make_laurent_log();
    if (tag == "exppoly:rec" || tag == "exppoly") return make_exppoly_rec();
    if (tag == "exppoly:eval0") return make_exppoly_eval0();
    auto colon = tag.find(':');
    if (colon == std::string::npos) throw bad();
    std::string head = tag.substr(0, colon), rest = tag.substr(colon + 1);
    try {
        if (head == "hurwitz") {
            auto comma = rest.find(',');
            std::uint32_t p = static_cast<std::uint32_t>(std::stoul(rest.substr(0, comma)));
            unsigned n = comma == std::string::npos ? 8 : static_cast<unsigned>(std::stoul(rest.substr(comma + 1)));
            if (p == 1) throw bad();
            for (std::uint32_t d = 2; d * d <= p; ++d)
                if (p % d == 0) throw RingError("hurwitz modulus must be 0 or prime");
            return make_hurwitz(p, n);
        }
        if (head == "shifted") {
            Lexer lx(rest);
            Const c = parse_rational(lx);
            if (!lx.at_end()) throw bad();
            return make_shifted(c);
        }
        if (head == "matrix") {
            auto comma = rest.find(',');
            if (comma == std::string::npos) throw bad();
            unsigned n = static_cast<unsigned>(std::stoul(rest.substr(0, comma)));
            return make_matrix(n, make_ring(rest.substr(comma + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw bad();
    } catch (const ParseError&) {
        throw bad();
    }
    throw bad();
}

std::vector<RingElem> ring_corpus(const RingPtr& ring) {
    std::vector<RingElem> out;
    if (auto* m = dynamic_cast<const MatrixRing*>(ring.get())) {
        for (const auto& f : ring_corpus(m->base())) {
            std::vector<std::vector<RingElem>> rows(m->size(), std::vector<RingElem>(m->size(), m->base()->zero()));
            for (unsigned i = 0; i < m->size(); ++i) rows[i][i] = f;
            out.push_back(ring->elem(m->literal(rows)));
        }
        std::mt19937_64 rng(20240611);
        for (int i = 0; i < 4; ++i) out.push_back(ring->random(rng));
        return out;
    }
    for (const auto& s : corpus_text(ring->tag())) out.push_back(ring->parse(s));
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 4; ++i) out.push_back(ring->random(rng));
    return out;
}

std::optional<std::pair<RingElem, RingElem>> multiplicativity_witness(const RingPtr& ring) {
    auto corpus = ring_corpus(ring);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = i; j < corpus.size(); ++j) {
            const RingElem &f = corpus[i], &g = corpus[j];
            if (ring->evaluate(f * g) != ring->evaluate(f) * ring->evaluate(g)) return std::pair{f, g};
            if (!ring->commutative() && ring->evaluate(g * f) != ring->evaluate(g) * ring->evaluate(f))
                return std::pair{g, f};
        }
    return std::nullopt;
}

unsigned matrix_size(const Ring& m) { return as_matrix(m).size(); }

RingElem matrix_entry(const RingElem& m, unsigned i, unsigned j) { return as_matrix(*m.ring()).entry(m, i, j); }

RingElem matrix_from_entries(const RingPtr& mring, const std::vector<std::vector<RingElem>>& rows) {
    return mring->elem(mring->matrix_literal(rows));
}

}  // namespace idr
