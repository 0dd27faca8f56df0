#include "idring/const.hpp"

#include <stdexcept>

namespace idr {

Const::Const(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den == 0) throw std::domain_error("zero denominator");
    q_.canonicalize();
}

Const Const::mod(long v, std::uint32_t p) {
    Const c(v);
    return p == 0 ? c : c.reduce_mod(p);
}

Const Const::parse(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return Const(q);
}

Const Const::reduce_mod(std::uint32_t p) const {
    if (p == 0) return *this;
    if (p_ == p) return *this;
    if (p_ != 0) throw std::logic_error("mixing residues of different moduli");
    mpz_class m(p);
    mpz_class num = q_.get_num() % m;
    mpz_class den = q_.get_den() % m;
    if (den == 0) throw std::domain_error("denominator not invertible mod " + std::to_string(p));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    mpz_class r = (num * inv) % m;
    if (r < 0) r += m;
    Const out{mpq_class(r)};
    out.p_ = p;
    return out;
}

void Const::normalize_mod() {
    if (p_ == 0) return;
    mpz_class m(p_);
    mpz_class r = q_.get_num() % m;
    if (r < 0) r += m;
    q_ = mpq_class(r);
}

void Const::unify(Const& other) {
    if (p_ == other.p_) return;
    if (p_ == 0) {
        *this = reduce_mod(other.p_);
    } else {
        other = other.reduce_mod(p_);
    }
}

Const Const::operator-() const {
    Const r = *this;
    r.q_ = -r.q_;
    r.normalize_mod();
    return r;
}

Const& Const::operator+=(const Const& o) {
    Const b = o;
    unify(b);
    q_ += b.q_;
    normalize_mod();
    return *this;
}

Const& Const::operator-=(const Const& o) {
    Const b = o;
    unify(b);
    q_ -= b.q_;
    normalize_mod();
    return *this;
}

Const& Const::operator*=(const Const& o) {
    Const b = o;
    unify(b);
    q_ *= b.q_;
    normalize_mod();
    return *this;
}

Const& Const::operator/=(const Const& o) {
    Const b = o;
    unify(b);
    return *this *= b.inverse();
}

Const Const::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero constant");
    if (p_ == 0) return Const(1 / q_);
    mpz_class m(p_), inv;
    mpz_class v = q_.get_num();
    mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    Const r{mpq_class(inv)};
    r.p_ = p_;
    return r;
}

bool operator==(const Const& a, const Const& b) {
    if (a.p_ == b.p_) return a.q_ == b.q_;
    Const x = a, y = b;
    x.unify(y);
    return x.q_ == y.q_;
}

bool operator<(const Const& a, const Const& b) {
    if (a.p_ != b.p_) return a.p_ < b.p_;
    return a.q_ < b.q_;
}

std::string Const::str() const { return q_.get_str(); }

Const binomial(long n, long k) {
    if (k < 0 || k > n) return Const(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Const(mpq_class(r));
}

Const factorial(long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Const(mpq_class(r));
}

}  // namespace idr
