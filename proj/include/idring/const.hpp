#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace idr {

/// Exact constant: a reduced rational, or a residue modulo a prime when
/// `modulus() != 0`. Mixed arithmetic promotes the rational operand into
/// the residue field.
class Const {
public:
    Const() = default;
    Const(long v) : q_(v) {}
    Const(int v) : q_(v) {}
    Const(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    Const(const mpz_class& num, const mpz_class& den);

    static Const mod(long v, std::uint32_t p);
    static Const parse(const std::string& text);

    std::uint32_t modulus() const { return p_; }
    const mpq_class& rational() const { return q_; }

    bool is_zero() const { return q_ == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    /// Residue field conversion; throws if the denominator is not invertible.
    Const reduce_mod(std::uint32_t p) const;

    Const operator-() const;
    Const& operator+=(const Const& o);
    Const& operator-=(const Const& o);
    Const& operator*=(const Const& o);
    Const& operator/=(const Const& o);
    Const inverse() const;

    friend Const operator+(Const a, const Const& b) { return a += b; }
    friend Const operator-(Const a, const Const& b) { return a -= b; }
    friend Const operator*(Const a, const Const& b) { return a *= b; }
    friend Const operator/(Const a, const Const& b) { return a /= b; }
    friend bool operator==(const Const& a, const Const& b);
    friend bool operator!=(const Const& a, const Const& b) { return !(a == b); }
    /// Total order on representations (used for deterministic sorting).
    friend bool operator<(const Const& a, const Const& b);

    std::string str() const;

private:
    void unify(Const& other);
    void normalize_mod();

    mpq_class q_;
    std::uint32_t p_ = 0;
};

Const binomial(long n, long k);
Const factorial(long n);

}  // namespace idr
