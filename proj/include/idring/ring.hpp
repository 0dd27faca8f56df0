#pragma once

#include "idring/const.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace idr {

/// Address of a basis element of a ring's constant-module basis.
using Key = std::vector<std::int64_t>;
/// Finite coordinate map over the basis; zero coordinates are never stored.
using Terms = std::map<Key, Const>;

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

void add_term(Terms& t, const Key& k, const Const& c);
void add_terms(Terms& t, const Terms& u, const Const& scale = Const(1));
Terms scale_terms(const Terms& t, const Const& c);

class RingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RingElem {
public:
    RingElem() = default;
    RingElem(RingPtr ring, Terms terms);

    const RingPtr& ring() const { return ring_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Const coeff(const Key& k) const;

    RingElem operator-() const;
    RingElem& operator+=(const RingElem& o);
    RingElem& operator-=(const RingElem& o);
    friend RingElem operator+(RingElem a, const RingElem& b) { return a += b; }
    friend RingElem operator-(RingElem a, const RingElem& b) { return a -= b; }
    friend RingElem operator*(const RingElem& a, const RingElem& b);
    friend RingElem operator*(const Const& c, const RingElem& a);
    friend bool operator==(const RingElem& a, const RingElem& b);
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }
    friend bool operator<(const RingElem& a, const RingElem& b) { return a.terms_ < b.terms_; }

    RingElem pow(unsigned n) const;
    std::string str() const;

private:
    RingPtr ring_;
    Terms terms_;
};

/// A linear functional R -> C given on basis elements.
struct Functional {
    std::string name;
    std::function<Const(const Key&)> on_key;
    bool multiplicative = false;

    Const operator()(const RingElem& f) const;
};

/// Contract of a concrete integro-differential ring. All operations are
/// given on basis keys and extended linearly; values are immutable.
class Ring : public std::enable_shared_from_this<Ring> {
public:
    virtual ~Ring() = default;

    virtual std::string tag() const = 0;
    virtual std::uint32_t modulus() const { return 0; }
    virtual bool commutative() const { return true; }
    virtual bool integral_domain() const { return true; }
    /// Declared property of the shipped evaluation (checked by tests).
    virtual bool evaluation_multiplicative() const = 0;

    /// Basis key of 1, when 1 is a single basis element.
    virtual std::optional<Key> one_key() const = 0;
    virtual Terms one_terms() const;
    virtual Terms mul_keys(const Key& a, const Key& b) const = 0;
    virtual Terms derive_key(const Key& a) const = 0;
    virtual Terms integrate_key(const Key& a) const = 0;
    virtual Terms evaluate_key(const Key& a) const = 0;

    /// Closed-form inverse where the representation has one.
    virtual std::optional<RingElem> invert(const RingElem& f) const;

    virtual std::vector<std::string> functional_names() const { return {}; }
    virtual std::optional<Functional> functional(const std::string& name) const;

    /// Element syntax. `atom` resolves identifiers such as `x`, `ln`, `exp`.
    virtual RingElem parse(const std::string& text) const;
    virtual std::string format(const RingElem& f) const;
    virtual std::string key_str(const Key& k) const = 0;
    virtual bool key_less(const Key& a, const Key& b) const { return a < b; }
    virtual std::optional<Terms> atom(const std::string& ident, const std::optional<Const>& arg) const;
    /// Entry ring and literal builder for `[[a, b], [c, d]]` syntax.
    virtual RingPtr entry_ring() const { return nullptr; }
    virtual Terms matrix_literal(const std::vector<std::vector<RingElem>>& rows) const;

    /// Basis key drawn for randomized property checks; `size` bounds degrees.
    virtual Key random_key(std::mt19937_64& rng, int size) const = 0;
    RingElem random(std::mt19937_64& rng, int terms = 3, int size = 3) const;

    // Linear extensions.
    RingElem elem(Terms t) const;
    RingElem zero() const;
    RingElem one() const;
    RingElem constant(const Const& c) const;
    RingElem basis(const Key& k) const;
    RingElem derive(const RingElem& f) const;
    RingElem integrate(const RingElem& f) const;
    RingElem evaluate(const RingElem& f) const;
    RingElem mul(const RingElem& f, const RingElem& g) const;
    Const lift(const Const& c) const { return modulus() ? c.reduce_mod(modulus()) : c; }
    bool is_constant(const RingElem& f) const { return derive(f).is_zero(); }
    /// Scalar value of E f when E f is a multiple of 1.
    Const evaluate_scalar(const RingElem& f) const;

    RingPtr self() const { return shared_from_this(); }

protected:
    Terms apply_linear(const Terms& t, const std::function<Terms(const Key&)>& op) const;
};

/// Integration induced by an evaluation functional e on a base ring:
/// the new integral is the base integral minus e of it, and the induced
/// evaluation is e itself. Rejects e with e(1) != 1.
RingPtr induced_integration(RingPtr base, Functional e, std::string tag, bool multiplicative);

}  // namespace idr
