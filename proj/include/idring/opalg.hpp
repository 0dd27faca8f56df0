#pragma once

#include "idring/ring.hpp"
#include "idring/syntax.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace idr {

/// A 𝒞-linear functional usable as an operator letter; index 0 is always E.
struct PhiEntry {
    std::string name;
    Functional fn;
    bool multiplicative = false;
};

/// Address of one basis operator in a normal form. Coefficient slots hold
/// basis keys of the ring; the key of 1 marks an absent slot.
///   Diff:  f * d^j
///   Int:   f * i * g
///   PhiD:  f * phi * h * d^j
///   PhiI:  f * phi * h * i * g    (for phi = E, h stands for h - E h)
struct TermKey {
    enum Kind : std::uint8_t { Diff, Int, PhiD, PhiI };
    Kind kind = Diff;
    int phi = 0;
    std::int64_t j = 0;
    Key f, h, g;

    auto operator<=>(const TermKey&) const = default;
};

class OpContext;
using OpContextPtr = std::shared_ptr<const OpContext>;

class OpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NormalForm {
public:
    using TermMap = std::map<TermKey, Const>;

    NormalForm() = default;
    NormalForm(OpContextPtr ctx, TermMap terms);

    const OpContextPtr& ctx() const { return ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    NormalForm operator-() const;
    NormalForm& operator+=(const NormalForm& o);
    NormalForm& operator-=(const NormalForm& o);
    friend NormalForm operator+(NormalForm a, const NormalForm& b) { return a += b; }
    friend NormalForm operator-(NormalForm a, const NormalForm& b) { return a -= b; }
    friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
    friend NormalForm operator*(const Const& c, const NormalForm& a);
    friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }

    NormalForm pow(unsigned n) const;
    /// Keeps only terms of the given shapes.
    NormalForm filter(std::initializer_list<TermKey::Kind> kinds) const;

    std::string str() const;
    std::string json() const;

private:
    OpContextPtr ctx_;
    TermMap terms_;
};

/// Unreduced operator syntax tree.
struct OperatorExpr {
    enum Kind { Sum, Prod, Coeff, Scalar, Gen };
    enum GenKind { D, I, Phi };

    Kind kind = Sum;
    std::vector<OperatorExpr> kids;
    RingElem coeff;
    Const scalar;
    GenKind gen = D;
    std::string phi;  // functional name, "e" for E

    static OperatorExpr sum(std::vector<OperatorExpr> k);
    static OperatorExpr prod(std::vector<OperatorExpr> k);
    static OperatorExpr of(RingElem f);
    static OperatorExpr constant(Const c);
    static OperatorExpr d();
    static OperatorExpr i();
    static OperatorExpr e();
    static OperatorExpr functional(std::string name);

    friend OperatorExpr operator+(OperatorExpr a, OperatorExpr b) { return sum({std::move(a), std::move(b)}); }
    friend OperatorExpr operator*(OperatorExpr a, OperatorExpr b) { return prod({std::move(a), std::move(b)}); }
    friend OperatorExpr operator-(OperatorExpr a, OperatorExpr b);

    std::string str() const;
};

struct RewriteOptions {
    enum Strategy { Leftmost, Random } strategy = Leftmost;
    std::uint64_t seed = 0;
    std::vector<std::string>* trace = nullptr;
};

struct Decomposition {
    NormalForm differential, integral, initial;
};

struct ProofResult {
    bool equal = false;
    NormalForm difference;  // normal form of lhs - rhs; the witness when unequal
};

/// The operator ring over a fixed coefficient ring and functional table.
class OpContext : public std::enable_shared_from_this<OpContext> {
public:
    /// `phis` lists extra functionals by ring name; `multiplicative` flags
    /// members of Phi_m ("e" included). A flag is honoured only if phi(1) = 1.
    static OpContextPtr create(RingPtr ring, const std::vector<std::string>& phis = {},
                               const std::vector<std::string>& multiplicative = {});

    const RingPtr& ring() const { return ring_; }
    const std::vector<PhiEntry>& functionals() const { return phis_; }
    int phi_index(const std::string& name) const;
    std::string phi_name(int idx) const { return idx == 0 ? "e" : "phi:" + phis_[idx].name; }
    Const phi_value(int idx, const RingElem& f) const;

    NormalForm zero() const;
    NormalForm one() const;
    NormalForm scalar(const Const& c) const;
    NormalForm coeff(const RingElem& f) const;
    NormalForm d() const;
    NormalForm i() const;
    NormalForm e() const;
    NormalForm phi(int idx) const;

    NormalForm normalize(const OperatorExpr& expr, const RewriteOptions& opt = {}) const;
    NormalForm multiply(const NormalForm& a, const NormalForm& b, const RewriteOptions& opt = {}) const;
    ProofResult prove_equal(const OperatorExpr& a, const OperatorExpr& b) const;
    Decomposition decompose(const NormalForm& nf) const;

    /// Action on ring elements.
    RingElem apply(const NormalForm& op, const RingElem& f) const;
    RingElem eval_expr(const OperatorExpr& expr, const RingElem& f) const;

    /// Operator grammar: d, i, e, phi:<name>, D f, I f, I1, ring literals, * + - ( ) ^n.
    OperatorExpr parse(const std::string& text, const ElemDefs* defs = nullptr) const;

    /// Human-readable factors of a term (coefficient excluded).
    std::string term_str(const TermKey& k) const;
    /// Ring element standing in slot h of a term (projected for E before an integral).
    RingElem slot_h(const TermKey& k) const;

private:
    OpContext(RingPtr ring) : ring_(std::move(ring)) {}

    RingPtr ring_;
    Key one_;
    std::vector<PhiEntry> phis_;
};

}  // namespace idr
