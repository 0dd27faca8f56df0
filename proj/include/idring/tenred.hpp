#pragma once

#include "idring/opalg.hpp"

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace idr::tenred {

/// Commutative polynomial over Q in symbolic scalars (ids owned by an algebra).
using Poly = std::map<std::vector<int>, Const>;

Poly poly_const(const Const& c);
void poly_add(Poly& a, const Poly& b, const Const& scale = Const(1));
Poly poly_mul(const Poly& a, const Poly& b);

/// Coefficient algebra behind the R slots. Expressions and R~ slots are integer handles.
class PayloadAlgebra {
public:
    struct Split {
        Poly constant;                            // K part, E u
        std::vector<std::pair<int, Poly>> slots;  // R~ parts, u - E u
    };

    virtual ~PayloadAlgebra() = default;
    virtual int one() = 0;
    virtual int slot_expr(int slot) = 0;
    virtual int mul(int a, int b) = 0;
    virtual int der(int a) = 0;
    virtual int integ(int a) = 0;
    virtual Poly functional(const std::string& fn, int a) = 0;
    virtual Split split(int a) = 0;
    virtual std::string slot_str(int slot) const = 0;
    virtual std::string symbol_str(int sym) const = 0;

    std::string poly_str(const Poly& p) const;
};

/// Formal payloads: generic atoms with derivatives, integrals, products and
/// symbolic functional values. Scalars are central.
class SymbolicAlgebra final : public PayloadAlgebra {
public:
    explicit SymbolicAlgebra(bool e_multiplicative = false);

    void declare_functional(const std::string& name, bool multiplicative);
    /// Slot holding the generic element i(name) of i R.
    int generic_slot(const std::string& name);
    /// Slot holding x = i(1).
    int x_slot();

    int one() override { return one_expr_; }
    int slot_expr(int slot) override;
    int mul(int a, int b) override;
    int der(int a) override;
    int integ(int a) override;
    Poly functional(const std::string& fn, int a) override;
    Split split(int a) override;
    std::string slot_str(int slot) const override { return mono_str(slot); }
    std::string symbol_str(int sym) const override;
    std::string expr_str(int a) const;

private:
    using Expr = std::map<int, Poly>;
    struct Factor {
        bool integral = false;
        std::string name;
        int order = 0;
        int expr = -1;
        auto operator<=>(const Factor&) const = default;
    };
    struct Symbol {
        std::string fn;
        int mono = 0;
        auto operator<=>(const Symbol&) const = default;
    };
    struct FnInfo {
        bool multiplicative = false;
        bool evaluation = false;
    };

    int intern(const Expr& e);
    int intern_mono(const std::vector<int>& factors);
    int intern_factor(const Factor& f);
    int intern_symbol(const Symbol& s);
    Expr mono_expr(int m, const Poly& c) const;
    Expr mul_expr(const Expr& a, const Expr& b);
    Expr der_expr(const Expr& a);
    Expr integ_expr(const Expr& a);
    Expr integ_mono(int m);
    Poly fn_expr(const std::string& fn, const Expr& a);
    Poly fn_mono(const std::string& fn, int m);
    std::string mono_str(int m) const;
    std::string str(const Expr& e) const;

    std::vector<Expr> exprs_;
    std::map<Expr, int> expr_ids_;
    std::vector<std::vector<int>> monos_;
    std::map<std::vector<int>, int> mono_ids_;
    std::vector<Factor> factors_;
    std::map<Factor, int> factor_ids_;
    std::vector<Symbol> symbols_;
    std::map<Symbol, int> symbol_ids_;
    std::map<std::string, FnInfo> fns_;
    int one_expr_ = 0;
    int depth_ = 0;
};

/// Payloads from a concrete ring; R~ slots are basis keys b standing for b - E b.
class ConcreteAlgebra final : public PayloadAlgebra {
public:
    explicit ConcreteAlgebra(OpContextPtr ctx);

    int add(const RingElem& f);
    const RingElem& elem(int a) const { return exprs_[a]; }
    RingElem slot_value(int slot) const;
    const OpContextPtr& ctx() const { return ctx_; }

    int one() override { return one_; }
    int slot_expr(int slot) override { return add(slot_value(slot)); }
    int mul(int a, int b) override { return add(exprs_[a] * exprs_[b]); }
    int der(int a) override;
    int integ(int a) override;
    Poly functional(const std::string& fn, int a) override;
    Split split(int a) override;
    std::string slot_str(int slot) const override;
    std::string symbol_str(int) const override { return "?"; }

private:
    int slot(const Key& k);

    OpContextPtr ctx_;
    std::vector<RingElem> exprs_;
    std::vector<Key> slot_keys_;
    std::map<Key, int> slot_ids_;
    int one_ = 0;
};

/// Letters: X = {K, R~, D, I, E, Phi~, Phim~}, Z = X plus {R, Phi, Phim}.
enum class Letter { K, Rt, D, I, E, Phit, Phimt, R, Phi, Phim };

std::string letter_str(Letter l);

struct Slot {
    Letter letter = Letter::K;
    int id = -1;     // R~ payload slot
    std::string fn;  // functional name for E / Phi~ / Phim~
    auto operator<=>(const Slot&) const = default;
};

using Word = std::vector<Slot>;
using Tensor = std::map<Word, Poly>;

/// Which functional letters exist and whether E is multiplicative.
struct SystemConfig {
    bool phi = false;
    bool phim = false;
    bool e_multiplicative = false;
};

/// Payload template on the right-hand side of a rule.
struct PExpr {
    enum Kind { Var, One, Mul, Der, Int } kind = One;
    int var = 0;
    std::vector<PExpr> kids;
};

struct TFactor {
    enum Kind { Letter_, FnVar, RSlot, Scalar } kind = Letter_;
    Letter letter = Letter::D;  // D, I or E
    int fn = 0;                 // index of the pattern functional; -1 means E
    PExpr expr;
};

struct TTerm {
    Const coeff;
    std::vector<TFactor> factors;
};

struct Rule {
    std::string name;
    std::vector<Letter> pattern;
    std::vector<TTerm> rhs;
    std::string text;
};

class ReductionSystem {
public:
    ReductionSystem(std::string name, SystemConfig cfg, std::vector<Rule> rules);
    /// One rule per line: `NAME: P1 P2 ... -> term +- term ...`.
    static ReductionSystem parse(std::string name, SystemConfig cfg, const std::string& text);

    const std::string& name() const { return name_; }
    const SystemConfig& config() const { return cfg_; }
    const std::vector<Rule>& rules() const { return rules_; }
    std::string text() const;

    /// X letters reachable from a Z letter in this system.
    std::vector<Letter> specializations(Letter z) const;
    std::vector<Letter> alphabet() const;
    bool admits(Letter z, Letter x) const;

private:
    std::string name_;
    SystemConfig cfg_;
    std::vector<Rule> rules_;
};

/// Shipped systems: diff, ido-defining, ido, ido-phi-defining, ido-phi, ido-phi-mult.
ReductionSystem shipped_system(const std::string& name);
std::vector<std::string> shipped_system_names();
/// Completed system matching the functionals of a concrete context.
ReductionSystem system_for(const OpContext& ctx);

struct ReduceOptions {
    enum Strategy { Leftmost, Random } strategy = Leftmost;
    std::uint64_t seed = 0;
    std::vector<std::string>* trace = nullptr;
};

/// Termination measure: I count, then length, then letter ranks.
bool word_less(const Word& a, const Word& b);

/// Builds the tensor of a template term with R slots expanded over K and R~.
Tensor pure_tensor(PayloadAlgebra& alg, const std::vector<Slot>& letters);
Tensor reduce(PayloadAlgebra& alg, const ReductionSystem& sys, Tensor t, const ReduceOptions& opt = {});
/// Applies one rule at one position of a pure word.
Tensor apply_rule(PayloadAlgebra& alg, const ReductionSystem& sys, const Rule& r, const Word& w, std::size_t pos);
std::string tensor_str(const PayloadAlgebra& alg, const Tensor& t);
void tensor_add(Tensor& t, const Word& w, const Poly& c);
void tensor_add(Tensor& t, const Tensor& u, const Poly& scale);

struct Ambiguity {
    enum Kind { Overlap, Inclusion } kind = Overlap;
    std::size_t r1 = 0, r2 = 0;  // r1 applied at 0, r2 at `pos`
    std::size_t pos = 0;
    std::vector<Letter> word;
};

std::vector<Ambiguity> enumerate_ambiguities(const ReductionSystem& sys);

struct SpecializationCheck {
    std::string word;
    std::string spoly;
    std::string residue;
    std::vector<std::string> trace;
    bool resolved = false;
};

struct AmbiguityResult {
    Ambiguity amb;
    std::string label;
    std::vector<SpecializationCheck> checks;
    bool resolved = true;
};

struct AmbiguityReport {
    std::string system;
    std::vector<AmbiguityResult> items;
    bool confluent = true;

    std::size_t unresolved() const;
    std::string json(bool traces = false) const;
};

AmbiguityReport check_confluence(const ReductionSystem& sys, bool traces = false);

/// Checks each rule of `defining` against `complete`: both sides reduce to the same normal form.
std::vector<std::pair<std::string, bool>> same_ideal(const ReductionSystem& defining, const ReductionSystem& complete);

/// Irreducible X-words up to `max_len`, and their shapes with trailing D runs written D^j.
std::vector<std::string> irreducible_words(const ReductionSystem& sys, std::size_t max_len);
std::vector<std::string> irreducible_shapes(const ReductionSystem& sys, std::size_t max_len = 7);

/// Tensor of an operator expression over a concrete ring, and the operator of a tensor.
Tensor operator_tensor(ConcreteAlgebra& alg, const OperatorExpr& e);
NormalForm tensor_operator(const ConcreteAlgebra& alg, const Tensor& t);

}  // namespace idr::tenred
