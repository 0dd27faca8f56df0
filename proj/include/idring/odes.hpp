#pragma once

#include "idring/opalg.hpp"
#include "idring/wronskian.hpp"

#include <optional>
#include <vector>

namespace idr {

/// Square matrix of scalar operators.
class OpMatrix {
public:
    OpMatrix() = default;
    OpMatrix(OpContextPtr ctx, unsigned n);

    static OpMatrix identity(OpContextPtr ctx, unsigned n);
    /// diag(op, ..., op).
    static OpMatrix diag(unsigned n, const NormalForm& op);
    /// Multiplication operators by the entries of a matrix element (1x1 for scalar rings).
    static OpMatrix of(OpContextPtr ctx, const RingElem& m);

    unsigned size() const { return static_cast<unsigned>(e_.size()); }
    const OpContextPtr& ctx() const { return ctx_; }
    NormalForm& at(unsigned i, unsigned j) { return e_[i][j]; }
    const NormalForm& at(unsigned i, unsigned j) const { return e_[i][j]; }

    OpMatrix& operator+=(const OpMatrix& o);
    OpMatrix& operator-=(const OpMatrix& o);
    friend OpMatrix operator+(OpMatrix a, const OpMatrix& b) { return a += b; }
    friend OpMatrix operator-(OpMatrix a, const OpMatrix& b) { return a -= b; }
    friend OpMatrix operator*(const OpMatrix& a, const OpMatrix& b);
    friend bool operator==(const OpMatrix& a, const OpMatrix& b) { return a.e_ == b.e_; }

    /// Entrywise action on a column-structured matrix: (M F)_{ik} = sum_j M_ij(F_jk).
    ElemMatrix apply(const ElemMatrix& f) const;
    std::string str() const;

private:
    void check(const OpMatrix& o) const;

    OpContextPtr ctx_;
    std::vector<std::vector<NormalForm>> e_;
};

/// L = d + a with z' + a z = 0. Over a matrix ring all data are matrices.
struct FirstOrderProblem {
    RingElem a, z;
    std::optional<RingElem> z_inv;
    std::optional<RingElem> ez_inv;
};

/// L = d^n + sum a_i d^i with fundamental system z_1..z_n.
struct ScalarProblem {
    std::vector<RingElem> a;  // a_0 .. a_{n-1}
    std::vector<RingElem> z;
    std::optional<RingElem> w_inv;
    /// c[i][j] with E d^k sum_i c_ij z_i = delta_jk.
    std::optional<std::vector<std::vector<Const>>> c;
};

/// The operator d + a (as a matrix of operators).
OpMatrix first_order_operator(OpContextPtr ctx, const FirstOrderProblem& p);
/// z * i * z^-1. Throws OpError("no-inverse").
OpMatrix right_inverse_first_order(OpContextPtr ctx, const FirstOrderProblem& p);
/// (1 - z (Ez)^-1 E) z i z^-1. Throws OpError("Ez-not-invertible").
OpMatrix green_first_order(OpContextPtr ctx, const FirstOrderProblem& p);

NormalForm scalar_operator(const OpContext& ctx, const std::vector<RingElem>& a);
/// sum (-1)^(n-i) z_i * i * W(z without z_i) / w. Throws OpError("wronskian-not-invertible").
NormalForm variation_of_constants(OpContextPtr ctx, const ScalarProblem& p);
/// Right inverse with E d^k G = 0 for k < n. Throws OpError("initial-matrix-invalid").
NormalForm green_scalar(OpContextPtr ctx, const ScalarProblem& p);

/// Companion matrix with -1 on the superdiagonal and last row a_0..a_{n-1}.
RingElem companion_matrix(const RingPtr& base, const std::vector<RingElem>& a);
/// Matrix (d^(i-1) z_j).
RingElem wronski_matrix(const RingPtr& base, const std::vector<RingElem>& z);

struct CompanionRoute {
    OpMatrix system;    // the first-order operator d + A
    OpMatrix solution;  // H (or the Green's matrix when initial conditions are imposed)
    NormalForm entry;   // upper right entry of `solution`
};

/// Scalar right inverse (or Green's operator when `green`) through the first-order system.
CompanionRoute companion_route(OpContextPtr ctx, const ScalarProblem& p, bool green = false);

/// Operators with matrix coefficients are kept as OperatorExpr trees whose
/// coefficients lie in a matrix ring over ctx's ring.
OpMatrix matrix_to_scalar(OpContextPtr ctx, const OperatorExpr& op, unsigned n);
OperatorExpr scalar_to_matrix(const OpMatrix& m, const RingPtr& mring);
/// Direct action of a matrix-coefficient operator on a matrix element.
RingElem act_matrix(const Ring& mring, const OperatorExpr& op, const RingElem& f);

}  // namespace idr
