#pragma once

#include "idring/opalg.hpp"

#include <map>
#include <vector>

namespace idr {

/// (f_1, ..., f_n) standing for the nested integral i f_1 i f_2 ... i f_n.
using IntegralWord = std::vector<RingElem>;
using ShuffleTensor = std::map<IntegralWord, Const>;

ShuffleTensor shuffle(const IntegralWord& a, const IntegralWord& b);
ShuffleTensor shuffle(const ShuffleTensor& a, const ShuffleTensor& b);
RingElem nested_integral(const Ring& ring, const IntegralWord& w);
RingElem nested_integral(const Ring& ring, const ShuffleTensor& t);
std::string tensor_str(const ShuffleTensor& t);

/// One lower-depth correction e(f_{i+1..m}, g_{j+1..n}) * (f_{1..i} shuffle g_{1..j}).
struct ShuffleCorrection {
    std::size_t i = 0, j = 0;
    Const e;
    ShuffleTensor lower;
};

struct GeneralizedShuffle {
    ShuffleTensor main;
    std::vector<ShuffleCorrection> corrections;

    /// Nested-integral value of the whole expansion.
    RingElem value(const Ring& ring) const;
};

/// Product of two nested integrals as shuffles plus evaluation corrections.
/// Throws RingError("commutative-ring-required").
GeneralizedShuffle generalized_shuffle_expand(const Ring& ring, const IntegralWord& f, const IntegralWord& g);

/// x_n = i^n 1.
RingElem x_n(const Ring& ring, unsigned n);
/// c_{m,n} = E(x_m x_n) computed directly.
Const c_mn(const Ring& ring, unsigned m, unsigned n);
/// c_{m,n} from the c_{1,k} alone by the recursion valid when Q is in the ring.
Const c_mn_recursive(const Ring& ring, unsigned m, unsigned n);
/// x_n from powers of x_1 and the values E(x_1^i).
RingElem x_n_from_powers(const Ring& ring, unsigned n);

struct RotaBaxterReport {
    RingElem e_term;               // E((i f)(i g))
    bool with_evaluation = false;  // (if)(ig) = i(f ig) + i((if) g) + E((if)(ig))
    bool differential = false;     // the companion identity for i d f and i d g
    bool classical = false;        // the identity without the evaluation term
};

RotaBaxterReport rota_baxter_check(const Ring& ring, const RingElem& f, const RingElem& g);

struct TaylorParts {
    RingElem poly, remainder, correction;
};

/// Taylor polynomial, integral remainder and evaluation correction of order n.
/// Throws RingError("hypothesis-violated") if E(x_i x_j) != 0 for some 1 <= i, j <= n + 1.
TaylorParts taylor_parts(const Ring& ring, const RingElem& f, unsigned n);

/// 1 = sum_i i^i e d^i + i^(n+1) d^(n+1).
std::pair<OperatorExpr, OperatorExpr> taylor_first_identity(const OpContext& ctx, unsigned n);
/// i^(n+1) written without powers of i.
std::pair<OperatorExpr, OperatorExpr> repeated_integral_identity(const OpContext& ctx, unsigned n);
/// 1 = Taylor polynomial operator + remainder operator + correction operator.
std::pair<OperatorExpr, OperatorExpr> taylor_operator_identity(const OpContext& ctx, unsigned n);

}  // namespace idr
