#pragma once

#include "idring/opalg.hpp"

#include <vector>

namespace idr {

/// (h_1 d - h_1') ... (h_n d - h_n') * L = differential.
struct LeftElimination {
    std::vector<RingElem> h;
    NormalForm differential;
};

/// L * (h_1 d + 2 h_1') ... (h_n d + 2 h_n') = e * differential.
struct RightElimination {
    std::vector<RingElem> h;
    NormalForm differential;
};

/// L * i^k * e = f_k * e with k minimal such that f_k != 0.
struct FEExtraction {
    std::int64_t k = 0;
    RingElem f;
};

/// Errors: "domain-required", "is-initial-operator", "independence-not-certified".
LeftElimination eliminate_integrals_left(const NormalForm& L);
/// Errors: "domain-required", "not-monic-initial", "zero-operator", "independence-not-certified".
RightElimination eliminate_integrals_right(const NormalForm& L);
/// Errors: "zero-operator", "not-differential".
FEExtraction extract_fE(const NormalForm& L);

/// The first-order factors used above, as normal forms.
NormalForm left_factor(const OpContextPtr& ctx, const RingElem& h);
NormalForm right_factor(const OpContextPtr& ctx, const RingElem& h);

}  // namespace idr
