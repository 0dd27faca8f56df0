#pragma once

#include "idring/ring.hpp"

#include <vector>

namespace idr {

using ElemMatrix = std::vector<std::vector<RingElem>>;

/// Determinant by cofactor expansion over a commutative ring.
RingElem determinant(const Ring& ring, const ElemMatrix& m);

/// W(f_1, ..., f_n) = det(d^(i-1) f_j). Throws RingError("commutative-required").
RingElem wronskian(const Ring& ring, const std::vector<RingElem>& fs);

}  // namespace idr
