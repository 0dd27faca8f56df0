#pragma once

#include "idring/ring.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idr {

/// Q[x] with d/dx, integration from 0 and evaluation at 0.
RingPtr make_poly();
/// Finite sums of x^k ln(x)^n, k in Z; E picks the coefficient of x^0 ln(x)^0.
RingPtr make_laurent_log();
/// Exponential polynomials x^k exp(qx) with the recursive (Pochhammer) integration.
RingPtr make_exppoly_rec();
/// Exponential polynomials with integration induced by evaluation at 0.
RingPtr make_exppoly_eval0();
/// Divided-power sequences over Q (p = 0) or Z/pZ. `length` only bounds sampling.
RingPtr make_hurwitz(std::uint32_t p, unsigned length);
/// Q[x] with the integration x^n -> x^(n+1)/(n+1) + c.
RingPtr make_shifted(const Const& c);
/// n x n matrices over `base` with entrywise derivation, integration and evaluation.
RingPtr make_matrix(unsigned n, RingPtr base);

/// Builds a ring from its tag: qx, laurentlog, exppoly:rec, exppoly:eval0,
/// hurwitz:p,N, shifted:c, matrix:n,<tag>.
RingPtr make_ring(const std::string& tag);

/// Fixed sample of elements used for multiplicativity and corpus checks.
std::vector<RingElem> ring_corpus(const RingPtr& ring);

/// A pair with E(fg) != E(f)E(g), or nullopt when the corpus is multiplicative.
std::optional<std::pair<RingElem, RingElem>> multiplicativity_witness(const RingPtr& ring);

/// Matrix helpers; `m` must belong to a ring built by make_matrix.
unsigned matrix_size(const Ring& m);
RingElem matrix_entry(const RingElem& m, unsigned i, unsigned j);
RingElem matrix_from_entries(const RingPtr& mring, const std::vector<std::vector<RingElem>>& rows);

}  // namespace idr
