#pragma once

#include "idring/lexer.hpp"
#include "idring/ring.hpp"

#include <map>
#include <string>

namespace idr {

/// Named ring elements available to the element grammar (CLI `--def`).
using ElemDefs = std::map<std::string, RingElem>;

/// Element grammar: sums of products of powers of ring atoms.
RingElem parse_sum(const Ring& ring, Lexer& lx, const ElemDefs* defs = nullptr);
/// One factor with an optional integer exponent.
RingElem parse_power(const Ring& ring, Lexer& lx, const ElemDefs* defs = nullptr);
/// Signed rational literal `p` or `p/q`.
Const parse_rational(Lexer& lx);
/// True if the next token can start an element factor of `ring`.
bool starts_element(const Ring& ring, const Lexer& lx, const ElemDefs* defs = nullptr);

}  // namespace idr
