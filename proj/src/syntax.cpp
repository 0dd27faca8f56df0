#include "idring/syntax.hpp"

namespace idr {

namespace {

Const parse_natural(Lexer& lx) {
    const Token& t = lx.peek();
    if (t.kind != Token::Number) throw ParseError("expected a number", t.pos);
    return Const::parse(lx.next().text);
}

void expect_ident(Lexer& lx, const std::string& name) {
    if (!lx.peek_ident(name)) throw ParseError("expected '" + name + "'", lx.position());
    lx.next();
}

// exp(x), exp(-x), exp(3/2 x), exp(3/2*x), exp(-2*x)
Const parse_exp_rate(Lexer& lx) {
    lx.expect_sym("(");
    bool neg = false;
    if (lx.accept_sym("-")) neg = true;
    else lx.accept_sym("+");
    Const q(1);
    if (lx.peek().kind == Token::Number) {
        q = parse_natural(lx);
        if (lx.accept_sym("/")) q /= parse_natural(lx);
        lx.accept_sym("*");
    }
    expect_ident(lx, "x");
    lx.expect_sym(")");
    return neg ? -q : q;
}

RingElem from_atom(const Ring& ring, const std::string& name, const std::optional<Const>& arg, std::size_t pos) {
    auto t = ring.atom(name, arg);
    if (!t) throw ParseError("unknown symbol '" + name + "' in ring " + ring.tag(), pos);
    return ring.elem(*t);
}

RingElem parse_matrix(const Ring& ring, Lexer& lx) {
    std::size_t pos = lx.position();
    RingPtr entry = ring.entry_ring();
    if (!entry) throw ParseError("matrix literal in non-matrix ring " + ring.tag(), pos);
    std::vector<std::vector<RingElem>> rows;
    lx.expect_sym("[");
    do {
        lx.expect_sym("[");
        std::vector<RingElem> row;
        do {
            row.push_back(parse_sum(*entry, lx, nullptr));
        } while (lx.accept_sym(","));
        lx.expect_sym("]");
        rows.push_back(std::move(row));
    } while (lx.accept_sym(","));
    lx.expect_sym("]");
    try {
        return ring.elem(ring.matrix_literal(rows));
    } catch (const RingError& e) {
        throw ParseError(e.what(), pos);
    }
}

RingElem parse_primary(const Ring& ring, Lexer& lx, const ElemDefs* defs) {
    const Token& t = lx.peek();
    if (t.kind == Token::Number) return ring.constant(parse_natural(lx));
    if (lx.peek_sym("(")) {
        lx.next();
        RingElem r = parse_sum(ring, lx, defs);
        lx.expect_sym(")");
        return r;
    }
    if (lx.peek_sym("[")) return parse_matrix(ring, lx);
    if (t.kind == Token::Ident) {
        std::size_t pos = t.pos;
        std::string name = lx.next().text;
        if (defs) {
            auto it = defs->find(name);
            if (it != defs->end()) return it->second;
        }
        if (name == "exp") return from_atom(ring, name, parse_exp_rate(lx), pos);
        if (name == "ln" || name == "log") {
            lx.expect_sym("(");
            expect_ident(lx, "x");
            lx.expect_sym(")");
            return from_atom(ring, "ln", std::nullopt, pos);
        }
        return from_atom(ring, name, std::nullopt, pos);
    }
    throw ParseError(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
}

RingElem divide(const Ring& ring, const RingElem& a, const RingElem& b, std::size_t pos) {
    auto inv = ring.invert(b);
    if (!inv) throw ParseError("'" + b.str() + "' is not invertible in this representation", pos);
    return a * *inv;
}

RingElem parse_product(const Ring& ring, Lexer& lx, const ElemDefs* defs) {
    RingElem r = parse_power(ring, lx, defs);
    while (true) {
        if (lx.accept_sym("*")) {
            r = r * parse_power(ring, lx, defs);
        } else if (lx.peek_sym("/")) {
            std::size_t pos = lx.next().pos;
            r = divide(ring, r, parse_power(ring, lx, defs), pos);
        } else {
            return r;
        }
    }
}

}  // namespace

Const parse_rational(Lexer& lx) {
    bool neg = lx.accept_sym("-");
    Const q = parse_natural(lx);
    if (lx.accept_sym("/")) q /= parse_natural(lx);
    return neg ? -q : q;
}

RingElem parse_power(const Ring& ring, Lexer& lx, const ElemDefs* defs) {
    RingElem base = parse_primary(ring, lx, defs);
    if (!lx.peek_sym("^")) return base;
    std::size_t pos = lx.next().pos;
    bool neg = lx.accept_sym("-");
    Const e = parse_natural(lx);
    unsigned n = static_cast<unsigned>(e.rational().get_num().get_ui());
    RingElem p = base.pow(n);
    if (!neg) return p;
    return divide(ring, ring.one(), p, pos);
}

RingElem parse_sum(const Ring& ring, Lexer& lx, const ElemDefs* defs) {
    bool neg = lx.accept_sym("-");
    if (!neg) lx.accept_sym("+");
    RingElem r = parse_product(ring, lx, defs);
    if (neg) r = -r;
    while (true) {
        if (lx.accept_sym("+")) {
            r += parse_product(ring, lx, defs);
        } else if (lx.accept_sym("-")) {
            r -= parse_product(ring, lx, defs);
        } else {
            return r;
        }
    }
}

bool starts_element(const Ring& ring, const Lexer& lx, const ElemDefs* defs) {
    const Token& t = lx.peek();
    if (t.kind == Token::Number || lx.peek_sym("[")) return true;
    if (t.kind != Token::Ident) return false;
    if (defs && defs->count(t.text)) return true;
    if (t.text == "exp" || t.text == "ln" || t.text == "log") return true;
    return ring.atom(t.text, std::nullopt).has_value();
}

}  // namespace idr
