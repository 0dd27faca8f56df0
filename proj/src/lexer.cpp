#include "idring/lexer.hpp"

#include <cctype>

namespace idr {

Lexer::Lexer(const std::string& src) {
    std::size_t i = 0;
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isdigit(c)) {
            t.kind = Token::Number;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) t.text += src[i++];
        } else if (std::isalpha(c) || c == '_') {
            t.kind = Token::Ident;
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                t.text += src[i++];
        } else if (std::string("+-*/^()[],:=").find(static_cast<char>(c)) != std::string::npos) {
            t.kind = Token::Sym;
            t.text = std::string(1, static_cast<char>(c));
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", i);
        }
        toks_.push_back(std::move(t));
    }
    Token end;
    end.pos = src.size();
    toks_.push_back(end);
}

const Token& Lexer::peek(std::size_t ahead) const {
    std::size_t j = i_ + ahead;
    return j < toks_.size() ? toks_[j] : toks_.back();
}

Token Lexer::next() {
    Token t = peek();
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
}

bool Lexer::peek_sym(const std::string& s, std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Sym && t.text == s;
}

bool Lexer::peek_ident(const std::string& s, std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Ident && t.text == s;
}

bool Lexer::accept_sym(const std::string& s) {
    if (!peek_sym(s)) return false;
    next();
    return true;
}

void Lexer::expect_sym(const std::string& s) {
    if (!accept_sym(s)) {
        const Token& t = peek();
        throw ParseError("expected '" + s + "' but found '" + (t.kind == Token::End ? "end of input" : t.text) + "'", t.pos);
    }
}

}  // namespace idr
