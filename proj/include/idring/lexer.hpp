#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace idr {

struct Token {
    enum Kind { Number, Ident, Sym, End } kind = End;
    std::string text;
    std::size_t pos = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t pos() const { return pos_; }

private:
    std::size_t pos_;
};

/// Whitespace-insensitive tokenizer shared by the element and operator grammars.
class Lexer {
public:
    explicit Lexer(const std::string& src);

    const Token& peek(std::size_t ahead = 0) const;
    Token next();
    bool at_end() const { return peek().kind == Token::End; }
    bool accept_sym(const std::string& s);
    void expect_sym(const std::string& s);
    bool peek_sym(const std::string& s, std::size_t ahead = 0) const;
    bool peek_ident(const std::string& s, std::size_t ahead = 0) const;
    std::size_t position() const { return peek().pos; }
    std::size_t mark() const { return i_; }
    void reset(std::size_t m) { i_ = m; }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

}  // namespace idr
