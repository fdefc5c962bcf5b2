// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crossctx/error.hpp"

namespace crossctx::python {

enum class TokenKind { Name, Number, String, Op, Newline };

struct Position {
    std::uint32_t line = 1;  // 1-based
    std::uint32_t col = 0;   // 0-based byte column
    std::size_t offset = 0;  // byte offset into the source

    friend bool operator==(const Position&, const Position&) = default;
};

struct Token {
    TokenKind kind;
    std::string_view text;
    Position begin;
    Position end;

    bool is_op(std::string_view op) const noexcept { return kind == TokenKind::Op && text == op; }
    bool is_name(std::string_view n) const noexcept { return kind == TokenKind::Name && text == n; }
};

/// Tokens [first, last) of one logical line; `last` indexes its Newline token.
struct LogicalLine {
    std::size_t first = 0;
    std::size_t last = 0;
    int indent = 0;  // tabs expand to the next multiple of 8
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<LogicalLine> lines;
};

inline bool is_keyword(std::string_view s) noexcept {
    static constexpr std::array<std::string_view, 35> kKeywords = {
        "False", "None",   "True",    "and",      "as",       "assert", "async",
        "await", "break",  "class",   "continue", "def",      "del",    "elif",
        "else",  "except", "finally", "for",      "from",     "global", "if",
        "import", "in",    "is",      "lambda",   "nonlocal", "not",    "or",
        "pass",  "raise",  "return",  "try",      "while",    "with",   "yield"};
    for (auto k : kKeywords) {
        if (k == s) return true;
    }
    return false;
}

inline bool is_name_start(unsigned char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

inline bool is_name_char(unsigned char c) noexcept {
    return is_name_start(c) || (c >= '0' && c <= '9');
}

namespace detail {

class Lexer {
public:
    Lexer(std::string_view src, std::string_view path) : src_(src), path_(path) {
        if (src_.starts_with("\xEF\xBB\xBF")) advance(3);
    }

    LexResult run() {
        bool at_line_start = true;
        bool line_open = false;
        while (true) {
            if (at_line_start && brackets_.empty()) {
                int width = 0;
                while (pos_ < src_.size()) {
                    char c = src_[pos_];
                    if (c == ' ') {
                        ++width;
                    } else if (c == '\t') {
                        width = (width / 8 + 1) * 8;
                    } else if (c == '\f') {
                        width = 0;
                    } else {
                        break;
                    }
                    advance(1);
                }
                if (pos_ >= src_.size()) break;
                char c = src_[pos_];
                if (c == '#') {
                    skip_comment();
                    continue;
                }
                if (c == '\n' || c == '\r') {
                    consume_newline();
                    continue;
                }
                if (c == '\\' && continuation_follows()) {
                    fail("unexpected line continuation");
                }
                current_.first = out_.tokens.size();
                current_.indent = width;
                at_line_start = false;
                line_open = true;
            }
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\f') {
                advance(1);
            } else if (c == '#') {
                skip_comment();
            } else if (c == '\\') {
                if (!continuation_follows()) fail("unexpected character after line continuation");
                advance(1);
                consume_newline();
            } else if (c == '\n' || c == '\r') {
                if (!brackets_.empty()) {
                    consume_newline();
                } else {
                    Position p = here();
                    consume_newline();
                    end_line(p);
                    line_open = false;
                    at_line_start = true;
                }
            } else {
                lex_token();
            }
        }
        if (!brackets_.empty()) {
            const auto& open = brackets_.back();
            fail_at(open.pos, std::string("'") + open.ch + "' was never closed");
        }
        if (line_open) end_line(here());
        return std::move(out_);
    }

private:
    struct Bracket {
        char ch;
        Position pos;
    };

    Position here() const noexcept { return {line_, col_, pos_}; }

    [[noreturn]] void fail(const std::string& what) const { fail_at(here(), what); }

    [[noreturn]] void fail_at(Position p, const std::string& what) const {
        throw ParseError(std::string(path_), p.line, p.col, what);
    }

    void advance(std::size_t n) {
        pos_ += n;
        col_ += static_cast<std::uint32_t>(n);
    }

    void consume_newline() {
        if (src_[pos_] == '\r' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++pos_;
        ++pos_;
        ++line_;
        col_ = 0;
    }

    bool continuation_follows() const noexcept {
        std::size_t p = pos_ + 1;
        if (p < src_.size() && src_[p] == '\r') ++p;
        return p < src_.size() ? src_[p] == '\n' : true;
    }

    void skip_comment() {
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') advance(1);
    }

    void end_line(Position p) {
        push(TokenKind::Newline, p, p);
        current_.last = out_.tokens.size() - 1;
        out_.lines.push_back(current_);
    }

    void push(TokenKind kind, Position b, Position e) {
        out_.tokens.push_back(Token{kind, src_.substr(b.offset, e.offset - b.offset), b, e});
    }

    void lex_token() {
        Position b = here();
        auto c = static_cast<unsigned char>(src_[pos_]);
        if (std::size_t plen = string_prefix_length(); plen != std::string_view::npos) {
            bool fstr = src_.substr(pos_, plen).find_first_of("fFtT") != std::string_view::npos;
            advance(plen);
            lex_string(fstr);
            push(TokenKind::String, b, here());
            return;
        }
        if (is_name_start(c)) {
            while (pos_ < src_.size() && is_name_char(static_cast<unsigned char>(src_[pos_]))) {
                advance(1);
            }
            push(TokenKind::Name, b, here());
            return;
        }
        if ((c >= '0' && c <= '9') ||
            (c == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] >= '0' && src_[pos_ + 1] <= '9')) {
            lex_number();
            push(TokenKind::Number, b, here());
            return;
        }
        lex_operator();
        push(TokenKind::Op, b, here());
    }

    /// Length of a string prefix (possibly 0) when a string literal starts at pos_.
    std::size_t string_prefix_length() const noexcept {
        std::size_t p = pos_;
        while (p < src_.size() && p - pos_ < 2 &&
               std::string_view("rRbBuUfFtT").find(src_[p]) != std::string_view::npos) {
            ++p;
        }
        // A longer name like `rt_x` is not a prefix.
        if (p < src_.size() && (src_[p] == '"' || src_[p] == '\'')) return p - pos_;
        return std::string_view::npos;
    }

    void lex_string(bool fstr) {
        const char quote = src_[pos_];
        const bool triple = src_.substr(pos_, 3) == std::string(3, quote);
        Position open = here();
        advance(triple ? 3 : 1);
        while (true) {
            if (pos_ >= src_.size()) fail_at(open, "unterminated string literal");
            char c = src_[pos_];
            if (c == '\\') {
                advance(1);
                if (pos_ >= src_.size()) fail_at(open, "unterminated string literal");
                if (src_[pos_] == '\n' || src_[pos_] == '\r') {
                    consume_newline();
                } else {
                    advance(1);
                }
                continue;
            }
            if (c == '\n' || c == '\r') {
                if (!triple) fail_at(open, "unterminated string literal");
                consume_newline();
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    advance(1);
                    return;
                }
                if (src_.substr(pos_, 3) == std::string(3, quote)) {
                    advance(3);
                    return;
                }
                advance(1);
                continue;
            }
            if (fstr && c == '{') {
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '{') {
                    advance(2);
                    continue;
                }
                advance(1);
                lex_fstring_field();
                continue;
            }
            advance(1);
        }
    }

    /// Skips a replacement field up to and including its closing brace.
    void lex_fstring_field() {
        int depth = 0;
        Position open = here();
        while (true) {
            if (pos_ >= src_.size()) fail_at(open, "unterminated f-string replacement field");
            char c = src_[pos_];
            if (std::size_t plen = string_prefix_length(); plen != std::string_view::npos) {
                bool fstr = src_.substr(pos_, plen).find_first_of("fFtT") != std::string_view::npos;
                advance(plen);
                lex_string(fstr);
                continue;
            }
            if (c == '\n' || c == '\r') {
                consume_newline();
                continue;
            }
            if (c == '{' || c == '(' || c == '[') {
                ++depth;
            } else if (c == ')' || c == ']') {
                --depth;
            } else if (c == '}') {
                if (depth == 0) {
                    advance(1);
                    return;
                }
                --depth;
            }
            advance(1);
        }
    }

    void lex_number() {
        bool hex = src_.substr(pos_, 2) == "0x" || src_.substr(pos_, 2) == "0X";
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (!hex && (c == 'e' || c == 'E') && pos_ + 1 < src_.size() &&
                (src_[pos_ + 1] == '+' || src_[pos_ + 1] == '-')) {
                advance(2);
                continue;
            }
            if (is_name_char(static_cast<unsigned char>(c)) || c == '.') {
                advance(1);
                continue;
            }
            break;
        }
    }

    void lex_operator() {
        static constexpr std::array<std::string_view, 24> kMulti = {
            "**=", "//=", ">>=", "<<=", "...", "!=", "%=", "&=", "**", "*=", "+=", "-=",
            "->",  "//",  "/=",  ":=",  "<<",  "<=", "==", ">=", ">>", "@=", "^=", "|="};
        for (auto op : kMulti) {
            if (src_.substr(pos_, op.size()) == op) {
                advance(op.size());
                return;
            }
        }
        char c = src_[pos_];
        if (c == '(' || c == '[' || c == '{') {
            brackets_.push_back({c, here()});
        } else if (c == ')' || c == ']' || c == '}') {
            if (brackets_.empty()) fail(std::string("unmatched '") + c + "'");
            char open = brackets_.back().ch;
            char want = open == '(' ? ')' : open == '[' ? ']' : '}';
            if (c != want) {
                fail(std::string("closing parenthesis '") + c + "' does not match '" + open + "'");
            }
            brackets_.pop_back();
        } else if (std::string_view(",:;.+-*/%&|^~<>=@").find(c) == std::string_view::npos) {
            fail(std::string("invalid character '") + c + "'");
        }
        advance(1);
    }

    std::string_view src_;
    std::string_view path_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 0;
    std::vector<Bracket> brackets_;
    LogicalLine current_;
    LexResult out_;
};

}  // namespace detail

/// Tokenizes Python source into logical lines. Comments and blank lines are
/// dropped; bracketed and backslash continuations are joined.
inline LexResult lex(std::string_view source, std::string_view path = "<source>") {
    return detail::Lexer(source, path).run();
}

}  // namespace crossctx::python
