// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crossctx/error.hpp"
#include "crossctx/python/lexer.hpp"

namespace crossctx::python {

enum class StmtKind {
    FunctionDef,
    ClassDef,
    Import,      // import a.b as c
    ImportFrom,  // from x import y
    Assign,      // plain or annotated assignment
    Expr,        // expression statement made only of string literals
    Simple,      // any other simple statement
    Compound,    // if / for / while / try / with / match ...
};

/// One statement of the concrete syntax tree. Token indices refer to the
/// owning Module's token vector.
struct Statement {
    StmtKind kind = StmtKind::Simple;
    std::size_t first = 0;            // first token of the statement proper
    std::size_t last = 0;             // one past the last header/simple token
    std::size_t decorator_first = 0;  // == first when undecorated
    std::size_t colon = 0;            // compound statements: header colon token
    int indent = 0;
    bool inline_body = false;
    std::vector<Statement> body;
    Position end;  // end of the last token, including the nested body

    bool compound() const noexcept {
        return kind == StmtKind::FunctionDef || kind == StmtKind::ClassDef ||
               kind == StmtKind::Compound;
    }
    bool decorated() const noexcept { return decorator_first != first; }
};

struct ParseOptions {
    /// Accept a compound header with no body at the end of input, as happens
    /// when a file is cut at a completion point.
    bool allow_truncated_block = false;
};

struct Module {
    // Tokens view into *text, so the buffer must not move with the Module.
    std::shared_ptr<const std::string> text;
    std::string path;
    LexResult lex;
    std::vector<Statement> body;

    const Token& token(std::size_t i) const { return lex.tokens[i]; }
    std::span<const Token> tokens(std::size_t first, std::size_t last) const {
        return {lex.tokens.data() + first, last - first};
    }
    Position begin_of(const Statement& s) const { return token(s.decorator_first).begin; }
    std::string_view source() const { return *text; }
    std::string_view slice(std::size_t begin_offset, std::size_t end_offset) const {
        return source().substr(begin_offset, end_offset - begin_offset);
    }
    /// Source text of the statement, decorators and nested body included.
    std::string_view text_of(const Statement& s) const {
        return slice(begin_of(s).offset, s.end.offset);
    }
    /// Header text up to and including the colon; whole text of a simple statement.
    std::string_view header_of(const Statement& s, bool with_decorators = false) const {
        std::size_t b = with_decorators ? begin_of(s).offset : token(s.first).begin.offset;
        std::size_t e = s.compound() ? token(s.colon).end.offset : token(s.last - 1).end.offset;
        return slice(b, e);
    }
};

namespace detail {

inline bool opens(const Token& t) {
    return t.kind == TokenKind::Op && (t.text == "(" || t.text == "[" || t.text == "{");
}
inline bool closes(const Token& t) {
    return t.kind == TokenKind::Op && (t.text == ")" || t.text == "]" || t.text == "}");
}

class TreeBuilder {
public:
    TreeBuilder(Module& m, ParseOptions opts) : m_(m), opts_(opts) {}

    void run() {
        std::size_t li = 0;
        parse_block(li, 0, m_.body);
        if (li < lines().size()) fail(lines()[li].first, "unindent does not match any outer level");
    }

private:
    const std::vector<LogicalLine>& lines() const { return m_.lex.lines; }
    const Token& tok(std::size_t i) const { return m_.lex.tokens[i]; }

    [[noreturn]] void fail(std::size_t token_index, const std::string& what) const {
        const auto& p = tok(token_index).begin;
        throw ParseError(m_.path, p.line, p.col, what);
    }

    void parse_block(std::size_t& li, int indent, std::vector<Statement>& out) {
        while (li < lines().size()) {
            const LogicalLine& line = lines()[li];
            if (line.indent < indent) return;
            if (line.indent > indent) fail(line.first, "unexpected indent");

            std::size_t decorator_first = line.first;
            bool decorated = false;
            while (tok(lines()[li].first).is_op("@")) {
                decorated = true;
                ++li;
                if (li >= lines().size()) fail(lines()[li - 1].first, "decorator without definition");
                if (lines()[li].indent != indent) fail(lines()[li].first, "unexpected indent");
            }
            const LogicalLine& cur = lines()[li];
            auto stmts = split_line(cur.first, cur.last, cur.indent);
            if (decorated) {
                auto& head = stmts.front();
                if (head.kind != StmtKind::FunctionDef && head.kind != StmtKind::ClassDef) {
                    fail(cur.first, "decorator must precede a function or class definition");
                }
                head.decorator_first = decorator_first;
            }
            ++li;
            Statement& last = stmts.back();
            if (last.compound() && !last.inline_body) {
                if (li >= lines().size() || lines()[li].indent <= indent) {
                    if (!(opts_.allow_truncated_block && li >= lines().size())) {
                        fail(cur.last, "expected an indented block");
                    }
                } else {
                    int child = lines()[li].indent;
                    parse_block(li, child, last.body);
                    if (li < lines().size() && lines()[li].indent > indent) {
                        fail(lines()[li].first, "unindent does not match any outer indentation level");
                    }
                }
            }
            for (auto& s : stmts) finish(s);
            for (auto& s : stmts) out.push_back(std::move(s));
        }
    }

    void finish(Statement& s) {
        if (!s.body.empty()) {
            s.end = s.body.back().end;
        } else if (s.compound()) {
            s.end = tok(s.colon).end;
        } else {
            s.end = tok(s.last - 1).end;
        }
    }

    /// Splits one logical line into a compound header plus inline body, or
    /// into `;`-separated simple statements.
    std::vector<Statement> split_line(std::size_t first, std::size_t last, int indent) {
        std::vector<Statement> out;
        if (auto kind = compound_kind(first, last)) {
            Statement s;
            s.kind = *kind;
            s.first = s.decorator_first = first;
            s.indent = indent;
            s.colon = header_colon(first, last);
            s.last = s.colon + 1;
            validate_header(s);
            if (s.colon + 1 < last) {
                s.inline_body = true;
                for (auto& inner : split_simple(s.colon + 1, last, indent)) {
                    finish(inner);
                    s.body.push_back(std::move(inner));
                }
            }
            out.push_back(std::move(s));
            return out;
        }
        return split_simple(first, last, indent);
    }

    std::vector<Statement> split_simple(std::size_t first, std::size_t last, int indent) {
        std::vector<Statement> out;
        int depth = 0;
        std::size_t start = first;
        for (std::size_t i = first; i <= last; ++i) {
            bool boundary = i == last;
            if (!boundary) {
                const Token& t = tok(i);
                if (opens(t)) ++depth;
                else if (closes(t)) --depth;
                else if (depth == 0 && t.is_op(";")) boundary = true;
            }
            if (!boundary) continue;
            if (i > start) {
                Statement s;
                s.first = s.decorator_first = start;
                s.last = i;
                s.indent = indent;
                s.kind = simple_kind(start, i);
                if (tok(start).kind == TokenKind::Name && is_compound_keyword(tok(start).text)) {
                    fail(start, "compound statement not allowed here");
                }
                out.push_back(std::move(s));
            }
            start = i + 1;
        }
        if (out.empty()) fail(first, "invalid syntax");
        return out;
    }

    static bool is_compound_keyword(std::string_view w) {
        for (auto k : {"if", "elif", "else", "for", "while", "try", "except", "finally", "with",
                       "def", "class"}) {
            if (w == k) return true;
        }
        return false;
    }

    std::optional<StmtKind> compound_kind(std::size_t first, std::size_t last) const {
        const Token& t = tok(first);
        if (t.kind != TokenKind::Name) return std::nullopt;
        if (t.text == "def") return StmtKind::FunctionDef;
        if (t.text == "class") return StmtKind::ClassDef;
        if (t.text == "async" && first + 1 < last) {
            const Token& n = tok(first + 1);
            if (n.is_name("def")) return StmtKind::FunctionDef;
            if (n.is_name("for") || n.is_name("with")) return StmtKind::Compound;
            return std::nullopt;
        }
        if (is_compound_keyword(t.text)) return StmtKind::Compound;
        if (t.text == "match" || t.text == "case") {
            // Soft keywords: a header only when followed by an operand and a header colon.
            if (first + 1 >= last) return std::nullopt;
            const Token& n = tok(first + 1);
            if (n.kind == TokenKind::Op && n.text != "(" && n.text != "[" && n.text != "{" &&
                n.text != "-" && n.text != "*") {
                return std::nullopt;
            }
            auto colon = find_header_colon(first, last);
            if (colon && *colon + 1 == last) return StmtKind::Compound;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> find_header_colon(std::size_t first, std::size_t last) const {
        int depth = 0;
        int lambdas = 0;
        for (std::size_t i = first; i < last; ++i) {
            const Token& t = tok(i);
            if (opens(t)) ++depth;
            else if (closes(t)) --depth;
            else if (depth == 0 && t.is_name("lambda")) ++lambdas;
            else if (depth == 0 && t.is_op(":")) {
                if (lambdas > 0) {
                    --lambdas;
                    continue;
                }
                return i;
            }
        }
        return std::nullopt;
    }

    std::size_t header_colon(std::size_t first, std::size_t last) const {
        auto c = find_header_colon(first, last);
        if (!c) fail(last, "expected ':'");
        return *c;
    }

    void validate_header(const Statement& s) const {
        std::size_t i = s.first;
        if (tok(i).is_name("async")) ++i;
        if (s.kind == StmtKind::FunctionDef) {
            if (i + 2 >= s.colon || tok(i + 1).kind != TokenKind::Name || is_keyword(tok(i + 1).text) ||
                !tok(i + 2).is_op("(")) {
                fail(i, "invalid function definition");
            }
        } else if (s.kind == StmtKind::ClassDef) {
            if (i + 1 >= s.colon || tok(i + 1).kind != TokenKind::Name || is_keyword(tok(i + 1).text)) {
                fail(i, "invalid class definition");
            }
        }
    }

    StmtKind simple_kind(std::size_t first, std::size_t last) const {
        const Token& t = tok(first);
        if (t.is_name("import")) return StmtKind::Import;
        if (t.is_name("from")) return StmtKind::ImportFrom;
        bool all_strings = true;
        int depth = 0;
        int lambdas = 0;
        bool assign = false;
        for (std::size_t i = first; i < last; ++i) {
            const Token& x = tok(i);
            if (x.kind != TokenKind::String) all_strings = false;
            if (opens(x)) ++depth;
            else if (closes(x)) --depth;
            else if (depth == 0 && x.is_name("lambda")) ++lambdas;
            else if (depth == 0 && x.is_op("=")) assign = true;
            else if (depth == 0 && x.is_op(":")) {
                if (lambdas > 0) --lambdas;
                else assign = true;
            }
        }
        if (all_strings) return StmtKind::Expr;
        if (assign && !(t.kind == TokenKind::Name && is_keyword(t.text))) return StmtKind::Assign;
        return StmtKind::Simple;
    }

    Module& m_;
    ParseOptions opts_;
};

}  // namespace detail

/// Parses Python source into a statement tree. Throws ParseError.
inline Module parse_module(std::string source, std::string path, ParseOptions opts = {}) {
    Module m;
    m.text = std::make_shared<const std::string>(std::move(source));
    m.path = std::move(path);
    m.lex = lex(*m.text, m.path);
    detail::TreeBuilder(m, opts).run();
    return m;
}

/// The docstring statement of a body, if its first statement is a string literal.
inline const Statement* docstring_of(const std::vector<Statement>& body) {
    if (!body.empty() && body.front().kind == StmtKind::Expr) return &body.front();
    return nullptr;
}

/// Name tokens bound by a plain or annotated assignment's targets, plus the
/// index where the value begins. Attribute and subscript targets yield no names.
struct AssignTargets {
    std::vector<std::size_t> names;
    std::vector<std::pair<std::size_t, std::size_t>> target_ranges;
    bool annotated = false;
};

inline AssignTargets assignment_targets(const Module& m, const Statement& s) {
    AssignTargets out;
    int depth = 0;
    int lambdas = 0;
    std::size_t seg_start = s.first;
    for (std::size_t i = s.first; i < s.last; ++i) {
        const Token& t = m.token(i);
        if (detail::opens(t)) ++depth;
        else if (detail::closes(t)) --depth;
        else if (depth == 0 && t.is_name("lambda")) ++lambdas;
        else if (depth == 0 && t.is_op(":") && out.target_ranges.empty() && lambdas == 0) {
            out.annotated = true;
            out.target_ranges.emplace_back(seg_start, i);
            break;
        } else if (depth == 0 && t.is_op("=")) {
            out.target_ranges.emplace_back(seg_start, i);
            seg_start = i + 1;
        }
    }
    for (auto [b, e] : out.target_ranges) {
        // Accept NAME, or a flat tuple/list of (starred) names.
        std::vector<std::size_t> names;
        bool ok = true;
        for (std::size_t i = b; i < e; ++i) {
            const Token& t = m.token(i);
            if (t.kind == TokenKind::Name && !is_keyword(t.text)) {
                if (i + 1 < e && !(m.token(i + 1).is_op(",") || detail::closes(m.token(i + 1)))) {
                    ok = false;
                    break;
                }
                names.push_back(i);
            } else if (t.is_op(",") || t.is_op("*") || t.is_op("(") || t.is_op("[") ||
                       t.is_op(")") || t.is_op("]")) {
                continue;
            } else {
                ok = false;
                break;
            }
        }
        if (ok) out.names.insert(out.names.end(), names.begin(), names.end());
    }
    return out;
}

}  // namespace crossctx::python
