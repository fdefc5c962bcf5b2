// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crossctx/entity.hpp"
#include "crossctx/python/syntax.hpp"

namespace crossctx {

/// Entities of one file plus their containment: `parent[i]` is the index of
/// the class owning entities[i] (member functions), if any. entities[0] is
/// always the File entity.
struct ParsedFile {
    std::string path;
    Locale module;
    std::vector<ProjectEntity> entities;
    std::vector<std::optional<std::size_t>> parent;
};

/// Removes up to `col` leading blanks from every line after the first.
inline std::string dedent(std::string_view text, std::size_t col) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    bool first = true;
    while (i <= text.size()) {
        auto nl = text.find('\n', i);
        auto line = text.substr(i, nl == std::string_view::npos ? std::string_view::npos : nl - i);
        if (!first) {
            std::size_t k = 0;
            while (k < col && k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
            line.remove_prefix(k);
        }
        out.append(line);
        if (nl == std::string_view::npos) break;
        out.push_back('\n');
        i = nl + 1;
        first = false;
    }
    return out;
}

/// Prefixes every non-blank line.
inline std::string indent_lines(std::string_view text, std::string_view prefix) {
    std::string out;
    std::size_t i = 0;
    while (i <= text.size()) {
        auto nl = text.find('\n', i);
        auto line = text.substr(i, nl == std::string_view::npos ? std::string_view::npos : nl - i);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) out.append(prefix);
        out.append(line);
        if (nl == std::string_view::npos) break;
        out.push_back('\n');
        i = nl + 1;
    }
    return out;
}

/// Raw source text covered by a span (end column exclusive).
inline std::string_view span_text(std::string_view source, const SourceSpan& span) {
    auto offset_of = [&](std::uint32_t line, std::uint32_t col) -> std::size_t {
        std::size_t off = 0;
        for (std::uint32_t l = 1; l < line; ++l) {
            auto nl = source.find('\n', off);
            if (nl == std::string_view::npos) return source.size();
            off = nl + 1;
        }
        return std::min(off + col, source.size());
    };
    std::size_t b = offset_of(span.start_line, span.start_col);
    std::size_t e = offset_of(span.end_line, span.end_col);
    return e > b ? source.substr(b, e - b) : std::string_view{};
}

namespace detail {

inline SourceSpan make_span(std::string_view path, python::Position b, python::Position e) {
    return SourceSpan{std::string(path), b.line, b.col, e.line, e.col};
}

inline python::Position end_of_source(std::string_view src) {
    python::Position p;
    for (char c : src) {
        if (c == '\n') {
            ++p.line;
            p.col = 0;
        } else {
            ++p.col;
        }
    }
    p.offset = src.size();
    return p;
}

inline std::string statement_block(const python::Module& m, const python::Statement& s,
                                   std::string_view indent) {
    auto col = m.token(s.first).begin.col;
    return indent_lines(dedent(m.text_of(s), col), indent);
}

/// First parameter name of a function definition (the receiver of a method).
inline std::optional<std::string_view> first_parameter(const python::Module& m,
                                                       const python::Statement& def) {
    for (std::size_t i = def.first; i + 1 < def.colon; ++i) {
        if (m.token(i).is_op("(")) {
            const auto& t = m.token(i + 1);
            if (t.kind == python::TokenKind::Name) return t.text;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline void collect_receiver_assignments(const python::Module& m,
                                         const std::vector<python::Statement>& body,
                                         std::string_view receiver,
                                         std::vector<const python::Statement*>& out) {
    for (const auto& s : body) {
        if (s.kind == python::StmtKind::FunctionDef || s.kind == python::StmtKind::ClassDef) continue;
        if (s.kind == python::StmtKind::Assign) {
            auto targets = python::assignment_targets(m, s);
            bool hit = false;
            for (auto [b, e] : targets.target_ranges) {
                for (std::size_t i = b; i + 2 < e; ++i) {
                    bool at_element_start = i == b || m.token(i - 1).is_op(",") ||
                                            m.token(i - 1).is_op("(") || m.token(i - 1).is_op("[");
                    if (at_element_start && m.token(i).is_name(receiver) &&
                        m.token(i + 1).is_op(".") && m.token(i + 2).kind == python::TokenKind::Name) {
                        hit = true;
                        break;
                    }
                }
                if (hit) break;
            }
            if (hit) out.push_back(&s);
        }
        if (!s.body.empty()) collect_receiver_assignments(m, s.body, receiver, out);
    }
}

inline std::string_view def_name(const python::Module& m, const python::Statement& s) {
    std::size_t i = s.first;
    if (m.token(i).is_name("async")) ++i;
    return m.token(i + 1).text;
}

}  // namespace detail

/// Class entity text: decorators and signature, docstring, class-level
/// assignments and annotations, and receiver attribute assignments made in
/// the constructor. Member function bodies are excluded.
inline std::string extract_class_text(const python::Module& m, const python::Statement& cls) {
    std::string out = dedent(m.header_of(cls, true), m.begin_of(cls).col);
    std::vector<const python::Statement*> parts;
    const python::Statement* ctor = nullptr;
    for (std::size_t i = 0; i < cls.body.size(); ++i) {
        const auto& s = cls.body[i];
        if (i == 0 && s.kind == python::StmtKind::Expr) parts.push_back(&s);
        else if (s.kind == python::StmtKind::Assign) parts.push_back(&s);
        else if (s.kind == python::StmtKind::FunctionDef && detail::def_name(m, s) == "__init__") ctor = &s;
    }
    if (ctor) {
        auto receiver = detail::first_parameter(m, *ctor);
        if (receiver) detail::collect_receiver_assignments(m, ctor->body, *receiver, parts);
    }
    for (const auto* s : parts) {
        out.push_back('\n');
        out += detail::statement_block(m, *s, "    ");
    }
    return out;
}

/// Extracts the File entity and all top-level classes, functions, member
/// functions and module-level assignments of an already parsed module.
/// Entity ids are left at 0; the graph builder assigns them.
inline ParsedFile analyze_module(const python::Module& m) {
    using python::StmtKind;
    ParsedFile pf;
    pf.path = m.path;
    pf.module = Locale{module_segments(m.path)};

    struct Pending {
        ProjectEntity entity;
        std::optional<std::size_t> parent;
        std::size_t offset = 0;
        bool dropped = false;
    };
    std::vector<Pending> pending;
    std::map<std::string, std::vector<std::size_t>, std::less<>> top_level;  // name -> pending indices

    auto drop_top_level = [&](const std::string& name) {
        auto it = top_level.find(name);
        if (it == top_level.end()) return;
        for (auto idx : it->second) pending[idx].dropped = true;
        top_level.erase(it);
    };

    auto add = [&](EntityKind kind, Locale locale, std::string name, std::string text,
                   std::string signature, SourceSpan span, std::size_t offset,
                   std::optional<std::size_t> parent) {
        Pending p;
        p.entity.kind = kind;
        p.entity.locale = std::move(locale);
        p.entity.name = std::move(name);
        p.entity.text = std::move(text);
        p.entity.signature = std::move(signature);
        p.entity.span = std::move(span);
        p.parent = parent;
        p.offset = offset;
        pending.push_back(std::move(p));
        return pending.size() - 1;
    };

    for (const auto& s : m.body) {
        auto begin = m.begin_of(s);
        if (s.kind == StmtKind::FunctionDef) {
            std::string name(detail::def_name(m, s));
            drop_top_level(name);
            auto idx = add(EntityKind::Function, pf.module.child(name), name,
                           dedent(m.text_of(s), begin.col), dedent(m.header_of(s, true), begin.col),
                           detail::make_span(m.path, begin, s.end), begin.offset, std::nullopt);
            top_level[name] = {idx};
        } else if (s.kind == StmtKind::ClassDef) {
            std::string name(m.token(s.first + 1).text);
            drop_top_level(name);
            Locale cls_locale = pf.module.child(name);
            auto cls = add(EntityKind::Class, cls_locale, name, extract_class_text(m, s),
                           dedent(m.header_of(s, true), begin.col),
                           detail::make_span(m.path, begin, s.end), begin.offset, std::nullopt);
            std::vector<std::size_t> group{cls};
            std::map<std::string, std::size_t, std::less<>> methods;
            for (const auto& member : s.body) {
                if (member.kind != StmtKind::FunctionDef) continue;
                auto mb = m.begin_of(member);
                std::string mname(detail::def_name(m, member));
                if (auto it = methods.find(mname); it != methods.end()) {
                    pending[it->second].dropped = true;
                }
                auto idx = add(EntityKind::Function, cls_locale.child(mname), mname,
                               dedent(m.text_of(member), mb.col),
                               dedent(m.header_of(member, true), mb.col),
                               detail::make_span(m.path, mb, member.end), mb.offset, cls);
                methods[mname] = idx;
                group.push_back(idx);
            }
            top_level[name] = std::move(group);
        } else if (s.kind == StmtKind::Assign) {
            auto targets = python::assignment_targets(m, s);
            for (auto ti : targets.names) {
                std::string name(m.token(ti).text);
                drop_top_level(name);
                auto idx = add(EntityKind::GlobalVar, pf.module.child(name), name,
                               dedent(m.text_of(s), begin.col), name,
                               detail::make_span(m.path, begin, s.end), begin.offset, std::nullopt);
                top_level[name] = {idx};
            }
        }
    }

    ProjectEntity file;
    file.kind = EntityKind::File;
    file.locale = pf.module;
    file.name = pf.module.segments().back();
    file.signature = m.path;
    file.text = m.path;
    if (const auto* doc = python::docstring_of(m.body)) {
        file.text += '\n';
        file.text += m.text_of(*doc);
    }
    file.span = detail::make_span(m.path, python::Position{}, detail::end_of_source(m.source()));
    file.file_order_index = 0;

    // Survivors in source order; emission order breaks ties between names
    // bound by one statement.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < pending.size(); ++i) {
        if (!pending[i].dropped) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return pending[a].offset < pending[b].offset; });

    std::vector<std::optional<std::size_t>> remap(pending.size());
    pf.entities.push_back(std::move(file));
    pf.parent.push_back(std::nullopt);
    for (auto i : order) {
        remap[i] = pf.entities.size();
        auto& p = pending[i];
        p.entity.file_order_index = static_cast<std::uint32_t>(pf.entities.size());
        pf.entities.push_back(std::move(p.entity));
        pf.parent.push_back(p.parent ? remap[*p.parent] : std::nullopt);
    }
    return pf;
}

inline ParsedFile analyze_file(std::string_view path, std::string_view source) {
    if (!is_project_relative(path)) {
        throw std::invalid_argument("path is not project-relative: " + std::string(path));
    }
    return analyze_module(python::parse_module(std::string(source), std::string(path)));
}

/// One File entity plus one entity per top-level class, top-level function,
/// member function and module-level assignment target. Throws ParseError.
inline std::vector<ProjectEntity> parse_file(std::string_view path, std::string_view source) {
    return analyze_file(path, source).entities;
}

}  // namespace crossctx
