// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crossctx/context_graph.hpp"
#include "crossctx/entity.hpp"
#include "crossctx/error.hpp"
#include "crossctx/project_files.hpp"
#include "crossctx/python/syntax.hpp"

namespace crossctx {

/// An import statement as written, before resolution against the project.
struct RawImport {
    int level = 0;                      // leading dots of a relative import
    std::string module;                 // dotted module as written (may be empty)
    std::optional<std::string> symbol;  // from-import name, or "*"
    std::optional<std::string> alias;
    bool from_form = false;
    SourceSpan span;
};

/// A resolved project-local import.
struct ImportRef {
    std::string module_path;            // project-relative dotted module (a locale)
    std::optional<std::string> symbol;  // for from-imports; "*" for star imports
    std::optional<std::string> alias;
    SourceSpan span;
    std::string binding;  // name bound in the importing module ("*" for star imports)
    std::string target;   // locale the binding denotes

    friend bool operator==(const ImportRef&, const ImportRef&) = default;
};

struct ImportOptions {
    /// Also report imports made inside function bodies.
    bool include_function_imports = false;
};

/// Per-file import counts for the diagnostics report.
struct ImportDiagnostics {
    std::string path;
    std::size_t local = 0;
    std::size_t non_local = 0;   // absolute imports naming nothing in the project
    std::size_t unresolved = 0;  // relative or project-prefixed imports that point nowhere
    std::vector<std::string> unresolved_names;
};

/// The set of importable project modules and which of them are package initializers.
class ModuleIndex {
public:
    ModuleIndex() = default;

    void add_file(const std::string& path) {
        auto loc = Locale{module_segments(path)}.str();
        if (is_package_initializer(path)) packages_.insert(loc);
        // A package initializer shadows a same-named sibling module.
        if (modules_.contains(loc) && !is_package_initializer(path)) return;
        modules_[loc] = path;
        for (auto p = Locale::parse(loc).parent(); p && !p->empty(); p = p->parent()) {
            prefixes_.insert(p->str());
        }
    }

    static ModuleIndex from_paths(const std::vector<std::string>& paths) {
        ModuleIndex idx;
        for (const auto& p : paths) idx.add_file(p);
        return idx;
    }

    static ModuleIndex scan(const std::filesystem::path& root) {
        return from_paths(list_source_files(root));
    }

    static ModuleIndex from_graph(const ContextGraph& g) {
        ModuleIndex idx;
        for (const auto& n : g.nodes()) {
            if (n.kind == EntityKind::File) idx.add_file(n.span.file_path);
        }
        return idx;
    }

    std::optional<std::string> file_of(const std::string& module) const {
        auto it = modules_.find(module);
        if (it == modules_.end()) return std::nullopt;
        return it->second;
    }
    bool has_module(const std::string& module) const { return modules_.contains(module); }
    bool is_package(const std::string& module) const { return packages_.contains(module); }
    /// True when some module lives underneath `prefix` (e.g. a namespace package).
    bool has_prefix(const std::string& prefix) const {
        return prefixes_.contains(prefix) || modules_.contains(prefix);
    }
    const std::map<std::string, std::string>& modules() const noexcept { return modules_; }

private:
    std::map<std::string, std::string> modules_;  // locale -> path
    std::set<std::string> packages_;
    std::set<std::string> prefixes_;
};

namespace detail {

inline std::string join_dotted(const std::vector<std::string>& segs, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n && i < segs.size(); ++i) {
        if (i) out += '.';
        out += segs[i];
    }
    return out;
}

inline std::string concat_module(const std::string& a, const std::string& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return a + "." + b;
}

inline void parse_import_statement(const python::Module& m, const python::Statement& s,
                                   std::vector<RawImport>& out) {
    using python::TokenKind;
    auto span = SourceSpan{m.path, m.token(s.first).begin.line, m.token(s.first).begin.col,
                           m.token(s.last - 1).end.line, m.token(s.last - 1).end.col};
    std::size_t i = s.first + 1;
    auto dotted = [&](std::size_t& k) {
        std::string name;
        while (k < s.last && m.token(k).kind == TokenKind::Name && !m.token(k).is_name("import")) {
            name += m.token(k).text;
            ++k;
            if (k < s.last && m.token(k).is_op(".")) {
                name += '.';
                ++k;
            } else {
                break;
            }
        }
        return name;
    };
    auto alias_at = [&](std::size_t& k) -> std::optional<std::string> {
        if (k + 1 < s.last && m.token(k).is_name("as") && m.token(k + 1).kind == TokenKind::Name) {
            k += 2;
            return std::string(m.token(k - 1).text);
        }
        return std::nullopt;
    };

    if (s.kind == python::StmtKind::Import) {
        while (i < s.last) {
            RawImport r;
            r.span = span;
            r.module = dotted(i);
            r.alias = alias_at(i);
            if (!r.module.empty()) out.push_back(std::move(r));
            while (i < s.last && !m.token(i).is_op(",")) ++i;
            ++i;
        }
        return;
    }

    RawImport base;
    base.span = span;
    base.from_form = true;
    while (i < s.last && (m.token(i).is_op(".") || m.token(i).is_op("..."))) {
        base.level += static_cast<int>(m.token(i).text.size());
        ++i;
    }
    base.module = dotted(i);
    if (i >= s.last || !m.token(i).is_name("import")) return;
    ++i;
    while (i < s.last) {
        const auto& t = m.token(i);
        if (t.is_op("(") || t.is_op(")") || t.is_op(",")) {
            ++i;
            continue;
        }
        if (t.is_op("*")) {
            RawImport r = base;
            r.symbol = "*";
            out.push_back(std::move(r));
            ++i;
            continue;
        }
        if (t.kind == TokenKind::Name) {
            RawImport r = base;
            r.symbol = std::string(t.text);
            ++i;
            r.alias = alias_at(i);
            out.push_back(std::move(r));
            continue;
        }
        ++i;
    }
}

inline void collect_raw_imports(const python::Module& m, const std::vector<python::Statement>& body,
                                const ImportOptions& opts, std::vector<RawImport>& out) {
    for (const auto& s : body) {
        if (s.kind == python::StmtKind::Import || s.kind == python::StmtKind::ImportFrom) {
            parse_import_statement(m, s, out);
        } else if (s.kind == python::StmtKind::FunctionDef) {
            if (opts.include_function_imports) collect_raw_imports(m, s.body, opts, out);
        } else if (!s.body.empty()) {
            collect_raw_imports(m, s.body, opts, out);
        }
    }
}

}  // namespace detail

/// Every import statement of a parsed module in source order. Imports inside
/// conditional and try blocks are included; function-body imports only on request.
inline std::vector<RawImport> raw_imports(const python::Module& m, const ImportOptions& opts = {}) {
    std::vector<RawImport> out;
    detail::collect_raw_imports(m, m.body, opts, out);
    return out;
}

enum class ImportClass { Local, NonLocal, Unresolved };

/// Resolves one import written in `importing_path` against the project modules.
/// Absolute imports are tried from the project root first, then from each
/// enclosing directory of the importing file, nearest first.
inline std::pair<ImportClass, std::optional<ImportRef>> resolve_import(const RawImport& raw,
                                                                      std::string_view importing_path,
                                                                      const ModuleIndex& index) {
    auto segs = module_segments(importing_path);
    std::vector<std::string> bases;
    if (raw.level > 0) {
        // The package of a regular module is its parent; an initializer is its own package.
        bool own_package = is_package_initializer(importing_path) && segs.front() != "__init__";
        std::size_t package_len = own_package ? segs.size() : segs.size() - 1;
        if (static_cast<std::size_t>(raw.level - 1) > package_len) return {ImportClass::Unresolved, std::nullopt};
        bases.push_back(detail::join_dotted(segs, package_len - (raw.level - 1)));
    } else {
        bases.emplace_back();
        // The directory of an initializer is its package.
        std::vector<std::string> dir(segs.begin(), segs.end());
        if (!is_package_initializer(importing_path) || dir.front() == "__init__") dir.pop_back();
        for (std::size_t n = dir.size(); n > 0; --n) bases.push_back(detail::join_dotted(dir, n));
    }

    auto local = [&](std::string module, std::optional<std::string> symbol, std::string binding,
                     std::string target) {
        return std::pair{ImportClass::Local,
                         std::optional<ImportRef>{ImportRef{std::move(module), std::move(symbol), raw.alias,
                                                            raw.span, std::move(binding), std::move(target)}}};
    };
    for (const auto& base : bases) {
        std::string module = detail::concat_module(base, raw.module);
        if (!raw.from_form) {
            if (!index.has_module(module)) continue;
            // `import a.b` binds `a`; `import a.b as c` binds `c` to a.b.
            if (raw.alias) return local(module, std::nullopt, *raw.alias, module);
            std::string top = raw.module.substr(0, raw.module.find('.'));
            return local(module, std::nullopt, top, detail::concat_module(base, top));
        }
        std::string name = raw.alias ? *raw.alias : raw.symbol.value_or("");
        if (!module.empty() && index.has_module(module)) {
            std::string target = *raw.symbol == "*" ? module : module + "." + *raw.symbol;
            return local(module, raw.symbol, name, target);
        }
        if (raw.symbol && *raw.symbol != "*") {
            std::string sub = detail::concat_module(module, *raw.symbol);
            if (index.has_module(sub)) return local(sub, std::nullopt, name, sub);
        }
    }

    if (raw.level > 0) return {ImportClass::Unresolved, std::nullopt};
    std::string top = raw.module.substr(0, raw.module.find('.'));
    for (const auto& base : bases) {
        if (!top.empty() && index.has_prefix(detail::concat_module(base, top))) {
            return {ImportClass::Unresolved, std::nullopt};
        }
    }
    return {ImportClass::NonLocal, std::nullopt};
}

inline std::vector<ImportRef> get_local_import_stmts(const python::Module& m, const ModuleIndex& index,
                                                     const ImportOptions& opts = {},
                                                     ImportDiagnostics* diag = nullptr) {
    std::vector<ImportRef> out;
    if (diag) diag->path = m.path;
    for (const auto& raw : raw_imports(m, opts)) {
        auto [cls, ref] = resolve_import(raw, m.path, index);
        if (diag) {
            if (cls == ImportClass::Local) ++diag->local;
            else if (cls == ImportClass::NonLocal) ++diag->non_local;
            else {
                ++diag->unresolved;
                diag->unresolved_names.push_back(std::string(raw.level, '.') + raw.module +
                                                 (raw.symbol ? ":" + *raw.symbol : ""));
            }
        }
        if (ref) out.push_back(std::move(*ref));
    }
    return out;
}

/// Project-local imports of a file. Standard-library and third-party imports
/// are dropped; relative imports come back as absolute project module paths.
/// A source that ends in an unfinished block (a completion prefix) is accepted.
inline std::vector<ImportRef> get_local_import_stmts(std::string_view source, std::string_view path,
                                                     const ModuleIndex& index,
                                                     const ImportOptions& opts = {},
                                                     ImportDiagnostics* diag = nullptr) {
    auto m = python::parse_module(std::string(source), std::string(path),
                                  python::ParseOptions{.allow_truncated_block = true});
    return get_local_import_stmts(m, index, opts, diag);
}

inline std::vector<ImportRef> get_local_import_stmts(std::string_view source, std::string_view path,
                                                     const std::filesystem::path& project_root,
                                                     const ImportOptions& opts = {},
                                                     ImportDiagnostics* diag = nullptr) {
    return get_local_import_stmts(source, path, ModuleIndex::scan(project_root), opts, diag);
}

/// The graph node an import anchors on, or nullopt when nothing matches.
inline std::optional<NodeId> try_locate_node(const ContextGraph& g, const ImportRef& ref) {
    if (!ref.symbol || *ref.symbol == "*") {
        auto id = g.find(ref.module_path);
        if (id && g.node(*id).kind == EntityKind::File) return id;
        return std::nullopt;
    }
    std::string qualified = ref.module_path + "." + *ref.symbol;
    if (auto id = g.find(qualified)) return id;

    auto file = g.find(ref.module_path);
    if (!file || g.node(*file).kind != EntityKind::File ||
        !is_package_initializer(g.node(*file).span.file_path)) {
        return std::nullopt;
    }
    auto table = g.reexports().find(ref.module_path);
    if (table == g.reexports().end()) return std::nullopt;
    std::optional<std::string> target;
    if (auto it = table->second.find(*ref.symbol); it != table->second.end()) {
        target = it->second;
    } else if (auto star = table->second.find("*"); star != table->second.end()) {
        std::string candidate = star->second + "." + *ref.symbol;
        if (g.find(candidate)) target = candidate;
    }
    if (!target) return std::nullopt;
    if (auto id = g.find(*target)) return id;
    // Longer re-export chains stop at the initializer.
    return file;
}

/// The node an import anchors on. Throws NodeNotFound.
inline NodeId locate_node(const ContextGraph& g, const ImportRef& ref) {
    if (auto id = try_locate_node(g, ref)) return *id;
    throw NodeNotFound("no graph node for import of " + ref.module_path +
                       (ref.symbol ? "." + *ref.symbol : std::string{}));
}

}  // namespace crossctx
