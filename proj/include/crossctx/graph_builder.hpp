// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "crossctx/context_graph.hpp"
#include "crossctx/error.hpp"
#include "crossctx/import_resolver.hpp"
#include "crossctx/project_files.hpp"
#include "crossctx/source_parser.hpp"

namespace crossctx {

struct SourceFile {
    std::string path;  // project-relative, '/'-separated
    std::string source;
};

struct BuildOptions {
    std::size_t max_nodes = 5000;
    /// Parser threads; 0 picks the hardware concurrency.
    unsigned threads = 1;
    ImportOptions imports;
};

struct SkippedFile {
    std::string path;
    std::string message;
};

/// Side information gathered while building: files that failed to parse,
/// entities dropped for locale collisions, and per-file import counts.
struct BuildReport {
    std::vector<SkippedFile> skipped;
    std::vector<std::string> dropped;
    std::vector<ImportDiagnostics> imports;
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

namespace detail {

struct ParsedUnit {
    python::Module module;
    ParsedFile parsed;
};

inline std::vector<std::variant<ParsedUnit, SkippedFile>> parse_all(const std::vector<SourceFile>& files,
                                                                     unsigned threads) {
    std::vector<std::variant<ParsedUnit, SkippedFile>> out(files.size());
    auto work = [&](std::size_t i) {
        try {
            auto m = python::parse_module(files[i].source, files[i].path);
            auto pf = analyze_module(m);
            out[i] = ParsedUnit{std::move(m), std::move(pf)};
        } catch (const ParseError& e) {
            out[i] = SkippedFile{files[i].path, e.what()};
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, files.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < files.size(); ++i) work(i);
        return out;
    }
    // Strided split; each slot is written by exactly one worker.
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < files.size(); i += threads) work(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace detail

/// Builds the project context graph from in-memory sources. Files are
/// processed in path order; node ids follow (path, file_order_index).
/// Throws GraphTooLarge and EmptyProject.
inline ContextGraph build_graph_from_sources(std::vector<SourceFile> files, std::string project_root = {},
                                             const BuildOptions& opts = {}, BuildReport* report = nullptr) {
    BuildReport local_report;
    BuildReport& rep = report ? *report : local_report;
    rep = {};

    for (const auto& f : files) {
        if (!is_project_relative(f.path)) {
            throw std::invalid_argument("path is not project-relative: " + f.path);
        }
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    auto results = detail::parse_all(files, opts.threads);

    std::vector<detail::ParsedUnit*> units;
    for (auto& r : results) {
        if (auto* u = std::get_if<detail::ParsedUnit>(&r)) units.push_back(u);
        else rep.skipped.push_back(std::get<SkippedFile>(r));
    }
    if (units.empty()) throw EmptyProject("no parseable source file under " + project_root);

    // A package initializer claims its locale before a same-named module file.
    std::map<std::string, detail::ParsedUnit*> file_owner;
    for (auto* u : units) {
        auto loc = u->parsed.module.str();
        auto [it, inserted] = file_owner.emplace(loc, u);
        if (!inserted && is_package_initializer(u->parsed.path)) {
            rep.dropped.push_back(it->second->parsed.path + " (shadowed by " + u->parsed.path + ")");
            it->second = u;
        } else if (!inserted) {
            rep.dropped.push_back(u->parsed.path + " (shadowed by " + it->second->parsed.path + ")");
        }
    }
    std::erase_if(units, [&](auto* u) { return file_owner.at(u->parsed.module.str()) != u; });

    std::set<std::string> taken;
    for (auto* u : units) taken.insert(u->parsed.module.str());

    // Entities whose locale collides with a file (or an earlier entity) are
    // dropped together with their members.
    std::vector<std::vector<bool>> keep(units.size());
    std::size_t total = 1 + units.size();
    for (std::size_t f = 0; f < units.size(); ++f) {
        const auto& pf = units[f]->parsed;
        keep[f].assign(pf.entities.size(), true);
        for (std::size_t i = 1; i < pf.entities.size(); ++i) {
            bool parent_dropped = pf.parent[i] && !keep[f][*pf.parent[i]];
            auto loc = pf.entities[i].locale.str();
            if (parent_dropped || !taken.insert(loc).second) {
                keep[f][i] = false;
                rep.dropped.push_back(loc + " (" + pf.path + ")");
                continue;
            }
            ++total;
        }
    }
    if (total > opts.max_nodes) throw GraphTooLarge(total, opts.max_nodes);

    ContextGraph g(std::move(project_root));
    std::vector<std::vector<NodeId>> ids(units.size());
    // Step 1: Root -> File. Each file is followed by its members.
    for (std::size_t f = 0; f < units.size(); ++f) {
        const auto& pf = units[f]->parsed;
        ids[f].assign(pf.entities.size(), 0);
        ids[f][0] = g.add_node(pf.entities[0]);
        g.add_edge(g.root_id(), EdgeType::ProjectFile, ids[f][0]);
        for (std::size_t i = 1; i < pf.entities.size(); ++i) {
            if (keep[f][i]) ids[f][i] = g.add_node(pf.entities[i]);
        }
    }

    // Step 2: file-to-file import links and initializer re-exports.
    std::vector<std::string> paths;
    for (auto* u : units) paths.push_back(u->parsed.path);
    auto index = ModuleIndex::from_paths(paths);
    std::vector<std::vector<ImportRef>> refs(units.size());
    for (std::size_t f = 0; f < units.size(); ++f) {
        ImportDiagnostics diag;
        refs[f] = get_local_import_stmts(units[f]->module, index, opts.imports, &diag);
        rep.imports.push_back(std::move(diag));
        const auto& path = units[f]->parsed.path;
        if (!is_package_initializer(path)) continue;
        auto module = units[f]->parsed.module.str();
        for (const auto& r : refs[f]) {
            if (r.binding == "*") g.add_reexport(module, "*", r.module_path);
            else if (!r.binding.empty()) g.add_reexport(module, r.binding, r.target);
        }
    }
    for (std::size_t f = 0; f < units.size(); ++f) {
        NodeId self = ids[f][0];
        auto link = [&](std::optional<NodeId> id) {
            if (!id) return;
            // Anchors sit inside some file; climb to it.
            const auto& n = g.node(*id);
            auto file = g.find(Locale{module_segments(n.span.file_path)});
            if (file && *file != self && g.node(*file).kind == EntityKind::File) {
                g.add_edge(self, EdgeType::Import, *file);
            }
        };
        for (const auto& r : refs[f]) {
            link(g.find(r.module_path));
            link(try_locate_node(g, r));
        }
    }

    // Step 3: intra-file hierarchy.
    for (std::size_t f = 0; f < units.size(); ++f) {
        const auto& pf = units[f]->parsed;
        NodeId file = ids[f][0];
        for (std::size_t i = 1; i < pf.entities.size(); ++i) {
            if (!keep[f][i]) continue;
            NodeId id = ids[f][i];
            if (pf.parent[i]) {
                g.add_edge(ids[f][*pf.parent[i]], EdgeType::MemberFunction, id);
                continue;
            }
            EdgeType fwd = EdgeType::GlobalVar;
            switch (pf.entities[i].kind) {
                case EntityKind::Class: fwd = EdgeType::Class; break;
                case EntityKind::Function: fwd = EdgeType::Function; break;
                default: break;
            }
            g.add_edge(file, fwd, id);
            g.add_edge(id, *reverse_of(fwd), file);
        }
    }
    rep.nodes = g.node_count();
    rep.edges = g.edge_count();
    return g;
}

/// Reads every Python source under `project_root` and builds its graph.
inline ContextGraph build_graph(const std::filesystem::path& project_root, const BuildOptions& opts = {},
                                BuildReport* report = nullptr) {
    std::vector<SourceFile> files;
    for (auto& rel : list_source_files(project_root)) {
        files.push_back({rel, read_text_file(project_root / rel)});
    }
    return build_graph_from_sources(std::move(files), project_root.generic_string(), opts, report);
}

inline ContextGraph build_graph(const std::filesystem::path& project_root, std::size_t max_nodes) {
    BuildOptions opts;
    opts.max_nodes = max_nodes;
    return build_graph(project_root, opts);
}

}  // namespace crossctx
