// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "crossctx/context_graph.hpp"
#include "crossctx/import_resolver.hpp"
#include "crossctx/json_util.hpp"

namespace crossctx {

struct Anchor {
    ImportRef ref;
    NodeId node = 0;

    friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct RetrievedContext {
    std::vector<NodeId> entities;
    std::vector<Anchor> anchors;
    std::vector<ImportRef> unresolved;  // local imports with no matching node
    int k = 2;

    friend bool operator==(const RetrievedContext&, const RetrievedContext&) = default;
};

/// Every node within directed distance k of `root` (root included), in
/// depth-first discovery order. All edge types are followed. A node reached
/// again on a shorter path is expanded again so that the hop bound is exact.
inline std::vector<NodeId> dfs_k_hop(const ContextGraph& g, NodeId root, int k) {
    if (k < 0) throw std::invalid_argument("hop budget must be non-negative");
    constexpr int kUnseen = std::numeric_limits<int>::max();
    std::vector<int> best(g.node_count(), kUnseen);
    std::vector<bool> emitted(g.node_count(), false);
    std::vector<NodeId> order;
    std::vector<std::pair<NodeId, int>> stack{{root, 0}};
    best[g.node(root).id] = 0;
    while (!stack.empty()) {
        auto [n, d] = stack.back();
        stack.pop_back();
        if (d != best[n]) continue;
        if (!emitted[n]) {
            emitted[n] = true;
            order.push_back(n);
        }
        if (d == k) continue;
        auto out = g.out_edges(n);
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (d + 1 < best[it->head]) {
                best[it->head] = d + 1;
                stack.emplace_back(it->head, d + 1);
            }
        }
    }
    return order;
}

/// Groups ids by source file, files in order of first appearance, and sorts
/// each group by file_order_index (the File node first). Duplicates are removed.
inline std::vector<NodeId> reorder_nodes(const std::vector<NodeId>& ids, const ContextGraph& g) {
    std::map<std::string, std::size_t> file_rank;
    std::vector<std::pair<std::size_t, NodeId>> keyed;
    std::unordered_set<NodeId> seen;
    for (auto id : ids) {
        if (!seen.insert(id).second) continue;
        const auto& path = g.node(id).span.file_path;
        auto rank = file_rank.emplace(path, file_rank.size()).first->second;
        keyed.emplace_back(rank, id);
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return g.node(a.second).file_order_index < g.node(b.second).file_order_index;
    });
    std::vector<NodeId> out;
    out.reserve(keyed.size());
    for (const auto& [rank, id] : keyed) out.push_back(id);
    return out;
}

/// Cross-file context for `source` (the file at project-relative `path`):
/// each local import is located in the graph, its k-hop neighbourhood is
/// merged without duplicates, and the result is put back into source order.
/// Entities of the querying file itself and the Root are left out.
inline RetrievedContext retrieve_context(const ContextGraph& g, std::string_view path, std::string_view source,
                                         int k = 2, const ImportOptions& opts = {}) {
    RetrievedContext ctx;
    ctx.k = k;
    auto refs = get_local_import_stmts(source, path, ModuleIndex::from_graph(g), opts);
    std::vector<NodeId> collected;
    std::unordered_set<NodeId> seen;
    for (auto& ref : refs) {
        auto id = try_locate_node(g, ref);
        if (!id) {
            ctx.unresolved.push_back(std::move(ref));
            continue;
        }
        ctx.anchors.push_back({ref, *id});
        for (auto n : dfs_k_hop(g, *id, k)) {
            const auto& node = g.node(n);
            if (node.kind == EntityKind::Root || node.span.file_path == path) continue;
            if (seen.insert(n).second) collected.push_back(n);
        }
    }
    ctx.entities = reorder_nodes(collected, g);
    return ctx;
}

inline Json import_ref_to_json(const ImportRef& r) {
    Json j{{"module_path", r.module_path}};
    j["symbol"] = r.symbol ? Json(*r.symbol) : Json(nullptr);
    j["alias"] = r.alias ? Json(*r.alias) : Json(nullptr);
    j["binding"] = r.binding;
    j["target"] = r.target;
    j["span"] = detail::span_to_json(r.span);
    return j;
}

inline ImportRef import_ref_from_json(const Json& j, std::string_view where) {
    auto opt = [&](std::string_view key) -> std::optional<std::string> {
        const auto& v = detail::field(j, key, where);
        if (v.is_null()) return std::nullopt;
        if (!v.is_string()) throw FormatError(std::string(where) + "." + std::string(key) + ": expected a string");
        return v.get<std::string>();
    };
    ImportRef r;
    r.module_path = detail::get_string(j, "module_path", where);
    r.symbol = opt("symbol");
    r.alias = opt("alias");
    r.binding = detail::get_string(j, "binding", where);
    r.target = detail::get_string(j, "target", where);
    r.span = detail::span_from_json(detail::field(j, "span", where), std::string(where) + ".span");
    return r;
}

/// Context document: entity ids with locales and texts in final order.
inline Json context_to_json(const RetrievedContext& ctx, const ContextGraph& g, std::string_view file) {
    Json anchors = Json::array();
    for (const auto& a : ctx.anchors) {
        auto j = import_ref_to_json(a.ref);
        j["node"] = a.node;
        j["locale"] = g.node(a.node).locale.str();
        anchors.push_back(std::move(j));
    }
    Json unresolved = Json::array();
    for (const auto& r : ctx.unresolved) unresolved.push_back(import_ref_to_json(r));
    Json entities = Json::array();
    for (auto id : ctx.entities) {
        const auto& n = g.node(id);
        entities.push_back(Json{{"id", id}, {"kind", to_string(n.kind)}, {"locale", n.locale.str()}, {"text", n.text}});
    }
    return Json{{"file", file},
                {"k", ctx.k},
                {"anchors", std::move(anchors)},
                {"unresolved", std::move(unresolved)},
                {"entities", std::move(entities)}};
}

/// Reads a context document back. Entity ids must exist in `g` and match their locales.
inline RetrievedContext context_from_json(const Json& j, const ContextGraph& g) {
    RetrievedContext ctx;
    const auto& kv = detail::field(j, "k", "context");
    if (!kv.is_number_integer() || kv.get<long long>() < 0) throw FormatError("context.k: expected a non-negative integer");
    ctx.k = kv.get<int>();
    auto node_ref = [&](const Json& e, std::string_view key, const std::string& where) {
        auto id = detail::get_uint(e, key, where);
        if (id >= g.node_count()) throw FormatError(where + "." + std::string(key) + ": unknown node id");
        if (g.node(static_cast<NodeId>(id)).locale.str() != detail::get_string(e, "locale", where)) {
            throw FormatError(where + ": locale does not match the graph");
        }
        return static_cast<NodeId>(id);
    };
    const auto& anchors = detail::get_array(j, "anchors", "context");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        std::string where = "context.anchors[" + std::to_string(i) + "]";
        ctx.anchors.push_back({import_ref_from_json(anchors[i], where), node_ref(anchors[i], "node", where)});
    }
    const auto& unresolved = detail::get_array(j, "unresolved", "context");
    for (std::size_t i = 0; i < unresolved.size(); ++i) {
        ctx.unresolved.push_back(import_ref_from_json(unresolved[i], "context.unresolved[" + std::to_string(i) + "]"));
    }
    const auto& entities = detail::get_array(j, "entities", "context");
    for (std::size_t i = 0; i < entities.size(); ++i) {
        ctx.entities.push_back(node_ref(entities[i], "id", "context.entities[" + std::to_string(i) + "]"));
    }
    return ctx;
}

}  // namespace crossctx
