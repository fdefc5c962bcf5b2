// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <set>
#include <string>
#include <string_view>

#include "crossctx/context_graph.hpp"
#include "crossctx/error.hpp"
#include "crossctx/json_util.hpp"

namespace crossctx {

inline constexpr int kGraphFormatVersion = 1;

inline Json entity_to_json(const ProjectEntity& n) {
    return Json{{"id", n.id},
                {"kind", to_string(n.kind)},
                {"locale", n.locale.str()},
                {"name", n.name},
                {"text", n.text},
                {"signature", n.signature},
                {"span", detail::span_to_json(n.span)},
                {"file_order_index", n.file_order_index}};
}

inline Json graph_to_json(const ContextGraph& g) {
    Json nodes = Json::array();
    for (const auto& n : g.nodes()) nodes.push_back(entity_to_json(n));
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
        edges.push_back(Json{{"tail", e.tail}, {"type", to_string(e.type)}, {"head", e.head}});
    }
    Json reexports = Json::object();
    for (const auto& [module, names] : g.reexports()) {
        Json table = Json::object();
        for (const auto& [name, target] : names) table[name] = target;
        reexports[module] = std::move(table);
    }
    return Json{{"version", kGraphFormatVersion}, {"project_root", g.project_root()},
                {"nodes", std::move(nodes)},       {"edges", std::move(edges)},
                {"reexports", std::move(reexports)}};
}

/// Nodes in id order, edges in (tail, type, head) order; byte-identical for equal graphs.
inline std::string serialize(const ContextGraph& g) { return detail::dump_json(graph_to_json(g), 1) + "\n"; }

inline ContextGraph graph_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("graph: expected a JSON object");
    if (detail::get_uint(j, "version", "graph") != kGraphFormatVersion) {
        throw FormatError("graph: unsupported version");
    }
    ContextGraph g(detail::get_string(j, "project_root", "graph"));

    const auto& nodes = detail::get_array(j, "nodes", "graph");
    if (nodes.empty()) throw FormatError("graph.nodes: missing Root node");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string where = "graph.nodes[" + std::to_string(i) + "]";
        const auto& n = nodes[i];
        if (detail::get_uint(n, "id", where) != i) throw FormatError(where + ".id: ids must be dense and ordered");
        auto kind = entity_kind_from_string(detail::get_string(n, "kind", where));
        if (!kind) throw FormatError(where + ".kind: unknown entity kind");
        if ((i == 0) != (*kind == EntityKind::Root)) {
            throw FormatError(where + ".kind: the Root must be node 0 and unique");
        }
        if (i == 0) continue;
        ProjectEntity e;
        e.kind = *kind;
        e.locale = Locale::parse(detail::get_string(n, "locale", where));
        e.name = detail::get_string(n, "name", where);
        e.text = detail::get_string(n, "text", where);
        if (n.contains("signature")) e.signature = detail::get_string(n, "signature", where);
        e.span = detail::span_from_json(detail::field(n, "span", where), where + ".span");
        e.file_order_index = static_cast<std::uint32_t>(detail::get_uint(n, "file_order_index", where));
        g.add_node(std::move(e));
    }

    const auto& edges = detail::get_array(j, "edges", "graph");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string where = "graph.edges[" + std::to_string(i) + "]";
        auto type = edge_type_from_string(detail::get_string(edges[i], "type", where));
        if (!type) throw FormatError(where + ".type: unknown edge type");
        auto tail = detail::get_uint(edges[i], "tail", where);
        auto head = detail::get_uint(edges[i], "head", where);
        if (tail >= g.node_count() || head >= g.node_count()) {
            throw FormatError(where + ": endpoint out of range");
        }
        g.add_edge(static_cast<NodeId>(tail), *type, static_cast<NodeId>(head));
    }

    if (auto it = j.find("reexports"); it != j.end()) {
        if (!it->is_object()) throw FormatError("graph.reexports: expected an object");
        for (const auto& [module, table] : it->items()) {
            if (!table.is_object()) throw FormatError("graph.reexports." + module + ": expected an object");
            for (const auto& [name, target] : table.items()) {
                if (!target.is_string()) throw FormatError("graph.reexports." + module + "." + name + ": expected a string");
                g.add_reexport(module, name, target.get<std::string>());
            }
        }
    }
    return g;
}

/// Throws FormatError with the byte position of malformed input.
inline ContextGraph deserialize(std::string_view bytes) {
    return graph_from_json(detail::parse_json(bytes, "graph"));
}

}  // namespace crossctx
