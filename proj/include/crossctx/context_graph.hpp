// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crossctx/entity.hpp"

namespace crossctx {

enum class EdgeType {
    ProjectFile,
    Import,
    GlobalVar,
    GlobalVarReverse,
    Function,
    FunctionReverse,
    Class,
    ClassReverse,
    MemberFunction,
};

inline constexpr std::array<EdgeType, 9> kAllEdgeTypes = {
    EdgeType::ProjectFile,     EdgeType::Import,   EdgeType::GlobalVar,
    EdgeType::GlobalVarReverse, EdgeType::Function, EdgeType::FunctionReverse,
    EdgeType::Class,           EdgeType::ClassReverse, EdgeType::MemberFunction};

inline constexpr std::string_view to_string(EdgeType t) noexcept {
    switch (t) {
        case EdgeType::ProjectFile: return "ProjectFile";
        case EdgeType::Import: return "Import";
        case EdgeType::GlobalVar: return "GlobalVar";
        case EdgeType::GlobalVarReverse: return "GlobalVarReverse";
        case EdgeType::Function: return "Function";
        case EdgeType::FunctionReverse: return "FunctionReverse";
        case EdgeType::Class: return "Class";
        case EdgeType::ClassReverse: return "ClassReverse";
        case EdgeType::MemberFunction: return "MemberFunction";
    }
    return "?";
}

inline std::optional<EdgeType> edge_type_from_string(std::string_view s) noexcept {
    for (auto t : kAllEdgeTypes) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

struct EdgeSchema {
    EntityKind tail;
    EntityKind head;
};

/// Tail and head entity kinds of every edge type.
inline constexpr EdgeSchema edge_schema(EdgeType t) noexcept {
    switch (t) {
        case EdgeType::ProjectFile: return {EntityKind::Root, EntityKind::File};
        case EdgeType::Import: return {EntityKind::File, EntityKind::File};
        case EdgeType::GlobalVar: return {EntityKind::File, EntityKind::GlobalVar};
        case EdgeType::GlobalVarReverse: return {EntityKind::GlobalVar, EntityKind::File};
        case EdgeType::Function: return {EntityKind::File, EntityKind::Function};
        case EdgeType::FunctionReverse: return {EntityKind::Function, EntityKind::File};
        case EdgeType::Class: return {EntityKind::File, EntityKind::Class};
        case EdgeType::ClassReverse: return {EntityKind::Class, EntityKind::File};
        case EdgeType::MemberFunction: return {EntityKind::Class, EntityKind::Function};
    }
    return {EntityKind::Root, EntityKind::Root};
}

/// The paired type of a reversible edge type (both directions).
inline constexpr std::optional<EdgeType> reverse_of(EdgeType t) noexcept {
    switch (t) {
        case EdgeType::GlobalVar: return EdgeType::GlobalVarReverse;
        case EdgeType::GlobalVarReverse: return EdgeType::GlobalVar;
        case EdgeType::Function: return EdgeType::FunctionReverse;
        case EdgeType::FunctionReverse: return EdgeType::Function;
        case EdgeType::Class: return EdgeType::ClassReverse;
        case EdgeType::ClassReverse: return EdgeType::Class;
        default: return std::nullopt;
    }
}

struct Edge {
    NodeId tail = 0;
    EdgeType type = EdgeType::ProjectFile;
    NodeId head = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Multi-relational directed graph over project entities. Node ids are dense
/// indices; node 0 is the Root.
class ContextGraph {
public:
    explicit ContextGraph(std::string project_root = {}) : project_root_(std::move(project_root)) {
        ProjectEntity root;
        root.kind = EntityKind::Root;
        nodes_.push_back(std::move(root));
        out_.emplace_back();
    }

    const std::string& project_root() const noexcept { return project_root_; }
    void set_project_root(std::string root) { project_root_ = std::move(root); }

    NodeId root_id() const noexcept { return 0; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Appends a node; its id is overwritten with the next dense id.
    NodeId add_node(ProjectEntity e) {
        auto id = static_cast<NodeId>(nodes_.size());
        e.id = id;
        if (e.kind != EntityKind::Root) locale_index_.emplace(e.locale.str(), id);
        nodes_.push_back(std::move(e));
        out_.emplace_back();
        return id;
    }

    bool add_edge(NodeId tail, EdgeType type, NodeId head) {
        check(tail);
        check(head);
        Edge e{tail, type, head};
        if (!edges_.insert(e).second) return false;
        auto& adj = out_[tail];
        adj.insert(std::lower_bound(adj.begin(), adj.end(), e), e);
        return true;
    }

    bool remove_edge(NodeId tail, EdgeType type, NodeId head) {
        Edge e{tail, type, head};
        if (!edges_.erase(e)) return false;
        auto& adj = out_[tail];
        adj.erase(std::lower_bound(adj.begin(), adj.end(), e));
        return true;
    }

    bool has_edge(NodeId tail, EdgeType type, NodeId head) const {
        return edges_.contains(Edge{tail, type, head});
    }

    const ProjectEntity& node(NodeId id) const {
        check(id);
        return nodes_[id];
    }
    ProjectEntity& mutable_node(NodeId id) {
        check(id);
        return nodes_[id];
    }
    std::span<const ProjectEntity> nodes() const noexcept { return nodes_; }

    /// All edges in lexicographic (tail, type, head) order.
    const std::set<Edge>& edges() const noexcept { return edges_; }
    std::span<const Edge> out_edges(NodeId id) const {
        check(id);
        return out_[id];
    }

    std::optional<NodeId> find(std::string_view locale) const {
        auto it = locale_index_.find(std::string(locale));
        if (it == locale_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<NodeId> find(const Locale& locale) const { return find(locale.str()); }

    /// Names re-exported by package initializers: initializer module locale ->
    /// bound name -> qualified target locale ("*" maps to a star-imported module).
    using ReexportTable = std::map<std::string, std::map<std::string, std::string>>;
    const ReexportTable& reexports() const noexcept { return reexports_; }
    void add_reexport(const std::string& module, const std::string& name, std::string target) {
        reexports_[module][name] = std::move(target);
    }

    friend bool operator==(const ContextGraph& a, const ContextGraph& b) {
        return a.project_root_ == b.project_root_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_ &&
               a.reexports_ == b.reexports_;
    }

private:
    void check(NodeId id) const {
        if (id >= nodes_.size()) throw std::out_of_range("node id " + std::to_string(id));
    }

    std::string project_root_;
    std::vector<ProjectEntity> nodes_;
    std::set<Edge> edges_;
    std::vector<std::vector<Edge>> out_;
    std::unordered_map<std::string, NodeId> locale_index_;
    ReexportTable reexports_;
};

inline std::string describe(const ContextGraph& g, const Edge& e) {
    auto name = [&](NodeId id) {
        const auto& n = g.node(id);
        return std::string(to_string(n.kind)) + "(" + (n.kind == EntityKind::Root ? "" : n.locale.str()) +
               ")#" + std::to_string(id);
    };
    return name(e.tail) + " -" + std::string(to_string(e.type)) + "-> " + name(e.head);
}

struct Violation {
    enum class Kind { EdgeSchema, MissingReverse, Locale, Root, Reachability };
    Kind kind;
    std::string message;
    std::optional<Edge> edge;
};

/// Checks edge endpoint kinds, reverse-edge pairing, locale bijection,
/// Root uniqueness and reachability. Empty result means the graph is valid.
inline std::vector<Violation> validate(const ContextGraph& g) {
    std::vector<Violation> out;
    auto nodes = g.nodes();

    std::size_t roots = 0;
    for (const auto& n : nodes) roots += n.kind == EntityKind::Root;
    if (roots != 1 || nodes.empty() || nodes[g.root_id()].kind != EntityKind::Root) {
        out.push_back({Violation::Kind::Root, "graph must hold exactly one Root node at id 0", {}});
    }

    for (const auto& e : g.edges()) {
        auto schema = edge_schema(e.type);
        if (g.node(e.tail).kind != schema.tail || g.node(e.head).kind != schema.head) {
            out.push_back({Violation::Kind::EdgeSchema,
                           "edge violates " + std::string(to_string(e.type)) + " schema (" +
                               std::string(to_string(schema.tail)) + " -> " +
                               std::string(to_string(schema.head)) + "): " + describe(g, e),
                           e});
        }
        if (auto rev = reverse_of(e.type); rev && !g.has_edge(e.head, *rev, e.tail)) {
            out.push_back({Violation::Kind::MissingReverse,
                           "missing " + std::string(to_string(*rev)) + " partner of " + describe(g, e), e});
        }
    }

    std::map<std::string, std::vector<NodeId>> by_locale;
    for (const auto& n : nodes) {
        if (n.kind == EntityKind::Root) continue;
        if (n.locale.empty()) {
            out.push_back({Violation::Kind::Locale, "node #" + std::to_string(n.id) + " has no locale", {}});
            continue;
        }
        by_locale[n.locale.str()].push_back(n.id);
    }
    for (const auto& [loc, ids] : by_locale) {
        if (ids.size() > 1) {
            out.push_back({Violation::Kind::Locale,
                           "locale " + loc + " is shared by " + std::to_string(ids.size()) + " nodes", {}});
        } else if (g.find(loc) != ids.front()) {
            out.push_back({Violation::Kind::Locale, "locale index disagrees for " + loc, {}});
        }
    }

    for (const auto& n : nodes) {
        if (n.kind != EntityKind::File) continue;
        std::size_t links = 0;
        for (const auto& e : g.out_edges(g.root_id())) {
            links += e.type == EdgeType::ProjectFile && e.head == n.id;
        }
        if (links != 1) {
            out.push_back({Violation::Kind::Reachability,
                           "file " + n.locale.str() + " lacks its ProjectFile edge from Root", {}});
        }
    }

    std::vector<bool> seen(nodes.size(), false);
    std::vector<NodeId> stack{g.root_id()};
    seen[g.root_id()] = true;
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        for (const auto& e : g.out_edges(id)) {
            if (!seen[e.head]) {
                seen[e.head] = true;
                stack.push_back(e.head);
            }
        }
    }
    for (const auto& n : nodes) {
        if (!seen[n.id]) {
            out.push_back({Violation::Kind::Reachability,
                           "node " + n.locale.str() + "#" + std::to_string(n.id) + " is unreachable from Root",
                           {}});
        }
    }
    return out;
}

}  // namespace crossctx
