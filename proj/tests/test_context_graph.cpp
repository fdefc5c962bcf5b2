// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#include <catch2/catch_amalgamated.hpp>

#include "crossctx/graph_builder.hpp"
#include "crossctx/graph_io.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace crossctx;
using crossctx::testing::fixture_dir;

namespace {

NodeId id_of(const ContextGraph& g, std::string_view locale) {
    auto id = g.find(locale);
    REQUIRE(id);
    return *id;
}

bool has(const ContextGraph& g, std::string_view tail, EdgeType t, std::string_view head) {
    return g.has_edge(id_of(g, tail), t, id_of(g, head));
}

std::size_t count_kind(const std::vector<Violation>& vs, Violation::Kind k) {
    return static_cast<std::size_t>(std::count_if(vs.begin(), vs.end(), [&](const auto& v) { return v.kind == k; }));
}

}  // namespace

TEST_CASE("tagdemo graph holds the expected edges", "[context_graph]") {
    auto g = build_graph(fixture_dir("tagdemo"));
    CHECK(g.node_count() == 1 + 3 + 3 + 5 + 1);
    CHECK(has(g, "main", EdgeType::Import, "git"));
    CHECK(has(g, "main", EdgeType::Import, "handler"));
    CHECK_FALSE(has(g, "git", EdgeType::Import, "main"));
    CHECK(has(g, "handler", EdgeType::Class, "handler.TagHandler"));
    CHECK(has(g, "handler.TagHandler", EdgeType::ClassReverse, "handler"));
    CHECK(has(g, "handler.TagHandler", EdgeType::MemberFunction, "handler.TagHandler.latest"));
    CHECK_FALSE(has(g, "handler", EdgeType::Function, "handler.TagHandler.latest"));
    CHECK(has(g, "git", EdgeType::GlobalVar, "git.GIT_BINARY"));
    CHECK(has(g, "git.list_tags", EdgeType::FunctionReverse, "git"));
    for (auto f : {"git", "handler", "main"}) CHECK(g.has_edge(g.root_id(), EdgeType::ProjectFile, id_of(g, f)));
    CHECK(validate(g).empty());
}

TEST_CASE("a single empty file gives Root, a File and one edge", "[context_graph]") {
    auto g = build_graph_from_sources({{"u.py", ""}}, "one");
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(0, EdgeType::ProjectFile, 1));
    CHECK(g.node(1).locale.str() == "u");
}

TEST_CASE("fixture graphs satisfy every structural invariant", "[context_graph][property]") {
    for (const auto& name : crossctx::testing::fixture_names()) {
        INFO(name);
        auto g = build_graph(fixture_dir(name));
        auto vs = validate(g);
        for (const auto& v : vs) UNSCOPED_INFO(v.message);
        CHECK(vs.empty());
        for (const auto& e : g.edges()) {
            auto s = edge_schema(e.type);
            CHECK(g.node(e.tail).kind == s.tail);
            CHECK(g.node(e.head).kind == s.head);
            if (auto r = reverse_of(e.type)) CHECK(g.has_edge(e.head, *r, e.tail));
        }
    }
    auto synth = build_graph_from_sources(crossctx::testing::synthetic_project(30), "synth");
    CHECK(synth.node_count() == 1 + 30 * 15);
    CHECK(validate(synth).empty());
}

TEST_CASE("validate catches injected violations of every edge type", "[context_graph]") {
    auto base = build_graph(fixture_dir("tagdemo"));
    REQUIRE(validate(base).empty());
    auto other_than = [&](EntityKind k) {
        for (const auto& n : base.nodes()) {
            if (n.kind != k && n.kind != EntityKind::Root) return n.id;
        }
        return base.root_id();
    };
    for (auto t : kAllEdgeTypes) {
        INFO(to_string(t));
        auto g = base;
        auto s = edge_schema(t);
        auto tail = other_than(s.tail);
        auto head = *g.find(s.head == EntityKind::File ? "git" : "git.run");
        if (s.head == EntityKind::Class) head = *g.find("handler.TagHandler");
        REQUIRE(g.add_edge(tail, t, head));
        CHECK(count_kind(validate(g), Violation::Kind::EdgeSchema) >= 1);
    }
}

TEST_CASE("validate catches a missing reverse edge", "[context_graph]") {
    auto g = build_graph(fixture_dir("tagdemo"));
    REQUIRE(g.remove_edge(id_of(g, "handler.TagHandler"), EdgeType::ClassReverse, id_of(g, "handler")));
    auto vs = validate(g);
    REQUIRE(count_kind(vs, Violation::Kind::MissingReverse) == 1);
    CHECK(vs[0].edge->type == EdgeType::Class);
}

TEST_CASE("validate catches locale and reachability faults", "[context_graph]") {
    auto g = build_graph(fixture_dir("tagdemo"));
    ProjectEntity dup = g.node(id_of(g, "git.run"));
    auto id = g.add_node(dup);
    CHECK(count_kind(validate(g), Violation::Kind::Locale) == 1);
    CHECK(count_kind(validate(g), Violation::Kind::Reachability) == 1);
    g.add_edge(id_of(g, "git"), EdgeType::Function, id);
    g.add_edge(id, EdgeType::FunctionReverse, id_of(g, "git"));
    CHECK(count_kind(validate(g), Violation::Kind::Reachability) == 0);

    auto h = build_graph(fixture_dir("tagdemo"));
    h.remove_edge(h.root_id(), EdgeType::ProjectFile, id_of(h, "main"));
    CHECK(count_kind(validate(h), Violation::Kind::Reachability) >= 1);
}

TEST_CASE("serialization round-trips exactly", "[context_graph][property]") {
    for (const auto& name : crossctx::testing::fixture_names()) {
        auto g = build_graph(fixture_dir(name));
        auto bytes = serialize(g);
        auto back = deserialize(bytes);
        CHECK(back == g);
        CHECK(serialize(back) == bytes);
    }
}

TEST_CASE("graph building is deterministic", "[context_graph][property]") {
    auto a = serialize(build_graph(fixture_dir("pkgdemo")));
    auto b = serialize(build_graph(fixture_dir("pkgdemo")));
    CHECK(a == b);
    auto files = crossctx::testing::synthetic_project(40);
    BuildOptions serial, parallel;
    parallel.threads = 4;
    CHECK(serialize(build_graph_from_sources(files, "s", serial)) ==
          serialize(build_graph_from_sources(files, "s", parallel)));
    auto reversed = files;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(build_graph_from_sources(files, "s") == build_graph_from_sources(reversed, "s"));
}

TEST_CASE("malformed graph bytes are rejected", "[context_graph]") {
    auto bytes = serialize(build_graph(fixture_dir("tagdemo")));
    CHECK_THROWS_AS(deserialize(bytes.substr(0, bytes.size() / 2)), FormatError);
    CHECK_THROWS_AS(deserialize("[]"), FormatError);
    CHECK_THROWS_AS(deserialize(R"({"version":9,"project_root":"","nodes":[],"edges":[]})"), FormatError);
    auto j = graph_to_json(build_graph(fixture_dir("tagdemo")));
    auto bad_edge = j;
    bad_edge["edges"][0]["head"] = 999;
    CHECK_THROWS_AS(graph_from_json(bad_edge), FormatError);
    auto bad_type = j;
    bad_type["edges"][0]["type"] = "Inherits";
    CHECK_THROWS_AS(graph_from_json(bad_type), FormatError);
    auto two_roots = j;
    two_roots["nodes"][1]["kind"] = "Root";
    CHECK_THROWS_AS(graph_from_json(two_roots), FormatError);
}

TEST_CASE("oversized projects raise GraphTooLarge", "[context_graph]") {
    auto files = crossctx::testing::synthetic_project(400);
    CHECK_THROWS_AS(build_graph_from_sources(files, "big"), GraphTooLarge);
    BuildOptions roomy;
    roomy.max_nodes = 7000;
    CHECK(build_graph_from_sources(files, "big", roomy).node_count() == 6001);
}

TEST_CASE("empty projects and parse failures", "[context_graph]") {
    CHECK_THROWS_AS(build_graph_from_sources({}, "none"), EmptyProject);
    CHECK_THROWS_AS(build_graph_from_sources({{"bad.py", "def (:\n"}}, "bad"), EmptyProject);
    BuildReport report;
    auto g = build_graph_from_sources({{"ok.py", "X = 1\n"}, {"bad.py", "x = (\n"}}, "mixed", {}, &report);
    CHECK(g.node_count() == 3);
    REQUIRE(report.skipped.size() == 1);
    CHECK(report.skipped[0].path == "bad.py");
    CHECK(report.nodes == 3);
}

TEST_CASE("locale collisions keep the file and drop the entity", "[context_graph]") {
    BuildReport report;
    auto g = build_graph_from_sources({{"a.py", "class b:\n    def m(self):\n        pass\n"}, {"a/b.py", "Y = 1\n"}},
                                      "clash", {}, &report);
    CHECK(g.node(id_of(g, "a.b")).kind == EntityKind::File);
    CHECK_FALSE(g.find("a.b.m"));
    CHECK(report.dropped == std::vector<std::string>{"a.b (a.py)", "a.b.m (a.py)"});
    CHECK(validate(g).empty());

    auto pkg = build_graph_from_sources({{"p.py", "A = 1\n"}, {"p/__init__.py", "B = 2\n"}}, "pkg");
    CHECK(pkg.node(id_of(pkg, "p")).span.file_path == "p/__init__.py");
    CHECK(pkg.find("p.B"));
    CHECK_FALSE(pkg.find("p.A"));
}
