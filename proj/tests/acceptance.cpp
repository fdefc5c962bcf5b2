// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "crossctx/crossctx.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace crossctx;
namespace fs = std::filesystem;
namespace t = crossctx::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::set<NodeId> as_set(const std::vector<NodeId>& v) { return {v.begin(), v.end()}; }

std::vector<ContextGraph> fixture_graphs() {
    std::vector<ContextGraph> out;
    for (const auto& name : t::fixture_names()) out.push_back(build_graph(t::fixture_dir(name)));
    return out;
}

void retrieval_oracle(Outcome& o) {
    auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(1);
    std::vector<ContextGraph> graphs;
    for (int i = 0; i < 100; ++i) {
        std::size_t n = 1 + rng() % 200;
        graphs.push_back(t::random_graph(n, rng() % (4 * n + 1), rng));
    }
    for (auto& g : fixture_graphs()) graphs.push_back(std::move(g));
    std::size_t checks = 0, mismatches = 0;
    for (const auto& g : graphs) {
        for (int k = 0; k <= 3; ++k) {
            auto m = t::reachability_within(g, k);
            for (NodeId r = 0; r < g.node_count(); ++r) {
                ++checks;
                auto order = dfs_k_hop(g, r, k);
                if (as_set(order) != t::row_set(m, r) || as_set(order).size() != order.size()) ++mismatches;
            }
        }
    }
    double secs = seconds_since(start);
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    o.require(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    o.detail << graphs.size() << " graphs, " << checks << " (root, k) checks, " << mismatches << " mismatches, "
             << secs << " s";
}

void edge_conformance(Outcome& o) {
    std::size_t injected = 0, detected = 0;
    auto graphs = fixture_graphs();
    for (const auto& g : graphs) {
        auto vs = validate(g);
        o.require(vs.empty(), "violations on a fixture graph: " + (vs.empty() ? "" : vs[0].message));
        for (auto type : kAllEdgeTypes) {
            auto schema = edge_schema(type);
            // An edge whose tail kind is wrong for the type.
            for (const auto& n : g.nodes()) {
                if (n.kind == schema.tail) continue;
                auto head = std::find_if(g.nodes().begin(), g.nodes().end(),
                                         [&](const auto& m) { return m.kind == schema.head; });
                NodeId head_id = head == g.nodes().end() ? g.root_id() : head->id;
                auto h = g;
                if (!h.add_edge(n.id, type, head_id)) continue;
                ++injected;
                auto found = validate(h);
                bool hit = std::any_of(found.begin(), found.end(), [&](const Violation& v) {
                    return v.kind == Violation::Kind::EdgeSchema && v.edge && v.edge->type == type;
                });
                detected += hit;
                o.require(hit, "undetected " + std::string(to_string(type)) + " schema violation");
                break;
            }
            // A reversible edge whose partner is missing.
            if (auto rev = reverse_of(type)) {
                for (const auto& e : g.edges()) {
                    if (e.type != type) continue;
                    auto h = g;
                    h.remove_edge(e.head, *rev, e.tail);
                    ++injected;
                    auto found = validate(h);
                    bool hit = std::any_of(found.begin(), found.end(), [&](const Violation& v) {
                        return v.kind == Violation::Kind::MissingReverse && v.edge && *v.edge == e;
                    });
                    detected += hit;
                    o.require(hit, "undetected missing " + std::string(to_string(*rev)));
                    break;
                }
            }
        }
    }
    o.detail << graphs.size() << " fixture graphs valid; " << detected << "/" << injected
             << " injected violations detected across all 9 edge types";
}

void recall_direction(Outcome& o) {
    for (const auto& name : t::fixture_names()) {
        auto root = t::fixture_dir(name);
        auto bundles = build_completion_prompts(root, build_graph(root));
        auto in_file = identifier_recall(bundles, RecallScope::InFile);
        auto ctx = identifier_recall(bundles, RecallScope::InFilePlusContext);
        o.detail << name << " " << in_file << "% -> " << ctx << "%; ";
        o.require(!bundles.empty(), name + " yields no prompts");
        // Every fixture target calls a cross-file entity, so the gain must be strict.
        o.require(ctx > in_file, name + " context recall not above in-file recall");
        if (name == "tagdemo") {
            o.require(std::abs(ctx - 100.0) < 1e-9, "tagdemo context recall below 100%");
            o.require(in_file < 100.0, "tagdemo in-file recall already 100%");
        }
    }
}

void hop_ablation(Outcome& o) {
    auto root = t::fixture_dir("hopdemo");
    auto g = build_graph(root);
    auto src = t::slurp(root / "client.py");
    auto needed = *g.find("config.RETRY_LIMIT");
    auto k1 = as_set(retrieve_context(g, "client.py", src, 1).entities);
    auto k2 = as_set(retrieve_context(g, "client.py", src, 2).entities);
    o.require(!k1.contains(needed), "k=1 already holds config.RETRY_LIMIT");
    o.require(k2.contains(needed), "k=2 misses config.RETRY_LIMIT");
    o.detail << "hopdemo |k=1| = " << k1.size() << ", |k=2| = " << k2.size() << "; ";

    std::size_t pairs = 0;
    for (const auto& name : t::fixture_names()) {
        auto froot = t::fixture_dir(name);
        auto fg = build_graph(froot);
        for (const auto& rel : list_source_files(froot)) {
            auto fsrc = t::slurp(froot / rel);
            auto prev = as_set(retrieve_context(fg, rel, fsrc, 0).entities);
            for (int k = 1; k <= 4; ++k) {
                auto cur = as_set(retrieve_context(fg, rel, fsrc, k).entities);
                ++pairs;
                o.require(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()),
                          name + "/" + rel + " not monotone at k=" + std::to_string(k));
                prev = std::move(cur);
            }
        }
    }
    o.detail << pairs << " monotonicity pairs checked";
}

void budget_law(Outcome& o) {
    std::mt19937 rng(2);
    // A pool of entities of very different sizes, one graph for all bundles.
    ContextGraph g("budget");
    std::vector<NodeId> pool;
    const char* words[] = {"value", "=", "compute(", "x", ")", "+", "self.items[i]", "return", "'text'", "#", ":"};
    for (int i = 0; i < 400; ++i) {
        ProjectEntity e;
        e.kind = EntityKind::Function;
        e.locale = Locale{{"mod" + std::to_string(i % 17), "fn" + std::to_string(i)}};
        e.name = "fn" + std::to_string(i);
        std::size_t lines = 1 + rng() % 60;
        e.text = "def " + e.name + "(a, b):";
        for (std::size_t l = 0; l < lines; ++l) {
            e.text += "\n    ";
            std::size_t n = rng() % (l == 0 && i % 9 == 0 ? 300 : 14);
            for (std::size_t w = 0; w < n; ++w) e.text += std::string(words[rng() % 11]) + " ";
        }
        e.signature = "def " + e.name + "(a, b):";
        pool.push_back(g.add_node(std::move(e)));
    }
    std::size_t entities = 0, truncated = 0;
    for (int b = 0; b < 1000; ++b) {
        RetrievedContext ctx;
        std::size_t n = rng() % 320;
        for (std::size_t i = 0; i < n; ++i) ctx.entities.push_back(pool[rng() % pool.size()]);
        AssembleOptions opts;
        opts.tokenizer = b % 4 == 3 ? &whitespace_tokenizer() : &code_tokenizer();
        auto bundle = assemble_bundle(ctx, g, "", opts);
        auto back = bundles_from_jsonl(bundles_to_jsonl({bundle}));
        const auto& got = back.at(0);
        o.require(got.entities.size() <= 128, "more than 128 entities");
        o.require(got.entities.size() == std::min<std::size_t>(n, 128), "wrong kept count");
        o.require(got.metadata.retrieved == n, "retrieved count");
        o.require(got.metadata.dropped == (n > 128 ? n - 128 : 0), "dropped count");
        for (const auto& e : got.entities) {
            auto recount = opts.tokenizer->count(e.body);
            o.require(recount <= 128, e.locale + " has " + std::to_string(recount) + " tokens");
            o.require(recount == e.tokens, "recorded token count differs");
            o.require(e.body.ends_with(kSumToken), "missing terminator");
            truncated += e.source_tokens > e.tokens;
            ++entities;
        }
    }
    o.detail << "1000 bundles, " << entities << " entity bodies re-tokenized, " << truncated << " truncated";
}

std::map<std::string, std::string> pipeline(const fs::path& root, const fs::path& out) {
    fs::create_directories(out);
    std::map<std::string, std::string> artifacts;
    auto cli = [&](std::vector<std::string> args, const std::string& artifact) {
        auto path = out / artifact;
        args.push_back("--out");
        args.push_back(path.string());
        if (t::run_cli(args) != 0) throw std::runtime_error("crossctx " + args[0] + " failed");
        artifacts[artifact] = t::slurp(path);
    };
    auto graph = (out / "graph.json").string();
    cli({"build-graph", "--project-root", root.string()}, "graph.json");
    std::size_t i = 0;
    for (const auto& rel : list_source_files(root)) {
        auto n = std::to_string(i++);
        cli({"retrieve", "--graph", graph, "--file", rel}, "context" + n + ".json");
        cli({"assemble", "--graph", graph, "--context", (out / ("context" + n + ".json")).string(), "--file", rel},
            "bundle" + n + ".jsonl");
    }
    cli({"make-prompts", "--graph", graph}, "prompts.jsonl");
    return artifacts;
}

void determinism(Outcome& o) {
    t::TempDir tmp;
    std::size_t compared = 0;
    for (const auto& name : t::fixture_names()) {
        auto root = t::fixture_dir(name);
        auto a = pipeline(root, tmp / (name + "-a"));
        auto b = pipeline(root, tmp / (name + "-b"));
        o.require(a.size() == b.size(), name + " artifact sets differ");
        for (const auto& [file, bytes] : a) {
            ++compared;
            o.require(b.contains(file) && b.at(file) == bytes, name + "/" + file + " differs between runs");
        }
    }
    o.detail << compared << " artifact pairs byte-identical";
}

void metric_pairs(Outcome& o) {
    constexpr double tol = 1e-9;
    using Ids = std::vector<std::string>;
    struct IdCase {
        Ids pred, gt;
        double em, p, r;
    };
    const std::vector<IdCase> id_cases{
        {{"a", "b", "c"}, {"a", "b", "c"}, 1, 1, 1},
        {{"a", "b"}, {"b", "a"}, 0, 1, 1},
        {{"a"}, {"a", "b"}, 0, 1, 0.5},
        {{}, {}, 1, 1, 1},
        {{}, {"a"}, 0, 0, 0},
        {{"a"}, {}, 0, 0, 0},
        {{"a", "a", "a"}, {"a", "b"}, 0, 1.0 / 3.0, 0.5},
        {{"x", "y", "z"}, {"p", "q"}, 0, 0, 0},
        {{"a", "b", "c", "d"}, {"b", "c", "e"}, 0, 0.5, 2.0 / 3.0},
        {extract_identifiers("tag_handler = TagHandler(path)"),
         extract_identifiers("tag_handler = TagHandler(git.list_tags(path))"), 0, 1, 0.6},
    };
    struct CodeCase {
        std::string pred, gt;
        double em, bleu;
    };
    const std::vector<CodeCase> code_cases{
        {"x = f(a)", "x = f(a)", 1, 1},
        {"alpha beta", "gamma delta", 0, 0},
        // 10 tokens, one substituted in the middle.
        {"a = b(c, q) + e", "a = b(c, d) + e", 0, std::pow(0.9 * 0.8 * (6.0 / 9.0) * 0.5, 0.25)},
        {"x = 1   \n", "x = 1", 1, 1},
        // All n-gram precisions 1; brevity penalty exp(1 - 5/3).
        {"a = b", "a = b + c", 0, std::exp(-2.0 / 3.0)},
        {"", "", 1, 1},
        {"", "x = 1", 0, 0},
        {"a = b + c + d", "a = b + c", 0, std::pow(5.0 / 7 * 5.0 / 7 * 4.0 / 6 * 3.0 / 5, 0.25)},
        {"return b, a", "return a, b", 0, std::pow(1.0 / 24.0, 0.25)},
        {"x x x x", "x y", 0, std::pow(1.0 / 96.0, 0.25)},
    };
    std::size_t n = 0;
    for (const auto& c : id_cases) {
        auto m = id_match(c.pred, c.gt);
        ++n;
        o.require(std::abs(m.em - c.em) <= tol && std::abs(m.precision - c.p) <= tol && std::abs(m.recall - c.r) <= tol,
                  "id_match pair " + std::to_string(n));
    }
    for (const auto& c : code_cases) {
        auto m = code_match(c.pred, c.gt);
        ++n;
        o.require(std::abs(m.em - c.em) <= tol && std::abs(m.bleu4 - c.bleu) <= tol,
                  "code_match pair " + std::to_string(n) + " got " + std::to_string(m.bleu4));
    }
    o.detail << n << " curated pairs within " << tol;
}

void throughput(Outcome& o) {
    t::TempDir tmp;
    auto files = t::synthetic_project(100);
    for (const auto& f : files) t::spit(tmp / ("project/" + f.path), f.source);
    auto start = std::chrono::steady_clock::now();
    int rc = t::run_cli({"build-graph", "--project-root", (tmp / "project").string(), "--threads", "1", "--out",
                         (tmp / "graph.json").string()});
    double secs = seconds_since(start);
    o.require(rc == 0, "build-graph exit status " + std::to_string(rc));
    std::size_t nodes = rc == 0 ? deserialize(t::slurp(tmp / "graph.json")).node_count() : 0;
    o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
    o.detail << files.size() << " files, " << nodes << " nodes, " << secs << " s on one thread";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"retrieval-oracle-equivalence", retrieval_oracle},
        {"edge-type-conformance", edge_conformance},
        {"identifier-recall-direction", recall_direction},
        {"hop-ablation-direction", hop_ablation},
        {"budget-law", budget_law},
        {"pipeline-determinism", determinism},
        {"metric-curated-pairs", metric_pairs},
        {"desk-scale-throughput", throughput},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
        failures += !o.pass;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
