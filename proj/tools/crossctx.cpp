// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

// Command-line front end: build-graph, retrieve, assemble, make-prompts, eval, stats.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 validation failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crossctx/crossctx.hpp"

namespace fs = std::filesystem;
using namespace crossctx;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

class UsageError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

void add_config_options(CLI::App& cmd, Config& cfg, bool retrieval, bool assembly) {
    if (retrieval) {
        cmd.add_option("--k", cfg.k, "Hop budget for context retrieval")->envname("CROSSCTX_K")->capture_default_str();
        cmd.add_flag("--include-function-imports", cfg.include_function_imports,
                     "Also anchor on imports inside function bodies")
            ->envname("CROSSCTX_INCLUDE_FUNCTION_IMPORTS");
    }
    if (assembly) {
        cmd.add_option("--max-entities", cfg.max_entities, "Entities kept per prompt")
            ->envname("CROSSCTX_MAX_ENTITIES")
            ->capture_default_str();
        cmd.add_option("--max-entity-tokens", cfg.max_entity_tokens, "Token budget per entity, terminator included")
            ->envname("CROSSCTX_MAX_ENTITY_TOKENS")
            ->capture_default_str();
        cmd.add_option("--tokenizer", cfg.tokenizer, "Tokenizer profile (code, whitespace)")
            ->envname("CROSSCTX_TOKENIZER")
            ->capture_default_str();
        cmd.add_flag("--simplified", cfg.simplified, "Emit locales and signature prototypes only")
            ->envname("CROSSCTX_SIMPLIFIED");
    }
}

AssembleOptions assemble_options(const Config& cfg) {
    AssembleOptions o;
    o.max_entities = cfg.max_entities;
    o.max_entity_tokens = cfg.max_entity_tokens;
    o.tokenizer = &tokenizer_by_name(cfg.tokenizer);
    o.simplified = cfg.simplified;
    return o;
}

void write_json(const fs::path& out, const Json& j, int indent = 1) {
    atomic_write(out, detail::dump_json(j, indent) + "\n");
}

ContextGraph load_graph(const fs::path& path) { return deserialize(read_text_file(path)); }

fs::path root_for(const ContextGraph& g, const std::optional<fs::path>& override_root) {
    if (override_root) return *override_root;
    if (g.project_root().empty()) throw UsageError("graph records no project root; pass --project-root");
    return g.project_root();
}

/// Project-relative form of `file`; absolute paths are made relative to the root.
std::string relative_file(const fs::path& root, const std::string& file) {
    fs::path p(file);
    std::string rel = p.is_absolute() ? fs::relative(p, fs::absolute(root)).generic_string()
                                      : p.lexically_normal().generic_string();
    if (!is_project_relative(rel)) throw UsageError(file + " is not inside the project root");
    return rel;
}

int run_build_graph(const fs::path& root, const fs::path& out, const std::optional<fs::path>& report_path,
                    const Config& cfg) {
    BuildOptions opts;
    opts.max_nodes = cfg.max_nodes;
    opts.threads = cfg.threads;
    opts.imports.include_function_imports = cfg.include_function_imports;
    BuildReport report;
    auto g = build_graph(root, opts, &report);
    for (const auto& s : report.skipped) std::cerr << "warning: skipped " << s.message << "\n";
    auto violations = validate(g);
    for (const auto& v : violations) std::cerr << "violation: " << v.message << "\n";
    if (!violations.empty()) throw ValidationError(std::to_string(violations.size()) + " graph violations");
    atomic_write(out, serialize(g));
    if (report_path) {
        Json skipped = Json::array();
        for (const auto& s : report.skipped) skipped.push_back(Json{{"path", s.path}, {"message", s.message}});
        Json imports = Json::array();
        for (const auto& d : report.imports) {
            imports.push_back(Json{{"path", d.path},
                                   {"local", d.local},
                                   {"non_local", d.non_local},
                                   {"unresolved", d.unresolved},
                                   {"unresolved_names", d.unresolved_names}});
        }
        write_json(*report_path, Json{{"nodes", report.nodes},
                                      {"edges", report.edges},
                                      {"skipped", std::move(skipped)},
                                      {"dropped", report.dropped},
                                      {"imports", std::move(imports)}});
    }
    std::cerr << "graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges, "
              << report.skipped.size() << " files skipped\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Project context graph builder and cross-file context retriever"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "crossctx 0.1.0");

    Config cfg;
    std::string graph_path, out_path, file, context_path, bundles_path, predictions_path;
    std::optional<std::string> root_override, report_path, source_path;
    std::optional<std::uint32_t> cut_line;

    auto* build = app.add_subcommand("build-graph", "Parse a project and write its context graph");
    build->add_option("--project-root", cfg.project_root, "Project directory")
        ->required()
        ->envname("CROSSCTX_PROJECT_ROOT");
    build->add_option("--out", out_path, "Graph JSON output")->required();
    build->add_option("--report", report_path, "Build report JSON output");
    build->add_option("--max-nodes", cfg.max_nodes, "Largest accepted graph")
        ->envname("CROSSCTX_MAX_NODES")
        ->capture_default_str();
    build->add_option("--threads", cfg.threads, "Parser threads (0 = all cores)")->envname("CROSSCTX_THREADS");
    build->add_flag("--include-function-imports", cfg.include_function_imports,
                    "Also link imports made inside function bodies")
        ->envname("CROSSCTX_INCLUDE_FUNCTION_IMPORTS");

    auto* retrieve = app.add_subcommand("retrieve", "Retrieve the cross-file context of one file");
    retrieve->add_option("--graph", graph_path, "Graph JSON")->required();
    retrieve->add_option("--file", file, "Project-relative path of the querying file")->required();
    retrieve->add_option("--source", source_path, "Read the file contents from here instead");
    retrieve->add_option("--project-root", root_override, "Override the graph's project root")
        ->envname("CROSSCTX_PROJECT_ROOT");
    retrieve->add_option("--out", out_path, "Context JSON output")->required();
    add_config_options(*retrieve, cfg, true, false);

    auto* assemble = app.add_subcommand("assemble", "Render a retrieved context into a prompt bundle");
    assemble->add_option("--graph", graph_path, "Graph JSON")->required();
    assemble->add_option("--context", context_path, "Context JSON from retrieve")->required();
    assemble->add_option("--file", file, "Project-relative path of the querying file")->required();
    assemble->add_option("--source", source_path, "Read the file contents from here instead");
    assemble->add_option("--project-root", root_override, "Override the graph's project root")
        ->envname("CROSSCTX_PROJECT_ROOT");
    assemble->add_option("--cut-line", cut_line, "1-based line the in-file prefix stops before (default: whole file)");
    assemble->add_option("--out", out_path, "Bundle JSON Lines output")->required();
    add_config_options(*assemble, cfg, false, true);

    auto* prompts = app.add_subcommand("make-prompts", "Cut completion prompts from every project file");
    prompts->add_option("--graph", graph_path, "Graph JSON")->required();
    prompts->add_option("--project-root", root_override, "Override the graph's project root")
        ->envname("CROSSCTX_PROJECT_ROOT");
    prompts->add_option("--out", out_path, "Bundle JSON Lines output")->required();
    add_config_options(*prompts, cfg, true, true);

    auto* eval = app.add_subcommand("eval", "Score predictions against bundle ground truths");
    eval->add_option("--bundles", bundles_path, "Bundle JSON Lines")->required();
    eval->add_option("--predictions", predictions_path, "Predictions JSON Lines")->required();
    eval->add_option("--report", out_path, "Report JSON output")->required();

    auto* stats = app.add_subcommand("stats", "Retrieval size statistics of a bundle set");
    stats->add_option("--bundles", bundles_path, "Bundle JSON Lines")->required();
    stats->add_option("--out", out_path, "Statistics JSON output")->required();
    stats->add_option("--tokenizer", cfg.tokenizer, "Tokenizer profile for prompt lengths")
        ->envname("CROSSCTX_TOKENIZER")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        cfg.validate();
        ImportOptions imports;
        imports.include_function_imports = cfg.include_function_imports;

        if (*build) {
            return run_build_graph(cfg.project_root, out_path,
                                   report_path ? std::optional<fs::path>(*report_path) : std::nullopt, cfg);
        }
        if (*retrieve || *assemble) {
            auto g = load_graph(graph_path);
            auto root = root_for(g, root_override ? std::optional<fs::path>(*root_override) : std::nullopt);
            auto rel = relative_file(root, file);
            auto source = read_text_file(source_path ? fs::path(*source_path) : root / rel);
            if (*retrieve) {
                auto ctx = retrieve_context(g, rel, source, cfg.k, imports);
                write_json(out_path, context_to_json(ctx, g, rel));
                std::cerr << "context: " << ctx.entities.size() << " entities from " << ctx.anchors.size()
                          << " anchors\n";
                return 0;
            }
            auto ctx = context_from_json(detail::parse_json(read_text_file(context_path), "context"), g);
            BundleMetadata meta;
            meta.project = detail::project_name(g);
            meta.source_path = rel;
            meta.cut_line = cut_line.value_or(0);
            meta.cut_offset = cut_line ? line_offset(source, *cut_line) : source.size();
            if (!cut_line) {
                auto end = detail::end_of_source(source);
                meta.cut_line = end.line;
                meta.cut_col = end.col;
            }
            auto bundle = assemble_bundle(ctx, g, source.substr(0, meta.cut_offset), assemble_options(cfg), meta);
            atomic_write(out_path, bundles_to_jsonl({bundle}));
            std::cerr << "bundle: " << bundle.entities.size() << " entities, " << bundle.metadata.dropped
                      << " dropped\n";
            return 0;
        }
        if (*prompts) {
            auto g = load_graph(graph_path);
            auto root = root_for(g, root_override ? std::optional<fs::path>(*root_override) : std::nullopt);
            PromptOptions opts;
            opts.k = cfg.k;
            opts.assemble = assemble_options(cfg);
            opts.imports = imports;
            auto bundles = build_completion_prompts(root, g, opts);
            atomic_write(out_path, bundles_to_jsonl(bundles));
            std::cerr << "prompts: " << bundles.size() << " bundles\n";
            return 0;
        }
        if (*eval) {
            auto bundles = bundles_from_jsonl(read_text_file(bundles_path));
            auto preds = predictions_from_jsonl(read_text_file(predictions_path));
            auto report = evaluate(bundles, preds);
            write_json(out_path, report_to_json(report));
            std::cerr << "eval: " << report.records.size() << " records, " << report.missing
                      << " without prediction\n";
            return 0;
        }
        if (*stats) {
            auto bundles = bundles_from_jsonl(read_text_file(bundles_path));
            write_json(out_path, stats_to_json(retrieval_stats(bundles, tokenizer_by_name(cfg.tokenizer))));
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        // GraphTooLarge, EmptyProject, BudgetTooSmall, ParseError, graph violations.
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
