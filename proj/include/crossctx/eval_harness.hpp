// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crossctx/context_graph.hpp"
#include "crossctx/import_resolver.hpp"
#include "crossctx/json_util.hpp"
#include "crossctx/metrics.hpp"
#include "crossctx/project_files.hpp"
#include "crossctx/prompt_assembler.hpp"
#include "crossctx/retriever.hpp"

namespace crossctx {

struct PromptOptions {
    int k = 2;
    AssembleOptions assemble;
    ImportOptions imports;
};

/// A statement picked as a completion target: its byte range in the file and
/// the cross-file entity its call resolves to.
struct CompletionTarget {
    std::size_t begin = 0;
    std::size_t end = 0;
    python::Position pos;
    NodeId callee = 0;
};

namespace detail {

struct Bindings {
    std::vector<std::pair<std::string, std::string>> names;  // name -> locale, in import order
    std::vector<std::string> stars;                          // star-imported modules
    std::vector<python::Position> at;                        // position of each import above
    std::vector<python::Position> star_at;
};

inline bool before(const python::Position& a, std::uint32_t line, std::uint32_t col) {
    return a.line < line || (a.line == line && a.col < col);
}

inline Bindings collect_bindings(const ContextGraph& g, const std::vector<ImportRef>& refs) {
    Bindings b;
    for (const auto& r : refs) {
        python::Position p{r.span.start_line, r.span.start_col, 0};
        if (r.binding == "*") {
            b.stars.push_back(r.module_path);
            b.star_at.push_back(p);
            continue;
        }
        std::string locale = r.target;
        // A symbol may live elsewhere through a re-export.
        if (r.symbol) {
            if (auto id = try_locate_node(g, r)) locale = g.node(*id).locale.str();
        }
        b.names.emplace_back(r.binding, locale);
        b.at.push_back(p);
    }
    return b;
}

/// Node a dotted callee denotes through the imports written before `pos`.
inline std::optional<NodeId> resolve_callee(const ContextGraph& g, const Bindings& b,
                                            const std::vector<std::string_view>& chain, python::Position pos) {
    std::optional<std::string> base;
    // The latest import of a name wins.
    for (std::size_t i = b.names.size(); i-- > 0;) {
        if (b.names[i].first == chain.front() && before(b.at[i], pos.line, pos.col)) {
            base = b.names[i].second;
            break;
        }
    }
    auto lookup = [&](std::string locale, std::size_t from) -> std::optional<NodeId> {
        for (std::size_t i = from; i < chain.size(); ++i) locale += "." + std::string(chain[i]);
        auto id = g.find(locale);
        if (id && g.node(*id).kind != EntityKind::File) return id;
        return std::nullopt;
    };
    if (base) return lookup(*base, 1);
    for (std::size_t i = b.stars.size(); i-- > 0;) {
        if (!before(b.star_at[i], pos.line, pos.col)) continue;
        if (auto id = lookup(b.stars[i], 0)) return id;
    }
    return std::nullopt;
}

/// Calls in tokens [first, last): each callee's dotted name chain.
inline std::vector<std::vector<std::string_view>> call_chains(const python::Module& m, std::size_t first,
                                                              std::size_t last) {
    using python::TokenKind;
    std::vector<std::vector<std::string_view>> out;
    for (std::size_t i = first + 1; i < last; ++i) {
        if (!m.token(i).is_op("(")) continue;
        std::size_t j = i - 1;
        const auto& callee = m.token(j);
        if (callee.kind != TokenKind::Name || python::is_keyword(callee.text)) continue;
        std::vector<std::string_view> chain{callee.text};
        while (j >= first + 2 && m.token(j - 1).is_op(".") && m.token(j - 2).kind == TokenKind::Name) {
            j -= 2;
            chain.push_back(m.token(j).text);
        }
        // Attribute of a call result or subscript, or a definition header.
        if (j > first && (m.token(j - 1).is_op(".") || m.token(j - 1).is_name("def") ||
                          m.token(j - 1).is_name("class"))) {
            continue;
        }
        std::reverse(chain.begin(), chain.end());
        out.push_back(std::move(chain));
    }
    return out;
}

inline void collect_targets(const python::Module& m, const std::vector<python::Statement>& body,
                            const ContextGraph& g, const Bindings& b, std::string_view path,
                            std::vector<CompletionTarget>& out) {
    using python::StmtKind;
    for (const auto& s : body) {
        std::size_t scan_end = s.compound() ? s.colon : s.last;
        auto pos = s.kind == StmtKind::FunctionDef || s.kind == StmtKind::ClassDef ? m.begin_of(s)
                                                                                    : m.token(s.first).begin;
        if (s.kind != StmtKind::Import && s.kind != StmtKind::ImportFrom) {
            for (const auto& chain : call_chains(m, s.decorator_first, scan_end)) {
                auto id = resolve_callee(g, b, chain, pos);
                if (!id || g.node(*id).span.file_path == path) continue;
                std::size_t end = s.compound() ? m.token(s.colon).end.offset : m.token(s.last - 1).end.offset;
                out.push_back({pos.offset, end, pos, *id});
                break;
            }
        }
        if (!s.body.empty()) collect_targets(m, s.body, g, b, path, out);
    }
}

inline std::string project_name(const ContextGraph& g) {
    auto p = std::filesystem::path(g.project_root()).lexically_normal();
    if (!p.has_filename()) p = p.parent_path();
    return p.filename().string();
}

}  // namespace detail

/// Statements of one file whose call resolves, through the file's own local
/// imports, to an entity defined in another project file. Simple statements
/// at any depth and compound headers are considered. Ordered by position.
inline std::vector<CompletionTarget> find_completion_targets(const ContextGraph& g, const python::Module& m,
                                                             const ImportOptions& opts = {}) {
    auto refs = get_local_import_stmts(m, ModuleIndex::from_graph(g), opts);
    auto bindings = detail::collect_bindings(g, refs);
    std::vector<CompletionTarget> out;
    detail::collect_targets(m, m.body, g, bindings, m.path, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });
    return out;
}

/// One bundle per completion target: the prefix is the file up to the
/// statement, the ground truth is the statement, the context comes from the
/// prefix's imports.
inline std::vector<PromptBundle> build_file_prompts(const ContextGraph& g, std::string_view path,
                                                    std::string_view source, const PromptOptions& opts = {}) {
    std::vector<PromptBundle> out;
    python::Module m;
    try {
        m = python::parse_module(std::string(source), std::string(path));
    } catch (const ParseError&) {
        return out;
    }
    for (const auto& t : find_completion_targets(g, m, opts.imports)) {
        std::string prefix(m.slice(0, t.begin));
        RetrievedContext ctx;
        try {
            ctx = retrieve_context(g, path, prefix, opts.k, opts.imports);
        } catch (const ParseError&) {
            continue;
        }
        BundleMetadata meta;
        meta.project = detail::project_name(g);
        meta.source_path = std::string(path);
        meta.cut_offset = t.begin;
        meta.cut_line = t.pos.line;
        meta.cut_col = t.pos.col;
        auto b = assemble_bundle(ctx, g, std::move(prefix), opts.assemble, std::move(meta));
        b.ground_truth = std::string(m.slice(t.begin, t.end));
        out.push_back(std::move(b));
    }
    return out;
}

/// Prompts for every file of the graph, read from `project_root`, in path order.
inline std::vector<PromptBundle> build_completion_prompts(const std::filesystem::path& project_root,
                                                          const ContextGraph& g, const PromptOptions& opts = {}) {
    std::vector<PromptBundle> out;
    for (const auto& n : g.nodes()) {
        if (n.kind != EntityKind::File) continue;
        auto source = read_text_file(project_root / n.span.file_path);
        auto file = build_file_prompts(g, n.span.file_path, source, opts);
        std::move(file.begin(), file.end(), std::back_inserter(out));
    }
    return out;
}

enum class RecallScope { InFile, InFilePlusContext };

namespace detail {

inline std::string strip_sum(std::string_view body) {
    std::string out(body);
    for (auto p = out.find(kSumToken); p != std::string::npos; p = out.find(kSumToken, p)) {
        out.erase(p, kSumToken.size());
    }
    return out;
}

}  // namespace detail

/// Ground-truth identifiers found in the scope's text, micro-averaged over
/// bundles, as a percentage. 100 when no bundle has a ground-truth identifier.
inline double identifier_recall(const std::vector<PromptBundle>& bundles, RecallScope scope) {
    std::size_t found = 0;
    std::size_t total = 0;
    for (const auto& b : bundles) {
        if (!b.ground_truth) continue;
        auto gt = extract_identifiers(*b.ground_truth);
        if (gt.empty()) continue;
        std::unordered_set<std::string> avail;
        for (auto& id : extract_identifiers(b.in_file_prefix)) avail.insert(std::move(id));
        if (scope == RecallScope::InFilePlusContext) {
            for (const auto& e : b.entities) {
                for (auto& id : extract_identifiers(detail::strip_sum(e.body))) avail.insert(std::move(id));
            }
        }
        total += gt.size();
        for (const auto& id : gt) found += avail.contains(id);
    }
    return total == 0 ? 100.0 : 100.0 * static_cast<double>(found) / static_cast<double>(total);
}

struct Summary {
    double mean = 0;
    double median = 0;
    double min = 0;
    double max = 0;
};

inline Summary summarize(std::vector<double> v) {
    Summary s;
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    double sum = 0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    s.min = v.front();
    s.max = v.back();
    auto n = v.size();
    s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    return s;
}

inline constexpr std::size_t kStatThresholds[] = {32, 64, 128, 256};

struct ThresholdCount {
    std::size_t threshold = 0;
    std::size_t count = 0;
    double percent = 0;
};

struct RetrievalStats {
    std::size_t bundles = 0;
    std::size_t entities = 0;
    std::vector<ThresholdCount> entity_count;   // bundles whose retrieved context exceeds the threshold
    std::vector<ThresholdCount> entity_tokens;  // entities whose untruncated body exceeds the threshold
    Summary prompt_tokens;                      // in-file prefix
    Summary context_tokens;                     // sum of rendered entity bodies
    Summary context_entities;                   // retrieved entities per bundle
};

inline RetrievalStats retrieval_stats(const std::vector<PromptBundle>& bundles,
                                      const TokenizerProfile& tok = code_tokenizer()) {
    RetrievalStats s;
    s.bundles = bundles.size();
    std::vector<double> prompt, context, counts;
    std::vector<std::size_t> entity_sizes;
    for (const auto& b : bundles) {
        prompt.push_back(static_cast<double>(tok.count(b.in_file_prefix)));
        double ctx = 0;
        for (const auto& e : b.entities) {
            ctx += static_cast<double>(e.tokens);
            entity_sizes.push_back(e.source_tokens);
        }
        context.push_back(ctx);
        counts.push_back(static_cast<double>(b.metadata.retrieved));
    }
    s.entities = entity_sizes.size();
    auto pct = [](std::size_t c, std::size_t n) { return n == 0 ? 0.0 : 100.0 * static_cast<double>(c) / static_cast<double>(n); };
    for (auto t : kStatThresholds) {
        std::size_t over_count = 0;
        for (double c : counts) over_count += c > static_cast<double>(t);
        s.entity_count.push_back({t, over_count, pct(over_count, s.bundles)});
        std::size_t over_tokens = 0;
        for (auto n : entity_sizes) over_tokens += n > t;
        s.entity_tokens.push_back({t, over_tokens, pct(over_tokens, s.entities)});
    }
    s.prompt_tokens = summarize(std::move(prompt));
    s.context_tokens = summarize(std::move(context));
    s.context_entities = summarize(std::move(counts));
    return s;
}

inline Json stats_to_json(const RetrievalStats& s) {
    auto summary = [](const Summary& x) {
        return Json{{"mean", x.mean}, {"median", x.median}, {"min", x.min}, {"max", x.max}};
    };
    auto counts = [](const std::vector<ThresholdCount>& v) {
        Json out = Json::array();
        for (const auto& t : v) out.push_back(Json{{"threshold", t.threshold}, {"count", t.count}, {"percent", t.percent}});
        return out;
    };
    return Json{{"bundles", s.bundles},
                {"entities", s.entities},
                {"entity_count_above", counts(s.entity_count)},
                {"entity_tokens_above", counts(s.entity_tokens)},
                {"prompt_tokens", summary(s.prompt_tokens)},
                {"context_tokens", summary(s.context_tokens)},
                {"context_entities", summary(s.context_entities)}};
}

struct Prediction {
    std::string bundle_id;
    std::string prediction;
};

inline std::vector<Prediction> predictions_from_jsonl(std::string_view text) {
    std::vector<Prediction> out;
    for_each_jsonl(text, "predictions", [&](const Json& j, const std::string& where) {
        out.push_back({detail::get_string(j, "bundle_id", where), detail::get_string(j, "prediction", where)});
    });
    return out;
}

inline std::string predictions_to_jsonl(const std::vector<Prediction>& preds) {
    std::string out;
    for (const auto& p : preds) {
        out += detail::dump_json(Json{{"bundle_id", p.bundle_id}, {"prediction", p.prediction}});
        out += '\n';
    }
    return out;
}

struct Scores {
    double code_em = 0;
    double bleu4 = 0;
    double id_em = 0;
    double id_precision = 0;
    double id_recall = 0;
};

struct EvalRecord {
    std::string bundle_id;
    std::string prediction;
    bool missing = false;  // no prediction given; scored as empty
    Scores scores;
};

inline Scores score(std::string_view prediction, std::string_view ground_truth) {
    auto cm = code_match(prediction, ground_truth);
    auto im = id_match(extract_identifiers(prediction), extract_identifiers(ground_truth));
    return {cm.em, cm.bleu4, im.em, im.precision, im.recall};
}

struct EvalReport {
    std::vector<EvalRecord> records;
    Scores mean;
    std::size_t missing = 0;
    double recall_in_file = 0;
    double recall_in_file_plus_ctx = 0;
};

/// Scores each bundle that has a ground truth against its prediction.
/// Throws FormatError on unknown or duplicate prediction ids.
inline EvalReport evaluate(const std::vector<PromptBundle>& bundles, const std::vector<Prediction>& predictions) {
    std::map<std::string, const Prediction*> by_id;
    std::set<std::string> bundle_ids;
    for (const auto& b : bundles) bundle_ids.insert(b.id);
    for (const auto& p : predictions) {
        if (!bundle_ids.contains(p.bundle_id)) throw FormatError("prediction for unknown bundle " + p.bundle_id);
        if (!by_id.emplace(p.bundle_id, &p).second) throw FormatError("duplicate prediction for bundle " + p.bundle_id);
    }
    EvalReport r;
    for (const auto& b : bundles) {
        if (!b.ground_truth) continue;
        EvalRecord rec;
        rec.bundle_id = b.id;
        auto it = by_id.find(b.id);
        rec.missing = it == by_id.end();
        if (!rec.missing) rec.prediction = it->second->prediction;
        r.missing += rec.missing;
        rec.scores = score(rec.prediction, *b.ground_truth);
        r.records.push_back(std::move(rec));
    }
    if (!r.records.empty()) {
        for (const auto& rec : r.records) {
            r.mean.code_em += rec.scores.code_em;
            r.mean.bleu4 += rec.scores.bleu4;
            r.mean.id_em += rec.scores.id_em;
            r.mean.id_precision += rec.scores.id_precision;
            r.mean.id_recall += rec.scores.id_recall;
        }
        double n = static_cast<double>(r.records.size());
        r.mean = {r.mean.code_em / n, r.mean.bleu4 / n, r.mean.id_em / n, r.mean.id_precision / n,
                  r.mean.id_recall / n};
    }
    r.recall_in_file = identifier_recall(bundles, RecallScope::InFile);
    r.recall_in_file_plus_ctx = identifier_recall(bundles, RecallScope::InFilePlusContext);
    return r;
}

inline Json scores_to_json(const Scores& s) {
    return Json{{"code_em", s.code_em},
                {"bleu4", s.bleu4},
                {"id_em", s.id_em},
                {"id_precision", s.id_precision},
                {"id_recall", s.id_recall}};
}

inline Json report_to_json(const EvalReport& r) {
    Json records = Json::array();
    for (const auto& rec : r.records) {
        records.push_back(Json{{"bundle_id", rec.bundle_id}, {"missing", rec.missing}, {"scores", scores_to_json(rec.scores)}});
    }
    return Json{{"normalization", "exact match compares text after stripping trailing whitespace per line"},
                {"records_scored", r.records.size()},
                {"missing_predictions", r.missing},
                {"mean", scores_to_json(r.mean)},
                {"identifier_recall", Json{{"in_file", r.recall_in_file}, {"in_file_plus_ctx", r.recall_in_file_plus_ctx}}},
                {"records", std::move(records)}};
}

}  // namespace crossctx
