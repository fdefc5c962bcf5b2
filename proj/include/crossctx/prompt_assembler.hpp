// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crossctx/context_graph.hpp"
#include "crossctx/error.hpp"
#include "crossctx/json_util.hpp"
#include "crossctx/retriever.hpp"
#include "crossctx/tokenizer.hpp"

namespace crossctx {

struct BundleEntity {
    std::string locale;
    std::string body;  // "#<locale>\n" + text + "[SUM]"
    NodeId node = 0;
    std::size_t tokens = 0;         // tokens in body
    std::size_t source_tokens = 0;  // tokens the untruncated body would have

    friend bool operator==(const BundleEntity&, const BundleEntity&) = default;
};

struct BundleMetadata {
    std::string project;
    std::string source_path;
    std::size_t cut_offset = 0;
    std::uint32_t cut_line = 1;
    std::uint32_t cut_col = 0;
    int k = 2;
    std::string tokenizer = "code";
    bool simplified = false;
    std::size_t max_entities = 128;
    std::size_t max_entity_tokens = 128;
    std::size_t retrieved = 0;  // entities in the retrieved context
    std::size_t dropped = 0;    // of those, cut by the entity-count budget

    friend bool operator==(const BundleMetadata&, const BundleMetadata&) = default;
};

struct PromptBundle {
    std::string id;
    std::string in_file_prefix;
    std::vector<BundleEntity> entities;
    std::optional<std::string> ground_truth;
    BundleMetadata metadata;

    friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

struct AssembleOptions {
    std::size_t max_entities = 128;
    std::size_t max_entity_tokens = 128;
    const TokenizerProfile* tokenizer = &code_tokenizer();
    /// Emit only locales and signature prototypes.
    bool simplified = false;
};

/// Signature prototype of an entity: decorated header for definitions, the
/// name for globals, the path for files.
inline std::string_view simplified_text(const ProjectEntity& e) {
    if (!e.signature.empty()) return e.signature;
    return e.kind == EntityKind::GlobalVar ? std::string_view(e.name) : std::string_view(e.text);
}

namespace detail {

inline std::string_view rstrip(std::string_view s) {
    while (!s.empty() && is_space_byte(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Locale comment, then the entity text cut to fit, then the terminator. The
/// whole body, terminator included, holds at most `budget` tokens. Whole
/// trailing lines are cut first; a first line that alone is too long is cut
/// by tokens. Throws BudgetTooSmall.
inline std::string assemble_entity_text(const ProjectEntity& entity, std::size_t budget,
                                        const TokenizerProfile& tok = code_tokenizer(), bool simplified = false) {
    std::string comment = "#" + entity.locale.str() + "\n";
    std::size_t comment_tokens = tok.count(comment);
    if (budget < 3 || comment_tokens + 2 > budget) {
        throw BudgetTooSmall("budget of " + std::to_string(budget) + " tokens cannot hold " + entity.locale.str());
    }
    std::string_view text = simplified ? simplified_text(entity) : std::string_view(entity.text);
    auto render = [&](std::string_view content) { return comment + std::string(content) + std::string(kSumToken); };
    auto fits = [&](const std::string& body) { return tok.count(body) <= budget; };

    std::string body = render(text);
    if (fits(body)) return body;

    // Longest whole-line prefix that fits. Tokens never span a line break, so
    // the count grows with the prefix and a binary search finds it.
    std::vector<std::size_t> line_ends;
    for (std::size_t nl = text.find('\n'); nl != std::string_view::npos; nl = text.find('\n', nl + 1)) {
        line_ends.push_back(nl);
    }
    std::size_t lo = 0, hi = line_ends.size();  // lo lines are known to fit
    while (lo < hi) {
        auto mid = lo + (hi - lo + 1) / 2;
        if (fits(render(detail::rstrip(text.substr(0, line_ends[mid - 1]))))) lo = mid;
        else hi = mid - 1;
    }
    if (lo > 0) {
        auto cand = detail::rstrip(text.substr(0, line_ends[lo - 1]));
        if (!cand.empty()) return render(cand);
    }

    auto first_line = text.substr(0, line_ends.empty() ? text.size() : line_ends.front());
    auto spans = tok.split(first_line);
    std::size_t n = std::min(spans.size(), budget - 1 - comment_tokens);
    while (n > 0) {
        body = render(detail::rstrip(first_line.substr(0, spans[n - 1].end)));
        if (fits(body)) return body;
        --n;
    }
    return render({});
}

/// Byte offset of the start of 1-based `line`, clamped to the end of the source.
inline std::size_t line_offset(std::string_view source, std::uint32_t line) {
    std::size_t off = 0;
    for (std::uint32_t l = 1; l < line; ++l) {
        auto nl = source.find('\n', off);
        if (nl == std::string_view::npos) return source.size();
        off = nl + 1;
    }
    return off;
}

/// Renders the first `max_entities` context entities in order; the others
/// are counted in metadata.dropped.
inline PromptBundle assemble_bundle(const RetrievedContext& ctx, const ContextGraph& g, std::string in_file_prefix,
                                    const AssembleOptions& opts = {}, BundleMetadata meta = {}) {
    PromptBundle b;
    b.in_file_prefix = std::move(in_file_prefix);
    meta.k = ctx.k;
    meta.tokenizer = opts.tokenizer->name;
    meta.simplified = opts.simplified;
    meta.max_entities = opts.max_entities;
    meta.max_entity_tokens = opts.max_entity_tokens;
    meta.retrieved = ctx.entities.size();
    std::size_t kept = std::min(ctx.entities.size(), opts.max_entities);
    meta.dropped = ctx.entities.size() - kept;
    for (std::size_t i = 0; i < kept; ++i) {
        const auto& n = g.node(ctx.entities[i]);
        BundleEntity e;
        e.locale = n.locale.str();
        e.body = assemble_entity_text(n, opts.max_entity_tokens, *opts.tokenizer, opts.simplified);
        e.node = n.id;
        e.tokens = opts.tokenizer->count(e.body);
        std::string_view text = opts.simplified ? simplified_text(n) : std::string_view(n.text);
        e.source_tokens = opts.tokenizer->count("#" + e.locale + "\n" + std::string(text) + std::string(kSumToken));
        b.entities.push_back(std::move(e));
    }
    b.metadata = std::move(meta);
    if (b.id.empty()) {
        b.id = b.metadata.source_path + ":" + std::to_string(b.metadata.cut_line) + ":" +
               std::to_string(b.metadata.cut_col);
    }
    return b;
}

inline Json bundle_to_json(const PromptBundle& b) {
    Json entities = Json::array();
    for (const auto& e : b.entities) {
        entities.push_back(Json{{"locale", e.locale}, {"body", e.body}, {"node", e.node}, {"tokens", e.tokens},
                                {"source_tokens", e.source_tokens}});
    }
    const auto& m = b.metadata;
    Json meta{{"project", m.project},
              {"source_path", m.source_path},
              {"cut_offset", m.cut_offset},
              {"cut_line", m.cut_line},
              {"cut_col", m.cut_col},
              {"k", m.k},
              {"tokenizer", m.tokenizer},
              {"simplified", m.simplified},
              {"max_entities", m.max_entities},
              {"max_entity_tokens", m.max_entity_tokens},
              {"retrieved", m.retrieved},
              {"dropped", m.dropped}};
    return Json{{"id", b.id},
                {"in_file_prefix", b.in_file_prefix},
                {"entities", std::move(entities)},
                {"ground_truth", b.ground_truth ? Json(*b.ground_truth) : Json(nullptr)},
                {"metadata", std::move(meta)}};
}

inline PromptBundle bundle_from_json(const Json& j, const std::string& where = "bundle") {
    PromptBundle b;
    b.id = detail::get_string(j, "id", where);
    b.in_file_prefix = detail::get_string(j, "in_file_prefix", where);
    const auto& entities = detail::get_array(j, "entities", where);
    for (std::size_t i = 0; i < entities.size(); ++i) {
        std::string w = where + ".entities[" + std::to_string(i) + "]";
        BundleEntity e;
        e.locale = detail::get_string(entities[i], "locale", w);
        e.body = detail::get_string(entities[i], "body", w);
        e.node = static_cast<NodeId>(detail::get_uint(entities[i], "node", w));
        e.tokens = detail::get_uint(entities[i], "tokens", w, UINT64_MAX);
        e.source_tokens = detail::get_uint(entities[i], "source_tokens", w, UINT64_MAX);
        b.entities.push_back(std::move(e));
    }
    const auto& gt = detail::field(j, "ground_truth", where);
    if (gt.is_string()) b.ground_truth = gt.get<std::string>();
    else if (!gt.is_null()) throw FormatError(where + ".ground_truth: expected a string or null");

    const auto& mj = detail::field(j, "metadata", where);
    std::string w = where + ".metadata";
    auto& m = b.metadata;
    m.project = detail::get_string(mj, "project", w);
    m.source_path = detail::get_string(mj, "source_path", w);
    m.cut_offset = detail::get_uint(mj, "cut_offset", w, UINT64_MAX);
    m.cut_line = static_cast<std::uint32_t>(detail::get_uint(mj, "cut_line", w));
    m.cut_col = static_cast<std::uint32_t>(detail::get_uint(mj, "cut_col", w));
    m.k = static_cast<int>(detail::get_uint(mj, "k", w, 1u << 20));
    m.tokenizer = detail::get_string(mj, "tokenizer", w);
    const auto& simp = detail::field(mj, "simplified", w);
    if (!simp.is_boolean()) throw FormatError(w + ".simplified: expected a boolean");
    m.simplified = simp.get<bool>();
    m.max_entities = detail::get_uint(mj, "max_entities", w, UINT64_MAX);
    m.max_entity_tokens = detail::get_uint(mj, "max_entity_tokens", w, UINT64_MAX);
    m.retrieved = detail::get_uint(mj, "retrieved", w, UINT64_MAX);
    m.dropped = detail::get_uint(mj, "dropped", w, UINT64_MAX);
    return b;
}

/// One bundle per line.
inline std::string bundles_to_jsonl(const std::vector<PromptBundle>& bundles) {
    std::string out;
    for (const auto& b : bundles) {
        out += detail::dump_json(bundle_to_json(b));
        out += '\n';
    }
    return out;
}

/// Visits each non-blank line of a JSON Lines document, parsed. Diagnostics
/// name the 1-based line.
template <class F>
void for_each_jsonl(std::string_view text, std::string_view what, F&& f) {
    std::size_t line_no = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        auto nl = text.find('\n', i);
        auto line = text.substr(i, nl == std::string_view::npos ? std::string_view::npos : nl - i);
        i = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (detail::rstrip(line).empty()) continue;
        std::string where = std::string(what) + ":" + std::to_string(line_no);
        f(detail::parse_json(line, where), where);
    }
}

inline std::vector<PromptBundle> bundles_from_jsonl(std::string_view text) {
    std::vector<PromptBundle> out;
    for_each_jsonl(text, "bundles", [&](const Json& j, const std::string& where) {
        out.push_back(bundle_from_json(j, where));
    });
    return out;
}

}  // namespace crossctx
