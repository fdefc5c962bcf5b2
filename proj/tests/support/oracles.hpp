// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

// Independent reference computations the library is checked against.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crossctx/context_graph.hpp"

namespace crossctx::testing {

/// Square boolean matrix, one bit row per node.
class BitMatrix {
public:
    explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    void set(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64); }
    bool get(std::size_t r, std::size_t c) const { return bits_[r * words_ + c / 64] >> (c % 64) & 1; }
    std::size_t size() const noexcept { return n_; }

    BitMatrix operator*(const BitMatrix& o) const {
        BitMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (!get(i, j)) continue;
                for (std::size_t w = 0; w < words_; ++w) out.bits_[i * words_ + w] |= o.bits_[j * words_ + w];
            }
        }
        return out;
    }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

/// (I + A)^k for the adjacency matrix A over all edge types: row r holds the
/// nodes within k hops of r.
inline BitMatrix reachability_within(const ContextGraph& g, int k) {
    auto step = BitMatrix::identity(g.node_count());
    for (const auto& e : g.edges()) step.set(e.tail, e.head);
    auto acc = BitMatrix::identity(g.node_count());
    for (int i = 0; i < k; ++i) acc = acc * step;
    return acc;
}

inline std::set<NodeId> row_set(const BitMatrix& m, NodeId r) {
    std::set<NodeId> out;
    for (std::size_t c = 0; c < m.size(); ++c) {
        if (m.get(r, c)) out.insert(static_cast<NodeId>(c));
    }
    return out;
}

/// Textbook sentence BLEU-4 with add-one smoothing on orders 2..4, written
/// with string-keyed n-gram tables.
inline double reference_bleu4(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
    auto grams = [](const std::vector<std::string>& toks, std::size_t n) {
        std::map<std::string, int> out;
        for (std::size_t i = 0; i + n <= toks.size(); ++i) {
            std::string key;
            for (std::size_t j = 0; j < n; ++j) key += toks[i + j] + '\x1f';
            ++out[key];
        }
        return out;
    };
    if (cand.empty()) return ref.empty() ? 1.0 : 0.0;
    double log_p = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto c = grams(cand, n);
        auto r = grams(ref, n);
        int clipped = 0;
        int total = 0;
        for (const auto& [g, cnt] : c) {
            total += cnt;
            auto it = r.find(g);
            clipped += std::min(cnt, it == r.end() ? 0 : it->second);
        }
        double p = n == 1 ? double(clipped) / double(total) : double(clipped + 1) / double(total + 1);
        if (p <= 0) return 0.0;
        log_p += std::log(p) / 4.0;
    }
    double bp = cand.size() > ref.size() ? 1.0 : std::exp(1.0 - double(ref.size()) / double(cand.size()));
    return bp * std::exp(log_p);
}

/// Names bound at file scope, found by scanning column-0 lines: def, async
/// def, class, and `name =` / `name:` assignments. Good enough for sources
/// without column-0 continuation lines inside strings.
inline std::vector<std::string> scan_top_level_names(const std::string& source) {
    std::vector<std::string> out;
    std::size_t i = 0;
    bool in_triple = false;
    while (i < source.size()) {
        auto nl = source.find('\n', i);
        std::string line = source.substr(i, nl == std::string::npos ? std::string::npos : nl - i);
        i = nl == std::string::npos ? source.size() : nl + 1;
        auto triples = [&] {
            std::size_t c = 0;
            for (auto p = line.find("\"\"\""); p != std::string::npos; p = line.find("\"\"\"", p + 3)) ++c;
            return c;
        }();
        bool was_in = in_triple;
        if (triples % 2) in_triple = !in_triple;
        if (was_in || line.empty() || line[0] == ' ' || line[0] == '\t' || line[0] == '#') continue;
        auto ident = [&](std::size_t p) {
            std::size_t e = p;
            while (e < line.size() && (std::isalnum(static_cast<unsigned char>(line[e])) || line[e] == '_')) ++e;
            return line.substr(p, e - p);
        };
        if (line.rfind("def ", 0) == 0) out.push_back(ident(4));
        else if (line.rfind("async def ", 0) == 0) out.push_back(ident(10));
        else if (line.rfind("class ", 0) == 0) out.push_back(ident(6));
        else {
            auto name = ident(0);
            if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) continue;
            auto rest = line.substr(name.size());
            auto p = rest.find_first_not_of(' ');
            if (p == std::string::npos) continue;
            if ((rest[p] == '=' && (p + 1 >= rest.size() || rest[p + 1] != '=')) || rest[p] == ':') {
                static const std::set<std::string> kw{"if", "for", "while", "with", "try", "else", "elif",
                                                      "except", "finally", "match", "case", "import", "from"};
                if (!kw.contains(name)) out.push_back(name);
            }
        }
    }
    return out;
}

}  // namespace crossctx::testing
