// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crossctx/python/lexer.hpp"
#include "crossctx/tokenizer.hpp"

namespace crossctx {

namespace detail {

inline std::size_t skip_string(std::string_view code, std::size_t i) {
    char q = code[i];
    bool triple = code.substr(i, 3) == std::string(3, q);
    std::size_t j = i + (triple ? 3 : 1);
    while (j < code.size()) {
        if (code[j] == '\\') {
            j += 2;
        } else if (triple ? code.substr(j, 3) == std::string(3, q) : code[j] == q) {
            return j + (triple ? 3 : 1);
        } else if (!triple && code[j] == '\n') {
            return j;
        } else {
            ++j;
        }
    }
    return code.size();
}

inline bool is_string_prefix(std::string_view s) {
    if (s.size() > 2) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::string_view("rRbBuUfFtT").find(c) != std::string_view::npos; });
}

}  // namespace detail

/// Identifier tokens of a code fragment in source order, keywords, literals
/// and comments excluded, duplicates kept. Works on fragments that do not parse.
inline std::vector<std::string> extract_identifiers(std::string_view code) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < code.size()) {
        auto c = static_cast<unsigned char>(code[i]);
        if (c == '#') {
            while (i < code.size() && code[i] != '\n') ++i;
        } else if (c == '"' || c == '\'') {
            i = detail::skip_string(code, i);
        } else if ((c >= '0' && c <= '9') ||
                   (c == '.' && i + 1 < code.size() && code[i + 1] >= '0' && code[i + 1] <= '9')) {
            while (i < code.size()) {
                char d = code[i];
                if ((d == 'e' || d == 'E') && i + 1 < code.size() && (code[i + 1] == '+' || code[i + 1] == '-')) {
                    i += 2;
                } else if (python::is_name_char(static_cast<unsigned char>(d)) || d == '.') {
                    ++i;
                } else {
                    break;
                }
            }
        } else if (python::is_name_start(c)) {
            std::size_t b = i;
            while (i < code.size() && python::is_name_char(static_cast<unsigned char>(code[i]))) ++i;
            auto name = code.substr(b, i - b);
            if (i < code.size() && (code[i] == '"' || code[i] == '\'') && detail::is_string_prefix(name)) {
                i = detail::skip_string(code, i);
            } else if (!python::is_keyword(name)) {
                out.emplace_back(name);
            }
        } else {
            ++i;
        }
    }
    return out;
}

struct IdMatch {
    double em = 0;
    double precision = 0;
    double recall = 0;
};

/// Order-sensitive exact match; precision and recall over the multiset overlap.
inline IdMatch id_match(const std::vector<std::string>& pred, const std::vector<std::string>& gt) {
    if (pred.empty() && gt.empty()) return {1, 1, 1};
    std::map<std::string_view, long> counts;
    for (const auto& g : gt) ++counts[g];
    long overlap = 0;
    for (const auto& p : pred) {
        auto it = counts.find(p);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    IdMatch m;
    m.em = pred == gt ? 1 : 0;
    m.precision = pred.empty() ? 0 : static_cast<double>(overlap) / static_cast<double>(pred.size());
    m.recall = gt.empty() ? 0 : static_cast<double>(overlap) / static_cast<double>(gt.size());
    return m;
}

/// Drops trailing blanks from every line and from the whole text.
inline std::string normalize_trailing_whitespace(std::string_view s) {
    std::string out;
    std::size_t i = 0;
    while (i <= s.size()) {
        auto nl = s.find('\n', i);
        auto line = s.substr(i, nl == std::string_view::npos ? std::string_view::npos : nl - i);
        while (!line.empty() && detail::is_space_byte(line.back())) line.remove_suffix(1);
        out.append(line);
        if (nl == std::string_view::npos) break;
        out.push_back('\n');
        i = nl + 1;
    }
    while (!out.empty() && detail::is_space_byte(out.back())) out.pop_back();
    return out;
}

/// Sentence BLEU-4 over code tokens. Unigram precision is plain; orders 2-4
/// use add-one smoothing.
inline double bleu4(const std::vector<std::string_view>& cand, const std::vector<std::string_view>& ref) {
    if (cand.empty()) return ref.empty() ? 1.0 : 0.0;
    double log_sum = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        std::map<std::vector<std::string_view>, long> ref_counts;
        for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[{ref.begin() + i, ref.begin() + i + n}];
        long matches = 0;
        long total = 0;
        for (std::size_t i = 0; i + n <= cand.size(); ++i, ++total) {
            auto it = ref_counts.find({cand.begin() + i, cand.begin() + i + n});
            if (it != ref_counts.end() && it->second > 0) {
                --it->second;
                ++matches;
            }
        }
        double p = n == 1 ? static_cast<double>(matches) / static_cast<double>(total)
                          : static_cast<double>(matches + 1) / static_cast<double>(total + 1);
        if (p == 0) return 0.0;
        log_sum += std::log(p);
    }
    double c = static_cast<double>(cand.size());
    double r = static_cast<double>(ref.size());
    double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum / 4.0);
}

struct CodeMatch {
    double em = 0;
    double bleu4 = 0;
};

inline CodeMatch code_match(std::string_view pred, std::string_view gt,
                            const TokenizerProfile& tok = code_tokenizer()) {
    auto p = normalize_trailing_whitespace(pred);
    auto g = normalize_trailing_whitespace(gt);
    if (p == g) return {1, 1};
    return {0, bleu4(tok.tokenize(p), tok.tokenize(g))};
}

}  // namespace crossctx
