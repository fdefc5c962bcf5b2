// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crossctx {

inline constexpr std::string_view kSumToken = "[SUM]";

struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Named, deterministic text-to-token splitter used for budgets and BLEU.
struct TokenizerProfile {
    std::string name;
    std::function<std::vector<TokenSpan>(std::string_view)> split;

    std::vector<std::string_view> tokenize(std::string_view text) const {
        std::vector<std::string_view> out;
        for (auto s : split(text)) out.push_back(text.substr(s.begin, s.end - s.begin));
        return out;
    }
    std::size_t count(std::string_view text) const { return split(text).size(); }
};

namespace detail {

inline bool is_word_byte(unsigned char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

inline bool is_space_byte(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Word runs; all other non-blank bytes are single tokens.
inline std::vector<TokenSpan> split_code(std::string_view text) {
    std::vector<TokenSpan> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (is_space_byte(text[i])) {
            ++i;
        } else if (text.substr(i, kSumToken.size()) == kSumToken) {
            out.push_back({i, i + kSumToken.size()});
            i += kSumToken.size();
        } else if (is_word_byte(static_cast<unsigned char>(text[i]))) {
            std::size_t b = i;
            while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
            out.push_back({b, i});
        } else {
            out.push_back({i, i + 1});
            ++i;
        }
    }
    return out;
}

inline std::vector<TokenSpan> split_whitespace(std::string_view text) {
    std::vector<TokenSpan> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (is_space_byte(text[i])) {
            ++i;
            continue;
        }
        std::size_t b = i;
        while (i < text.size() && !is_space_byte(text[i])) {
            if (text.substr(i, kSumToken.size()) == kSumToken) {
                if (i > b) out.push_back({b, i});
                b = i;
                i += kSumToken.size();
                break;
            }
            ++i;
        }
        out.push_back({b, i});
    }
    return out;
}

}  // namespace detail

/// Default profile: whitespace-separated word runs with each punctuation
/// character as its own token.
inline const TokenizerProfile& code_tokenizer() {
    static const TokenizerProfile p{"code", detail::split_code};
    return p;
}

inline const TokenizerProfile& whitespace_tokenizer() {
    static const TokenizerProfile p{"whitespace", detail::split_whitespace};
    return p;
}

inline const TokenizerProfile& tokenizer_by_name(std::string_view name) {
    if (name == "code") return code_tokenizer();
    if (name == "whitespace") return whitespace_tokenizer();
    throw std::invalid_argument("unknown tokenizer profile: " + std::string(name));
}

}  // namespace crossctx
