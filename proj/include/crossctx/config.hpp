// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "crossctx/tokenizer.hpp"

namespace crossctx {

/// Pipeline settings. Defaults: 2 hops, 128 entities of at most 128 tokens,
/// projects of at most 5000 nodes.
struct Config {
    std::filesystem::path project_root;
    int k = 2;
    std::size_t max_entities = 128;
    std::size_t max_entity_tokens = 128;
    std::size_t max_nodes = 5000;
    std::string tokenizer = "code";
    bool simplified = false;
    bool include_function_imports = false;
    unsigned threads = 1;

    void validate() const {
        if (k < 1) throw std::invalid_argument("k must be a positive integer");
        if (max_entities < 1) throw std::invalid_argument("max_entities must be positive");
        if (max_entity_tokens < 3) throw std::invalid_argument("max_entity_tokens must be at least 3");
        if (max_nodes < 2) throw std::invalid_argument("max_nodes must be at least 2");
        (void)tokenizer_by_name(tokenizer);
    }
};

}  // namespace crossctx
