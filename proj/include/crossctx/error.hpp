// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crossctx {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unrecoverable syntax error in one source file.
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t line, std::size_t col, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
          path_(std::move(path)), line_(line), col_(col) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::string path_;
    std::size_t line_;
    std::size_t col_;
};

class GraphTooLarge : public Error {
public:
    GraphTooLarge(std::size_t nodes, std::size_t limit)
        : Error("project graph has " + std::to_string(nodes) + " nodes, limit is " +
                std::to_string(limit)),
          nodes_(nodes), limit_(limit) {}

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t nodes_;
    std::size_t limit_;
};

class EmptyProject : public Error {
public:
    using Error::Error;
};

/// Malformed serialized artifact (graph, context, bundle, predictions).
class FormatError : public Error {
public:
    using Error::Error;
};

class NodeNotFound : public Error {
public:
    using Error::Error;
};

class BudgetTooSmall : public Error {
public:
    using Error::Error;
};

}  // namespace crossctx
