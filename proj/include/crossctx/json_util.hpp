// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "crossctx/entity.hpp"
#include "crossctx/error.hpp"

namespace crossctx {

using Json = nlohmann::ordered_json;

namespace detail {

/// Compact, deterministic rendering; invalid UTF-8 is replaced, not rejected.
inline std::string dump_json(const Json& j, int indent = -1) {
    return j.dump(indent, ' ', false, Json::error_handler_t::replace);
}

inline Json parse_json(std::string_view text, std::string_view what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string(what) + ": malformed JSON at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
}

inline const Json& field(const Json& obj, std::string_view key, std::string_view where) {
    if (!obj.is_object()) throw FormatError(std::string(where) + ": expected an object");
    auto it = obj.find(std::string(key));
    if (it == obj.end()) throw FormatError(std::string(where) + ": missing field '" + std::string(key) + "'");
    return *it;
}

inline std::string get_string(const Json& obj, std::string_view key, std::string_view where) {
    const auto& v = field(obj, key, where);
    if (!v.is_string()) throw FormatError(std::string(where) + "." + std::string(key) + ": expected a string");
    return v.get<std::string>();
}

inline std::uint64_t get_uint(const Json& obj, std::string_view key, std::string_view where,
                              std::uint64_t max = std::numeric_limits<std::uint32_t>::max()) {
    const auto& v = field(obj, key, where);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > max) {
        throw FormatError(std::string(where) + "." + std::string(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline const Json& get_array(const Json& obj, std::string_view key, std::string_view where) {
    const auto& v = field(obj, key, where);
    if (!v.is_array()) throw FormatError(std::string(where) + "." + std::string(key) + ": expected an array");
    return v;
}

inline Json span_to_json(const SourceSpan& s) {
    return Json{{"file", s.file_path},
                {"start_line", s.start_line},
                {"start_col", s.start_col},
                {"end_line", s.end_line},
                {"end_col", s.end_col}};
}

inline SourceSpan span_from_json(const Json& j, std::string_view where) {
    SourceSpan s;
    s.file_path = get_string(j, "file", where);
    s.start_line = static_cast<std::uint32_t>(get_uint(j, "start_line", where));
    s.start_col = static_cast<std::uint32_t>(get_uint(j, "start_col", where));
    s.end_line = static_cast<std::uint32_t>(get_uint(j, "end_line", where));
    s.end_col = static_cast<std::uint32_t>(get_uint(j, "end_col", where));
    return s;
}

}  // namespace detail
}  // namespace crossctx
