// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crossctx {

using NodeId = std::uint32_t;

enum class EntityKind { Root, File, Class, Function, GlobalVar };

inline constexpr std::string_view to_string(EntityKind kind) noexcept {
    switch (kind) {
        case EntityKind::Root: return "Root";
        case EntityKind::File: return "File";
        case EntityKind::Class: return "Class";
        case EntityKind::Function: return "Function";
        case EntityKind::GlobalVar: return "GlobalVar";
    }
    return "?";
}

inline std::optional<EntityKind> entity_kind_from_string(std::string_view s) noexcept {
    for (auto k : {EntityKind::Root, EntityKind::File, EntityKind::Class, EntityKind::Function,
                   EntityKind::GlobalVar}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

/// Region of a project file. Lines are 1-based inclusive, columns 0-based byte offsets.
struct SourceSpan {
    std::string file_path;
    std::uint32_t start_line = 0;
    std::uint32_t start_col = 0;
    std::uint32_t end_line = 0;
    std::uint32_t end_col = 0;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Dotted location of an entity inside the project: module segments, then
/// optional class, then optional function.
class Locale {
public:
    Locale() = default;
    explicit Locale(std::vector<std::string> segments) : segments_(std::move(segments)) {}

    static Locale parse(std::string_view dotted) {
        std::vector<std::string> segs;
        if (dotted.empty()) return Locale{};
        std::size_t start = 0;
        while (true) {
            auto dot = dotted.find('.', start);
            segs.emplace_back(dotted.substr(start, dot - start));
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
        return Locale{std::move(segs)};
    }

    const std::vector<std::string>& segments() const noexcept { return segments_; }
    bool empty() const noexcept { return segments_.empty(); }
    std::size_t size() const noexcept { return segments_.size(); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            if (i) out += '.';
            out += segments_[i];
        }
        return out;
    }

    Locale child(std::string_view name) const {
        auto segs = segments_;
        segs.emplace_back(name);
        return Locale{std::move(segs)};
    }

    std::optional<Locale> parent() const {
        if (segments_.empty()) return std::nullopt;
        return Locale{{segments_.begin(), segments_.end() - 1}};
    }

    friend bool operator==(const Locale&, const Locale&) = default;
    friend auto operator<=>(const Locale&, const Locale&) = default;

private:
    std::vector<std::string> segments_;
};

/// One project code component: a file, class, function or global variable
/// (plus the single graph Root).
struct ProjectEntity {
    NodeId id = 0;
    EntityKind kind = EntityKind::Root;
    Locale locale;
    std::string name;
    std::string text;
    /// Decorator lines plus the definition header (functions and classes),
    /// the assignment target for globals, the path for files.
    std::string signature;
    SourceSpan span;
    std::uint32_t file_order_index = 0;

    friend bool operator==(const ProjectEntity&, const ProjectEntity&) = default;
};

inline bool is_project_relative(std::string_view path) {
    if (path.empty() || path.front() == '/' || path.front() == '\\') return false;
    if (path.size() > 1 && path[1] == ':') return false;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto slash = path.find('/', start);
        auto seg = path.substr(start, slash == std::string_view::npos ? std::string_view::npos
                                                                     : slash - start);
        if (seg == "..") return false;
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return true;
}

/// Module path segments of a project-relative file path: extension stripped,
/// separators mapped to segments, package initializers named by their package.
inline std::vector<std::string> module_segments(std::string_view path) {
    if (!is_project_relative(path)) {
        throw std::invalid_argument("path is not project-relative: " + std::string(path));
    }
    std::vector<std::string> segs;
    std::size_t start = 0;
    while (true) {
        auto slash = path.find('/', start);
        auto seg = path.substr(start, slash == std::string_view::npos ? std::string_view::npos
                                                                     : slash - start);
        if (!seg.empty() && seg != ".") segs.emplace_back(seg);
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    if (segs.empty()) throw std::invalid_argument("empty path");
    auto& last = segs.back();
    if (auto dot = last.rfind('.'); dot != std::string::npos && dot != 0) last.erase(dot);
    // A project-root initializer keeps its own name so its locale is non-empty.
    if (last == "__init__" && segs.size() > 1) segs.pop_back();
    return segs;
}

inline bool is_package_initializer(std::string_view path) {
    auto slash = path.rfind('/');
    auto base = slash == std::string_view::npos ? path : path.substr(slash + 1);
    return base.starts_with("__init__.");
}

inline Locale compute_locale(std::string_view path, const std::optional<Locale>& enclosing,
                             std::string_view name) {
    if (enclosing) return name.empty() ? *enclosing : enclosing->child(name);
    Locale module{module_segments(path)};
    return name.empty() ? module : module.child(name);
}

}  // namespace crossctx
