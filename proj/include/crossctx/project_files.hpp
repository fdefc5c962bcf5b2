// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "crossctx/error.hpp"

namespace crossctx {

namespace fs = std::filesystem;

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return std::move(ss).str();
}

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void atomic_write(const fs::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

inline bool is_python_source(const fs::path& p) { return p.extension() == ".py"; }

/// Project-relative paths ('/'-separated, sorted) of every Python source under
/// `root`. Hidden directories, `__pycache__` and virtual environments are skipped.
inline std::vector<std::string> list_source_files(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());
    std::vector<std::string> out;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
    for (auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
        if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
        const auto& entry = *it;
        auto name = entry.path().filename().string();
        if (entry.is_directory(ec)) {
            if (name.starts_with(".") || name == "__pycache__" ||
                fs::exists(entry.path() / "pyvenv.cfg", ec)) {
                it.disable_recursion_pending();
            }
            continue;
        }
        if (!entry.is_regular_file(ec) || !is_python_source(entry.path())) continue;
        out.push_back(fs::relative(entry.path(), root).generic_string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace crossctx
