// Copyright 2026 The revmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "revmatch/error.hpp"

namespace revmatch::io {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a temporary sibling and rename so readers never see a partial file.
inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw DataError("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

/// Non-empty lines of a text file, without trailing CR.
inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        lines.push_back(std::move(line));
    }
    return lines;
}

/// Parses every line as JSON; a bad line is a DataError naming its line number.
inline std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::vector<json> rows;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

inline std::string to_jsonl(const std::vector<json>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += row.dump(-1, ' ', false, json::error_handler_t::strict);
        out += '\n';
    }
    return out;
}

/// Key of the optional first row carrying an artifact's provenance.
inline constexpr const char* kHeaderKey = "revmatch_header";

inline bool is_header(const json& row) { return row.is_object() && row.contains(kHeaderKey); }

/// read_jsonl without a leading provenance row.
inline std::vector<json> read_records(const std::filesystem::path& path) {
    auto rows = read_jsonl(path);
    if (!rows.empty() && is_header(rows.front())) rows.erase(rows.begin());
    return rows;
}

/// Serializes rows after a provenance row {"revmatch_header": header}.
inline std::string to_jsonl_with_header(const json& header, const std::vector<json>& rows) {
    std::vector<json> all;
    all.reserve(rows.size() + 1);
    all.push_back({{kHeaderKey, header}});
    all.insert(all.end(), rows.begin(), rows.end());
    return to_jsonl(all);
}

}  // namespace revmatch::io
