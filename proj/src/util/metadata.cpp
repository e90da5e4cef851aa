// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/metadata.hpp"

#include <algorithm>
#include <sstream>

#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"

namespace selrel {

void Metadata::set(const std::string& key, const std::string& value) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos) {
        throw InputError("invalid metadata key '" + key + "'");
    }
    if (value.find('\n') != std::string::npos) throw InputError("metadata value for '" + key + "' spans lines");
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
    if (it != entries_.end()) {
        it->second = value;
    } else {
        entries_.emplace_back(key, value);
    }
}

std::optional<std::string> Metadata::get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string Metadata::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::string Metadata::to_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
}

Metadata Metadata::parse(const std::string& text) {
    Metadata m;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError("metadata line " + std::to_string(lineno) + " has no '='");
        }
        m.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

std::filesystem::path sidecar_path(const std::filesystem::path& artifact) {
    auto p = artifact;
    p += ".meta";
    return p;
}

void write_sidecar(const std::filesystem::path& artifact, const Metadata& meta) {
    write_file_bytes(sidecar_path(artifact), meta.to_text());
}

Metadata read_sidecar(const std::filesystem::path& artifact) {
    const auto p = sidecar_path(artifact);
    if (!std::filesystem::exists(p)) return {};
    return Metadata::parse(read_file_bytes(p));
}

}  // namespace selrel
