// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selrel {

/**
 * @brief Ordered key=value record written next to every artifact.
 *
 * One `key=value` per line; keys keep insertion order so identical runs
 * produce byte-identical sidecars.
 */
class Metadata {
public:
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_text() const;
    static Metadata parse(const std::string& text);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// `<artifact>.meta`
std::filesystem::path sidecar_path(const std::filesystem::path& artifact);
void write_sidecar(const std::filesystem::path& artifact, const Metadata& meta);
/// Empty record when no sidecar exists.
Metadata read_sidecar(const std::filesystem::path& artifact);

}  // namespace selrel
