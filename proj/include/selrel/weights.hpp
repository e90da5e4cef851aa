// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace selrel {

struct NamedArray {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<float> values;
};

/**
 * @brief In-memory SRWB weight bundle.
 *
 * Wire format (little-endian): "SRWB", u16 version (1), u32 entry count,
 * then per entry u16 name length, UTF-8 name, u8 ndim, ndim x u32 dims,
 * prod(dims) x f32 payload.
 */
struct WeightBundle {
    std::vector<NamedArray> entries;

    const NamedArray* find(std::string_view name) const;
    void add(std::string name, std::vector<std::uint32_t> dims, std::vector<float> values);
};

inline constexpr std::uint16_t kSrwbVersion = 1;

std::string encode_srwb(const WeightBundle& bundle);
WeightBundle decode_srwb(std::string_view bytes);
void write_bundle(const std::filesystem::path& path, const WeightBundle& bundle);
WeightBundle read_bundle(const std::filesystem::path& path);

}  // namespace selrel
