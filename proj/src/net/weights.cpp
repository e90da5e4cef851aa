// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/weights.hpp"

#include <algorithm>
#include <limits>

#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"

namespace selrel {

const NamedArray* WeightBundle::find(std::string_view name) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const NamedArray& a) { return a.name == name; });
    return it == entries.end() ? nullptr : &*it;
}

void WeightBundle::add(std::string name, std::vector<std::uint32_t> dims, std::vector<float> values) {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    if (n != values.size()) {
        throw SizeError("bundle entry '" + name + "' dims hold " + std::to_string(n) + " values, got " +
                        std::to_string(values.size()));
    }
    if (find(name)) throw InputError("duplicate bundle entry '" + name + "'");
    entries.push_back({std::move(name), std::move(dims), std::move(values)});
}

std::string encode_srwb(const WeightBundle& bundle) {
    ByteWriter w;
    w.bytes("SRWB");
    w.u16(kSrwbVersion);
    w.u32(static_cast<std::uint32_t>(bundle.entries.size()));
    for (const auto& e : bundle.entries) {
        if (e.name.size() > std::numeric_limits<std::uint16_t>::max()) throw InputError("entry name too long");
        if (e.dims.size() > std::numeric_limits<std::uint8_t>::max()) throw InputError("entry '" + e.name + "' has too many dims");
        w.u16(static_cast<std::uint16_t>(e.name.size()));
        w.bytes(e.name);
        w.u8(static_cast<std::uint8_t>(e.dims.size()));
        for (auto d : e.dims) w.u32(d);
        w.f32s(e.values);
    }
    return w.take();
}

WeightBundle decode_srwb(std::string_view bytes) {
    ByteReader r(bytes);
    r.expect_magic("SRWB");
    const std::size_t version_at = r.offset();
    if (const auto version = r.u16("version"); version != kSrwbVersion) {
        throw FormatError("unsupported SRWB version " + std::to_string(version), version_at);
    }
    const std::uint32_t count = r.u32("entry count");
    WeightBundle bundle;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t entry_at = r.offset();
        const auto name_len = r.u16("entry name length");
        std::string name(r.bytes(name_len, "entry name"));
        const auto ndim = r.u8("entry ndim");
        std::vector<std::uint32_t> dims(ndim);
        std::uint64_t n = 1;
        for (auto& d : dims) {
            d = r.u32("entry dim");
            if (d != 0 && n > std::numeric_limits<std::uint64_t>::max() / 4 / d) {
                throw FormatError("entry '" + name + "' dimensions overflow", entry_at);
            }
            n *= d;
        }
        auto values = r.f32s(n, ("payload of '" + name + "'").c_str());
        if (bundle.find(name)) throw FormatError("duplicate entry '" + name + "'", entry_at);
        bundle.entries.push_back({std::move(name), std::move(dims), std::move(values)});
    }
    r.expect_end("SRWB entries");
    return bundle;
}

void write_bundle(const std::filesystem::path& path, const WeightBundle& bundle) {
    write_file_bytes(path, encode_srwb(bundle));
}

WeightBundle read_bundle(const std::filesystem::path& path) {
    try {
        return decode_srwb(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace selrel
