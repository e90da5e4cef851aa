// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selrel/errors.hpp"

namespace selrel {

/// Appends little-endian scalars to a byte buffer.
class ByteWriter {
public:
    void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { put_le(v, 2); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v), 4); }
    void f32s(std::span<const float> vs) {
        buf_.reserve(buf_.size() + vs.size() * 4);
        for (float v : vs) f32(v);
    }

    const std::string& buffer() const { return buf_; }
    std::string take() { return std::move(buf_); }

private:
    void put_le(std::uint32_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
    std::string buf_;
};

/// Reads little-endian scalars, throwing FormatError with the failing offset.
class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    void expect_magic(std::string_view magic) {
        need(magic.size(), "magic");
        if (data_.substr(pos_, magic.size()) != magic) {
            throw FormatError("bad magic, expected '" + std::string(magic) + "'", pos_);
        }
        pos_ += magic.size();
    }
    std::string_view bytes(std::size_t n, const char* what) {
        need(n, what);
        auto s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(get_le(1, what)); }
    std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(get_le(2, what)); }
    std::uint32_t u32(const char* what) { return get_le(4, what); }
    float f32(const char* what) { return std::bit_cast<float>(get_le(4, what)); }

    /// Reads `count` floats after checking the whole payload is present.
    std::vector<float> f32s(std::uint64_t count, const char* what) {
        if (count > remaining() / 4) {
            throw FormatError(std::string("truncated ") + what + ": need " + std::to_string(count) +
                                  " scalars, " + std::to_string(remaining() / 4) + " present",
                              pos_);
        }
        std::vector<float> out(static_cast<std::size_t>(count));
        for (auto& v : out) v = f32(what);
        return out;
    }

    void expect_end(const char* what) const {
        if (pos_ != data_.size()) {
            throw FormatError(std::string("trailing bytes after ") + what, pos_);
        }
    }

private:
    void need(std::size_t n, const char* what) const {
        if (remaining() < n) throw FormatError(std::string("truncated ") + what, pos_);
    }
    std::uint32_t get_le(int n, const char* what) {
        need(static_cast<std::size_t>(n), what);
        std::uint32_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace selrel
