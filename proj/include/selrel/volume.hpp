// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selrel {

struct Dims3 {
    std::size_t t = 0;
    std::size_t h = 0;
    std::size_t w = 0;

    std::size_t count() const { return t * h * w; }
    bool operator==(const Dims3&) const = default;
};

std::string to_string(const Dims3& d);

enum class Axis { t, h, w };

/**
 * @brief Dense scalar grid over (t, h, w), stored row-major with t outermost.
 *
 * Carries relevance maps, temporal edge maps, masks and flow magnitudes.
 * Every element is finite; a default-constructed volume is empty and has
 * all dimensions zero.
 */
class Volume3 {
public:
    Volume3() = default;
    /// Throws SizeError on zero dims or length mismatch, InputError on non-finite data.
    Volume3(Dims3 dims, std::vector<float> data);

    static Volume3 zeros(Dims3 dims);
    static Volume3 filled(Dims3 dims, float value);

    const Dims3& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::size_t index(std::size_t t, std::size_t h, std::size_t w) const {
        return (t * dims_.h + h) * dims_.w + w;
    }
    float operator()(std::size_t t, std::size_t h, std::size_t w) const { return data_[index(t, h, w)]; }
    float operator[](std::size_t i) const { return data_[i]; }

    std::span<const float> data() const { return data_; }
    /// Copy of the scalars, for building a modified volume.
    std::vector<float> to_vector() const { return data_; }

    bool operator==(const Volume3&) const = default;

private:
    Dims3 dims_;
    std::vector<float> data_;
};

struct VolumeStats {
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation
    double min = 0.0;
    double max = 0.0;
    double sum = 0.0;
};

/// Population statistics, accumulated in double. Throws SizeError on an empty volume.
VolumeStats volume_stats(const Volume3& v);

/// Largest absolute value, 0 for an empty volume.
float max_abs(const Volume3& v);

/// 3x3x3 Sobel taps: derivative (-1, 0, 1) along `axis`, smoothing (1, 2, 1) along the others.
/// Indexed [dt][dh][dw] with offsets -1..1 mapped to 0..2.
using SobelKernel3 = std::array<std::array<std::array<float, 3>, 3>, 3>;
SobelKernel3 sobel_kernel(Axis axis);

/**
 * @brief 3D Sobel response along `axis`.
 *
 * Cross-correlation with sobel_kernel(axis) and edge-clamped borders, so a
 * volume that is constant along the whole grid produces exact zeros
 * everywhere. Every dimension must be at least 3 (SizeError otherwise).
 */
Volume3 sobel3(const Volume3& v, Axis axis);

/// Align-corners trilinear interpolation to `out`. Throws SizeError on a zero-sized target.
Volume3 trilinear_resize(const Volume3& v, Dims3 out);

// SRVL: "SRVL", u16 version (1), u32 t, h, w, then t*h*w f32; all little-endian.
inline constexpr std::uint16_t kSrvlVersion = 1;

std::string encode_srvl(const Volume3& v);
Volume3 decode_srvl(std::string_view bytes);
void write_volume(const std::filesystem::path& path, const Volume3& v);
Volume3 read_volume(const std::filesystem::path& path);

}  // namespace selrel
