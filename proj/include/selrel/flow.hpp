// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Horn-Schunck dense optical flow, used as the motion reference for the
// precision metric.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

#include "selrel/volume.hpp"

namespace selrel {

/// Single-channel H x W grid, row-major.
struct Grid2 {
    std::size_t h = 0;
    std::size_t w = 0;
    std::vector<float> v;

    float at(std::size_t y, std::size_t x) const { return v[y * w + x]; }
};

struct FlowParams {
    double alpha = 10.0;  ///< smoothness weight
    int iterations = 200;
    /// Weights applied to R, G, B.
    std::array<double, 3> gray_weights{0.299, 0.587, 0.114};
};

/// Throws InputError on alpha <= 0, iterations < 1 or non-finite weights.
void validate(const FlowParams& p);

struct FlowPair {
    Grid2 u;  ///< displacement along w, pixels/frame
    Grid2 v;  ///< displacement along h
};

/// Flow between each consecutive frame pair; pairs.size() == frames - 1.
struct FlowField {
    std::size_t h = 0;
    std::size_t w = 0;
    std::vector<FlowPair> pairs;
};

/// 0..255-scale luminance of a BGR CV_8UC3 frame.
Grid2 to_gray(const cv::Mat& bgr, const FlowParams& p = {});

FlowPair horn_schunck_pair(const Grid2& f1, const Grid2& f2, const FlowParams& p = {});

/// `frames` are BGR CV_8UC3 images of equal size, at least two of them.
FlowField dense_flow(const std::vector<cv::Mat>& frames, const FlowParams& p = {}, int workers = 1);

/// Per-voxel |(u, v)| with the last pair repeated so there are pairs + 1 frames.
Volume3 flow_magnitude(const FlowField& f);

// SRFL: "SRFL", u16 version (1), u32 pair_count, h, w, then per pair the u grid
// and the v grid as f32; all little-endian.
inline constexpr std::uint16_t kSrflVersion = 1;

std::string encode_srfl(const FlowField& f);
FlowField decode_srfl(std::string_view bytes);
void write_flow(const std::filesystem::path& path, const FlowField& f);
FlowField read_flow(const std::filesystem::path& path);

}  // namespace selrel
