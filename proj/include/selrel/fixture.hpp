// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic synthetic inputs for tests, demos and the fixture tool.

#pragma once

#include <cstddef>
#include <vector>

#include <opencv2/core.hpp>

#include "selrel/flow.hpp"
#include "selrel/volume.hpp"

namespace selrel {

/// A bright square sliding over a flat background at constant velocity.
struct MovingSquare {
    std::size_t frames = 16;
    std::size_t height = 112;
    std::size_t width = 112;
    std::size_t side = 16;
    double start_y = 48.0;
    double start_x = 16.0;
    double vy = 0.0;  ///< pixels per frame
    double vx = 2.0;
    unsigned char background = 40;
    unsigned char foreground = 200;

    /// Top-left corner at frame t, rounded to whole pixels.
    std::pair<long, long> corner(std::size_t t) const;
    /// BGR CV_8UC3 frames.
    std::vector<cv::Mat> render() const;
    /// 1 where the square covers a pixel in frame t, else 0.
    Volume3 occupancy() const;
    /// 1 on every pixel the square touches in frame t or t + 1 (the last frame
    /// repeats its predecessor), dilated by `halo` pixels.
    Volume3 trajectory(std::size_t halo = 0) const;
};

/// 128 + 50 sin(2 pi x / period) + 50 sin(2 pi y / period), sampled after
/// shifting by (dy, dx) pixels.
Grid2 sinusoid_grid(std::size_t h, std::size_t w, double period, double dy = 0.0, double dx = 0.0);

}  // namespace selrel
