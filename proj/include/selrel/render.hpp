// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Heatmap overlays and contact sheets for inspecting relevance volumes.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>

#include "selrel/relevance.hpp"
#include "selrel/volume.hpp"

namespace selrel {

enum class Colormap {
    grayscale,  ///< luminance proportional to max(v, 0) / max|R|
    diverging,  ///< blue for negative, red for positive, black at zero
};

enum class RenderMode {
    heatmap,         ///< colormap blended over the frame with `alpha`
    mask_composite,  ///< frame where R > eps_r * max|R|, black elsewhere
};

struct RenderOptions {
    Colormap colormap = Colormap::diverging;
    double alpha = 0.5;
    RenderMode mode = RenderMode::heatmap;
    double eps_r = 1e-3;  ///< relative to max|R|
};

/// InputError unless alpha is in [0, 1] and eps_r >= 0.
void validate(const RenderOptions& o);

/// Sets values with |v| <= eps_r * max|R| to exactly zero and leaves the rest alone.
Volume3 zero_center(const Volume3& r, double eps_r = 1e-3);
RelevanceVolume zero_center(const RelevanceVolume& r, double eps_r = 1e-3);

/// BGR color for a value normalized to [-1, 1].
cv::Vec3b colormap_color(Colormap map, double normalized);

/// One BGR image per frame; frames must be 8-bit BGR with size (R.h, R.w) and count R.t.
std::vector<cv::Mat> render_overlay(const std::vector<cv::Mat>& frames, const Volume3& r, const RenderOptions& opts = {});

/// Per-frame horizontal concatenation of labelled panels. Every column must
/// have the same length and every image in a row the same height.
std::vector<cv::Mat> render_grid(const std::vector<std::pair<std::string, std::vector<cv::Mat>>>& columns);

/// Height in pixels of the label strip render_grid puts above each panel.
inline constexpr int kLabelStrip = 18;

}  // namespace selrel
