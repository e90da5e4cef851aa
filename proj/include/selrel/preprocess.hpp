// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <opencv2/core.hpp>

#include "selrel/tensor.hpp"

namespace selrel {

/// Model input: 3 (RGB) x T x H x W, finite, mean-subtracted.
class ClipTensor {
public:
    /// Throws InputError unless shape.c == 3 and every value is finite.
    explicit ClipTensor(Tensor t);
    const Tensor& tensor() const { return tensor_; }
    const Shape4& shape() const { return tensor_.shape; }

private:
    Tensor tensor_;
};

struct ClipGeometry {
    int frames = 16;
    int crop_h = 112;
    int crop_w = 112;
    int short_side = 128;
};

/// Geometry matching a model input shape; 16x112x112 gives the defaults.
ClipGeometry geometry_for(Shape4 input);

/// Source frame indices for a window starting at `start`: the first
/// `length` frames when available, otherwise the window's frames repeated
/// from its first frame in order.
std::vector<std::size_t> clip_frame_indices(std::size_t available, std::size_t start, int length);

/// Scale (short side -> geometry.short_side), center-crop, and select the
/// clip's frames. Returns 8-bit BGR frames of crop size.
std::vector<cv::Mat> prepare_frames(const std::vector<cv::Mat>& frames, std::size_t start = 0,
                                    const ClipGeometry& geometry = {});

/// Channel-major RGB tensor minus the per-channel means (RGB order).
ClipTensor to_clip_tensor(const std::vector<cv::Mat>& prepared, const std::array<float, 3>& means);

ClipTensor preprocess_clip(const std::vector<cv::Mat>& frames, const std::array<float, 3>& means,
                           std::size_t start = 0, const ClipGeometry& geometry = {});

}  // namespace selrel
