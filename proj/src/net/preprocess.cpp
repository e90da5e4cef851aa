// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/preprocess.hpp"

#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>

#include "selrel/errors.hpp"

namespace selrel {

ClipTensor::ClipTensor(Tensor t) : tensor_(std::move(t)) {
    if (tensor_.shape.c != 3) throw InputError("clip tensors have 3 channels, got " + std::to_string(tensor_.shape.c));
    if (tensor_.data.size() != tensor_.shape.count()) throw SizeError("clip tensor data does not match its shape");
    for (float v : tensor_.data) {
        if (!std::isfinite(v)) throw InputError("clip tensor holds a non-finite value");
    }
}

ClipGeometry geometry_for(Shape4 input) {
    ClipGeometry g;
    g.frames = input.t;
    g.crop_h = input.h;
    g.crop_w = input.w;
    // 128 / 112 scale-then-crop ratio, kept for smaller model inputs.
    g.short_side = static_cast<int>(std::lround(std::max(input.h, input.w) * 128.0 / 112.0));
    return g;
}

std::vector<std::size_t> clip_frame_indices(std::size_t available, std::size_t start, int length) {
    if (available == 0) throw InputError("empty frame list");
    if (start >= available) {
        throw InputError("window start " + std::to_string(start) + " is past the last frame " +
                         std::to_string(available - 1));
    }
    if (length < 1) throw InputError("clip length must be >= 1");
    const std::size_t in_window = std::min<std::size_t>(available - start, static_cast<std::size_t>(length));
    std::vector<std::size_t> idx(static_cast<std::size_t>(length));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = start + i % in_window;
    return idx;
}

std::vector<cv::Mat> prepare_frames(const std::vector<cv::Mat>& frames, std::size_t start, const ClipGeometry& g) {
    if (frames.empty()) throw InputError("empty frame list");
    const cv::Size size = frames.front().size();
    for (const auto& f : frames) {
        if (f.type() != CV_8UC3) throw InputError("frames must be 8-bit 3-channel images");
        if (f.size() != size) throw InputError("frames must share dimensions");
    }
    const int short_side = std::min(size.width, size.height);
    const double scale = static_cast<double>(g.short_side) / short_side;
    const cv::Size scaled(static_cast<int>(std::lround(size.width * scale)), static_cast<int>(std::lround(size.height * scale)));
    if (scaled.width < g.crop_w || scaled.height < g.crop_h) {
        throw InputError("scaled frames are smaller than the crop");
    }
    const cv::Rect crop((scaled.width - g.crop_w) / 2, (scaled.height - g.crop_h) / 2, g.crop_w, g.crop_h);

    std::vector<cv::Mat> out;
    out.reserve(static_cast<std::size_t>(g.frames));
    for (std::size_t i : clip_frame_indices(frames.size(), start, g.frames)) {
        cv::Mat resized;
        if (scaled == size) {
            resized = frames[i];
        } else {
            cv::resize(frames[i], resized, scaled, 0, 0, cv::INTER_LINEAR);
        }
        out.push_back(resized(crop).clone());
    }
    return out;
}

ClipTensor to_clip_tensor(const std::vector<cv::Mat>& prepared, const std::array<float, 3>& means) {
    if (prepared.empty()) throw InputError("empty frame list");
    const int h = prepared.front().rows;
    const int w = prepared.front().cols;
    Tensor t(Shape4{3, static_cast<int>(prepared.size()), h, w});
    for (int f = 0; f < t.shape.t; ++f) {
        const cv::Mat& img = prepared[static_cast<std::size_t>(f)];
        if (img.type() != CV_8UC3 || img.rows != h || img.cols != w) throw InputError("frames must share dimensions");
        for (int y = 0; y < h; ++y) {
            const auto* row = img.ptr<cv::Vec3b>(y);
            for (int x = 0; x < w; ++x) {
                // OpenCV stores BGR; tensor channels are RGB.
                for (int c = 0; c < 3; ++c) t.at(c, f, y, x) = static_cast<float>(row[x][2 - c]) - means[static_cast<std::size_t>(c)];
            }
        }
    }
    return ClipTensor(std::move(t));
}

ClipTensor preprocess_clip(const std::vector<cv::Mat>& frames, const std::array<float, 3>& means, std::size_t start,
                           const ClipGeometry& geometry) {
    return to_clip_tensor(prepare_frames(frames, start, geometry), means);
}

}  // namespace selrel
