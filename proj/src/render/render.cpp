// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/render.hpp"

#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>

#include "selrel/errors.hpp"

namespace selrel {

void validate(const RenderOptions& o) {
    if (!(o.alpha >= 0.0 && o.alpha <= 1.0)) throw InputError("overlay alpha must be in [0, 1]");
    if (!(o.eps_r >= 0.0) || !std::isfinite(o.eps_r)) throw InputError("eps_r must be finite and >= 0");
}

Volume3 zero_center(const Volume3& r, double eps_r) {
    const double cut = eps_r * static_cast<double>(max_abs(r));
    auto v = r.to_vector();
    for (auto& x : v) {
        if (std::abs(static_cast<double>(x)) <= cut) x = 0.0f;
    }
    return Volume3(r.dims(), std::move(v));
}

RelevanceVolume zero_center(const RelevanceVolume& r, double eps_r) {
    RelevanceVolume out = r;
    out.volume = zero_center(r.volume, eps_r);
    return out;
}

cv::Vec3b colormap_color(Colormap map, double normalized) {
    const double n = std::clamp(normalized, -1.0, 1.0);
    auto level = [](double x) { return static_cast<unsigned char>(std::lround(255.0 * x)); };
    if (map == Colormap::grayscale) {
        const auto l = level(std::max(n, 0.0));
        return {l, l, l};
    }
    return n >= 0.0 ? cv::Vec3b{0, 0, level(n)} : cv::Vec3b{level(-n), 0, 0};
}

std::vector<cv::Mat> render_overlay(const std::vector<cv::Mat>& frames, const Volume3& r, const RenderOptions& opts) {
    validate(opts);
    const Dims3 d = r.dims();
    if (frames.size() != d.t) {
        throw InputError("render: " + std::to_string(frames.size()) + " frames for a relevance volume with t=" +
                         std::to_string(d.t));
    }
    for (const auto& f : frames) {
        if (f.type() != CV_8UC3 || static_cast<std::size_t>(f.rows) != d.h || static_cast<std::size_t>(f.cols) != d.w) {
            throw InputError("render: frames must be 8-bit BGR of size " + std::to_string(d.h) + "x" +
                             std::to_string(d.w));
        }
    }
    const double peak = max_abs(r);
    const double cut = opts.eps_r * peak;
    std::vector<cv::Mat> out;
    out.reserve(d.t);
    for (std::size_t t = 0; t < d.t; ++t) {
        cv::Mat img(frames[t].size(), CV_8UC3);
        for (std::size_t y = 0; y < d.h; ++y) {
            const auto* src = frames[t].ptr<cv::Vec3b>(static_cast<int>(y));
            auto* dst = img.ptr<cv::Vec3b>(static_cast<int>(y));
            for (std::size_t x = 0; x < d.w; ++x) {
                const double v = r(t, y, x);
                if (opts.mode == RenderMode::mask_composite) {
                    dst[x] = peak > 0.0 && v > cut ? src[x] : cv::Vec3b{0, 0, 0};
                    continue;
                }
                const cv::Vec3b c = colormap_color(opts.colormap, peak > 0.0 ? v / peak : 0.0);
                for (int k = 0; k < 3; ++k) {
                    dst[x][k] = static_cast<unsigned char>(std::lround(opts.alpha * c[k] + (1.0 - opts.alpha) * src[x][k]));
                }
            }
        }
        out.push_back(std::move(img));
    }
    return out;
}

std::vector<cv::Mat> render_grid(const std::vector<std::pair<std::string, std::vector<cv::Mat>>>& columns) {
    if (columns.empty()) throw InputError("render grid needs at least one column");
    const std::size_t n = columns.front().second.size();
    for (const auto& [label, seq] : columns) {
        if (seq.size() != n) throw InputError("render grid column '" + label + "' has " + std::to_string(seq.size()) +
                                              " frames, expected " + std::to_string(n));
    }
    std::vector<cv::Mat> sheets;
    sheets.reserve(n);
    for (std::size_t f = 0; f < n; ++f) {
        std::vector<cv::Mat> panels;
        for (const auto& [label, seq] : columns) {
            const cv::Mat& img = seq[f];
            if (img.type() != CV_8UC3) throw InputError("render grid panels must be 8-bit BGR");
            if (img.rows != columns.front().second[f].rows) throw InputError("render grid panels differ in height");
            cv::Mat panel(img.rows + kLabelStrip, img.cols, CV_8UC3, cv::Scalar::all(0));
            img.copyTo(panel(cv::Rect(0, kLabelStrip, img.cols, img.rows)));
            cv::putText(panel, label, cv::Point(2, kLabelStrip - 5), cv::FONT_HERSHEY_PLAIN, 0.9,
                        cv::Scalar::all(255), 1, cv::LINE_8);
            panels.push_back(std::move(panel));
        }
        cv::Mat sheet;
        cv::hconcat(panels, sheet);
        sheets.push_back(std::move(sheet));
    }
    return sheets;
}

}  // namespace selrel
