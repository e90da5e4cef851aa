// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "selrel/errors.hpp"

namespace selrel {

std::pair<long, long> MovingSquare::corner(std::size_t t) const {
    const double ft = static_cast<double>(t);
    return {std::lround(start_y + vy * ft), std::lround(start_x + vx * ft)};
}

namespace {

template <typename Fn>
void for_square(const MovingSquare& s, std::size_t t, long grow, Fn&& fn) {
    const auto [y0, x0] = s.corner(t);
    const long side = static_cast<long>(s.side);
    for (long y = y0 - grow; y < y0 + side + grow; ++y) {
        if (y < 0 || y >= static_cast<long>(s.height)) continue;
        for (long x = x0 - grow; x < x0 + side + grow; ++x) {
            if (x < 0 || x >= static_cast<long>(s.width)) continue;
            fn(static_cast<std::size_t>(y), static_cast<std::size_t>(x));
        }
    }
}

void check(const MovingSquare& s) {
    if (s.frames < 1 || s.height < 1 || s.width < 1 || s.side < 1) throw InputError("moving square needs nonzero sizes");
}

}  // namespace

std::vector<cv::Mat> MovingSquare::render() const {
    check(*this);
    std::vector<cv::Mat> out;
    for (std::size_t t = 0; t < frames; ++t) {
        cv::Mat img(static_cast<int>(height), static_cast<int>(width), CV_8UC3, cv::Scalar::all(background));
        for_square(*this, t, 0, [&](std::size_t y, std::size_t x) {
            img.at<cv::Vec3b>(static_cast<int>(y), static_cast<int>(x)) = cv::Vec3b(foreground, foreground, foreground);
        });
        out.push_back(std::move(img));
    }
    return out;
}

Volume3 MovingSquare::occupancy() const {
    check(*this);
    std::vector<float> v(frames * height * width, 0.0f);
    for (std::size_t t = 0; t < frames; ++t) {
        for_square(*this, t, 0, [&](std::size_t y, std::size_t x) { v[(t * height + y) * width + x] = 1.0f; });
    }
    return Volume3(Dims3{frames, height, width}, std::move(v));
}

Volume3 MovingSquare::trajectory(std::size_t halo) const {
    check(*this);
    std::vector<float> v(frames * height * width, 0.0f);
    const long grow = static_cast<long>(halo);
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t a = frames > 1 && t + 1 == frames ? t - 1 : t;
        for (std::size_t s : {a, std::min(a + 1, frames - 1)}) {
            for_square(*this, s, grow, [&](std::size_t y, std::size_t x) { v[(t * height + y) * width + x] = 1.0f; });
        }
    }
    return Volume3(Dims3{frames, height, width}, std::move(v));
}

Grid2 sinusoid_grid(std::size_t h, std::size_t w, double period, double dy, double dx) {
    Grid2 g{h, w, std::vector<float>(h * w)};
    const double k = 2.0 * std::numbers::pi / period;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double fx = static_cast<double>(x) - dx;
            const double fy = static_cast<double>(y) - dy;
            g.v[y * w + x] = static_cast<float>(128.0 + 50.0 * std::sin(k * fx) + 50.0 * std::sin(k * fy));
        }
    }
    return g;
}

}  // namespace selrel
