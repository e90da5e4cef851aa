// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <random>

#include <opencv2/imgcodecs.hpp>

#include "doctest.h"
#include "oracles/volume_oracles.hpp"
#include "selrel/errors.hpp"
#include "selrel/image.hpp"
#include "selrel/render.hpp"

using namespace selrel;

namespace {

std::vector<cv::Mat> gray_frames(std::size_t n, int h, int w, int level = 100) {
    std::vector<cv::Mat> f;
    for (std::size_t i = 0; i < n; ++i) f.emplace_back(h, w, CV_8UC3, cv::Scalar::all(level));
    return f;
}

bool same(const cv::Mat& a, const cv::Mat& b) {
    return a.size() == b.size() && a.type() == b.type() && cv::countNonZero(a.reshape(1) != b.reshape(1)) == 0;
}

}  // namespace

TEST_CASE("zero_center clamps negligible values only") {
    CHECK(zero_center(Volume3::zeros(Dims3{2, 2, 2})) == Volume3::zeros(Dims3{2, 2, 2}));
    const Volume3 v(Dims3{1, 1, 3}, {1.0f, 0.0005f, -0.5f});
    const auto z = zero_center(v, 1e-3);
    CHECK(z[0] == 1.0f);
    CHECK(z[1] == 0.0f);
    CHECK(z[2] == -0.5f);
    const Volume3 edge(Dims3{1, 1, 2}, {1000.0f, 1.0f});
    CHECK(zero_center(edge)[1] == 0.0f);  // |v| == eps * max is clamped

    std::mt19937 rng(2);
    for (int i = 0; i < 10; ++i) {
        const auto r = oracle::random_volume(rng, oracle::random_dims(rng, 1, 6));
        const auto once = zero_center(r, 0.3);
        CHECK(zero_center(once, 0.3) == once);
    }
    const RelevanceVolume rv{v, "dtd", 3};
    const auto zr = zero_center(rv);
    CHECK(zr.method == "dtd");
    CHECK(zr.class_index == 3);
}

TEST_CASE("colormaps") {
    CHECK(colormap_color(Colormap::diverging, 1.0) == cv::Vec3b(0, 0, 255));
    CHECK(colormap_color(Colormap::diverging, -1.0) == cv::Vec3b(255, 0, 0));
    CHECK(colormap_color(Colormap::diverging, 0.0) == cv::Vec3b(0, 0, 0));
    CHECK(colormap_color(Colormap::grayscale, 1.0) == cv::Vec3b(255, 255, 255));
    CHECK(colormap_color(Colormap::grayscale, -0.5) == cv::Vec3b(0, 0, 0));
    int prev = -1;
    for (int i = -100; i <= 100; ++i) {
        const int l = colormap_color(Colormap::grayscale, i / 100.0)[0];
        CHECK(l >= prev);
        prev = l;
    }
}

TEST_CASE("render_overlay") {
    const Dims3 d{16, 6, 7};
    const auto frames = gray_frames(16, 6, 7);
    SUBCASE("one image per frame") {
        std::mt19937 rng(1);
        const auto r = oracle::random_volume(rng, d);
        const auto out = render_overlay(frames, r);
        CHECK(out.size() == 16);
        const auto again = render_overlay(frames, r);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(same(out[i], again[i]));
    }
    SUBCASE("all-zero relevance composites to black") {
        RenderOptions o;
        o.mode = RenderMode::mask_composite;
        for (const auto& img : render_overlay(frames, Volume3::zeros(d), o)) CHECK(cv::countNonZero(img.reshape(1)) == 0);
    }
    SUBCASE("mask composite keeps the frame on the support") {
        std::vector<float> v(d.count(), 0.0f);
        v[d.count() - 1] = 2.0f;
        RenderOptions o;
        o.mode = RenderMode::mask_composite;
        const auto out = render_overlay(frames, Volume3(d, v), o);
        CHECK(out[15].at<cv::Vec3b>(5, 6) == cv::Vec3b(100, 100, 100));
        CHECK(out[15].at<cv::Vec3b>(5, 5) == cv::Vec3b(0, 0, 0));
    }
    SUBCASE("single hot voxel gets the hottest color exactly there") {
        std::vector<float> v(d.count(), 0.0f);
        const std::size_t t = 9, y = 2, x = 4;
        v[(t * d.h + y) * d.w + x] = 0.7f;
        RenderOptions o;
        o.alpha = 1.0;
        for (Colormap map : {Colormap::diverging, Colormap::grayscale}) {
            o.colormap = map;
            const auto out = render_overlay(frames, Volume3(d, v), o);
            const cv::Vec3b hottest = colormap_color(map, 1.0);
            for (std::size_t f = 0; f < 16; ++f)
                for (int yy = 0; yy < 6; ++yy)
                    for (int xx = 0; xx < 7; ++xx) {
                        const bool at = f == t && yy == int(y) && xx == int(x);
                        CHECK((out[f].at<cv::Vec3b>(yy, xx) == hottest) == at);
                    }
        }
    }
    SUBCASE("alpha blends") {
        RenderOptions o;
        o.alpha = 0.25;
        const auto out = render_overlay(frames, Volume3::filled(d, 1.0f), o);
        CHECK(out[0].at<cv::Vec3b>(0, 0) == cv::Vec3b(75, 75, 139));  // 0.25*255 + 0.75*100 = 138.75
    }
    CHECK_THROWS_AS(render_overlay(gray_frames(15, 6, 7), Volume3::zeros(d)), InputError);
    CHECK_THROWS_AS(render_overlay(gray_frames(16, 6, 8), Volume3::zeros(d)), InputError);
    RenderOptions bad;
    bad.alpha = 1.5;
    CHECK_THROWS_AS(render_overlay(frames, Volume3::zeros(d), bad), InputError);
}

TEST_CASE("render_grid") {
    std::vector<std::pair<std::string, std::vector<cv::Mat>>> cols;
    for (int c = 0; c < 8; ++c) cols.emplace_back("col" + std::to_string(c), gray_frames(16, 10, 12, 20 * c + 5));
    const auto sheets = render_grid(cols);
    REQUIRE(sheets.size() == 16);
    for (const auto& s : sheets) {
        CHECK(s.cols == 8 * 12);
        CHECK(s.rows == 10 + kLabelStrip);
        // Panel order follows input order.
        for (int c = 0; c < 8; ++c) CHECK(s.at<cv::Vec3b>(kLabelStrip + 5, c * 12 + 6)[0] == 20 * c + 5);
    }

    const auto single = render_grid({{"only", gray_frames(3, 10, 12, 77)}});
    REQUIRE(single.size() == 3);
    CHECK(same(single[1](cv::Rect(0, kLabelStrip, 12, 10)), gray_frames(1, 10, 12, 77)[0]));

    cols[3].second.pop_back();
    CHECK_THROWS_AS(render_grid(cols), InputError);
    CHECK_THROWS_AS(render_grid({}), InputError);
}

TEST_CASE("png sequence naming") {
    const auto dir = std::filesystem::temp_directory_path() / "selrel_test_render";
    std::filesystem::remove_all(dir);
    const auto paths = write_png_sequence(dir, "dtd", gray_frames(3, 4, 5));
    REQUIRE(paths.size() == 3);
    CHECK(paths[0].filename() == "dtd_0000.png");
    CHECK(paths[2].filename() == "dtd_0002.png");
    const auto back = load_frames(dir);
    REQUIRE(back.size() == 3);
    CHECK(same(back[1], gray_frames(1, 4, 5)[0]));
}
