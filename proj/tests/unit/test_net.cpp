// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <filesystem>
#include <random>

#include <opencv2/core.hpp>

#include "doctest.h"
#include "oracles/net_oracles.hpp"
#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"
#include "selrel/forward.hpp"
#include "selrel/layers.hpp"
#include "selrel/model.hpp"
#include "selrel/preprocess.hpp"

using namespace selrel;

namespace {

std::vector<Shape4> shape_chain(const Architecture& arch) {
    std::vector<Shape4> s{arch.input};
    for (const auto& l : arch.layers) s.push_back(infer_output_shape(l, s.back()));
    return s;
}

double max_rel_err(const std::vector<float>& got, const std::vector<double>& ref) {
    double scale = 0, worst = 0;
    for (double r : ref) scale = std::max(scale, std::abs(r));
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
    return worst / std::max(scale, 1e-30);
}

std::vector<cv::Mat> solid_frames(int n, int w, int h, cv::Scalar bgr) {
    std::vector<cv::Mat> f;
    for (int i = 0; i < n; ++i) f.emplace_back(h, w, CV_8UC3, bgr);
    return f;
}

}  // namespace

TEST_CASE("c3d-101 preset shape chain") {
    const auto arch = resolve_architecture("c3d-101");
    CHECK(arch.input == Shape4{3, 16, 112, 112});
    const auto shapes = shape_chain(arch);
    std::size_t conv5b = 0;
    for (std::size_t i = 0; i < arch.layers.size(); ++i) {
        if (arch.layers[i].name == "conv5b") conv5b = i;
    }
    CHECK(shapes[conv5b + 1] == Shape4{512, 2, 7, 7});
    CHECK(shapes.back() == Shape4{101, 1, 1, 1});
    const auto fc6 = std::find_if(arch.layers.begin(), arch.layers.end(), [](const auto& l) { return l.name == "fc6"; });
    CHECK(shapes[std::size_t(fc6 - arch.layers.begin())] == Shape4{8192, 1, 1, 1});
    int convs = 0;
    for (const auto& l : arch.layers) convs += l.kind == LayerKind::conv3d;
    CHECK(convs == 8);
}

TEST_CASE("architecture text round trips through the canonical form") {
    for (const auto& name : preset_names()) {
        const auto a = resolve_architecture(name);
        const auto b = parse_architecture(format_architecture(a));
        CHECK(format_architecture(b) == format_architecture(a));
        CHECK(b.layers.size() == a.layers.size());
    }
}

TEST_CASE("architecture parse errors name the layer or line") {
    auto fails_with = [](const std::string& text, const std::string& where) {
        try {
            parse_architecture(text);
            return false;
        } catch (const LoadError& e) {
            return e.layer() == where;
        }
    };
    CHECK(fails_with("input channels=3 t=1 h=1 w=1\nconv3d name=c1 out=0 kernel=1\n", "c1"));
    CHECK(fails_with("input channels=3 t=1 h=1 w=1\nwibble\n", "line 2"));
    CHECK(fails_with("conv3d name=c1 out=1 kernel=1\n", "line 1"));
    CHECK(fails_with("input channels=3 t=1 h=1 w=1\ndense name=d out=2 bogus=1\n", "d"));
    CHECK(fails_with("input channels=3 t=1 h=1 w=1\ndense name=d out=2\ndense name=d out=2\n", "d"));
    CHECK(fails_with("input channels=1 t=1 h=1 w=1\ndense out=2\n", "line 1"));
    CHECK_THROWS_AS(resolve_architecture("no-such-preset-or-file"), InputError);
}

TEST_CASE("load_model validates the bundle") {
    const auto arch = parse_architecture(
        "input channels=3 t=2 h=3 w=3\nconv3d name=conv1 out=2 kernel=1\nrelu\nflatten\ndense name=fc8 out=4\n");
    auto bundle = random_weight_bundle(arch, 1);
    CHECK(load_model(arch, bundle).class_count() == 4);

    SUBCASE("missing fc8.weight names fc8") {
        WeightBundle b;
        for (const auto& e : bundle.entries)
            if (e.name != "fc8.weight") b.entries.push_back(e);
        try {
            load_model(arch, b);
            FAIL("expected LoadError");
        } catch (const LoadError& e) {
            CHECK(e.layer() == "fc8");
            CHECK(std::string(e.what()).find("fc8.weight") != std::string::npos);
        }
    }
    SUBCASE("shape mismatch") {
        for (auto& e : bundle.entries)
            if (e.name == "conv1.weight") e.dims = {2, 3, 1, 1, 1, 1};
        CHECK_THROWS_AS(load_model(arch, bundle), LoadError);
    }
    SUBCASE("unused entry") {
        bundle.add("ghost.weight", {1}, {0.0f});
        try {
            load_model(arch, bundle);
            FAIL("expected LoadError");
        } catch (const LoadError& e) {
            CHECK(e.layer() == "ghost.weight");
        }
    }
    SUBCASE("window larger than input") {
        const auto bad = parse_architecture("input channels=3 t=1 h=2 w=2\nmaxpool3d window=3\n");
        CHECK_THROWS_AS(load_model(bad, WeightBundle{}), LoadError);
    }
}

TEST_CASE("SRWB round trip and malformed bundles") {
    const auto arch = resolve_architecture("tiny-conv");
    const auto bundle = random_weight_bundle(arch, 3);
    const auto bytes = encode_srwb(bundle);
    const auto back = decode_srwb(bytes);
    REQUIRE(back.entries.size() == bundle.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].name == bundle.entries[i].name);
        CHECK(back.entries[i].dims == bundle.entries[i].dims);
        CHECK(back.entries[i].values == bundle.entries[i].values);
    }
    const auto path = std::filesystem::temp_directory_path() / "selrel_test_net.srwb";
    write_bundle(path, bundle);
    CHECK(load_model("tiny-conv", path).hash() == load_model(arch, bundle).hash());

    CHECK_THROWS_AS(decode_srwb("SRWX" + bytes.substr(4)), FormatError);
    CHECK_THROWS_AS(decode_srwb(bytes.substr(0, bytes.size() - 1)), FormatError);
    CHECK_THROWS_AS(decode_srwb(bytes + "z"), FormatError);
}

TEST_CASE("identity dense model forwards its input unchanged") {
    const auto arch = parse_architecture("input channels=3 t=1 h=1 w=1\ndense name=fc out=3\n");
    WeightBundle b;
    b.add("fc.weight", {3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    b.add("fc.bias", {3}, {0, 0, 0});
    const auto model = load_model(arch, b);
    const Tensor x(Shape4{3, 1, 1, 1}, {0.5f, -2.0f, 7.25f});
    CHECK(forward(model, x).logits == x.data);
}

TEST_CASE("1x1x1 conv with unit weight copies its input channel") {
    const auto arch = parse_architecture("input channels=3 t=2 h=3 w=4\nconv3d name=c out=1 kernel=1\nflatten\n");
    WeightBundle b;
    b.add("c.weight", {1, 3, 1, 1, 1}, {0, 1, 0});
    b.add("c.bias", {1}, {0});
    const auto model = load_model(arch, b);
    std::mt19937 rng(2);
    const Tensor x(arch.input, oracle::random_clip_values(rng, arch));
    const auto r = forward(model, x);
    const auto& out = r.trace.output_of(0);
    CHECK(out.shape == Shape4{1, 2, 3, 4});
    for (int t = 0; t < 2; ++t)
        for (int h = 0; h < 3; ++h)
            for (int w = 0; w < 4; ++w) CHECK(out.at(0, t, h, w) == x.at(1, t, h, w));
}

TEST_CASE("forward matches the naive nested-loop oracle") {
    for (const char* name : {"tiny-conv", "tiny-gap", "tiny-dense"}) {
        const auto arch = resolve_architecture(name);
        for (unsigned seed = 1; seed <= 4; ++seed) {
            const auto bundle = random_weight_bundle(arch, seed);
            const auto model = load_model(arch, bundle);
            std::mt19937 rng(seed * 31);
            const Tensor x(arch.input, oracle::random_clip_values(rng, arch));
            const auto r = forward(model, x);
            const auto ref = oracle::naive_logits(arch, bundle, oracle::to_double(x.data));
            CHECK(max_rel_err(r.logits, ref) <= 1e-5);
        }
    }
}

TEST_CASE("strided and padded layers match the oracle") {
    const auto arch = parse_architecture(
        "input channels=3 t=5 h=7 w=6 means=127.5,127.5,127.5\n"
        "conv3d name=a out=3 kernel=3,2,3 stride=1,2,1 pad=1,0,1\nrelu\n"
        "maxpool3d window=2,2,2 stride=2,1,2 pad=1,0,1\n"
        "conv3d name=b out=2 kernel=2 stride=2 pad=1\nflatten\ndense name=fc out=3\n");
    const auto bundle = random_weight_bundle(arch, 11);
    const auto model = load_model(arch, bundle);
    std::mt19937 rng(12);
    const Tensor x(arch.input, oracle::random_clip_values(rng, arch));
    const auto r = forward(model, x);
    const auto all = oracle::naive_forward_all(arch, bundle, oracle::to_double(x.data));
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(max_rel_err(r.trace.activations[i].data, all[i].v) <= 1e-5);
    }
}

TEST_CASE("trace invariants: shapes, relu, pool argmax, determinism") {
    const auto arch = resolve_architecture("tiny-conv");
    const auto model = load_model(arch, random_weight_bundle(arch, 9));
    std::mt19937 rng(10);
    const Tensor x(arch.input, oracle::random_clip_values(rng, arch));
    const auto r = forward(model, x);
    REQUIRE(r.trace.activations.size() == model.layers().size() + 1);
    for (std::size_t i = 0; i < r.trace.activations.size(); ++i) CHECK(r.trace.activations[i].shape == model.shapes()[i]);
    for (std::size_t i = 0; i < model.layers().size(); ++i) {
        const auto& out = r.trace.output_of(i);
        if (model.layer(i).kind == LayerKind::relu) {
            for (float v : out.data) CHECK(v >= 0.0f);
        }
        if (model.layer(i).kind == LayerKind::maxpool3d) {
            const auto& am = r.trace.pool_argmax[i];
            REQUIRE(am.size() == out.data.size());
            for (std::size_t o = 0; o < am.size(); ++o) CHECK(out.data[o] == r.trace.input_of(i).data[am[o]]);
        }
    }
    const auto again = forward(model, x);
    CHECK(again.logits == r.logits);
    CHECK_THROWS_AS(forward(model, Tensor(Shape4{3, 4, 6, 5})), InputError);
}

TEST_CASE("max-pool ties go to the first cell in row-major order") {
    LayerSpec pool;
    pool.kind = LayerKind::maxpool3d;
    pool.kernel = Triple{1, 2, 2};
    pool.stride = Triple{1, 2, 2};
    const Tensor x(Shape4{1, 1, 2, 2}, {5.0f, 5.0f, 5.0f, 5.0f});
    std::vector<std::uint32_t> am;
    const auto y = layers::maxpool3d(x, pool, Shape4{1, 1, 1, 1}, am);
    CHECK(y.data[0] == 5.0f);
    CHECK(am[0] == 0);
    const Tensor x2(Shape4{1, 1, 2, 2}, {1.0f, 3.0f, 3.0f, 2.0f});
    layers::maxpool3d(x2, pool, Shape4{1, 1, 1, 1}, am);
    CHECK(am[0] == 1);
}

TEST_CASE("mini-c3d runs end to end on a 16x112x112 clip") {
    const auto arch = resolve_architecture("mini-c3d");
    const auto model = load_model(arch, random_weight_bundle(arch, 5));
    CHECK(model.class_count() == 10);
    std::mt19937 rng(6);
    const Tensor x(arch.input, oracle::random_clip_values(rng, arch));
    const auto r = forward(model, x);
    CHECK(r.logits.size() == 10);
    CHECK(r.trace.output_of(model.last_conv_index()).shape == Shape4{8, 4, 7, 7});
}

TEST_CASE("clip frame selection") {
    const auto twenty = clip_frame_indices(20, 0, 16);
    for (std::size_t i = 0; i < 16; ++i) CHECK(twenty[i] == i);

    const auto ten = clip_frame_indices(10, 0, 16);
    for (std::size_t i = 0; i < 16; ++i) CHECK(ten[i] == i % 10);
    CHECK(ten[10] == 0);
    CHECK(ten[15] == 5);

    const auto tail = clip_frame_indices(20, 16, 16);
    CHECK(tail[0] == 16);
    CHECK(tail[4] == 16);
    CHECK(tail[15] == 19);
    CHECK_THROWS_AS(clip_frame_indices(0, 0, 16), InputError);
    CHECK_THROWS_AS(clip_frame_indices(5, 5, 16), InputError);
}

TEST_CASE("preprocess_clip geometry and mean subtraction") {
    const std::array<float, 3> means{90.0f, 98.0f, 102.0f};
    SUBCASE("20 frames -> 3x16x112x112") {
        std::vector<cv::Mat> frames;
        for (int i = 0; i < 20; ++i) frames.emplace_back(120, 160, CV_8UC3, cv::Scalar(i, i, i));
        const auto clip = preprocess_clip(frames, means);
        CHECK(clip.shape() == Shape4{3, 16, 112, 112});
        for (int f = 0; f < 16; ++f) CHECK(clip.tensor().at(0, f, 50, 50) == float(f) - 90.0f);
    }
    SUBCASE("10 frames loop from the start") {
        std::vector<cv::Mat> frames;
        for (int i = 0; i < 10; ++i) frames.emplace_back(128, 128, CV_8UC3, cv::Scalar(0, 0, 10 * i));
        const auto clip = preprocess_clip(frames, {0, 0, 0});
        for (int f = 0; f < 16; ++f) CHECK(clip.tensor().at(0, f, 0, 0) == float(10 * (f % 10)));
    }
    SUBCASE("pixels equal to the means give an all-zero clip") {
        // cv::Scalar is BGR.
        const auto clip = preprocess_clip(solid_frames(16, 171, 128, cv::Scalar(102, 98, 90)), means);
        for (float v : clip.tensor().data) CHECK(v == 0.0f);
    }
    SUBCASE("center crop picks the middle") {
        cv::Mat img(128, 200, CV_8UC3, cv::Scalar(0, 0, 0));
        const int x0 = (200 - 112) / 2;
        img.col(x0).setTo(cv::Scalar(0, 0, 255));
        const auto clip = preprocess_clip(std::vector<cv::Mat>(16, img), {0, 0, 0});
        CHECK(clip.tensor().at(0, 0, 60, 0) == 255.0f);
        CHECK(clip.tensor().at(0, 0, 60, 1) == 0.0f);
    }
    CHECK_THROWS_AS(preprocess_clip({}, means), InputError);
    CHECK_THROWS_AS(ClipTensor(Tensor(Shape4{1, 1, 1, 1})), InputError);
}
