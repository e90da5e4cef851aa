// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.hpp"
#include "selrel/errors.hpp"
#include "selrel/hash.hpp"
#include "selrel/image.hpp"
#include "selrel/preprocess.hpp"
#include "selrel/render.hpp"

namespace selrel::cli {

namespace {

RenderOptions parse_render_options(const RenderOptionsCli& o) {
    RenderOptions r;
    if (o.colormap == "diverging") {
        r.colormap = Colormap::diverging;
    } else if (o.colormap == "grayscale") {
        r.colormap = Colormap::grayscale;
    } else {
        throw InputError("--colormap must be diverging or grayscale, got '" + o.colormap + "'");
    }
    if (o.mode == "heatmap") {
        r.mode = RenderMode::heatmap;
    } else if (o.mode == "mask") {
        r.mode = RenderMode::mask_composite;
    } else {
        throw InputError("--mode must be heatmap or mask, got '" + o.mode + "'");
    }
    r.alpha = o.alpha;
    r.eps_r = o.eps_r;
    validate(r);
    return r;
}

// Frames the volume was computed on: the model's scale-and-crop when the
// source size differs from the volume, otherwise the source frames as they are.
std::vector<cv::Mat> frames_for(const std::vector<cv::Mat>& frames, std::size_t start, Dims3 d) {
    const bool same_size = frames.front().rows == static_cast<int>(d.h) && frames.front().cols == static_cast<int>(d.w);
    if (!same_size) {
        const Shape4 in{3, static_cast<int>(d.t), static_cast<int>(d.h), static_cast<int>(d.w)};
        return prepare_frames(frames, start, geometry_for(in));
    }
    std::vector<cv::Mat> picked;
    for (std::size_t i : clip_frame_indices(frames.size(), start, static_cast<int>(d.t))) picked.push_back(frames[i]);
    return picked;
}

}  // namespace

int cmd_render(const RenderOptionsCli& o, std::ostream& out) {
    const RenderOptions ro = stage("config", [&] {
        if (o.relevance.empty()) throw InputError("--relevance needs at least one file");
        return parse_render_options(o);
    });
    std::vector<LoadedRelevance> items;
    stage("read", [&] {
        for (const auto& p : o.relevance) {
            items.push_back(load_relevance(p));
            if (!(items.back().relevance.volume.dims() == items.front().relevance.volume.dims())) {
                throw InputError(p + " has dims " + to_string(items.back().relevance.volume.dims()) + ", expected " +
                                 to_string(items.front().relevance.volume.dims()));
            }
        }
    });
    std::vector<std::filesystem::path> files;
    std::vector<cv::Mat> frames;
    stage("load-frames", [&] {
        files = list_frame_files(o.frames);
        frames = frames_for(load_frames(o.frames), o.start, items.front().relevance.volume.dims());
    });
    const std::string frames_sha = stage("load-frames", [&] { return frames_digest(files); });

    const std::filesystem::path dir(o.out_dir);
    stage("write", [&] { ensure_dir(dir); });
    std::vector<std::pair<std::string, std::vector<cv::Mat>>> columns{{"frame", frames}};
    for (const auto& it : items) {
        std::vector<cv::Mat> images = stage("render", [&] { return render_overlay(frames, it.relevance.volume, ro); });
        const std::string stem = it.path.stem().string();
        Metadata meta;
        meta.set("kind", "render");
        meta.set("method", it.relevance.method);
        meta.set("source_sha256", stage("read", [&] { return sha256_file(it.path); }));
        meta.set("frames_sha256", frames_sha);
        meta.set("start_frame", std::to_string(o.start));
        meta.set("colormap", o.colormap);
        meta.set("mode", o.mode);
        meta.set("alpha", format_param(o.alpha));
        meta.set("eps_r", format_param(o.eps_r));
        stage("write", [&] {
            write_png_sequence(dir, stem, images);
            write_sidecar(dir / stem, meta);
        });
        out << "wrote " << images.size() << " images " << (dir / (stem + "_NNNN.png")).string() << "\n";
        if (o.grid) columns.emplace_back(it.relevance.method, std::move(images));
    }
    if (o.grid) {
        const auto sheets = stage("render", [&] { return render_grid(columns); });
        Metadata meta;
        meta.set("kind", "render_grid");
        std::string labels;
        for (const auto& c : columns) labels += (labels.empty() ? "" : ",") + c.first;
        meta.set("columns", labels);
        meta.set("frames_sha256", frames_sha);
        stage("write", [&] {
            write_png_sequence(dir, "grid", sheets);
            write_sidecar(dir / "grid", meta);
        });
        out << "wrote " << sheets.size() << " sheets " << (dir / "grid_NNNN.png").string() << "\n";
    }
    return 0;
}

}  // namespace selrel::cli
