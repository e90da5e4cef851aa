// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.hpp"
#include "selrel/errors.hpp"
#include "selrel/flow.hpp"
#include "selrel/image.hpp"
#include "selrel/preprocess.hpp"

namespace selrel::cli {

int cmd_flow(const FlowOptions& o, const GlobalOptions& g, std::ostream& out) {
    FlowParams params;
    params.alpha = o.alpha;
    params.iterations = o.iterations;
    const Dims3 dims = stage("config", [&] {
        validate(params);
        return parse_dims(o.geometry);
    });
    std::vector<std::filesystem::path> files;
    std::vector<cv::Mat> frames;
    stage("load-frames", [&] {
        files = list_frame_files(o.frames);
        frames = load_frames(o.frames);
    });
    const std::string frames_sha = stage("load-frames", [&] { return frames_digest(files); });

    // Flow is computed on the same frames the model sees unless --raw.
    const std::vector<cv::Mat> clip = stage("preprocess", [&] {
        if (!o.raw) {
            const Shape4 in{3, static_cast<int>(dims.t), static_cast<int>(dims.h), static_cast<int>(dims.w)};
            return prepare_frames(frames, o.start, geometry_for(in));
        }
        std::vector<cv::Mat> picked;
        for (std::size_t i : clip_frame_indices(frames.size(), o.start, static_cast<int>(dims.t))) {
            picked.push_back(frames[i]);
        }
        return picked;
    });

    const FlowField field = stage("flow", [&] { return dense_flow(clip, params, g.workers); });
    const Volume3 mag = stage("flow", [&] { return flow_magnitude(field); });

    const std::filesystem::path dir(o.out_dir);
    const auto srfl = dir / (o.stem + ".srfl");
    const auto srvl = dir / (o.stem + "_mag.srvl");
    Metadata meta;
    meta.set("clip", o.clip);
    meta.set("start_frame", std::to_string(o.start));
    meta.set("frames_sha256", frames_sha);
    meta.set("alpha", format_param(o.alpha));
    meta.set("iterations", std::to_string(o.iterations));
    meta.set("geometry", o.raw ? "raw" : to_string(dims));
    meta.set("dims", to_string(mag.dims()));
    Metadata field_meta = meta;
    field_meta.set("kind", "flow");
    Metadata mag_meta = meta;
    mag_meta.set("kind", "flow_magnitude");
    stage("write", [&] {
        ensure_dir(dir);
        write_flow(srfl, field);
        write_sidecar(srfl, field_meta);
        write_volume(srvl, mag);
        write_sidecar(srvl, mag_meta);
    });
    out << "wrote " << srfl.string() << " (" << field.pairs.size() << " frame pairs, " << field.h << "x" << field.w
        << ")\n";
    out << "wrote " << srvl.string() << "\n";
    return 0;
}

}  // namespace selrel::cli
