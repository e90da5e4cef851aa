// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <set>

#include "commands.hpp"
#include "selrel/errors.hpp"
#include "selrel/explain.hpp"
#include "selrel/hash.hpp"
#include "selrel/image.hpp"
#include "selrel/preprocess.hpp"

namespace selrel::cli {

namespace {

// Window starts: start, start+stride, ... while a full window fits. A video
// shorter than one window still yields one loop-padded clip at `start`.
std::vector<std::size_t> clip_starts(std::size_t available, std::size_t start, std::size_t stride, int length) {
    if (start >= available) {
        throw InputError("start frame " + std::to_string(start) + " is past the last frame (" +
                         std::to_string(available) + " available)");
    }
    std::vector<std::size_t> starts{start};
    if (stride == 0) return starts;
    const auto len = static_cast<std::size_t>(length);
    for (std::size_t s = start + stride; s + len <= available; s += stride) starts.push_back(s);
    return starts;
}

struct ClipOutcome {
    std::vector<std::string> lines;
};

}  // namespace

int cmd_explain(const ExplainOptions& o, const GlobalOptions& g, std::ostream& out) {
    std::vector<Method> methods;
    std::set<Method> seen;
    stage("config", [&] {
        if (o.methods.empty()) throw InputError("--method needs at least one method");
        for (const auto& name : o.methods) {
            const Method m = parse_method(name);
            if (!seen.insert(m).second) throw InputError("method '" + name + "' listed twice");
            methods.push_back(m);
        }
        if (!o.target_layer.empty() && !seen.count(Method::gradcam) && !seen.count(Method::guided_gradcam)) {
            throw InputError("--target-layer only applies to gradcam and guided_gradcam");
        }
    });

    const Model model = stage("load-model", [&] { return load_model(o.model, o.weights); });
    const std::string weights_sha = stage("load-model", [&] { return sha256_file(o.weights); });
    std::vector<std::filesystem::path> files;
    std::vector<cv::Mat> frames;
    stage("load-frames", [&] {
        files = list_frame_files(o.frames);
        frames = load_frames(o.frames);
    });
    const std::string frames_sha = stage("load-frames", [&] { return frames_digest(files); });
    const ClipGeometry geometry = geometry_for(model.input_shape());
    const auto starts =
        stage("config", [&] { return clip_starts(frames.size(), o.start, o.window_stride, geometry.frames); });
    const std::filesystem::path out_dir(o.out_dir);
    stage("write", [&] { ensure_dir(out_dir); });

    std::optional<std::string_view> target;
    if (!o.target_layer.empty()) target = o.target_layer;

    std::vector<ClipOutcome> outcomes(starts.size());
    parallel_for(starts.size(), g.workers, [&](std::size_t ci) {
        const ClipTensor clip = stage("preprocess", [&] {
            return preprocess_clip(frames, model.channel_means(), starts[ci], geometry);
        });
        const ForwardResult fr = stage("forward", [&] { return forward(model, clip); });
        const int predicted = argmax_class(fr.logits);
        const int cls = o.class_index >= 0 ? o.class_index : predicted;
        if (cls >= model.class_count()) {
            throw StageError("explain", "class " + std::to_string(cls) + " out of range [0, " +
                                            std::to_string(model.class_count()) + ")");
        }
        char clip_tag[32];
        std::snprintf(clip_tag, sizeof clip_tag, "_c%04zu", ci);

        for (const Method m : methods) {
            const RelevanceVolume r = stage("explain", [&] {
                if (target && m == Method::gradcam) return gradcam_explain(model, fr.trace, cls, target);
                if (target && m == Method::guided_gradcam) {
                    const auto cam = gradcam_explain(model, fr.trace, cls, target);
                    const auto gbp = guided_backprop_explain(model, fr.trace, cls);
                    return RelevanceVolume{guided_gradcam_combine(cam.volume, gbp.volume),
                                           std::string(to_string(m)), cls};
                }
                return explain(m, model, fr.trace, cls);
            });
            const std::string name = std::string(to_string(m)) + (starts.size() > 1 ? clip_tag : "") + ".srvl";
            const auto path = out_dir / name;

            Metadata meta;
            meta.set("kind", "relevance");
            meta.set("method", r.method);
            meta.set("clip", std::to_string(ci));
            meta.set("start_frame", std::to_string(starts[ci]));
            meta.set("class", std::to_string(cls));
            meta.set("predicted", std::to_string(predicted));
            meta.set("logit", format_real(fr.logits[static_cast<std::size_t>(cls)]));
            meta.set("dims", to_string(r.volume.dims()));
            meta.set("model", model_label(o.model));
            meta.set("model_hash", model.hash());
            meta.set("weights_sha256", weights_sha);
            meta.set("frames_sha256", frames_sha);
            meta.set("channel_collapse", "sum");
            if (m == Method::gradcam || m == Method::guided_gradcam) {
                meta.set("target_layer", target ? o.target_layer : model.layer(model.last_conv_index()).name);
            }
            if (r.nonpositive_seed) meta.set("flag", "nonpositive-seed");
            stage("write", [&] {
                write_volume(path, r.volume);
                write_sidecar(path, meta);
            });
            std::string line = "wrote " + path.string() + " (" + r.method + ", clip " + std::to_string(ci) +
                               ", class " + std::to_string(cls) + ")";
            if (r.nonpositive_seed) line += " [nonpositive seed: all-zero relevance]";
            outcomes[ci].lines.push_back(std::move(line));
        }
    });

    for (const auto& oc : outcomes) {
        for (const auto& l : oc.lines) out << l << "\n";
    }
    return 0;
}

}  // namespace selrel::cli
