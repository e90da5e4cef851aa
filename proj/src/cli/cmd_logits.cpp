// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Logits for a probe clip stored as raw RGB in one SRVL volume of dims
// (3*T, H, W): all R frames, then G, then B. Used by export verification.

#include <cmath>

#include "commands.hpp"
#include "selrel/errors.hpp"
#include "selrel/forward.hpp"
#include "selrel/preprocess.hpp"

namespace selrel::cli {

int cmd_logits(const LogitsOptions& o, std::ostream& out) {
    const Model model = stage("load-model", [&] { return load_model(o.model, o.weights); });
    const Volume3 probe = stage("read", [&] { return read_volume(o.clip); });
    const ClipTensor clip = stage("preprocess", [&] {
        const Shape4 in = model.input_shape();
        const Dims3 want{static_cast<std::size_t>(in.c * in.t), static_cast<std::size_t>(in.h),
                         static_cast<std::size_t>(in.w)};
        if (!(probe.dims() == want)) {
            throw InputError("probe clip dims " + to_string(probe.dims()) + ", model needs " + to_string(want));
        }
        Tensor t(in, probe.to_vector());
        const std::size_t per_channel = t.data.size() / 3;
        for (std::size_t k = 0; k < t.data.size(); ++k) t.data[k] -= model.channel_means()[k / per_channel];
        return ClipTensor(std::move(t));
    });
    const ForwardResult fr = stage("forward", [&] { return forward(model, clip); });
    out << "model_hash " << model.hash() << "\n";
    for (std::size_t i = 0; i < fr.logits.size(); ++i) out << "logit " << i << " " << format_real(fr.logits[i]) << "\n";
    if (o.layers) {
        for (std::size_t i = 0; i < model.layers().size(); ++i) {
            const Tensor& a = fr.trace.output_of(i);
            double sum = 0.0, sq = 0.0;
            for (float v : a.data) {
                sum += v;
                sq += double(v) * v;
            }
            out << "layer " << model.layer(i).name << " " << a.shape.c << "x" << a.shape.t << "x" << a.shape.h << "x"
                << a.shape.w << " sum " << format_real(sum) << " l2 " << format_real(std::sqrt(sq)) << "\n";
        }
    }
    return 0;
}

}  // namespace selrel::cli
