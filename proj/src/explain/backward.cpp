// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <array>

#include "explain_common.hpp"
#include "selrel/errors.hpp"
#include "selrel/explain.hpp"
#include "selrel/layers.hpp"

namespace selrel {

std::string_view to_string(Method m) {
    switch (m) {
    case Method::dtd: return "dtd";
    case Method::gradcam: return "gradcam";
    case Method::guided_bp: return "guided_bp";
    case Method::guided_gradcam: return "guided_gradcam";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::dtd, Method::gradcam, Method::guided_bp, Method::guided_gradcam}) {
        if (to_string(m) == name) return m;
    }
    throw InputError("unknown explanation method '" + std::string(name) +
                     "' (expected dtd, gradcam, guided_bp or guided_gradcam)");
}

namespace detail {

void check_trace(const Model& model, const ActivationTrace& trace, int class_index) {
    if (trace.model_hash != model.hash() || trace.activations.size() != model.layers().size() + 1) {
        throw InputError("activation trace was produced by a different model");
    }
    if (class_index < 0 || class_index >= model.class_count()) {
        throw InputError("class index " + std::to_string(class_index) + " out of range [0, " +
                         std::to_string(model.class_count()) + ")");
    }
}

}  // namespace detail

GradientTensor backward(const Model& model, const ActivationTrace& trace, int class_index, ReluMode mode,
                        std::string_view upto_layer) {
    detail::check_trace(model, trace, class_index);
    // Stop once the gradient is at activations[stop].
    const std::size_t stop = upto_layer == kInputLayer ? 0 : model.layer_index(upto_layer) + 1;

    Tensor g(trace.activations.back().shape);
    g.data[static_cast<std::size_t>(class_index)] = 1.0f;
    for (std::size_t i = model.layers().size(); i-- > stop;) {
        const auto& l = model.layer(i);
        const Tensor& x = trace.input_of(i);
        switch (l.kind) {
        case LayerKind::conv3d: g = layers::conv3d_backward_data(g, l, model.params(i).weight, x.shape); break;
        case LayerKind::dense: g = layers::dense_backward_data(g, model.params(i).weight, x.shape); break;
        case LayerKind::relu:
            for (std::size_t k = 0; k < g.data.size(); ++k) {
                const bool pass = x.data[k] > 0.0f && (mode == ReluMode::standard || g.data[k] > 0.0f);
                if (!pass) g.data[k] = 0.0f;
            }
            break;
        case LayerKind::maxpool3d: g = layers::maxpool3d_backward(g, trace.pool_argmax[i], x.shape); break;
        case LayerKind::flatten: g.shape = x.shape; break;
        case LayerKind::gap3d: g = layers::gap3d_backward(g, x.shape); break;
        }
    }
    return GradientTensor{std::move(g), std::string(upto_layer), mode};
}

Volume3 collapse_channels(const Tensor& t) {
    const std::size_t plane = t.shape.plane();
    std::vector<float> out(plane, 0.0f);
    for (int c = 0; c < t.shape.c; ++c) {
        const float* p = t.data.data() + static_cast<std::size_t>(c) * plane;
        for (std::size_t i = 0; i < plane; ++i) out[i] += p[i];
    }
    return Volume3(Dims3{static_cast<std::size_t>(t.shape.t), static_cast<std::size_t>(t.shape.h),
                         static_cast<std::size_t>(t.shape.w)},
                   std::move(out));
}

RelevanceVolume guided_backprop_explain(const Model& model, const ActivationTrace& trace, int class_index) {
    const auto g = backward(model, trace, class_index, ReluMode::guided);
    return RelevanceVolume{collapse_channels(g.grad), std::string(to_string(Method::guided_bp)), class_index};
}

RelevanceVolume explain(Method method, const Model& model, const ActivationTrace& trace, int class_index) {
    switch (method) {
    case Method::dtd: return dtd_explain(model, trace, class_index);
    case Method::gradcam: return gradcam_explain(model, trace, class_index);
    case Method::guided_bp: return guided_backprop_explain(model, trace, class_index);
    case Method::guided_gradcam: return guided_gradcam_explain(model, trace, class_index);
    }
    throw InputError("unknown explanation method");
}

}  // namespace selrel
