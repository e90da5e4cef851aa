// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "explain_common.hpp"
#include "selrel/errors.hpp"
#include "selrel/explain.hpp"

namespace selrel {

namespace {

Dims3 input_dims(const Model& model) {
    const Shape4 s = model.input_shape();
    return Dims3{static_cast<std::size_t>(s.t), static_cast<std::size_t>(s.h), static_cast<std::size_t>(s.w)};
}

}  // namespace

Volume3 gradcam_map(const Model& model, const ActivationTrace& trace, int class_index,
                    std::optional<std::string_view> target_layer) {
    detail::check_trace(model, trace, class_index);
    const std::size_t idx = target_layer ? model.layer_index(*target_layer) : model.last_conv_index();
    const auto& spec = model.layer(idx);
    if (spec.kind != LayerKind::conv3d) {
        throw InputError("GradCAM target '" + spec.name + "' is a " + std::string(to_string(spec.kind)) +
                         " layer, not conv3d");
    }
    const Tensor& a = trace.output_of(idx);
    const Tensor g = backward(model, trace, class_index, ReluMode::standard, spec.name).grad;

    const std::size_t plane = a.shape.plane();
    std::vector<double> acc(plane, 0.0);
    for (int c = 0; c < a.shape.c; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * plane;
        double alpha = 0.0;
        for (std::size_t i = 0; i < plane; ++i) alpha += g.data[base + i];
        alpha /= static_cast<double>(plane);
        for (std::size_t i = 0; i < plane; ++i) acc[i] += alpha * a.data[base + i];
    }
    std::vector<float> map(plane);
    for (std::size_t i = 0; i < plane; ++i) map[i] = acc[i] > 0.0 ? static_cast<float>(acc[i]) : 0.0f;
    return Volume3(Dims3{static_cast<std::size_t>(a.shape.t), static_cast<std::size_t>(a.shape.h),
                         static_cast<std::size_t>(a.shape.w)},
                   std::move(map));
}

RelevanceVolume gradcam_explain(const Model& model, const ActivationTrace& trace, int class_index,
                                std::optional<std::string_view> target_layer) {
    const Volume3 coarse = gradcam_map(model, trace, class_index, target_layer);
    Volume3 up = trilinear_resize(coarse, input_dims(model));
    return RelevanceVolume{std::move(up), std::string(to_string(Method::gradcam)), class_index};
}

Volume3 guided_gradcam_combine(const Volume3& cam, const Volume3& guided) {
    if (!(cam.dims() == guided.dims())) {
        throw InputError("GradCAM map " + to_string(cam.dims()) + " and guided volume " + to_string(guided.dims()) +
                         " differ in size");
    }
    std::vector<float> out(cam.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cam[i] * guided[i];
    return Volume3(cam.dims(), std::move(out));
}

RelevanceVolume guided_gradcam_explain(const Model& model, const ActivationTrace& trace, int class_index) {
    const auto cam = gradcam_explain(model, trace, class_index);
    const auto gbp = guided_backprop_explain(model, trace, class_index);
    return RelevanceVolume{guided_gradcam_combine(cam.volume, gbp.volume),
                           std::string(to_string(Method::guided_gradcam)), class_index};
}

}  // namespace selrel
