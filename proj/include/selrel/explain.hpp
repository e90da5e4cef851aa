// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Baseline explainers over a traced forward pass. All of them are pure
// functions of (model, trace); one trace may be shared by several explainers
// running at once.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "selrel/forward.hpp"
#include "selrel/model.hpp"
#include "selrel/relevance.hpp"
#include "selrel/volume.hpp"

namespace selrel {

enum class Method { dtd, gradcam, guided_bp, guided_gradcam };

std::string_view to_string(Method m);
/// Throws InputError for an unknown name.
Method parse_method(std::string_view name);

enum class ReluMode { standard, guided };

struct GradientTensor {
    Tensor grad;  ///< same shape as the traced activation at `layer`
    std::string layer;
    ReluMode mode = ReluMode::standard;
};

/// Name used by backward() for the network input.
inline constexpr std::string_view kInputLayer = "input";

/**
 * @brief Gradient of logit `class_index` with respect to the output of
 * `upto_layer` (or the network input when `upto_layer` is "input").
 *
 * Throws InputError for a trace made by another model, a class out of range
 * or an unknown layer.
 */
GradientTensor backward(const Model& model, const ActivationTrace& trace, int class_index, ReluMode mode,
                        std::string_view upto_layer = kInputLayer);

/// Sums a (3, t, h, w) input-shaped tensor over channels.
Volume3 collapse_channels(const Tensor& t);

RelevanceVolume dtd_explain(const Model& model, const ActivationTrace& trace, int class_index);

/// Coarse map at the target conv layer's output resolution, before resizing.
Volume3 gradcam_map(const Model& model, const ActivationTrace& trace, int class_index,
                    std::optional<std::string_view> target_layer = std::nullopt);

RelevanceVolume gradcam_explain(const Model& model, const ActivationTrace& trace, int class_index,
                                std::optional<std::string_view> target_layer = std::nullopt);

RelevanceVolume guided_backprop_explain(const Model& model, const ActivationTrace& trace, int class_index);

/// Element-wise product of an upsampled GradCAM map and a guided backprop volume.
Volume3 guided_gradcam_combine(const Volume3& cam, const Volume3& guided);

RelevanceVolume guided_gradcam_explain(const Model& model, const ActivationTrace& trace, int class_index);

RelevanceVolume explain(Method method, const Model& model, const ActivationTrace& trace, int class_index);

}  // namespace selrel
