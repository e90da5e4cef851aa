// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selrel/model.hpp"
#include "selrel/preprocess.hpp"
#include "selrel/tensor.hpp"

namespace selrel {

/**
 * @brief Everything a backward-style explainer needs from one forward pass.
 *
 * activations[0] is the network input and activations[i + 1] the output of
 * layer i, so layer i's input is activations[i].
 */
struct ActivationTrace {
    std::string model_hash;
    std::vector<Tensor> activations;
    std::vector<std::vector<std::uint32_t>> pool_argmax;  ///< empty for non-pool layers

    const Tensor& input_of(std::size_t layer) const { return activations[layer]; }
    const Tensor& output_of(std::size_t layer) const { return activations[layer + 1]; }
};

struct ForwardResult {
    std::vector<float> logits;
    ActivationTrace trace;
};

/// Throws InputError when the input shape differs from model.input_shape().
ForwardResult forward(const Model& model, const Tensor& input);
ForwardResult forward(const Model& model, const ClipTensor& clip);

/// Index of the largest logit (first on ties).
int argmax_class(const std::vector<float>& logits);

}  // namespace selrel
