// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-layer kernels shared by inference and the explanation passes.
// Everything here is deterministic: accumulation order depends only on shapes.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "selrel/model.hpp"
#include "selrel/tensor.hpp"

namespace selrel::layers {

/// Cross-correlation with zero padding. `bias` may be empty.
Tensor conv3d(const Tensor& in, const LayerSpec& spec, std::span<const float> weight, std::span<const float> bias,
              Shape4 out_shape);
/// Transpose of conv3d with respect to its input.
Tensor conv3d_backward_data(const Tensor& grad_out, const LayerSpec& spec, std::span<const float> weight,
                            Shape4 in_shape);

Tensor dense(const Tensor& in, std::span<const float> weight, std::span<const float> bias, int out_features);
Tensor dense_backward_data(const Tensor& grad_out, std::span<const float> weight, Shape4 in_shape);

Tensor relu(const Tensor& in);

/// Max pooling; padded cells never win. Ties go to the first cell in row-major
/// window order. `argmax` receives the flat input index of each output's winner.
Tensor maxpool3d(const Tensor& in, const LayerSpec& spec, Shape4 out_shape, std::vector<std::uint32_t>& argmax);
/// Routes each output value to its recorded winner, accumulating collisions.
Tensor maxpool3d_backward(const Tensor& grad_out, const std::vector<std::uint32_t>& argmax, Shape4 in_shape);

Tensor gap3d(const Tensor& in);
Tensor gap3d_backward(const Tensor& grad_out, Shape4 in_shape);

}  // namespace selrel::layers
