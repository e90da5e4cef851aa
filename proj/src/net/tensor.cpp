// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/tensor.hpp"

#include "selrel/errors.hpp"

namespace selrel {

std::string to_string(const Shape4& s) {
    return std::to_string(s.c) + "x" + std::to_string(s.t) + "x" + std::to_string(s.h) + "x" + std::to_string(s.w);
}

Tensor::Tensor(Shape4 s, std::vector<float> values) : shape(s), data(std::move(values)) {
    if (data.size() != shape.count()) {
        throw SizeError("tensor " + to_string(shape) + " needs " + std::to_string(shape.count()) + " values, got " +
                        std::to_string(data.size()));
    }
}

}  // namespace selrel
