// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace selrel {

/// Channels x frames x height x width. Flat vectors use t = h = w = 1.
struct Shape4 {
    int c = 0;
    int t = 1;
    int h = 1;
    int w = 1;

    std::size_t count() const {
        return static_cast<std::size_t>(c) * static_cast<std::size_t>(t) * static_cast<std::size_t>(h) *
               static_cast<std::size_t>(w);
    }
    std::size_t plane() const { return static_cast<std::size_t>(t) * static_cast<std::size_t>(h) * static_cast<std::size_t>(w); }
    bool flat() const { return t == 1 && h == 1 && w == 1; }
    bool operator==(const Shape4&) const = default;
};

std::string to_string(const Shape4& s);

/// Channel-major dense activation array.
struct Tensor {
    Shape4 shape;
    std::vector<float> data;

    Tensor() = default;
    explicit Tensor(Shape4 s, float fill = 0.0f) : shape(s), data(s.count(), fill) {}
    Tensor(Shape4 s, std::vector<float> values);

    std::size_t index(int c, int t, int h, int w) const {
        return ((static_cast<std::size_t>(c) * shape.t + t) * shape.h + h) * shape.w + w;
    }
    float& at(int c, int t, int h, int w) { return data[index(c, t, h, w)]; }
    float at(int c, int t, int h, int w) const { return data[index(c, t, h, w)]; }
};

}  // namespace selrel
