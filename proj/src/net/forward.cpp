// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/forward.hpp"

#include <algorithm>

#include "selrel/errors.hpp"
#include "selrel/layers.hpp"

namespace selrel {

ForwardResult forward(const Model& model, const Tensor& input) {
    if (input.shape != model.input_shape()) {
        throw InputError("input shape " + to_string(input.shape) + " does not match model input " +
                         to_string(model.input_shape()));
    }
    if (input.data.size() != input.shape.count()) throw SizeError("input tensor data does not match its shape");

    ForwardResult r;
    auto& tr = r.trace;
    tr.model_hash = model.hash();
    tr.activations.reserve(model.layers().size() + 1);
    tr.activations.push_back(input);
    tr.pool_argmax.resize(model.layers().size());

    for (std::size_t i = 0; i < model.layers().size(); ++i) {
        const auto& l = model.layer(i);
        const Tensor& x = tr.activations.back();
        const Shape4 out_shape = model.shapes()[i + 1];
        const auto& p = model.params(i);
        Tensor y;
        switch (l.kind) {
        case LayerKind::conv3d: y = layers::conv3d(x, l, p.weight, p.bias, out_shape); break;
        case LayerKind::relu: y = layers::relu(x); break;
        case LayerKind::maxpool3d: y = layers::maxpool3d(x, l, out_shape, tr.pool_argmax[i]); break;
        case LayerKind::flatten: y = Tensor(out_shape, x.data); break;
        case LayerKind::dense: y = layers::dense(x, p.weight, p.bias, l.out_features); break;
        case LayerKind::gap3d: y = layers::gap3d(x); break;
        }
        tr.activations.push_back(std::move(y));
    }
    r.logits = tr.activations.back().data;
    return r;
}

ForwardResult forward(const Model& model, const ClipTensor& clip) { return forward(model, clip.tensor()); }

int argmax_class(const std::vector<float>& logits) {
    if (logits.empty()) throw InputError("no logits");
    return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

}  // namespace selrel
