// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deep Taylor decomposition: z+ rule on hidden layers, z^B on the first
// parameterized layer with per-channel bounds from preprocessing.
//
// For a linear layer z_j = sum_i x_i w_ij + b_j the z+ messages are
//   R_i = sum_j (x_i w_ij)^+ / (sum_i (x_i w_ij)^+ + b_j^+ + eps) * R_j.
// (x w)^+ splits into x^+ w^+ + x^- w^-, so both the denominators and the
// redistribution are forward/transpose passes with sign-split weights.

#include <algorithm>

#include "explain_common.hpp"
#include "selrel/explain.hpp"
#include "selrel/layers.hpp"

namespace selrel {

namespace {

constexpr float kEps = 1e-9f;

struct SignSplit {
    std::vector<float> pos;
    std::vector<float> neg;
};

SignSplit split_signs(const std::vector<float>& v) {
    SignSplit s{std::vector<float>(v.size()), std::vector<float>(v.size())};
    for (std::size_t i = 0; i < v.size(); ++i) {
        s.pos[i] = std::max(v[i], 0.0f);
        s.neg[i] = std::min(v[i], 0.0f);
    }
    return s;
}

// Forward and transpose of one parameterized layer with substitute weights.
struct LinearOp {
    const LayerSpec& spec;
    Shape4 in;
    Shape4 out;

    Tensor apply(const Tensor& x, const std::vector<float>& w) const {
        if (spec.kind == LayerKind::conv3d) return layers::conv3d(x, spec, w, {}, out);
        return layers::dense(x, w, {}, spec.out_features);
    }
    Tensor transpose(const Tensor& s, const std::vector<float>& w) const {
        if (spec.kind == LayerKind::conv3d) return layers::conv3d_backward_data(s, spec, w, in);
        return layers::dense_backward_data(s, w, in);
    }
};

// s_j = R_j / (z_j + eps), with an optional bias term already folded into z.
Tensor stabilized_ratio(const Tensor& relevance, const Tensor& z) {
    Tensor s(relevance.shape);
    for (std::size_t j = 0; j < s.data.size(); ++j) {
        const float r = relevance.data[j];
        s.data[j] = r == 0.0f ? 0.0f : r / (z.data[j] + kEps);
    }
    return s;
}

void add_to(Tensor& z, const Tensor& more) {
    for (std::size_t j = 0; j < z.data.size(); ++j) z.data[j] += more.data[j];
}

Tensor zplus_step(const LinearOp& op, const LayerParams& p, const Tensor& x, const Tensor& relevance) {
    const SignSplit w = split_signs(p.weight);
    const SignSplit xs = split_signs(x.data);
    const bool has_negative_input =
        std::any_of(xs.neg.begin(), xs.neg.end(), [](float v) { return v != 0.0f; });

    const Tensor xp(x.shape, xs.pos);
    Tensor z = op.apply(xp, w.pos);
    Tensor xn;
    if (has_negative_input) {
        xn = Tensor(x.shape, xs.neg);
        add_to(z, op.apply(xn, w.neg));
    }
    const std::size_t plane = z.shape.plane();
    for (std::size_t j = 0; j < z.data.size(); ++j) z.data[j] += std::max(p.bias[j / plane], 0.0f);

    const Tensor s = stabilized_ratio(relevance, z);
    Tensor r = op.transpose(s, w.pos);
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] *= xp.data[i];
    if (has_negative_input) {
        const Tensor rn = op.transpose(s, w.neg);
        for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += xn.data[i] * rn.data[i];
    }
    return r;
}

// Per-element lower and upper bounds for the first layer's input. Channel
// order survives pooling and flattening, so a flat input of n elements maps
// index k to channel k / (n / input_channels).
void input_bounds(const Model& model, const Shape4& shape, std::vector<float>& low, std::vector<float>& high) {
    const std::size_t n = shape.count();
    const int channels = model.input_shape().c;
    const std::size_t per_channel = n / static_cast<std::size_t>(channels);
    low.resize(n);
    high.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const float mean = model.channel_means()[k / per_channel];
        low[k] = 0.0f - mean;
        high[k] = 255.0f - mean;
    }
}

Tensor zb_step(const Model& model, const LinearOp& op, const LayerParams& p, const Tensor& x,
               const Tensor& relevance) {
    const SignSplit w = split_signs(p.weight);
    std::vector<float> low, high;
    input_bounds(model, x.shape, low, high);
    Tensor above(x.shape);  // x - l >= 0
    Tensor below(x.shape);  // x - h <= 0
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const float xc = std::clamp(x.data[i], low[i], high[i]);
        above.data[i] = xc - low[i];
        below.data[i] = xc - high[i];
    }
    Tensor z = op.apply(above, w.pos);
    add_to(z, op.apply(below, w.neg));
    const Tensor s = stabilized_ratio(relevance, z);
    Tensor r = op.transpose(s, w.pos);
    const Tensor rn = op.transpose(s, w.neg);
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = above.data[i] * r.data[i] + below.data[i] * rn.data[i];
    return r;
}

Tensor gap_step(const Tensor& x, const Tensor& relevance) {
    const std::size_t plane = x.shape.plane();
    Tensor r(x.shape);
    for (int c = 0; c < x.shape.c; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * plane;
        double denom = 0.0;
        for (std::size_t i = 0; i < plane; ++i) denom += std::max(x.data[base + i], 0.0f);
        const double s = relevance.data[static_cast<std::size_t>(c)] / (denom + kEps);
        for (std::size_t i = 0; i < plane; ++i) {
            r.data[base + i] = static_cast<float>(std::max(x.data[base + i], 0.0f) * s);
        }
    }
    return r;
}

}  // namespace

RelevanceVolume dtd_explain(const Model& model, const ActivationTrace& trace, int class_index) {
    detail::check_trace(model, trace, class_index);
    const Shape4 in = model.input_shape();
    RelevanceVolume out;
    out.method = std::string(to_string(Method::dtd));
    out.class_index = class_index;

    const float seed = trace.activations.back().data[static_cast<std::size_t>(class_index)];
    if (!(seed > 0.0f)) {
        out.volume = Volume3::zeros(Dims3{static_cast<std::size_t>(in.t), static_cast<std::size_t>(in.h),
                                          static_cast<std::size_t>(in.w)});
        out.nonpositive_seed = true;
        return out;
    }

    std::size_t first_param = model.layers().size();
    for (std::size_t i = 0; i < model.layers().size(); ++i) {
        if (model.layer(i).has_params()) {
            first_param = i;
            break;
        }
    }

    Tensor r(trace.activations.back().shape);
    r.data[static_cast<std::size_t>(class_index)] = seed;
    for (std::size_t i = model.layers().size(); i-- > 0;) {
        const auto& l = model.layer(i);
        const Tensor& x = trace.input_of(i);
        switch (l.kind) {
        case LayerKind::conv3d:
        case LayerKind::dense: {
            const LinearOp op{l, x.shape, model.shapes()[i + 1]};
            r = i == first_param ? zb_step(model, op, model.params(i), x, r) : zplus_step(op, model.params(i), x, r);
            break;
        }
        case LayerKind::relu: break;
        case LayerKind::maxpool3d: r = layers::maxpool3d_backward(r, trace.pool_argmax[i], x.shape); break;
        case LayerKind::flatten: r.shape = x.shape; break;
        case LayerKind::gap3d: r = gap_step(x, r); break;
        }
    }
    out.volume = collapse_channels(r);
    return out;
}

}  // namespace selrel
