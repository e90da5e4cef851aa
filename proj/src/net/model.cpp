// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>
#include <set>

#include "selrel/errors.hpp"
#include "selrel/hash.hpp"
#include "selrel/model.hpp"

namespace selrel {

namespace {

int pooled_extent(int in, int k, int s, int p) { return (in + 2 * p - k) / s + 1; }

std::vector<std::uint32_t> weight_dims(const LayerSpec& l, Shape4 in) {
    if (l.kind == LayerKind::conv3d) {
        return {static_cast<std::uint32_t>(l.out_channels), static_cast<std::uint32_t>(in.c),
                static_cast<std::uint32_t>(l.kernel.t), static_cast<std::uint32_t>(l.kernel.h),
                static_cast<std::uint32_t>(l.kernel.w)};
    }
    return {static_cast<std::uint32_t>(l.out_features), static_cast<std::uint32_t>(in.count())};
}

std::uint32_t bias_len(const LayerSpec& l) {
    return static_cast<std::uint32_t>(l.kind == LayerKind::conv3d ? l.out_channels : l.out_features);
}

std::string dims_str(const std::vector<std::uint32_t>& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
}

}  // namespace

Shape4 infer_output_shape(const LayerSpec& l, Shape4 in) {
    switch (l.kind) {
    case LayerKind::conv3d:
    case LayerKind::maxpool3d: {
        const int t = pooled_extent(in.t, l.kernel.t, l.stride.t, l.padding.t);
        const int h = pooled_extent(in.h, l.kernel.h, l.stride.h, l.padding.h);
        const int w = pooled_extent(in.w, l.kernel.w, l.stride.w, l.padding.w);
        if (in.t + 2 * l.padding.t < l.kernel.t || in.h + 2 * l.padding.h < l.kernel.h ||
            in.w + 2 * l.padding.w < l.kernel.w || t < 1 || h < 1 || w < 1) {
            throw LoadError(l.name, "window larger than padded input " + to_string(in));
        }
        return Shape4{l.kind == LayerKind::conv3d ? l.out_channels : in.c, t, h, w};
    }
    case LayerKind::relu: return in;
    case LayerKind::flatten: return Shape4{static_cast<int>(in.count()), 1, 1, 1};
    case LayerKind::dense: return Shape4{l.out_features, 1, 1, 1};
    case LayerKind::gap3d: return Shape4{in.c, 1, 1, 1};
    }
    throw LoadError(l.name, "unknown layer kind");
}

std::size_t Model::layer_index(std::string_view name) const {
    for (std::size_t i = 0; i < arch_.layers.size(); ++i) {
        if (arch_.layers[i].name == name) return i;
    }
    throw InputError("model has no layer named '" + std::string(name) + "'");
}

std::size_t Model::last_conv_index() const {
    for (std::size_t i = arch_.layers.size(); i-- > 0;) {
        if (arch_.layers[i].kind == LayerKind::conv3d) return i;
    }
    throw InputError("model has no conv3d layer");
}

Model load_model(Architecture arch, const WeightBundle& bundle) {
    Model m;
    m.shapes_.push_back(arch.input);
    m.params_.resize(arch.layers.size());
    std::set<std::string> used;

    Sha256 hasher;
    hasher.update(format_architecture(arch));

    for (std::size_t i = 0; i < arch.layers.size(); ++i) {
        const auto& l = arch.layers[i];
        const Shape4 in = m.shapes_.back();
        m.shapes_.push_back(infer_output_shape(l, in));
        if (!l.has_params()) continue;

        const auto expect_w = weight_dims(l, in);
        const std::vector<std::uint32_t> expect_b{bias_len(l)};
        for (const auto& [suffix, expect] : {std::pair{".weight", expect_w}, std::pair{".bias", expect_b}}) {
            const std::string name = l.name + suffix;
            const NamedArray* a = bundle.find(name);
            if (!a) throw LoadError(l.name, "missing parameter '" + name + "'");
            if (a->dims != expect) {
                throw LoadError(l.name, "parameter '" + name + "' has shape " + dims_str(a->dims) + ", expected " +
                                            dims_str(expect));
            }
            for (float v : a->values) {
                if (!std::isfinite(v)) throw LoadError(l.name, "parameter '" + name + "' has non-finite values");
            }
            used.insert(name);
            hasher.update(name);
            hasher.update(a->values.data(), a->values.size() * sizeof(float));
        }
        m.params_[i].weight = bundle.find(l.name + ".weight")->values;
        m.params_[i].bias = bundle.find(l.name + ".bias")->values;
    }
    for (const auto& e : bundle.entries) {
        if (!used.count(e.name)) throw LoadError(e.name, "bundle entry matches no parameterized layer");
    }
    const Shape4 out = m.shapes_.back();
    if (!out.flat()) throw LoadError(arch.layers.back().name, "network output " + to_string(out) + " is not a vector");
    m.class_count_ = out.c;
    m.hash_ = hasher.hex();
    m.arch_ = std::move(arch);
    return m;
}

Model load_model(std::string_view arch_source, const std::filesystem::path& bundle_path) {
    return load_model(resolve_architecture(arch_source), read_bundle(bundle_path));
}

WeightBundle random_weight_bundle(const Architecture& arch, unsigned seed, bool zero_bias) {
    std::mt19937 rng(seed);
    WeightBundle bundle;
    Shape4 shape = arch.input;
    for (const auto& l : arch.layers) {
        const Shape4 in = shape;
        shape = infer_output_shape(l, in);
        if (!l.has_params()) continue;
        auto dims = weight_dims(l, in);
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        const std::size_t fan_in = n / dims[0];
        std::normal_distribution<float> weight(0.0f, std::sqrt(2.0f / static_cast<float>(fan_in)));
        std::vector<float> w(n);
        for (auto& x : w) x = weight(rng);
        std::normal_distribution<float> bias(0.0f, 0.1f);
        std::vector<float> b(bias_len(l));
        for (auto& x : b) x = zero_bias ? 0.0f : bias(rng);
        bundle.add(l.name + ".weight", std::move(dims), std::move(w));
        bundle.add(l.name + ".bias", {bias_len(l)}, std::move(b));
    }
    return bundle;
}

}  // namespace selrel
