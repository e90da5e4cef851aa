// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "selrel/tensor.hpp"
#include "selrel/weights.hpp"

namespace selrel {

enum class LayerKind { conv3d, relu, maxpool3d, flatten, dense, gap3d };

std::string_view to_string(LayerKind kind);

struct Triple {
    int t = 1;
    int h = 1;
    int w = 1;
    bool operator==(const Triple&) const = default;
};

struct LayerSpec {
    LayerKind kind = LayerKind::relu;
    std::string name;
    int out_channels = 0;  ///< conv3d
    int out_features = 0;  ///< dense
    Triple kernel;         ///< conv3d kernel, maxpool3d window
    Triple stride;
    Triple padding{0, 0, 0};

    bool has_params() const { return kind == LayerKind::conv3d || kind == LayerKind::dense; }
};

/// Layer sequence plus input geometry. Means are per RGB channel, in pixel units.
struct Architecture {
    Shape4 input;
    std::array<float, 3> channel_means{0.0f, 0.0f, 0.0f};
    std::vector<LayerSpec> layers;
};

/// Parses the line-oriented architecture grammar (see docs/architecture.md).
/// Throws LoadError naming the offending line's layer.
Architecture parse_architecture(std::string_view text);
/// Canonical text; parse_architecture(format_architecture(a)) reproduces `a`.
std::string format_architecture(const Architecture& arch);

std::vector<std::string> preset_names();
/// Text of a built-in architecture, or empty when `name` is not a preset.
std::string preset_architecture_text(std::string_view name);
/// A preset name or a path to an architecture file.
Architecture resolve_architecture(std::string_view source);

/// Output shape of one layer; throws LoadError if the layer cannot consume `in`.
Shape4 infer_output_shape(const LayerSpec& layer, Shape4 in);

struct LayerParams {
    std::vector<float> weight;  ///< row-major out x fan_in (conv: out x C x kt x kh x kw)
    std::vector<float> bias;
};

/**
 * @brief Validated network: architecture, weights, and the inferred shape chain.
 *
 * Immutable after load. `shapes()[i]` is the input of layer i and
 * `shapes()[i + 1]` its output.
 */
class Model {
public:
    const Architecture& architecture() const { return arch_; }
    const std::vector<LayerSpec>& layers() const { return arch_.layers; }
    const LayerSpec& layer(std::size_t i) const { return arch_.layers[i]; }
    const LayerParams& params(std::size_t i) const { return params_[i]; }
    const std::vector<Shape4>& shapes() const { return shapes_; }
    Shape4 input_shape() const { return arch_.input; }
    const std::array<float, 3>& channel_means() const { return arch_.channel_means; }
    int class_count() const { return class_count_; }
    /// SHA-256 over the canonical architecture text and every parameter.
    const std::string& hash() const { return hash_; }

    /// Throws InputError for an unknown layer name.
    std::size_t layer_index(std::string_view name) const;
    /// Index of the last conv3d layer; throws InputError if there is none.
    std::size_t last_conv_index() const;

    friend Model load_model(Architecture arch, const WeightBundle& bundle);

private:
    Architecture arch_;
    std::vector<LayerParams> params_;
    std::vector<Shape4> shapes_;
    int class_count_ = 0;
    std::string hash_;
};

/// Throws LoadError naming the layer on any missing or mis-shaped parameter.
Model load_model(Architecture arch, const WeightBundle& bundle);
Model load_model(std::string_view arch_source, const std::filesystem::path& bundle_path);

/// He-style random weights for every parameterized layer, deterministic in `seed`.
WeightBundle random_weight_bundle(const Architecture& arch, unsigned seed, bool zero_bias = false);

}  // namespace selrel
