// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Double-precision nested-loop network evaluation, used as the reference for
// inference and for finite-difference gradient checks. It reads parameters
// straight from the weight bundle by name and shares no kernels with the
// library.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "selrel/model.hpp"
#include "selrel/weights.hpp"

namespace selrel::oracle {

struct NaiveTensor {
    int c = 0, t = 1, h = 1, w = 1;
    std::vector<double> v;
    double& at(int ci, int ti, int hi, int wi) { return v[((std::size_t(ci) * t + ti) * h + hi) * w + wi]; }
    double at(int ci, int ti, int hi, int wi) const { return v[((std::size_t(ci) * t + ti) * h + hi) * w + wi]; }
};

inline const std::vector<float>& param(const WeightBundle& b, const std::string& name) {
    const auto* a = b.find(name);
    if (!a) throw std::runtime_error("oracle: missing " + name);
    return a->values;
}

/// All activations; result[0] is the input, result.back() the logits.
inline std::vector<NaiveTensor> naive_forward_all(const Architecture& arch, const WeightBundle& bundle,
                                                  const std::vector<double>& input) {
    std::vector<NaiveTensor> acts;
    NaiveTensor x{arch.input.c, arch.input.t, arch.input.h, arch.input.w, input};
    acts.push_back(x);
    for (const auto& l : arch.layers) {
        NaiveTensor y;
        switch (l.kind) {
        case LayerKind::conv3d: {
            const auto& W = param(bundle, l.name + ".weight");
            const auto& B = param(bundle, l.name + ".bias");
            y.c = l.out_channels;
            y.t = (x.t + 2 * l.padding.t - l.kernel.t) / l.stride.t + 1;
            y.h = (x.h + 2 * l.padding.h - l.kernel.h) / l.stride.h + 1;
            y.w = (x.w + 2 * l.padding.w - l.kernel.w) / l.stride.w + 1;
            y.v.assign(std::size_t(y.c) * y.t * y.h * y.w, 0.0);
            for (int o = 0; o < y.c; ++o)
                for (int to = 0; to < y.t; ++to)
                    for (int ho = 0; ho < y.h; ++ho)
                        for (int wo = 0; wo < y.w; ++wo) {
                            double acc = B[o];
                            for (int c = 0; c < x.c; ++c)
                                for (int a = 0; a < l.kernel.t; ++a)
                                    for (int b = 0; b < l.kernel.h; ++b)
                                        for (int d = 0; d < l.kernel.w; ++d) {
                                            const int ti = to * l.stride.t - l.padding.t + a;
                                            const int hi = ho * l.stride.h - l.padding.h + b;
                                            const int wi = wo * l.stride.w - l.padding.w + d;
                                            if (ti < 0 || hi < 0 || wi < 0 || ti >= x.t || hi >= x.h || wi >= x.w) continue;
                                            const std::size_t widx =
                                                (((std::size_t(o) * x.c + c) * l.kernel.t + a) * l.kernel.h + b) * l.kernel.w + d;
                                            acc += W[widx] * x.at(c, ti, hi, wi);
                                        }
                            y.at(o, to, ho, wo) = acc;
                        }
            break;
        }
        case LayerKind::relu:
            y = x;
            for (auto& e : y.v) e = std::max(0.0, e);
            break;
        case LayerKind::maxpool3d: {
            y.c = x.c;
            y.t = (x.t + 2 * l.padding.t - l.kernel.t) / l.stride.t + 1;
            y.h = (x.h + 2 * l.padding.h - l.kernel.h) / l.stride.h + 1;
            y.w = (x.w + 2 * l.padding.w - l.kernel.w) / l.stride.w + 1;
            y.v.assign(std::size_t(y.c) * y.t * y.h * y.w, 0.0);
            for (int c = 0; c < y.c; ++c)
                for (int to = 0; to < y.t; ++to)
                    for (int ho = 0; ho < y.h; ++ho)
                        for (int wo = 0; wo < y.w; ++wo) {
                            double best = -std::numeric_limits<double>::infinity();
                            for (int a = 0; a < l.kernel.t; ++a)
                                for (int b = 0; b < l.kernel.h; ++b)
                                    for (int d = 0; d < l.kernel.w; ++d) {
                                        const int ti = to * l.stride.t - l.padding.t + a;
                                        const int hi = ho * l.stride.h - l.padding.h + b;
                                        const int wi = wo * l.stride.w - l.padding.w + d;
                                        if (ti < 0 || hi < 0 || wi < 0 || ti >= x.t || hi >= x.h || wi >= x.w) continue;
                                        best = std::max(best, x.at(c, ti, hi, wi));
                                    }
                            y.at(c, to, ho, wo) = best;
                        }
            break;
        }
        case LayerKind::flatten:
            y = x;
            y.c = int(x.v.size());
            y.t = y.h = y.w = 1;
            break;
        case LayerKind::dense: {
            const auto& W = param(bundle, l.name + ".weight");
            const auto& B = param(bundle, l.name + ".bias");
            y.c = l.out_features;
            y.v.assign(std::size_t(y.c), 0.0);
            for (int o = 0; o < y.c; ++o) {
                double acc = B[o];
                for (std::size_t i = 0; i < x.v.size(); ++i) acc += W[o * x.v.size() + i] * x.v[i];
                y.v[o] = acc;
            }
            break;
        }
        case LayerKind::gap3d: {
            y.c = x.c;
            y.v.assign(std::size_t(y.c), 0.0);
            const std::size_t plane = std::size_t(x.t) * x.h * x.w;
            for (int c = 0; c < x.c; ++c) {
                double acc = 0;
                for (std::size_t i = 0; i < plane; ++i) acc += x.v[c * plane + i];
                y.v[c] = acc / double(plane);
            }
            break;
        }
        }
        acts.push_back(y);
        x = y;
    }
    return acts;
}

inline std::vector<double> naive_logits(const Architecture& arch, const WeightBundle& bundle,
                                        const std::vector<double>& input) {
    return naive_forward_all(arch, bundle, input).back().v;
}

/// Central differences of logit `cls` with respect to every input element.
inline std::vector<double> finite_difference_gradient(const Architecture& arch, const WeightBundle& bundle,
                                                      std::vector<double> input, int cls, double step = 1e-3) {
    std::vector<double> g(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        const double keep = input[i];
        input[i] = keep + step;
        const double up = naive_logits(arch, bundle, input)[cls];
        input[i] = keep - step;
        const double down = naive_logits(arch, bundle, input)[cls];
        input[i] = keep;
        g[i] = (up - down) / (2 * step);
    }
    return g;
}

/// Uniform input inside the preprocessing bounds [0 - mean, 255 - mean] per channel.
inline std::vector<float> random_clip_values(std::mt19937& rng, const Architecture& arch) {
    std::vector<float> v(arch.input.count());
    const std::size_t plane = arch.input.plane();
    for (int c = 0; c < arch.input.c; ++c) {
        std::uniform_real_distribution<float> u(0.0f - arch.channel_means[c], 255.0f - arch.channel_means[c]);
        for (std::size_t i = 0; i < plane; ++i) v[c * plane + i] = u(rng);
    }
    return v;
}

inline std::vector<double> to_double(const std::vector<float>& v) { return {v.begin(), v.end()}; }

}  // namespace selrel::oracle
