// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/layers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

#include "selrel/errors.hpp"

namespace selrel::layers {

namespace {

using RowMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;
using StridedMap = Eigen::Map<RowMat, 0, Eigen::OuterStride<>>;
using ConstStridedMap = Eigen::Map<const RowMat, 0, Eigen::OuterStride<>>;

void check_weight(std::span<const float> weight, std::size_t rows, std::size_t cols, const LayerSpec& spec) {
    if (weight.size() != rows * cols) {
        throw SizeError("layer '" + spec.name + "': weight has " + std::to_string(weight.size()) + " values, expected " +
                        std::to_string(rows * cols));
    }
}

// Column buffer for one output frame: row k = ((c * kt + a) * kh + b) * kw + d,
// column n = ho * Wo + wo. Out-of-range taps read as zero padding.
struct ColumnLayout {
    Shape4 in;
    Shape4 out;
    const LayerSpec& spec;

    std::size_t rows() const {
        return static_cast<std::size_t>(in.c) * spec.kernel.t * spec.kernel.h * spec.kernel.w;
    }
    std::size_t cols() const { return static_cast<std::size_t>(out.h) * out.w; }

    template <typename Fn>
    void for_each_tap(int to, Fn&& fn) const {
        const auto& k = spec.kernel;
        const auto& s = spec.stride;
        const auto& p = spec.padding;
        std::size_t row = 0;
        for (int c = 0; c < in.c; ++c) {
            for (int a = 0; a < k.t; ++a) {
                const int ti = to * s.t - p.t + a;
                for (int b = 0; b < k.h; ++b) {
                    for (int d = 0; d < k.w; ++d, ++row) {
                        std::size_t col = 0;
                        for (int ho = 0; ho < out.h; ++ho) {
                            const int hi = ho * s.h - p.h + b;
                            for (int wo = 0; wo < out.w; ++wo, ++col) {
                                const int wi = wo * s.w - p.w + d;
                                const bool inside = ti >= 0 && ti < in.t && hi >= 0 && hi < in.h && wi >= 0 && wi < in.w;
                                const std::size_t src =
                                    inside ? ((static_cast<std::size_t>(c) * in.t + ti) * in.h + hi) * in.w + wi : 0;
                                fn(row, col, inside, src);
                            }
                        }
                    }
                }
            }
        }
    }
};

}  // namespace

Tensor conv3d(const Tensor& in, const LayerSpec& spec, std::span<const float> weight, std::span<const float> bias,
              Shape4 out_shape) {
    ColumnLayout layout{in.shape, out_shape, spec};
    const std::size_t K = layout.rows();
    const std::size_t N = layout.cols();
    const std::size_t O = static_cast<std::size_t>(out_shape.c);
    check_weight(weight, O, K, spec);

    Tensor out(out_shape);
    std::vector<float> col(K * N);
    const ConstMatMap wmat(weight.data(), static_cast<Eigen::Index>(O), static_cast<Eigen::Index>(K));
    const std::size_t frame_stride = static_cast<std::size_t>(out_shape.t) * N;
    for (int to = 0; to < out_shape.t; ++to) {
        layout.for_each_tap(to, [&](std::size_t row, std::size_t c, bool inside, std::size_t src) {
            col[row * N + c] = inside ? in.data[src] : 0.0f;
        });
        const ConstMatMap cmat(col.data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(N));
        StridedMap slice(out.data.data() + static_cast<std::size_t>(to) * N, static_cast<Eigen::Index>(O),
                         static_cast<Eigen::Index>(N), Eigen::OuterStride<>(static_cast<Eigen::Index>(frame_stride)));
        slice.noalias() = wmat * cmat;
        if (!bias.empty()) {
            for (std::size_t o = 0; o < O; ++o) slice.row(static_cast<Eigen::Index>(o)).array() += bias[o];
        }
    }
    return out;
}

Tensor conv3d_backward_data(const Tensor& grad_out, const LayerSpec& spec, std::span<const float> weight,
                            Shape4 in_shape) {
    ColumnLayout layout{in_shape, grad_out.shape, spec};
    const std::size_t K = layout.rows();
    const std::size_t N = layout.cols();
    const std::size_t O = static_cast<std::size_t>(grad_out.shape.c);
    check_weight(weight, O, K, spec);

    Tensor grad_in(in_shape);
    RowMat gcol(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(N));
    const ConstMatMap wmat(weight.data(), static_cast<Eigen::Index>(O), static_cast<Eigen::Index>(K));
    const std::size_t frame_stride = static_cast<std::size_t>(grad_out.shape.t) * N;
    for (int to = 0; to < grad_out.shape.t; ++to) {
        const ConstStridedMap slice(grad_out.data.data() + static_cast<std::size_t>(to) * N, static_cast<Eigen::Index>(O),
                                    static_cast<Eigen::Index>(N),
                                    Eigen::OuterStride<>(static_cast<Eigen::Index>(frame_stride)));
        gcol.noalias() = wmat.transpose() * slice;
        const float* g = gcol.data();
        layout.for_each_tap(to, [&](std::size_t row, std::size_t c, bool inside, std::size_t src) {
            if (inside) grad_in.data[src] += g[row * N + c];
        });
    }
    return grad_in;
}

Tensor dense(const Tensor& in, std::span<const float> weight, std::span<const float> bias, int out_features) {
    const std::size_t n_in = in.shape.count();
    const auto n_out = static_cast<std::size_t>(out_features);
    if (weight.size() != n_out * n_in) {
        throw SizeError("dense weight has " + std::to_string(weight.size()) + " values, expected " +
                        std::to_string(n_out * n_in));
    }
    Tensor out(Shape4{out_features, 1, 1, 1});
    const ConstMatMap wmat(weight.data(), static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_in));
    const Eigen::Map<const Eigen::VectorXf> x(in.data.data(), static_cast<Eigen::Index>(n_in));
    Eigen::Map<Eigen::VectorXf> y(out.data.data(), static_cast<Eigen::Index>(n_out));
    y.noalias() = wmat * x;
    if (!bias.empty()) {
        for (std::size_t o = 0; o < n_out; ++o) out.data[o] += bias[o];
    }
    return out;
}

Tensor dense_backward_data(const Tensor& grad_out, std::span<const float> weight, Shape4 in_shape) {
    const std::size_t n_in = in_shape.count();
    const std::size_t n_out = grad_out.shape.count();
    if (weight.size() != n_out * n_in) throw SizeError("dense weight does not match gradient shapes");
    Tensor grad_in(in_shape);
    const ConstMatMap wmat(weight.data(), static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_in));
    const Eigen::Map<const Eigen::VectorXf> g(grad_out.data.data(), static_cast<Eigen::Index>(n_out));
    Eigen::Map<Eigen::VectorXf> gi(grad_in.data.data(), static_cast<Eigen::Index>(n_in));
    gi.noalias() = wmat.transpose() * g;
    return grad_in;
}

Tensor relu(const Tensor& in) {
    Tensor out(in.shape);
    std::transform(in.data.begin(), in.data.end(), out.data.begin(), [](float x) { return x > 0.0f ? x : 0.0f; });
    return out;
}

Tensor maxpool3d(const Tensor& in, const LayerSpec& spec, Shape4 out_shape, std::vector<std::uint32_t>& argmax) {
    const Shape4& s = in.shape;
    if (s.count() > std::numeric_limits<std::uint32_t>::max()) throw SizeError("pool input too large for argmax indices");
    Tensor out(out_shape);
    argmax.assign(out_shape.count(), 0);
    const auto& k = spec.kernel;
    const auto& st = spec.stride;
    const auto& p = spec.padding;
    std::size_t o = 0;
    for (int c = 0; c < out_shape.c; ++c) {
        for (int to = 0; to < out_shape.t; ++to) {
            for (int ho = 0; ho < out_shape.h; ++ho) {
                for (int wo = 0; wo < out_shape.w; ++wo, ++o) {
                    float best = -std::numeric_limits<float>::infinity();
                    std::size_t best_at = std::numeric_limits<std::size_t>::max();
                    for (int a = 0; a < k.t; ++a) {
                        const int ti = to * st.t - p.t + a;
                        if (ti < 0 || ti >= s.t) continue;
                        for (int b = 0; b < k.h; ++b) {
                            const int hi = ho * st.h - p.h + b;
                            if (hi < 0 || hi >= s.h) continue;
                            for (int d = 0; d < k.w; ++d) {
                                const int wi = wo * st.w - p.w + d;
                                if (wi < 0 || wi >= s.w) continue;
                                const std::size_t idx = in.index(c, ti, hi, wi);
                                if (best_at == std::numeric_limits<std::size_t>::max() || in.data[idx] > best) {
                                    best = in.data[idx];
                                    best_at = idx;
                                }
                            }
                        }
                    }
                    out.data[o] = best;
                    argmax[o] = static_cast<std::uint32_t>(best_at);
                }
            }
        }
    }
    return out;
}

Tensor maxpool3d_backward(const Tensor& grad_out, const std::vector<std::uint32_t>& argmax, Shape4 in_shape) {
    if (argmax.size() != grad_out.data.size()) throw SizeError("argmax table does not match pool output");
    Tensor grad_in(in_shape);
    for (std::size_t o = 0; o < argmax.size(); ++o) grad_in.data[argmax[o]] += grad_out.data[o];
    return grad_in;
}

Tensor gap3d(const Tensor& in) {
    const std::size_t plane = in.shape.plane();
    Tensor out(Shape4{in.shape.c, 1, 1, 1});
    for (int c = 0; c < in.shape.c; ++c) {
        double acc = 0.0;
        const float* p = in.data.data() + static_cast<std::size_t>(c) * plane;
        for (std::size_t i = 0; i < plane; ++i) acc += p[i];
        out.data[static_cast<std::size_t>(c)] = static_cast<float>(acc / static_cast<double>(plane));
    }
    return out;
}

Tensor gap3d_backward(const Tensor& grad_out, Shape4 in_shape) {
    const std::size_t plane = in_shape.plane();
    Tensor grad_in(in_shape);
    for (int c = 0; c < in_shape.c; ++c) {
        const float g = grad_out.data[static_cast<std::size_t>(c)] / static_cast<float>(plane);
        std::fill_n(grad_in.data.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * plane), plane, g);
    }
    return grad_in;
}

}  // namespace selrel::layers
