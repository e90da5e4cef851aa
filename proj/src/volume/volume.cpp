// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"

namespace selrel {

std::string to_string(const Dims3& d) {
    return std::to_string(d.t) + "x" + std::to_string(d.h) + "x" + std::to_string(d.w);
}

Volume3::Volume3(Dims3 dims, std::vector<float> data) : dims_(dims), data_(std::move(data)) {
    if (dims_.t == 0 || dims_.h == 0 || dims_.w == 0) {
        throw SizeError("volume dims must be >= 1, got " + to_string(dims_));
    }
    if (data_.size() != dims_.count()) {
        throw SizeError("volume " + to_string(dims_) + " needs " + std::to_string(dims_.count()) +
                        " scalars, got " + std::to_string(data_.size()));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw InputError("non-finite volume element at index " + std::to_string(i));
        }
    }
}

Volume3 Volume3::zeros(Dims3 dims) { return filled(dims, 0.0f); }

Volume3 Volume3::filled(Dims3 dims, float value) { return Volume3(dims, std::vector<float>(dims.count(), value)); }

VolumeStats volume_stats(const Volume3& v) {
    if (v.empty()) throw SizeError("statistics of an empty volume");
    const auto data = v.data();
    VolumeStats s;
    s.min = data[0];
    s.max = data[0];
    for (float x : data) {
        s.sum += x;
        s.min = std::min<double>(s.min, x);
        s.max = std::max<double>(s.max, x);
    }
    const double n = static_cast<double>(data.size());
    s.mean = s.sum / n;
    double sq = 0.0;
    for (float x : data) {
        const double d = x - s.mean;
        sq += d * d;
    }
    s.std = std::sqrt(sq / n);
    // Rounding can push the mean a hair outside [min, max] for near-constant data.
    s.mean = std::clamp(s.mean, s.min, s.max);
    if (s.min == s.max) s.std = 0.0;
    return s;
}

float max_abs(const Volume3& v) {
    float m = 0.0f;
    for (float x : v.data()) m = std::max(m, std::abs(x));
    return m;
}

SobelKernel3 sobel_kernel(Axis axis) {
    constexpr float deriv[3] = {-1.0f, 0.0f, 1.0f};
    constexpr float smooth[3] = {1.0f, 2.0f, 1.0f};
    SobelKernel3 k{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int c = 0; c < 3; ++c) {
                switch (axis) {
                case Axis::t: k[a][b][c] = deriv[a] * smooth[b] * smooth[c]; break;
                case Axis::h: k[a][b][c] = smooth[a] * deriv[b] * smooth[c]; break;
                case Axis::w: k[a][b][c] = smooth[a] * smooth[b] * deriv[c]; break;
                }
            }
        }
    }
    return k;
}

namespace {

// One separable pass of 3 taps along a single axis with edge clamping.
// `stride` is the element distance between neighbours on that axis.
void filter_axis(const std::vector<double>& in, std::vector<double>& out, const Dims3& d, Axis axis,
                 const double (&taps)[3]) {
    const std::size_t len = axis == Axis::t ? d.t : axis == Axis::h ? d.h : d.w;
    const std::size_t stride = axis == Axis::t ? d.h * d.w : axis == Axis::h ? d.w : 1;
    for (std::size_t t = 0; t < d.t; ++t) {
        for (std::size_t h = 0; h < d.h; ++h) {
            for (std::size_t w = 0; w < d.w; ++w) {
                const std::size_t i = (t * d.h + h) * d.w + w;
                const std::size_t pos = axis == Axis::t ? t : axis == Axis::h ? h : w;
                const std::size_t lo = pos == 0 ? i : i - stride;
                const std::size_t hi = pos + 1 == len ? i : i + stride;
                out[i] = taps[0] * in[lo] + taps[1] * in[i] + taps[2] * in[hi];
            }
        }
    }
}

}  // namespace

Volume3 sobel3(const Volume3& v, Axis axis) {
    const Dims3& d = v.dims();
    if (d.t < 3 || d.h < 3 || d.w < 3) {
        throw SizeError("sobel3 needs every dimension >= 3, got " + to_string(d));
    }
    static constexpr double deriv[3] = {-1.0, 0.0, 1.0};
    static constexpr double smooth[3] = {1.0, 2.0, 1.0};

    // Integer taps make each partial sum exact in double for float inputs of
    // moderate dynamic range, so the separable form reproduces the direct
    // 27-tap sum after the final rounding to float.
    std::vector<double> a(v.data().begin(), v.data().end());
    std::vector<double> b(a.size());
    filter_axis(a, b, d, Axis::t, axis == Axis::t ? deriv : smooth);
    filter_axis(b, a, d, Axis::h, axis == Axis::h ? deriv : smooth);
    filter_axis(a, b, d, Axis::w, axis == Axis::w ? deriv : smooth);

    std::vector<float> out(b.size());
    std::transform(b.begin(), b.end(), out.begin(), [](double x) { return static_cast<float>(x); });
    return Volume3(d, std::move(out));
}

namespace {

struct Sample {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

std::vector<Sample> align_corners_samples(std::size_t in, std::size_t out) {
    std::vector<Sample> s(out);
    for (std::size_t i = 0; i < out; ++i) {
        if (in == 1 || out == 1) {
            s[i] = {0, 0, 0.0};
            continue;
        }
        const double pos = static_cast<double>(i) * static_cast<double>(in - 1) / static_cast<double>(out - 1);
        auto lo = static_cast<std::size_t>(std::floor(pos));
        lo = std::min(lo, in - 1);
        const std::size_t hi = std::min(lo + 1, in - 1);
        s[i] = {lo, hi, pos - static_cast<double>(lo)};
    }
    return s;
}

inline double lerp(double a, double b, double f) { return a + f * (b - a); }

}  // namespace

Volume3 trilinear_resize(const Volume3& v, Dims3 out) {
    if (out.t == 0 || out.h == 0 || out.w == 0) {
        throw SizeError("trilinear_resize target must be >= 1 on every axis, got " + to_string(out));
    }
    if (v.empty()) throw SizeError("trilinear_resize of an empty volume");
    if (out == v.dims()) return v;

    const Dims3& in = v.dims();
    const auto st = align_corners_samples(in.t, out.t);
    const auto sh = align_corners_samples(in.h, out.h);
    const auto sw = align_corners_samples(in.w, out.w);

    std::vector<float> res(out.count());
    std::size_t k = 0;
    for (const auto& a : st) {
        for (const auto& b : sh) {
            for (const auto& c : sw) {
                auto plane = [&](std::size_t t) {
                    const double top = lerp(v(t, b.lo, c.lo), v(t, b.lo, c.hi), c.frac);
                    const double bot = lerp(v(t, b.hi, c.lo), v(t, b.hi, c.hi), c.frac);
                    return lerp(top, bot, b.frac);
                };
                res[k++] = static_cast<float>(lerp(plane(a.lo), plane(a.hi), a.frac));
            }
        }
    }
    return Volume3(out, std::move(res));
}

std::string encode_srvl(const Volume3& v) {
    if (v.empty()) throw SizeError("cannot encode an empty volume");
    ByteWriter w;
    w.bytes("SRVL");
    w.u16(kSrvlVersion);
    w.u32(static_cast<std::uint32_t>(v.dims().t));
    w.u32(static_cast<std::uint32_t>(v.dims().h));
    w.u32(static_cast<std::uint32_t>(v.dims().w));
    w.f32s(v.data());
    return w.take();
}

Volume3 decode_srvl(std::string_view bytes) {
    ByteReader r(bytes);
    r.expect_magic("SRVL");
    const std::size_t version_at = r.offset();
    if (const auto version = r.u16("version"); version != kSrvlVersion) {
        throw FormatError("unsupported SRVL version " + std::to_string(version), version_at);
    }
    const std::size_t dims_at = r.offset();
    const std::uint64_t t = r.u32("t dim");
    const std::uint64_t h = r.u32("h dim");
    const std::uint64_t w = r.u32("w dim");
    if (t == 0 || h == 0 || w == 0) throw FormatError("zero volume dimension", dims_at);
    // Each factor is < 2^32, so checking the running product against the
    // payload limit before the last multiply keeps it inside 64 bits.
    constexpr std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 4;
    if (t * h > limit / w) throw FormatError("volume dimensions overflow", dims_at);
    const std::uint64_t n = t * h * w;
    auto data = r.f32s(n, "SRVL payload");
    r.expect_end("SRVL payload");
    try {
        return Volume3(Dims3{t, h, w}, std::move(data));
    } catch (const InputError& e) {
        throw FormatError(e.what(), dims_at + 12);
    }
}

void write_volume(const std::filesystem::path& path, const Volume3& v) { write_file_bytes(path, encode_srvl(v)); }

Volume3 read_volume(const std::filesystem::path& path) {
    try {
        return decode_srvl(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace selrel
