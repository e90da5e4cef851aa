// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"

namespace selrel {

void validate(const FlowParams& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) throw InputError("flow alpha must be finite and > 0");
    if (p.iterations < 1) throw InputError("flow iterations must be >= 1");
    for (double g : p.gray_weights) {
        if (!std::isfinite(g)) throw InputError("grayscale weights must be finite");
    }
}

Grid2 to_gray(const cv::Mat& bgr, const FlowParams& p) {
    if (bgr.empty() || bgr.type() != CV_8UC3) throw InputError("flow frames must be 8-bit 3-channel images");
    Grid2 g{static_cast<std::size_t>(bgr.rows), static_cast<std::size_t>(bgr.cols), {}};
    g.v.resize(g.h * g.w);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            const cv::Vec3b px = row[x];
            g.v[static_cast<std::size_t>(y) * g.w + static_cast<std::size_t>(x)] = static_cast<float>(
                p.gray_weights[0] * px[2] + p.gray_weights[1] * px[1] + p.gray_weights[2] * px[0]);
        }
    }
    return g;
}

FlowPair horn_schunck_pair(const Grid2& f1, const Grid2& f2, const FlowParams& p) {
    validate(p);
    if (f1.h != f2.h || f1.w != f2.w) throw InputError("flow frames differ in size");
    if (f1.h < 2 || f1.w < 2) throw InputError("flow frames must be at least 2x2");
    const std::size_t H = f1.h, W = f1.w, N = H * W;
    auto at = [W](const std::vector<double>& g, std::size_t y, std::size_t x) { return g[y * W + x]; };

    // Central differences with replicated borders, averaged over both frames.
    std::vector<double> ix(N), iy(N), it(N);
    for (std::size_t y = 0; y < H; ++y) {
        const std::size_t ym = y ? y - 1 : 0, yp = std::min(y + 1, H - 1);
        for (std::size_t x = 0; x < W; ++x) {
            const std::size_t xm = x ? x - 1 : 0, xp = std::min(x + 1, W - 1);
            const std::size_t k = y * W + x;
            ix[k] = 0.25 * ((f1.at(y, xp) - f1.at(y, xm)) + (f2.at(y, xp) - f2.at(y, xm)));
            iy[k] = 0.25 * ((f1.at(yp, x) - f1.at(ym, x)) + (f2.at(yp, x) - f2.at(ym, x)));
            it[k] = static_cast<double>(f2.v[k]) - f1.v[k];
        }
    }

    const double a2 = p.alpha * p.alpha;
    std::vector<double> u(N, 0.0), v(N, 0.0), nu(N), nv(N);
    for (int iter = 0; iter < p.iterations; ++iter) {
        for (std::size_t y = 0; y < H; ++y) {
            const std::size_t ym = y ? y - 1 : 0, yp = std::min(y + 1, H - 1);
            for (std::size_t x = 0; x < W; ++x) {
                const std::size_t xm = x ? x - 1 : 0, xp = std::min(x + 1, W - 1);
                const std::size_t k = y * W + x;
                const double ub = 0.25 * (at(u, ym, x) + at(u, yp, x) + at(u, y, xm) + at(u, y, xp));
                const double vb = 0.25 * (at(v, ym, x) + at(v, yp, x) + at(v, y, xm) + at(v, y, xp));
                const double r = (ix[k] * ub + iy[k] * vb + it[k]) / (a2 + ix[k] * ix[k] + iy[k] * iy[k]);
                nu[k] = ub - ix[k] * r;
                nv[k] = vb - iy[k] * r;
            }
        }
        u.swap(nu);
        v.swap(nv);
    }

    FlowPair out{Grid2{H, W, std::vector<float>(N)}, Grid2{H, W, std::vector<float>(N)}};
    for (std::size_t k = 0; k < N; ++k) {
        out.u.v[k] = static_cast<float>(u[k]);
        out.v.v[k] = static_cast<float>(v[k]);
    }
    return out;
}

FlowField dense_flow(const std::vector<cv::Mat>& frames, const FlowParams& p, int workers) {
    validate(p);
    if (frames.size() < 2) throw InputError("optical flow needs at least 2 frames, got " + std::to_string(frames.size()));
    std::vector<Grid2> gray;
    gray.reserve(frames.size());
    for (const auto& f : frames) {
        gray.push_back(to_gray(f, p));
        if (gray.back().h != gray.front().h || gray.back().w != gray.front().w) {
            throw InputError("flow frames differ in size");
        }
    }
    FlowField field{gray.front().h, gray.front().w, std::vector<FlowPair>(frames.size() - 1)};

    // Pairs are independent; each worker claims the next unsolved pair.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < field.pairs.size();) field.pairs[i] = horn_schunck_pair(gray[i], gray[i + 1], p);
    };
    const std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, field.pairs.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return field;
}

Volume3 flow_magnitude(const FlowField& f) {
    if (f.pairs.empty()) throw InputError("flow field has no pairs");
    const std::size_t plane = f.h * f.w;
    std::vector<float> m;
    m.reserve((f.pairs.size() + 1) * plane);
    for (const auto& pr : f.pairs) {
        for (std::size_t k = 0; k < plane; ++k) m.push_back(std::hypot(pr.u.v[k], pr.v.v[k]));
    }
    m.insert(m.end(), m.end() - static_cast<std::ptrdiff_t>(plane), m.end());
    return Volume3(Dims3{f.pairs.size() + 1, f.h, f.w}, std::move(m));
}

std::string encode_srfl(const FlowField& f) {
    if (f.pairs.empty() || f.h == 0 || f.w == 0) throw SizeError("cannot encode an empty flow field");
    ByteWriter w;
    w.bytes("SRFL");
    w.u16(kSrflVersion);
    w.u32(static_cast<std::uint32_t>(f.pairs.size()));
    w.u32(static_cast<std::uint32_t>(f.h));
    w.u32(static_cast<std::uint32_t>(f.w));
    for (const auto& pr : f.pairs) {
        if (pr.u.v.size() != f.h * f.w || pr.v.v.size() != f.h * f.w) throw SizeError("flow pair grid size mismatch");
        w.f32s(pr.u.v);
        w.f32s(pr.v.v);
    }
    return w.take();
}

FlowField decode_srfl(std::string_view bytes) {
    ByteReader r(bytes);
    r.expect_magic("SRFL");
    const std::size_t version_at = r.offset();
    if (const auto version = r.u16("version"); version != kSrflVersion) {
        throw FormatError("unsupported SRFL version " + std::to_string(version), version_at);
    }
    const std::size_t dims_at = r.offset();
    const std::uint64_t n = r.u32("pair count");
    const std::uint64_t h = r.u32("h dim");
    const std::uint64_t w = r.u32("w dim");
    if (n == 0 || h == 0 || w == 0) throw FormatError("zero flow dimension", dims_at);
    constexpr std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 8;
    if (n * h > limit / w) throw FormatError("flow dimensions overflow", dims_at);
    if (n * h * w * 2 > r.remaining() / 4) {
        throw FormatError("truncated SRFL payload: need " + std::to_string(n * h * w * 2) + " scalars, " +
                              std::to_string(r.remaining() / 4) + " present",
                          r.offset());
    }
    FlowField f{h, w, std::vector<FlowPair>(n)};
    for (auto& pr : f.pairs) {
        const std::size_t at = r.offset();
        pr.u = Grid2{h, w, r.f32s(h * w, "SRFL u grid")};
        pr.v = Grid2{h, w, r.f32s(h * w, "SRFL v grid")};
        for (const auto* g : {&pr.u, &pr.v}) {
            for (float x : g->v) {
                if (!std::isfinite(x)) throw FormatError("non-finite flow value", at);
            }
        }
    }
    r.expect_end("SRFL payload");
    return f;
}

void write_flow(const std::filesystem::path& path, const FlowField& f) { write_file_bytes(path, encode_srfl(f)); }

FlowField read_flow(const std::filesystem::path& path) {
    try {
        return decode_srfl(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace selrel
