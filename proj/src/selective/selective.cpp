// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/selective.hpp"

#include <cmath>

#include "selrel/errors.hpp"

namespace selrel {

void validate(const SelectiveConfig& cfg) {
    if (!std::isfinite(cfg.n_sigma) || cfg.n_sigma < 0.0) {
        throw InputError("n_sigma must be finite and >= 0, got " + std::to_string(cfg.n_sigma));
    }
}

Volume3 temporal_edge_map(const RelevanceVolume& r) { return sobel3(r.volume, Axis::t); }

MaskResult selective_mask(const Volume3& edge_map, const SelectiveConfig& cfg) {
    validate(cfg);
    const double sd = volume_stats(edge_map).std;
    MaskResult out{Volume3::zeros(edge_map.dims()), cfg.n_sigma * sd};
    if (sd == 0.0) return out;

    std::vector<float> m(edge_map.size(), 0.0f);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double g = edge_map[i];
        const double x = cfg.use_magnitude ? std::abs(g) : g;
        if (x > out.threshold) m[i] = 1.0f;
    }
    out.mask = Volume3(edge_map.dims(), std::move(m));
    return out;
}

RelevanceVolume apply_selective(const RelevanceVolume& r, const Volume3& mask) {
    if (!(r.volume.dims() == mask.dims())) {
        throw InputError("mask " + to_string(mask.dims()) + " does not match relevance " + to_string(r.volume.dims()));
    }
    std::vector<float> v(r.volume.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mask[i] != 0.0f ? r.volume[i] : 0.0f;
    RelevanceVolume out = r;
    out.volume = Volume3(r.volume.dims(), std::move(v));
    out.method = "selective-" + r.method;
    return out;
}

SelectiveResult selective_relevance(const RelevanceVolume& r, const SelectiveConfig& cfg) {
    SelectiveResult out;
    out.edge_map = temporal_edge_map(r);
    auto m = selective_mask(out.edge_map, cfg);
    out.selected = apply_selective(r, m.mask);
    out.mask = std::move(m.mask);
    out.threshold = m.threshold;
    return out;
}

}  // namespace selrel
