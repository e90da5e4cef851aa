// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Selective relevance: keep only the voxels of a relevance map whose temporal
// derivative stands out from the rest of the clip.

#pragma once

#include "selrel/relevance.hpp"
#include "selrel/volume.hpp"

namespace selrel {

struct SelectiveConfig {
    double n_sigma = 4.0;
    /// Compare |G| against the threshold; false compares signed G.
    bool use_magnitude = true;
};

/// Throws InputError unless n_sigma is finite and >= 0.
void validate(const SelectiveConfig& cfg);

struct SelectiveResult {
    Volume3 edge_map;
    Volume3 mask;  ///< exactly 0 or 1
    RelevanceVolume selected;
    double threshold = 0.0;  ///< n_sigma * std(edge_map)
};

/// Temporal Sobel response of the relevance; every dim must be >= 3.
Volume3 temporal_edge_map(const RelevanceVolume& r);

struct MaskResult {
    Volume3 mask;
    double threshold = 0.0;
};

/// mask(v) = 1 iff |G(v)| > n_sigma * std(G); an edge map with zero spread selects nothing.
MaskResult selective_mask(const Volume3& edge_map, const SelectiveConfig& cfg);

/// Element-wise product; the method tag becomes "selective-<parent>".
RelevanceVolume apply_selective(const RelevanceVolume& r, const Volume3& mask);

SelectiveResult selective_relevance(const RelevanceVolume& r, const SelectiveConfig& cfg = {});

}  // namespace selrel
