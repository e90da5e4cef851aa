// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>

#include "selrel/volume.hpp"

namespace selrel {

/**
 * @brief A relevance map in the geometry of the model's input clip.
 *
 * `method` is one of the base method names or "selective-<base>".
 * dtd and gradcam volumes are non-negative; guided_bp may be signed.
 */
struct RelevanceVolume {
    Volume3 volume;
    std::string method;
    int class_index = 0;
    /// Set by dtd when the seed logit is <= 0; the volume is then all zeros.
    bool nonpositive_seed = false;
};

}  // namespace selrel
