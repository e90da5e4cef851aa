// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "selrel/forward.hpp"
#include "selrel/model.hpp"

namespace selrel::detail {

/// InputError unless `trace` came from `model` and the class is in range.
void check_trace(const Model& model, const ActivationTrace& trace, int class_index);

}  // namespace selrel::detail
