// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Support-based evaluation of relevance maps, and a timing harness.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "selrel/volume.hpp"

namespace selrel {

struct SupportOptions {
    /// Absolute relevance threshold; when unset, eps_r_rel * max|R| is used.
    std::optional<double> eps_r;
    double eps_r_rel = 1e-3;
    /// Flow magnitude threshold in pixels per frame.
    double eps_o = 1e-2;
};

/// Relevance threshold applied to `r` under `opts`.
double relevance_epsilon(const Volume3& r, const SupportOptions& opts);

/// 100 * |R > eps_r and flow > eps_o| / |R > eps_r|. EmptyRelevanceError on empty support.
double motion_precision(const Volume3& relevance, const Volume3& flow_magnitude, const SupportOptions& opts = {});

struct Selectivity {
    double area_pct = 0.0;
    double mass_pct = 0.0;
};

/**
 * @brief Share of the baseline's support and positive mass kept by the selective map.
 *
 * One threshold, derived from the baseline, is used for both supports. Throws
 * InputError if the selective support leaves the baseline support and
 * EmptyRelevanceError if the baseline support is empty.
 */
Selectivity selectivity_ratios(const Volume3& selective, const Volume3& baseline, const SupportOptions& opts = {});

enum class OverlapMode {
    iou,          ///< |A n B| / |A u B|
    directional,  ///< |A n B| / |A|
};

/// Support overlap in percent; each volume is thresholded against its own maximum.
double agreement(const Volume3& a, const Volume3& b, const SupportOptions& opts = {},
                 OverlapMode mode = OverlapMode::iou);

struct Aggregate {
    double mean = 0.0;
    double std = 0.0;  ///< population
    std::size_t count = 0;
};

Aggregate aggregate(const std::vector<double>& samples);

struct TimingStats {
    std::string label;
    double mean_ms = 0.0;
    double std_ms = 0.0;  ///< population
    double min_ms = 0.0;
    double max_ms = 0.0;
    int repetitions = 0;
    int warmup = 0;
};

/// Runs `body` `warmup` times untimed, then times `repetitions` runs on the calling thread.
TimingStats benchmark(const std::string& label, const std::function<void()>& body, int repetitions, int warmup = 3);

/// Plain-text and CSV rendering of a small result table.
struct ReportTable {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  ///< printed under the text table, e.g. active conventions
};

std::string format_number(double v, int decimals = 4);
std::string to_text(const ReportTable& t);
std::string to_csv(const ReportTable& t);

}  // namespace selrel
