// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "selrel/errors.hpp"

namespace selrel {

namespace {

void same_dims(const Volume3& a, const Volume3& b, const char* what) {
    if (!(a.dims() == b.dims())) {
        throw InputError(std::string(what) + ": volumes differ in size (" + to_string(a.dims()) + " vs " +
                         to_string(b.dims()) + ")");
    }
}

}  // namespace

double relevance_epsilon(const Volume3& r, const SupportOptions& opts) {
    if (opts.eps_r) {
        if (!(*opts.eps_r >= 0.0)) throw InputError("eps_r must be >= 0");
        return *opts.eps_r;
    }
    if (!(opts.eps_r_rel >= 0.0)) throw InputError("relative eps_r must be >= 0");
    return opts.eps_r_rel * static_cast<double>(max_abs(r));
}

double motion_precision(const Volume3& relevance, const Volume3& flow_magnitude, const SupportOptions& opts) {
    same_dims(relevance, flow_magnitude, "motion precision");
    const double er = relevance_epsilon(relevance, opts);
    std::size_t support = 0, moving = 0;
    for (std::size_t i = 0; i < relevance.size(); ++i) {
        if (relevance[i] > er) {
            ++support;
            if (flow_magnitude[i] > opts.eps_o) ++moving;
        }
    }
    if (support == 0) throw EmptyRelevanceError("motion precision has no relevant voxels");
    return 100.0 * static_cast<double>(moving) / static_cast<double>(support);
}

Selectivity selectivity_ratios(const Volume3& selective, const Volume3& baseline, const SupportOptions& opts) {
    same_dims(selective, baseline, "selectivity");
    const double er = relevance_epsilon(baseline, opts);
    std::size_t sel_area = 0, base_area = 0;
    double sel_mass = 0.0, base_mass = 0.0;
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        const bool in_base = baseline[i] > er;
        if (selective[i] > er) {
            if (!in_base) throw InputError("selective support is not contained in the baseline support");
            ++sel_area;
        }
        base_area += in_base;
        sel_mass += std::max(selective[i], 0.0f);
        base_mass += std::max(baseline[i], 0.0f);
    }
    if (base_area == 0) throw EmptyRelevanceError("selectivity baseline has no relevant voxels");
    return Selectivity{100.0 * static_cast<double>(sel_area) / static_cast<double>(base_area),
                       100.0 * sel_mass / base_mass};
}

double agreement(const Volume3& a, const Volume3& b, const SupportOptions& opts, OverlapMode mode) {
    same_dims(a, b, "agreement");
    const double ea = relevance_epsilon(a, opts);
    const double eb = relevance_epsilon(b, opts);
    std::size_t both = 0, either = 0, only_a = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool in_a = a[i] > ea;
        const bool in_b = b[i] > eb;
        both += in_a && in_b;
        either += in_a || in_b;
        only_a += in_a;
    }
    const std::size_t denom = mode == OverlapMode::iou ? either : only_a;
    if (denom == 0) throw EmptyRelevanceError("agreement between empty supports");
    return 100.0 * static_cast<double>(both) / static_cast<double>(denom);
}

Aggregate aggregate(const std::vector<double>& samples) {
    Aggregate a;
    a.count = samples.size();
    if (samples.empty()) return a;
    double s = 0.0;
    for (double x : samples) s += x;
    a.mean = s / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double x : samples) ss += (x - a.mean) * (x - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(samples.size()));
    return a;
}

TimingStats benchmark(const std::string& label, const std::function<void()>& body, int repetitions, int warmup) {
    if (repetitions < 1) throw InputError("benchmark repetitions must be >= 1");
    if (warmup < 0) throw InputError("benchmark warmup must be >= 0");
    for (int i = 0; i < warmup; ++i) body();
    std::vector<double> ms;
    ms.reserve(static_cast<std::size_t>(repetitions));
    for (int i = 0; i < repetitions; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    const Aggregate a = aggregate(ms);
    return TimingStats{label,  a.mean,      a.std, *std::min_element(ms.begin(), ms.end()),
                       *std::max_element(ms.begin(), ms.end()), repetitions, warmup};
}

std::string format_number(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string to_text(const ReportTable& t) {
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
    for (const auto& row : t.rows)
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());

    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string cell = c < cells.size() ? cells[c] : "";
            s += (c ? "  " : "") + cell + std::string(width[c] - cell.size(), ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + "\n";
    };
    std::string out = t.title.empty() ? "" : t.title + "\n";
    out += line(t.columns);
    for (const auto& row : t.rows) out += line(row);
    for (const auto& n : t.notes) out += "# " + n + "\n";
    return out;
}

std::string to_csv(const ReportTable& t) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < cells.size(); ++c) s += (c ? "," : "") + quote(cells[c]);
        return s + "\n";
    };
    std::string out = line(t.columns);
    for (const auto& row : t.rows) out += line(row);
    return out;
}

}  // namespace selrel
