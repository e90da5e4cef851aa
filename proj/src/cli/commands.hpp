// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-subcommand option structs and entry points, plus the helpers they share.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "selrel/metadata.hpp"
#include "selrel/relevance.hpp"
#include "selrel/volume.hpp"

namespace selrel::cli {

/// A failure attributed to one named pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Runs `f`, re-throwing any library or OS error as a StageError for `name`.
template <typename F>
decltype(auto) stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

struct GlobalOptions {
    int workers = 1;
};

struct ExplainOptions {
    std::string model;
    std::string weights;
    std::string frames;
    std::vector<std::string> methods{"dtd"};
    int class_index = -1;  ///< -1: predicted class per clip
    std::size_t start = 0;
    std::size_t window_stride = 0;  ///< 0: one clip at `start`
    std::string target_layer;
    std::string out_dir = ".";
};

struct SelectOptions {
    std::string relevance;
    std::vector<double> n_sigma{4.0};
    bool signed_edges = false;
    std::string out_dir;  ///< empty: next to the input
    std::string stem;     ///< empty: input file stem
};

struct FlowOptions {
    std::string frames;
    std::size_t start = 0;
    double alpha = 10.0;
    int iterations = 200;
    std::string geometry = "16x112x112";
    bool raw = false;
    std::string clip = "0";
    std::string stem = "flow";
    std::string out_dir = ".";
};

struct EvalOptions {
    std::vector<std::string> relevance;
    std::vector<std::string> flow;
    std::optional<double> eps_r;
    double eps_r_rel = 1e-3;
    double eps_o = 1e-2;
    std::string overlap = "iou";
    bool force = false;
    std::string out_dir;  ///< empty: print only
};

struct BenchOptions {
    std::string task = "selective-step";
    int reps = 100;
    int warmup = 3;
    double n_sigma = 4.0;
    std::string dims = "16x112x112";
    unsigned seed = 1;
    std::string relevance;
    std::string model = "c3d-101";
    std::string weights;  ///< empty: seeded random weights
    std::string frames;   ///< empty: seeded random clip
    std::string method = "dtd";
    int class_index = -1;
    std::string csv;
};

struct RenderOptionsCli {
    std::vector<std::string> relevance;
    std::string frames;
    std::size_t start = 0;
    std::string colormap = "diverging";
    double alpha = 0.5;
    std::string mode = "heatmap";
    double eps_r = 1e-3;
    bool grid = false;
    std::string out_dir = ".";
};

struct LogitsOptions {
    std::string model;
    std::string weights;
    std::string clip;
    bool layers = false;
};

int cmd_explain(const ExplainOptions& o, const GlobalOptions& g, std::ostream& out);
int cmd_select(const SelectOptions& o, std::ostream& out);
int cmd_sweep(const SelectOptions& o, std::ostream& out);
int cmd_flow(const FlowOptions& o, const GlobalOptions& g, std::ostream& out);
int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err);
int cmd_render(const RenderOptionsCli& o, std::ostream& out);
int cmd_logits(const LogitsOptions& o, std::ostream& out);

// Shared helpers.

/// Parses "TxHxW".
Dims3 parse_dims(std::string_view text);
/// Digest of a frame directory: SHA-256 over the per-file digests in order.
std::string frames_digest(const std::vector<std::filesystem::path>& files);
/// Preset name as given, otherwise the architecture file name.
std::string model_label(std::string_view source);
/// Round-trip text for a double ("%.17g" trimmed to the shortest exact form).
std::string format_real(double v);
/// Short text for flag values such as n_sigma ("4", "2.5").
std::string format_param(double v);
void ensure_dir(const std::filesystem::path& dir);

struct LoadedRelevance {
    std::filesystem::path path;
    RelevanceVolume relevance;
    Metadata meta;
    std::string clip;        ///< sidecar clip id, "0" when absent
    std::string model_hash;  ///< empty when absent
};

/// Reads an SRVL file and its optional sidecar. Method falls back to the file stem.
LoadedRelevance load_relevance(const std::filesystem::path& path);

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The exception from
/// the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace selrel::cli
