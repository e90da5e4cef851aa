// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Timed bodies always run on the calling thread, one at a time. Setup
// (loading, preprocessing, the relevance fed to selective-step) is untimed.

#include <random>

#include "commands.hpp"
#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"
#include "selrel/explain.hpp"
#include "selrel/hash.hpp"
#include "selrel/image.hpp"
#include "selrel/metrics.hpp"
#include "selrel/preprocess.hpp"
#include "selrel/selective.hpp"

namespace selrel::cli {

namespace {

constexpr double kFramesPerSecond = 30.0;

volatile float g_sink = 0.0f;

void sink(const Volume3& v) { g_sink = v.empty() ? 0.0f : v[v.size() / 2]; }

Volume3 random_volume(Dims3 d, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> data(d.count());
    for (auto& x : data) x = u(rng);
    return Volume3(d, std::move(data));
}

ClipTensor random_clip(const Model& model, unsigned seed) {
    const Shape4 s = model.input_shape();
    std::mt19937 rng(seed);
    Tensor t(s);
    const std::size_t per_channel = t.data.size() / static_cast<std::size_t>(s.c);
    for (std::size_t k = 0; k < t.data.size(); ++k) {
        const float mean = model.channel_means()[k / per_channel];
        t.data[k] = std::uniform_real_distribution<float>(-mean, 255.0f - mean)(rng);
    }
    return ClipTensor(std::move(t));
}

std::vector<std::string> row(const TimingStats& s) {
    return {s.label,
            std::to_string(s.repetitions),
            std::to_string(s.warmup),
            format_number(s.mean_ms, 4),
            format_number(s.std_ms, 4),
            format_number(s.min_ms, 4),
            format_number(s.max_ms, 4)};
}

}  // namespace

int cmd_bench(const BenchOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const SelectiveConfig cfg = stage("config", [&] {
        if (o.task != "selective-step" && o.task != "explain" && o.task != "combined" && o.task != "all") {
            throw InputError("bench task must be selective-step, explain, combined or all, got '" + o.task + "'");
        }
        if (o.reps < 1) throw InputError("--reps must be >= 1");
        if (o.warmup < 0) throw InputError("--warmup must be >= 0");
        SelectiveConfig c{o.n_sigma, true};
        validate(c);
        return c;
    });
    if (g.workers > 1) err << "note: bench times on a single worker; --workers " << g.workers << " ignored\n";

    const bool needs_model = o.task != "selective-step";
    std::optional<Model> model;
    std::optional<ClipTensor> clip;
    Method method = Method::dtd;
    int cls = 0;
    Metadata meta;
    meta.set("kind", "bench_report");
    meta.set("task", o.task);
    meta.set("reps", std::to_string(o.reps));
    meta.set("warmup", std::to_string(o.warmup));
    meta.set("n_sigma", format_param(o.n_sigma));
    meta.set("workers", "1");

    if (needs_model) {
        method = stage("config", [&] { return parse_method(o.method); });
        model = stage("load-model", [&] {
            if (!o.weights.empty()) return load_model(o.model, o.weights);
            const Architecture arch = resolve_architecture(o.model);
            return load_model(arch, random_weight_bundle(arch, o.seed));
        });
        clip = stage("preprocess", [&] {
            if (o.frames.empty()) return random_clip(*model, o.seed);
            return preprocess_clip(load_frames(o.frames), model->channel_means(), 0, geometry_for(model->input_shape()));
        });
        const ForwardResult fr = stage("forward", [&] { return forward(*model, *clip); });
        cls = o.class_index >= 0 ? o.class_index : argmax_class(fr.logits);
        if (cls >= model->class_count()) throw StageError("config", "class " + std::to_string(cls) + " out of range");
        meta.set("model", model_label(o.model));
        meta.set("model_hash", model->hash());
        meta.set("weights", o.weights.empty() ? "random seed " + std::to_string(o.seed) : sha256_file(o.weights));
        meta.set("method", o.method);
        meta.set("class", std::to_string(cls));
    }

    // Relevance fed to the isolated selective step.
    const RelevanceVolume relevance = stage("preprocess", [&] {
        if (!o.relevance.empty()) return load_relevance(o.relevance).relevance;
        if (needs_model) {
            const ForwardResult fr = forward(*model, *clip);
            return explain(method, *model, fr.trace, cls);
        }
        return RelevanceVolume{random_volume(parse_dims(o.dims), o.seed), "random", 0};
    });
    meta.set("dims", to_string(relevance.volume.dims()));

    std::vector<TimingStats> stats;
    stage("bench", [&] {
        if (o.task == "explain" || o.task == "all") {
            stats.push_back(benchmark(
                "explain:" + o.method,
                [&] {
                    const ForwardResult fr = forward(*model, *clip);
                    sink(explain(method, *model, fr.trace, cls).volume);
                },
                o.reps, o.warmup));
        }
        if (o.task == "combined" || o.task == "all") {
            stats.push_back(benchmark(
                "combined:" + o.method,
                [&] {
                    const ForwardResult fr = forward(*model, *clip);
                    const RelevanceVolume r = explain(method, *model, fr.trace, cls);
                    sink(selective_relevance(r, cfg).selected.volume);
                },
                o.reps, o.warmup));
        }
        if (o.task == "selective-step" || o.task == "all") {
            stats.push_back(benchmark(
                "selective-step", [&] { sink(selective_relevance(relevance, cfg).selected.volume); }, o.reps,
                o.warmup));
        }
    });

    const double bound_ms = 1000.0 * static_cast<double>(relevance.volume.dims().t) / kFramesPerSecond;
    ReportTable table{"benchmark", {"task", "reps", "warmup", "mean_ms", "std_ms", "min_ms", "max_ms"}, {}, {}};
    for (const auto& s : stats) table.rows.push_back(row(s));
    if (o.task == "all") {
        // The isolated step is the overhead; combined - explain is reported
        // alongside but drowns in run-to-run noise when explain is slow.
        const double overhead = stats[2].mean_ms;
        table.rows.push_back({"overhead (selective-step)", "-", "-", format_number(overhead, 4), "-", "-", "-"});
        table.notes.push_back("overhead relative to explain: " +
                              format_number(100.0 * overhead / stats[0].mean_ms, 2) + "%");
        table.notes.push_back("combined - explain: " + format_number(stats[1].mean_ms - stats[0].mean_ms, 4) +
                              " ms (includes timing noise of both runs)");
    }
    table.notes.push_back("single worker; timer excludes loading and serialization");
    table.notes.push_back("selective-step input dims " + to_string(relevance.volume.dims()));
    table.notes.push_back("real-time bound: " + std::to_string(relevance.volume.dims().t) + " frames at 30 fps = " +
                          format_number(bound_ms, 1) + " ms");
    for (const auto& s : stats) {
        table.notes.push_back(s.label + (s.mean_ms <= bound_ms ? " within" : " exceeds") + " the real-time bound");
    }
    out << to_text(table);

    if (!o.csv.empty()) {
        stage("write", [&] {
            const std::filesystem::path p(o.csv);
            ensure_dir(p.parent_path());
            write_file_bytes(p, to_csv(table));
            write_sidecar(p, meta);
        });
        out << "wrote " << o.csv << "\n";
    }
    return 0;
}

}  // namespace selrel::cli
