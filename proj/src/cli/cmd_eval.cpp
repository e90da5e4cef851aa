// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Groups relevance volumes by (clip, method) from their sidecars and reports
// precision against flow, selectivity of selective-X against X, and pairwise
// agreement between baseline methods. Aggregation is per clip, then averaged.

#include <cmath>
#include <map>

#include "commands.hpp"
#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"
#include "selrel/flow.hpp"
#include "selrel/hash.hpp"
#include "selrel/metrics.hpp"

namespace selrel::cli {

namespace {

constexpr std::string_view kSelectivePrefix = "selective-";

struct FlowEntry {
    std::filesystem::path path;
    Volume3 magnitude;
};

FlowEntry load_flow(const std::filesystem::path& p) {
    if (p.extension() == ".srfl") return FlowEntry{p, flow_magnitude(read_flow(p))};
    return FlowEntry{p, read_volume(p)};
}

struct Samples {
    std::vector<double> values;
    std::size_t undefined = 0;
};

struct SelectivitySamples {
    std::vector<double> area;
    std::vector<double> mass;
    std::size_t undefined = 0;
};

std::string pct(double v) { return format_number(v, 4); }

}  // namespace

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
    SupportOptions opts;
    OverlapMode mode = OverlapMode::iou;
    stage("config", [&] {
        if (o.relevance.empty()) throw InputError("--relevance needs at least one file");
        if (o.overlap == "iou") {
            mode = OverlapMode::iou;
        } else if (o.overlap == "directional") {
            mode = OverlapMode::directional;
        } else {
            throw InputError("--overlap must be iou or directional, got '" + o.overlap + "'");
        }
        if (o.eps_r && !(*o.eps_r >= 0.0 && std::isfinite(*o.eps_r))) throw InputError("--eps-r must be >= 0");
        if (!(o.eps_r_rel >= 0.0 && std::isfinite(o.eps_r_rel))) throw InputError("--eps-r-rel must be >= 0");
        if (!(o.eps_o >= 0.0 && std::isfinite(o.eps_o))) throw InputError("--eps-o must be >= 0");
        opts.eps_r = o.eps_r;
        opts.eps_r_rel = o.eps_r_rel;
        opts.eps_o = o.eps_o;
    });

    std::vector<LoadedRelevance> items;
    std::map<std::string, FlowEntry> flows;  // by clip id
    std::map<std::string, std::map<std::string, const LoadedRelevance*>> by_clip;
    stage("read", [&] {
        for (const auto& p : o.relevance) items.push_back(load_relevance(p));
        for (const auto& p : o.flow) {
            const std::string clip = read_sidecar(p).get_or("clip", "0");
            if (!flows.emplace(clip, load_flow(p)).second) throw InputError("two flow files for clip " + clip);
        }
        for (const auto& it : items) {
            if (!by_clip[it.clip].emplace(it.relevance.method, &it).second) {
                throw InputError("two '" + it.relevance.method + "' volumes for clip " + it.clip + " (" +
                                 it.path.string() + ")");
            }
        }
    });

    std::size_t skipped = 0;
    // True when the pair may be compared; otherwise throws, or warns and skips under --force.
    auto comparable = [&](const std::string& what, const Volume3& a, const Volume3& b, const std::string& hash_a,
                          const std::string& hash_b) {
        std::string problem;
        if (!(a.dims() == b.dims())) {
            problem = "dims " + to_string(a.dims()) + " vs " + to_string(b.dims());
        } else if (!hash_a.empty() && !hash_b.empty() && hash_a != hash_b) {
            problem = "model hash " + hash_a.substr(0, 12) + " vs " + hash_b.substr(0, 12);
        }
        if (problem.empty()) return true;
        if (!o.force) throw StageError("check", what + ": mismatched " + problem + " (use --force to skip)");
        err << "warning: skipping " << what << ": mismatched " << problem << "\n";
        ++skipped;
        return false;
    };

    std::map<std::string, Samples> precision;
    std::map<std::string, SelectivitySamples> selectivity;
    std::map<std::pair<std::string, std::string>, Samples> agreement_samples;

    stage("eval", [&] {
        for (const auto& [clip, methods] : by_clip) {
            const FlowEntry* flow = nullptr;
            if (auto f = flows.find(clip); f != flows.end()) {
                flow = &f->second;
            } else if (flows.size() == 1) {
                flow = &flows.begin()->second;
            }
            if (!flows.empty() && !flow) {
                if (!o.force) throw StageError("check", "no flow file for clip " + clip + " (use --force to skip)");
                err << "warning: skipping precision for clip " << clip << ": no flow file\n";
                ++skipped;
            }

            std::vector<const LoadedRelevance*> baselines;
            for (const auto& [method, item] : methods) {
                const Volume3& r = item->relevance.volume;
                if (flow && comparable("precision of " + item->path.string() + " against " + flow->path.string(), r,
                                       flow->magnitude, item->model_hash, "")) {
                    try {
                        precision[method].values.push_back(motion_precision(r, flow->magnitude, opts));
                    } catch (const EmptyRelevanceError&) {
                        ++precision[method].undefined;
                    }
                }
                if (method.rfind(kSelectivePrefix, 0) != 0) {
                    baselines.push_back(item);
                    continue;
                }
                const std::string base = method.substr(kSelectivePrefix.size());
                const auto b = methods.find(base);
                if (b == methods.end()) continue;
                if (!comparable("selectivity of " + method + " in clip " + clip, r, b->second->relevance.volume,
                                item->model_hash, b->second->model_hash)) {
                    continue;
                }
                auto& s = selectivity[base];
                try {
                    const Selectivity sr = selectivity_ratios(r, b->second->relevance.volume, opts);
                    s.area.push_back(sr.area_pct);
                    s.mass.push_back(sr.mass_pct);
                } catch (const EmptyRelevanceError&) {
                    ++s.undefined;
                }
            }

            for (std::size_t i = 0; i < baselines.size(); ++i) {
                for (std::size_t j = 0; j < baselines.size(); ++j) {
                    if (i == j || (mode == OverlapMode::iou && j < i)) continue;
                    const auto* a = baselines[i];
                    const auto* b = baselines[j];
                    const std::string what =
                        "agreement of " + a->relevance.method + " and " + b->relevance.method + " in clip " + clip;
                    if (!comparable(what, a->relevance.volume, b->relevance.volume, a->model_hash, b->model_hash)) {
                        continue;
                    }
                    auto& s = agreement_samples[{a->relevance.method, b->relevance.method}];
                    try {
                        s.values.push_back(agreement(a->relevance.volume, b->relevance.volume, opts, mode));
                    } catch (const EmptyRelevanceError&) {
                        ++s.undefined;
                    }
                }
            }
        }
    });

    std::vector<std::string> notes{"values in percent; per-clip values averaged, std is population std",
                                   o.eps_r ? "eps_r=" + format_param(*o.eps_r) + " (absolute)"
                                           : "eps_r=" + format_param(o.eps_r_rel) + "*max|R|",
                                   "eps_o=" + format_param(o.eps_o) + " px/frame",
                                   "undefined: clips whose relevance support is empty"};
    if (skipped) notes.push_back("skipped comparisons: " + std::to_string(skipped) + " (--force)");

    ReportTable p_table{"motion precision", {"method", "clips", "precision_avg", "precision_std", "undefined"}, {}, notes};
    for (const auto& [m, s] : precision) {
        const Aggregate a = aggregate(s.values);
        p_table.rows.push_back({m, std::to_string(a.count), pct(a.mean), pct(a.std), std::to_string(s.undefined)});
    }
    ReportTable s_table{"selectivity (selective vs baseline)",
                        {"method", "clips", "area_avg", "area_std", "mass_avg", "mass_std", "undefined"},
                        {},
                        notes};
    for (const auto& [m, s] : selectivity) {
        const Aggregate area = aggregate(s.area);
        const Aggregate mass = aggregate(s.mass);
        s_table.rows.push_back({m, std::to_string(area.count), pct(area.mean), pct(area.std), pct(mass.mean),
                                pct(mass.std), std::to_string(s.undefined)});
    }
    std::vector<std::string> a_notes = notes;
    a_notes.insert(a_notes.begin(), "overlap=" + o.overlap +
                                        (mode == OverlapMode::iou ? " (|A n B| / |A u B|)" : " (|A n B| / |A|)"));
    ReportTable a_table{"agreement between baselines",
                        {"method_a", "method_b", "clips", "agreement_avg", "agreement_std", "undefined"},
                        {},
                        a_notes};
    for (const auto& [pair, s] : agreement_samples) {
        const Aggregate a = aggregate(s.values);
        a_table.rows.push_back({pair.first, pair.second, std::to_string(a.count), pct(a.mean), pct(a.std),
                                std::to_string(s.undefined)});
    }

    const std::string report = to_text(p_table) + "\n" + to_text(s_table) + "\n" + to_text(a_table);
    out << report;

    if (!o.out_dir.empty()) {
        const std::filesystem::path dir(o.out_dir);
        Metadata meta;
        meta.set("kind", "eval_report");
        meta.set("overlap", o.overlap);
        meta.set("eps_r", o.eps_r ? format_param(*o.eps_r) : format_param(o.eps_r_rel) + "*max|R|");
        meta.set("eps_o", format_param(o.eps_o));
        meta.set("force", o.force ? "true" : "false");
        std::size_t k = 0;
        stage("read", [&] {
            for (const auto& p : o.relevance) {
                meta.set("input." + std::to_string(k++), std::filesystem::path(p).filename().string() + " " + sha256_file(p));
            }
            for (const auto& p : o.flow) {
                meta.set("input." + std::to_string(k++), std::filesystem::path(p).filename().string() + " " + sha256_file(p));
            }
        });
        const std::vector<std::pair<std::string, std::string>> files{{"eval_report.txt", report},
                                                                     {"eval_precision.csv", to_csv(p_table)},
                                                                     {"eval_selectivity.csv", to_csv(s_table)},
                                                                     {"eval_agreement.csv", to_csv(a_table)}};
        stage("write", [&] {
            ensure_dir(dir);
            for (const auto& [name, text] : files) {
                write_file_bytes(dir / name, text);
                write_sidecar(dir / name, meta);
            }
        });
        for (const auto& f : files) out << "wrote " << (dir / f.first).string() << "\n";
    }
    return 0;
}

}  // namespace selrel::cli
