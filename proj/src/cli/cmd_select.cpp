// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.hpp"
#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"
#include "selrel/hash.hpp"
#include "selrel/metrics.hpp"
#include "selrel/selective.hpp"

namespace selrel::cli {

namespace {

struct Target {
    std::filesystem::path dir;
    std::string stem;
};

Target target_for(const SelectOptions& o) {
    const std::filesystem::path in(o.relevance);
    return Target{o.out_dir.empty() ? in.parent_path() : std::filesystem::path(o.out_dir),
                  o.stem.empty() ? in.stem().string() : o.stem};
}

// Parent fields carried into every derived artifact.
Metadata derived_meta(const LoadedRelevance& src, const std::string& source_sha, const std::string& kind) {
    Metadata m;
    m.set("kind", kind);
    for (const char* key : {"clip", "start_frame", "class", "model", "model_hash", "weights_sha256", "frames_sha256"}) {
        if (auto v = src.meta.get(key)) m.set(key, *v);
    }
    m.set("parent_method", src.relevance.method);
    m.set("source_sha256", source_sha);
    m.set("dims", to_string(src.relevance.volume.dims()));
    return m;
}

struct Triple {
    std::filesystem::path edge, mask, selected;
};

Triple write_triple(const Target& t, const std::string& stem, const LoadedRelevance& src, const std::string& source_sha,
                    const SelectiveConfig& cfg, const Volume3& edge, const MaskResult& mask,
                    const RelevanceVolume& selected) {
    Triple paths{t.dir / (stem + "_edge.srvl"), t.dir / (stem + "_mask.srvl"), t.dir / (stem + "_selected.srvl")};
    auto with_params = [&](Metadata m) {
        m.set("n_sigma", format_param(cfg.n_sigma));
        m.set("edge_mode", cfg.use_magnitude ? "magnitude" : "signed");
        m.set("threshold", format_real(mask.threshold));
        return m;
    };
    Metadata em = derived_meta(src, source_sha, "edge_map");
    em.set("method", "temporal-edge");
    Metadata mm = with_params(derived_meta(src, source_sha, "mask"));
    mm.set("method", "selective-mask");
    Metadata sm = with_params(derived_meta(src, source_sha, "relevance"));
    sm.set("method", selected.method);
    stage("write", [&] {
        ensure_dir(t.dir);
        write_volume(paths.edge, edge);
        write_sidecar(paths.edge, em);
        write_volume(paths.mask, mask.mask);
        write_sidecar(paths.mask, mm);
        write_volume(paths.selected, selected.volume);
        write_sidecar(paths.selected, sm);
    });
    return paths;
}

std::size_t count_set(const Volume3& mask) {
    std::size_t n = 0;
    for (float v : mask.data()) n += v != 0.0f;
    return n;
}

}  // namespace

int cmd_select(const SelectOptions& o, std::ostream& out) {
    const SelectiveConfig cfg = stage("config", [&] {
        if (o.n_sigma.size() != 1) throw InputError("select takes one --n-sigma value; use sweep for a list");
        SelectiveConfig c{o.n_sigma.front(), !o.signed_edges};
        validate(c);
        return c;
    });
    const LoadedRelevance src = stage("read", [&] { return load_relevance(o.relevance); });
    const std::string source_sha = stage("read", [&] { return sha256_file(o.relevance); });
    const SelectiveResult res = stage("select", [&] { return selective_relevance(src.relevance, cfg); });
    const Target t = target_for(o);
    const Triple paths = write_triple(t, t.stem, src, source_sha, cfg, res.edge_map,
                                      MaskResult{res.mask, res.threshold}, res.selected);
    out << "threshold " << format_real(res.threshold) << " (n_sigma " << format_param(cfg.n_sigma) << "), "
        << count_set(res.mask) << " of " << res.mask.size() << " voxels selected\n";
    for (const auto& p : {paths.edge, paths.mask, paths.selected}) out << "wrote " << p.string() << "\n";
    return 0;
}

int cmd_sweep(const SelectOptions& o, std::ostream& out) {
    stage("config", [&] {
        if (o.n_sigma.empty()) throw InputError("--n-sigma list is empty");
        for (std::size_t i = 0; i < o.n_sigma.size(); ++i) {
            validate(SelectiveConfig{o.n_sigma[i], !o.signed_edges});
            if (i && !(o.n_sigma[i] > o.n_sigma[i - 1])) {
                throw InputError("--n-sigma list must be strictly increasing");
            }
        }
    });
    const LoadedRelevance src = stage("read", [&] { return load_relevance(o.relevance); });
    const std::string source_sha = stage("read", [&] { return sha256_file(o.relevance); });
    const Volume3 edge = stage("select", [&] { return temporal_edge_map(src.relevance); });
    const Target t = target_for(o);

    ReportTable table{"selective sweep: " + src.relevance.method,
                      {"n_sigma", "threshold", "mask_voxels", "selected_mass", "nested_in_previous"},
                      {},
                      {"edge_mode=" + std::string(o.signed_edges ? "signed" : "magnitude"),
                       "nested_in_previous: mask is a subset of the mask for the previous n_sigma"}};
    std::vector<std::filesystem::path> written;
    Volume3 previous;
    bool all_nested = true;
    for (double n : o.n_sigma) {
        const SelectiveConfig cfg{n, !o.signed_edges};
        const MaskResult mask = stage("select", [&] { return selective_mask(edge, cfg); });
        const RelevanceVolume sel = stage("select", [&] { return apply_selective(src.relevance, mask.mask); });
        const Triple paths = write_triple(t, t.stem + "_n" + format_param(n), src, source_sha, cfg, edge, mask, sel);
        written.insert(written.end(), {paths.edge, paths.mask, paths.selected});

        std::string nested = "-";
        if (!previous.empty()) {
            bool ok = true;
            for (std::size_t i = 0; i < mask.mask.size(); ++i) ok = ok && !(mask.mask[i] != 0.0f && previous[i] == 0.0f);
            nested = ok ? "yes" : "NO";
            all_nested = all_nested && ok;
        }
        double mass = 0.0;
        for (float v : sel.volume.data()) mass += v > 0.0f ? v : 0.0f;
        table.rows.push_back({format_param(n), format_number(mask.threshold, 6), std::to_string(count_set(mask.mask)),
                              format_number(mass, 6), nested});
        previous = mask.mask;
    }
    const auto csv = t.dir / (t.stem + "_sweep.csv");
    Metadata cm = derived_meta(src, source_sha, "sweep_report");
    std::string list;
    for (double n : o.n_sigma) list += (list.empty() ? "" : ",") + format_param(n);
    cm.set("n_sigma", list);
    cm.set("nested", all_nested ? "yes" : "no");
    stage("write", [&] {
        write_file_bytes(csv, to_csv(table));
        write_sidecar(csv, cm);
    });

    out << to_text(table);
    for (const auto& p : written) out << "wrote " << p.string() << "\n";
    out << "wrote " << csv.string() << "\n";
    if (!all_nested) throw StageError("nesting-check", "masks are not nested across the n_sigma list");
    return 0;
}

}  // namespace selrel::cli
