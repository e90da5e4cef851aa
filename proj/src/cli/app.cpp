// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>

#include "commands.hpp"
#include "selrel/byte_io.hpp"
#include "selrel/cli.hpp"
#include "selrel/model.hpp"

namespace selrel {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Pulls `--config FILE` out of args and appends `--key=value` for every key
// the command line does not already set.
void merge_config(std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file argument");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (!path) return;
    const Metadata m = Metadata::parse(read_file_bytes(*path));
    for (const auto& [key, value] : m.entries()) {
        const std::string k = trim(key);
        if (k.empty() || k == "config") throw std::runtime_error(*path + ": invalid key '" + key + "'");
        if (!has_flag(args, "--" + k)) args.push_back("--" + k + "=" + trim(value));
    }
}

void require_file(const char* flag, const std::string& path) {
    if (!std::filesystem::exists(path)) throw cli::StageError("config", std::string(flag) + ": '" + path + "' does not exist");
}

void require_model(const std::string& source) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), source) == names.end()) require_file("--model", source);
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args = args_in;
    try {
        merge_config(args);
    } catch (const std::exception& e) {
        err << "selrel: config: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"Selective relevance for 3D-CNN video classifiers.", "selrel"};
    app.require_subcommand(1);
    cli::GlobalOptions g;
    std::string config_unused;
    app.add_option("--config", config_unused, "key=value file of flag defaults (command line wins)");
    app.add_option("--workers", g.workers, "Clip-level worker threads")->check(CLI::PositiveNumber);

    cli::ExplainOptions ex;
    auto* ex_cmd = app.add_subcommand("explain", "Relevance volumes for one or more clips");
    ex_cmd->add_option("--model", ex.model, "Preset name or architecture file")->required();
    ex_cmd->add_option("--weights", ex.weights, "SRWB weight bundle")->required();
    ex_cmd->add_option("--frames", ex.frames, "Directory of frames")->required();
    ex_cmd->add_option("--method", ex.methods, "dtd, gradcam, guided_bp, guided_gradcam (comma-separated)")->delimiter(',');
    ex_cmd->add_option("--class", ex.class_index, "Target class (default: predicted)")->check(CLI::NonNegativeNumber);
    ex_cmd->add_option("--start", ex.start, "First frame of the first clip");
    ex_cmd->add_option("--window-stride", ex.window_stride, "Frames between clip starts (0: single clip)");
    ex_cmd->add_option("--target-layer", ex.target_layer, "GradCAM conv layer (default: last conv)");
    ex_cmd->add_option("--out", ex.out_dir, "Output directory");

    cli::SelectOptions sel;
    double sel_sigma = 4.0;
    auto* sel_cmd = app.add_subcommand("select", "Edge map, mask and selective relevance for one volume");
    sel_cmd->add_option("--relevance", sel.relevance, "Relevance SRVL")->required();
    sel_cmd->add_option("--n-sigma", sel_sigma, "Threshold in standard deviations of the edge map");
    sel_cmd->add_flag("--signed", sel.signed_edges, "Threshold the signed edge map instead of its magnitude");
    sel_cmd->add_option("--out", sel.out_dir, "Output directory (default: next to the input)");
    sel_cmd->add_option("--stem", sel.stem, "Output name stem (default: input stem)");

    cli::SelectOptions sw;
    sw.n_sigma = {1.0, 2.0, 3.0, 4.0};
    auto* sw_cmd = app.add_subcommand("sweep", "select over a strictly increasing n_sigma list");
    sw_cmd->add_option("--relevance", sw.relevance, "Relevance SRVL")->required();
    sw_cmd->add_option("--n-sigma", sw.n_sigma, "Comma-separated thresholds")->delimiter(',');
    sw_cmd->add_flag("--signed", sw.signed_edges, "Threshold the signed edge map instead of its magnitude");
    sw_cmd->add_option("--out", sw.out_dir, "Output directory (default: next to the input)");
    sw_cmd->add_option("--stem", sw.stem, "Output name stem (default: input stem)");

    cli::FlowOptions fl;
    auto* fl_cmd = app.add_subcommand("flow", "Horn-Schunck optical flow for one clip");
    fl_cmd->add_option("--frames", fl.frames, "Directory of frames")->required();
    fl_cmd->add_option("--start", fl.start, "First frame");
    fl_cmd->add_option("--alpha", fl.alpha, "Smoothness weight");
    fl_cmd->add_option("--iterations", fl.iterations, "Jacobi iterations");
    fl_cmd->add_option("--geometry", fl.geometry, "Clip geometry TxHxW the frames are prepared to");
    fl_cmd->add_flag("--raw", fl.raw, "Use frames at source size (no scale and crop)");
    fl_cmd->add_option("--clip", fl.clip, "Clip id recorded in the sidecar, matched by eval");
    fl_cmd->add_option("--stem", fl.stem, "Output name stem");
    fl_cmd->add_option("--out", fl.out_dir, "Output directory");

    cli::EvalOptions ev;
    double eps_r_abs = 0.0;
    auto* ev_cmd = app.add_subcommand("eval", "Precision, selectivity and agreement reports");
    ev_cmd->add_option("--relevance", ev.relevance, "Relevance volumes (sidecars give method and clip)")
        ->required()
        ->delimiter(',');
    ev_cmd->add_option("--flow", ev.flow, "Flow SRFL or flow-magnitude SRVL, one per clip")->delimiter(',');
    auto* eps_r_opt = ev_cmd->add_option("--eps-r", eps_r_abs, "Absolute relevance support threshold");
    ev_cmd->add_option("--eps-r-rel", ev.eps_r_rel, "Relevance support threshold relative to max|R|");
    ev_cmd->add_option("--eps-o", ev.eps_o, "Flow support threshold in px/frame");
    ev_cmd->add_option("--overlap", ev.overlap, "iou or directional");
    ev_cmd->add_flag("--force", ev.force, "Skip mismatched pairs instead of failing");
    ev_cmd->add_option("--out", ev.out_dir, "Write report and CSV tables here");

    cli::BenchOptions be;
    auto* be_cmd = app.add_subcommand("bench", "Single-worker timing of explanation and selective overhead");
    be_cmd->add_option("task", be.task, "selective-step, explain, combined or all");
    be_cmd->add_option("--reps", be.reps, "Timed repetitions");
    be_cmd->add_option("--warmup", be.warmup, "Untimed warmup runs");
    be_cmd->add_option("--n-sigma", be.n_sigma, "Selective threshold");
    be_cmd->add_option("--dims", be.dims, "Random volume dims TxHxW for selective-step");
    be_cmd->add_option("--seed", be.seed, "Seed for random volumes, clips and weights");
    be_cmd->add_option("--relevance", be.relevance, "Relevance SRVL for selective-step");
    be_cmd->add_option("--model", be.model, "Preset name or architecture file");
    be_cmd->add_option("--weights", be.weights, "SRWB bundle (default: seeded random weights)");
    be_cmd->add_option("--frames", be.frames, "Directory of frames (default: seeded random clip)");
    be_cmd->add_option("--method", be.method, "Explanation method");
    be_cmd->add_option("--class", be.class_index, "Target class (default: predicted)")->check(CLI::NonNegativeNumber);
    be_cmd->add_option("--csv", be.csv, "Also write the table as CSV");

    cli::RenderOptionsCli rd;
    auto* rd_cmd = app.add_subcommand("render", "Overlay relevance on frames as PNG sequences");
    rd_cmd->add_option("--relevance", rd.relevance, "Relevance volumes of equal dims")->required()->delimiter(',');
    rd_cmd->add_option("--frames", rd.frames, "Directory of frames")->required();
    rd_cmd->add_option("--start", rd.start, "First frame");
    rd_cmd->add_option("--colormap", rd.colormap, "diverging or grayscale");
    rd_cmd->add_option("--alpha", rd.alpha, "Overlay opacity in [0, 1]");
    rd_cmd->add_option("--mode", rd.mode, "heatmap or mask");
    rd_cmd->add_option("--eps-r-rel", rd.eps_r, "Negligible-relevance clamp relative to max|R|");
    rd_cmd->add_flag("--grid", rd.grid, "Also write side-by-side contact sheets");
    rd_cmd->add_option("--out", rd.out_dir, "Output directory");

    cli::LogitsOptions lg;
    auto* lg_cmd = app.add_subcommand("logits", "Logits for a raw RGB probe clip packed as SRVL (3*T, H, W)");
    lg_cmd->add_option("--model", lg.model, "Preset name or architecture file")->required();
    lg_cmd->add_option("--weights", lg.weights, "SRWB weight bundle")->required();
    lg_cmd->add_option("--clip", lg.clip, "Probe clip SRVL, values 0..255, channel-major R, G, B")->required();
    lg_cmd->add_flag("--layers", lg.layers, "Also print per-layer activation sum and L2 norm");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    std::string name;
    try {
        if (*ex_cmd) {
            name = "explain";
            require_model(ex.model);
            require_file("--weights", ex.weights);
            require_file("--frames", ex.frames);
            return cli::cmd_explain(ex, g, out);
        }
        if (*sel_cmd) {
            name = "select";
            require_file("--relevance", sel.relevance);
            sel.n_sigma = {sel_sigma};
            return cli::cmd_select(sel, out);
        }
        if (*sw_cmd) {
            name = "sweep";
            require_file("--relevance", sw.relevance);
            return cli::cmd_sweep(sw, out);
        }
        if (*fl_cmd) {
            name = "flow";
            require_file("--frames", fl.frames);
            return cli::cmd_flow(fl, g, out);
        }
        if (*ev_cmd) {
            name = "eval";
            for (const auto& p : ev.relevance) require_file("--relevance", p);
            for (const auto& p : ev.flow) require_file("--flow", p);
            if (eps_r_opt->count()) ev.eps_r = eps_r_abs;
            return cli::cmd_eval(ev, out, err);
        }
        if (*be_cmd) {
            name = "bench";
            require_model(be.model);
            for (const auto* p : {&be.weights, &be.frames, &be.relevance}) {
                if (!p->empty()) require_file("input", *p);
            }
            return cli::cmd_bench(be, g, out, err);
        }
        if (*rd_cmd) {
            name = "render";
            for (const auto& p : rd.relevance) require_file("--relevance", p);
            require_file("--frames", rd.frames);
            return cli::cmd_render(rd, out);
        }
        if (*lg_cmd) {
            name = "logits";
            require_model(lg.model);
            require_file("--weights", lg.weights);
            require_file("--clip", lg.clip);
            return cli::cmd_logits(lg, out);
        }
    } catch (const cli::StageError& e) {
        err << "selrel " << name << ": " << e.what() << "\n";
        return kExitStage;
    } catch (const std::exception& e) {
        err << "selrel " << name << ": unexpected: " << e.what() << "\n";
        return kExitStage;
    }
    return kExitUsage;
}

}  // namespace selrel
