// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <CLI11.hpp>

#include <random>

#include "commands.hpp"
#include "selrel/cli.hpp"
#include "selrel/fixture.hpp"
#include "selrel/hash.hpp"
#include "selrel/image.hpp"
#include "selrel/model.hpp"
#include "selrel/weights.hpp"

namespace selrel {

int run_fixture_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Seeded fixtures for selrel: weight bundles, frame sequences, volumes.", "selrel-fixture"};
    app.require_subcommand(1);

    std::string w_model = "c3d-101", w_out;
    unsigned w_seed = 1;
    bool w_zero_bias = false;
    auto* w_cmd = app.add_subcommand("weights", "Random SRWB bundle for an architecture");
    w_cmd->add_option("--model", w_model, "Preset name or architecture file");
    w_cmd->add_option("--seed", w_seed, "RNG seed");
    w_cmd->add_flag("--zero-bias", w_zero_bias, "All biases zero");
    w_cmd->add_option("--out", w_out, "Output .srwb path")->required();

    MovingSquare sq;
    std::string f_out;
    auto* f_cmd = app.add_subcommand("frames", "Moving-square PNG sequence frame_NNNN.png");
    f_cmd->add_option("--frames", sq.frames, "Frame count")->check(CLI::PositiveNumber);
    f_cmd->add_option("--height", sq.height, "Frame height")->check(CLI::PositiveNumber);
    f_cmd->add_option("--width", sq.width, "Frame width")->check(CLI::PositiveNumber);
    f_cmd->add_option("--side", sq.side, "Square side")->check(CLI::PositiveNumber);
    f_cmd->add_option("--start-y", sq.start_y, "Top edge at frame 0");
    f_cmd->add_option("--start-x", sq.start_x, "Left edge at frame 0");
    f_cmd->add_option("--vy", sq.vy, "Vertical speed, px/frame");
    f_cmd->add_option("--vx", sq.vx, "Horizontal speed, px/frame");
    f_cmd->add_option("--out", f_out, "Output directory")->required();

    std::string v_dims = "16x112x112", v_out, v_method = "random";
    unsigned v_seed = 1;
    auto* v_cmd = app.add_subcommand("volume", "Uniform [0, 1) random SRVL");
    v_cmd->add_option("--dims", v_dims, "TxHxW");
    v_cmd->add_option("--seed", v_seed, "RNG seed");
    v_cmd->add_option("--method", v_method, "Method name recorded in the sidecar");
    v_cmd->add_option("--out", v_out, "Output .srvl path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    std::string name;
    try {
        if (*w_cmd) {
            name = "weights";
            const Architecture arch = cli::stage("load-model", [&] { return resolve_architecture(w_model); });
            const WeightBundle b = random_weight_bundle(arch, w_seed, w_zero_bias);
            const Model m = cli::stage("load-model", [&] { return load_model(arch, b); });
            Metadata meta;
            meta.set("kind", "weights");
            meta.set("model", cli::model_label(w_model));
            meta.set("model_hash", m.hash());
            meta.set("seed", std::to_string(w_seed));
            meta.set("zero_bias", w_zero_bias ? "true" : "false");
            cli::stage("write", [&] {
                cli::ensure_dir(std::filesystem::path(w_out).parent_path());
                write_bundle(w_out, b);
                write_sidecar(w_out, meta);
            });
            out << "wrote " << w_out << " (" << b.entries.size() << " arrays)\n";
        } else if (*f_cmd) {
            name = "frames";
            const auto frames = cli::stage("render", [&] { return sq.render(); });
            const auto paths = cli::stage("write", [&] { return write_png_sequence(f_out, "frame", frames); });
            out << "wrote " << paths.size() << " frames to " << f_out << "\n";
        } else if (*v_cmd) {
            name = "volume";
            const Dims3 d = cli::stage("config", [&] { return cli::parse_dims(v_dims); });
            std::mt19937 rng(v_seed);
            std::uniform_real_distribution<float> u(0.0f, 1.0f);
            std::vector<float> data(d.count());
            for (auto& x : data) x = u(rng);
            Metadata meta;
            meta.set("kind", "relevance");
            meta.set("method", v_method);
            meta.set("seed", std::to_string(v_seed));
            meta.set("dims", to_string(d));
            cli::stage("write", [&] {
                cli::ensure_dir(std::filesystem::path(v_out).parent_path());
                write_volume(v_out, Volume3(d, std::move(data)));
                write_sidecar(v_out, meta);
            });
            out << "wrote " << v_out << "\n";
        }
    } catch (const cli::StageError& e) {
        err << "selrel-fixture " << name << ": " << e.what() << "\n";
        return kExitStage;
    } catch (const std::exception& e) {
        err << "selrel-fixture " << name << ": unexpected: " << e.what() << "\n";
        return kExitStage;
    }
    return 0;
}

}  // namespace selrel
