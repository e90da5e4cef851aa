// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "selrel/byte_io.hpp"
#include "selrel/errors.hpp"
#include "selrel/model.hpp"

namespace selrel {

namespace {

// C3D: eight 3x3x3 convolutions, five pools, three dense layers. pool5 pads
// h and w by one so the flattened feature is 512x1x4x4 = 8192 wide.
constexpr std::string_view kC3d101 = R"(# C3D, 101 classes
input channels=3 t=16 h=112 w=112 means=90,98,102
conv3d name=conv1a out=64 kernel=3 stride=1 pad=1
relu name=relu1a
maxpool3d name=pool1 window=1,2,2 stride=1,2,2
conv3d name=conv2a out=128 kernel=3 stride=1 pad=1
relu name=relu2a
maxpool3d name=pool2 window=2 stride=2
conv3d name=conv3a out=256 kernel=3 stride=1 pad=1
relu name=relu3a
conv3d name=conv3b out=256 kernel=3 stride=1 pad=1
relu name=relu3b
maxpool3d name=pool3 window=2 stride=2
conv3d name=conv4a out=512 kernel=3 stride=1 pad=1
relu name=relu4a
conv3d name=conv4b out=512 kernel=3 stride=1 pad=1
relu name=relu4b
maxpool3d name=pool4 window=2 stride=2
conv3d name=conv5a out=512 kernel=3 stride=1 pad=1
relu name=relu5a
conv3d name=conv5b out=512 kernel=3 stride=1 pad=1
relu name=relu5b
maxpool3d name=pool5 window=2 stride=2 pad=0,1,1
flatten name=flatten
dense name=fc6 out=4096
relu name=relu6
dense name=fc7 out=4096
relu name=relu7
dense name=fc8 out=101
)";

// Same input geometry as C3D with a handful of channels; for pipelines and tests.
constexpr std::string_view kMiniC3d = R"(# reduced C3D-shaped network
input channels=3 t=16 h=112 w=112 means=90,98,102
conv3d name=conv1 out=4 kernel=3 stride=1 pad=1
relu name=relu1
maxpool3d name=pool1 window=1,2,2 stride=1,2,2
conv3d name=conv2 out=8 kernel=3 stride=1 pad=1
relu name=relu2
maxpool3d name=pool2 window=2 stride=2
conv3d name=conv3 out=8 kernel=3 stride=1 pad=1
relu name=relu3
maxpool3d name=pool3 window=2,4,4 stride=2,4,4
conv3d name=conv4 out=8 kernel=3 stride=1 pad=1
relu name=relu4
maxpool3d name=pool4 window=2,7,7 stride=2,7,7
flatten name=flatten
dense name=fc out=10
)";

constexpr std::string_view kTinyConv = R"(# two convolutions, pool, dense head
input channels=3 t=4 h=6 w=6 means=127.5,127.5,127.5
conv3d name=conv1 out=3 kernel=3 stride=1 pad=1
relu name=relu1
maxpool3d name=pool1 window=1,2,2 stride=1,2,2
conv3d name=conv2 out=4 kernel=3 stride=1 pad=1
relu name=relu2
flatten name=flatten
dense name=fc out=5
)";

constexpr std::string_view kTinyGap = R"(# global-average-pooling head
input channels=3 t=4 h=6 w=6 means=127.5,127.5,127.5
conv3d name=conv1 out=4 kernel=3 stride=1 pad=1
relu name=relu1
conv3d name=conv2 out=3 kernel=3 stride=1 pad=1
gap3d name=gap
dense name=fc out=5
)";

constexpr std::string_view kTinyDense = R"(# multilayer perceptron on a 3x1x2x2 clip
input channels=3 t=1 h=2 w=2 means=127.5,127.5,127.5
dense name=fc1 out=6
relu name=relu1
dense name=fc2 out=4
)";

const std::map<std::string_view, std::string_view>& presets() {
    static const std::map<std::string_view, std::string_view> table = {
        {"c3d-101", kC3d101}, {"mini-c3d", kMiniC3d}, {"tiny-conv", kTinyConv},
        {"tiny-gap", kTinyGap}, {"tiny-dense", kTinyDense},
    };
    return table;
}

const std::map<std::string_view, LayerKind>& kinds() {
    static const std::map<std::string_view, LayerKind> table = {
        {"conv3d", LayerKind::conv3d}, {"relu", LayerKind::relu},   {"maxpool3d", LayerKind::maxpool3d},
        {"flatten", LayerKind::flatten}, {"dense", LayerKind::dense}, {"gap3d", LayerKind::gap3d},
    };
    return table;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

class LineParser {
public:
    LineParser(std::string where, std::map<std::string, std::string> kv) : where_(std::move(where)), kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    int integer(const std::string& key, int min_value) {
        const auto& s = require(key);
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail(key + " must be an integer, got '" + s + "'");
        if (v < min_value) fail(key + " must be >= " + std::to_string(min_value));
        return v;
    }

    Triple triple(const std::string& key, int min_value, Triple fallback) {
        if (!has(key)) return fallback;
        const auto parts = split(require(key), ',');
        if (parts.size() != 1 && parts.size() != 3) fail(key + " takes one value or t,h,w");
        int v[3];
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& s = parts[parts.size() == 1 ? 0 : i];
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v[i]);
            if (ec != std::errc() || p != s.data() + s.size()) fail(key + " has a non-integer component '" + s + "'");
            if (v[i] < min_value) fail(key + " components must be >= " + std::to_string(min_value));
        }
        return Triple{v[0], v[1], v[2]};
    }

    std::array<float, 3> means(const std::string& key) {
        if (!has(key)) return {0.0f, 0.0f, 0.0f};
        const auto parts = split(require(key), ',');
        if (parts.size() != 3) fail(key + " needs three comma-separated values");
        std::array<float, 3> m{};
        for (std::size_t i = 0; i < 3; ++i) {
            try {
                std::size_t used = 0;
                m[i] = std::stof(parts[i], &used);
                if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
            } catch (const std::exception&) {
                fail(key + " has a non-numeric component '" + parts[i] + "'");
            }
        }
        return m;
    }

    void reject_unused(const std::set<std::string>& allowed) const {
        for (const auto& [k, v] : kv_) {
            if (!allowed.count(k)) fail("unknown key '" + k + "'");
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw LoadError(where_, msg); }

private:
    const std::string& require(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) fail("missing key '" + key + "'");
        return it->second;
    }

    std::string where_;
    std::map<std::string, std::string> kv_;
};

std::string format_triple(const Triple& t) {
    if (t.t == t.h && t.h == t.w) return std::to_string(t.t);
    return std::to_string(t.t) + "," + std::to_string(t.h) + "," + std::to_string(t.w);
}

std::string format_float(float v) {
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

}  // namespace

std::string_view to_string(LayerKind kind) {
    switch (kind) {
    case LayerKind::conv3d: return "conv3d";
    case LayerKind::relu: return "relu";
    case LayerKind::maxpool3d: return "maxpool3d";
    case LayerKind::flatten: return "flatten";
    case LayerKind::dense: return "dense";
    case LayerKind::gap3d: return "gap3d";
    }
    return "?";
}

Architecture parse_architecture(std::string_view text) {
    Architecture arch;
    bool have_input = false;
    std::set<std::string> names;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string kind_word;
        if (!(words >> kind_word)) continue;

        std::map<std::string, std::string> kv;
        std::string tok;
        const std::string where = "line " + std::to_string(lineno);
        while (words >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0) throw LoadError(where, "expected key=value, got '" + tok + "'");
            if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
                throw LoadError(where, "duplicate key '" + tok.substr(0, eq) + "'");
            }
        }

        if (kind_word == "input") {
            LineParser p(where, kv);
            p.reject_unused({"channels", "t", "h", "w", "means"});
            if (have_input) p.fail("duplicate input line");
            arch.input = Shape4{p.integer("channels", 1), p.integer("t", 1), p.integer("h", 1), p.integer("w", 1)};
            if (arch.input.c != 3) p.fail("input channels must be 3 (RGB)");
            arch.channel_means = p.means("means");
            have_input = true;
            continue;
        }

        auto kit = kinds().find(kind_word);
        if (kit == kinds().end()) throw LoadError(where, "unknown layer kind '" + kind_word + "'");
        if (!have_input) throw LoadError(where, "layers must follow the input line");

        LayerSpec spec;
        spec.kind = kit->second;
        spec.name = kv.count("name") ? kv.at("name") : kind_word + std::to_string(arch.layers.size());
        LineParser p(spec.name, kv);
        switch (spec.kind) {
        case LayerKind::conv3d:
            p.reject_unused({"name", "out", "kernel", "stride", "pad"});
            spec.out_channels = p.integer("out", 1);
            spec.kernel = p.triple("kernel", 1, Triple{});
            if (!p.has("kernel")) p.fail("missing key 'kernel'");
            spec.stride = p.triple("stride", 1, Triple{1, 1, 1});
            spec.padding = p.triple("pad", 0, Triple{0, 0, 0});
            break;
        case LayerKind::maxpool3d:
            p.reject_unused({"name", "window", "stride", "pad"});
            if (!p.has("window")) p.fail("missing key 'window'");
            spec.kernel = p.triple("window", 1, Triple{});
            spec.stride = p.triple("stride", 1, spec.kernel);
            spec.padding = p.triple("pad", 0, Triple{0, 0, 0});
            // Keeps every window overlapping the real input.
            if (spec.padding.t * 2 > spec.kernel.t || spec.padding.h * 2 > spec.kernel.h ||
                spec.padding.w * 2 > spec.kernel.w) {
                p.fail("pool padding must be <= window/2");
            }
            break;
        case LayerKind::dense:
            p.reject_unused({"name", "out"});
            spec.out_features = p.integer("out", 1);
            break;
        case LayerKind::relu:
        case LayerKind::flatten:
        case LayerKind::gap3d:
            p.reject_unused({"name"});
            break;
        }
        if (spec.name == "input" || spec.name.find_first_of(". ") != std::string::npos) {
            p.fail("reserved or malformed layer name");
        }
        if (!names.insert(spec.name).second) p.fail("duplicate layer name");
        arch.layers.push_back(std::move(spec));
    }
    if (!have_input) throw LoadError("input", "architecture has no input line");
    if (arch.layers.empty()) throw LoadError("input", "architecture has no layers");
    return arch;
}

std::string format_architecture(const Architecture& arch) {
    std::ostringstream os;
    os << "input channels=" << arch.input.c << " t=" << arch.input.t << " h=" << arch.input.h << " w=" << arch.input.w
       << " means=" << format_float(arch.channel_means[0]) << "," << format_float(arch.channel_means[1]) << ","
       << format_float(arch.channel_means[2]) << "\n";
    for (const auto& l : arch.layers) {
        os << to_string(l.kind) << " name=" << l.name;
        switch (l.kind) {
        case LayerKind::conv3d:
            os << " out=" << l.out_channels << " kernel=" << format_triple(l.kernel) << " stride=" << format_triple(l.stride)
               << " pad=" << format_triple(l.padding);
            break;
        case LayerKind::maxpool3d:
            os << " window=" << format_triple(l.kernel) << " stride=" << format_triple(l.stride)
               << " pad=" << format_triple(l.padding);
            break;
        case LayerKind::dense: os << " out=" << l.out_features; break;
        default: break;
        }
        os << "\n";
    }
    return os.str();
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : presets()) out.emplace_back(k);
    return out;
}

std::string preset_architecture_text(std::string_view name) {
    auto it = presets().find(name);
    return it == presets().end() ? std::string() : std::string(it->second);
}

Architecture resolve_architecture(std::string_view source) {
    if (auto text = preset_architecture_text(source); !text.empty()) return parse_architecture(text);
    const std::filesystem::path path{std::string(source)};
    if (!std::filesystem::exists(path)) {
        throw InputError("'" + std::string(source) + "' is neither a preset nor an architecture file");
    }
    return parse_architecture(read_file_bytes(path));
}

}  // namespace selrel
