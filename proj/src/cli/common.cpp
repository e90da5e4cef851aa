// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <thread>

#include "commands.hpp"
#include "selrel/errors.hpp"
#include "selrel/hash.hpp"
#include "selrel/model.hpp"
#include "selrel/volume.hpp"

namespace selrel::cli {

Dims3 parse_dims(std::string_view text) {
    std::array<std::size_t, 3> d{};
    std::size_t part = 0;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    while (part < 3) {
        auto [next, ec] = std::from_chars(p, end, d[part]);
        if (ec != std::errc() || d[part] == 0) break;
        p = next;
        ++part;
        if (part < 3) {
            if (p == end || (*p != 'x' && *p != 'X')) break;
            ++p;
        }
    }
    if (part != 3 || p != end) throw InputError("dims must look like TxHxW with positive sizes, got '" + std::string(text) + "'");
    return Dims3{d[0], d[1], d[2]};
}

std::string frames_digest(const std::vector<std::filesystem::path>& files) {
    Sha256 h;
    for (const auto& f : files) h.update(sha256_file(f));
    return h.hex();
}

std::string model_label(std::string_view source) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), source) != names.end()) return std::string(source);
    return std::filesystem::path(std::string(source)).filename().string();
}

std::string format_real(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::string format_param(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
}

LoadedRelevance load_relevance(const std::filesystem::path& path) {
    LoadedRelevance l;
    l.path = path;
    l.relevance.volume = read_volume(path);
    l.meta = read_sidecar(path);
    l.relevance.method = l.meta.get_or("method", path.stem().string());
    if (auto c = l.meta.get("class")) {
        int v = 0;
        auto [p, ec] = std::from_chars(c->data(), c->data() + c->size(), v);
        if (ec != std::errc() || p != c->data() + c->size()) {
            throw InputError(sidecar_path(path).string() + ": bad class '" + *c + "'");
        }
        l.relevance.class_index = v;
    }
    l.relevance.nonpositive_seed = l.meta.get_or("flag", "") == "nonpositive-seed";
    l.clip = l.meta.get_or("clip", "0");
    l.model_hash = l.meta.get_or("model_hash", "");
    return l;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                        std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace selrel::cli
