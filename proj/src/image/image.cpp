// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "selrel/image.hpp"

#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cstdio>
#include <set>

#include "selrel/errors.hpp"

namespace selrel {

std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw InputError("frame directory '" + dir.string() + "' does not exist");
    static const std::set<std::string> exts = {".png", ".bmp", ".ppm", ".pgm", ".tif", ".tiff"};
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (exts.count(ext)) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no frames found in '" + dir.string() + "'");
    return files;
}

std::vector<cv::Mat> load_frames(const std::filesystem::path& dir) {
    const auto files = list_frame_files(dir);

    std::vector<cv::Mat> frames;
    frames.reserve(files.size());
    for (const auto& f : files) {
        cv::Mat img = cv::imread(f.string(), cv::IMREAD_COLOR);
        if (img.empty()) throw InputError("cannot decode frame '" + f.string() + "'");
        if (!frames.empty() && img.size() != frames.front().size()) {
            throw InputError("frame '" + f.string() + "' differs in size from the first frame");
        }
        frames.push_back(std::move(img));
    }
    return frames;
}

std::vector<std::filesystem::path> write_png_sequence(const std::filesystem::path& dir, const std::string& stem,
                                                      const std::vector<cv::Mat>& images) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> out;
    for (std::size_t i = 0; i < images.size(); ++i) {
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "_%04zu.png", i);
        const auto path = dir / (stem + suffix);
        if (!cv::imwrite(path.string(), images[i])) throw InputError("cannot write '" + path.string() + "'");
        out.push_back(path);
    }
    return out;
}

}  // namespace selrel
