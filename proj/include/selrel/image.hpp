// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace selrel {

/// Lossless raster images in `dir` (png, bmp, ppm, pgm, tif, tiff), sorted by
/// filename. Throws InputError if the directory is missing or has none.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

/// Loads every lossless raster image in `dir` (png, bmp, ppm, pgm, tif, tiff)
/// in lexicographic filename order as 8-bit BGR. Throws InputError if the
/// directory is missing, empty, or the frames differ in size.
std::vector<cv::Mat> load_frames(const std::filesystem::path& dir);

/// Writes `<dir>/<stem>_NNNN.png` for each image; returns the paths.
std::vector<std::filesystem::path> write_png_sequence(const std::filesystem::path& dir, const std::string& stem,
                                                      const std::vector<cv::Mat>& images);

}  // namespace selrel
