/*
 * Copyright 2026 The stec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stec/frame.hpp"
#include "stec/loss.hpp"
#include "stec/plane.hpp"

namespace testutil {

/// Deterministic noise in [0, 255] from the project's own seeded generator.
inline stec::Plane<stec::Sample> noise_plane(int width, int height, std::uint64_t seed) {
  stec::SplitMix64 rng(seed);
  stec::Plane<stec::Sample> plane(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      plane.at(x, y) = static_cast<stec::Sample>(rng.next_below(256));
    }
  }
  return plane;
}

inline stec::Frame noise_frame(int width, int height, int index, std::uint64_t seed) {
  stec::Frame frame(width, height, index);
  frame.luma = noise_plane(width, height, seed);
  return frame;
}

inline stec::Frame constant_frame(int width, int height, int index, stec::Sample value) {
  return stec::Frame(width, height, index, value);
}

/// Frame cut out of a larger sample field at offset (x_off, y_off). Two crops
/// of one field are an exact integer translation of each other.
inline stec::Frame crop_frame(const stec::Plane<stec::Sample>& field, int x_off, int y_off,
                              int width, int height, int index) {
  stec::Frame frame(width, height, index);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      frame.luma.at(x, y) = field.at(x + x_off, y + y_off);
    }
  }
  return frame;
}

/// Unique writable directory, removed with everything in it on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0;; ++attempt) {
      path_ = base / ("stec_test_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter()++) + "_" + std::to_string(attempt));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline double max_abs_diff(const stec::Plane<double>& a, const stec::Plane<double>& b) {
  double worst = 0.0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      worst = std::max(worst, std::abs(a.at(x, y) - b.at(x, y)));
    }
  }
  return worst;
}

}  // namespace testutil
