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

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "stec/errors.hpp"
#include "stec/frame.hpp"

namespace stec {

/// Reads a raw planar YUV 4:2:0 file (8 bits/sample, Y then U then V per
/// frame). Only the luma plane is kept; the chroma planes are skipped.
/// The file size must be a whole multiple of width*height*3/2 bytes.
inline Sequence read_yuv420(const std::string& path, int width, int height) {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
    throw ArgumentError("yuv420 dimensions must be positive and even");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  in.seekg(0, std::ios::end);
  const std::int64_t file_size = in.tellg();
  in.seekg(0, std::ios::beg);

  const std::int64_t luma_bytes = static_cast<std::int64_t>(width) * height;
  const std::int64_t chroma_bytes = luma_bytes / 2;
  const std::int64_t frame_bytes = luma_bytes + chroma_bytes;
  if (file_size % frame_bytes != 0) {
    throw FormatError(path + ": size " + std::to_string(file_size) +
                      " is not a multiple of the " + std::to_string(frame_bytes) +
                      "-byte frame size for " + std::to_string(width) + "x" +
                      std::to_string(height));
  }

  Sequence seq;
  const std::int64_t frame_count = file_size / frame_bytes;
  seq.frames.reserve(static_cast<std::size_t>(frame_count));
  for (std::int64_t t = 0; t < frame_count; ++t) {
    Frame frame(width, height, static_cast<int>(t));
    in.read(reinterpret_cast<char*>(frame.luma.data()), luma_bytes);
    in.seekg(chroma_bytes, std::ios::cur);
    if (!in) {
      throw IoError("read failed: " + path);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

/// Writes a sequence as raw planar YUV 4:2:0. The chroma planes are filled
/// with a constant 128, so reading the file back reproduces the luma exactly.
inline void write_yuv420(const Sequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  if (seq.empty()) {
    return;
  }
  const std::size_t chroma_bytes = seq.frames.front().luma.size() / 2;
  const std::vector<char> chroma(chroma_bytes, static_cast<char>(128));
  for (const Frame& frame : seq.frames) {
    out.write(reinterpret_cast<const char*>(frame.luma.data()),
              static_cast<std::streamsize>(frame.luma.size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

/// Dumps one frame as a binary 8-bit grayscale PGM (P5) image.
inline void write_frame_image(const Frame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << "P5\n" << frame.width() << " " << frame.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.luma.data()),
            static_cast<std::streamsize>(frame.luma.size()));
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace stec
