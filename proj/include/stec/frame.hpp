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
#include <string>
#include <utility>
#include <vector>

#include "stec/errors.hpp"
#include "stec/plane.hpp"

namespace stec {

using Sample = std::uint8_t;

/// One luma plane of a video picture. Immutable by convention once a frame
/// has been handed to a consumer; concurrent readers are safe.
struct Frame {
  Frame() = default;
  Frame(int width, int height, int index, Sample fill = 0)
      : luma(width, height, fill), index(index) {}

  Plane<Sample> luma;
  int index = 0;  // 0-based position in the sequence

  int width() const { return luma.width(); }
  int height() const { return luma.height(); }
  Sample at(int x, int y) const { return luma.at(x, y); }
  Sample& at(int x, int y) { return luma.at(x, y); }
  bool contains(int x, int y) const { return luma.contains(x, y); }
};

/// An ordered list of equally sized frames with consecutive indices from 0.
struct Sequence {
  std::vector<Frame> frames;

  int width() const { return frames.empty() ? 0 : frames.front().width(); }
  int height() const { return frames.empty() ? 0 : frames.front().height(); }
  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }

  Frame& operator[](std::size_t i) { return frames[i]; }
  const Frame& operator[](std::size_t i) const { return frames[i]; }
};

/// Checks the dimension/index invariants; throws ArgumentError on violation.
inline void validate_sequence(const Sequence& seq) {
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const Frame& f = seq.frames[i];
    if (f.width() != seq.width() || f.height() != seq.height()) {
      throw ArgumentError("sequence frames must share identical dimensions");
    }
    if (f.index != static_cast<int>(i)) {
      throw ArgumentError("sequence frame indices must be consecutive from 0");
    }
  }
}

/// Copies the size×size block with top-left corner (x0, y0) out of a frame.
inline Plane<Sample> copy_block(const Frame& frame, int x0, int y0, int size) {
  if (size <= 0 || !frame.contains(x0, y0) || !frame.contains(x0 + size - 1, y0 + size - 1)) {
    throw ArgumentError("block does not lie inside the frame");
  }
  Plane<Sample> block(size, size);
  for (int y = 0; y < size; ++y) {
    const Sample* src = frame.luma.row(y0 + y) + x0;
    Sample* dst = block.row(y);
    for (int x = 0; x < size; ++x) dst[x] = src[x];
  }
  return block;
}

}  // namespace stec
