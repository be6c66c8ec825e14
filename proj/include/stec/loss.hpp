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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stec/errors.hpp"
#include "stec/frame.hpp"

namespace stec {

/// One lost square block. The margin/isolation constraints are owned by
/// LossMap; a bare BlockLoss only promises a positive size.
struct BlockLoss {
  int x0 = 0;    // top-left sample column
  int y0 = 0;    // top-left sample row
  int size = 0;  // side length in samples

  friend bool operator==(const BlockLoss&, const BlockLoss&) = default;

  bool covers(int x, int y) const {
    return x >= x0 && x < x0 + size && y >= y0 && y < y0 + size;
  }
};

/// Deterministic 64-bit generator (SplitMix64). State transition:
///   state += 0x9E3779B97F4A7C15
///   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
/// `next_below(n)` maps outputs to [0, n) without modulo bias: draws below
/// 2^64 mod n are rejected, then the draw is reduced modulo n. Any port that
/// follows these rules reproduces the same loss patterns bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) {
      throw ArgumentError("next_below requires n > 0");
    }
    const std::uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
    std::uint64_t draw = next();
    while (draw < reject_below) draw = next();
    return draw % n;
  }

 private:
  std::uint64_t state_;
};

/// Parameters a loss pattern was generated from; kept for serialization.
struct LossGenParams {
  std::uint64_t seed = 0;
  int first_frame = 0;  // 0-based inclusive
  int last_frame = -1;  // 0-based inclusive; empty range if < first
  int losses_per_frame = 0;
  int block_size = 0;
};

/// Per-frame sets of isolated block losses plus the derived validity masks.
/// Invariants: every block keeps a margin of at least its size to all frame
/// edges, and any two blocks within a frame are at least one block size apart
/// edge to edge, so the eight neighbor blocks of every loss are fully
/// received.
class LossMap {
 public:
  LossMap() = default;
  LossMap(int width, int height) : width_(width), height_(height) {}

  int width() const { return width_; }
  int height() const { return height_; }

  void add(int frame, const BlockLoss& loss) {
    if (frame < 0) {
      throw ArgumentError("frame index must be non-negative");
    }
    losses_[frame].push_back(loss);
  }

  /// Sorts every frame's losses by (y0, x0); serialization and concealment
  /// both use this canonical raster order.
  void sort() {
    for (auto& [frame, list] : losses_) {
      std::sort(list.begin(), list.end(), [](const BlockLoss& a, const BlockLoss& b) {
        return a.y0 != b.y0 ? a.y0 < b.y0 : a.x0 < b.x0;
      });
    }
  }

  const std::vector<BlockLoss>& losses(int frame) const {
    static const std::vector<BlockLoss> none;
    auto it = losses_.find(frame);
    return it == losses_.end() ? none : it->second;
  }

  const std::map<int, std::vector<BlockLoss>>& by_frame() const { return losses_; }

  std::size_t total_blocks() const {
    std::size_t n = 0;
    for (const auto& [frame, list] : losses_) n += list.size();
    return n;
  }

  /// Per-sample validity for one frame: 1 = received, 0 = lost.
  Plane<std::uint8_t> validity_mask(int frame) const {
    Plane<std::uint8_t> mask(width_, height_, 1);
    for (const BlockLoss& loss : losses(frame)) {
      for (int y = loss.y0; y < loss.y0 + loss.size; ++y) {
        std::uint8_t* row = mask.row(y);
        for (int x = loss.x0; x < loss.x0 + loss.size; ++x) row[x] = 0;
      }
    }
    return mask;
  }

  LossGenParams params;

  friend bool operator==(const LossMap& a, const LossMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.losses_ == b.losses_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::map<int, std::vector<BlockLoss>> losses_;
};

namespace detail {

// Two equally sized blocks leave each other's eight neighbor blocks intact
// exactly when their corners are at least two block sizes apart on one axis.
inline bool isolated_from(const BlockLoss& a, const BlockLoss& b) {
  const int need = 2 * std::max(a.size, b.size);
  return std::abs(a.x0 - b.x0) >= need || std::abs(a.y0 - b.y0) >= need;
}

}  // namespace detail

/// Draws `losses_per_frame` isolated block losses for every frame in
/// [first_frame, last_frame] (0-based, inclusive). Candidate corners lie on
/// the block-aligned grid with one block of margin to every frame edge:
///   x0 = (1 + i) * block_size, i drawn uniformly via SplitMix64(seed).
/// Cells are drawn by linear index (row-major, j * num_x + i) and rejected
/// while they violate isolation against blocks already placed in the frame;
/// after 1000 failed draws for one block the function gives up.
inline LossMap generate_losses(int width, int height, int first_frame, int last_frame,
                               int losses_per_frame, int block_size, std::uint64_t seed) {
  if (width <= 0 || height <= 0 || block_size <= 0) {
    throw ArgumentError("frame dimensions and block size must be positive");
  }
  if (losses_per_frame < 0) {
    throw ArgumentError("losses_per_frame must be non-negative");
  }
  if (first_frame < 0) {
    throw ArgumentError("first_frame must be non-negative");
  }

  LossMap map(width, height);
  map.params = {seed, first_frame, last_frame, losses_per_frame, block_size};
  if (losses_per_frame == 0 || last_frame < first_frame) {
    return map;
  }

  const int num_x = (width - 2 * block_size) / block_size;
  const int num_y = (height - 2 * block_size) / block_size;
  if (num_x <= 0 || num_y <= 0) {
    throw PlacementError("frame too small for one block with margin");
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(num_x) * num_y;

  SplitMix64 rng(seed);
  constexpr int kRetryBudget = 1000;
  for (int frame = first_frame; frame <= last_frame; ++frame) {
    std::vector<BlockLoss> placed;
    placed.reserve(losses_per_frame);
    for (int i = 0; i < losses_per_frame; ++i) {
      bool ok = false;
      for (int attempt = 0; attempt < kRetryBudget && !ok; ++attempt) {
        const std::uint64_t cell = rng.next_below(cells);
        const int col = static_cast<int>(cell % num_x);
        const int row = static_cast<int>(cell / num_x);
        const BlockLoss candidate{(col + 1) * block_size, (row + 1) * block_size, block_size};
        ok = std::all_of(placed.begin(), placed.end(), [&](const BlockLoss& other) {
          return detail::isolated_from(candidate, other);
        });
        if (ok) placed.push_back(candidate);
      }
      if (!ok) {
        throw PlacementError("cannot place " + std::to_string(losses_per_frame) +
                             " isolated blocks in frame " + std::to_string(frame));
      }
    }
    for (const BlockLoss& loss : placed) map.add(frame, loss);
  }
  map.sort();
  return map;
}

/// Returns a copy of `seq` with every lost sample set to `fill`. All other
/// samples are preserved bit-exactly.
inline Sequence apply_losses(const Sequence& seq, const LossMap& map, Sample fill) {
  if (!seq.empty() && (seq.width() != map.width() || seq.height() != map.height())) {
    throw ArgumentError("loss map dimensions do not match the sequence");
  }
  Sequence out = seq;
  for (const auto& [frame, list] : map.by_frame()) {
    if (frame >= static_cast<int>(out.size())) {
      throw ArgumentError("loss map refers to frame " + std::to_string(frame) +
                          " beyond the end of the sequence");
    }
    Frame& f = out.frames[frame];
    for (const BlockLoss& loss : list) {
      if (!f.contains(loss.x0, loss.y0) || !f.contains(loss.x0 + loss.size - 1, loss.y0 + loss.size - 1)) {
        throw ArgumentError("loss does not lie inside the frame");
      }
      for (int y = loss.y0; y < loss.y0 + loss.size; ++y) {
        Sample* row = f.luma.row(y);
        for (int x = loss.x0; x < loss.x0 + loss.size; ++x) row[x] = fill;
      }
    }
  }
  return out;
}

/// Text form: a `#` header with the generation parameters, then one line per
/// loss, `frame x0 y0 size`, sorted by (frame, y0, x0). Frame numbers in the
/// file are 1-based to match experiment configs; in-memory indices are
/// 0-based.
inline void save_loss_map(const LossMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  const LossGenParams& p = map.params;
  out << "# stec-lossmap width=" << map.width() << " height=" << map.height()
      << " block=" << p.block_size << " frames=" << p.first_frame + 1 << ":"
      << p.last_frame + 1 << " losses_per_frame=" << p.losses_per_frame
      << " seed=" << p.seed << "\n";
  for (const auto& [frame, list] : map.by_frame()) {
    for (const BlockLoss& loss : list) {
      out << frame + 1 << " " << loss.x0 << " " << loss.y0 << " " << loss.size << "\n";
    }
  }
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

inline LossMap load_loss_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  LossMap map;
  LossGenParams params;
  bool saw_header = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (saw_header) continue;  // later # lines are plain comments
      std::istringstream header(line.substr(1));
      std::string token;
      int width = 0, height = 0;
      while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
          if (key == "width") width = std::stoi(value);
          else if (key == "height") height = std::stoi(value);
          else if (key == "block") params.block_size = std::stoi(value);
          else if (key == "losses_per_frame") params.losses_per_frame = std::stoi(value);
          else if (key == "seed") params.seed = std::stoull(value);
          else if (key == "frames") {
            const auto colon = value.find(':');
            if (colon == std::string::npos) throw FormatError("missing :");
            params.first_frame = std::stoi(value.substr(0, colon)) - 1;
            params.last_frame = std::stoi(value.substr(colon + 1)) - 1;
          }
        } catch (const std::exception&) {
          throw FormatError(path + ":" + std::to_string(line_no) + ": bad header token " + token);
        }
      }
      if (width <= 0 || height <= 0) {
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": header must carry positive width= and height=");
      }
      map = LossMap(width, height);
      map.params = params;
      saw_header = true;
      continue;
    }
    if (!saw_header) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": losses before the `# stec-lossmap ...` header line");
    }
    std::istringstream fields(line);
    int frame, x0, y0, size;
    if (!(fields >> frame >> x0 >> y0 >> size)) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected `frame x0 y0 size`");
    }
    if (frame < 1) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": frame numbers are 1-based");
    }
    map.add(frame - 1, BlockLoss{x0, y0, size});
  }
  if (!saw_header) {
    throw FormatError(path + ": missing `# stec-lossmap ...` header line");
  }
  map.sort();
  return map;
}

}  // namespace stec
