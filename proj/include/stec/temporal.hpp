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

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stec/errors.hpp"
#include "stec/frame.hpp"
#include "stec/loss.hpp"

namespace stec {

/// Integer displacement into the previous frame: the sample that replaces
/// cur(x, y) is prev(x + dx, y + dy).
struct Displacement {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Width in samples of the received ring around a lost block that a matcher
/// or error estimate works on.
struct BorderGeometry {
  int width = 1;
};

/// Result of one temporal estimation: the displaced block copied out of the
/// previous frame plus the displacement and its measured border error.
struct TemporalEstimate {
  std::string method;             // "tr", "ebma" or "dmve"
  Displacement displacement;
  double error_estimate = 0.0;    // RMS border mismatch, +inf if unmeasurable
  Plane<Sample> block;
};

namespace detail {

/// Border ring positions around `loss`, clipped to the frame and restricted
/// to received samples when `valid` is given.
inline std::vector<std::pair<int, int>> border_ring(int width, int height, const BlockLoss& loss,
                                                    const BorderGeometry& border,
                                                    const Plane<std::uint8_t>* valid) {
  std::vector<std::pair<int, int>> ring;
  const int w = border.width;
  ring.reserve(static_cast<std::size_t>(4 * w * (loss.size + w)));
  for (int y = loss.y0 - w; y < loss.y0 + loss.size + w; ++y) {
    for (int x = loss.x0 - w; x < loss.x0 + loss.size + w; ++x) {
      if (loss.covers(x, y)) continue;
      if (x < 0 || x >= width || y < 0 || y >= height) continue;
      if (valid && !valid->at(x, y)) continue;
      ring.emplace_back(x, y);
    }
  }
  return ring;
}

/// Sum of squared differences between the current frame's ring and the ring
/// displaced by (dx, dy) in the previous frame. Returns false when any
/// displaced position leaves the previous frame.
inline bool ring_ssd(const Frame& cur, const Frame& prev,
                     const std::vector<std::pair<int, int>>& ring, int dx, int dy,
                     std::int64_t& ssd) {
  ssd = 0;
  for (const auto& [x, y] : ring) {
    const int px = x + dx;
    const int py = y + dy;
    if (!prev.contains(px, py)) return false;
    const std::int64_t diff =
        static_cast<std::int64_t>(cur.at(x, y)) - static_cast<std::int64_t>(prev.at(px, py));
    ssd += diff * diff;
  }
  return true;
}

/// Full search over [-range, range]^2 for the displacement minimizing the
/// ring SSD. Candidates whose displaced block or ring leave the previous
/// frame are skipped. Ties resolve to the smaller |dx|+|dy|, then to raster
/// order (dy-major, then dx), so results are platform independent.
inline Displacement match_ring(const Frame& cur, const Frame& prev, const BlockLoss& loss,
                               const std::vector<std::pair<int, int>>& ring, int range,
                               const char* who) {
  if (ring.empty()) {
    throw EstimatorError(std::string(who) + ": no received border samples to match");
  }
  bool found = false;
  Displacement best;
  std::int64_t best_ssd = std::numeric_limits<std::int64_t>::max();
  int best_l1 = 0;
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      if (!prev.contains(loss.x0 + dx, loss.y0 + dy) ||
          !prev.contains(loss.x0 + loss.size - 1 + dx, loss.y0 + loss.size - 1 + dy)) {
        continue;
      }
      std::int64_t ssd;
      if (!ring_ssd(cur, prev, ring, dx, dy, ssd)) continue;
      const int l1 = std::abs(dx) + std::abs(dy);
      if (!found || ssd < best_ssd || (ssd == best_ssd && l1 < best_l1)) {
        found = true;
        best = {dx, dy};
        best_ssd = ssd;
        best_l1 = l1;
      }
    }
  }
  if (!found) {
    throw EstimatorError(std::string(who) + ": no displacement keeps the block and its border inside the previous frame");
  }
  return best;
}

inline Plane<Sample> displaced_block(const Frame& prev, const BlockLoss& loss, Displacement d) {
  return copy_block(prev, loss.x0 + d.dx, loss.y0 + d.dy, loss.size);
}

}  // namespace detail

/// Root-mean-square mismatch between the received ring around `loss` in the
/// current frame and the same ring displaced by `d` in the previous frame.
/// Ring positions whose displaced partner leaves the previous frame are
/// skipped; with nothing left to evaluate this is an estimator error.
inline double estimate_temporal_error(const Frame& cur, const Frame& prev, const BlockLoss& loss,
                                      Displacement d, const BorderGeometry& border,
                                      const Plane<std::uint8_t>* valid = nullptr) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& [x, y] :
       detail::border_ring(cur.width(), cur.height(), loss, border, valid)) {
    const int px = x + d.dx;
    const int py = y + d.dy;
    if (!prev.contains(px, py)) continue;
    const double diff = static_cast<double>(cur.at(x, y)) - static_cast<double>(prev.at(px, py));
    sum += diff * diff;
    ++count;
  }
  if (count == 0) {
    throw EstimatorError("no border samples to evaluate the displacement on");
  }
  return std::sqrt(sum / static_cast<double>(count));
}

/// Temporal replacement: copy the co-located block from the previous frame.
/// The error estimate is measured on the `eval_border`-wide received ring.
inline TemporalEstimate temporal_replacement(const Frame& cur, const Frame& prev,
                                             const BlockLoss& loss,
                                             const BorderGeometry& eval_border = {8},
                                             const Plane<std::uint8_t>* valid = nullptr) {
  if (!prev.contains(loss.x0, loss.y0) ||
      !prev.contains(loss.x0 + loss.size - 1, loss.y0 + loss.size - 1)) {
    throw EstimatorError("tr: block does not lie inside the previous frame");
  }
  const Displacement d{0, 0};
  return {"tr", d, estimate_temporal_error(cur, prev, loss, d, eval_border, valid),
          detail::displaced_block(prev, loss, d)};
}

/// Boundary-matching motion search: minimizes the SSD over the one-sample
/// ring of received neighbors around the lost block. The error estimate of
/// the winning displacement is measured on the `eval_border`-wide ring.
inline TemporalEstimate ebma(const Frame& cur, const Frame& prev, const BlockLoss& loss,
                             int search_range, const BorderGeometry& eval_border = {8},
                             const Plane<std::uint8_t>* valid = nullptr) {
  const auto ring = detail::border_ring(cur.width(), cur.height(), loss, BorderGeometry{1}, valid);
  const Displacement d = detail::match_ring(cur, prev, loss, ring, search_range, "ebma");
  return {"ebma", d, estimate_temporal_error(cur, prev, loss, d, eval_border, valid),
          detail::displaced_block(prev, loss, d)};
}

/// Decoder motion-vector estimation: the same full search as ebma but
/// matching a wide ring of received samples, which makes the estimate far
/// more robust to noise on the immediate boundary. With `match_border` equal
/// to `eval_border` (both default to 8) the reported error estimate is
/// exactly the minimum the search found.
inline TemporalEstimate dmve(const Frame& cur, const Frame& prev, const BlockLoss& loss,
                             int search_range, const BorderGeometry& match_border = {8},
                             const BorderGeometry& eval_border = {8},
                             const Plane<std::uint8_t>* valid = nullptr) {
  const auto ring = detail::border_ring(cur.width(), cur.height(), loss, match_border, valid);
  const Displacement d = detail::match_ring(cur, prev, loss, ring, search_range, "dmve");
  return {"dmve", d, estimate_temporal_error(cur, prev, loss, d, eval_border, valid),
          detail::displaced_block(prev, loss, d)};
}

}  // namespace stec
