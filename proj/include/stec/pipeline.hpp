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
#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "stec/errors.hpp"
#include "stec/frame.hpp"
#include "stec/fse.hpp"
#include "stec/loss.hpp"
#include "stec/temporal.hpp"

namespace stec {

enum class TemporalMethod { TR, EBMA, DMVE };
enum class ReferenceMode { ConcealedPrev, OriginalPrev };

inline std::string to_string(TemporalMethod method) {
  switch (method) {
    case TemporalMethod::TR: return "tr";
    case TemporalMethod::EBMA: return "ebma";
    case TemporalMethod::DMVE: return "dmve";
  }
  throw ArgumentError("unknown temporal method");
}

inline TemporalMethod parse_temporal_method(const std::string& name) {
  if (name == "tr") return TemporalMethod::TR;
  if (name == "ebma") return TemporalMethod::EBMA;
  if (name == "dmve") return TemporalMethod::DMVE;
  throw ArgumentError("unknown temporal method: " + name + " (expected tr, ebma or dmve)");
}

inline std::string to_string(ReferenceMode mode) {
  switch (mode) {
    case ReferenceMode::ConcealedPrev: return "concealed";
    case ReferenceMode::OriginalPrev: return "original";
  }
  throw ArgumentError("unknown reference mode");
}

inline ReferenceMode parse_reference_mode(const std::string& name) {
  if (name == "concealed") return ReferenceMode::ConcealedPrev;
  if (name == "original") return ReferenceMode::OriginalPrev;
  throw ArgumentError("unknown reference mode: " + name + " (expected concealed or original)");
}

/// Everything that shapes the concealment of one block.
struct ConcealmentConfig {
  TemporalMethod method = TemporalMethod::DMVE;
  bool refine = true;             // false: keep the raw temporal estimate
  int block_size = 16;            // side length of a lost block
  int border_width = 8;           // matched ring width of the wide-ring search
  int search_range = 16;          // displacement search radius
  double decay = 0.8;             // isotropic support falloff
  double compensation = 0.75;     // projection scale-down per iteration
  double max_temporal_error = 25.0;  // border error where trust reaches zero
  int iterations = 200;           // model generator steps
  ReferenceMode reference = ReferenceMode::ConcealedPrev;
};

/// The concealment of one block: the samples that replace the loss plus the
/// temporal estimate they started from.
struct ConcealedBlock {
  Plane<Sample> block;
  TemporalEstimate estimate;
};

namespace detail {

inline TemporalEstimate estimate_block(const Frame& cur, const Frame& prev, const BlockLoss& loss,
                                       const ConcealmentConfig& cfg,
                                       const Plane<std::uint8_t>* valid) {
  const BorderGeometry border{cfg.border_width};
  switch (cfg.method) {
    case TemporalMethod::TR:
      return temporal_replacement(cur, prev, loss, border, valid);
    case TemporalMethod::EBMA:
      try {
        return ebma(cur, prev, loss, cfg.search_range, border, valid);
      } catch (const EstimatorError&) {
        return temporal_replacement(cur, prev, loss, border, valid);
      }
    case TemporalMethod::DMVE:
      try {
        return dmve(cur, prev, loss, cfg.search_range, border, border, valid);
      } catch (const EstimatorError&) {
        return temporal_replacement(cur, prev, loss, border, valid);
      }
  }
  throw ArgumentError("unknown temporal method");
}

}  // namespace detail

/// Conceals one lost block of `cur` from `prev`. The temporal estimate fills
/// the block; when refinement is on, the block and the ring of current-frame
/// samples around it (one block size wide, clipped to the frame) feed the
/// sparse spectral model, with the block weighted by how well the estimate
/// matched the received border. A temporal error at or beyond
/// `max_temporal_error` zeroes that weight, turning the refinement into a
/// purely spatial extrapolation of the ring.
inline ConcealedBlock conceal_block(const Frame& cur, const Frame& prev, const BlockLoss& loss,
                                    const ConcealmentConfig& cfg,
                                    const Plane<std::uint8_t>* valid = nullptr) {
  if (loss.size != cfg.block_size) {
    throw ArgumentError("loss size does not match the configured block size");
  }
  TemporalEstimate estimate = detail::estimate_block(cur, prev, loss, cfg, valid);
  if (!cfg.refine) {
    return {estimate.block, std::move(estimate)};
  }

  // Support ring clipped to the frame; the block need not stay centered.
  const int margin = cfg.block_size;
  const int left = std::min(margin, loss.x0);
  const int top = std::min(margin, loss.y0);
  const int right = std::min(margin, cur.width() - (loss.x0 + loss.size));
  const int bottom = std::min(margin, cur.height() - (loss.y0 + loss.size));

  ProjectionArea area(top + loss.size + bottom, left + loss.size + right, top, left, loss.size);
  for (int m = 0; m < area.rows(); ++m) {
    for (int n = 0; n < area.cols(); ++n) {
      if (area.in_block(m, n)) {
        area.samples.at(n, m) = estimate.block.at(n - left, m - top);
      } else {
        area.samples.at(n, m) = cur.at(loss.x0 - left + n, loss.y0 - top + m);
      }
    }
  }

  const double block_weight = adaptive_block_weight(estimate.error_estimate,
                                                    cfg.max_temporal_error, cfg.decay,
                                                    cfg.block_size);
  const WeightFunction weights = build_weights(area, block_weight, cfg.decay);
  const ModelResult model = generate_model(area, weights, cfg.iterations, cfg.compensation);
  return {refine_block(area, model.model), std::move(estimate)};
}

/// A block the sequence pass could not conceal, with the reason.
struct BlockIssue {
  int frame = 0;  // 0-based
  int x0 = 0;
  int y0 = 0;
  std::string message;
};

struct ConcealmentResult {
  Sequence sequence;
  std::vector<BlockIssue> issues;
};

/// Conceals every loss in `corrupted`. Frames run oldest first so each frame
/// sees its predecessor fully concealed; by default the predecessor is the
/// concealed output (`reference = concealed`), or the matching frame of
/// `originals` when `reference = original` isolates a single frame's quality
/// from propagated errors. Blocks of one frame are independent thanks to the
/// isolation the loss generator guarantees, so `threads` of them run
/// concurrently. Blocks without a usable predecessor (the first frame) are
/// reported as issues and left untouched.
inline ConcealmentResult conceal_sequence(const Sequence& corrupted, const LossMap& map,
                                          const Sequence* originals, const ConcealmentConfig& cfg,
                                          int threads = 1) {
  validate_sequence(corrupted);
  if (threads < 1) {
    throw ArgumentError("thread count must be positive");
  }
  if (!corrupted.empty() &&
      (corrupted.width() != map.width() || corrupted.height() != map.height())) {
    throw ArgumentError("loss map dimensions do not match the sequence");
  }
  if (cfg.reference == ReferenceMode::OriginalPrev) {
    if (!originals) {
      throw ArgumentError("reference mode `original` needs the original sequence");
    }
    if (originals->size() != corrupted.size()) {
      throw ArgumentError("original and corrupted sequences differ in length");
    }
  }

  ConcealmentResult result;
  result.sequence = corrupted;
  Sequence& out = result.sequence;

  for (const auto& [frame, losses] : map.by_frame()) {
    if (losses.empty()) continue;
    if (frame >= static_cast<int>(out.size())) {
      throw ArgumentError("loss map refers to frame " + std::to_string(frame) +
                          " beyond the end of the sequence");
    }
    if (frame == 0) {
      for (const BlockLoss& loss : losses) {
        result.issues.push_back({frame, loss.x0, loss.y0, "no previous frame to estimate from"});
      }
      continue;
    }

    Frame& cur = out.frames[frame];
    const Frame& prev = cfg.reference == ReferenceMode::OriginalPrev
                            ? originals->frames[frame - 1]
                            : out.frames[frame - 1];
    const Plane<std::uint8_t> valid = map.validity_mask(frame);

    // Isolation keeps every block's support ring clear of every other lost
    // block, so writes land in disjoint regions no other block reads.
    std::vector<ConcealedBlock> concealed(losses.size());
    std::vector<std::string> failures(losses.size());
    const int workers = std::min<int>(threads, static_cast<int>(losses.size()));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
      for (std::size_t i = next.fetch_add(1); i < losses.size(); i = next.fetch_add(1)) {
        try {
          concealed[i] = conceal_block(cur, prev, losses[i], cfg, &valid);
        } catch (const Error& e) {
          failures[i] = e.what();
        }
      }
    };
    if (workers <= 1) {
      run();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int t = 0; t < workers; ++t) pool.emplace_back(run);
      for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < losses.size(); ++i) {
      const BlockLoss& loss = losses[i];
      if (!failures[i].empty()) {
        result.issues.push_back({frame, loss.x0, loss.y0, failures[i]});
        continue;
      }
      for (int y = 0; y < loss.size; ++y) {
        Sample* row = cur.luma.row(loss.y0 + y);
        for (int x = 0; x < loss.size; ++x) {
          row[loss.x0 + x] = concealed[i].block.at(x, y);
        }
      }
    }
  }
  return result;
}

}  // namespace stec
