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
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "stec/errors.hpp"
#include "stec/frame.hpp"
#include "stec/loss.hpp"

namespace stec {

/// Reconstruction quality of one frame, accumulated over lost samples only.
struct FrameStats {
  int frame = 0;  // 0-based
  double sq_error_sum = 0.0;
  std::int64_t samples = 0;
  int blocks = 0;

  /// Peak signal-to-noise ratio against the 8-bit peak, +inf for an exact
  /// reconstruction.
  double psnr() const {
    if (samples == 0) return std::numeric_limits<double>::infinity();
    const double mse = sq_error_sum / static_cast<double>(samples);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
  }
};

struct EvaluationReport {
  std::vector<FrameStats> frames;  // only frames with losses, ascending

  std::int64_t total_samples() const {
    std::int64_t n = 0;
    for (const FrameStats& f : frames) n += f.samples;
    return n;
  }

  int total_blocks() const {
    int n = 0;
    for (const FrameStats& f : frames) n += f.blocks;
    return n;
  }

  /// PSNR of the pooled squared error over every lost sample in the
  /// sequence. This is the primary aggregate: frames with many lost samples
  /// weigh proportionally more.
  double aggregate_psnr() const {
    double sum = 0.0;
    std::int64_t samples = 0;
    for (const FrameStats& f : frames) {
      sum += f.sq_error_sum;
      samples += f.samples;
    }
    if (samples == 0) return std::numeric_limits<double>::infinity();
    const double mse = sum / static_cast<double>(samples);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
  }

  /// Unweighted mean of the per-frame PSNR values; +inf as soon as any frame
  /// is reconstructed exactly.
  double mean_frame_psnr() const {
    if (frames.empty()) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const FrameStats& f : frames) {
      const double p = f.psnr();
      if (std::isinf(p)) return p;
      sum += p;
    }
    return sum / static_cast<double>(frames.size());
  }
};

/// Compares `concealed` to `original` over exactly the samples `map` marks as
/// lost. Frames without losses are absent from the report.
inline EvaluationReport psnr_lost_blocks(const Sequence& original, const Sequence& concealed,
                                         const LossMap& map) {
  if (original.size() != concealed.size()) {
    throw ArgumentError("sequences differ in length");
  }
  if (!original.empty() &&
      (original.width() != concealed.width() || original.height() != concealed.height())) {
    throw ArgumentError("sequences differ in frame size");
  }
  EvaluationReport report;
  for (const auto& [frame, losses] : map.by_frame()) {
    if (losses.empty()) continue;
    if (frame >= static_cast<int>(original.size())) {
      throw ArgumentError("loss map refers to frame " + std::to_string(frame) +
                          " beyond the end of the sequence");
    }
    FrameStats stats;
    stats.frame = frame;
    const Frame& ref = original[frame];
    const Frame& test = concealed[frame];
    for (const BlockLoss& loss : losses) {
      if (!ref.contains(loss.x0, loss.y0) ||
          !ref.contains(loss.x0 + loss.size - 1, loss.y0 + loss.size - 1)) {
        throw ArgumentError("loss does not lie inside the frame");
      }
      for (int y = loss.y0; y < loss.y0 + loss.size; ++y) {
        for (int x = loss.x0; x < loss.x0 + loss.size; ++x) {
          const double diff =
              static_cast<double>(ref.at(x, y)) - static_cast<double>(test.at(x, y));
          stats.sq_error_sum += diff * diff;
        }
      }
      stats.samples += static_cast<std::int64_t>(loss.size) * loss.size;
      ++stats.blocks;
    }
    report.frames.push_back(stats);
  }
  return report;
}

namespace detail {

/// Four-decimal fixed-point PSNR with a plain `inf` sentinel for exact
/// reconstructions.
inline std::string format_psnr(double value) {
  if (std::isinf(value)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace detail

/// CSV form of a report: `frame,psnr_db,blocks,samples` with 1-based frame
/// numbers, then `aggregate` (pooled squared error) and `mean_frames`
/// (mean of the per-frame values) summary rows.
inline void write_report_csv(const EvaluationReport& report, std::ostream& out) {
  out << "frame,psnr_db,blocks,samples\n";
  for (const FrameStats& f : report.frames) {
    out << f.frame + 1 << "," << detail::format_psnr(f.psnr()) << "," << f.blocks << ","
        << f.samples << "\n";
  }
  out << "aggregate," << detail::format_psnr(report.aggregate_psnr()) << ","
      << report.total_blocks() << "," << report.total_samples() << "\n";
  out << "mean_frames," << detail::format_psnr(report.mean_frame_psnr()) << ","
      << report.total_blocks() << "," << report.total_samples() << "\n";
}

inline void write_report_csv(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  write_report_csv(report, out);
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace stec
