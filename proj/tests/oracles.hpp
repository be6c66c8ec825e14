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

// Independent reference implementations the tests check the library against.
// Everything here is written for obviousness, not speed: direct sums, no
// shared code with the library's fast paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "stec/frame.hpp"
#include "stec/loss.hpp"
#include "stec/plane.hpp"
#include "stec/temporal.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Direct O((MN)^2) forward 2D DFT with the e^{-j} kernel, row-major output.
inline std::vector<std::complex<double>> naive_dft2(const stec::Plane<double>& f) {
  const int rows = f.height(), cols = f.width();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(rows) * cols);
  for (int km = 0; km < rows; ++km) {
    for (int kn = 0; kn < cols; ++kn) {
      std::complex<double> acc = 0.0;
      for (int m = 0; m < rows; ++m) {
        for (int n = 0; n < cols; ++n) {
          const double angle = -2.0 * kPi * (static_cast<double>(km) * m / rows +
                                             static_cast<double>(kn) * n / cols);
          acc += f.at(n, m) * std::polar(1.0, angle);
        }
      }
      out[static_cast<std::size_t>(km) * cols + kn] = acc;
    }
  }
  return out;
}

/// Direct inverse of naive_dft2 (e^{+j} kernel, 1/(MN) normalization),
/// returning the real part.
inline stec::Plane<double> naive_idft2(const std::vector<std::complex<double>>& spectrum,
                                       int rows, int cols) {
  stec::Plane<double> out(cols, rows, 0.0);
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n < cols; ++n) {
      std::complex<double> acc = 0.0;
      for (int km = 0; km < rows; ++km) {
        for (int kn = 0; kn < cols; ++kn) {
          const double angle = 2.0 * kPi * (static_cast<double>(km) * m / rows +
                                            static_cast<double>(kn) * n / cols);
          acc += spectrum[static_cast<std::size_t>(km) * cols + kn] * std::polar(1.0, angle);
        }
      }
      out.at(n, m) = acc.real() / (static_cast<double>(rows) * cols);
    }
  }
  return out;
}

/// Weighted projection by direct summation: numerator Sum(w r conj(phi_k)),
/// denominator Sum(w |phi_k|^2) with |phi_k| evaluated, not assumed 1.
inline std::complex<double> naive_projection(const stec::Plane<double>& r,
                                             const stec::Plane<double>& w, int km, int kn) {
  const int rows = r.height(), cols = r.width();
  std::complex<double> numerator = 0.0;
  double denominator = 0.0;
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n < cols; ++n) {
      const double angle = 2.0 * kPi * (static_cast<double>(km) * m / rows +
                                        static_cast<double>(kn) * n / cols);
      const std::complex<double> phi = std::polar(1.0, angle);
      numerator += w.at(n, m) * r.at(n, m) * std::conj(phi);
      denominator += w.at(n, m) * std::norm(phi);
    }
  }
  return numerator / denominator;
}

/// Exhaustive argmax of the weighted energy decrement |p_k|^2 * Sum(w),
/// smallest index on ties — evaluated per index with naive projections.
inline int naive_select(const stec::Plane<double>& r, const stec::Plane<double>& w) {
  const int rows = r.height(), cols = r.width();
  double weight_sum = 0.0;
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n < cols; ++n) weight_sum += w.at(n, m);
  }
  int best = 0;
  double best_decrement = -1.0;
  for (int km = 0; km < rows; ++km) {
    for (int kn = 0; kn < cols; ++kn) {
      const double decrement = std::norm(naive_projection(r, w, km, kn)) * weight_sum;
      if (decrement > best_decrement) {
        best_decrement = decrement;
        best = km * cols + kn;
      }
    }
  }
  return best;
}

/// Brute-force displacement search: minimizes the SSD over the given ring
/// positions, skipping candidates whose block or ring leaves the previous
/// frame; ties by smallest |dx|+|dy|, then dy-major raster order. Kept
/// deliberately separate from the library's matcher.
inline stec::Displacement brute_force_match(const stec::Frame& cur, const stec::Frame& prev,
                                            const stec::BlockLoss& loss,
                                            const std::vector<std::pair<int, int>>& ring,
                                            int range) {
  bool found = false;
  stec::Displacement best{0, 0};
  double best_cost = std::numeric_limits<double>::infinity();
  int best_l1 = 0;
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      if (loss.x0 + dx < 0 || loss.y0 + dy < 0 ||
          loss.x0 + loss.size + dx > prev.width() || loss.y0 + loss.size + dy > prev.height()) {
        continue;
      }
      double cost = 0.0;
      bool usable = true;
      for (const auto& [x, y] : ring) {
        const int px = x + dx, py = y + dy;
        if (px < 0 || py < 0 || px >= prev.width() || py >= prev.height()) {
          usable = false;
          break;
        }
        const double diff = static_cast<double>(cur.at(x, y)) - prev.at(px, py);
        cost += diff * diff;
      }
      if (!usable) continue;
      const int l1 = std::abs(dx) + std::abs(dy);
      if (!found || cost < best_cost || (cost == best_cost && l1 < best_l1)) {
        found = true;
        best = {dx, dy};
        best_cost = cost;
        best_l1 = l1;
      }
    }
  }
  if (!found) throw std::runtime_error("oracle: no usable displacement");
  return best;
}

/// All received positions of the width-`w` ring around a loss, raster order.
inline std::vector<std::pair<int, int>> ring_positions(const stec::Frame& frame,
                                                       const stec::BlockLoss& loss, int w) {
  std::vector<std::pair<int, int>> ring;
  for (int y = loss.y0 - w; y < loss.y0 + loss.size + w; ++y) {
    for (int x = loss.x0 - w; x < loss.x0 + loss.size + w; ++x) {
      if (loss.covers(x, y)) continue;
      if (x < 0 || y < 0 || x >= frame.width() || y >= frame.height()) continue;
      ring.emplace_back(x, y);
    }
  }
  return ring;
}

/// Minimal binary PGM (P5, maxval 255) reader for round-trip checks.
inline stec::Plane<stec::Sample> read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("oracle: cannot open " + path);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (magic != "P5" || maxval != 255) throw std::runtime_error("oracle: not an 8-bit P5 file");
  in.get();  // single whitespace byte after the header
  stec::Plane<stec::Sample> plane(width, height);
  in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(width) * height);
  if (!in) throw std::runtime_error("oracle: truncated PGM");
  return plane;
}

}  // namespace oracle
