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
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "stec/dft.hpp"
#include "stec/errors.hpp"
#include "stec/plane.hpp"

namespace stec {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// The working area of the sparse spectral model: the lost block plus the
/// ring of support samples around it. `samples` is indexed (n, m) = (column,
/// row); the block occupies rows [block_row0, block_row0 + block_size) and
/// the matching column range.
struct ProjectionArea {
  ProjectionArea(int rows, int cols, int block_row0, int block_col0, int block_size)
      : samples(cols, rows),
        block_row0(block_row0),
        block_col0(block_col0),
        block_size(block_size) {
    if (block_size <= 0 || block_row0 < 0 || block_col0 < 0 ||
        block_row0 + block_size > rows || block_col0 + block_size > cols) {
      throw ArgumentError("block does not lie inside the projection area");
    }
  }

  /// Convenience constructor with the block centered in the area; rows and
  /// cols must leave the same margin on both sides.
  ProjectionArea(int rows, int cols, int block_size)
      : ProjectionArea(rows, cols, (rows - block_size) / 2, (cols - block_size) / 2, block_size) {
    if ((rows - block_size) % 2 != 0 || (cols - block_size) % 2 != 0) {
      throw ArgumentError("area does not center the block");
    }
  }

  int rows() const { return samples.height(); }
  int cols() const { return samples.width(); }

  bool in_block(int m, int n) const {
    return m >= block_row0 && m < block_row0 + block_size && n >= block_col0 &&
           n < block_col0 + block_size;
  }

  Plane<double> samples;
  int block_row0;
  int block_col0;
  int block_size;
};

/// Spatial weighting of the approximation error: `block_weight` on the lost
/// block, an isotropic decay on the support ring, zero nowhere.
struct WeightFunction {
  Plane<double> values;
  double block_weight = 0.0;
  double decay = 0.0;
  double sum = 0.0;  // total weight; the denominator of every projection
};

/// Confidence weight of the temporal estimate that seeds the lost block:
/// starts at decay^(block_size / 2) — the ring decay carried to roughly the
/// block center — and falls off linearly in the measured temporal error,
/// reaching zero at `max_error`. A zero weight turns the refinement into a
/// purely spatial extrapolation.
inline double adaptive_block_weight(double error_estimate, double max_error, double decay,
                                    int block_size) {
  if (!(max_error > 0.0)) {
    throw WeightError("max temporal error must be positive");
  }
  if (!(decay > 0.0) || !(decay < 1.0)) {
    throw WeightError("decay must lie in (0, 1)");
  }
  if (error_estimate < 0.0) {
    throw WeightError("error estimate must be non-negative");
  }
  const double confidence = std::max(0.0, 1.0 - error_estimate / max_error);
  return std::pow(decay, block_size / 2.0) * confidence;
}

/// Builds the weight function for `area`: `block_weight` on the block,
/// decay^d on the ring where d is the Euclidean distance to the area center.
inline WeightFunction build_weights(const ProjectionArea& area, double block_weight,
                                    double decay) {
  if (!(decay > 0.0) || !(decay < 1.0)) {
    throw WeightError("decay must lie in (0, 1)");
  }
  if (block_weight < 0.0) {
    throw WeightError("block weight must be non-negative");
  }
  WeightFunction w;
  w.block_weight = block_weight;
  w.decay = decay;
  w.values = Plane<double>(area.cols(), area.rows());
  const double center_m = (area.rows() - 1) / 2.0;
  const double center_n = (area.cols() - 1) / 2.0;
  double sum = 0.0;
  for (int m = 0; m < area.rows(); ++m) {
    for (int n = 0; n < area.cols(); ++n) {
      const double value =
          area.in_block(m, n)
              ? block_weight
              : std::pow(decay, std::hypot(m - center_m, n - center_n));
      w.values.at(n, m) = value;
      sum += value;
    }
  }
  w.sum = sum;
  if (!(w.sum > 0.0)) {
    throw WeightError("weight function sums to zero");
  }
  return w;
}

/// Weighted energy of a residual: sum of w * r^2 over the area.
inline double weighted_energy(const Plane<double>& residual, const WeightFunction& weights) {
  double e = 0.0;
  for (int m = 0; m < residual.height(); ++m) {
    for (int n = 0; n < residual.width(); ++n) {
      e += weights.values.at(n, m) * residual.at(n, m) * residual.at(n, m);
    }
  }
  return e;
}

/// Weighted projection of `residual` onto the basis function
/// e^{j 2 pi (k_m m / M + k_n n / N)}: the weighted inner product divided by
/// the weighted basis norm, which is the plain weight sum because every basis
/// function has unit magnitude. Direct O(MN) reference; the model generator
/// gets all numerators at once from one forward transform of w * r.
inline std::complex<double> project(const Plane<double>& residual, const WeightFunction& weights,
                                    int km, int kn) {
  if (!(weights.sum > 0.0)) {
    throw WeightError("weight function sums to zero");
  }
  const int rows = residual.height();
  const int cols = residual.width();
  std::complex<double> numerator = 0.0;
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n < cols; ++n) {
      const double phase =
          -kTwoPi * (static_cast<double>(km) * m / rows + static_cast<double>(kn) * n / cols);
      numerator += weights.values.at(n, m) * residual.at(n, m) *
                   std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return numerator / weights.sum;
}

/// Index of the projection with the largest weighted energy decrement. All
/// basis functions share the same weighted norm, so this is the argmax of
/// |p_k|^2; ties resolve to the smallest linear index (k_m * cols + k_n).
inline int select_basis(const std::vector<std::complex<double>>& projections) {
  if (projections.empty()) {
    throw ArgumentError("no projections to select from");
  }
  int best = 0;
  double best_norm = std::norm(projections[0]);
  for (int k = 1; k < static_cast<int>(projections.size()); ++k) {
    const double norm = std::norm(projections[k]);
    if (norm > best_norm) {
      best = k;
      best_norm = norm;
    }
  }
  return best;
}

/// Scales a projection down before it enters the model, compensating for the
/// basis functions not being orthogonal under the spatial weighting.
inline std::complex<double> compensate(std::complex<double> projection, double compensation) {
  if (!(compensation > 0.0) || compensation > 1.0) {
    throw ArgumentError("compensation must lie in (0, 1]");
  }
  return compensation * projection;
}

/// One step of the model generator, for inspection and testing.
struct ModelIteration {
  int step = 0;                        // 0-based iteration number
  int index = 0;                       // canonical linear basis index chosen
  std::complex<double> increment;      // coefficient added this step
  double weighted_energy = 0.0;        // weighted residual energy afterwards
};

struct ModelResult {
  Plane<double> model;
  Plane<double> residual;  // area.samples - model, by construction
  std::map<int, std::complex<double>> coefficients;  // canonical index -> sum
  int iterations = 0;      // steps actually run
};

/// Iterative sparse approximation of `area.samples` in the 2D Fourier basis.
/// Each iteration transforms the weighted residual once, picks the basis
/// function with the largest weighted projection, scales it by
/// `compensation`, and moves that component from the residual into the model.
///
/// A basis function and its conjugate partner (k and (M - k_m) % M,
/// (N - k_n) % N) have conjugate projections on a real residual, so they are
/// handled as one unit identified by the smaller linear index: the model adds
/// 2 Re(c phi_k), keeping model and residual real. Self-paired indices (the
/// DC and Nyquist bins, where the basis function is real) contribute
/// c phi_k with a real c.
///
/// Runs exactly `iterations` steps unless the residual's weighted spectrum
/// vanishes first. With compensation in (0, 1] the weighted residual energy
/// never increases.
inline ModelResult generate_model(const ProjectionArea& area, const WeightFunction& weights,
                                  int iterations, double compensation,
                                  std::vector<ModelIteration>* trace = nullptr) {
  if (iterations < 0) {
    throw ArgumentError("iteration count must be non-negative");
  }
  if (!(compensation > 0.0) || compensation > 1.0) {
    throw ArgumentError("compensation must lie in (0, 1]");
  }
  if (!(weights.sum > 0.0)) {
    throw WeightError("weight function sums to zero");
  }
  const int rows = area.rows();
  const int cols = area.cols();

  ModelResult result;
  result.model = Plane<double>(cols, rows, 0.0);
  result.residual = area.samples;

  Dft2d dft(rows, cols);
  const std::size_t bins = static_cast<std::size_t>(rows) * cols;

  // Per-axis basis factors e^{j 2 pi k m / M}, rebuilt per selected index.
  std::vector<std::complex<double>> row_phase(rows), col_phase(cols);

  for (int step = 0; step < iterations; ++step) {
    // All projection numerators at once: forward transform of w * r uses the
    // conjugated kernel, which is exactly the weighted inner product with
    // every basis function.
    std::complex<double>* in = dft.input();
    for (int m = 0; m < rows; ++m) {
      for (int n = 0; n < cols; ++n) {
        in[static_cast<std::size_t>(m) * cols + n] =
            weights.values.at(n, m) * result.residual.at(n, m);
      }
    }
    dft.execute();
    const std::complex<double>* numerators = dft.output();

    int best = 0;
    double best_norm = std::norm(numerators[0]);
    for (std::size_t k = 1; k < bins; ++k) {
      const double norm = std::norm(numerators[k]);
      if (norm > best_norm) {
        best = static_cast<int>(k);
        best_norm = norm;
      }
    }
    if (best_norm == 0.0) break;  // nothing left to extract

    // Collapse the selected index and its conjugate partner onto the smaller
    // of the two, so each pair accumulates under one canonical key.
    const int km = best / cols;
    const int kn = best % cols;
    const int partner = ((rows - km) % rows) * cols + ((cols - kn) % cols);
    const int canonical = std::min(best, partner);
    const int ckm = canonical / cols;
    const int ckn = canonical % cols;

    for (int m = 0; m < rows; ++m) {
      const double phase = kTwoPi * ckm * m / rows;
      row_phase[m] = {std::cos(phase), std::sin(phase)};
    }
    for (int n = 0; n < cols; ++n) {
      const double phase = kTwoPi * ckn * n / cols;
      col_phase[n] = {std::cos(phase), std::sin(phase)};
    }

    std::complex<double> c;
    double scale;
    if (best == partner) {
      // Real basis function: keep the coefficient real.
      c = compensation * numerators[canonical].real() / weights.sum;
      scale = 1.0;
    } else {
      c = compensation * numerators[canonical] / weights.sum;
      scale = 2.0;  // c phi + conj(c) conj(phi) = 2 Re(c phi)
    }

    for (int m = 0; m < rows; ++m) {
      for (int n = 0; n < cols; ++n) {
        const double delta = scale * (c * row_phase[m] * col_phase[n]).real();
        result.model.at(n, m) += delta;
        result.residual.at(n, m) -= delta;
      }
    }
    result.coefficients[canonical] += c;
    result.iterations = step + 1;

    if (trace) {
      trace->push_back({step, canonical, c, weighted_energy(result.residual, weights)});
    }
  }
  return result;
}

/// Reads the lost block back out of the model, rounded and clamped to the
/// 8-bit sample range.
inline Plane<std::uint8_t> refine_block(const ProjectionArea& area, const Plane<double>& model) {
  Plane<std::uint8_t> block(area.block_size, area.block_size);
  for (int m = 0; m < area.block_size; ++m) {
    for (int n = 0; n < area.block_size; ++n) {
      const double value = model.at(area.block_col0 + n, area.block_row0 + m);
      const long rounded = std::lround(value);
      block.at(n, m) = static_cast<std::uint8_t>(std::clamp(rounded, 0l, 255l));
    }
  }
  return block;
}

}  // namespace stec
