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

#include <complex>
#include <mutex>

#include <fftw3.h>

#include "stec/errors.hpp"

namespace stec {

/// Forward 2D DFT of a rows x cols complex grid, wrapping FFTW. The kernel is
/// e^{-j 2 pi (k_m m / rows + k_n n / cols)} with no normalization, matching
/// the analytic transform the model generator is specified against.
///
/// Plan creation and destruction go through a process-wide mutex because the
/// FFTW planner is not thread-safe; executing an existing plan is, so
/// separate Dft2d instances may run concurrently.
class Dft2d {
 public:
  Dft2d(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) {
      throw ArgumentError("transform dimensions must be positive");
    }
    in_ = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    out_ = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    if (!in_ || !out_) {
      if (in_) fftw_free(in_);
      if (out_) fftw_free(out_);
      throw Error("out of memory allocating transform buffers");
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_2d(rows, cols, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan_) {
      fftw_free(in_);
      fftw_free(out_);
      throw Error("cannot create transform plan");
    }
  }

  Dft2d(const Dft2d&) = delete;
  Dft2d& operator=(const Dft2d&) = delete;

  ~Dft2d() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Row-major input buffer, rows() * cols() complex values.
  std::complex<double>* input() { return reinterpret_cast<std::complex<double>*>(in_); }

  /// Row-major output buffer; bin (k_m, k_n) lives at k_m * cols() + k_n.
  const std::complex<double>* output() const {
    return reinterpret_cast<const std::complex<double>*>(out_);
  }

  void execute() { fftw_execute(plan_); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  int rows_;
  int cols_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace stec
