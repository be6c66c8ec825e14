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

#include <stdexcept>
#include <string>

namespace stec {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (open, read, write).
struct IoError : Error {
  using Error::Error;
};

/// A file exists but does not have the expected layout or contents.
struct FormatError : Error {
  using Error::Error;
};

/// Caller passed arguments that violate a documented precondition.
struct ArgumentError : Error {
  using Error::Error;
};

/// Loss placement could not satisfy the isolation/margin constraints.
struct PlacementError : Error {
  using Error::Error;
};

/// A displacement estimator had no usable samples to match on.
struct EstimatorError : Error {
  using Error::Error;
};

/// The weighting function is degenerate (sums to zero over the area).
struct WeightError : Error {
  using Error::Error;
};

}  // namespace stec
