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

// Umbrella header: the whole spatio-temporal error concealment toolkit.

#include "stec/dft.hpp"         // IWYU pragma: export
#include "stec/errors.hpp"      // IWYU pragma: export
#include "stec/experiment.hpp"  // IWYU pragma: export
#include "stec/frame.hpp"       // IWYU pragma: export
#include "stec/fse.hpp"         // IWYU pragma: export
#include "stec/loss.hpp"        // IWYU pragma: export
#include "stec/metrics.hpp"     // IWYU pragma: export
#include "stec/pipeline.hpp"    // IWYU pragma: export
#include "stec/plane.hpp"       // IWYU pragma: export
#include "stec/temporal.hpp"    // IWYU pragma: export
#include "stec/video_io.hpp"    // IWYU pragma: export
