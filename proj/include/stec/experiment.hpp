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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stec/errors.hpp"
#include "stec/loss.hpp"
#include "stec/metrics.hpp"
#include "stec/pipeline.hpp"
#include "stec/video_io.hpp"

namespace stec {

/// One reproducible experiment: which sequence, which frames get losses, how
/// they are concealed, and where results go. Frame numbers here and in the
/// config file are 1-based; the in-memory sequence stays 0-based.
struct ExperimentSpec {
  std::string name = "experiment";
  std::string input;       // raw 4:2:0 file, resolved against the corpus dir
  int width = 352;
  int height = 288;
  int first_frame = 4;     // 1-based, inclusive
  int last_frame = 150;    // 1-based, inclusive
  int losses_per_frame = 25;
  std::uint64_t seed = 1;
  int fill = 0;            // value written into lost samples
  ConcealmentConfig conceal;
  int threads = 1;

  // Output paths; an empty path skips that artifact.
  std::string corrupted;
  std::string lossmap;
  std::string concealed;
  std::string report;
  std::string frames_dir;  // one image per concealed frame
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw FormatError("expected true or false, got " + value);
}

inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace detail

/// Applies one `key = value` assignment to `spec`. Unknown keys are errors so
/// a typo cannot silently fall back to a default.
inline void apply_spec_key(ExperimentSpec& spec, const std::string& key,
                           const std::string& value) {
  try {
    if (key == "name") spec.name = value;
    else if (key == "input") spec.input = value;
    else if (key == "width") spec.width = std::stoi(value);
    else if (key == "height") spec.height = std::stoi(value);
    else if (key == "frames") {
      std::istringstream pair(value);
      if (!(pair >> spec.first_frame >> spec.last_frame)) {
        throw FormatError("expected two frame numbers");
      }
    } else if (key == "losses_per_frame") spec.losses_per_frame = std::stoi(value);
    else if (key == "block_size") spec.conceal.block_size = std::stoi(value);
    else if (key == "seed") spec.seed = std::stoull(value);
    else if (key == "fill") spec.fill = std::stoi(value);
    else if (key == "method") spec.conceal.method = parse_temporal_method(value);
    else if (key == "refine") spec.conceal.refine = detail::parse_bool(value);
    else if (key == "border_width") spec.conceal.border_width = std::stoi(value);
    else if (key == "search_range") spec.conceal.search_range = std::stoi(value);
    else if (key == "decay") spec.conceal.decay = std::stod(value);
    else if (key == "compensation") spec.conceal.compensation = std::stod(value);
    else if (key == "max_temporal_error") spec.conceal.max_temporal_error = std::stod(value);
    else if (key == "iterations") spec.conceal.iterations = std::stoi(value);
    else if (key == "reference") spec.conceal.reference = parse_reference_mode(value);
    else if (key == "threads") spec.threads = std::stoi(value);
    else if (key == "corrupted") spec.corrupted = value;
    else if (key == "lossmap") spec.lossmap = value;
    else if (key == "concealed") spec.concealed = value;
    else if (key == "report") spec.report = value;
    else if (key == "frames_dir") spec.frames_dir = value;
    else throw FormatError("unknown key: " + key);
  } catch (const FormatError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw FormatError(std::string(e.what()));
  } catch (const std::exception&) {
    throw FormatError("bad value for " + key + ": " + value);
  }
}

/// Reads a flat `key = value` config. Blank lines and `#` comments are
/// skipped; every other line must assign a known key.
inline ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    try {
      apply_spec_key(spec, key, value);
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return spec;
}

inline void save_spec(const ExperimentSpec& spec, std::ostream& out) {
  out << "name = " << spec.name << "\n";
  out << "input = " << spec.input << "\n";
  out << "width = " << spec.width << "\n";
  out << "height = " << spec.height << "\n";
  out << "frames = " << spec.first_frame << " " << spec.last_frame << "\n";
  out << "losses_per_frame = " << spec.losses_per_frame << "\n";
  out << "block_size = " << spec.conceal.block_size << "\n";
  out << "seed = " << spec.seed << "\n";
  out << "fill = " << spec.fill << "\n";
  out << "method = " << to_string(spec.conceal.method) << "\n";
  out << "refine = " << (spec.conceal.refine ? "true" : "false") << "\n";
  out << "border_width = " << spec.conceal.border_width << "\n";
  out << "search_range = " << spec.conceal.search_range << "\n";
  out << "decay = " << detail::format_double(spec.conceal.decay) << "\n";
  out << "compensation = " << detail::format_double(spec.conceal.compensation) << "\n";
  out << "max_temporal_error = " << detail::format_double(spec.conceal.max_temporal_error)
      << "\n";
  out << "iterations = " << spec.conceal.iterations << "\n";
  out << "reference = " << to_string(spec.conceal.reference) << "\n";
  out << "threads = " << spec.threads << "\n";
  if (!spec.corrupted.empty()) out << "corrupted = " << spec.corrupted << "\n";
  if (!spec.lossmap.empty()) out << "lossmap = " << spec.lossmap << "\n";
  if (!spec.concealed.empty()) out << "concealed = " << spec.concealed << "\n";
  if (!spec.report.empty()) out << "report = " << spec.report << "\n";
  if (!spec.frames_dir.empty()) out << "frames_dir = " << spec.frames_dir << "\n";
}

inline void save_spec(const ExperimentSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  save_spec(spec, out);
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

/// Resolves an input path: used as given when it exists, otherwise looked up
/// under $STEC_CORPUS. Reports both attempted locations on failure.
inline std::string resolve_input(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  std::string tried = path;
  if (const char* corpus = std::getenv("STEC_CORPUS"); corpus && *corpus) {
    const fs::path candidate = fs::path(corpus) / path;
    if (fs::exists(candidate)) return candidate.string();
    tried += ", " + candidate.string();
  } else {
    tried += " (STEC_CORPUS is not set)";
  }
  throw IoError("input not found: tried " + tried);
}

/// Draws the loss pattern an experiment describes. Frame numbers convert from
/// the config file's 1-based convention here.
inline LossMap losses_for(const ExperimentSpec& spec) {
  if (spec.first_frame < 1) {
    throw ArgumentError("frame numbers are 1-based");
  }
  return generate_losses(spec.width, spec.height, spec.first_frame - 1, spec.last_frame - 1,
                         spec.losses_per_frame, spec.conceal.block_size, spec.seed);
}

/// One row of a concealment comparison: quality of the raw temporal estimate,
/// of the refined result, and the gain from refining.
struct TableRow {
  std::string method;
  double direct_db = 0.0;
  double refined_db = 0.0;
  double gain_db = 0.0;
};

/// Runs the full comparison an experiment describes: one loss pattern, each
/// requested method concealed both directly and with refinement, quality
/// pooled over every lost sample.
inline std::vector<TableRow> run_table(const ExperimentSpec& spec,
                                       const std::vector<TemporalMethod>& methods) {
  const Sequence original = read_yuv420(resolve_input(spec.input), spec.width, spec.height);
  const LossMap map = losses_for(spec);
  const Sequence corrupted = apply_losses(original, map, static_cast<Sample>(spec.fill));

  std::vector<TableRow> rows;
  rows.reserve(methods.size());
  for (TemporalMethod method : methods) {
    ConcealmentConfig cfg = spec.conceal;
    cfg.method = method;

    cfg.refine = false;
    const ConcealmentResult direct = conceal_sequence(corrupted, map, &original, cfg, spec.threads);
    cfg.refine = true;
    const ConcealmentResult refined =
        conceal_sequence(corrupted, map, &original, cfg, spec.threads);

    TableRow row;
    row.method = to_string(method);
    row.direct_db = psnr_lost_blocks(original, direct.sequence, map).aggregate_psnr();
    row.refined_db = psnr_lost_blocks(original, refined.sequence, map).aggregate_psnr();
    row.gain_db = row.refined_db - row.direct_db;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stec
