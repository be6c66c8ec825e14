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

// Command-line front end: `stec simulate | conceal | evaluate | table`.
// Every command reads an optional `--spec file` (flat `key = value` lines)
// and applies flag overrides on top, so a saved spec re-runs bit-identically
// and any knob can still be turned from the shell.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "stec/stec.hpp"

namespace {

/// Flag overrides are collected as raw strings and pushed through the same
/// `key = value` interpreter as the config file, so both paths validate
/// identically.
struct SpecArgs {
  std::string spec_path;
  std::vector<std::pair<CLI::Option*, std::string>> keyed;  // option -> spec key
  CLI::Option* refine = nullptr;
  CLI::Option* no_refine = nullptr;
  bool dump_config = false;
};

void add_spec_args(CLI::App* cmd, SpecArgs& args, bool with_spec_option = true) {
  if (with_spec_option) {
    cmd->add_option("--spec", args.spec_path, "experiment config file (`key = value` lines)")
        ->check(CLI::ExistingFile);
  }
  auto keyed = [&](const std::string& flag, const std::string& key, const std::string& help,
                   int expected = 1) {
    CLI::Option* opt = cmd->add_option(flag);
    opt->description(help);
    if (expected != 1) opt->expected(expected);
    args.keyed.emplace_back(opt, key);
  };
  keyed("--name", "name", "experiment name used in table rows");
  keyed("--input", "input", "source video, raw 4:2:0; resolved against $STEC_CORPUS");
  keyed("--width", "width", "frame width in samples");
  keyed("--height", "height", "frame height in samples");
  keyed("--frames", "frames", "first and last frame with losses (1-based, inclusive)", 2);
  keyed("--losses-per-frame", "losses_per_frame", "lost blocks per frame");
  keyed("--block-size", "block_size", "side length of a lost block");
  keyed("--seed", "seed", "loss pattern seed");
  keyed("--fill", "fill", "sample value written into lost blocks");
  keyed("--method", "method", "temporal estimator: tr, ebma or dmve");
  keyed("--border-width", "border_width", "matched ring width of the dmve search");
  keyed("--search-range", "search_range", "displacement search radius");
  keyed("--decay", "decay", "isotropic support weight falloff, in (0, 1)");
  keyed("--compensation", "compensation", "projection scale-down per iteration, in (0, 1]");
  keyed("--max-temporal-error", "max_temporal_error",
        "border error at which the temporal estimate is fully distrusted");
  keyed("--iterations", "iterations", "model generator steps per block");
  keyed("--reference", "reference", "previous frame source: concealed or original");
  keyed("--threads", "threads", "concurrent blocks per frame");
  keyed("--corrupted", "corrupted", "corrupted video path");
  keyed("--lossmap", "lossmap", "loss map path");
  keyed("--concealed", "concealed", "concealed video path");
  keyed("--report", "report", "CSV report path");
  keyed("--frames-dir", "frames_dir", "directory for per-frame images of the concealed output");
  args.refine = cmd->add_flag("--refine");
  args.refine->description("refine the temporal estimate (default)");
  args.no_refine = cmd->add_flag("--no-refine");
  args.no_refine->description("keep the raw temporal estimate");
  cmd->add_flag("--dump-config", args.dump_config, "print the effective config and exit");
}

stec::ExperimentSpec apply_overrides(stec::ExperimentSpec spec, const SpecArgs& args) {
  for (const auto& [opt, key] : args.keyed) {
    if (opt->count() == 0) continue;
    std::string value;
    for (const std::string& part : opt->results()) {
      if (!value.empty()) value += ' ';
      value += part;
    }
    stec::apply_spec_key(spec, key, value);
  }
  if (args.refine->count() > 0 && args.no_refine->count() > 0) {
    throw stec::ArgumentError("--refine and --no-refine are mutually exclusive");
  }
  if (args.refine->count() > 0) spec.conceal.refine = true;
  if (args.no_refine->count() > 0) spec.conceal.refine = false;
  return spec;
}

/// Spec file first, flags second; later always wins.
stec::ExperimentSpec build_spec(const SpecArgs& args) {
  stec::ExperimentSpec spec;
  if (!args.spec_path.empty()) {
    spec = stec::load_spec(args.spec_path);
  }
  return apply_overrides(std::move(spec), args);
}

void require_path(const std::string& value, const std::string& key, const std::string& command) {
  if (value.empty()) {
    throw stec::ArgumentError(command + " needs `" + key + "` set in the spec or by flag");
  }
}

stec::Sequence load_video(const std::string& path, const stec::ExperimentSpec& spec) {
  return stec::read_yuv420(stec::resolve_input(path), spec.width, spec.height);
}

void check_frame_range(const stec::ExperimentSpec& spec, const stec::Sequence& seq) {
  if (spec.first_frame < 1 || spec.last_frame < spec.first_frame) {
    throw stec::ArgumentError("frame range must satisfy 1 <= first <= last");
  }
  if (spec.last_frame > static_cast<int>(seq.size())) {
    throw stec::ArgumentError("frame range ends at " + std::to_string(spec.last_frame) +
                              " but the video has " + std::to_string(seq.size()) + " frames");
  }
}

stec::LossMap load_map_checked(const stec::ExperimentSpec& spec) {
  require_path(spec.lossmap, "lossmap", "this command");
  stec::LossMap map = stec::load_loss_map(stec::resolve_input(spec.lossmap));
  if (map.width() != spec.width || map.height() != spec.height) {
    throw stec::ArgumentError("loss map is for " + std::to_string(map.width()) + "x" +
                              std::to_string(map.height()) + ", video is " +
                              std::to_string(spec.width) + "x" + std::to_string(spec.height));
  }
  return map;
}

void print_summary(const stec::EvaluationReport& report) {
  std::printf("aggregate %s dB\n", stec::detail::format_psnr(report.aggregate_psnr()).c_str());
  std::printf("mean_frames %s dB\n",
              stec::detail::format_psnr(report.mean_frame_psnr()).c_str());
}

int cmd_simulate(const stec::ExperimentSpec& spec) {
  require_path(spec.corrupted, "corrupted", "simulate");
  require_path(spec.lossmap, "lossmap", "simulate");
  const stec::Sequence original = load_video(spec.input, spec);
  check_frame_range(spec, original);
  const stec::LossMap map = stec::losses_for(spec);
  const stec::Sequence corrupted =
      stec::apply_losses(original, map, static_cast<stec::Sample>(spec.fill));
  stec::write_yuv420(corrupted, spec.corrupted);
  stec::save_loss_map(map, spec.lossmap);
  std::printf("%zu blocks\n", map.total_blocks());
  return 0;
}

int cmd_conceal(const stec::ExperimentSpec& spec) {
  require_path(spec.corrupted, "corrupted", "conceal");
  require_path(spec.concealed, "concealed", "conceal");
  const stec::LossMap map = load_map_checked(spec);
  const stec::Sequence corrupted = load_video(spec.corrupted, spec);

  const bool needs_original =
      !spec.report.empty() || spec.conceal.reference == stec::ReferenceMode::OriginalPrev;
  stec::Sequence original;
  if (needs_original) {
    require_path(spec.input, "input", "conceal (for the report or reference = original)");
    original = load_video(spec.input, spec);
  }

  const stec::ConcealmentResult result = stec::conceal_sequence(
      corrupted, map, needs_original ? &original : nullptr, spec.conceal, spec.threads);
  for (const stec::BlockIssue& issue : result.issues) {
    std::fprintf(stderr, "warning: frame %d block (%d, %d): %s\n", issue.frame + 1, issue.x0,
                 issue.y0, issue.message.c_str());
  }
  stec::write_yuv420(result.sequence, spec.concealed);

  if (!spec.frames_dir.empty()) {
    std::filesystem::create_directories(spec.frames_dir);
    for (const stec::Frame& frame : result.sequence.frames) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%04d.pgm", frame.index + 1);
      stec::write_frame_image(frame, (std::filesystem::path(spec.frames_dir) / name).string());
    }
  }

  if (!spec.report.empty()) {
    const stec::EvaluationReport report =
        stec::psnr_lost_blocks(original, result.sequence, map);
    stec::write_report_csv(report, spec.report);
    print_summary(report);
  }
  return 0;
}

int cmd_evaluate(const stec::ExperimentSpec& spec) {
  require_path(spec.input, "input", "evaluate");
  require_path(spec.concealed, "concealed", "evaluate");
  const stec::LossMap map = load_map_checked(spec);
  const stec::Sequence original = load_video(spec.input, spec);
  const stec::Sequence concealed = load_video(spec.concealed, spec);
  const stec::EvaluationReport report = stec::psnr_lost_blocks(original, concealed, map);
  if (!spec.report.empty()) {
    stec::write_report_csv(report, spec.report);
  }
  print_summary(report);
  return 0;
}

int cmd_table(const std::vector<std::string>& spec_paths, const SpecArgs& args,
              const std::vector<std::string>& method_names) {
  std::vector<stec::TemporalMethod> methods;
  for (const std::string& name : method_names) {
    methods.push_back(stec::parse_temporal_method(name));
  }
  for (const std::string& path : spec_paths) {
    stec::ExperimentSpec spec = apply_overrides(stec::load_spec(path), args);
    if (args.dump_config) {
      stec::save_spec(spec, std::cout);
      continue;
    }
    for (const stec::TableRow& row : stec::run_table(spec, methods)) {
      std::printf("%s %s %.1f %.1f %.1f\n", spec.name.c_str(), row.method.c_str(), row.direct_db,
                  row.refined_db, row.gain_db);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal error concealment for block losses in video"};
  app.require_subcommand(1);

  SpecArgs simulate_args, conceal_args, evaluate_args, table_args;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "corrupt a video with isolated block losses and save the loss map");
  add_spec_args(simulate, simulate_args);

  CLI::App* conceal =
      app.add_subcommand("conceal", "conceal the losses of a corrupted video");
  add_spec_args(conceal, conceal_args);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "compare a concealed video to the original over the lost samples");
  add_spec_args(evaluate, evaluate_args);

  CLI::App* table = app.add_subcommand(
      "table", "direct vs refined quality per estimator, one row per method");
  std::vector<std::string> table_specs;
  table->add_option("specs", table_specs, "experiment config files")
      ->required()
      ->check(CLI::ExistingFile);
  std::vector<std::string> table_methods{"tr", "ebma", "dmve"};
  table->add_option("--methods", table_methods, "estimators to compare")
      ->delimiter(',');
  add_spec_args(table, table_args, /*with_spec_option=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const stec::ExperimentSpec spec = build_spec(simulate_args);
      if (simulate_args.dump_config) {
        stec::save_spec(spec, std::cout);
        return 0;
      }
      return cmd_simulate(spec);
    }
    if (conceal->parsed()) {
      const stec::ExperimentSpec spec = build_spec(conceal_args);
      if (conceal_args.dump_config) {
        stec::save_spec(spec, std::cout);
        return 0;
      }
      return cmd_conceal(spec);
    }
    if (evaluate->parsed()) {
      const stec::ExperimentSpec spec = build_spec(evaluate_args);
      if (evaluate_args.dump_config) {
        stec::save_spec(spec, std::cout);
        return 0;
      }
      return cmd_evaluate(spec);
    }
    if (table->parsed()) {
      return cmd_table(table_specs, table_args, table_methods);
    }
  } catch (const stec::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
