// voxplane command line: simulate scenes, run or replay the mapping and
// multi-plane segmentation pipeline, benchmark cluster-parallel RANSAC, and
// score polygon files against ground truth.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "voxplane/config.hpp"
#include "voxplane/metrics.hpp"
#include "voxplane/pipeline.hpp"
#include "voxplane/polygon_io.hpp"

using namespace voxplane;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitBadConfig = 3;
constexpr int kExitBadOutput = 4;

struct CommonFlags {
  std::string config_path;
  std::string scene;
  std::string sensor;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = -1;
  int frames = 0;
  bool faithful = false;
  bool baseline = false;

  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--scene", flags.scene,
                  "scene kind: stair5, single_stage, overhang, small_obstacle");
  cmd->add_option("--sensor", flags.sensor, "sensor kind: pinhole, rosette, sphere");
  cmd->add_option("--seed", flags.seed, "random seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out-dir", flags.out_dir, "output directory");
  cmd->add_option("--frames", flags.frames, "number of frames to simulate");
  cmd->add_flag("--faithful", flags.faithful,
                "disable the least-squares polish of RANSAC planes");
  cmd->add_flag("--baseline", flags.baseline, "use the 2.5-D height-map baseline");
}

PipelineConfig build_config(const CommonFlags& flags) {
  PipelineConfig config =
      flags.config_path.empty() ? default_config() : load_config_file(flags.config_path);
  if (!flags.scene.empty()) config.scene_kind = scene_kind_from_string(flags.scene);
  if (!flags.sensor.empty()) {
    if (flags.sensor != "pinhole" && flags.sensor != "rosette" && flags.sensor != "sphere")
      throw ConfigError("unknown sensor kind '" + flags.sensor + "'");
    config.sensor_kind = flags.sensor;
  }
  if (flags.seed_set) {
    config.run.seed = flags.seed;
    config.ransac.seed = flags.seed;
  }
  if (flags.threads >= 0) config.run.threads = flags.threads;
  if (!flags.out_dir.empty()) config.output.dir = flags.out_dir;
  if (flags.frames > 0) config.run.frames = flags.frames;
  if (flags.faithful) config.run.refine = false;
  if (flags.baseline) config.run.baseline = true;
  return config;
}

void print_result(const PipelineResult& result) {
  std::printf("frames processed: %zu, polygons: %zu\n", result.frames_processed,
              result.polygons.size());
  if (result.iou) std::fputs(format_iou_table(*result.iou).c_str(), stdout);
  if (!result.timing.frames.empty()) {
    const FrameTiming& m = result.timing.mean;
    std::printf(
        "mean per frame: mapping %.1f ms, classify %.1f ms, cluster %.1f ms, "
        "ransac %.1f ms, hull %.1f ms, total %.1f ms\n",
        m.mapping_ms, m.classify_ms, m.cluster_ms, m.ransac_ms, m.hull_ms, m.total_ms);
  }
  std::printf("polygons: %s\n", result.polygons_path.c_str());
  if (!result.iou_report_path.empty())
    std::printf("iou report: %s\n", result.iou_report_path.c_str());
  if (!result.timing_csv_path.empty())
    std::printf("timing csv: %s\n", result.timing_csv_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robot-centric voxel mapping and multi-plane segmentation"};
  app.require_subcommand(1);

  CommonFlags flags;

  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "render a scene to frames.bin and truth.txt");
  add_common(cmd_simulate, flags);

  CLI::App* cmd_run = app.add_subcommand("run", "simulate and run the full pipeline");
  add_common(cmd_run, flags);

  CLI::App* cmd_replay = app.add_subcommand("replay", "run the pipeline on recorded frames");
  add_common(cmd_replay, flags);
  std::string frames_path, truth_path;
  cmd_replay->add_option("--frames-file", frames_path, "recorded frame stream")->required();
  cmd_replay->add_option("--truth", truth_path, "ground-truth polygon file for scoring");

  CLI::App* cmd_ablate =
      app.add_subcommand("ablate", "cluster-parallel RANSAC scaling study");
  add_common(cmd_ablate, flags);
  int trials = 1000;  // the reference evaluation setting
  cmd_ablate->add_option("--trials", trials,
                         "trials per cluster count (use ~100 for a quick desk-scale run)");

  CLI::App* cmd_score = app.add_subcommand("score", "IoU of detected polygons vs truth");
  std::string detected_path, score_truth_path, score_out;
  cmd_score->add_option("--detected", detected_path, "detected polygon file")->required();
  cmd_score->add_option("--truth", score_truth_path, "truth polygon file")->required();
  cmd_score->add_option("--out", score_out, "write the report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(cmd_simulate)) {
      const SimulateResult result = simulate_scene(build_config(flags));
      std::printf("wrote %zu frames (%zu points) to %s\n", result.frames, result.points,
                  result.frames_path.c_str());
      std::printf("wrote ground truth to %s\n", result.truth_path.c_str());
    } else if (app.got_subcommand(cmd_run)) {
      print_result(run_pipeline(build_config(flags)));
    } else if (app.got_subcommand(cmd_replay)) {
      print_result(replay_pipeline(build_config(flags), frames_path, truth_path));
    } else if (app.got_subcommand(cmd_ablate)) {
      const PipelineConfig config = build_config(flags);
      AblationConfig ablation;
      ablation.trials = trials;
      ablation.seed = config.run.seed;
      ablation.threads = config.run.threads;
      ablation.iterations = config.ransac.iterations;
      ablation.inlier_eps = config.ransac.inlier_eps;
      const auto rows = run_ablation(ablation);
      std::error_code ec;
      std::filesystem::create_directories(config.output.dir, ec);
      if (ec) throw OutputError("cannot create output directory " + config.output.dir);
      const std::string csv = config.output.dir + "/ablation.csv";
      write_ablation_csv(csv, rows);
      for (const AblationRow& r : rows)
        std::printf("clusters %2d: parallel %8.3f ms, serial %8.3f ms, ratio %.3f\n",
                    r.clusters, r.parallel_ms, r.serial_ms,
                    r.serial_ms > 0 ? r.parallel_ms / r.serial_ms : 0.0);
      std::printf("scaling csv: %s\n", csv.c_str());
    } else if (app.got_subcommand(cmd_score)) {
      const auto detected = read_polygons(detected_path);
      const auto truth = read_polygons(score_truth_path);
      const IoUReport report = match_planes(detected, truth);
      std::fputs(format_iou_table(report).c_str(), stdout);
      if (!score_out.empty()) write_iou_report(score_out, report);
    }
  } catch (const MissingInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMissingInput;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadConfig;
  } catch (const OutputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadOutput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitOk;
}
