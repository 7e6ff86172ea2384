// Command-line front end: segmentation, evaluation, benchmarking and
// synthetic scene generation on KITTI-format scans.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "patchwork/config.hpp"
#include "patchwork/detail/parallel.hpp"
#include "patchwork/errors.hpp"
#include "patchwork/eval.hpp"
#include "patchwork/io.hpp"
#include "patchwork/pipeline.hpp"
#include "patchwork/synth.hpp"

namespace fs = std::filesystem;
using namespace patchwork;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string variant = "czm+U+E+F";
  std::string method = "patchwork";
};

struct Frame {
  fs::path bin;
  fs::path label;  // empty when absent
  std::string stem;
};

RunConfig load_run_config(const CommonArgs& args) {
  if (args.config_path.empty()) return RunConfig{};
  return load_config(args.config_path);
}

std::vector<Frame> collect_frames(const fs::path& input, bool require_labels) {
  if (!fs::exists(input)) throw IoError("input path does not exist: " + input.string());

  std::vector<Frame> frames;
  if (fs::is_directory(input)) {
    std::vector<fs::path> bins;
    std::vector<fs::path> labels;
    for (const auto& entry : fs::directory_iterator(input)) {
      if (!entry.is_regular_file()) continue;
      if (entry.path().extension() == ".bin") bins.push_back(entry.path());
      if (entry.path().extension() == ".label") labels.push_back(entry.path());
    }
    std::sort(bins.begin(), bins.end());
    std::sort(labels.begin(), labels.end());
    for (const auto& bin : bins) {
      Frame frame{bin, {}, bin.stem().string()};
      const fs::path label = fs::path(bin).replace_extension(".label");
      if (fs::exists(label)) frame.label = label;
      frames.push_back(std::move(frame));
    }
    if (require_labels) {
      std::vector<std::string> unmatched;
      for (const auto& frame : frames) {
        if (frame.label.empty()) unmatched.push_back(frame.stem);
      }
      for (const auto& label : labels) {
        if (!fs::exists(fs::path(label).replace_extension(".bin"))) {
          unmatched.push_back(label.stem().string());
        }
      }
      if (!unmatched.empty()) {
        std::string msg = "unpaired frames:";
        for (const auto& stem : unmatched) msg += " " + stem;
        throw ValidationError(msg);
      }
    }
  } else {
    Frame frame{input, {}, input.stem().string()};
    const fs::path label = fs::path(input).replace_extension(".label");
    if (fs::exists(label)) frame.label = label;
    if (require_labels && frame.label.empty()) {
      throw ValidationError("unpaired frames: " + frame.stem);
    }
    frames.push_back(std::move(frame));
  }
  if (frames.empty()) throw ValidationError("no .bin frames found under " + input.string());
  return frames;
}

SegmentationResult run_method(const PointCloud& cloud, const RunConfig& config,
                              const CommonArgs& args) {
  if (parse_method(args.method) == Method::ransac) {
    return segment_ransac_baseline(cloud, config.ransac.dist_thresh, config.ransac.max_iters,
                                   args.seed);
  }
  return ablation_variant(cloud, config.params, parse_variant(args.variant));
}

void write_bin_csv(const SegmentationResult& result, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "zone,ring,sector,status,n_points,n_ground,phi,psi,varphi,likelihood,is_ground\n";
  out.precision(10);
  for (const auto& record : result.per_bin) {
    out << record.coord.zone << ',' << record.coord.ring << ',' << record.coord.sector << ','
        << to_string(record.status) << ',' << record.n_points << ',' << record.n_ground << ','
        << record.verdict.phi << ',' << record.verdict.psi << ',' << record.verdict.varphi << ','
        << record.verdict.likelihood << ',' << (record.verdict.is_ground ? 1 : 0) << '\n';
  }
}

int cmd_segment(const CommonArgs& args, const std::string& input, const std::string& out_dir,
                bool ply_ascii, bool bin_csv) {
  const RunConfig config = load_run_config(args);
  const auto frames = collect_frames(input, false);
  fs::create_directories(out_dir);

  for (const auto& frame : frames) {
    const PointCloud cloud = read_kitti_frame(frame.bin, frame.label);
    if (cloud.dropped_non_finite > 0) {
      std::cout << "warning: dropped " << cloud.dropped_non_finite
                << " non-finite points from " << frame.stem << "\n";
    }
    const SegmentationResult result = run_method(cloud, config, args);

    GroundTruthMask truth;
    const bool have_truth = cloud.has_labels();
    if (have_truth) truth = ground_truth_mask(cloud);

    const fs::path ply_path = fs::path(out_dir) / (frame.stem + ".ply");
    write_colored_ply(cloud, result, have_truth ? &truth : nullptr, ply_path,
                      ply_ascii ? PlyFormat::ascii : PlyFormat::binary_little_endian);
    if (bin_csv) write_bin_csv(result, fs::path(out_dir) / (frame.stem + "_bins.csv"));

    std::cout << frame.stem << ": " << cloud.size() << " points, "
              << result.ground_indices.size() << " ground, "
              << static_cast<double>(result.timing.total_us) / 1000.0 << " ms -> "
              << ply_path.string() << "\n";
  }
  return kExitOk;
}

int cmd_eval(const CommonArgs& args, const std::string& input, const std::string& out_csv,
             bool include_all_range) {
  const RunConfig config = load_run_config(args);
  const auto frames = collect_frames(input, true);

  std::vector<FrameRow> rows(frames.size());
  detail::parallel_for(frames.size(), std::max(1, args.jobs), [&](std::size_t i) {
    const PointCloud cloud = read_kitti_frame(frames[i].bin, frames[i].label);
    const SegmentationResult result = run_method(cloud, config, args);
    const GroundTruthMask truth = ground_truth_mask(cloud);
    ConfusionCounts counts;
    if (include_all_range) {
      counts = confusion(result, truth);
    } else {
      const auto mask = range_eval_mask(cloud, config.params.czm.l_min, config.params.czm.l_max);
      counts = confusion(result, truth, mask);
    }
    rows[i] = FrameRow{frames[i].stem, metrics(counts), result.timing};
  });

  std::ostringstream csv;
  write_frame_csv(csv, rows);
  std::cout << csv.str();
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw IoError("cannot open " + out_csv + " for writing");
    out << csv.str();
  }

  std::vector<FrameMetrics> per_frame;
  std::vector<double> runtimes;
  for (const auto& row : rows) {
    per_frame.push_back(row.metrics);
    runtimes.push_back(static_cast<double>(row.timing.total_us) / 1e6);
  }
  const SequenceSummary summary = summarize(per_frame, runtimes);
  std::cout.precision(6);
  std::cout << "frames: " << summary.frames << "\n"
            << "precision: mean " << summary.precision_mean << " std " << summary.precision_std << "\n"
            << "recall: mean " << summary.recall_mean << " std " << summary.recall_std << "\n"
            << "f1: mean " << summary.f1_mean << "\n"
            << "rate: " << summary.mean_hz << " Hz\n";
  return kExitOk;
}

int cmd_bench(const CommonArgs& args, const std::string& input, int reps, int warmup) {
  const RunConfig config = load_run_config(args);
  const auto frames = collect_frames(input, false);

  std::vector<PointCloud> clouds;
  clouds.reserve(frames.size());
  for (const auto& frame : frames) clouds.push_back(read_kitti_bin(frame.bin));

  BenchmarkOptions options;
  options.reps = reps;
  options.warmup = warmup;
  options.method = parse_method(args.method);
  options.variant = parse_variant(args.variant);
  options.ransac_dist_thresh = config.ransac.dist_thresh;
  options.ransac_max_iters = config.ransac.max_iters;
  options.seed = args.seed;

  const BenchmarkReport report = benchmark(clouds, config.params, options);

  std::cout.precision(6);
  std::cout << "method: " << to_string(options.method);
  if (options.method == Method::patchwork) std::cout << " (" << to_string(options.variant) << ")";
  std::cout << "\n";
  std::cout << "frames: " << report.frames << ", points: " << report.points
            << ", timed runs: " << report.runs.size() << " (warmup " << report.warmup << ")\n";
  std::cout << "bins: " << report.total_bins << "\n";
  std::cout << "stage means [ms]: binning " << report.mean_binning_ms << ", fitting "
            << report.mean_fitting_ms << ", gle " << report.mean_gle_ms << "\n";
  std::cout << "total: mean " << report.mean_ms << " ms (" << report.mean_hz << " Hz), median "
            << report.median_ms << " ms (" << report.median_hz << " Hz)\n";
  return kExitOk;
}

int cmd_synth(const CommonArgs& args, const std::string& out_dir, int num_frames) {
  if (num_frames < 1) throw ValidationError("synth: --frames must be >= 1");
  const RunConfig config = load_run_config(args);
  fs::create_directories(out_dir);

  for (int i = 0; i < num_frames; ++i) {
    const PointCloud cloud = synth_scene(config.scene, args.seed + static_cast<std::uint64_t>(i));
    char name[32];
    std::snprintf(name, sizeof(name), "%06d", i);
    const fs::path bin_path = fs::path(out_dir) / (std::string(name) + ".bin");
    const fs::path label_path = fs::path(out_dir) / (std::string(name) + ".label");
    write_kitti_bin(cloud, bin_path);
    write_kitti_labels(*cloud.labels, label_path);
    std::cout << bin_path.string() << " (" << cloud.size() << " points)\n";
  }
  return kExitOk;
}

int cmd_dump_config(const CommonArgs& args) {
  const RunConfig config = load_run_config(args);
  std::cout << dump_config(config);
  return kExitOk;
}

std::string one_line(std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  return message;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR ground segmentation: concentric-zone binning, region-wise plane "
               "fitting and ground-likelihood filtering"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs common;
  app.add_option("--config", common.config_path, "Config file (TOML subset; see dump-config)");
  app.add_option("--seed", common.seed, "Seed for randomized steps");
  app.add_option("--jobs", common.jobs, "Frame-level parallelism for eval directory runs");
  app.add_option("--variant", common.variant,
                 "Pipeline variant: uniform+U, czm+U, czm+U+E or czm+U+E+F");
  app.add_option("--method", common.method, "patchwork or ransac");

  std::string input, out_dir = "out", out_csv;
  bool ply_ascii = false, bin_csv = false, include_all_range = false;
  int reps = 10, warmup = 3, num_frames = 1;

  auto* segment_cmd = app.add_subcommand("segment", "Segment scans and write colored PLY files");
  segment_cmd->add_option("--input", input, "A .bin file or a directory of them")->required();
  segment_cmd->add_option("--out", out_dir, "Output directory");
  segment_cmd->add_flag("--ply-ascii", ply_ascii, "Write ASCII PLY instead of binary");
  segment_cmd->add_flag("--bin-csv", bin_csv, "Also write per-bin likelihood diagnostics CSV");

  auto* eval_cmd = app.add_subcommand("eval", "Score segmentation against .label ground truth");
  eval_cmd->add_option("--input", input, "A .bin file or a directory of paired .bin/.label files")
      ->required();
  eval_cmd->add_option("--out", out_csv, "Also save the per-frame CSV here");
  eval_cmd->add_flag("--include-all-range", include_all_range,
                     "Score every point instead of only those within [l_min, l_max)");

  auto* bench_cmd = app.add_subcommand("bench", "Measure segmentation throughput");
  bench_cmd->add_option("--input", input, "A .bin file or a directory of them")->required();
  bench_cmd->add_option("--reps", reps, "Timed repetitions per frame");
  bench_cmd->add_option("--warmup", warmup, "Untimed warmup runs per frame");

  auto* synth_cmd = app.add_subcommand("synth", "Generate labeled synthetic scenes");
  synth_cmd->add_option("--out", out_dir, "Output directory");
  synth_cmd->add_option("--frames", num_frames, "Number of frames to generate");

  app.add_subcommand("dump-config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: validation: " << one_line(e.what()) << "\n";
    return kExitValidation;
  }

  try {
    if (segment_cmd->parsed()) return cmd_segment(common, input, out_dir, ply_ascii, bin_csv);
    if (eval_cmd->parsed()) return cmd_eval(common, input, out_csv, include_all_range);
    if (bench_cmd->parsed()) return cmd_bench(common, input, reps, warmup);
    if (synth_cmd->parsed()) return cmd_synth(common, out_dir, num_frames);
    return cmd_dump_config(common);
  } catch (const IoError& e) {
    std::cerr << "error: io: " << one_line(e.what()) << "\n";
    return kExitIo;
  } catch (const MalformedInputError& e) {
    std::cerr << "error: malformed-input: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: validation: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << "\n";
    return kExitValidation;
  }
}
