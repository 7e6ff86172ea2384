#ifndef PATCHWORK_EVAL_HPP_
#define PATCHWORK_EVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "patchwork/pipeline.hpp"
#include "patchwork/types.hpp"

namespace patchwork {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

/// Four-way tally of predicted ground vs ground truth. The eval_mask
/// overload restricts the tally to points with a nonzero mask entry.
ConfusionCounts confusion(const SegmentationResult& result, const GroundTruthMask& truth);
ConfusionCounts confusion(const SegmentationResult& result, const GroundTruthMask& truth,
                          std::span<const std::uint8_t> eval_mask);

/// Nonzero for points whose planar range lies in [l_min, l_max); used to
/// restrict evaluation to the region the segmenter can label.
std::vector<std::uint8_t> range_eval_mask(const PointCloud& cloud, double l_min, double l_max);

/// Zero-denominator metrics are reported as 0 with the matching
/// *_defined flag cleared, never as NaN.
struct FrameMetrics {
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  bool precision_defined = false;
  bool recall_defined = false;
  bool f1_defined = false;
  bool accuracy_defined = false;
};

FrameMetrics metrics(const ConfusionCounts& counts);

/// Mean/std (population) of precision and recall across frames, mean F1,
/// and mean rate in Hz when per-frame runtimes are supplied.
struct SequenceSummary {
  std::size_t frames = 0;
  double precision_mean = 0.0;
  double precision_std = 0.0;
  double recall_mean = 0.0;
  double recall_std = 0.0;
  double f1_mean = 0.0;
  double mean_hz = 0.0;  // 1 / mean(seconds); 0 when no runtimes given
};

SequenceSummary summarize(std::span<const FrameMetrics> per_frame,
                          std::span<const double> runtimes_s = {});

struct BenchmarkReport {
  int warmup = 0;
  int reps = 0;
  std::size_t frames = 0;
  std::size_t points = 0;
  std::size_t total_bins = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double mean_hz = 0.0;
  double median_hz = 0.0;
  double mean_binning_ms = 0.0;
  double mean_fitting_ms = 0.0;
  double mean_gle_ms = 0.0;
  std::vector<StageTiming> runs;  // one entry per timed (frame, rep) pair
};

enum class Method { patchwork, ransac };

Method parse_method(std::string_view name);  // throws ValidationError
std::string_view to_string(Method method);

struct BenchmarkOptions {
  int warmup = 2;
  int reps = 5;
  Method method = Method::patchwork;
  Variant variant = Variant::czm_uef;
  double ransac_dist_thresh = 0.3;
  int ransac_max_iters = 500;
  std::uint64_t seed = 0;
};

/// Times `reps` sequential segmentations per pre-loaded frame; warmup runs
/// are executed but not recorded. File I/O is excluded by construction.
BenchmarkReport benchmark(std::span<const PointCloud> clouds, const PatchworkParams& params,
                          const BenchmarkOptions& options);

/// Loads the given KITTI scans, then defers to the in-memory overload.
BenchmarkReport benchmark(std::span<const std::filesystem::path> cloud_paths,
                          const PatchworkParams& params, const BenchmarkOptions& options);

/// One CSV row per frame, then a `summary` row. Columns:
/// frame_id,n_tp,n_fp,n_fn,n_tn,precision,recall,f1,accuracy,
/// ms_total,ms_bin,ms_fit,ms_gle
struct FrameRow {
  std::string frame_id;
  FrameMetrics metrics;
  StageTiming timing;
};

void write_frame_csv(std::ostream& out, std::span<const FrameRow> rows);

}  // namespace patchwork

#endif  // PATCHWORK_EVAL_HPP_
