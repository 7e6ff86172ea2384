#include "patchwork/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "patchwork/errors.hpp"
#include "patchwork/io.hpp"

namespace patchwork {

namespace {

ConfusionCounts tally(const SegmentationResult& result, const GroundTruthMask& truth,
                      const std::uint8_t* eval_mask) {
  const std::size_t n = result.ground_indices.size() + result.nonground_indices.size();
  if (truth.is_ground.size() != n) {
    throw ValidationError("confusion: truth size " + std::to_string(truth.is_ground.size()) +
                          " does not match result size " + std::to_string(n));
  }
  std::vector<std::uint8_t> predicted(n, 0);
  for (std::uint32_t idx : result.ground_indices) predicted[idx] = 1;

  ConfusionCounts counts;
  for (std::size_t i = 0; i < n; ++i) {
    if (eval_mask && !eval_mask[i]) continue;
    const bool pred = predicted[i] != 0;
    const bool actual = truth.is_ground[i] != 0;
    if (pred && actual) ++counts.tp;
    else if (pred && !actual) ++counts.fp;
    else if (!pred && actual) ++counts.fn;
    else ++counts.tn;
  }
  return counts;
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_std(std::span<const double> values, double mean) {
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ConfusionCounts confusion(const SegmentationResult& result, const GroundTruthMask& truth) {
  return tally(result, truth, nullptr);
}

ConfusionCounts confusion(const SegmentationResult& result, const GroundTruthMask& truth,
                          std::span<const std::uint8_t> eval_mask) {
  if (eval_mask.size() != truth.is_ground.size()) {
    throw ValidationError("confusion: eval mask size does not match truth size");
  }
  return tally(result, truth, eval_mask.data());
}

std::vector<std::uint8_t> range_eval_mask(const PointCloud& cloud, double l_min, double l_max) {
  std::vector<std::uint8_t> mask(cloud.size(), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud.points[i];
    const double rho = std::hypot(static_cast<double>(p.x), static_cast<double>(p.y));
    mask[i] = (rho >= l_min && rho < l_max) ? 1 : 0;
  }
  return mask;
}

FrameMetrics metrics(const ConfusionCounts& counts) {
  FrameMetrics m;
  m.counts = counts;
  const double tp = static_cast<double>(counts.tp);
  const double fp = static_cast<double>(counts.fp);
  const double fn = static_cast<double>(counts.fn);
  const double tn = static_cast<double>(counts.tn);

  if (counts.tp + counts.fp > 0) {
    m.precision = tp / (tp + fp);
    m.precision_defined = true;
  }
  if (counts.tp + counts.fn > 0) {
    m.recall = tp / (tp + fn);
    m.recall_defined = true;
  }
  if (2 * counts.tp + counts.fp + counts.fn > 0) {
    m.f1 = 2.0 * tp / (2.0 * tp + fp + fn);
    m.f1_defined = true;
  }
  if (counts.total() > 0) {
    m.accuracy = (tp + tn) / (tp + tn + fp + fn);
    m.accuracy_defined = true;
  }
  return m;
}

SequenceSummary summarize(std::span<const FrameMetrics> per_frame,
                          std::span<const double> runtimes_s) {
  if (per_frame.empty()) throw ValidationError("summarize: need at least one frame");

  std::vector<double> precision, recall, f1;
  precision.reserve(per_frame.size());
  for (const auto& m : per_frame) {
    precision.push_back(m.precision);
    recall.push_back(m.recall);
    f1.push_back(m.f1);
  }

  SequenceSummary s;
  s.frames = per_frame.size();
  s.precision_mean = mean_of(precision);
  s.precision_std = population_std(precision, s.precision_mean);
  s.recall_mean = mean_of(recall);
  s.recall_std = population_std(recall, s.recall_mean);
  s.f1_mean = mean_of(f1);
  if (!runtimes_s.empty()) {
    const double mean_s = mean_of(runtimes_s);
    s.mean_hz = mean_s > 0.0 ? 1.0 / mean_s : 0.0;
  }
  return s;
}

Method parse_method(std::string_view name) {
  if (name == "patchwork") return Method::patchwork;
  if (name == "ransac") return Method::ransac;
  throw ValidationError("unknown method '" + std::string(name) + "' (expected patchwork or ransac)");
}

std::string_view to_string(Method method) {
  return method == Method::patchwork ? "patchwork" : "ransac";
}

BenchmarkReport benchmark(std::span<const PointCloud> clouds, const PatchworkParams& params,
                          const BenchmarkOptions& options) {
  if (clouds.empty()) throw ValidationError("benchmark: need at least one frame");
  if (options.reps < 1) throw ValidationError("benchmark: reps must be >= 1");
  if (options.warmup < 0) throw ValidationError("benchmark: warmup must be >= 0");

  const auto run_once = [&](const PointCloud& cloud) -> SegmentationResult {
    if (options.method == Method::ransac) {
      return segment_ransac_baseline(cloud, options.ransac_dist_thresh, options.ransac_max_iters,
                                     options.seed);
    }
    return ablation_variant(cloud, params, options.variant);
  };

  BenchmarkReport report;
  report.warmup = options.warmup;
  report.reps = options.reps;
  report.frames = clouds.size();
  for (const auto& cloud : clouds) report.points += cloud.size();

  // Timing runs are strictly sequential to avoid contention skew.
  for (const auto& cloud : clouds) {
    for (int i = 0; i < options.warmup; ++i) run_once(cloud);
    for (int i = 0; i < options.reps; ++i) {
      const SegmentationResult result = run_once(cloud);
      report.runs.push_back(result.timing);
      report.total_bins = result.total_bins;
    }
  }

  std::vector<double> totals_ms;
  totals_ms.reserve(report.runs.size());
  double bin_ms = 0.0, fit_ms = 0.0, gle_ms = 0.0;
  for (const auto& t : report.runs) {
    totals_ms.push_back(static_cast<double>(t.total_us) / 1000.0);
    bin_ms += static_cast<double>(t.binning_us) / 1000.0;
    fit_ms += static_cast<double>(t.fitting_us) / 1000.0;
    gle_ms += static_cast<double>(t.gle_us) / 1000.0;
  }
  const double n_runs = static_cast<double>(report.runs.size());
  report.mean_ms = mean_of(totals_ms);
  report.median_ms = median_of(totals_ms);
  report.mean_hz = report.mean_ms > 0.0 ? 1000.0 / report.mean_ms : 0.0;
  report.median_hz = report.median_ms > 0.0 ? 1000.0 / report.median_ms : 0.0;
  report.mean_binning_ms = bin_ms / n_runs;
  report.mean_fitting_ms = fit_ms / n_runs;
  report.mean_gle_ms = gle_ms / n_runs;
  return report;
}

BenchmarkReport benchmark(std::span<const std::filesystem::path> cloud_paths,
                          const PatchworkParams& params, const BenchmarkOptions& options) {
  std::vector<PointCloud> clouds;
  clouds.reserve(cloud_paths.size());
  for (const auto& path : cloud_paths) clouds.push_back(read_kitti_bin(path));
  return benchmark(clouds, params, options);
}

void write_frame_csv(std::ostream& out, std::span<const FrameRow> rows) {
  out << "frame_id,n_tp,n_fp,n_fn,n_tn,precision,recall,f1,accuracy,"
         "ms_total,ms_bin,ms_fit,ms_gle\n";
  std::vector<FrameMetrics> all;
  double total_us = 0.0, bin_us = 0.0, fit_us = 0.0, gle_us = 0.0;
  const auto emit = [&out](const std::string& id, const FrameMetrics& m, double t_total,
                           double t_bin, double t_fit, double t_gle) {
    const auto old_precision = out.precision(10);
    out << id << ',' << m.counts.tp << ',' << m.counts.fp << ',' << m.counts.fn << ','
        << m.counts.tn << ',' << m.precision << ',' << m.recall << ',' << m.f1 << ','
        << m.accuracy << ',' << t_total / 1000.0 << ',' << t_bin / 1000.0 << ','
        << t_fit / 1000.0 << ',' << t_gle / 1000.0 << '\n';
    out.precision(old_precision);
  };
  for (const auto& row : rows) {
    emit(row.frame_id, row.metrics, static_cast<double>(row.timing.total_us),
         static_cast<double>(row.timing.binning_us), static_cast<double>(row.timing.fitting_us),
         static_cast<double>(row.timing.gle_us));
    all.push_back(row.metrics);
    total_us += static_cast<double>(row.timing.total_us);
    bin_us += static_cast<double>(row.timing.binning_us);
    fit_us += static_cast<double>(row.timing.fitting_us);
    gle_us += static_cast<double>(row.timing.gle_us);
  }
  if (!rows.empty()) {
    ConfusionCounts summed;
    for (const auto& m : all) {
      summed.tp += m.counts.tp;
      summed.fp += m.counts.fp;
      summed.fn += m.counts.fn;
      summed.tn += m.counts.tn;
    }
    const double n = static_cast<double>(rows.size());
    emit("summary", metrics(summed), total_us / n, bin_us / n, fit_us / n, gle_us / n);
  }
}

}  // namespace patchwork
