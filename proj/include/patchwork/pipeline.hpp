#ifndef PATCHWORK_PIPELINE_HPP_
#define PATCHWORK_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "patchwork/czm.hpp"
#include "patchwork/gle.hpp"
#include "patchwork/plane_fit.hpp"
#include "patchwork/types.hpp"

namespace patchwork {

/// Full parameter tree. gle.l_tau (when auto), gle.sensor_height and
/// gle.l_min are derived from the czm/rgpf sections, so the zone boundaries
/// and the sensor height have a single source of truth.
struct PatchworkParams {
  ZoneConfig czm;
  RgpfParams rgpf;
  GleParams gle;

  // Points closer than l_min are outside the zone model and default to
  // non-ground; with the passthrough they are labeled ground when below
  // -sensor_height + 0.2 m.
  bool near_field_passthrough = false;
  int num_threads = 0;  // 0 = hardware concurrency

  // Uniform baseline grid used by the uniform ablation variant.
  int uniform_rings = 60;
  int uniform_sectors = 54;

  /// Copy of gle with l_tau/sensor_height/l_min resolved from czm and rgpf.
  GleParams resolved_gle() const;

  void validate() const;  // throws ValidationError
};

enum class BinStatus : std::uint8_t {
  empty,           // no points landed in the bin
  too_few_points,  // below min_bin_points (before or after the seed filter)
  degenerate,      // plane fit failed
  rejected,        // ground likelihood <= 0.5
  accepted,        // ground likelihood > 0.5
};

std::string_view to_string(BinStatus status);

/// Per-bin diagnostics; `verdict` is meaningful for rejected/accepted bins.
struct BinRecord {
  BinCoord coord;
  BinStatus status = BinStatus::empty;
  std::uint32_t n_points = 0;
  std::uint32_t n_ground = 0;
  BinVerdict verdict;
};

struct StageTiming {
  std::int64_t binning_us = 0;
  std::int64_t fitting_us = 0;
  std::int64_t gle_us = 0;
  std::int64_t total_us = 0;
};

/// Disjoint index sets partitioning the input cloud, plus per-bin
/// diagnostics and per-stage wall-clock timings.
struct SegmentationResult {
  std::vector<std::uint32_t> ground_indices;
  std::vector<std::uint32_t> nonground_indices;
  std::vector<BinRecord> per_bin;
  StageTiming timing;
  std::size_t total_bins = 0;
};

enum class Variant {
  uniform_u,  // uniform polar grid, uprightness only
  czm_u,      // concentric zones, uprightness only
  czm_ue,     // + elevation
  czm_uef,    // + flatness (the full pipeline)
};

Variant parse_variant(std::string_view name);  // throws ValidationError
std::string_view to_string(Variant variant);

/// End-to-end segmentation: zone binning, region-wise plane fitting, ground
/// likelihood estimation. Deterministic for fixed input and params,
/// independent of num_threads.
SegmentationResult segment(const PointCloud& cloud, const PatchworkParams& params = {});

/// Same pipeline with the grid and likelihood factors selected by `variant`;
/// Variant::czm_uef is exactly segment().
SegmentationResult ablation_variant(const PointCloud& cloud, const PatchworkParams& params,
                                    Variant variant);

/// Single-plane RANSAC baseline: 3-point consensus over the whole cloud;
/// inliers within dist_thresh of the best plane are ground. Deterministic
/// for a fixed seed. Fewer than 3 points yields an all-non-ground result.
SegmentationResult segment_ransac_baseline(const PointCloud& cloud, double dist_thresh = 0.3,
                                           int max_iters = 500, std::uint64_t seed = 0);

}  // namespace patchwork

#endif  // PATCHWORK_PIPELINE_HPP_
