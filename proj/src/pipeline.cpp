#include "patchwork/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "patchwork/detail/parallel.hpp"
#include "patchwork/detail/rng.hpp"
#include "patchwork/errors.hpp"

namespace patchwork {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_us(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - since).count();
}

struct VariantFlags {
  bool uniform_grid = false;
  bool elevation = true;
  bool flatness = true;
};

VariantFlags flags_for(Variant variant) {
  switch (variant) {
    case Variant::uniform_u:
      return {true, false, false};
    case Variant::czm_u:
      return {false, false, false};
    case Variant::czm_ue:
      return {false, true, false};
    case Variant::czm_uef:
      return {false, true, true};
  }
  throw ValidationError("unknown ablation variant");
}

SegmentationResult run_pipeline(const PointCloud& cloud, const PatchworkParams& params,
                                const VariantFlags& flags) {
  params.validate();
  const GleParams gle = params.resolved_gle();

  SegmentationResult result;
  const auto t_start = Clock::now();

  // Stage 1: binning.
  const ZoneModel model =
      flags.uniform_grid
          ? uniform_polar_model(cloud, params.uniform_rings, params.uniform_sectors, params.czm.l_max)
          : build_zone_model(cloud, params.czm);
  result.timing.binning_us = elapsed_us(t_start);
  result.total_bins = model.total_bins();

  const std::size_t n_bins = model.total_bins();
  result.per_bin.resize(n_bins);

  // Stage 2: region-wise plane fitting, one independent task per bin.
  const auto t_fit = Clock::now();
  std::vector<BinExtraction> extractions(n_bins);
  detail::parallel_for(n_bins, params.num_threads, [&](std::size_t flat) {
    BinRecord& record = result.per_bin[flat];
    record.coord = model.coord_of(flat);
    const auto& indices = model.bin(flat);
    record.n_points = static_cast<std::uint32_t>(indices.size());
    if (indices.empty()) {
      record.status = BinStatus::empty;
      return;
    }
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(indices.size());
    for (std::uint32_t idx : indices) {
      const Point& p = cloud.points[idx];
      pts.emplace_back(p.x, p.y, p.z);
    }
    extractions[flat] = extract_ground_bin(pts, record.coord.zone, params.rgpf);
    switch (extractions[flat].status) {
      case ExtractStatus::too_few_points:
        record.status = BinStatus::too_few_points;
        break;
      case ExtractStatus::degenerate:
        record.status = BinStatus::degenerate;
        break;
      case ExtractStatus::ok:
        record.status = BinStatus::rejected;  // refined by the GLE stage
        break;
    }
  });
  result.timing.fitting_us = elapsed_us(t_fit);

  // Stage 3: ground likelihood per bin, then a deterministic index-ordered
  // merge.
  const auto t_gle = Clock::now();
  std::vector<std::uint8_t> is_ground_point(cloud.size(), 0);
  for (std::size_t flat = 0; flat < n_bins; ++flat) {
    BinRecord& record = result.per_bin[flat];
    if (record.status != BinStatus::rejected) continue;  // skipped or empty
    const auto& extraction = extractions[flat];
    const auto& indices = model.bin(flat);

    BinFeatures features;
    features.zone_idx = record.coord.zone;
    features.v3 = extraction.plane.normal;
    features.sigma = extraction.plane.surface_variable();
    double sum_x = 0.0, sum_y = 0.0, sum_z = 0.0;
    for (std::uint32_t local : extraction.ground) {
      const Point& p = cloud.points[indices[local]];
      sum_x += p.x;
      sum_y += p.y;
      sum_z += p.z;
    }
    const double n_ground = static_cast<double>(extraction.ground.size());
    features.mean_z = sum_z / n_ground;
    features.r = std::hypot(sum_x / n_ground, sum_y / n_ground);

    BinVerdict verdict;
    verdict.features = features;
    verdict.phi = uprightness(features.v3, gle.theta_tau_rad());
    verdict.psi = flags.elevation ? elevation_factor(features.mean_z, features.r, gle) : 1.0;
    verdict.varphi = flags.flatness ? flatness_factor(verdict.psi, features.sigma, features.zone_idx, gle) : 1.0;
    verdict.likelihood = verdict.phi * verdict.psi * verdict.varphi;
    verdict.is_ground = verdict.likelihood > 0.5;

    record.verdict = verdict;
    if (verdict.is_ground) {
      record.status = BinStatus::accepted;
      record.n_ground = static_cast<std::uint32_t>(extraction.ground.size());
      for (std::uint32_t local : extraction.ground) is_ground_point[indices[local]] = 1;
    }
  }

  // Near-field passthrough: points under the inner boundary sitting at or
  // below ground level.
  if (params.near_field_passthrough && !flags.uniform_grid) {
    const double z_limit = -params.rgpf.sensor_height + 0.2;
    for (std::uint32_t idx : model.unbinned()) {
      const Point& p = cloud.points[idx];
      const double rho = std::hypot(static_cast<double>(p.x), static_cast<double>(p.y));
      if (rho < params.czm.l_min && static_cast<double>(p.z) < z_limit) is_ground_point[idx] = 1;
    }
  }

  result.ground_indices.reserve(cloud.size() / 2);
  for (std::uint32_t i = 0; i < cloud.size(); ++i) {
    if (is_ground_point[i]) {
      result.ground_indices.push_back(i);
    } else {
      result.nonground_indices.push_back(i);
    }
  }
  result.timing.gle_us = elapsed_us(t_gle);
  result.timing.total_us = elapsed_us(t_start);
  return result;
}

}  // namespace

GleParams PatchworkParams::resolved_gle() const {
  GleParams resolved = gle;
  if (resolved.l_tau_auto) {
    resolved.l_tau = zone_boundaries(czm)[2];  // outer edge of the second zone
  }
  resolved.sensor_height = rgpf.sensor_height;
  resolved.l_min = czm.l_min;
  return resolved;
}

void PatchworkParams::validate() const {
  czm.validate();
  rgpf.validate();
  const GleParams resolved = resolved_gle();
  resolved.validate();
  if (num_threads < 0) throw ValidationError("pipeline: num_threads must be >= 0");
  if (uniform_rings < 1 || uniform_sectors < 1) {
    throw ValidationError("pipeline: uniform grid counts must be >= 1");
  }
  // Zones without a flatness threshold must lie entirely beyond l_tau,
  // otherwise their bins could require the flatness branch.
  const auto edges = zone_boundaries(czm);
  for (int m = 1; m <= 4; ++m) {
    if (!resolved.sigma_tau[static_cast<std::size_t>(m - 1)] &&
        resolved.l_tau > edges[static_cast<std::size_t>(m - 1)]) {
      throw ValidationError("gle: l_tau exceeds the inner edge of zone " + std::to_string(m) +
                            " which has no sigma_tau configured");
    }
  }
}

std::string_view to_string(BinStatus status) {
  switch (status) {
    case BinStatus::empty: return "empty";
    case BinStatus::too_few_points: return "too_few_points";
    case BinStatus::degenerate: return "degenerate";
    case BinStatus::rejected: return "rejected";
    case BinStatus::accepted: return "accepted";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "uniform+U") return Variant::uniform_u;
  if (name == "czm+U") return Variant::czm_u;
  if (name == "czm+U+E") return Variant::czm_ue;
  if (name == "czm+U+E+F") return Variant::czm_uef;
  throw ValidationError("unknown variant '" + std::string(name) +
                        "' (expected uniform+U, czm+U, czm+U+E or czm+U+E+F)");
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::uniform_u: return "uniform+U";
    case Variant::czm_u: return "czm+U";
    case Variant::czm_ue: return "czm+U+E";
    case Variant::czm_uef: return "czm+U+E+F";
  }
  return "unknown";
}

SegmentationResult segment(const PointCloud& cloud, const PatchworkParams& params) {
  return run_pipeline(cloud, params, flags_for(Variant::czm_uef));
}

SegmentationResult ablation_variant(const PointCloud& cloud, const PatchworkParams& params,
                                    Variant variant) {
  return run_pipeline(cloud, params, flags_for(variant));
}

SegmentationResult segment_ransac_baseline(const PointCloud& cloud, double dist_thresh,
                                           int max_iters, std::uint64_t seed) {
  if (!(dist_thresh > 0.0)) throw ValidationError("ransac: dist_thresh must be > 0");
  if (max_iters < 1) throw ValidationError("ransac: max_iters must be >= 1");

  SegmentationResult result;
  const auto t_start = Clock::now();
  const std::size_t n = cloud.size();
  if (n < 3) {
    result.nonground_indices.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) result.nonground_indices[i] = i;
    result.timing.total_us = elapsed_us(t_start);
    return result;
  }

  detail::Rng rng(seed);
  Eigen::Vector3d best_normal{0.0, 0.0, 1.0};
  double best_d = 0.0;
  std::size_t best_count = 0;

  const auto t_fit = Clock::now();
  for (int iter = 0; iter < max_iters; ++iter) {
    std::uint32_t ia = static_cast<std::uint32_t>(rng.uniform_index(n));
    std::uint32_t ib = static_cast<std::uint32_t>(rng.uniform_index(n));
    std::uint32_t ic = static_cast<std::uint32_t>(rng.uniform_index(n));
    if (ia == ib || ib == ic || ia == ic) continue;
    const auto& pa = cloud.points[ia];
    const auto& pb = cloud.points[ib];
    const auto& pc = cloud.points[ic];
    const Eigen::Vector3d a(pa.x, pa.y, pa.z);
    const Eigen::Vector3d b(pb.x, pb.y, pb.z);
    const Eigen::Vector3d c(pc.x, pc.y, pc.z);
    Eigen::Vector3d normal = (b - a).cross(c - a);
    const double norm = normal.norm();
    if (norm < 1e-12) continue;
    normal /= norm;
    const double d = -normal.dot(a);

    std::size_t count = 0;
    for (const Point& p : cloud.points) {
      const double dist = normal.x() * p.x + normal.y() * p.y + normal.z() * p.z + d;
      if (std::abs(dist) <= dist_thresh) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best_normal = normal;
      best_d = d;
    }
  }
  result.timing.fitting_us = elapsed_us(t_fit);

  const auto t_gle = Clock::now();
  for (std::uint32_t i = 0; i < n; ++i) {
    const Point& p = cloud.points[i];
    const double dist = best_normal.x() * p.x + best_normal.y() * p.y + best_normal.z() * p.z + best_d;
    if (best_count > 0 && std::abs(dist) <= dist_thresh) {
      result.ground_indices.push_back(i);
    } else {
      result.nonground_indices.push_back(i);
    }
  }
  result.timing.gle_us = elapsed_us(t_gle);
  result.timing.total_us = elapsed_us(t_start);
  return result;
}

}  // namespace patchwork
