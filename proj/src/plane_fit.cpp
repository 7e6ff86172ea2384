#include "patchwork/plane_fit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "patchwork/errors.hpp"

namespace patchwork {

namespace {

constexpr double kDegenerateEigenvalue = 1e-12;  // m^2, on the mid eigenvalue

enum class FitFailure { none, insufficient, degenerate };

FitFailure try_fit(std::span<const Eigen::Vector3d> points, PlaneModel& out) {
  const std::size_t n = points.size();
  if (n < 3) return FitFailure::insufficient;

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(n);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d q = p - mean;
    cov.noalias() += q * q.transpose();
  }
  cov /= static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  if (solver.info() != Eigen::Success) return FitFailure::degenerate;

  // Eigen reports ascending eigenvalues; store descending.
  const Eigen::Vector3d& evals = solver.eigenvalues();
  out.eigenvalues = {evals(2), evals(1), evals(0)};
  if (out.eigenvalues[1] < kDegenerateEigenvalue) return FitFailure::degenerate;

  Eigen::Vector3d normal = solver.eigenvectors().col(0);
  if (normal.z() < 0.0) {
    normal = -normal;
  } else if (normal.z() == 0.0) {
    for (int k = 0; k < 3; ++k) {
      if (normal(k) != 0.0) {
        if (normal(k) < 0.0) normal = -normal;
        break;
      }
    }
  }
  out.normal = normal;
  out.centroid = mean;
  out.d = -normal.dot(mean);
  return FitFailure::none;
}

}  // namespace

double PlaneModel::surface_variable() const {
  const double trace = eigenvalues[0] + eigenvalues[1] + eigenvalues[2];
  if (!(trace > 0.0)) return 0.0;
  return std::clamp(eigenvalues[2] / trace, 0.0, 1.0 / 3.0);
}

void RgpfParams::validate() const {
  if (n_seed < 1) throw ValidationError("rgpf: n_seed must be >= 1");
  if (!(z_seed > 0.0)) throw ValidationError("rgpf: z_seed must be > 0");
  if (!(m_d > 0.0)) throw ValidationError("rgpf: m_d must be > 0");
  if (!(m_h < -1.0)) throw ValidationError("rgpf: m_h must be < -1");
  if (num_iter < 1) throw ValidationError("rgpf: num_iter must be >= 1");
  if (min_bin_points < 3) throw ValidationError("rgpf: min_bin_points must be >= 3");
  if (!(sensor_height > 0.0)) throw ValidationError("rgpf: sensor_height must be > 0");
  for (double off : seed_filter_offsets) {
    if (!(off >= 0.0) || !std::isfinite(off)) {
      throw ValidationError("rgpf: seed_filter_offsets must be finite and >= 0");
    }
  }
}

double RgpfParams::seed_z_cutoff(int zone_idx) const {
  const int m = std::clamp(zone_idx, 1, 4);
  return m_h * sensor_height - seed_filter_offsets[static_cast<std::size_t>(m - 1)];
}

PlaneModel fit_plane_pca(std::span<const Eigen::Vector3d> points) {
  PlaneModel model;
  switch (try_fit(points, model)) {
    case FitFailure::none:
      return model;
    case FitFailure::insufficient:
      throw InsufficientPointsError("plane fit requires at least 3 points");
    case FitFailure::degenerate:
      throw DegenerateGeometryError("plane fit: points are collinear or coincident");
  }
  return model;  // unreachable
}

std::optional<std::vector<std::uint32_t>> select_initial_seeds(
    std::span<const Eigen::Vector3d> bin_points, int zone_idx, const RgpfParams& params) {
  const double cutoff = params.seed_z_cutoff(zone_idx);

  std::vector<std::uint32_t> candidates;
  candidates.reserve(bin_points.size());
  for (std::size_t i = 0; i < bin_points.size(); ++i) {
    if (bin_points[i].z() >= cutoff) candidates.push_back(static_cast<std::uint32_t>(i));
  }
  if (candidates.size() < static_cast<std::size_t>(params.min_bin_points)) return std::nullopt;

  std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double za = bin_points[a].z();
    const double zb = bin_points[b].z();
    if (za != zb) return za < zb;
    return a < b;
  });

  const std::size_t n_lowest = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(params.n_seed));
  double z_mean = 0.0;
  for (std::size_t i = 0; i < n_lowest; ++i) z_mean += bin_points[candidates[i]].z();
  z_mean /= static_cast<double>(n_lowest);

  const double z_limit = z_mean + params.z_seed;
  std::vector<std::uint32_t> seeds;
  for (std::uint32_t idx : candidates) {
    if (bin_points[idx].z() < z_limit) seeds.push_back(idx);
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

BinExtraction extract_ground_bin(std::span<const Eigen::Vector3d> bin_points, int zone_idx,
                                 const RgpfParams& params) {
  BinExtraction result;
  if (bin_points.size() < static_cast<std::size_t>(params.min_bin_points)) {
    result.status = ExtractStatus::too_few_points;
    return result;
  }

  auto seeds = select_initial_seeds(bin_points, zone_idx, params);
  if (!seeds) {
    result.status = ExtractStatus::too_few_points;
    return result;
  }

  std::vector<std::uint32_t> current = std::move(*seeds);
  std::vector<Eigen::Vector3d> buffer;
  PlaneModel plane;
  for (int iter = 0; iter < params.num_iter; ++iter) {
    buffer.clear();
    buffer.reserve(current.size());
    for (std::uint32_t idx : current) buffer.push_back(bin_points[idx]);

    if (try_fit(buffer, plane) != FitFailure::none) {
      result.status = ExtractStatus::degenerate;
      return result;
    }

    current.clear();
    for (std::size_t i = 0; i < bin_points.size(); ++i) {
      if (plane.signed_distance(bin_points[i]) < params.m_d) {
        current.push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  result.status = ExtractStatus::ok;
  result.ground = std::move(current);
  result.plane = plane;
  return result;
}

}  // namespace patchwork
