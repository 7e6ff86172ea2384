#ifndef PATCHWORK_PLANE_FIT_HPP_
#define PATCHWORK_PLANE_FIT_HPP_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace patchwork {

/// Plane fitted by PCA over a bin's points: unit normal n (sign-canonicalized
/// so n_z >= 0), offset d with n^T p + d = 0, covariance eigenvalues in
/// descending order, and the point centroid.
struct PlaneModel {
  Eigen::Vector3d normal{0.0, 0.0, 1.0};
  double d = 0.0;
  std::array<double, 3> eigenvalues{0.0, 0.0, 0.0};
  Eigen::Vector3d centroid{0.0, 0.0, 0.0};

  double signed_distance(const Eigen::Vector3d& p) const { return normal.dot(p) + d; }

  /// Surface variable: smallest eigenvalue over the trace, clamped to
  /// [0, 1/3] against numerical noise.
  double surface_variable() const;
};

struct RgpfParams {
  int n_seed = 20;
  double z_seed = 0.5;
  double m_d = 0.15;
  double m_h = -1.1;  // must stay < -1
  double sensor_height = 1.723;
  int num_iter = 3;
  int min_bin_points = 10;
  // Relaxation of the reflection-noise seed cutoff per zone; the cutoff is
  // m_h * sensor_height - offset, so it decreases away from the sensor and
  // keeps downhill points eligible in the outer zones.
  std::array<double, 4> seed_filter_offsets{0.0, 0.3, 0.6, 1.0};

  void validate() const;  // throws ValidationError

  /// Seed candidates below this z are treated as reflection noise.
  double seed_z_cutoff(int zone_idx) const;
};

/// PCA plane fit: centroid, covariance (1/N normalization), eigen-decompose,
/// normal = eigenvector of the smallest eigenvalue.
/// Throws InsufficientPointsError (< 3 points) or DegenerateGeometryError
/// (collinear/coincident input).
PlaneModel fit_plane_pca(std::span<const Eigen::Vector3d> points);

/// Lowest-height seed selection with the adaptive reflection-noise filter.
/// Returns indices into `bin_points`, or nullopt when fewer than
/// min_bin_points candidates survive the filter (bin-skipped signal).
/// z ties are broken by original index.
std::optional<std::vector<std::uint32_t>> select_initial_seeds(
    std::span<const Eigen::Vector3d> bin_points, int zone_idx, const RgpfParams& params);

enum class ExtractStatus {
  ok,
  too_few_points,  // bin or filtered seed pool below min_bin_points
  degenerate,      // plane fit impossible at some iteration
};

struct BinExtraction {
  ExtractStatus status = ExtractStatus::too_few_points;
  std::vector<std::uint32_t> ground;  // indices into the bin's points
  PlaneModel plane;

  bool ok() const { return status == ExtractStatus::ok; }
};

/// Iterative region-wise ground extraction for one bin: seed, then num_iter
/// rounds of (fit plane, re-select every bin point whose signed height above
/// the plane is < m_d). The margin test is one-sided, so points below the
/// plane are always re-admitted.
BinExtraction extract_ground_bin(std::span<const Eigen::Vector3d> bin_points, int zone_idx,
                                 const RgpfParams& params);

}  // namespace patchwork

#endif  // PATCHWORK_PLANE_FIT_HPP_
