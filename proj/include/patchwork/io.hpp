#ifndef PATCHWORK_IO_HPP_
#define PATCHWORK_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "patchwork/types.hpp"

namespace patchwork {

struct SegmentationResult;

/// Reads a KITTI velodyne scan: packed little-endian float32 x4 per point.
/// Non-finite records are dropped and counted in `dropped_non_finite`.
/// Throws MalformedInputError when the size is not a multiple of 16 bytes,
/// IoError on unreadable paths.
PointCloud read_kitti_bin(const std::filesystem::path& path);

/// Reads a SemanticKITTI label file: packed little-endian uint32 per point;
/// the semantic class id is the lower 16 bits (upper 16 are the instance id).
/// Throws MalformedInputError unless the file holds exactly n_points records.
std::vector<std::uint16_t> read_kitti_labels(const std::filesystem::path& path,
                                             std::size_t n_points);

/// Reads a paired scan + label file, dropping non-finite records from both
/// streams in sync. Pass an empty label path for an unlabeled cloud.
PointCloud read_kitti_frame(const std::filesystem::path& bin_path,
                            const std::filesystem::path& label_path = {});

void write_kitti_bin(const PointCloud& cloud, const std::filesystem::path& path);
void write_kitti_labels(std::span<const std::uint16_t> labels, const std::filesystem::path& path);

/// Ground truth from semantic labels: the ground classes (lane marking, road,
/// parking, sidewalk, other ground, terrain) plus vegetation strictly below
/// -1.3 m in the sensor frame.
GroundTruthMask ground_truth_mask(const PointCloud& cloud);

inline constexpr double kVegetationGroundZ = -1.3;

enum class PlyFormat { binary_little_endian, ascii };

/// Writes a per-vertex colored PLY. With ground truth: TP green, FN blue,
/// FP red, TN gray. Without: predicted ground yellow, non-ground cyan.
void write_colored_ply(const PointCloud& cloud, const SegmentationResult& result,
                       const GroundTruthMask* truth, const std::filesystem::path& path,
                       PlyFormat format = PlyFormat::binary_little_endian);

}  // namespace patchwork

#endif  // PATCHWORK_IO_HPP_
