#ifndef PATCHWORK_TYPES_HPP_
#define PATCHWORK_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace patchwork {

/// One LiDAR return in the sensor frame (Z up). Coordinates in meters,
/// intensity is unitless reflectance in [0, 1].
struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;
};

/// A single scan. Point order is stable: index i refers to the same point
/// throughout the pipeline. `labels`, when present, holds one semantic class
/// id per point (SemanticKITTI numeric convention).
struct PointCloud {
  std::vector<Point> points;
  std::optional<std::vector<std::uint16_t>> labels;
  std::string frame_id;
  // Non-finite records dropped at read time.
  std::size_t dropped_non_finite = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_labels() const { return labels.has_value(); }
};

/// Per-point ground-truth ground flag derived from semantic labels.
struct GroundTruthMask {
  std::vector<std::uint8_t> is_ground;

  std::size_t size() const { return is_ground.size(); }
};

// SemanticKITTI numeric class ids used by this project.
namespace kitti_labels {
inline constexpr std::uint16_t kOutlier = 1;
inline constexpr std::uint16_t kCar = 10;
inline constexpr std::uint16_t kRoad = 40;
inline constexpr std::uint16_t kParking = 44;
inline constexpr std::uint16_t kSidewalk = 48;
inline constexpr std::uint16_t kOtherGround = 49;
inline constexpr std::uint16_t kBuilding = 50;
inline constexpr std::uint16_t kLaneMarking = 60;
inline constexpr std::uint16_t kVegetation = 70;
inline constexpr std::uint16_t kTerrain = 72;
}  // namespace kitti_labels

}  // namespace patchwork

#endif  // PATCHWORK_TYPES_HPP_
