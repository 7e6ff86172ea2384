#include "patchwork/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "patchwork/errors.hpp"
#include "patchwork/pipeline.hpp"

namespace patchwork {

namespace {

std::vector<char> read_all_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw IoError("cannot stat " + path.string());
  in.seekg(0, std::ios::beg);
  std::vector<char> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(bytes.data(), size)) throw IoError("short read on " + path.string());
  return bytes;
}

struct RawRecord {
  float v[4];
};

std::vector<RawRecord> parse_kitti_records(const std::filesystem::path& path) {
  const auto bytes = read_all_bytes(path);
  if (bytes.size() % 16 != 0) {
    throw MalformedInputError(path.string() + ": size " + std::to_string(bytes.size()) +
                              " is not a multiple of the 16-byte point record");
  }
  std::vector<RawRecord> records(bytes.size() / 16);
  if (!records.empty()) std::memcpy(records.data(), bytes.data(), bytes.size());
  return records;
}

bool record_finite(const RawRecord& r) {
  return std::isfinite(r.v[0]) && std::isfinite(r.v[1]) && std::isfinite(r.v[2]);
}

struct Rgb {
  unsigned char r, g, b;
};

constexpr Rgb kGreen{0, 255, 0};
constexpr Rgb kBlue{0, 0, 255};
constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kGray{128, 128, 128};
constexpr Rgb kYellow{255, 255, 0};
constexpr Rgb kCyan{0, 255, 255};

}  // namespace

PointCloud read_kitti_bin(const std::filesystem::path& path) {
  const auto records = parse_kitti_records(path);
  PointCloud cloud;
  cloud.frame_id = path.stem().string();
  cloud.points.reserve(records.size());
  for (const auto& r : records) {
    if (!record_finite(r)) {
      ++cloud.dropped_non_finite;
      continue;
    }
    cloud.points.push_back(Point{r.v[0], r.v[1], r.v[2], r.v[3]});
  }
  return cloud;
}

std::vector<std::uint16_t> read_kitti_labels(const std::filesystem::path& path,
                                             std::size_t n_points) {
  const auto bytes = read_all_bytes(path);
  if (bytes.size() != 4 * n_points) {
    throw MalformedInputError(path.string() + ": expected " + std::to_string(4 * n_points) +
                              " bytes for " + std::to_string(n_points) + " points, got " +
                              std::to_string(bytes.size()));
  }
  std::vector<std::uint16_t> labels(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    std::uint32_t raw = 0;
    std::memcpy(&raw, bytes.data() + 4 * i, 4);
    labels[i] = static_cast<std::uint16_t>(raw & 0xFFFFu);
  }
  return labels;
}

PointCloud read_kitti_frame(const std::filesystem::path& bin_path,
                            const std::filesystem::path& label_path) {
  const auto records = parse_kitti_records(bin_path);
  PointCloud cloud;
  cloud.frame_id = bin_path.stem().string();
  cloud.points.reserve(records.size());

  std::vector<std::uint16_t> raw_labels;
  if (!label_path.empty()) raw_labels = read_kitti_labels(label_path, records.size());

  std::vector<std::uint16_t> kept_labels;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!record_finite(records[i])) {
      ++cloud.dropped_non_finite;
      continue;
    }
    cloud.points.push_back(Point{records[i].v[0], records[i].v[1], records[i].v[2], records[i].v[3]});
    if (!raw_labels.empty()) kept_labels.push_back(raw_labels[i]);
  }
  if (!label_path.empty()) cloud.labels = std::move(kept_labels);
  return cloud;
}

void write_kitti_bin(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const Point& p : cloud.points) {
    const float v[4] = {p.x, p.y, p.z, p.intensity};
    out.write(reinterpret_cast<const char*>(v), sizeof(v));
  }
  if (!out) throw IoError("write failed on " + path.string());
}

void write_kitti_labels(std::span<const std::uint16_t> labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (std::uint16_t label : labels) {
    const std::uint32_t raw = label;
    out.write(reinterpret_cast<const char*>(&raw), sizeof(raw));
  }
  if (!out) throw IoError("write failed on " + path.string());
}

GroundTruthMask ground_truth_mask(const PointCloud& cloud) {
  if (!cloud.has_labels()) {
    throw ValidationError("ground_truth_mask: cloud has no labels");
  }
  const auto& labels = *cloud.labels;
  if (labels.size() != cloud.points.size()) {
    throw ValidationError("ground_truth_mask: label count does not match point count");
  }
  GroundTruthMask mask;
  mask.is_ground.resize(labels.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint16_t label = labels[i];
    const bool ground_class = label == kitti_labels::kRoad || label == kitti_labels::kParking ||
                              label == kitti_labels::kSidewalk ||
                              label == kitti_labels::kOtherGround ||
                              label == kitti_labels::kLaneMarking ||
                              label == kitti_labels::kTerrain;
    const bool low_vegetation = label == kitti_labels::kVegetation &&
                                static_cast<double>(cloud.points[i].z) < kVegetationGroundZ;
    mask.is_ground[i] = (ground_class || low_vegetation) ? 1 : 0;
  }
  return mask;
}

void write_colored_ply(const PointCloud& cloud, const SegmentationResult& result,
                       const GroundTruthMask* truth, const std::filesystem::path& path,
                       PlyFormat format) {
  const std::size_t n = cloud.points.size();
  if (truth && truth->is_ground.size() != n) {
    throw ValidationError("write_colored_ply: truth size does not match cloud");
  }
  std::vector<std::uint8_t> predicted(n, 0);
  for (std::uint32_t idx : result.ground_indices) predicted[idx] = 1;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  out << "ply\n"
      << "format "
      << (format == PlyFormat::ascii ? "ascii" : "binary_little_endian") << " 1.0\n"
      << "element vertex " << n << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";

  for (std::size_t i = 0; i < n; ++i) {
    Rgb color;
    if (truth) {
      const bool actual = truth->is_ground[i] != 0;
      if (predicted[i] && actual) color = kGreen;        // TP
      else if (!predicted[i] && actual) color = kBlue;   // FN
      else if (predicted[i] && !actual) color = kRed;    // FP
      else color = kGray;                                // TN
    } else {
      color = predicted[i] ? kYellow : kCyan;
    }
    const Point& p = cloud.points[i];
    if (format == PlyFormat::ascii) {
      char line[96];
      std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %u %u %u\n", p.x, p.y, p.z,
                    color.r, color.g, color.b);
      out << line;
    } else {
      const float xyz[3] = {p.x, p.y, p.z};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
      const unsigned char rgb[3] = {color.r, color.g, color.b};
      out.write(reinterpret_cast<const char*>(rgb), sizeof(rgb));
    }
  }
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace patchwork
