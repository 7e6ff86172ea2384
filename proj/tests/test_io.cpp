#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "patchwork/errors.hpp"
#include "patchwork/io.hpp"
#include "patchwork/pipeline.hpp"
#include "patchwork/synth.hpp"
#include "support/ply_reader.hpp"
#include "support/temp_dir.hpp"

using namespace patchwork;

namespace {

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("read_kitti_bin parses a single record") {
  test_support::TempDir dir("bin");
  const float record[4] = {1.0f, 2.0f, 3.0f, 0.5f};
  write_bytes(dir.file("a.bin"), record, sizeof(record));

  const PointCloud cloud = read_kitti_bin(dir.file("a.bin"));
  REQUIRE(cloud.size() == 1);
  CHECK(cloud.points[0].x == 1.0f);
  CHECK(cloud.points[0].y == 2.0f);
  CHECK(cloud.points[0].z == 3.0f);
  CHECK(cloud.points[0].intensity == 0.5f);
  CHECK(cloud.dropped_non_finite == 0);
}

TEST_CASE("read_kitti_bin handles empty files and rejects bad sizes") {
  test_support::TempDir dir("bin");
  write_bytes(dir.file("empty.bin"), nullptr, 0);
  CHECK(read_kitti_bin(dir.file("empty.bin")).size() == 0);

  char garbage[33] = {};
  write_bytes(dir.file("bad.bin"), garbage, sizeof(garbage));
  CHECK_THROWS_AS(read_kitti_bin(dir.file("bad.bin")), MalformedInputError);

  CHECK_THROWS_AS(read_kitti_bin(dir.file("missing.bin")), IoError);
}

TEST_CASE("read_kitti_bin drops non-finite records and counts them") {
  test_support::TempDir dir("bin");
  float records[8] = {1.0f, 2.0f, 3.0f, 0.0f, std::nanf(""), 0.0f, 0.0f, 0.0f};
  write_bytes(dir.file("nan.bin"), records, sizeof(records));

  const PointCloud cloud = read_kitti_bin(dir.file("nan.bin"));
  CHECK(cloud.size() == 1);
  CHECK(cloud.dropped_non_finite == 1);
}

TEST_CASE("kitti bin round-trips byte-exactly") {
  test_support::TempDir dir("bin");
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> dist(-50.0f, 50.0f);
  PointCloud cloud;
  for (int i = 0; i < 257; ++i) {
    cloud.points.push_back(Point{dist(rng), dist(rng), dist(rng), dist(rng)});
  }
  write_kitti_bin(cloud, dir.file("rt.bin"));
  const PointCloud reread = read_kitti_bin(dir.file("rt.bin"));
  write_kitti_bin(reread, dir.file("rt2.bin"));
  CHECK(read_bytes(dir.file("rt.bin")) == read_bytes(dir.file("rt2.bin")));
}

TEST_CASE("read_kitti_frame drops non-finite records from both streams in sync") {
  test_support::TempDir dir("frame");
  const float records[12] = {1, 0, -1.7f, 0, std::nanf(""), 0, 0, 0, 5, 0, -1.7f, 0};
  write_bytes(dir.file("f.bin"), records, sizeof(records));
  const std::uint32_t labels[3] = {40, 50, 70};
  write_bytes(dir.file("f.label"), labels, sizeof(labels));

  const PointCloud cloud = read_kitti_frame(dir.file("f.bin"), dir.file("f.label"));
  REQUIRE(cloud.size() == 2);
  CHECK(cloud.dropped_non_finite == 1);
  REQUIRE(cloud.has_labels());
  CHECK(*cloud.labels == std::vector<std::uint16_t>{40, 70});

  const PointCloud unlabeled = read_kitti_frame(dir.file("f.bin"));
  CHECK(unlabeled.size() == 2);
  CHECK_FALSE(unlabeled.has_labels());
}

TEST_CASE("read_kitti_labels extracts the semantic id from the low 16 bits") {
  test_support::TempDir dir("label");
  const std::uint32_t records[2] = {0x00010028u, 0x00000046u};

  write_bytes(dir.file("a.label"), records, 4);
  CHECK(read_kitti_labels(dir.file("a.label"), 1) == std::vector<std::uint16_t>{40});

  write_bytes(dir.file("b.label"), records, 8);
  CHECK(read_kitti_labels(dir.file("b.label"), 2) == std::vector<std::uint16_t>{40, 70});

  // 8 bytes vs 1 expected point
  CHECK_THROWS_AS(read_kitti_labels(dir.file("b.label"), 1), MalformedInputError);
}

TEST_CASE("ground_truth_mask applies the class list and the vegetation height rule") {
  PointCloud cloud;
  cloud.points = {Point{0, 0, -1.7f, 0}, Point{0, 0, 0.5f, 0}, Point{0, 0, -1.5f, 0},
                  Point{0, 0, -1.3f, 0}, Point{0, 0, -1.7f, 0}};
  cloud.labels = std::vector<std::uint16_t>{
      kitti_labels::kRoad, kitti_labels::kVegetation, kitti_labels::kVegetation,
      kitti_labels::kVegetation,  // exactly at the cut: strictly-below applies
      kitti_labels::kBuilding};

  const GroundTruthMask mask = ground_truth_mask(cloud);
  CHECK(mask.is_ground[0] == 1);  // road
  CHECK(mask.is_ground[1] == 0);  // vegetation above the cut
  CHECK(mask.is_ground[2] == 1);  // vegetation below -1.3
  CHECK(mask.is_ground[3] == 0);  // z == -1.3 exactly is not below
  CHECK(mask.is_ground[4] == 0);  // building
}

TEST_CASE("ground_truth_mask requires labels and is permutation-equivariant") {
  PointCloud unlabeled;
  unlabeled.points = {Point{}};
  CHECK_THROWS_AS(ground_truth_mask(unlabeled), ValidationError);

  const PointCloud scene = synth_scene(SceneSpec{.ground_points = 500}, 3);
  const GroundTruthMask mask = ground_truth_mask(scene);

  PointCloud reversed;
  reversed.labels = std::vector<std::uint16_t>{};
  for (std::size_t i = scene.size(); i-- > 0;) {
    reversed.points.push_back(scene.points[i]);
    reversed.labels->push_back((*scene.labels)[i]);
  }
  const GroundTruthMask reversed_mask = ground_truth_mask(reversed);
  for (std::size_t i = 0; i < scene.size(); ++i) {
    CHECK(mask.is_ground[i] == reversed_mask.is_ground[scene.size() - 1 - i]);
  }
}

TEST_CASE("write_colored_ply color map") {
  test_support::TempDir dir("ply");
  PointCloud cloud;
  cloud.points = {Point{1, 2, 3, 0}};
  SegmentationResult result;
  result.ground_indices = {0};

  GroundTruthMask truth_ground{{1}};
  GroundTruthMask truth_nonground{{0}};

  write_colored_ply(cloud, result, &truth_ground, dir.file("tp.ply"));
  auto tp = test_support::read_ply(dir.file("tp.ply").string());
  REQUIRE(tp.size() == 1);
  CHECK(tp[0].g == 255);  // TP green
  CHECK(tp[0].r == 0);

  write_colored_ply(cloud, result, &truth_nonground, dir.file("fp.ply"));
  auto fp = test_support::read_ply(dir.file("fp.ply").string());
  CHECK(fp[0].r == 255);  // FP red
  CHECK(fp[0].g == 0);

  write_colored_ply(cloud, result, nullptr, dir.file("yellow.ply"));
  auto yellow = test_support::read_ply(dir.file("yellow.ply").string());
  CHECK(yellow[0].r == 255);  // predicted ground, no truth: yellow
  CHECK(yellow[0].g == 255);
  CHECK(yellow[0].b == 0);

  SegmentationResult none;
  none.nonground_indices = {0};
  write_colored_ply(cloud, none, &truth_ground, dir.file("fn.ply"));
  CHECK(test_support::read_ply(dir.file("fn.ply").string())[0].b == 255);  // FN blue
}

TEST_CASE("ply round-trip: binary exact, ascii to 6 significant digits") {
  test_support::TempDir dir("ply");
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> dist(-80.0f, 80.0f);
  PointCloud cloud;
  SegmentationResult result;
  for (std::uint32_t i = 0; i < 100; ++i) {
    cloud.points.push_back(Point{dist(rng), dist(rng), dist(rng), 0});
    if (i % 2 == 0) result.ground_indices.push_back(i);
    else result.nonground_indices.push_back(i);
  }

  write_colored_ply(cloud, result, nullptr, dir.file("b.ply"), PlyFormat::binary_little_endian);
  const auto binary = test_support::read_ply(dir.file("b.ply").string());
  REQUIRE(binary.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(binary[i].x == cloud.points[i].x);
    CHECK(binary[i].y == cloud.points[i].y);
    CHECK(binary[i].z == cloud.points[i].z);
  }

  write_colored_ply(cloud, result, nullptr, dir.file("a.ply"), PlyFormat::ascii);
  const auto ascii = test_support::read_ply(dir.file("a.ply").string());
  REQUIRE(ascii.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float expect = cloud.points[i].x;
    CHECK(std::abs(ascii[i].x - expect) <= std::abs(expect) * 1e-6f + 1e-6f);
  }
}

TEST_CASE("synth_scene: flat noiseless scene sits exactly on the plane") {
  SceneSpec spec;
  spec.ground_points = 200;
  spec.sigma_z = 0.0;
  const PointCloud cloud = synth_scene(spec, 1);
  REQUIRE(cloud.size() == 200);
  for (const Point& p : cloud.points) CHECK(p.z == static_cast<float>(-spec.sensor_height));
  for (std::uint16_t label : *cloud.labels) CHECK(label == kitti_labels::kRoad);
}

TEST_CASE("synth_scene is bitwise deterministic for a fixed seed") {
  SceneSpec spec;
  spec.ground_points = 5000;
  spec.wall_points = 300;
  spec.roof_points = 200;
  spec.ramp_points = 200;
  spec.outlier_points = 20;
  const PointCloud a = synth_scene(spec, 42);
  const PointCloud b = synth_scene(spec, 42);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.points.data(), b.points.data(), a.size() * sizeof(Point)) == 0);
  CHECK(*a.labels == *b.labels);

  const PointCloud c = synth_scene(spec, 43);
  CHECK(std::memcmp(a.points.data(), c.points.data(), a.size() * sizeof(Point)) != 0);
}

TEST_CASE("synth_scene label-conditional geometry invariants") {
  SceneSpec spec;
  spec.ground_points = 4000;
  spec.wall_points = 500;
  spec.roof_points = 300;
  spec.ramp_points = 300;
  spec.outlier_points = 30;
  const PointCloud cloud = synth_scene(spec, 9);

  const float ground_z = static_cast<float>(-spec.sensor_height);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud.points[i];
    switch ((*cloud.labels)[i]) {
      case kitti_labels::kRoad:
        CHECK(std::abs(p.z - ground_z) <= 3.0f * static_cast<float>(spec.sigma_z) + 1e-6f);
        break;
      case kitti_labels::kBuilding:
        CHECK(std::abs(p.x - spec.wall_x) <= spec.wall_thickness + 1e-6);
        CHECK(p.z >= spec.wall_z0 - 1e-6);
        CHECK(p.z <= spec.wall_z1 + 1e-6);
        break;
      case kitti_labels::kCar:
        CHECK(std::abs(p.z - spec.roof_z) <= 3.0 * spec.roof_sigma_z + 1e-6);
        break;
      case kitti_labels::kTerrain: {
        const double surface = -spec.sensor_height + spec.ramp_grade * (p.x - spec.ramp_x0);
        CHECK(std::abs(p.z - surface) <= 3.0 * spec.sigma_z + 1e-5);
        break;
      }
      case kitti_labels::kOutlier:
        CHECK(p.z < spec.outlier_z1 + 1e-6);
        CHECK(std::hypot(p.x - spec.outlier_x, p.y - spec.outlier_y) <= spec.outlier_radius + 1e-6);
        break;
      default:
        FAIL("unexpected label");
    }
  }
}

TEST_CASE("synth_scene rejects non-finite specs") {
  SceneSpec spec;
  spec.wall_x = std::nan("");
  CHECK_THROWS_AS(synth_scene(spec, 0), ValidationError);
}
