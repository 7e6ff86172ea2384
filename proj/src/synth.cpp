#include "patchwork/synth.hpp"

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>
#include <utility>

#include "patchwork/detail/rng.hpp"
#include "patchwork/errors.hpp"

namespace patchwork {

namespace {

bool in_rect(double x, double y, double x0, double x1, double y0, double y1) {
  return x >= x0 && x <= x1 && y >= y0 && y <= y1;
}

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(std::string("scene: non-finite value for ") + name);
}

}  // namespace

void SceneSpec::validate() const {
  for (const auto& [v, name] : std::initializer_list<std::pair<double, const char*>>{
           {sensor_height, "sensor_height"}, {ground_r_min, "ground_r_min"},
           {ground_r_max, "ground_r_max"},   {sigma_z, "sigma_z"},
           {ramp_grade, "ramp_grade"},       {ramp_x0, "ramp_x0"},
           {ramp_x1, "ramp_x1"},             {ramp_y0, "ramp_y0"},
           {ramp_y1, "ramp_y1"},             {wall_x, "wall_x"},
           {wall_y0, "wall_y0"},             {wall_y1, "wall_y1"},
           {wall_z0, "wall_z0"},             {wall_z1, "wall_z1"},
           {wall_thickness, "wall_thickness"}, {roof_x0, "roof_x0"},
           {roof_x1, "roof_x1"},             {roof_y0, "roof_y0"},
           {roof_y1, "roof_y1"},             {roof_z, "roof_z"},
           {roof_sigma_z, "roof_sigma_z"},   {outlier_x, "outlier_x"},
           {outlier_y, "outlier_y"},         {outlier_radius, "outlier_radius"},
           {outlier_z0, "outlier_z0"},       {outlier_z1, "outlier_z1"}}) {
    check_finite(v, name);
  }
  if (ground_points <= 0) throw ValidationError("scene: ground_points must be > 0");
  if (ramp_points < 0 || wall_points < 0 || roof_points < 0 || outlier_points < 0) {
    throw ValidationError("scene: point budgets must be >= 0");
  }
  if (!(ground_r_min > 0.0) || !(ground_r_max > ground_r_min)) {
    throw ValidationError("scene: require 0 < ground_r_min < ground_r_max");
  }
  if (sigma_z < 0.0 || roof_sigma_z < 0.0) throw ValidationError("scene: sigma_z must be >= 0");
  if (!(sensor_height > 0.0)) throw ValidationError("scene: sensor_height must be > 0");
}

PointCloud synth_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  detail::Rng rng(seed);

  PointCloud cloud;
  cloud.frame_id = "synth";
  std::vector<std::uint16_t> labels;
  const auto emit = [&](double x, double y, double z, std::uint16_t label) {
    cloud.points.push_back(Point{static_cast<float>(x), static_cast<float>(y),
                                 static_cast<float>(z), 0.0f});
    labels.push_back(label);
  };

  const double ground_z = -spec.sensor_height;
  const double r_min_sq = spec.ground_r_min * spec.ground_r_min;
  const double r_max_sq = spec.ground_r_max * spec.ground_r_max;

  const bool ramp_on = spec.ramp_points > 0;
  const bool roof_on = spec.roof_points > 0;

  // Ground annulus, uniform in area. Draws that land in a carved footprint
  // are consumed but not emitted so the stream stays seed-stable.
  for (int i = 0; i < spec.ground_points; ++i) {
    const double rho = std::sqrt(rng.uniform(r_min_sq, r_max_sq));
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double x = rho * std::cos(theta);
    const double y = rho * std::sin(theta);
    const double z = ground_z + rng.clamped_gaussian(spec.sigma_z);
    if (ramp_on && in_rect(x, y, spec.ramp_x0, spec.ramp_x1, spec.ramp_y0, spec.ramp_y1)) continue;
    if (roof_on && in_rect(x, y, spec.roof_x0, spec.roof_x1, spec.roof_y0, spec.roof_y1)) continue;
    emit(x, y, z, kitti_labels::kRoad);
  }

  for (int i = 0; i < spec.ramp_points; ++i) {
    const double x = rng.uniform(spec.ramp_x0, spec.ramp_x1);
    const double y = rng.uniform(spec.ramp_y0, spec.ramp_y1);
    const double z = ground_z + spec.ramp_grade * (x - spec.ramp_x0) + rng.clamped_gaussian(spec.sigma_z);
    emit(x, y, z, kitti_labels::kTerrain);
  }

  for (int i = 0; i < spec.wall_points; ++i) {
    const double x = spec.wall_x + rng.uniform(-spec.wall_thickness, spec.wall_thickness);
    const double y = rng.uniform(spec.wall_y0, spec.wall_y1);
    const double z = rng.uniform(spec.wall_z0, spec.wall_z1);
    emit(x, y, z, kitti_labels::kBuilding);
  }

  for (int i = 0; i < spec.roof_points; ++i) {
    const double x = rng.uniform(spec.roof_x0, spec.roof_x1);
    const double y = rng.uniform(spec.roof_y0, spec.roof_y1);
    const double z = spec.roof_z + rng.clamped_gaussian(spec.roof_sigma_z);
    emit(x, y, z, kitti_labels::kCar);
  }

  for (int i = 0; i < spec.outlier_points; ++i) {
    const double rho = spec.outlier_radius * std::sqrt(rng.uniform01());
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double x = spec.outlier_x + rho * std::cos(theta);
    const double y = spec.outlier_y + rho * std::sin(theta);
    const double z = rng.uniform(spec.outlier_z0, spec.outlier_z1);
    emit(x, y, z, kitti_labels::kOutlier);
  }

  cloud.labels = std::move(labels);
  return cloud;
}

}  // namespace patchwork
