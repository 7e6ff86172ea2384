#ifndef PATCHWORK_SYNTH_HPP_
#define PATCHWORK_SYNTH_HPP_

#include <cstdint>

#include "patchwork/types.hpp"

namespace patchwork {

/// Labeled synthetic scene: a flat ground annulus plus optional primitives.
/// Every primitive is enabled by its point budget; zero points disables it.
/// Vertical noise is a clamped Gaussian (+-3 sigma), so label-conditional
/// geometry bounds hold for every generated point.
struct SceneSpec {
  double sensor_height = 1.723;  // ground surface sits at z = -sensor_height

  // Flat annulus, labeled road. The ramp and roof footprints are carved out.
  int ground_points = 50000;
  double ground_r_min = 2.7;
  double ground_r_max = 80.0;
  double sigma_z = 0.02;

  // Inclined rectangle, labeled terrain: z rises with x at `ramp_grade`.
  int ramp_points = 0;
  double ramp_grade = 0.15;
  double ramp_x0 = 14.0, ramp_x1 = 21.0;
  double ramp_y0 = -4.0, ramp_y1 = 4.0;

  // Vertical plane at x = wall_x, labeled building. The default clearance
  // above the ground keeps the wall bottom outside both the seed window
  // (z_init + z_seed) and the plane margin m_d of the ground fit.
  int wall_points = 0;
  double wall_x = 10.0;
  double wall_y0 = -6.0, wall_y1 = 6.0;
  double wall_z0 = -1.15, wall_z1 = 0.8;
  double wall_thickness = 0.05;

  // Horizontal elevated rectangle ("car roof"), labeled car. The ground
  // beneath it is occluded.
  int roof_points = 0;
  double roof_x0 = 6.9, roof_x1 = 12.4;
  double roof_y0 = -0.1, roof_y1 = 4.8;
  double roof_z = -0.2;
  double roof_sigma_z = 0.05;

  // Below-ground reflection noise: a disc of points under the true surface,
  // labeled outlier.
  int outlier_points = 0;
  double outlier_x = 5.55, outlier_y = 1.10;
  double outlier_radius = 0.8;
  double outlier_z0 = -2.9, outlier_z1 = -2.7;

  void validate() const;  // throws ValidationError
};

/// Deterministic for a fixed (spec, seed) pair. The returned cloud carries
/// labels; ground-truth derivation goes through ground_truth_mask().
PointCloud synth_scene(const SceneSpec& spec, std::uint64_t seed);

}  // namespace patchwork

#endif  // PATCHWORK_SYNTH_HPP_
