#ifndef PATCHWORK_CZM_HPP_
#define PATCHWORK_CZM_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "patchwork/types.hpp"

namespace patchwork {

/// Concentric zone layout: four zones, each an N_r x N_theta ring/sector grid
/// with its own resolution. Defaults follow the HDL-64E setup. num_zones is
/// pinned to 4: the interior boundary fractions below are defined for
/// exactly four zones.
struct ZoneConfig {
  int num_zones = 4;
  std::array<int, 4> rings{2, 4, 4, 4};
  std::array<int, 4> sectors{16, 32, 54, 32};
  double l_min = 2.7;
  double l_max = 80.0;

  void validate() const;  // throws ValidationError
};

/// Radial zone edges [L_min_1, L_min_2, L_min_3, L_min_4, L_max_4].
/// The three interior boundaries split [l_min, l_max] at 1/8, 1/4 and 1/2.
std::array<double, 5> zone_boundaries(const ZoneConfig& config);

/// 1-based bin coordinates: zone m, ring i, sector j.
struct BinCoord {
  int zone = 0;
  int ring = 0;
  int sector = 0;

  bool operator==(const BinCoord&) const = default;
};

class ZoneModel {
 public:
  struct ZoneLayout {
    double r_min = 0.0;
    double r_max = 0.0;
    int num_rings = 0;
    int num_sectors = 0;
  };

  /// Empty concentric model (four zones, boundaries from the config).
  static ZoneModel concentric(const ZoneConfig& config);

  /// Empty single-zone grid over [0, l_max) with uniform ring and sector
  /// widths. Interface-compatible with the concentric model.
  static ZoneModel uniform_polar(int num_rings, int num_sectors, double l_max);

  /// Maps a point to its bin, or nullopt when rho falls outside the radial
  /// coverage. Intervals are half-open and lower-inclusive; theta == +pi
  /// wraps to -pi.
  std::optional<BinCoord> bin_index(double x, double y) const;

  /// Distributes cloud indices into bins. Out-of-range (and non-finite)
  /// indices go to `unbinned()`.
  void assign(const PointCloud& cloud);

  int num_zones() const { return static_cast<int>(zones_.size()); }
  const ZoneLayout& zone(int zone_idx) const { return zones_[static_cast<std::size_t>(zone_idx - 1)]; }
  std::size_t total_bins() const { return bins_.size(); }

  const std::vector<std::uint32_t>& bin(const BinCoord& coord) const {
    return bins_[flat_index(coord)];
  }
  const std::vector<std::uint32_t>& bin(std::size_t flat) const { return bins_[flat]; }
  BinCoord coord_of(std::size_t flat) const;
  std::size_t flat_index(const BinCoord& coord) const;

  const std::vector<std::uint32_t>& unbinned() const { return unbinned_; }

  /// Zone edges; size num_zones() + 1.
  const std::vector<double>& boundaries() const { return boundaries_; }

 private:
  std::vector<ZoneLayout> zones_;
  std::vector<double> boundaries_;
  std::vector<std::size_t> zone_offsets_;  // flat index of each zone's first bin
  std::vector<std::vector<std::uint32_t>> bins_;
  std::vector<std::uint32_t> unbinned_;
};

/// Builds the concentric zone model and assigns every point of the cloud.
ZoneModel build_zone_model(const PointCloud& cloud, const ZoneConfig& config);

/// Builds the uniform polar baseline grid and assigns every point.
ZoneModel uniform_polar_model(const PointCloud& cloud, int num_rings, int num_sectors, double l_max);

}  // namespace patchwork

#endif  // PATCHWORK_CZM_HPP_
