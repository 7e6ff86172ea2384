#include "patchwork/czm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "patchwork/errors.hpp"

namespace patchwork {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Canonical ring boundary of ring index k (0-based count from the zone's
// inner edge): offset k * dl / n_rings. bin_index and the test oracles must
// evaluate the same expression so that boundary points agree exactly.
inline double ring_edge(int k, double dl, int num_rings) {
  return (static_cast<double>(k) * dl) / static_cast<double>(num_rings);
}

inline double sector_edge(int k, int num_sectors) {
  return (static_cast<double>(k) * kTwoPi) / static_cast<double>(num_sectors) - kPi;
}

}  // namespace

void ZoneConfig::validate() const {
  if (num_zones != 4) {
    throw ValidationError("czm: num_zones must be 4 (the zone boundary fractions are "
                          "defined for exactly four zones)");
  }
  if (!(l_min > 0.0) || !(l_max > l_min) || !std::isfinite(l_min) || !std::isfinite(l_max)) {
    throw ValidationError("czm: require 0 < l_min < l_max and finite radii");
  }
  for (int n : rings) {
    if (n < 1) throw ValidationError("czm: every ring count must be >= 1");
  }
  for (int n : sectors) {
    if (n < 1) throw ValidationError("czm: every sector count must be >= 1");
  }
}

std::array<double, 5> zone_boundaries(const ZoneConfig& config) {
  config.validate();
  const double lo = config.l_min;
  const double hi = config.l_max;
  return {lo,
          (7.0 * lo + hi) / 8.0,
          (3.0 * lo + hi) / 4.0,
          (lo + hi) / 2.0,
          hi};
}

ZoneModel ZoneModel::concentric(const ZoneConfig& config) {
  const auto edges = zone_boundaries(config);
  ZoneModel model;
  model.boundaries_.assign(edges.begin(), edges.end());
  std::size_t offset = 0;
  for (int m = 0; m < 4; ++m) {
    ZoneLayout layout;
    layout.r_min = edges[static_cast<std::size_t>(m)];
    layout.r_max = edges[static_cast<std::size_t>(m) + 1];
    layout.num_rings = config.rings[static_cast<std::size_t>(m)];
    layout.num_sectors = config.sectors[static_cast<std::size_t>(m)];
    model.zones_.push_back(layout);
    model.zone_offsets_.push_back(offset);
    offset += static_cast<std::size_t>(layout.num_rings) * static_cast<std::size_t>(layout.num_sectors);
  }
  model.bins_.resize(offset);
  return model;
}

ZoneModel ZoneModel::uniform_polar(int num_rings, int num_sectors, double l_max) {
  if (num_rings < 1 || num_sectors < 1) {
    throw ValidationError("uniform polar grid: ring/sector counts must be >= 1");
  }
  if (!(l_max > 0.0) || !std::isfinite(l_max)) {
    throw ValidationError("uniform polar grid: l_max must be finite and > 0");
  }
  ZoneModel model;
  ZoneLayout layout{0.0, l_max, num_rings, num_sectors};
  model.zones_.push_back(layout);
  model.boundaries_ = {0.0, l_max};
  model.zone_offsets_ = {0};
  model.bins_.resize(static_cast<std::size_t>(num_rings) * static_cast<std::size_t>(num_sectors));
  return model;
}

std::optional<BinCoord> ZoneModel::bin_index(double x, double y) const {
  const double rho = std::hypot(x, y);
  if (!std::isfinite(rho)) return std::nullopt;
  if (rho < boundaries_.front() || rho >= boundaries_.back()) return std::nullopt;

  int zone = 0;
  for (std::size_t m = 0; m + 1 < boundaries_.size(); ++m) {
    if (rho < boundaries_[m + 1]) {
      zone = static_cast<int>(m) + 1;
      break;
    }
  }
  const ZoneLayout& zl = zones_[static_cast<std::size_t>(zone - 1)];
  const double dl = zl.r_max - zl.r_min;
  const double off = rho - zl.r_min;

  int ring = static_cast<int>(std::floor(off / dl * zl.num_rings));
  ring = std::max(0, std::min(ring, zl.num_rings - 1));
  // Snap to the canonical half-open intervals; the floor above can be off by
  // one ulp near an edge.
  while (ring > 0 && off < ring_edge(ring, dl, zl.num_rings)) --ring;
  while (ring + 1 < zl.num_rings && off >= ring_edge(ring + 1, dl, zl.num_rings)) ++ring;

  double theta = std::atan2(y, x);
  if (theta == kPi) theta = -kPi;
  int sector = static_cast<int>(std::floor((theta + kPi) / kTwoPi * zl.num_sectors));
  sector = std::max(0, std::min(sector, zl.num_sectors - 1));
  while (sector > 0 && theta < sector_edge(sector, zl.num_sectors)) --sector;
  while (sector + 1 < zl.num_sectors && theta >= sector_edge(sector + 1, zl.num_sectors)) ++sector;

  return BinCoord{zone, ring + 1, sector + 1};
}

void ZoneModel::assign(const PointCloud& cloud) {
  for (auto& bin : bins_) bin.clear();
  unbinned_.clear();
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point& p = cloud.points[i];
    const auto coord = bin_index(p.x, p.y);
    if (coord) {
      bins_[flat_index(*coord)].push_back(static_cast<std::uint32_t>(i));
    } else {
      unbinned_.push_back(static_cast<std::uint32_t>(i));
    }
  }
}

std::size_t ZoneModel::flat_index(const BinCoord& coord) const {
  const ZoneLayout& zl = zones_[static_cast<std::size_t>(coord.zone - 1)];
  return zone_offsets_[static_cast<std::size_t>(coord.zone - 1)] +
         static_cast<std::size_t>(coord.ring - 1) * static_cast<std::size_t>(zl.num_sectors) +
         static_cast<std::size_t>(coord.sector - 1);
}

BinCoord ZoneModel::coord_of(std::size_t flat) const {
  for (std::size_t m = zones_.size(); m-- > 0;) {
    if (flat >= zone_offsets_[m]) {
      const ZoneLayout& zl = zones_[m];
      const std::size_t local = flat - zone_offsets_[m];
      return BinCoord{static_cast<int>(m) + 1,
                      static_cast<int>(local / static_cast<std::size_t>(zl.num_sectors)) + 1,
                      static_cast<int>(local % static_cast<std::size_t>(zl.num_sectors)) + 1};
    }
  }
  return BinCoord{};
}

ZoneModel build_zone_model(const PointCloud& cloud, const ZoneConfig& config) {
  ZoneModel model = ZoneModel::concentric(config);
  model.assign(cloud);
  return model;
}

ZoneModel uniform_polar_model(const PointCloud& cloud, int num_rings, int num_sectors, double l_max) {
  ZoneModel model = ZoneModel::uniform_polar(num_rings, num_sectors, l_max);
  model.assign(cloud);
  return model;
}

}  // namespace patchwork
