#include "patchwork/gle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "patchwork/errors.hpp"

namespace patchwork {

void GleParams::validate() const {
  const double rad = theta_tau_rad();
  if (!(rad > 0.0) || !(rad < std::numbers::pi / 2.0)) {
    throw ValidationError("gle: theta_tau must lie in (0, 90) degrees");
  }
  if (!(zeta > 1.0)) throw ValidationError("gle: zeta must be > 1");
  if (!(l_tau > 0.0) || !std::isfinite(l_tau)) throw ValidationError("gle: l_tau must be finite and > 0");
  for (const auto& tau : sigma_tau) {
    if (tau && !(*tau > 0.0)) throw ValidationError("gle: sigma_tau values must be > 0");
  }
  if (!(kappa_lambda > 0.0)) throw ValidationError("gle: kappa_lambda must be > 0");
  if (!std::isfinite(kappa_c1) || !std::isfinite(kappa_c2) || !(kappa_c2 >= 0.0)) {
    throw ValidationError("gle: kappa_c1 must be finite, kappa_c2 finite and >= 0");
  }
  if (!(sensor_height > 0.0)) throw ValidationError("gle: sensor_height must be > 0");
  if (!(l_min > 0.0)) throw ValidationError("gle: l_min must be > 0");
}

double GleParams::theta_tau_rad() const { return theta_tau_deg * std::numbers::pi / 180.0; }

double GleParams::uprightness_threshold() const {
  return std::cos(std::numbers::pi / 2.0 - theta_tau_rad());
}

double uprightness(const Eigen::Vector3d& v3, double theta_tau_rad) {
  return v3.z() > std::cos(std::numbers::pi / 2.0 - theta_tau_rad) ? 1.0 : 0.0;
}

double kappa(double r, const GleParams& params) {
  return -params.sensor_height + params.kappa_c1 +
         params.kappa_c2 * std::exp((r - params.l_min) / params.kappa_lambda);
}

double elevation_factor(double mean_z, double r, const GleParams& params) {
  if (r >= params.l_tau) return 1.0;
  return 1.0 / (1.0 + std::exp(mean_z - kappa(r, params)));
}

double flatness_factor(double psi, double sigma, int zone_idx, const GleParams& params) {
  if (psi >= 0.5) return 1.0;
  if (zone_idx < 1 || zone_idx > 4 || !params.sigma_tau[static_cast<std::size_t>(zone_idx - 1)]) {
    throw ValidationError("gle: no sigma_tau configured for zone " + std::to_string(zone_idx) +
                          " but l_tau lets its bins reach the flatness branch");
  }
  const double tau = *params.sigma_tau[static_cast<std::size_t>(zone_idx - 1)];
  const double scale = params.flatness_scale == GleParams::FlatnessScale::tau ? tau : 1.0;
  const double value = params.zeta * std::exp(-(sigma - tau) / scale);
  return std::clamp(value, 0.0, params.zeta);
}

BinVerdict evaluate_bin(const BinFeatures& features, const GleParams& params) {
  BinVerdict verdict;
  verdict.features = features;
  verdict.phi = uprightness(features.v3, params.theta_tau_rad());
  verdict.psi = elevation_factor(features.mean_z, features.r, params);
  verdict.varphi = flatness_factor(verdict.psi, features.sigma, features.zone_idx, params);
  verdict.likelihood = verdict.phi * verdict.psi * verdict.varphi;
  verdict.is_ground = verdict.likelihood > 0.5;
  return verdict;
}

}  // namespace patchwork
