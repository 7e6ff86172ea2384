#ifndef PATCHWORK_GLE_HPP_
#define PATCHWORK_GLE_HPP_

#include <Eigen/Dense>
#include <array>
#include <optional>

namespace patchwork {

/// Ground-likelihood parameters. The elevation midpoint kappa(r) and the
/// uprightness/flatness thresholds live here; sensor_height and l_min mirror
/// the values used by the rest of the pipeline.
struct GleParams {
  enum class FlatnessScale {
    tau,  // exponent divided by the zone's sigma_tau
    raw,  // literal exponent (scale 1)
  };

  double theta_tau_deg = 45.0;
  double l_tau = 22.025;    // range beyond which elevation is not judged
  bool l_tau_auto = true;   // recomputed from the zone boundaries when true
  std::array<std::optional<double>, 4> sigma_tau{0.00012, 0.0002, std::nullopt, std::nullopt};
  double zeta = 3.0;  // flatness gain, > 1
  FlatnessScale flatness_scale = FlatnessScale::tau;
  double kappa_c1 = 0.2;
  double kappa_c2 = 0.1;
  double kappa_lambda = 8.0;
  double sensor_height = 1.723;
  double l_min = 2.7;

  void validate() const;  // throws ValidationError

  double theta_tau_rad() const;
  /// cos(pi/2 - theta_tau): the strict lower bound on v3 . z.
  double uprightness_threshold() const;
};

/// Per-bin features the likelihood is evaluated on, all derived from the
/// bin's final ground-candidate set and fitted plane.
struct BinFeatures {
  Eigen::Vector3d v3{0.0, 0.0, 1.0};  // unit, sign-canonicalized upstream
  double mean_z = 0.0;
  double r = 0.0;      // XY distance from the origin to the candidate centroid
  double sigma = 0.0;  // surface variable, in [0, 1/3]
  int zone_idx = 1;
};

struct BinVerdict {
  BinFeatures features;
  double phi = 0.0;         // uprightness, {0, 1}
  double psi = 0.0;         // elevation, (0, 1]
  double varphi = 0.0;      // flatness, [0, zeta]
  double likelihood = 0.0;  // phi * psi * varphi
  bool is_ground = false;   // likelihood > 0.5, strict
};

/// 1 iff the angle between v3 and the X-Y plane exceeds theta_tau (strict).
double uprightness(const Eigen::Vector3d& v3, double theta_tau_rad);

/// Elevation midpoint: -sensor_height + c1 + c2 * exp((r - l_min) / lambda).
/// Strictly increasing in r.
double kappa(double r, const GleParams& params);

/// Conditional logistic elevation factor; exactly 1 once r >= l_tau.
double elevation_factor(double mean_z, double r, const GleParams& params);

/// Flatness factor: zeta * exp(-(sigma - sigma_tau_m) / scale) when the
/// elevation factor fell below 0.5, clamped to [0, zeta]; 1 otherwise.
/// Throws ValidationError when a zone without a configured sigma_tau reaches
/// the psi < 0.5 branch (misconfigured l_tau).
double flatness_factor(double psi, double sigma, int zone_idx, const GleParams& params);

/// Full per-bin decision: likelihood = phi * psi * varphi, ground iff > 0.5.
BinVerdict evaluate_bin(const BinFeatures& features, const GleParams& params);

}  // namespace patchwork

#endif  // PATCHWORK_GLE_HPP_
