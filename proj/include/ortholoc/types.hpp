#pragma once

#include <cmath>
#include <numbers>

namespace ortholoc {

/// Planar robot pose: position in meters, heading in radians, kept in [-pi, pi).
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  /// Wraps an angle into [-pi, pi).
  static double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = a - two_pi * std::floor((a + std::numbers::pi) / two_pi);
    // floor rounding can land exactly on +pi for inputs like pi itself
    if (w >= std::numbers::pi) w -= two_pi;
    return w;
  }

  Pose2D normalized() const { return {x, y, wrap_angle(heading)}; }
};

/// Incremental ego-motion in the robot frame: forward, left, rotation.
struct OdometryDelta {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

inline constexpr double kTwoDegrees = std::numbers::pi / 90.0;

/// Noise configuration for the particle filter.
/// sigma_pos / sigma_rot apply during resampling, motion_sigma_* during the
/// odometry update. Defaults follow the resampling values (0.1 m, 2 deg).
struct NoiseParams {
  double sigma_pos = 0.1;
  double sigma_rot = kTwoDegrees;
  double motion_sigma_pos = 0.1;
  double motion_sigma_rot = kTwoDegrees;
};

}  // namespace ortholoc
