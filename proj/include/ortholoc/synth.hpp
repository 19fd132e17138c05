#pragma once

#include <cstdint>
#include <vector>

#include "ortholoc/image.hpp"
#include "ortholoc/trajectory.hpp"
#include "ortholoc/types.hpp"

namespace ortholoc {

/// Photometric + structural degradation applied to extracted local maps:
/// affine intensity shift, additive Gaussian pixel noise, and disk-shaped
/// invalid "hollow" regions stamped preferentially toward the borders.
struct DegradationParams {
  double gain = 1.0;
  double bias = 0.0;
  double noise_sigma = 0.0;   // intensity units
  int hollow_count = 0;
  int hollow_radius_px = 0;
  double edge_hollow_bias = 0.0;  // in [0,1]: probability a hollow is border-seeking

  static DegradationParams none() { return {}; }

  /// Default degradation used by the evaluation experiments: a mild style
  /// shift plus heavy border contamination, the regime where difference-based
  /// matching chases hollows while center-weighted correlation survives.
  static DegradationParams aerial_ground();
};

/// Parameters of the procedural aerial scene generator.
struct SceneSpec {
  std::uint64_t seed = 1;
  int width_px = 512;
  int height_px = 512;
  int road_count = 2;
  double marking_density = 0.7;
  int texture_scale = 24;  // value-noise lattice spacing in pixels
};

/// Procedural grayscale aerial map: smooth value-noise ground texture, dark
/// road bands, bright dashed lane markings, and circular well covers.
/// Deterministic under the scene seed; pixel values are integers.
OrthoMap gen_global(const SceneSpec& spec);

/// Crops the m x n window centered on `pose` (rotated by pose.heading,
/// sampled bilinearly) out of the global map, then applies the degradation
/// model. Throws if any sample of the rotated window leaves the map.
OrthoMap extract_local(const OrthoMap& global, const Pose2D& pose, int m, int n,
                       const DegradationParams& degrade, std::uint64_t seed);

struct TrajectorySample {
  Trajectory truth;
  std::vector<OdometryDelta> odometry;  // one delta per frame transition
};

/// Smooth bounded-curvature path inside the map (keeping `margin_m` meters
/// from the border) plus per-step odometry measurements: the true robot-frame
/// deltas perturbed by zero-mean noise (sigma_pos per axis, sigma_rot on the
/// rotation). Deterministic under seed.
TrajectorySample gen_trajectory(const SceneSpec& spec, int n_frames, double step,
                                const NoiseParams& odom_noise, std::uint64_t seed,
                                double margin_m);

/// Sum of absolute differences restricted to pixels valid in both maps
/// (evaluation utility; the matching scorers themselves ignore masks).
double masked_sad(const OrthoMap& a, const OrthoMap& b);

}  // namespace ortholoc
