#pragma once

#include <cstdint>
#include <vector>

#include "ortholoc/image.hpp"
#include "ortholoc/kernel.hpp"
#include "ortholoc/matching.hpp"
#include "ortholoc/rng.hpp"
#include "ortholoc/trajectory.hpp"
#include "ortholoc/types.hpp"

namespace ortholoc {

/// Pose hypothesis with an importance weight.
struct Particle {
  Pose2D pose;
  double weight = 0.0;
};

/// Particle set plus the pseudo-random stream that drives it. All filter
/// steps are value-in / value-out; determinism follows from the seed alone.
struct ParticleSwarm {
  std::vector<Particle> particles;
  SplitMix64 rng;

  double weight_sum() const;
};

/// Floor applied to observation confidences so a swarm never collapses to
/// all-zero weights (also the confidence of out-of-map particles).
inline constexpr double kMinConfidence = 1e-6;

enum class Estimator { kWeightedMean, kBestParticle };

/// Draws n particles uniformly in the axis-aligned square of the given
/// half-width around the prior position, headings uniform within +-3
/// sigma_rot of the prior heading, weights 1/n. Per particle the draw order
/// is x, y, heading.
ParticleSwarm init_swarm(const Pose2D& prior, double half_width, int n, std::uint64_t seed,
                         double heading_sigma = kTwoDegrees);

/// Composes each particle pose with the odometry delta expressed in the
/// particle's own frame, then perturbs with zero-mean normal noise
/// (motion_sigma_pos per axis, motion_sigma_rot on heading). Weights are
/// untouched.
ParticleSwarm motion_update(ParticleSwarm swarm, const OdometryDelta& delta,
                            const NoiseParams& noise);

/// Scores every particle by correlating the local map (rotated to the
/// particle's heading) against the global-map window centered on the
/// particle, multiplies weights by max(score, epsilon), and normalizes.
/// Particles whose window leaves the global map get the epsilon confidence;
/// if that happens to every particle the swarm is declared lost. Scoring
/// consumes no randomness, so fanning it out over workers cannot change the
/// result.
ParticleSwarm observation_update(ParticleSwarm swarm, const OrthoMap& global,
                                 const OrthoMap& local, const WeightKernel& kernel,
                                 MatchMethod method, int workers = 1);

/// Roulette-wheel resampling: m draws with replacement proportional to
/// weight, each perturbed with the resampling noise (sigma_pos, sigma_rot),
/// weights reset to 1/m. Per draw the order is selector, x, y, heading.
ParticleSwarm resample(ParticleSwarm swarm, int m, const NoiseParams& noise);

/// Weighted mean position with a weighted circular mean heading, or the
/// highest-weight particle when Estimator::kBestParticle is selected.
Pose2D estimate(const ParticleSwarm& swarm, Estimator estimator = Estimator::kWeightedMean);

/// Weighted positional spread (standard deviation) about the weighted mean.
struct SwarmSpread {
  double std_x = 0.0;
  double std_y = 0.0;
  double std_pos = 0.0;  // sqrt(var_x + var_y)
};
SwarmSpread swarm_spread(const ParticleSwarm& swarm);

struct LocalizationConfig {
  int particles = 1000;
  std::uint64_t seed = 1;
  NoiseParams noise;
  KernelKind kernel = KernelKind::kCorrected;
  MatchMethod method = MatchMethod::kWncc;
  Pose2D prior;
  double init_half_width = 2.0;
  Estimator estimator = Estimator::kWeightedMean;
  int workers = 1;
};

/// One observation: the local orthomosaic captured at a frame plus the
/// odometry delta from the previous frame (zeros for the first frame).
struct Frame {
  int index = 0;
  OrthoMap local;
  OdometryDelta odometry;
};

struct FrameStats {
  int frame = 0;
  SwarmSpread spread;  // measured after the observation update
};

struct LocalizationRun {
  Trajectory trajectory;
  std::vector<FrameStats> stats;
};

/// Full filter loop: per frame motion update, observation update, estimate
/// (recorded), resample. Deterministic under the config seed.
LocalizationRun run_localization(const OrthoMap& global, const std::vector<Frame>& frames,
                                 const LocalizationConfig& config);

}  // namespace ortholoc
