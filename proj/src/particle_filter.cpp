#include "ortholoc/particle_filter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ortholoc {

double ParticleSwarm::weight_sum() const {
  double s = 0.0;
  for (const auto& p : particles) s += p.weight;
  return s;
}

ParticleSwarm init_swarm(const Pose2D& prior, double half_width, int n, std::uint64_t seed,
                         double heading_sigma) {
  if (n < 1) throw std::invalid_argument("particle count must be >= 1");
  if (half_width < 0.0) throw std::invalid_argument("half width must be >= 0");
  ParticleSwarm swarm;
  swarm.rng = SplitMix64(seed);
  swarm.particles.resize(n);
  const double spread = 3.0 * heading_sigma;
  for (auto& p : swarm.particles) {
    p.pose.x = swarm.rng.uniform(prior.x - half_width, prior.x + half_width);
    p.pose.y = swarm.rng.uniform(prior.y - half_width, prior.y + half_width);
    p.pose.heading = Pose2D::wrap_angle(
        swarm.rng.uniform(prior.heading - spread, prior.heading + spread));
    p.weight = 1.0 / n;
  }
  return swarm;
}

ParticleSwarm motion_update(ParticleSwarm swarm, const OdometryDelta& delta,
                            const NoiseParams& noise) {
  if (swarm.particles.empty()) throw std::invalid_argument("swarm is empty");
  for (auto& p : swarm.particles) {
    const double c = std::cos(p.pose.heading);
    const double s = std::sin(p.pose.heading);
    p.pose.x += c * delta.dx - s * delta.dy;
    p.pose.y += s * delta.dx + c * delta.dy;
    p.pose.heading += delta.dtheta;
    p.pose.x += swarm.rng.normal(0.0, noise.motion_sigma_pos);
    p.pose.y += swarm.rng.normal(0.0, noise.motion_sigma_pos);
    p.pose.heading = Pose2D::wrap_angle(p.pose.heading +
                                        swarm.rng.normal(0.0, noise.motion_sigma_rot));
  }
  return swarm;
}

ParticleSwarm observation_update(ParticleSwarm swarm, const OrthoMap& global,
                                 const OrthoMap& local, const WeightKernel& kernel,
                                 MatchMethod method, int workers) {
  if (swarm.particles.empty()) throw std::invalid_argument("swarm is empty");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const int m = local.width();
  const int n = local.height();
  if (m > global.width() || n > global.height())
    throw std::invalid_argument("template larger than map");

  const int count = static_cast<int>(swarm.particles.size());
  std::vector<double> confidence(count, kMinConfidence);
  std::atomic<int> in_bounds{0};

  const auto score_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const Particle& p = swarm.particles[i];
      const auto [u0, v0] = window_origin_for_pose(global, p.pose, m, n);
      if (u0 < 0 || v0 < 0 || u0 + m > global.width() || v0 + n > global.height()) continue;
      in_bounds.fetch_add(1, std::memory_order_relaxed);
      const OrthoMap rotated = rotate_nn(local, p.pose.heading);
      const auto s = score_window(global, static_cast<int>(u0), static_cast<int>(v0), rotated,
                                  method, &kernel);
      confidence[i] = std::max(s.value_or(kMinConfidence), kMinConfidence);
    }
  };

  if (workers == 1 || count == 1) {
    score_range(0, count);
  } else {
    const int used = std::min(workers, count);
    const int chunk = (count + used - 1) / used;
    std::vector<std::thread> pool;
    for (int k = 0; k < used; ++k) {
      const int lo = k * chunk;
      const int hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(score_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  if (in_bounds.load() == 0) throw std::runtime_error("swarm lost");

  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    swarm.particles[i].weight *= confidence[i];
    sum += swarm.particles[i].weight;
  }
  if (!(sum > 0.0)) throw std::runtime_error("swarm lost");
  for (auto& p : swarm.particles) p.weight /= sum;
  return swarm;
}

ParticleSwarm resample(ParticleSwarm swarm, int m, const NoiseParams& noise) {
  if (m < 1) throw std::invalid_argument("resample count must be >= 1");
  const double total = swarm.weight_sum();
  if (!(total > 0.0)) throw std::runtime_error("all weights zero");

  std::vector<double> cumulative(swarm.particles.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    acc += swarm.particles[i].weight;
    cumulative[i] = acc;
  }

  std::vector<Particle> next;
  next.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double r = swarm.rng.uniform01() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    const std::size_t idx =
        std::min<std::size_t>(cumulative.size() - 1, it - cumulative.begin());
    Particle p = swarm.particles[idx];
    p.pose.x += swarm.rng.normal(0.0, noise.sigma_pos);
    p.pose.y += swarm.rng.normal(0.0, noise.sigma_pos);
    p.pose.heading = Pose2D::wrap_angle(p.pose.heading + swarm.rng.normal(0.0, noise.sigma_rot));
    p.weight = 1.0 / m;
    next.push_back(p);
  }
  swarm.particles = std::move(next);
  return swarm;
}

Pose2D estimate(const ParticleSwarm& swarm, Estimator estimator) {
  if (swarm.particles.empty()) throw std::invalid_argument("swarm is empty");
  if (estimator == Estimator::kBestParticle) {
    const Particle* best = &swarm.particles[0];
    for (const auto& p : swarm.particles)
      if (p.weight > best->weight) best = &p;
    return best->pose.normalized();
  }
  const double total = swarm.weight_sum();
  if (!(total > 0.0)) throw std::runtime_error("all weights zero");
  double x = 0.0, y = 0.0, sin_sum = 0.0, cos_sum = 0.0;
  for (const auto& p : swarm.particles) {
    const double w = p.weight / total;
    x += w * p.pose.x;
    y += w * p.pose.y;
    sin_sum += w * std::sin(p.pose.heading);
    cos_sum += w * std::cos(p.pose.heading);
  }
  return Pose2D{x, y, Pose2D::wrap_angle(std::atan2(sin_sum, cos_sum))};
}

SwarmSpread swarm_spread(const ParticleSwarm& swarm) {
  const Pose2D mean = estimate(swarm, Estimator::kWeightedMean);
  const double total = swarm.weight_sum();
  double var_x = 0.0, var_y = 0.0;
  for (const auto& p : swarm.particles) {
    const double w = p.weight / total;
    var_x += w * (p.pose.x - mean.x) * (p.pose.x - mean.x);
    var_y += w * (p.pose.y - mean.y) * (p.pose.y - mean.y);
  }
  return {std::sqrt(var_x), std::sqrt(var_y), std::sqrt(var_x + var_y)};
}

LocalizationRun run_localization(const OrthoMap& global, const std::vector<Frame>& frames,
                                 const LocalizationConfig& config) {
  if (frames.empty()) throw std::invalid_argument("frame sequence is empty");
  const OrthoMap gray_global = to_grayscale(global);

  ParticleSwarm swarm = init_swarm(config.prior, config.init_half_width, config.particles,
                                   config.seed, config.noise.sigma_rot);

  LocalizationRun run;
  WeightKernel kernel;
  for (const Frame& frame : frames) {
    const OrthoMap local = to_grayscale(frame.local);
    if (kernel.m != local.width() || kernel.n != local.height())
      kernel = make_kernel(config.kernel, local.width(), local.height());

    swarm = motion_update(std::move(swarm), frame.odometry, config.noise);
    try {
      swarm = observation_update(std::move(swarm), gray_global, local, kernel, config.method,
                                 config.workers);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string(e.what()) + " at frame " +
                               std::to_string(frame.index));
    }
    run.trajectory.push_back(frame.index, estimate(swarm, config.estimator));
    run.stats.push_back({frame.index, swarm_spread(swarm)});
    swarm = resample(std::move(swarm), config.particles, config.noise);
  }
  return run;
}

}  // namespace ortholoc
