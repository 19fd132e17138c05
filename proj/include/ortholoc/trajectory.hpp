#pragma once

#include <string>
#include <vector>

#include "ortholoc/types.hpp"

namespace ortholoc {

struct TrajectoryEntry {
  int frame = 0;
  Pose2D pose;
};

/// Timestamped (by frame index) pose sequence; frame indices strictly increase.
struct Trajectory {
  std::vector<TrajectoryEntry> entries;

  std::size_t size() const { return entries.size(); }
  void push_back(int frame, const Pose2D& pose) { entries.push_back({frame, pose}); }
  void validate() const;
};

/// CSV exchange format: header `frame,x,y,heading`, one row per frame,
/// doubles printed with round-trip precision.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

/// Positional trajectory error summary (headings are ignored).
struct RmseReport {
  std::string method;
  double rmse = 0.0;
  std::vector<double> per_frame_errors;
};

/// Per-frame Euclidean position errors between two trajectories paired by
/// frame index; throws on frame-index mismatch.
RmseReport compute_rmse(const Trajectory& estimate, const Trajectory& truth,
                        const std::string& method = "");

}  // namespace ortholoc
