#include "ortholoc/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ortholoc {

void Trajectory::validate() const {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].frame <= entries[i - 1].frame)
      throw std::invalid_argument("trajectory frame indices must strictly increase");
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  traj.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory csv: " + path);
  out << "frame,x,y,heading\n";
  char buf[160];
  for (const auto& e : traj.entries) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", e.frame, e.pose.x, e.pose.y,
                  e.pose.heading);
    out << buf;
  }
  if (!out) throw std::runtime_error("cannot write trajectory csv: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("frame,x,y,heading", 0) != 0)
    throw std::runtime_error("malformed trajectory csv header: " + path);
  Trajectory traj;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    TrajectoryEntry e;
    char c1, c2, c3;
    if (!(ss >> e.frame >> c1 >> e.pose.x >> c2 >> e.pose.y >> c3 >> e.pose.heading) ||
        c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error("malformed trajectory csv at line " + std::to_string(line_no));
    traj.entries.push_back(e);
  }
  traj.validate();
  return traj;
}

RmseReport compute_rmse(const Trajectory& estimate, const Trajectory& truth,
                        const std::string& method) {
  if (estimate.entries.size() != truth.entries.size())
    throw std::runtime_error("frame-index mismatch between estimate and ground truth");
  RmseReport report;
  report.method = method;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < estimate.entries.size(); ++i) {
    const auto& a = estimate.entries[i];
    const auto& b = truth.entries[i];
    if (a.frame != b.frame)
      throw std::runtime_error("frame-index mismatch between estimate and ground truth");
    const double err = std::hypot(a.pose.x - b.pose.x, a.pose.y - b.pose.y);
    report.per_frame_errors.push_back(err);
    sq_sum += err * err;
  }
  if (estimate.entries.empty()) throw std::runtime_error("cannot compute RMSE of empty trajectories");
  report.rmse = std::sqrt(sq_sum / static_cast<double>(estimate.entries.size()));
  return report;
}

}  // namespace ortholoc
