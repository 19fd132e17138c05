#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ortholoc/matching.hpp"
#include "ortholoc/particle_filter.hpp"
#include "ortholoc/synth.hpp"
#include "ortholoc/trajectory.hpp"
#include "ortholoc/types.hpp"

/// In-process implementations of the CLI subcommands. The binary in tools/
/// is a thin argument parser over these, and the integration tests call them
/// directly. Every command throws on failure; when a command returns, all of
/// its artifacts have been written.
namespace ortholoc::cli {

/// One line of a frame-sequence manifest (`frame,local_map_path,dx,dy,dtheta`).
/// Relative map paths are interpreted against the manifest's directory.
struct ManifestRow {
  int frame = 0;
  std::string local_map_path;
  OdometryDelta odometry;
};

std::vector<ManifestRow> read_manifest(const std::string& path);
void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path);

/// Localization config JSON with keys {particles, seed, sigma_pos, sigma_rot,
/// motion_sigma_pos, motion_sigma_rot, kernel, method, prior_x, prior_y,
/// prior_heading, init_half_width}. Missing keys keep their defaults; the
/// optional "estimator" key ("weighted_mean" | "best_particle") selects the
/// ablation estimator.
LocalizationConfig read_localization_config(const std::string& path);
void write_localization_config(const LocalizationConfig& config, const std::string& path);

struct MatchOptions {
  std::string global_path;
  std::string template_path;
  std::string method = "wncc";
  std::string kernel = "corrected";
  int workers = 1;
  double resolution = 0.1;
  std::string out_prefix;      // writes <prefix>.json/.sfld/.heatmap.pgm
  bool color_heatmap = false;  // additionally writes <prefix>.heatmap.ppm
};

struct MatchSummary {
  int best_u = 0;
  int best_v = 0;
  double best_score = 0.0;
  double wall_time = 0.0;  // seconds
  std::vector<std::string> artifacts;
};

/// Full sliding-window search of a template over a global map; emits the raw
/// score field, a rendered heatmap, and a JSON result record.
MatchSummary cmd_match(const MatchOptions& opt, std::ostream& log);

struct LocalizeOptions {
  std::string global_path;
  std::string manifest_path;
  std::string config_path;
  std::string truth_path;  // optional; if the file is absent the RMSE report is skipped
  std::string out_prefix;  // writes <prefix>.traj.csv/.spread.csv (+ .rmse.json)
  int workers = 1;
  double resolution = 0.1;
};

struct LocalizeSummary {
  Trajectory trajectory;
  std::vector<FrameStats> stats;
  std::optional<RmseReport> rmse;
  std::vector<std::string> artifacts;
};

/// Particle-filter replay over a recorded frame sequence; emits the estimated
/// trajectory, the per-frame swarm spread, and (given ground truth) an RMSE
/// report.
LocalizeSummary cmd_localize(const LocalizeOptions& opt, std::ostream& log);

struct SynthOptions {
  SceneSpec scene;
  DegradationParams degrade = DegradationParams::aerial_ground();
  int frames = 50;
  double step_m = 0.3;
  int local_px = 64;
  double odom_sigma_pos = 0.02;   // meters per step
  double odom_sigma_rot = 0.006;  // radians per step
  std::string out_dir;
};

struct SynthSummary {
  std::string global_path;
  std::string manifest_path;
  std::string truth_path;
  std::string config_path;
  std::string pf_config_path;
  int frames = 0;
};

/// Generates a complete scene package: global map PGM, per-frame degraded
/// local PGMs with mask sidecars, frame manifest, ground-truth trajectory,
/// the generating config, and a ready-to-run localization config whose prior
/// is the true start pose.
SynthSummary cmd_synth(const SynthOptions& opt, std::ostream& log);

struct BenchOptions {
  std::vector<int> map_px = {320};  // paired with tpl_px entry-by-entry
  std::vector<int> tpl_px = {48};
  std::vector<std::string> methods = {"sad", "ssd", "ncc", "wncc"};
  std::vector<int> workers_list = {1};
  int repetitions = 5;
  std::uint64_t seed = 1;
  std::string kernel = "corrected";
  std::string out_path;  // CSV report; empty writes nothing
};

struct BenchReport {
  std::string method;
  int map_px = 0;
  int tpl_px = 0;
  int workers = 1;
  double wall_time = 0.0;  // median over repetitions, seconds
  double placements_per_second = 0.0;
};

/// Times full template searches, reporting the median wall time per
/// (size, method, workers) configuration. Scores are deterministic; only the
/// timing varies between runs.
std::vector<BenchReport> cmd_bench(const BenchOptions& opt, std::ostream& log);

struct EvalOptions {
  std::string estimate_path;
  std::string truth_path;
  std::string out_path;  // optional JSON report
  std::string label = "estimate";
};

/// Frame-index-aligned positional RMSE between two trajectory CSVs.
RmseReport cmd_eval(const EvalOptions& opt, std::ostream& log);

}  // namespace ortholoc::cli
