#include "ortholoc/cli_commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "ortholoc/kernel.hpp"
#include "ortholoc/pixmap_io.hpp"
#include "ortholoc/score_field_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ortholoc::cli {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_out(const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_json_file(const json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "frame,local_map_path,dx,dy,dtheta")
    throw std::runtime_error("malformed manifest (expected header frame,local_map_path,dx,dy,dtheta)");
  std::vector<ManifestRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 5)
      throw std::runtime_error("malformed manifest row at line " + std::to_string(lineno));
    try {
      ManifestRow row;
      row.frame = std::stoi(fields[0]);
      row.local_map_path = fields[1];
      row.odometry = {std::stod(fields[2]), std::stod(fields[3]), std::stod(fields[4])};
      rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw std::runtime_error("malformed manifest row at line " + std::to_string(lineno));
    }
  }
  if (rows.empty()) throw std::runtime_error("manifest has no frames");
  return rows;
}

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "frame,local_map_path,dx,dy,dtheta\n";
  for (const ManifestRow& row : rows)
    out << row.frame << ',' << row.local_map_path << ',' << fmt("%.17g", row.odometry.dx) << ','
        << fmt("%.17g", row.odometry.dy) << ',' << fmt("%.17g", row.odometry.dtheta) << '\n';
}

LocalizationConfig read_localization_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed config JSON: " + std::string(e.what()));
  }
  LocalizationConfig c;
  c.particles = j.value("particles", c.particles);
  c.seed = j.value("seed", c.seed);
  c.noise.sigma_pos = j.value("sigma_pos", c.noise.sigma_pos);
  c.noise.sigma_rot = j.value("sigma_rot", c.noise.sigma_rot);
  c.noise.motion_sigma_pos = j.value("motion_sigma_pos", c.noise.motion_sigma_pos);
  c.noise.motion_sigma_rot = j.value("motion_sigma_rot", c.noise.motion_sigma_rot);
  if (j.contains("kernel")) c.kernel = kernel_kind_from_string(j.at("kernel").get<std::string>());
  if (j.contains("method")) c.method = match_method_from_string(j.at("method").get<std::string>());
  c.prior.x = j.value("prior_x", c.prior.x);
  c.prior.y = j.value("prior_y", c.prior.y);
  c.prior.heading = j.value("prior_heading", c.prior.heading);
  c.init_half_width = j.value("init_half_width", c.init_half_width);
  if (j.contains("estimator")) {
    const std::string name = lower(j.at("estimator").get<std::string>());
    if (name == "best_particle")
      c.estimator = Estimator::kBestParticle;
    else if (name == "weighted_mean")
      c.estimator = Estimator::kWeightedMean;
    else
      throw std::runtime_error("unknown estimator: " + name);
  }
  return c;
}

void write_localization_config(const LocalizationConfig& config, const std::string& path) {
  json j;
  j["init_half_width"] = config.init_half_width;
  j["kernel"] = to_string(config.kernel);
  j["method"] = lower(to_string(config.method));
  j["motion_sigma_pos"] = config.noise.motion_sigma_pos;
  j["motion_sigma_rot"] = config.noise.motion_sigma_rot;
  j["particles"] = config.particles;
  j["prior_heading"] = config.prior.heading;
  j["prior_x"] = config.prior.x;
  j["prior_y"] = config.prior.y;
  j["seed"] = config.seed;
  j["sigma_pos"] = config.noise.sigma_pos;
  j["sigma_rot"] = config.noise.sigma_rot;
  if (config.estimator == Estimator::kBestParticle) j["estimator"] = "best_particle";
  write_json_file(j, path);
}

MatchSummary cmd_match(const MatchOptions& opt, std::ostream& log) {
  if (opt.out_prefix.empty()) throw std::invalid_argument("match requires an output prefix");
  const OrthoMap global = to_grayscale(load_map(opt.global_path, opt.resolution));
  const OrthoMap tpl = to_grayscale(load_map(opt.template_path, opt.resolution));
  const MatchMethod method = match_method_from_string(opt.method);
  const WeightKernel kernel =
      make_kernel(kernel_kind_from_string(opt.kernel), tpl.width(), tpl.height());
  const WeightKernel* kptr = method == MatchMethod::kWncc ? &kernel : nullptr;

  const auto t0 = Clock::now();
  const MatchResult result = match_template_parallel(global, tpl, method, kptr, opt.workers);
  const double wall = seconds_since(t0);

  MatchSummary summary;
  summary.best_u = result.best_u;
  summary.best_v = result.best_v;
  summary.best_score = result.best_score;
  summary.wall_time = wall;

  const std::string field_path = opt.out_prefix + ".sfld";
  ensure_parent_dir(field_path);
  write_score_field(result.field, field_path);
  summary.artifacts.push_back(field_path);

  const std::string heat_path = opt.out_prefix + ".heatmap.pgm";
  write_heatmap_pgm(result.field, heat_path);
  summary.artifacts.push_back(heat_path);
  if (opt.color_heatmap) {
    const std::string ppm_path = opt.out_prefix + ".heatmap.ppm";
    write_heatmap_ppm(result.field, ppm_path);
    summary.artifacts.push_back(ppm_path);
  }

  json j;
  j["best_score"] = result.best_score;
  j["best_u"] = result.best_u;
  j["best_v"] = result.best_v;
  j["kernel"] = lower(opt.kernel);
  j["method"] = lower(to_string(method));
  j["placements_h"] = result.field.placements_h;
  j["placements_w"] = result.field.placements_w;
  j["wall_time"] = wall;
  const std::string json_path = opt.out_prefix + ".json";
  write_json_file(j, json_path);
  summary.artifacts.push_back(json_path);

  log << to_string(method) << " best placement (" << result.best_u << ", " << result.best_v
      << ") score " << fmt("%.6g", result.best_score) << " in " << fmt("%.3f", wall) << " s\n";
  return summary;
}

LocalizeSummary cmd_localize(const LocalizeOptions& opt, std::ostream& log) {
  if (opt.out_prefix.empty()) throw std::invalid_argument("localize requires an output prefix");
  const OrthoMap global = to_grayscale(load_map(opt.global_path, opt.resolution));
  LocalizationConfig config = read_localization_config(opt.config_path);
  config.workers = opt.workers;

  const fs::path base = fs::path(opt.manifest_path).parent_path();
  std::vector<Frame> frames;
  for (const ManifestRow& row : read_manifest(opt.manifest_path)) {
    fs::path p(row.local_map_path);
    if (p.is_relative()) p = base / p;
    frames.push_back({row.frame, load_map(p.string(), opt.resolution), row.odometry});
  }

  const LocalizationRun run = run_localization(global, frames, config);

  LocalizeSummary summary;
  summary.trajectory = run.trajectory;
  summary.stats = run.stats;

  const std::string traj_path = opt.out_prefix + ".traj.csv";
  ensure_parent_dir(traj_path);
  write_trajectory_csv(run.trajectory, traj_path);
  summary.artifacts.push_back(traj_path);

  const std::string spread_path = opt.out_prefix + ".spread.csv";
  {
    auto out = open_out(spread_path);
    out << "frame,std_pos\n";
    for (const FrameStats& s : run.stats)
      out << s.frame << ',' << fmt("%.17g", s.spread.std_pos) << '\n';
  }
  summary.artifacts.push_back(spread_path);

  if (!opt.truth_path.empty()) {
    if (fs::exists(opt.truth_path)) {
      const Trajectory truth = read_trajectory_csv(opt.truth_path);
      const RmseReport report =
          compute_rmse(run.trajectory, truth, lower(to_string(config.method)));
      json j;
      j["method"] = report.method;
      j["per_frame_errors"] = report.per_frame_errors;
      j["rmse"] = report.rmse;
      const std::string rmse_path = opt.out_prefix + ".rmse.json";
      write_json_file(j, rmse_path);
      summary.artifacts.push_back(rmse_path);
      summary.rmse = report;
      log << "trajectory RMSE " << fmt("%.4f", report.rmse) << " m over "
          << report.per_frame_errors.size() << " frames (" << report.method << ")\n";
    } else {
      log << "ground truth " << opt.truth_path << " not found; skipping RMSE report\n";
    }
  }
  log << "wrote " << traj_path << " (" << run.trajectory.size() << " frames)\n";
  return summary;
}

SynthSummary cmd_synth(const SynthOptions& opt, std::ostream& log) {
  if (opt.out_dir.empty()) throw std::invalid_argument("synth requires an output directory");
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);

  const OrthoMap global = gen_global(opt.scene);
  const double margin_px = 0.5 * std::hypot(opt.local_px - 1.0, opt.local_px - 1.0) + 2.0;
  NoiseParams odom;
  odom.sigma_pos = opt.odom_sigma_pos;
  odom.sigma_rot = opt.odom_sigma_rot;
  const TrajectorySample sample = gen_trajectory(opt.scene, opt.frames, opt.step_m, odom,
                                                 opt.scene.seed + 1, margin_px * global.resolution);

  SynthSummary summary;
  summary.frames = opt.frames;
  summary.global_path = (dir / "global.pgm").string();
  save_map(global, summary.global_path);

  std::vector<ManifestRow> rows;
  for (int k = 0; k < opt.frames; ++k) {
    const OrthoMap local = extract_local(global, sample.truth.entries[k].pose, opt.local_px,
                                         opt.local_px, opt.degrade, opt.scene.seed + 1000 + k);
    char name[32];
    std::snprintf(name, sizeof name, "local_%05d.pgm", k);
    save_map(local, (dir / name).string());
    ManifestRow row;
    row.frame = k;
    row.local_map_path = name;
    if (k > 0) row.odometry = sample.odometry[static_cast<std::size_t>(k) - 1];
    rows.push_back(std::move(row));
  }

  summary.manifest_path = (dir / "manifest.csv").string();
  write_manifest(rows, summary.manifest_path);
  summary.truth_path = (dir / "truth.csv").string();
  write_trajectory_csv(sample.truth, summary.truth_path);

  json j;
  j["degrade"] = {{"bias", opt.degrade.bias},
                  {"edge_hollow_bias", opt.degrade.edge_hollow_bias},
                  {"gain", opt.degrade.gain},
                  {"hollow_count", opt.degrade.hollow_count},
                  {"hollow_radius_px", opt.degrade.hollow_radius_px},
                  {"noise_sigma", opt.degrade.noise_sigma}};
  j["frames"] = opt.frames;
  j["local_px"] = opt.local_px;
  j["odom_sigma_pos"] = opt.odom_sigma_pos;
  j["odom_sigma_rot"] = opt.odom_sigma_rot;
  j["scene"] = {{"height_px", opt.scene.height_px},
                {"marking_density", opt.scene.marking_density},
                {"road_count", opt.scene.road_count},
                {"seed", opt.scene.seed},
                {"texture_scale", opt.scene.texture_scale},
                {"width_px", opt.scene.width_px}};
  j["step_m"] = opt.step_m;
  summary.config_path = (dir / "config.json").string();
  write_json_file(j, summary.config_path);

  LocalizationConfig pf;
  pf.seed = opt.scene.seed;
  pf.prior = sample.truth.entries.front().pose;
  summary.pf_config_path = (dir / "pf_config.json").string();
  write_localization_config(pf, summary.pf_config_path);

  log << "scene seed " << opt.scene.seed << ": " << opt.frames << " frames ("
      << opt.local_px << "x" << opt.local_px << " locals) -> " << opt.out_dir << "\n";
  return summary;
}

std::vector<BenchReport> cmd_bench(const BenchOptions& opt, std::ostream& log) {
  if (opt.repetitions < 3) throw std::invalid_argument("repetitions must be >= 3");
  if (opt.map_px.size() != opt.tpl_px.size() || opt.map_px.empty())
    throw std::invalid_argument("map and template size lists must pair up");

  std::vector<BenchReport> reports;
  for (std::size_t i = 0; i < opt.map_px.size(); ++i) {
    const int W = opt.map_px[i];
    const int M = opt.tpl_px[i];
    SceneSpec spec;
    spec.seed = opt.seed;
    spec.width_px = W;
    spec.height_px = W;
    const OrthoMap global = gen_global(spec);
    const OrthoMap tpl = crop_window(global, (W - M) / 2, (W - M) / 2, M, M);
    const WeightKernel kernel = make_kernel(kernel_kind_from_string(opt.kernel), M, M);
    const double placements =
        static_cast<double>(W - M + 1) * static_cast<double>(W - M + 1);

    for (const std::string& name : opt.methods) {
      const MatchMethod method = match_method_from_string(name);
      const WeightKernel* kptr = method == MatchMethod::kWncc ? &kernel : nullptr;
      for (const int workers : opt.workers_list) {
        std::vector<double> times;
        double last_score = 0.0;
        for (int rep = 0; rep < opt.repetitions; ++rep) {
          const auto t0 = Clock::now();
          const MatchResult r = match_template_parallel(global, tpl, method, kptr, workers);
          times.push_back(seconds_since(t0));
          last_score = r.best_score;
        }
        std::sort(times.begin(), times.end());
        const std::size_t mid = times.size() / 2;
        const double median =
            times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
        BenchReport report;
        report.method = lower(name);
        report.map_px = W;
        report.tpl_px = M;
        report.workers = workers;
        report.wall_time = median;
        report.placements_per_second = placements / median;
        reports.push_back(report);
        log << report.method << " " << W << "x" << W << "/" << M << "x" << M << " workers="
            << workers << ": median " << fmt("%.4f", median) << " s, "
            << fmt("%.0f", report.placements_per_second) << " placements/s (best score "
            << fmt("%.6g", last_score) << ")\n";
      }
    }
  }

  if (!opt.out_path.empty()) {
    auto out = open_out(opt.out_path);
    out << "method,map_size,template_size,workers,wall_time,placements_per_second\n";
    for (const BenchReport& r : reports)
      out << r.method << ',' << r.map_px << 'x' << r.map_px << ',' << r.tpl_px << 'x' << r.tpl_px
          << ',' << r.workers << ',' << fmt("%.6f", r.wall_time) << ','
          << fmt("%.1f", r.placements_per_second) << '\n';
  }
  return reports;
}

RmseReport cmd_eval(const EvalOptions& opt, std::ostream& log) {
  const Trajectory estimate = read_trajectory_csv(opt.estimate_path);
  const Trajectory truth = read_trajectory_csv(opt.truth_path);
  const RmseReport report = compute_rmse(estimate, truth, opt.label);
  if (!opt.out_path.empty()) {
    json j;
    j["method"] = report.method;
    j["per_frame_errors"] = report.per_frame_errors;
    j["rmse"] = report.rmse;
    write_json_file(j, opt.out_path);
  }
  log << "RMSE " << fmt("%.6f", report.rmse) << " m over " << report.per_frame_errors.size()
      << " frames\n";
  return report;
}

}  // namespace ortholoc::cli
