#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ortholoc/cli_commands.hpp"
#include "ortholoc/pixmap_io.hpp"
#include "ortholoc/score_field_io.hpp"
#include "test_util.hpp"

using namespace ortholoc;
namespace fs = std::filesystem;

TEST_CASE("match command finds a planted template and writes its artifacts") {
  testutil::TempDir dir("match");
  OrthoMap global = testutil::random_gray_u8(96, 80, 123);
  const OrthoMap tpl = crop_window(global, 41, 22, 20, 20);
  save_map(global, dir.file("global.pgm"));
  save_map(tpl, dir.file("tpl.pgm"));

  cli::MatchOptions opt;
  opt.global_path = dir.file("global.pgm");
  opt.template_path = dir.file("tpl.pgm");
  opt.method = "wncc";
  opt.kernel = "corrected";
  opt.out_prefix = dir.file("out/result");
  opt.color_heatmap = true;

  std::ostringstream log;
  const cli::MatchSummary summary = cli::cmd_match(opt, log);
  CHECK(summary.best_u == 41);
  CHECK(summary.best_v == 22);
  CHECK(summary.wall_time > 0.0);
  CHECK(log.str().find("best placement (41, 22)") != std::string::npos);

  REQUIRE(summary.artifacts.size() == 4);
  for (const auto& artifact : summary.artifacts) CHECK(fs::exists(artifact));

  const ScoreField field = read_score_field(dir.file("out/result.sfld"));
  CHECK(field.placements_w == 96 - 20 + 1);
  CHECK(field.placements_h == 80 - 20 + 1);
  CHECK(field.method == MatchMethod::kWncc);

  std::ifstream jin(dir.file("out/result.json"));
  nlohmann::json j;
  jin >> j;
  CHECK(j.at("best_u") == 41);
  CHECK(j.at("best_v") == 22);
  CHECK(j.at("method") == "wncc");
  CHECK(j.at("placements_w") == 77);

  const OrthoMap heat = load_map(dir.file("out/result.heatmap.pgm"));
  CHECK(heat.width() == field.placements_w);
  CHECK(heat.value(41, 22) == 255.0);  // the optimum is the hottest pixel

  cli::MatchOptions bad = opt;
  bad.out_prefix.clear();
  CHECK_THROWS_AS(cli::cmd_match(bad, log), std::invalid_argument);
}

TEST_CASE("synth writes a complete, loadable scene package") {
  testutil::TempDir dir("synth");
  cli::SynthOptions opt;
  opt.scene.seed = 7;
  opt.scene.width_px = 128;
  opt.scene.height_px = 128;
  opt.frames = 6;
  opt.local_px = 32;
  opt.out_dir = dir.file("scene");

  std::ostringstream log;
  const cli::SynthSummary summary = cli::cmd_synth(opt, log);
  CHECK(summary.frames == 6);
  CHECK(fs::exists(summary.global_path));
  CHECK(fs::exists(summary.manifest_path));
  CHECK(fs::exists(summary.truth_path));
  CHECK(fs::exists(summary.config_path));
  CHECK(fs::exists(summary.pf_config_path));

  const auto rows = cli::read_manifest(summary.manifest_path);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].frame == 0);
  CHECK(rows[0].odometry.dx == 0.0);  // no motion into the first frame
  CHECK(rows[0].odometry.dy == 0.0);
  CHECK(rows[3].odometry.dx != 0.0);
  for (const auto& row : rows) {
    const fs::path local = fs::path(opt.out_dir) / row.local_map_path;
    CHECK(fs::exists(local));
    // default degradation stamps hollows, so every local carries a mask
    const OrthoMap m = load_map(local.string());
    CHECK(m.has_mask());
    CHECK(m.width() == 32);
  }

  const Trajectory truth = read_trajectory_csv(summary.truth_path);
  CHECK(truth.size() == 6);

  // the generated filter config is ready to run: prior sits on the true start
  const LocalizationConfig pf = cli::read_localization_config(summary.pf_config_path);
  CHECK(pf.prior.x == truth.entries[0].pose.x);
  CHECK(pf.prior.y == truth.entries[0].pose.y);

  cli::SynthOptions bad = opt;
  bad.out_dir.clear();
  CHECK_THROWS_AS(cli::cmd_synth(bad, log), std::invalid_argument);
}

TEST_CASE("localize replays a synthetic sequence end to end") {
  testutil::TempDir dir("loc");
  cli::SynthOptions synth;
  synth.scene.seed = 15;
  synth.scene.width_px = 128;
  synth.scene.height_px = 128;
  synth.scene.road_count = 0;
  synth.frames = 5;
  synth.local_px = 32;
  synth.degrade = DegradationParams::none();
  synth.odom_sigma_pos = 0.0;
  synth.odom_sigma_rot = 0.0;
  synth.out_dir = dir.file("scene");
  std::ostringstream log;
  const cli::SynthSummary scene = cli::cmd_synth(synth, log);

  // shrink the default config so the replay stays quick
  LocalizationConfig cfg = cli::read_localization_config(scene.pf_config_path);
  cfg.particles = 200;
  cfg.noise.motion_sigma_pos = 0.02;
  cfg.noise.motion_sigma_rot = 0.006;
  cfg.init_half_width = 0.5;
  const std::string cfg_path = dir.file("cfg.json");
  cli::write_localization_config(cfg, cfg_path);

  cli::LocalizeOptions opt;
  opt.global_path = scene.global_path;
  opt.manifest_path = scene.manifest_path;
  opt.config_path = cfg_path;
  opt.truth_path = scene.truth_path;
  opt.out_prefix = dir.file("run/est");

  const cli::LocalizeSummary result = cli::cmd_localize(opt, log);
  CHECK(result.trajectory.size() == 5);
  CHECK(result.stats.size() == 5);
  REQUIRE(result.rmse.has_value());
  CHECK(result.rmse->per_frame_errors.size() == 5);
  CHECK(result.rmse->rmse < 1.0);  // noise-free five-frame replay stays close

  REQUIRE(result.artifacts.size() == 3);
  for (const auto& artifact : result.artifacts) CHECK(fs::exists(artifact));
  const Trajectory est = read_trajectory_csv(dir.file("run/est.traj.csv"));
  CHECK(est.size() == 5);

  // absent ground truth: the replay still succeeds, just without the report
  cli::LocalizeOptions no_truth = opt;
  no_truth.truth_path = dir.file("scene/not_there.csv");
  no_truth.out_prefix = dir.file("run2/est");
  const cli::LocalizeSummary bare = cli::cmd_localize(no_truth, log);
  CHECK_FALSE(bare.rmse.has_value());
  CHECK(bare.artifacts.size() == 2);
  CHECK_FALSE(fs::exists(dir.file("run2/est.rmse.json")));
  CHECK(log.str().find("skipping RMSE report") != std::string::npos);

  // determinism: same config, same artifacts
  cli::LocalizeOptions again = opt;
  again.out_prefix = dir.file("run3/est");
  cli::cmd_localize(again, log);
  const Trajectory rerun = read_trajectory_csv(dir.file("run3/est.traj.csv"));
  for (std::size_t i = 0; i < est.size(); ++i) {
    CHECK(rerun.entries[i].pose.x == est.entries[i].pose.x);
    CHECK(rerun.entries[i].pose.y == est.entries[i].pose.y);
  }
}

TEST_CASE("manifest io validates its format") {
  testutil::TempDir dir("manifest");
  std::vector<cli::ManifestRow> rows;
  rows.push_back({0, "a.pgm", {0.0, 0.0, 0.0}});
  rows.push_back({1, "b.pgm", {0.25, -0.5, 0.1}});
  const std::string path = dir.file("m.csv");
  cli::write_manifest(rows, path);

  const auto back = cli::read_manifest(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].local_map_path == "b.pgm");
  CHECK(back[1].odometry.dx == 0.25);
  CHECK(back[1].odometry.dtheta == 0.1);

  CHECK_THROWS_WITH_AS(cli::read_manifest(dir.file("missing.csv")),
                       doctest::Contains("cannot open"), std::runtime_error);
  {
    std::ofstream out(dir.file("bad_header.csv"));
    out << "frame,path\n0,a.pgm\n";
  }
  CHECK_THROWS_WITH_AS(cli::read_manifest(dir.file("bad_header.csv")),
                       doctest::Contains("expected header"), std::runtime_error);
  {
    std::ofstream out(dir.file("bad_row.csv"));
    out << "frame,local_map_path,dx,dy,dtheta\n0,a.pgm,0.1\n";
  }
  CHECK_THROWS_WITH_AS(cli::read_manifest(dir.file("bad_row.csv")),
                       doctest::Contains("line 2"), std::runtime_error);
  {
    std::ofstream out(dir.file("empty.csv"));
    out << "frame,local_map_path,dx,dy,dtheta\n";
  }
  CHECK_THROWS_WITH_AS(cli::read_manifest(dir.file("empty.csv")),
                       doctest::Contains("no frames"), std::runtime_error);
}

TEST_CASE("localization config round-trips including the estimator choice") {
  testutil::TempDir dir("cfg");
  LocalizationConfig cfg;
  cfg.particles = 321;
  cfg.seed = 99;
  cfg.noise.sigma_pos = 0.05;
  cfg.noise.sigma_rot = 0.01;
  cfg.noise.motion_sigma_pos = 0.02;
  cfg.noise.motion_sigma_rot = 0.004;
  cfg.kernel = KernelKind::kUniform;
  cfg.method = MatchMethod::kNcc;
  cfg.prior = {4.5, -1.25, 0.75};
  cfg.init_half_width = 3.5;
  cfg.estimator = Estimator::kBestParticle;

  const std::string path = dir.file("cfg.json");
  cli::write_localization_config(cfg, path);
  const LocalizationConfig back = cli::read_localization_config(path);
  CHECK(back.particles == 321);
  CHECK(back.seed == 99);
  CHECK(back.noise.sigma_pos == 0.05);
  CHECK(back.noise.motion_sigma_rot == 0.004);
  CHECK(back.kernel == KernelKind::kUniform);
  CHECK(back.method == MatchMethod::kNcc);
  CHECK(back.prior.x == 4.5);
  CHECK(back.prior.heading == 0.75);
  CHECK(back.init_half_width == 3.5);
  CHECK(back.estimator == Estimator::kBestParticle);

  // missing keys keep their defaults
  {
    std::ofstream out(dir.file("partial.json"));
    out << R"({"particles": 7})";
  }
  const LocalizationConfig partial = cli::read_localization_config(dir.file("partial.json"));
  CHECK(partial.particles == 7);
  CHECK(partial.noise.sigma_pos == 0.1);
  CHECK(partial.estimator == Estimator::kWeightedMean);

  {
    std::ofstream out(dir.file("broken.json"));
    out << "{ not json";
  }
  CHECK_THROWS_WITH_AS(cli::read_localization_config(dir.file("broken.json")),
                       doctest::Contains("malformed config JSON"), std::runtime_error);
  {
    std::ofstream out(dir.file("estimator.json"));
    out << R"({"estimator": "median"})";
  }
  CHECK_THROWS_WITH_AS(cli::read_localization_config(dir.file("estimator.json")),
                       doctest::Contains("unknown estimator"), std::runtime_error);
}

TEST_CASE("eval compares two trajectory files") {
  testutil::TempDir dir("eval");
  Trajectory truth;
  truth.push_back(0, {0, 0, 0});
  truth.push_back(1, {1, 0, 0});
  Trajectory est = truth;
  est.entries[0].pose.y = 0.3;
  est.entries[1].pose.y = 0.4;
  write_trajectory_csv(truth, dir.file("truth.csv"));
  write_trajectory_csv(est, dir.file("est.csv"));

  cli::EvalOptions opt;
  opt.estimate_path = dir.file("est.csv");
  opt.truth_path = dir.file("truth.csv");
  opt.out_path = dir.file("report.json");
  opt.label = "wncc";

  std::ostringstream log;
  const RmseReport report = cli::cmd_eval(opt, log);
  CHECK(report.method == "wncc");
  CHECK(report.rmse == doctest::Approx(std::sqrt((0.09 + 0.16) / 2.0)));

  std::ifstream jin(dir.file("report.json"));
  nlohmann::json j;
  jin >> j;
  CHECK(j.at("rmse").get<double>() == doctest::Approx(report.rmse));
  CHECK(j.at("per_frame_errors").size() == 2);
}

TEST_CASE("bench times every requested method") {
  testutil::TempDir dir("bench");
  cli::BenchOptions opt;
  opt.map_px = {64};
  opt.tpl_px = {16};
  opt.methods = {"sad", "ssd", "ncc", "wncc"};
  opt.workers_list = {1};
  opt.repetitions = 3;
  opt.out_path = dir.file("bench.csv");

  std::ostringstream log;
  const auto reports = cli::cmd_bench(opt, log);
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CHECK(r.map_px == 64);
    CHECK(r.tpl_px == 16);
    CHECK(r.workers == 1);
    CHECK(r.wall_time > 0.0);
    CHECK(r.placements_per_second > 0.0);
  }
  CHECK(reports[0].method == "sad");
  CHECK(reports[3].method == "wncc");
  CHECK(fs::exists(dir.file("bench.csv")));
  std::ifstream csv(dir.file("bench.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "method,map_size,template_size,workers,wall_time,placements_per_second");

  cli::BenchOptions bad = opt;
  bad.repetitions = 1;
  CHECK_THROWS_AS(cli::cmd_bench(bad, log), std::invalid_argument);
  bad = opt;
  bad.tpl_px = {16, 32};
  CHECK_THROWS_AS(cli::cmd_bench(bad, log), std::invalid_argument);
}
