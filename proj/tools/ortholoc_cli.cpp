#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ortholoc/cli_commands.hpp"

namespace cli = ortholoc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Cross-view orthomosaic matching and particle-filter localization"};
  app.require_subcommand(1);

  cli::MatchOptions match_opt;
  CLI::App* match = app.add_subcommand("match", "Slide a template over a global map");
  match->add_option("--global", match_opt.global_path, "global map (PGM/PPM)")->required();
  match->add_option("--template", match_opt.template_path, "template map (PGM/PPM)")->required();
  match->add_option("--method", match_opt.method, "ssd | sad | ncc | wncc")
      ->capture_default_str();
  match->add_option("--kernel", match_opt.kernel, "paper-literal | corrected | uniform")
      ->capture_default_str();
  match->add_option("--workers", match_opt.workers, "parallel workers")->capture_default_str();
  match->add_option("--resolution", match_opt.resolution, "meters per pixel")
      ->capture_default_str();
  match->add_option("--out", match_opt.out_prefix, "output prefix")->required();
  match->add_flag("--color-heatmap", match_opt.color_heatmap, "also write a PPM heatmap");

  cli::LocalizeOptions loc_opt;
  CLI::App* localize = app.add_subcommand("localize", "Particle-filter replay of a sequence");
  localize->add_option("--global", loc_opt.global_path, "global map (PGM/PPM)")->required();
  localize->add_option("--manifest", loc_opt.manifest_path, "frame manifest CSV")->required();
  localize->add_option("--config", loc_opt.config_path, "localization config JSON")->required();
  localize->add_option("--truth", loc_opt.truth_path, "ground-truth trajectory CSV (optional)");
  localize->add_option("--workers", loc_opt.workers, "parallel workers")->capture_default_str();
  localize->add_option("--resolution", loc_opt.resolution, "meters per pixel")
      ->capture_default_str();
  localize->add_option("--out", loc_opt.out_prefix, "output prefix")->required();

  cli::SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scene package");
  synth->add_option("--seed", synth_opt.scene.seed, "scene seed")->capture_default_str();
  synth->add_option("--width", synth_opt.scene.width_px, "global map width, px")
      ->capture_default_str();
  synth->add_option("--height", synth_opt.scene.height_px, "global map height, px")
      ->capture_default_str();
  synth->add_option("--roads", synth_opt.scene.road_count, "road count")->capture_default_str();
  synth->add_option("--marking-density", synth_opt.scene.marking_density,
                    "lane-marking density in [0,1]")
      ->capture_default_str();
  synth->add_option("--texture-scale", synth_opt.scene.texture_scale, "texture lattice, px")
      ->capture_default_str();
  synth->add_option("--frames", synth_opt.frames, "trajectory length")->capture_default_str();
  synth->add_option("--step", synth_opt.step_m, "step length, m")->capture_default_str();
  synth->add_option("--local", synth_opt.local_px, "local map size, px")->capture_default_str();
  synth->add_option("--gain", synth_opt.degrade.gain, "local-map gain")->capture_default_str();
  synth->add_option("--bias", synth_opt.degrade.bias, "local-map bias")->capture_default_str();
  synth->add_option("--noise", synth_opt.degrade.noise_sigma, "pixel noise sigma")
      ->capture_default_str();
  synth->add_option("--hollows", synth_opt.degrade.hollow_count, "hollow count per local map")
      ->capture_default_str();
  synth->add_option("--hollow-radius", synth_opt.degrade.hollow_radius_px, "hollow radius, px")
      ->capture_default_str();
  synth->add_option("--edge-bias", synth_opt.degrade.edge_hollow_bias,
                    "border-seeking hollow fraction")
      ->capture_default_str();
  synth->add_option("--odom-sigma-pos", synth_opt.odom_sigma_pos, "odometry noise, m/step")
      ->capture_default_str();
  synth->add_option("--odom-sigma-rot", synth_opt.odom_sigma_rot, "odometry noise, rad/step")
      ->capture_default_str();
  synth->add_option("--out", synth_opt.out_dir, "output directory")->required();

  cli::BenchOptions bench_opt;
  std::string bench_methods = "sad,ssd,ncc,wncc";
  std::string bench_workers = "1";
  CLI::App* bench = app.add_subcommand("bench", "Time full template searches");
  bench->add_option("--map-px", bench_opt.map_px, "square map sizes (paired with --tpl-px)")
      ->capture_default_str();
  bench->add_option("--tpl-px", bench_opt.tpl_px, "square template sizes")
      ->capture_default_str();
  bench->add_option("--methods", bench_methods, "comma-separated methods")
      ->capture_default_str();
  bench->add_option("--workers-list", bench_workers, "comma-separated worker counts")
      ->capture_default_str();
  bench->add_option("--reps", bench_opt.repetitions, "repetitions per configuration (>= 3)")
      ->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "scene seed")->capture_default_str();
  bench->add_option("--kernel", bench_opt.kernel, "kernel for wncc")->capture_default_str();
  bench->add_option("--out", bench_opt.out_path, "CSV report path");

  cli::EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "Positional RMSE between two trajectories");
  eval->add_option("--estimate", eval_opt.estimate_path, "estimated trajectory CSV")->required();
  eval->add_option("--truth", eval_opt.truth_path, "ground-truth trajectory CSV")->required();
  eval->add_option("--label", eval_opt.label, "method label in the report")
      ->capture_default_str();
  eval->add_option("--out", eval_opt.out_path, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  const auto parse_list = [](const std::string& csv) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= csv.size()) {
      const std::size_t pos = csv.find(',', start);
      if (pos == std::string::npos) {
        if (start < csv.size()) items.push_back(csv.substr(start));
        break;
      }
      if (pos > start) items.push_back(csv.substr(start, pos - start));
      start = pos + 1;
    }
    return items;
  };

  try {
    if (match->parsed()) {
      cli::cmd_match(match_opt, std::cout);
    } else if (localize->parsed()) {
      cli::cmd_localize(loc_opt, std::cout);
    } else if (synth->parsed()) {
      cli::cmd_synth(synth_opt, std::cout);
    } else if (bench->parsed()) {
      bench_opt.methods = parse_list(bench_methods);
      bench_opt.workers_list.clear();
      for (const std::string& w : parse_list(bench_workers))
        bench_opt.workers_list.push_back(std::stoi(w));
      cli::cmd_bench(bench_opt, std::cout);
    } else if (eval->parsed()) {
      cli::cmd_eval(eval_opt, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
