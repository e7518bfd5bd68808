// restart_rl: train PPO with restart memories, aggregate seed sweeps, run the self-test.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "restart/cli/kv_config.hpp"
#include "restart/cli/presets.hpp"
#include "restart/cli/run.hpp"
#include "restart/cli/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Restart-distribution experiments for PPO on gridworlds"};
  app.require_subcommand(1);

  restart::cli::RunRequest req;
  std::string config_path, preset, seeds_arg, out_dir;
  bool print_config = false;
  auto* run = app.add_subcommand("run", "train every seed of an experiment");
  run->add_option("--config", config_path, "config file (flat TOML-style key = value)");
  run->add_option("--preset", preset, "start from a named preset, e.g. deep-maze-episodic");
  run->add_option("--set", req.overrides, "dotted override key=value (repeatable)")->take_all();
  run->add_option("--seeds", seeds_arg, "comma-separated seed list, e.g. 1,2,3");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--print-config", print_config, "print the effective config and exit");

  std::string agg_dir, agg_out;
  auto* aggregate = app.add_subcommand("aggregate", "mean and standard error across run_seed*.csv files");
  aggregate->add_option("dir", agg_dir, "run directory")->required();
  aggregate->add_option("--out", agg_out, "where to write aggregate files (default: the run directory)");

  restart::cli::SelftestOptions st;
  auto* selftest = app.add_subcommand("selftest", "fast invariant checks");
  selftest->add_flag("--corrupt-sum-tree", st.corrupt_sum_tree, "inject a sum-tree fault (must make a check fail)");

  app.add_subcommand("presets", "list preset names");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("presets")) {
    for (const auto& n : restart::cli::preset_names()) std::cout << n << "\n";
    return 0;
  }
  if (*selftest) return restart::cli::selftest_command(st, std::cout);
  if (*aggregate) {
    return restart::cli::aggregate_command(agg_dir, agg_out.empty() ? std::nullopt : std::optional(agg_out),
                                           std::cout, std::cerr);
  }

  if (!config_path.empty()) req.config_path = config_path;
  if (!preset.empty()) req.preset = preset;
  if (!out_dir.empty()) req.out_dir = out_dir;
  try {
    if (!seeds_arg.empty()) {
      restart::train::ExperimentConfig tmp;
      restart::cli::set_field(tmp, "run.seeds", "[" + seeds_arg + "]");
      req.seeds = tmp.seeds;
    }
    if (print_config) {
      std::cout << restart::cli::serialize_config(restart::cli::resolve_config(req));
      return 0;
    }
  } catch (const restart::train::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (!req.config_path && !req.preset) {
    std::cerr << "config error: run needs --config or --preset\n";
    return 2;
  }
  return restart::cli::run_command(req, std::cout, std::cerr);
}
