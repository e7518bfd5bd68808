#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "restart/train/trainer.hpp"

namespace restart::cli {

struct RunRequest {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::vector<std::string> overrides;  // "key=value", applied in order
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::string> out_dir;
};

// Preset, then config file, then overrides, then --seeds / --out. Validated.
train::ExperimentConfig resolve_config(const RunRequest& req);

// RESTART_RL_THREADS if set and positive, else the hardware concurrency.
unsigned worker_cap();

// Trains every seed with at most `workers` concurrent runs. Records come back
// in seed-list order. The first runtime failure is rethrown after all workers stop.
std::vector<train::RunRecord> run_sweep(const train::ExperimentConfig& cfg, unsigned workers, std::ostream& log);

// Writes run_seed<k>.csv, losses_seed<k>.csv, params_seed<k>.bin and
// memory_seed<k>.bin for one finished run. Filtered runs get no run CSV.
void write_run_outputs(const std::string& dir, const train::Trainer& trainer, const train::RunRecord& rec);

// manifest.toml: the effective config preceded by its digest, reloadable as a config.
void write_manifest(const std::string& dir, const train::ExperimentConfig& cfg, const std::string& digest);
void write_summary(const std::string& dir, const std::vector<train::RunRecord>& records);

// Exit status: 0 success, 2 config error, 1 runtime abort.
int run_command(const RunRequest& req, std::ostream& out, std::ostream& err);
int aggregate_command(const std::string& dir, const std::optional<std::string>& out_dir, std::ostream& out,
                      std::ostream& err);

}  // namespace restart::cli
