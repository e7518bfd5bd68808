#include "restart/cli/run.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "restart/cli/digest.hpp"
#include "restart/cli/kv_config.hpp"
#include "restart/cli/learning_curve.hpp"
#include "restart/cli/presets.hpp"
#include "restart/env/binary_io.hpp"

namespace restart::cli {

namespace fs = std::filesystem;
using train::ExperimentConfig;
using train::RunRecord;

namespace {

std::string seed_file(const std::string& dir, const char* stem, std::uint64_t seed, const char* ext) {
  return (fs::path(dir) / (std::string(stem) + "_seed" + std::to_string(seed) + ext)).string();
}

}  // namespace

ExperimentConfig resolve_config(const RunRequest& req) {
  ExperimentConfig cfg;
  if (req.preset) cfg = preset(*req.preset);
  if (req.config_path) cfg = load_config(*req.config_path, std::move(cfg));
  for (const auto& o : req.overrides) apply_override(cfg, o);
  if (req.seeds) cfg.seeds = *req.seeds;
  if (req.out_dir) cfg.out_dir = *req.out_dir;
  cfg.validate();
  return cfg;
}

unsigned worker_cap() {
  if (const char* env = std::getenv("RESTART_RL_THREADS")) {
    unsigned v = 0;
    const std::string s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_run_outputs(const std::string& dir, const train::Trainer& trainer, const RunRecord& rec) {
  if (!rec.filtered_out) write_run_csv(seed_file(dir, "run", rec.seed, ".csv"), rec.seed, rec.rows);

  std::ofstream losses(seed_file(dir, "losses", rec.seed, ".csv"));
  losses << "iteration,policy_loss,value_loss,entropy,clip_fraction,approx_kl\n";
  for (std::size_t i = 0; i < rec.losses.size(); ++i) {
    const auto& l = rec.losses[i];
    losses << i << "," << l.policy_loss << "," << l.value_loss << "," << l.entropy << "," << l.clip_fraction << ","
           << l.approx_kl << "\n";
  }

  write_file(seed_file(dir, "params", rec.seed, ".bin"), trainer.net().serialize());
  std::visit(
      [&](const auto& m) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          write_file(seed_file(dir, "memory", rec.seed, ".bin"), m.serialize());
        }
      },
      trainer.memory());
}

std::vector<RunRecord> run_sweep(const ExperimentConfig& cfg, unsigned workers, std::ostream& log) {
  const std::string digest = config_digest(cfg);
  fs::create_directories(cfg.out_dir);

  std::vector<RunRecord> records(cfg.seeds.size());
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      try {
        train::Trainer trainer(cfg, cfg.seeds[i]);
        RunRecord rec = trainer.train();
        rec.config_digest = digest;
        write_run_outputs(cfg.out_dir, trainer, rec);
        std::lock_guard lock(log_mutex);
        log << "seed " << rec.seed << ": " << rec.env_steps << " steps, final metric "
            << (rec.rows.empty() ? 0.0 : rec.rows.back().metric) << (rec.filtered_out ? " (filtered out)" : "")
            << ", " << rec.wall_clock_seconds << " s\n";
        records[i] = std::move(rec);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cfg.seeds.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

void write_manifest(const std::string& dir, const ExperimentConfig& cfg, const std::string& digest) {
  std::ofstream out(fs::path(dir) / "manifest.toml");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << "# config digest sha256:" << digest << "\n" << serialize_config(cfg);
}

void write_summary(const std::string& dir, const std::vector<RunRecord>& records) {
  std::ofstream out(fs::path(dir) / "summary.csv");
  out << "seed,env_steps,first_success_step,filtered_out,evaluations,evaluation_side_effects,orphaned_sub_episodes,"
         "parameter_crc,wall_clock_seconds\n";
  for (const auto& r : records) {
    const auto& fx = r.evaluation_side_effects;
    out << r.seed << "," << r.env_steps << "," << (r.first_success_step ? std::to_string(*r.first_success_step) : "")
        << "," << (r.filtered_out ? 1 : 0) << "," << r.evaluations << ","
        << fx.memory_reads + fx.memory_writes + fx.restores + fx.parameter_writes << "," << r.orphaned_sub_episodes
        << "," << r.parameter_crc << "," << r.wall_clock_seconds << "\n";
  }
}

int run_command(const RunRequest& req, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = resolve_config(req);
  } catch (const train::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    const std::string digest = config_digest(cfg);
    out << "preset " << (cfg.preset.empty() ? "(none)" : cfg.preset) << ", " << cfg.seeds.size()
        << " seeds, digest " << digest.substr(0, 12) << ", output " << cfg.out_dir << "\n";
    const auto records = run_sweep(cfg, worker_cap(), out);
    write_manifest(cfg.out_dir, cfg, digest);
    write_summary(cfg.out_dir, records);
    return 0;
  } catch (const std::exception& e) {
    err << "run aborted: " << e.what() << "\n";
    return 1;
  }
}

int aggregate_command(const std::string& dir, const std::optional<std::string>& out_dir, std::ostream& out,
                      std::ostream& err) {
  try {
    const auto curves = aggregate_directory(dir, out_dir.value_or(dir));
    for (const auto& c : curves) {
      out << "aggregate_" << c.column << ": " << c.points.size() << " points over "
          << (c.points.empty() ? 0 : c.points.front().seeds) << " seeds\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "aggregate failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace restart::cli
