// Acceptance suite: one [PASS]/[FAIL] line per criterion.
//
//   acceptance            run every criterion
//   acceptance 1 4 9      run the listed criteria only
//
// Exits non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "restart/agent/ppo.hpp"
#include "restart/agent/rollout.hpp"
#include "restart/cli/presets.hpp"
#include "restart/memory/episodic_memory.hpp"
#include "restart/memory/prioritised_memory.hpp"
#include "restart/memory/sum_tree.hpp"
#include "restart/train/trainer.hpp"

using namespace restart;
using train::ExperimentConfig;
using train::RunRecord;
using train::Variant;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Seconds = std::chrono::duration<double>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

void progress(const std::string& line) { std::cerr << "  .. " << line << std::endl; }

RunRecord train_logged(const ExperimentConfig& cfg, std::uint64_t seed) {
  RunRecord r = train::Trainer(cfg, seed).train();
  double best = -1e300;
  for (const auto& row : r.rows) best = std::max(best, row.metric);
  std::ostringstream s;
  s << cfg.preset << " seed " << seed << ": final " << r.rows.back().metric << ", best " << best << ", "
    << std::fixed << std::setprecision(1) << r.wall_clock_seconds << " s";
  progress(s.str());
  return r;
}

// ---- 1: sum-tree statistics ----

Outcome sum_tree_statistics() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  std::ostringstream d;
  bool ok = true;
  constexpr int kDraws = 100'000;
  const double eps = 1e-3;
  double worst_z = 0.0;
  for (double alpha : {0.0, 0.4, 1.0}) {
    memory::PrioritisedMemory mem(2, alpha, eps, 10);
    // Priority is |delta| + epsilon.
    mem.push(StateSnapshot{{0}, 0}, 1.0 - eps);
    mem.push(StateSnapshot{{1}, 0}, 3.0 - eps);
    std::vector<int> hits(2, 0);
    for (int i = 0; i < kDraws; ++i) ++hits[mem.sample(rng).snapshot.payload[0]];
    const double w[2] = {std::pow(1.0, alpha), std::pow(3.0, alpha)};
    for (int k = 0; k < 2; ++k) {
      const double p = w[k] / (w[0] + w[1]);
      const double z = std::abs(hits[k] - kDraws * p) / std::sqrt(kDraws * p * (1.0 - p));
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 3.0;
    }
  }
  d << "max |z| " << std::setprecision(3) << worst_z;

  memory::SumTree tree(257);
  std::vector<double> leaves(257, 0.0);
  std::uniform_int_distribution<std::size_t> slot(0, 256);
  std::uniform_real_distribution<double> weight(0.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t s = slot(rng);
    leaves[s] = i % 7 == 0 ? 0.0 : weight(rng);
    tree.set(s, leaves[s]);
    if (i % 500 == 0 || i == 9'999) {
      double brute = 0.0;
      for (double x : leaves) brute += x;
      worst = std::max({worst, std::abs(tree.total() - brute), tree.max_inconsistency()});
    }
  }
  ok = ok && worst <= 1e-9;
  const double secs = seconds_since(t0);
  ok = ok && secs < 5.0;
  d << ", tree deviation " << std::setprecision(3) << worst << ", " << std::fixed << std::setprecision(2) << secs
    << " s";
  return {ok, d.str()};
}

// ---- 2: episodic time-limit law ----

std::vector<memory::EpisodeStep> steps_from(int first_t, int count, Rng& rng) {
  std::uniform_real_distribution<double> reward(-1.0, 2.0);
  std::vector<memory::EpisodeStep> out;
  for (int k = 0; k < count; ++k) {
    out.push_back({StateSnapshot{{static_cast<std::uint8_t>(k & 0xff)}, static_cast<std::uint32_t>(first_t + k)},
                   reward(rng)});
  }
  return out;
}

Outcome time_limit_law() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(202);
  int samples = 0, violations = 0, subs = 0;
  while (samples < 10'000) {
    const int t_env = std::uniform_int_distribution<int>(2, 120)(rng);
    const auto parents = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const auto sub_cap = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    memory::EpisodicMemory mem(parents, sub_cap, 1.0, 1e-3, t_env);
    std::uniform_int_distribution<int> len(1, t_env);
    for (int e = 0; e < 12; ++e) mem.offer_parent(steps_from(0, len(rng), rng));
    for (int i = 0; i < 200 && samples < 10'000; ++i) {
      const auto s = mem.sample(rng);
      ++samples;
      const int t = static_cast<int>(s.snapshot.t);
      if (t + s.t_aug != t_env || s.t_aug < 1) ++violations;
      if (i % 3 == 0) {
        const int sub_len = std::uniform_int_distribution<int>(1, t_env - t)(rng);
        try {
          mem.offer_sub(s.episodic->link, steps_from(t, sub_len, rng));
          ++subs;
        } catch (const memory::OrphanSubEpisode&) {
        }
      }
      if (i % 17 == 0) mem.offer_parent(steps_from(0, len(rng), rng));
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << samples << " samples over memories with " << subs << " sub-episodes offered, " << violations
    << " violations, " << std::fixed << std::setprecision(2) << secs << " s";
  return {violations == 0 && secs < 5.0, d.str()};
}

// ---- 3: return-based priorities ----

Outcome return_priorities() {
  const std::vector<double> g{-2.0, 5.0};
  const auto p = memory::EpisodicMemory::return_probabilities(g, 1.0, 1e-3);
  const double err = std::max(std::abs(p[0] - 1e-3 / 7.002), std::abs(p[1] - 7.001 / 7.002));
  double worst_offset = 0.0;
  Rng rng(303);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> nonneg(static_cast<std::size_t>(i % 9 + 1));
    for (auto& x : nonneg) x = u(rng);
    if (i % 2 == 0) nonneg[0] = 0.0;
    worst_offset = std::max(worst_offset, std::abs(memory::EpisodicMemory::return_offset(nonneg)));
  }
  std::ostringstream d;
  d << "max error " << std::setprecision(3) << err << ", max offset over non-negative returns " << worst_offset;
  return {p.size() == 2 && err <= 1e-12 && worst_offset == 0.0, d.str()};
}

// ---- 4: gradient check ----

Outcome gradient_check() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(404);
  std::normal_distribution<double> n01(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    agent::NetConfig nc;
    nc.hidden = 4;
    nc.policy_output_gain = 1.0;
    agent::PolicyValueNet net(3, 3, nc, rng);
    agent::PpoConfig pc;
    pc.entropy_coef = 0.01 * trial;
    agent::Minibatch mb;
    mb.observations = Eigen::MatrixXd(3, 8);
    for (int j = 0; j < 8; ++j) {
      std::vector<double> obs(3);
      for (int i = 0; i < 3; ++i) mb.observations(i, j) = obs[static_cast<std::size_t>(i)] = n01(rng);
      const int a = static_cast<int>(rng() % 3);
      mb.actions.push_back(a);
      mb.old_log_probs.push_back(net.log_probs(obs)[static_cast<std::size_t>(a)] + 0.05 * n01(rng));
      mb.advantages.push_back(n01(rng));
      mb.value_targets.push_back(n01(rng));
    }
    Eigen::VectorXd grad;
    agent::ppo_loss(net, mb, pc, &grad);
    const std::size_t np = net.policy().num_params();
    for (std::size_t k = 0; k < net.num_params(); ++k) {
      double& p = k < np ? net.policy().params()[static_cast<Eigen::Index>(k)]
                         : net.value_net().params()[static_cast<Eigen::Index>(k - np)];
      const double saved = p, h = 1e-5;
      p = saved + h;
      const double up = agent::ppo_loss(net, mb, pc, nullptr).total;
      p = saved - h;
      const double down = agent::ppo_loss(net, mb, pc, nullptr).total;
      p = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = grad[static_cast<Eigen::Index>(k)];
      worst = std::max(worst, std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6}));
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "max relative error " << std::setprecision(3) << worst << " over 5 networks, " << std::fixed
    << std::setprecision(2) << secs << " s";
  return {worst <= 1e-4 && secs < 10.0, d.str()};
}

// ---- 5: GAE oracle ----

Outcome gae_oracle() {
  Rng rng(505);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double gamma = 0.99, lambda = 0.95;
  agent::RolloutBatch b;
  std::map<agent::SegmentEnd, int> kinds;
  for (int s = 0; s < 100; ++s) {
    const int n = std::uniform_int_distribution<int>(1, 40)(rng);
    const auto end = static_cast<agent::SegmentEnd>(s % 3);
    ++kinds[end];
    const std::size_t begin = b.size();
    for (int i = 0; i < n; ++i) {
      agent::Transition tr;
      tr.observation = {0.0};
      tr.reward = u(rng);
      tr.value = u(rng);
      tr.terminal = i + 1 == n && end == agent::SegmentEnd::Terminal;
      tr.timeout = i + 1 == n && end == agent::SegmentEnd::Timeout;
      b.transitions.push_back(tr);
    }
    agent::Segment seg{begin, b.size(), end, std::nullopt};
    if (end != agent::SegmentEnd::Terminal) seg.bootstrap_value = u(rng);
    b.segments.push_back(seg);
  }
  agent::compute_gae(b, gamma, lambda);

  // A_t = sum_l (gamma lambda)^l (r_{t+l} + gamma v_{t+l+1} - v_{t+l}) within the segment.
  double worst = 0.0;
  for (const auto& seg : b.segments) {
    auto v = [&](std::size_t i) {
      return i < seg.end ? b.transitions[i].value : seg.bootstrap_value.value_or(0.0);
    };
    for (std::size_t t = seg.begin; t < seg.end; ++t) {
      double a = 0.0;
      for (std::size_t l = 0; t + l < seg.end; ++l) {
        const std::size_t i = t + l;
        a += std::pow(gamma * lambda, static_cast<double>(l)) * (b.transitions[i].reward + gamma * v(i + 1) - v(i));
      }
      worst = std::max(worst, std::abs(a - b.advantages[t]));
    }
  }
  std::ostringstream d;
  d << "100 segments (" << kinds[agent::SegmentEnd::Terminal] << " terminal, " << kinds[agent::SegmentEnd::Timeout]
    << " timeout, " << kinds[agent::SegmentEnd::Cut] << " cut), max deviation " << std::setprecision(3) << worst;
  return {worst <= 1e-10, d.str()};
}

// ---- 6: baseline recovery ----

Outcome baseline_recovery() {
  std::ostringstream d;
  bool ok = true;
  int compared = 0;
  for (const char* base : {"dense-corridor", "multigoal-grid", "deep-maze"}) {
    ExperimentConfig plain = cli::preset(base);
    plain.memory.ratio = 0.0;
    plain.total_steps = 8192;
    plain.eval.period = 2048;
    plain.eval.episodes = 3;
    for (std::uint64_t seed : {1, 2}) {
      const RunRecord reference = train::Trainer(plain, seed).train();
      for (Variant v : {Variant::Uniform, Variant::Prioritised, Variant::Episodic}) {
        ExperimentConfig cfg = plain;
        cli::select_variant(cfg, v);
        const RunRecord r = train::Trainer(cfg, seed).train();
        ++compared;
        if (!r.same_outcome(reference)) {
          ok = false;
          d << base << "/" << train::to_string(v) << " seed " << seed << " differs; ";
        }
      }
    }
  }
  d << compared << " runs compared against plain PPO";
  return {ok, d.str()};
}

// ---- 7: ratio convergence ----

Outcome ratio_convergence() {
  std::ostringstream d;
  bool ok = true;
  const std::vector<std::pair<const char*, std::uint64_t>> runs = {
      {"dense-corridor-uniform", 1}, {"dense-corridor-prioritised", 1}, {"multigoal-episodic", 1},
      {"deep-maze-episodic", 1}};
  for (const auto& [name, seed] : runs) {
    ExperimentConfig cfg = cli::preset(name);
    cfg.total_steps = 100'000;
    cfg.eval.period = 100'000;
    const RunRecord r = train_logged(cfg, seed);
    const double realized = r.rows.back().aug_fraction;
    const bool in_band = r.rows.back().env_steps >= 100'000 && realized >= 0.08 && realized <= 0.12;
    ok = ok && in_band;
    d << name << " " << std::setprecision(4) << realized << "; ";
  }
  d << "band [0.08, 0.12]";
  return {ok, d.str()};
}

// ---- 8: hard sparse maze ----

Outcome hard_maze() {
  std::ostringstream d;
  ExperimentConfig episodic = cli::preset("deep-maze-episodic");
  ExperimentConfig plain = cli::preset("deep-maze-none");
  if (episodic.total_steps > 2'000'000) return {false, "preset budget exceeds 2e6 steps"};
  int episodic_good = 0, plain_stuck = 0;
  std::ostringstream e_best, p_best;
  for (std::uint64_t seed : episodic.seeds) {
    double best = 0.0;
    for (const auto& row : train_logged(episodic, seed).rows) best = std::max(best, row.metric);
    episodic_good += best > 0.8;
    e_best << best << " ";
  }
  for (std::uint64_t seed : plain.seeds) {
    double best = 0.0;
    for (const auto& row : train_logged(plain, seed).rows) best = std::max(best, row.metric);
    plain_stuck += best < 0.2;
    p_best << best << " ";
  }
  d << "budget " << episodic.total_steps << " steps; episodic best success per seed [ " << e_best.str()
    << "] -> " << episodic_good << "/5 above 0.8; baseline [ " << p_best.str() << "] -> " << plain_stuck
    << "/5 below 0.2";
  return {episodic_good >= 4 && plain_stuck >= 4, d.str()};
}

// ---- 9: dense corridor ----

double trapezoid_area(const std::vector<train::EvalRow>& rows) {
  double a = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    a += 0.5 * static_cast<double>(rows[i].env_steps - rows[i - 1].env_steps) * (rows[i].metric + rows[i - 1].metric);
  }
  return a;
}

Outcome dense_corridor() {
  std::map<Variant, double> mean_area;
  for (Variant v : {Variant::None, Variant::Uniform, Variant::Prioritised}) {
    const ExperimentConfig cfg = cli::preset("dense-corridor-" + train::to_string(v));
    double sum = 0.0;
    for (std::uint64_t seed : cfg.seeds) sum += trapezoid_area(train_logged(cfg, seed).rows);
    mean_area[v] = sum / static_cast<double>(cfg.seeds.size());
  }
  std::ostringstream d;
  d << std::fixed << std::setprecision(0) << "mean area over 5 seeds: baseline " << mean_area[Variant::None]
    << ", uniform " << mean_area[Variant::Uniform] << ", prioritised " << mean_area[Variant::Prioritised];
  const bool ok = mean_area[Variant::Uniform] >= mean_area[Variant::None] &&
                  mean_area[Variant::Prioritised] >= mean_area[Variant::None];
  return {ok, d.str()};
}

// ---- 10: evaluation purity ----

Outcome evaluation_purity() {
  std::ostringstream d;
  bool ok = true;
  std::uint64_t evaluations = 0;
  int runs = 0;
  for (const char* base : {"dense-corridor", "multigoal-grid", "deep-maze"}) {
    for (Variant v : {Variant::None, Variant::Uniform, Variant::Prioritised, Variant::Episodic}) {
      ExperimentConfig cfg = cli::preset(std::string(base) + "-" + train::to_string(v));
      cfg.total_steps = 20'480;
      cfg.eval.period = 2048;
      const RunRecord r = train::Trainer(cfg, 3).train();
      ++runs;
      evaluations += r.evaluations;
      const auto& fx = r.evaluation_side_effects;
      if (!fx.clean() || r.evaluations != r.rows.size() || r.evaluations < 11) {
        ok = false;
        d << cfg.preset << " reads " << fx.memory_reads << " writes " << fx.memory_writes << " restores "
          << fx.restores << " parameter writes " << fx.parameter_writes << "; ";
      }
    }
  }
  d << runs << " full runs, " << evaluations << " evaluation phases, all counters "
    << (ok ? "zero" : "NOT zero");
  return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sum-tree sampling statistics and consistency", sum_tree_statistics},
      {"episodic restart time limit equals t_env - t", time_limit_law},
      {"return-based category probabilities", return_priorities},
      {"ppo loss gradient check", gradient_check},
      {"gae brute-force oracle", gae_oracle},
      {"ratio 0 is bit-identical to plain ppo", baseline_recovery},
      {"realized restart ratio converges to 0.1", ratio_convergence},
      {"deep maze: episodic restart learns, baseline does not", hard_maze},
      {"dense corridor: restart variants match or beat baseline", dense_corridor},
      {"evaluation purity counters", evaluation_purity},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << "\n";
      return 2;
    }
    selected.insert(id);
  }

  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    ++ran;
    failed += !o.passed;
    std::cout << (o.passed ? "[PASS] " : "[FAIL] ") << "criterion " << id << " " << criteria[i].first << ": "
              << o.detail << " (" << std::fixed << std::setprecision(1) << seconds_since(t0) << " s)"
              << std::defaultfloat << std::endl;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
