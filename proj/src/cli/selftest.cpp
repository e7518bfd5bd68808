#include "restart/cli/selftest.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "restart/agent/ppo.hpp"
#include "restart/agent/rollout.hpp"
#include "restart/env/snapshot.hpp"
#include "restart/memory/episodic_memory.hpp"
#include "restart/memory/prioritised_memory.hpp"
#include "restart/memory/sum_tree.hpp"
#include "restart/train/trainer.hpp"

namespace restart::cli {

namespace {

using Detail = std::ostringstream;

bool sum_tree_sampling(Rng& rng, Detail& d) {
  bool ok = true;
  constexpr int draws = 100'000;
  for (double alpha : {0.0, 0.4, 1.0}) {
    const double eps = 1e-3;
    memory::PrioritisedMemory mem(2, alpha, eps, 10);
    mem.push({}, 1.0 - eps);
    mem.push({}, 3.0 - eps);
    int hits[2] = {0, 0};
    for (int i = 0; i < draws; ++i) ++hits[mem.sample(rng).slot];
    const double w0 = std::pow(1.0, alpha), w1 = std::pow(3.0, alpha);
    for (int k = 0; k < 2; ++k) {
      const double p = (k == 0 ? w0 : w1) / (w0 + w1);
      const double sd = std::sqrt(draws * p * (1 - p));
      const double z = std::abs(hits[k] - draws * p) / sd;
      if (z > 3.0) ok = false;
      d << "a=" << alpha << " slot" << k << " z=" << std::setprecision(3) << z << " ";
    }
  }
  return ok;
}

bool sum_tree_consistency(Rng& rng, bool corrupt, Detail& d) {
  memory::SumTree tree(100);
  std::vector<double> leaves(100, 0.0);
  std::uniform_int_distribution<std::size_t> slot(0, 99);
  std::uniform_real_distribution<double> weight(0.0, 10.0);
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t s = slot(rng);
    leaves[s] = weight(rng);
    tree.set(s, leaves[s]);
  }
  if (corrupt) tree.corrupt_node_for_testing(2, 0.5);
  double brute = 0.0;
  for (double w : leaves) brute += w;
  const double drift = std::max(tree.max_inconsistency(), std::abs(tree.total() - brute));
  d << "max deviation " << drift;
  return drift <= 1e-9;
}

double max_gradient_error(Rng& rng) {
  agent::NetConfig nc;
  nc.hidden = 4;
  nc.policy_output_gain = 1.0;
  agent::PolicyValueNet net(3, 3, nc, rng);
  agent::PpoConfig pc;
  pc.entropy_coef = 0.01;

  std::normal_distribution<double> n01(0.0, 1.0);
  agent::Minibatch mb;
  mb.observations = Eigen::MatrixXd(3, 8);
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 3; ++i) mb.observations(i, j) = n01(rng);
    std::vector<double> obs{mb.observations(0, j), mb.observations(1, j), mb.observations(2, j)};
    const int a = j % 3;
    mb.actions.push_back(a);
    mb.old_log_probs.push_back(net.log_probs(obs)[a] + 0.05 * n01(rng));
    mb.advantages.push_back(n01(rng));
    mb.value_targets.push_back(n01(rng));
  }

  Eigen::VectorXd grad;
  agent::ppo_loss(net, mb, pc, &grad);
  const std::size_t np = net.policy().num_params();
  double worst = 0.0;
  for (std::size_t k = 0; k < net.num_params(); ++k) {
    double& p = k < np ? net.policy().params()[k] : net.value_net().params()[k - np];
    const double saved = p;
    const double h = 1e-5;
    p = saved + h;
    const double up = agent::ppo_loss(net, mb, pc, nullptr).total;
    p = saved - h;
    const double down = agent::ppo_loss(net, mb, pc, nullptr).total;
    p = saved;
    const double numeric = (up - down) / (2 * h);
    const double err = std::abs(numeric - grad[k]) / std::max({std::abs(numeric), std::abs(grad[k]), 1e-6});
    worst = std::max(worst, err);
  }
  return worst;
}

bool gradient_check(Rng& rng, Detail& d) {
  const double err = max_gradient_error(rng);
  d << "max relative error " << err;
  return err <= 1e-4;
}

std::vector<memory::EpisodeStep> random_steps(int first_t, int count, Rng& rng) {
  std::uniform_real_distribution<double> r(-1.0, 1.0);
  std::vector<memory::EpisodeStep> steps;
  for (int k = 0; k < count; ++k) {
    steps.push_back({StateSnapshot{{static_cast<std::uint8_t>(k)}, static_cast<std::uint32_t>(first_t + k)}, r(rng)});
  }
  return steps;
}

bool eq4_law(Rng& rng, Detail& d) {
  constexpr int t_env = 40;
  std::uniform_int_distribution<int> len(1, t_env);
  int violations = 0, samples = 0;
  for (int m = 0; m < 100; ++m) {
    memory::EpisodicMemory mem(5, 3, 1.0, 1e-3, t_env);
    for (int e = 0; e < 8; ++e) mem.offer_parent(random_steps(0, len(rng), rng));
    for (int i = 0; i < 100; ++i) {
      const auto s = mem.sample(rng);
      ++samples;
      if (static_cast<int>(s.snapshot.t) + s.t_aug != t_env) ++violations;
      const int start = static_cast<int>(s.snapshot.t);
      if (i % 4 == 0 && start + 1 < t_env && mem.contains(s.episodic->link.category_id)) {
        std::uniform_int_distribution<int> sub_len(1, t_env - start);
        mem.offer_sub(s.episodic->link, random_steps(start, sub_len(rng), rng));
      }
    }
  }
  d << samples << " samples, " << violations << " violations";
  return violations == 0;
}

bool category_law(Detail& d) {
  const std::vector<double> g{-2.0, 5.0};
  const auto p = memory::EpisodicMemory::return_probabilities(g, 1.0, 1e-3);
  const double e0 = 1e-3 / 7.002, e1 = 7.001 / 7.002;
  const double err = std::max(std::abs(p[0] - e0), std::abs(p[1] - e1));
  const std::vector<double> nonneg{0.0, 2.5, 7.0};
  const double offset = memory::EpisodicMemory::return_offset(nonneg);
  d << "error " << err << ", non-negative offset " << offset;
  return err <= 1e-12 && offset == 0.0;
}

bool gae_oracle(Rng& rng, Detail& d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_int_distribution<int> kind(0, 2);
  const double gamma = 0.97, lambda = 0.9;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    agent::RolloutBatch b;
    const int n = len(rng);
    const auto end_kind = static_cast<agent::SegmentEnd>(kind(rng));
    for (int i = 0; i < n; ++i) {
      agent::Transition tr;
      tr.reward = u(rng);
      tr.value = u(rng);
      tr.terminal = i + 1 == n && end_kind == agent::SegmentEnd::Terminal;
      tr.timeout = i + 1 == n && end_kind == agent::SegmentEnd::Timeout;
      b.transitions.push_back(tr);
    }
    agent::Segment seg{0, static_cast<std::size_t>(n), end_kind, std::nullopt};
    if (end_kind != agent::SegmentEnd::Terminal) seg.bootstrap_value = u(rng);
    b.segments.push_back(seg);
    agent::compute_gae(b, gamma, lambda);

    auto v = [&](int i) {
      if (i < n) return b.transitions[i].value;
      return seg.bootstrap_value.value_or(0.0);
    };
    for (int t = 0; t < n; ++t) {
      double a = 0.0;
      for (int l = 0; t + l < n; ++l) {
        a += std::pow(gamma * lambda, l) * (b.transitions[t + l].reward + gamma * v(t + l + 1) - v(t + l));
      }
      worst = std::max(worst, std::abs(a - b.advantages[t]));
    }
  }
  d << "max deviation " << worst;
  return worst <= 1e-10;
}

bool baseline_recovery(Detail& d) {
  train::ExperimentConfig c;
  c.env.kind = train::EnvKind::DenseCorridor;
  c.env.corridor_length = 12;
  c.env.t_env = 40;
  c.ppo.steps_per_iteration = 128;
  c.ppo.epochs = 2;
  c.ppo.minibatch_size = 32;
  c.total_steps = 384;
  c.eval.period = 128;
  c.eval.episodes = 2;
  c.memory.ratio = 0.0;
  c.memory.capacity = 64;
  c.memory.parent_capacity = 4;
  c.memory.sub_capacity = 2;
  const auto plain = train::Trainer(c, 7).train();
  bool ok = true;
  for (auto v : {train::Variant::Uniform, train::Variant::Prioritised, train::Variant::Episodic}) {
    auto cv = c;
    cv.memory.variant = v;
    cv.memory.t_aug_mode = v == train::Variant::Episodic ? env::AugMode::Remaining : env::AugMode::Fixed;
    const bool same = train::Trainer(cv, 7).train().same_outcome(plain);
    d << train::to_string(v) << (same ? " identical " : " DIFFERS ");
    ok = ok && same;
  }
  return ok;
}

bool snapshot_integrity(Detail& d) {
  const StateSnapshot s{{1, 2, 3, 4, 5}, 17};
  Bytes frame = encode_snapshot(s);
  const bool round_trip = decode_snapshot(frame) == s;
  frame[frame.size() / 2] ^= 0x10;
  bool detected = false;
  try {
    decode_snapshot(frame);
  } catch (const MalformedSnapshot&) {
    detected = true;
  }
  d << "round trip " << (round_trip ? "ok" : "broken") << ", bit flip " << (detected ? "detected" : "missed");
  return round_trip && detected;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
  Rng rng(opts.seed);
  std::vector<std::pair<std::string, std::function<bool(Detail&)>>> checks = {
      {"sum-tree sampling frequencies", [&](Detail& d) { return sum_tree_sampling(rng, d); }},
      {"sum-tree consistency", [&](Detail& d) { return sum_tree_consistency(rng, opts.corrupt_sum_tree, d); }},
      {"episodic time limit law", [&](Detail& d) { return eq4_law(rng, d); }},
      {"return-based category probabilities", [&](Detail& d) { return category_law(d); }},
      {"ppo loss gradient check", [&](Detail& d) { return gradient_check(rng, d); }},
      {"gae brute-force oracle", [&](Detail& d) { return gae_oracle(rng, d); }},
      {"baseline recovery at ratio 0", [&](Detail& d) { return baseline_recovery(d); }},
      {"snapshot integrity", [&](Detail& d) { return snapshot_integrity(d); }},
  };
  std::vector<CheckResult> results;
  for (auto& [name, fn] : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Detail d;
    CheckResult r{name, false, "", 0.0};
    try {
      r.passed = fn(d);
    } catch (const std::exception& e) {
      d << "threw: " << e.what();
    }
    r.detail = d.str();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(std::move(r));
  }
  return results;
}

int selftest_command(const SelftestOptions& opts, std::ostream& out) {
  bool all = true;
  for (const auto& r : run_selftest(opts)) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << " (" << std::fixed
        << std::setprecision(2) << r.seconds << " s)\n"
        << std::defaultfloat;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace restart::cli
