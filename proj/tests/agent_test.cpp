#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "restart/agent/adam.hpp"
#include "restart/agent/mlp.hpp"
#include "restart/agent/policy_value_net.hpp"
#include "restart/agent/ppo.hpp"
#include "restart/agent/rollout.hpp"
#include "restart/env/binary_io.hpp"

using namespace restart;
using namespace restart::agent;

namespace {

agent::Transition tr(double reward, double value, bool terminal = false, bool timeout = false) {
  agent::Transition t;
  t.observation = {0.0};
  t.reward = reward;
  t.value = value;
  t.terminal = terminal;
  t.timeout = timeout;
  return t;
}

RolloutBatch one_segment(std::vector<agent::Transition> ts, SegmentEnd end, std::optional<double> boot) {
  RolloutBatch b;
  const std::size_t n = ts.size();
  b.transitions = std::move(ts);
  b.segments.push_back({0, n, end, boot});
  return b;
}

// Zeroes the output layer of the policy network so every action is equally likely.
void zero_policy_head(PolicyValueNet& net) {
  const auto& sizes = net.policy().layer_sizes();
  const Eigen::Index head = sizes.back() * (sizes[sizes.size() - 2] + 1);
  auto& p = net.policy().params();
  p.tail(head).setZero();
}

Minibatch random_minibatch(const PolicyValueNet& net, int n, Rng& rng, double ratio_noise) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Minibatch mb;
  mb.observations = Eigen::MatrixXd(net.observation_size(), n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> obs(static_cast<std::size_t>(net.observation_size()));
    for (auto& x : obs) x = n01(rng);
    for (int i = 0; i < net.observation_size(); ++i) mb.observations(i, j) = obs[static_cast<std::size_t>(i)];
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(net.num_actions()));
    mb.actions.push_back(a);
    mb.old_log_probs.push_back(net.log_probs(obs)[static_cast<std::size_t>(a)] + ratio_noise * n01(rng));
    mb.advantages.push_back(n01(rng));
    mb.value_targets.push_back(n01(rng));
  }
  return mb;
}

double& param(PolicyValueNet& net, std::size_t k) {
  const std::size_t np = net.policy().num_params();
  return k < np ? net.policy().params()[static_cast<Eigen::Index>(k)]
                : net.value_net().params()[static_cast<Eigen::Index>(k - np)];
}

double max_relative_error(PolicyValueNet& net, const Minibatch& mb, const PpoConfig& cfg) {
  Eigen::VectorXd grad;
  ppo_loss(net, mb, cfg, &grad);
  double worst = 0.0;
  for (std::size_t k = 0; k < net.num_params(); ++k) {
    double& p = param(net, k);
    const double saved = p, h = 1e-5;
    p = saved + h;
    const double up = ppo_loss(net, mb, cfg, nullptr).total;
    p = saved - h;
    const double down = ppo_loss(net, mb, cfg, nullptr).total;
    p = saved;
    const double fd = (up - down) / (2.0 * h);
    const double a = grad[static_cast<Eigen::Index>(k)];
    worst = std::max(worst, std::abs(fd - a) / std::max({std::abs(fd), std::abs(a), 1e-6}));
  }
  return worst;
}

}  // namespace

// ---- Mlp / Adam ----

TEST(Mlp, ForwardMatchesManualEvaluation) {
  Mlp m({2, 3, 1});
  Rng rng(1);
  m.init_orthogonal(rng, 1.0, 1.0);
  auto& p = m.params();
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = 0.1 * static_cast<double>(i + 1) * (i % 2 ? -1 : 1);
  // Layer 0: W (3x2 column-major) then b (3); layer 1: W (1x3) then b (1).
  Eigen::Map<const Eigen::MatrixXd> w0(p.data(), 3, 2);
  Eigen::Map<const Eigen::VectorXd> b0(p.data() + 6, 3);
  Eigen::Map<const Eigen::MatrixXd> w1(p.data() + 9, 1, 3);
  const double b1 = p[12];
  Eigen::MatrixXd x(2, 1);
  x << 0.3, -0.7;
  const Eigen::VectorXd h = (w0 * x.col(0) + b0).array().tanh();
  const double expected = (w1 * h)(0) + b1;
  EXPECT_NEAR(m.forward(x)(0, 0), expected, 1e-15);
  EXPECT_EQ(m.num_params(), 13u);
}

TEST(Mlp, BackwardMatchesFiniteDifferences) {
  Mlp m({3, 5, 4, 2});
  Rng rng(2);
  m.init_orthogonal(rng, std::sqrt(2.0), 1.0);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 6);
  Eigen::MatrixXd g_out = Eigen::MatrixXd::Random(2, 6);
  Mlp::Cache cache;
  m.forward(x, &cache);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.num_params()));
  m.backward(cache, g_out, grad);
  for (Eigen::Index k = 0; k < grad.size(); ++k) {
    const double saved = m.params()[k];
    m.params()[k] = saved + 1e-6;
    const double up = (m.forward(x).array() * g_out.array()).sum();
    m.params()[k] = saved - 1e-6;
    const double down = (m.forward(x).array() * g_out.array()).sum();
    m.params()[k] = saved;
    EXPECT_NEAR(grad[k], (up - down) / 2e-6, 1e-7);
  }
}

TEST(Mlp, OrthogonalInitHasScaledOrthonormalRowsAndZeroBias) {
  Mlp m({8, 8, 3});
  Rng rng(3);
  m.init_orthogonal(rng, std::sqrt(2.0), 0.01);
  const auto& p = m.params();
  Eigen::Map<const Eigen::MatrixXd> w0(p.data(), 8, 8);
  EXPECT_TRUE((w0 * w0.transpose()).isApprox(2.0 * Eigen::MatrixXd::Identity(8, 8), 1e-12));
  EXPECT_TRUE(p.segment(64, 8).isZero());
  Eigen::Map<const Eigen::MatrixXd> w1(p.data() + 72, 3, 8);
  EXPECT_TRUE((w1 * w1.transpose()).isApprox(1e-4 * Eigen::MatrixXd::Identity(3, 3), 1e-10));
}

TEST(Adam, FirstStepMovesByLearningRateTimesSign) {
  Adam opt(3, AdamConfig{0.1, 0.9, 0.999, 1e-8});
  Eigen::VectorXd p(3), g(3);
  p << 1.0, 2.0, 3.0;
  g << 4.0, -0.5, 0.0;
  opt.step(p, g);
  EXPECT_NEAR(p[0], 1.0 - 0.1 * 4.0 / (4.0 + 1e-8), 1e-12);
  EXPECT_NEAR(p[1], 2.0 + 0.1 * 0.5 / (0.5 + 1e-8), 1e-12);
  EXPECT_EQ(p[2], 3.0);
  EXPECT_EQ(opt.steps(), 1u);
}

// ---- PolicyValueNet ----

TEST(PolicyValueNet, SoftmaxSumsToOne) {
  Rng rng(4);
  PolicyValueNet net(5, 4, NetConfig{}, rng);
  std::normal_distribution<double> n01(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> obs(5);
    for (auto& x : obs) x = n01(rng);
    double sum = 0.0;
    for (double lp : net.log_probs(obs)) sum += std::exp(lp);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  Eigen::MatrixXd big(3, 1);
  big << 1000.0, -1000.0, 0.0;
  const Eigen::MatrixXd ls = log_softmax(big);
  EXPECT_NEAR(std::exp(ls(0, 0)) + std::exp(ls(1, 0)) + std::exp(ls(2, 0)), 1.0, 1e-12);
}

TEST(PolicyValueNet, UniformHeadGivesUniformActions) {
  Rng rng(5);
  PolicyValueNet net(2, 3, NetConfig{}, rng);
  zero_policy_head(net);
  const std::vector<double> obs{0.2, -0.4};
  constexpr int draws = 100000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(net.act(obs, rng).action)];
  const double p = 1.0 / 3.0, sd = std::sqrt(draws * p * (1 - p));
  for (int c : counts) EXPECT_LE(std::abs(c - draws * p), 3.0 * sd);
}

TEST(PolicyValueNet, ActIsDeterministicGivenSeed) {
  Rng init(6);
  PolicyValueNet net(3, 4, NetConfig{}, init);
  const std::vector<double> obs{0.1, 0.2, 0.3};
  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) {
    const auto x = net.act(obs, a);
    const auto y = net.act(obs, b);
    EXPECT_EQ(x.action, y.action);
    EXPECT_EQ(x.log_prob, y.log_prob);
    EXPECT_EQ(x.value, y.value);
    EXPECT_EQ(x.log_prob, net.log_probs(obs)[static_cast<std::size_t>(x.action)]);
    EXPECT_EQ(x.value, net.value(obs));
  }
}

TEST(PolicyValueNet, NonFiniteActivationIsReported) {
  Rng rng(7);
  PolicyValueNet net(2, 2, NetConfig{}, rng);
  net.policy().params()[0] = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> obs{1.0, 1.0};
  EXPECT_THROW(net.act(obs, rng), NonFiniteActivation);
}

TEST(PolicyValueNet, CheckpointRoundTripAndArchitectureCheck) {
  Rng rng(8);
  PolicyValueNet a(3, 2, NetConfig{}, rng), b(3, 2, NetConfig{}, rng);
  ASSERT_NE(a.policy().params(), b.policy().params());
  b.load(a.serialize());
  EXPECT_EQ(a.policy().params(), b.policy().params());
  EXPECT_EQ(a.value_net().params(), b.value_net().params());
  PolicyValueNet other(4, 2, NetConfig{}, rng);
  EXPECT_THROW(other.load(a.serialize()), FramingError);
}

// ---- GAE / TD errors ----

TEST(Gae, TerminalSingleTransition) {
  auto b = one_segment({tr(1.0, 0.5, true)}, SegmentEnd::Terminal, std::nullopt);
  compute_gae(b, 0.99, 0.95);
  EXPECT_DOUBLE_EQ(b.td_errors[0], 0.5);
  EXPECT_DOUBLE_EQ(b.advantages[0], 0.5);
  EXPECT_DOUBLE_EQ(b.value_targets[0], 1.0);
}

TEST(Gae, TimeoutSingleTransitionBootstraps) {
  auto b = one_segment({tr(1.0, 0.5, false, true)}, SegmentEnd::Timeout, 2.0);
  compute_gae(b, 0.99, 0.95);
  EXPECT_NEAR(b.td_errors[0], 2.48, 1e-15);
  EXPECT_NEAR(b.advantages[0], 2.48, 1e-15);
}

TEST(Gae, MissingBootstrapIsAnError) {
  auto b = one_segment({tr(1.0, 0.5, false, true)}, SegmentEnd::Timeout, std::nullopt);
  EXPECT_THROW(compute_gae(b, 0.99, 0.95), MissingBootstrap);
  auto c = one_segment({tr(1.0, 0.5)}, SegmentEnd::Cut, std::nullopt);
  EXPECT_THROW(td_errors(c, 0.99), MissingBootstrap);
}

TEST(Gae, LengthFiveSegmentMatchesDoubleSum) {
  const double g = 0.99, l = 0.95;
  std::vector<agent::Transition> ts{tr(0.1, 0.3), tr(-0.2, 0.1), tr(0.7, -0.4), tr(0.0, 0.2), tr(1.0, 0.9, true)};
  auto b = one_segment(ts, SegmentEnd::Terminal, std::nullopt);
  compute_gae(b, g, l);
  for (int t = 0; t < 5; ++t) {
    double a = 0.0;
    for (int k = t; k < 5; ++k) {
      const double next = k + 1 < 5 ? ts[static_cast<std::size_t>(k + 1)].value : 0.0;
      a += std::pow(g * l, k - t) * (ts[static_cast<std::size_t>(k)].reward + g * next - ts[static_cast<std::size_t>(k)].value);
    }
    EXPECT_NEAR(b.advantages[static_cast<std::size_t>(t)], a, 1e-15);
  }
}

TEST(Gae, LambdaLimitsProperty) {
  Rng gen(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 20);
    std::vector<agent::Transition> ts;
    for (int i = 0; i < n; ++i) ts.push_back(tr(u(gen), u(gen), i + 1 == n));
    const double gamma = 0.9 + 0.1 * (u(gen) + 1.0) / 2.0;

    auto zero = one_segment(ts, SegmentEnd::Terminal, std::nullopt);
    compute_gae(zero, gamma, 0.0);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(zero.advantages[static_cast<std::size_t>(i)], zero.td_errors[static_cast<std::size_t>(i)], 1e-14);

    auto one = one_segment(ts, SegmentEnd::Terminal, std::nullopt);
    compute_gae(one, gamma, 1.0);
    for (int t = 0; t < n; ++t) {
      double mc = 0.0;
      for (int k = t; k < n; ++k) mc += std::pow(gamma, k - t) * ts[static_cast<std::size_t>(k)].reward;
      EXPECT_NEAR(one.advantages[static_cast<std::size_t>(t)], mc - ts[static_cast<std::size_t>(t)].value, 1e-12);
    }
  }
}

TEST(Gae, SegmentsAreIndependent) {
  RolloutBatch b;
  b.transitions = {tr(1.0, 0.0, true), tr(1.0, 0.0), tr(1.0, 0.0)};
  b.segments = {{0, 1, SegmentEnd::Terminal, std::nullopt}, {1, 3, SegmentEnd::Cut, 10.0}};
  EXPECT_NO_THROW(b.validate());
  compute_gae(b, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(b.advantages[0], 1.0);
  EXPECT_DOUBLE_EQ(b.advantages[2], 1.0 + 0.5 * 10.0);
  EXPECT_DOUBLE_EQ(b.advantages[1], 1.0 + 0.5 * b.advantages[2]);
}

TEST(RolloutBatch, ValidateRejectsInconsistentFlags) {
  auto both = one_segment({tr(0.0, 0.0, true, true)}, SegmentEnd::Terminal, std::nullopt);
  EXPECT_THROW(both.validate(), std::invalid_argument);
  auto wrong = one_segment({tr(0.0, 0.0, false, true)}, SegmentEnd::Terminal, std::nullopt);
  EXPECT_THROW(wrong.validate(), std::invalid_argument);
  auto mixed = one_segment({tr(0.0, 0.0), tr(0.0, 0.0, true)}, SegmentEnd::Terminal, std::nullopt);
  mixed.transitions[1].origin = StartOrigin::AugmentedStart;
  EXPECT_THROW(mixed.validate(), std::invalid_argument);
  RolloutBatch gap;
  gap.transitions = {tr(0.0, 0.0), tr(0.0, 0.0, true)};
  gap.segments = {{1, 2, SegmentEnd::Terminal, std::nullopt}};
  EXPECT_THROW(gap.validate(), std::invalid_argument);
}

TEST(TdErrors, ZeroValueGivesReward) {
  auto b = one_segment({tr(1.0, 0.0), tr(1.0, 0.0), tr(1.0, 0.0, false, true)}, SegmentEnd::Timeout, 0.0);
  for (double d : td_errors(b, 0.99)) EXPECT_EQ(d, 1.0);
}

TEST(TdErrors, PerfectValueOnChainGivesZero) {
  const double g = 0.9;
  const int n = 6;
  std::vector<agent::Transition> ts;
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int k = i; k < n; ++k) v += std::pow(g, k - i) * 1.0;
    ts.push_back(tr(1.0, v, i + 1 == n));
  }
  auto b = one_segment(ts, SegmentEnd::Terminal, std::nullopt);
  for (double d : td_errors(b, g)) EXPECT_NEAR(d, 0.0, 1e-14);
}

TEST(TdErrors, MatchesScalarReimplementation) {
  Rng gen(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RolloutBatch b;
  std::size_t at = 0;
  for (int s = 0; s < 10; ++s) {
    const std::size_t n = 1 + gen() % 8;
    const auto kind = static_cast<SegmentEnd>(gen() % 3);
    for (std::size_t i = 0; i < n; ++i) {
      b.transitions.push_back(tr(u(gen), u(gen), i + 1 == n && kind == SegmentEnd::Terminal,
                                 i + 1 == n && kind == SegmentEnd::Timeout));
    }
    b.segments.push_back({at, at + n, kind, kind == SegmentEnd::Terminal ? std::nullopt : std::optional(u(gen))});
    at += n;
  }
  const auto d = td_errors(b, 0.97);
  for (const auto& seg : b.segments) {
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      double v_next;
      if (i + 1 < seg.end) {
        v_next = b.transitions[i + 1].value;
      } else if (seg.end_kind == SegmentEnd::Terminal) {
        v_next = 0.0;
      } else {
        v_next = *seg.bootstrap_value;
      }
      EXPECT_NEAR(d[i], b.transitions[i].reward + 0.97 * v_next - b.transitions[i].value, 1e-12);
    }
  }
}

// ---- PPO loss and update ----

TEST(PpoLoss, GradientMatchesFiniteDifferences) {
  Rng rng(13);
  NetConfig nc;
  nc.hidden = 4;
  nc.policy_output_gain = 1.0;
  PolicyValueNet net(3, 3, nc, rng);
  PpoConfig cfg;
  cfg.entropy_coef = 0.01;
  const Minibatch mb = random_minibatch(net, 8, rng, 0.05);
  EXPECT_LE(max_relative_error(net, mb, cfg), 1e-4);
}

TEST(PpoLoss, GradientCheckProperty) {
  // Random small architectures, coefficients and ratios away from the clip kinks.
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    NetConfig nc;
    nc.hidden = 2 + static_cast<int>(rng() % 5);
    nc.hidden_layers = 1 + static_cast<int>(rng() % 2);
    nc.policy_output_gain = 1.0;
    PolicyValueNet net(1 + static_cast<int>(rng() % 4), 2 + static_cast<int>(rng() % 3), nc, rng);
    PpoConfig cfg;
    cfg.entropy_coef = std::uniform_real_distribution<double>(0.0, 0.1)(rng);
    cfg.value_coef = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    const Minibatch mb = random_minibatch(net, 4 + static_cast<int>(rng() % 8), rng, 0.05);
    EXPECT_LE(max_relative_error(net, mb, cfg), 1e-4) << "trial " << trial;
  }
}

TEST(PpoLoss, ClippedTransitionsContributeZeroGradient) {
  Rng rng(15);
  PolicyValueNet net(2, 3, NetConfig{}, rng);
  PpoConfig cfg;
  cfg.entropy_coef = 0.0;
  cfg.value_coef = 0.0;
  const std::vector<double> obs{0.5, -0.5};
  Minibatch mb;
  mb.observations = Eigen::MatrixXd(2, 1);
  mb.observations << 0.5, -0.5;
  mb.actions = {1};
  mb.value_targets = {0.0};
  const double logp = net.log_probs(obs)[1];
  Eigen::VectorXd grad;

  // ratio = e^0.5 > 1 + clip with positive advantage: pushing further is clipped.
  mb.old_log_probs = {logp - 0.5};
  mb.advantages = {1.0};
  const auto up = ppo_loss(net, mb, cfg, &grad);
  EXPECT_TRUE(grad.isZero(0.0));
  EXPECT_EQ(up.clip_fraction, 1.0);

  // ratio = e^-0.5 < 1 - clip with negative advantage.
  mb.old_log_probs = {logp + 0.5};
  mb.advantages = {-1.0};
  ppo_loss(net, mb, cfg, &grad);
  EXPECT_TRUE(grad.isZero(0.0));

  // Outside the range but the advantage pulls the ratio back: gradient flows.
  mb.old_log_probs = {logp - 0.5};
  mb.advantages = {-1.0};
  ppo_loss(net, mb, cfg, &grad);
  EXPECT_GT(grad.norm(), 0.0);
}

namespace {

RolloutBatch bandit_batch(const PolicyValueNet& net, int n, Rng& rng) {
  RolloutBatch b;
  const std::vector<double> obs{1.0};
  for (int i = 0; i < n; ++i) {
    const auto a = net.act(obs, rng);
    agent::Transition t;
    t.observation = obs;
    t.action = a.action;
    t.log_prob = a.log_prob;
    t.value = a.value;
    t.reward = a.action == 0 ? 1.0 : 0.0;
    t.terminal = true;
    b.transitions.push_back(t);
    b.segments.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), SegmentEnd::Terminal, std::nullopt});
  }
  return b;
}

}  // namespace

TEST(PpoLearner, BanditConvergesWithin200Iterations) {
  Rng rng(16);
  PolicyValueNet net(1, 2, NetConfig{}, rng);
  PpoConfig cfg;
  cfg.minibatch_size = 64;
  PpoLearner learner(net, cfg);
  int iterations = 0;
  const std::vector<double> obs{1.0};
  while (std::exp(net.log_probs(obs)[0]) <= 0.99 && iterations < 200) {
    auto b = bandit_batch(net, 128, rng);
    compute_gae(b, cfg.gamma, cfg.lambda);
    learner.update(b, rng);
    ++iterations;
  }
  EXPECT_GT(std::exp(net.log_probs(obs)[0]), 0.99) << "after " << iterations << " iterations";
}

TEST(PpoLearner, ZeroLearningRateLeavesParametersBitExact) {
  Rng rng(17);
  PolicyValueNet net(1, 2, NetConfig{}, rng);
  PpoConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.entropy_coef = 0.05;
  PpoLearner learner(net, cfg);
  const Eigen::VectorXd p0 = net.policy().params(), v0 = net.value_net().params();
  auto b = bandit_batch(net, 100, rng);
  compute_gae(b, cfg.gamma, cfg.lambda);
  const auto report = learner.update(b, rng);
  EXPECT_EQ(net.policy().params(), p0);
  EXPECT_EQ(net.value_net().params(), v0);
  EXPECT_EQ(report.minibatches, static_cast<std::size_t>(cfg.epochs * 2));
  EXPECT_EQ(learner.parameter_writes(), report.minibatches);
}

TEST(PpoLearner, EntropyAloneIsNonDecreasing) {
  Rng rng(18);
  NetConfig nc;
  nc.policy_output_gain = 5.0;  // start well away from the uniform policy
  PolicyValueNet net(1, 4, nc, rng);
  PpoConfig cfg;
  cfg.entropy_coef = 1.0;
  cfg.value_coef = 0.0;
  cfg.epochs = 1;
  cfg.learning_rate = 1e-5;  // small enough that Adam stays short of the maximum
  PpoLearner learner(net, cfg);
  auto b = bandit_batch(net, 64, rng);
  compute_gae(b, cfg.gamma, cfg.lambda);
  for (auto& a : b.advantages) a = 0.0;
  const std::vector<double> obs{1.0};
  auto entropy = [&] {
    double h = 0.0;
    for (double lp : net.log_probs(obs)) h -= std::exp(lp) * lp;
    return h;
  };
  const double start = entropy();
  double prev = start;
  for (int i = 0; i < 200; ++i) {
    learner.update(b, rng);
    const double h = entropy();
    EXPECT_GE(h, prev) << "update " << i;
    prev = h;
  }
  EXPECT_GT(prev, start + 0.01);
  EXPECT_LT(prev, std::log(4.0));
}

TEST(PpoLearner, NonFiniteGradientAbortsWithoutWriting) {
  Rng rng(19);
  PolicyValueNet net(1, 2, NetConfig{}, rng);
  PpoConfig cfg;
  PpoLearner learner(net, cfg);
  auto b = bandit_batch(net, 64, rng);
  compute_gae(b, cfg.gamma, cfg.lambda);
  b.value_targets[3] = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd p0 = net.policy().params();
  try {
    learner.update(b, rng);
    FAIL() << "expected NonFiniteGradient";
  } catch (const NonFiniteGradient& e) {
    EXPECT_EQ(e.minibatch(), 0u);
  }
  EXPECT_EQ(net.policy().params(), p0);
  EXPECT_EQ(learner.parameter_writes(), 0u);
}

TEST(PpoConfig, ValidationNamesTheField) {
  PpoConfig c;
  c.gamma = 0.0;
  try {
    c.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()).rfind("ppo.gamma", 0), 0u);
  }
  c = PpoConfig{};
  c.entropy_coef = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(PpoConfig{}.validate());
}

TEST(Normalized, ZeroMeanUnitVariance) {
  const auto n = normalized({1.0, 2.0, 3.0, 4.0});
  double mean = 0.0, var = 0.0;
  for (double x : n) mean += x / 4.0;
  for (double x : n) var += (x - mean) * (x - mean) / 4.0;
  EXPECT_NEAR(mean, 0.0, 1e-15);
  EXPECT_NEAR(var, 1.0, 1e-7);
  for (double x : normalized({5.0, 5.0})) EXPECT_EQ(x, 0.0);
}
