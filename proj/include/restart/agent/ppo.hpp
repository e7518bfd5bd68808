#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "restart/agent/adam.hpp"
#include "restart/agent/policy_value_net.hpp"
#include "restart/agent/rollout.hpp"

namespace restart::agent {

struct PpoConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip = 0.2;
  int epochs = 10;
  int minibatch_size = 64;
  double learning_rate = 3e-4;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  int steps_per_iteration = 2048;
  double adam_epsilon = 1e-5;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct LossReport {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  std::size_t minibatches = 0;

  friend bool operator==(const LossReport&, const LossReport&) = default;
};

class NonFiniteGradient : public std::runtime_error {
 public:
  explicit NonFiniteGradient(std::size_t minibatch);
  std::size_t minibatch() const { return minibatch_; }

 private:
  std::size_t minibatch_;
};

// Column-per-sample view of the transitions one gradient step uses.
struct Minibatch {
  Eigen::MatrixXd observations;
  std::vector<int> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> value_targets;

  std::size_t size() const { return actions.size(); }
};

struct LossTerms {
  double total = 0.0;
  double policy = 0.0;   // mean clipped-surrogate loss
  double value = 0.0;    // mean squared value error
  double entropy = 0.0;  // mean policy entropy
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

// total = policy + value_coef * value - entropy_coef * entropy.
// When `grad` is non-null it receives dtotal/d[policy params, value params].
LossTerms ppo_loss(const PolicyValueNet& net, const Minibatch& mb, const PpoConfig& cfg, Eigen::VectorXd* grad);

/// Clipped-surrogate policy optimisation with Adam over both networks.
class PpoLearner {
 public:
  PpoLearner(PolicyValueNet& net, PpoConfig cfg);

  // Normalises the batch advantages, then runs the configured epochs of
  // shuffled minibatch steps. Throws NonFiniteGradient without touching
  // parameters for the offending minibatch.
  LossReport update(const RolloutBatch& batch, Rng& rng);

  const PpoConfig& config() const { return cfg_; }
  std::uint64_t parameter_writes() const { return writes_; }

 private:
  PolicyValueNet& net_;
  PpoConfig cfg_;
  Adam policy_opt_;
  Adam value_opt_;
  std::uint64_t writes_ = 0;
};

std::vector<double> normalized(const std::vector<double>& xs);

}  // namespace restart::agent
