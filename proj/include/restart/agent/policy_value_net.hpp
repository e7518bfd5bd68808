#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "restart/agent/mlp.hpp"
#include "restart/env/binary_io.hpp"

namespace restart::agent {

class NonFiniteActivation : public std::runtime_error {
 public:
  NonFiniteActivation() : std::runtime_error("network produced a non-finite activation") {}
};

struct NetConfig {
  int hidden = 64;
  int hidden_layers = 2;
  double hidden_gain = 1.4142135623730951;
  double policy_output_gain = 0.01;
  double value_output_gain = 1.0;
};

// Column-wise log-softmax of a logits matrix (actions x batch).
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits);

/// Separate policy (categorical logits) and state-value networks.
class PolicyValueNet {
 public:
  struct Act {
    int action = 0;
    double log_prob = 0.0;
    double value = 0.0;
  };

  PolicyValueNet(int observation_size, int num_actions, const NetConfig& cfg, Rng& init_rng);

  // Samples from the categorical head. Throws NonFiniteActivation.
  Act act(std::span<const double> obs, Rng& rng) const;
  double value(std::span<const double> obs) const;
  std::vector<double> log_probs(std::span<const double> obs) const;

  Mlp& policy() { return policy_; }
  const Mlp& policy() const { return policy_; }
  Mlp& value_net() { return value_; }
  const Mlp& value_net() const { return value_; }
  int observation_size() const { return policy_.input_size(); }
  int num_actions() const { return policy_.output_size(); }
  std::size_t num_params() const { return policy_.num_params() + value_.num_params(); }

  // Parameter checkpoint in the shared framing.
  Bytes serialize() const;
  // Throws FramingError if the architecture differs.
  void load(std::span<const std::uint8_t> frame);

 private:
  Mlp policy_;
  Mlp value_;
};

}  // namespace restart::agent
