#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace restart::agent {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-5;
};

// Adaptive moment estimation with bias correction.
class Adam {
 public:
  Adam(Eigen::Index n, AdamConfig cfg);

  void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad);

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  std::uint64_t t_ = 0;
};

}  // namespace restart::agent
