#pragma once

#include <Eigen/Dense>
#include <vector>

#include "restart/env/environment.hpp"

namespace restart::agent {

/// Fully connected network with tanh hidden layers and a linear output layer.
///
/// All weights live in one flat parameter vector: for each layer, the
/// column-major weight matrix (fan_out x fan_in) followed by the bias.
/// Inputs and outputs are column-per-sample matrices.
class Mlp {
 public:
  struct Cache {
    // activations[0] is the input; activations[l] the output of layer l.
    std::vector<Eigen::MatrixXd> activations;
  };

  explicit Mlp(std::vector<int> layer_sizes);

  void init_orthogonal(Rng& rng, double hidden_gain, double output_gain);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache* cache = nullptr) const;
  // Adds dLoss/dparams to `grad` given dLoss/doutput.
  void backward(const Cache& cache, const Eigen::MatrixXd& grad_output, Eigen::Ref<Eigen::VectorXd> grad) const;

  std::size_t num_params() const { return static_cast<std::size_t>(params_.size()); }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

 private:
  Eigen::Map<const Eigen::MatrixXd> weight(std::size_t layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;

  std::vector<int> sizes_;
  std::vector<Eigen::Index> offsets_;  // start of each layer's weights
  Eigen::VectorXd params_;
};

}  // namespace restart::agent
