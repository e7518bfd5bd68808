#include "restart/agent/mlp.hpp"

#include <stdexcept>

namespace restart::agent {

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("an MLP needs at least an input and an output layer");
  Eigen::Index total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) throw std::invalid_argument("layer sizes must be positive");
    offsets_.push_back(total);
    total += static_cast<Eigen::Index>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
  }
  params_ = Eigen::VectorXd::Zero(total);
}

Eigen::Map<const Eigen::MatrixXd> Mlp::weight(std::size_t layer) const {
  return {params_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(std::size_t layer) const {
  return {params_.data() + offsets_[layer] + static_cast<Eigen::Index>(sizes_[layer]) * sizes_[layer + 1],
          sizes_[layer + 1]};
}

void Mlp::init_orthogonal(Rng& rng, double hidden_gain, double output_gain) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t layers = offsets_.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const Eigen::Index rows = sizes_[l + 1];
    const Eigen::Index cols = sizes_[l];
    const Eigen::Index big = std::max(rows, cols);
    const Eigen::Index small = std::min(rows, cols);
    Eigen::MatrixXd g(big, small);
    for (Eigen::Index j = 0; j < small; ++j)
      for (Eigen::Index i = 0; i < big; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(small, small);
    for (Eigen::Index j = 0; j < small; ++j) {
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    const double gain = l + 1 == layers ? output_gain : hidden_gain;
    Eigen::Map<Eigen::MatrixXd> w(params_.data() + offsets_[l], rows, cols);
    w = gain * (rows >= cols ? q : Eigen::MatrixXd(q.transpose()));
    Eigen::Map<Eigen::VectorXd>(params_.data() + offsets_[l] + rows * cols, rows).setZero();
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache* cache) const {
  if (input.rows() != sizes_.front()) throw std::invalid_argument("MLP input has the wrong size");
  const std::size_t layers = offsets_.size();
  if (cache) {
    cache->activations.resize(layers + 1);
    cache->activations[0] = input;
  }
  Eigen::MatrixXd x = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd y = weight(l) * x;
    y.colwise() += bias(l);
    if (l + 1 < layers) y = y.array().tanh().matrix();
    if (cache) cache->activations[l + 1] = y;
    x = std::move(y);
  }
  return x;
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& grad_output, Eigen::Ref<Eigen::VectorXd> grad) const {
  const std::size_t layers = offsets_.size();
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer has the wrong size");
  Eigen::MatrixXd delta = grad_output;
  for (std::size_t l = layers; l-- > 0;) {
    const Eigen::Index rows = sizes_[l + 1];
    const Eigen::Index cols = sizes_[l];
    Eigen::Map<Eigen::MatrixXd> dw(grad.data() + offsets_[l], rows, cols);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + offsets_[l] + rows * cols, rows);
    dw.noalias() += delta * cache.activations[l].transpose();
    db += delta.rowwise().sum();
    if (l > 0) {
      const auto& h = cache.activations[l];
      Eigen::MatrixXd back = weight(l).transpose() * delta;
      delta = (back.array() * (1.0 - h.array().square())).matrix();
    }
  }
}

}  // namespace restart::agent
