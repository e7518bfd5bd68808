#include "restart/agent/policy_value_net.hpp"

#include <cmath>

namespace restart::agent {

namespace {

std::vector<int> layout(int in, int out, const NetConfig& cfg) {
  std::vector<int> sizes{in};
  for (int i = 0; i < cfg.hidden_layers; ++i) sizes.push_back(cfg.hidden);
  sizes.push_back(out);
  return sizes;
}

Eigen::MatrixXd column(std::span<const double> obs) {
  return Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
}

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw NonFiniteActivation();
}

constexpr std::uint8_t kTag = 'N';

}  // namespace

Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const double mx = logits.col(j).maxCoeff();
    const double lse = mx + std::log((logits.col(j).array() - mx).exp().sum());
    out.col(j) = logits.col(j).array() - lse;
  }
  return out;
}

PolicyValueNet::PolicyValueNet(int observation_size, int num_actions, const NetConfig& cfg, Rng& init_rng)
    : policy_(layout(observation_size, num_actions, cfg)), value_(layout(observation_size, 1, cfg)) {
  policy_.init_orthogonal(init_rng, cfg.hidden_gain, cfg.policy_output_gain);
  value_.init_orthogonal(init_rng, cfg.hidden_gain, cfg.value_output_gain);
}

PolicyValueNet::Act PolicyValueNet::act(std::span<const double> obs, Rng& rng) const {
  const Eigen::MatrixXd x = column(obs);
  const Eigen::MatrixXd logp = log_softmax(policy_.forward(x));
  const Eigen::MatrixXd v = value_.forward(x);
  require_finite(logp);
  require_finite(v);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  int action = static_cast<int>(logp.rows()) - 1;
  for (Eigen::Index a = 0; a < logp.rows(); ++a) {
    acc += std::exp(logp(a, 0));
    if (u < acc) {
      action = static_cast<int>(a);
      break;
    }
  }
  return {action, logp(action, 0), v(0, 0)};
}

double PolicyValueNet::value(std::span<const double> obs) const {
  const Eigen::MatrixXd v = value_.forward(column(obs));
  require_finite(v);
  return v(0, 0);
}

std::vector<double> PolicyValueNet::log_probs(std::span<const double> obs) const {
  const Eigen::MatrixXd logp = log_softmax(policy_.forward(column(obs)));
  require_finite(logp);
  return std::vector<double>(logp.data(), logp.data() + logp.size());
}

Bytes PolicyValueNet::serialize() const {
  ByteWriter w;
  w.u8(kTag);
  for (const Mlp* net : {&policy_, &value_}) {
    w.u32(static_cast<std::uint32_t>(net->layer_sizes().size()));
    for (int s : net->layer_sizes()) w.i32(s);
    for (Eigen::Index i = 0; i < net->params().size(); ++i) w.f64(net->params()[i]);
  }
  return encode_frame(kSnapshotVersion, w.data());
}

void PolicyValueNet::load(std::span<const std::uint8_t> frame) {
  const Bytes body = decode_frame(frame, kSnapshotVersion);
  ByteReader r(body);
  if (r.u8() != kTag) throw FramingError("not a parameter checkpoint");
  Eigen::VectorXd policy_params;
  Eigen::VectorXd value_params;
  for (Mlp* net : {&policy_, &value_}) {
    const auto n = r.u32();
    if (n != net->layer_sizes().size()) throw FramingError("checkpoint architecture mismatch");
    for (int s : net->layer_sizes()) {
      if (r.i32() != s) throw FramingError("checkpoint architecture mismatch");
    }
    Eigen::VectorXd p(net->params().size());
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = r.f64();
    (net == &policy_ ? policy_params : value_params) = std::move(p);
  }
  r.expect_done("parameter checkpoint");
  policy_.params() = std::move(policy_params);
  value_.params() = std::move(value_params);
}

}  // namespace restart::agent
