#include "restart/agent/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace restart::agent {

void PpoConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("ppo." + field + ": " + why);
  };
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma", "must lie in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail("lambda", "must lie in [0, 1]");
  if (!(clip > 0.0 && clip < 1.0)) fail("clip", "must lie in (0, 1)");
  if (epochs < 1) fail("epochs", "must be positive");
  if (minibatch_size < 1) fail("minibatch_size", "must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) fail("learning_rate", "must be non-negative");
  if (!(entropy_coef >= 0.0) || !std::isfinite(entropy_coef)) fail("entropy_coef", "must be non-negative");
  if (!(value_coef >= 0.0) || !std::isfinite(value_coef)) fail("value_coef", "must be non-negative");
  if (steps_per_iteration < 1) fail("steps_per_iteration", "must be positive");
  if (!(adam_epsilon > 0.0)) fail("adam_epsilon", "must be positive");
}

NonFiniteGradient::NonFiniteGradient(std::size_t minibatch)
    : std::runtime_error("non-finite gradient in minibatch " + std::to_string(minibatch)), minibatch_(minibatch) {}

LossTerms ppo_loss(const PolicyValueNet& net, const Minibatch& mb, const PpoConfig& cfg, Eigen::VectorXd* grad) {
  const auto m = static_cast<Eigen::Index>(mb.size());
  const double inv_m = 1.0 / static_cast<double>(m);
  Mlp::Cache pcache;
  Mlp::Cache vcache;
  const Eigen::MatrixXd logits = net.policy().forward(mb.observations, grad ? &pcache : nullptr);
  const Eigen::MatrixXd values = net.value_net().forward(mb.observations, grad ? &vcache : nullptr);
  const Eigen::MatrixXd logp = log_softmax(logits);
  const Eigen::MatrixXd probs = logp.array().exp();

  LossTerms out;
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(logits.rows(), m);
  Eigen::MatrixXd dvalues(1, m);
  std::size_t clipped = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const int a = mb.actions[idx];
    const double adv = mb.advantages[idx];
    const double log_ratio = logp(a, i) - mb.old_log_probs[idx];
    const double ratio = std::exp(log_ratio);
    const double clipped_ratio = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
    const double unclipped_obj = ratio * adv;
    const double clipped_obj = clipped_ratio * adv;
    out.policy -= std::min(unclipped_obj, clipped_obj);
    if (std::abs(ratio - 1.0) > cfg.clip) ++clipped;
    out.approx_kl += -log_ratio;

    const double entropy = -(probs.col(i).array() * logp.col(i).array()).sum();
    out.entropy += entropy;

    const double err = values(0, i) - mb.value_targets[idx];
    out.value += err * err;

    if (grad) {
      // d(-min(.))/dlogp_a is -ratio * adv on the unclipped branch, 0 when the clip is active.
      const double g_logp = unclipped_obj <= clipped_obj ? -ratio * adv * inv_m : 0.0;
      for (Eigen::Index k = 0; k < logits.rows(); ++k) {
        const double p = probs(k, i);
        double d = g_logp * ((k == a ? 1.0 : 0.0) - p);
        d += cfg.entropy_coef * inv_m * p * (logp(k, i) + entropy);
        dlogits(k, i) = d;
      }
      dvalues(0, i) = 2.0 * cfg.value_coef * err * inv_m;
    }
  }
  out.policy *= inv_m;
  out.value *= inv_m;
  out.entropy *= inv_m;
  out.approx_kl *= inv_m;
  out.clip_fraction = static_cast<double>(clipped) * inv_m;
  out.total = out.policy + cfg.value_coef * out.value - cfg.entropy_coef * out.entropy;

  if (grad) {
    const auto np = static_cast<Eigen::Index>(net.policy().num_params());
    const auto nv = static_cast<Eigen::Index>(net.value_net().num_params());
    *grad = Eigen::VectorXd::Zero(np + nv);
    net.policy().backward(pcache, dlogits, grad->head(np));
    net.value_net().backward(vcache, dvalues, grad->tail(nv));
  }
  return out;
}

std::vector<double> normalized(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - mean) / (sd + 1e-8);
  return out;
}

PpoLearner::PpoLearner(PolicyValueNet& net, PpoConfig cfg)
    : net_(net),
      cfg_(cfg),
      policy_opt_(static_cast<Eigen::Index>(net.policy().num_params()),
                  AdamConfig{cfg.learning_rate, 0.9, 0.999, cfg.adam_epsilon}),
      value_opt_(static_cast<Eigen::Index>(net.value_net().num_params()),
                 AdamConfig{cfg.learning_rate, 0.9, 0.999, cfg.adam_epsilon}) {
  cfg_.validate();
}

LossReport PpoLearner::update(const RolloutBatch& batch, Rng& rng) {
  const std::size_t n = batch.size();
  if (n == 0) return {};
  if (batch.advantages.size() != n || batch.value_targets.size() != n) {
    throw std::invalid_argument("batch has no computed advantages");
  }
  const std::vector<double> adv = normalized(batch.advantages);
  const Eigen::Index obs_size = net_.observation_size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto np = static_cast<Eigen::Index>(net_.policy().num_params());
  const auto nv = static_cast<Eigen::Index>(net_.value_net().num_params());
  const auto mb_size = static_cast<std::size_t>(cfg_.minibatch_size);

  LossReport report;
  Eigen::VectorXd grad;
  Minibatch mb;
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += mb_size) {
      const std::size_t count = std::min(mb_size, n - start);
      mb.observations.resize(obs_size, static_cast<Eigen::Index>(count));
      mb.actions.resize(count);
      mb.old_log_probs.resize(count);
      mb.advantages.resize(count);
      mb.value_targets.resize(count);
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = order[start + k];
        const auto& tr = batch.transitions[i];
        mb.observations.col(static_cast<Eigen::Index>(k)) =
            Eigen::Map<const Eigen::VectorXd>(tr.observation.data(), obs_size);
        mb.actions[k] = tr.action;
        mb.old_log_probs[k] = tr.log_prob;
        mb.advantages[k] = adv[i];
        mb.value_targets[k] = batch.value_targets[i];
      }
      const LossTerms terms = ppo_loss(net_, mb, cfg_, &grad);
      if (!grad.allFinite() || !std::isfinite(terms.total)) throw NonFiniteGradient(report.minibatches);
      policy_opt_.step(net_.policy().params(), grad.head(np));
      value_opt_.step(net_.value_net().params(), grad.tail(nv));
      ++writes_;
      report.policy_loss += terms.policy;
      report.value_loss += terms.value;
      report.entropy += terms.entropy;
      report.clip_fraction += terms.clip_fraction;
      report.approx_kl += terms.approx_kl;
      ++report.minibatches;
    }
  }
  const double k = static_cast<double>(report.minibatches);
  report.policy_loss /= k;
  report.value_loss /= k;
  report.entropy /= k;
  report.clip_fraction /= k;
  report.approx_kl /= k;
  return report;
}

}  // namespace restart::agent
