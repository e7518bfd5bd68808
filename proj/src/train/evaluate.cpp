#include "restart/train/evaluate.hpp"

#include <algorithm>

namespace restart::train {

double evaluate(env::Environment& env, const Policy& policy, const EvalProtocol& protocol, Rng& rng) {
  double total = 0.0;
  for (int ep = 0; ep < protocol.episodes; ++ep) {
    auto [obs, snap] = env.reset(rng);
    double ret = 0.0;
    while (!env.episode_over()) {
      auto out = env.step(policy(obs, rng));
      ret += out.reward;
      obs = std::move(out.observation);
    }
    total += protocol.metric == Metric::SuccessRate ? (env.at_success() ? 1.0 : 0.0) : ret;
  }
  return total / protocol.episodes;
}

double evaluate(env::Environment& env, const agent::PolicyValueNet& net, const EvalProtocol& protocol, Rng& rng) {
  const Policy policy = [&](const Observation& obs, Rng& r) {
    if (!protocol.greedy) return net.act(obs, r).action;
    const auto logp = net.log_probs(obs);
    return static_cast<int>(std::max_element(logp.begin(), logp.end()) - logp.begin());
  };
  return evaluate(env, policy, protocol, rng);
}

}  // namespace restart::train
