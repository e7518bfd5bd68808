#pragma once

#include <functional>

#include "restart/agent/policy_value_net.hpp"
#include "restart/env/environment.hpp"
#include "restart/train/experiment_config.hpp"

namespace restart::train {

// Runs protocol.episodes episodes from the environment's own initial-state
// distribution with limit t_env and returns the mean undiscounted return or
// the fraction of episodes that end in a success state. Takes no memory and
// only a const view of the network.
double evaluate(env::Environment& env, const agent::PolicyValueNet& net, const EvalProtocol& protocol, Rng& rng);

// Same protocol for an arbitrary policy; protocol.greedy is ignored.
using Policy = std::function<int(const Observation&, Rng&)>;
double evaluate(env::Environment& env, const Policy& policy, const EvalProtocol& protocol, Rng& rng);

}  // namespace restart::train
