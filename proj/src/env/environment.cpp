#include "restart/env/environment.hpp"

namespace restart::env {

void TimeLimitConfig::validate() const {
  if (t_env < 1) throw std::invalid_argument("t_env must be positive");
  if (mode == AugMode::Fixed && (t_aug < 1 || t_aug > t_env)) {
    throw std::invalid_argument("t_aug must lie in [1, t_env]");
  }
}

Environment::Environment(TimeLimitConfig limits) : limits_(limits) { limits_.validate(); }

std::pair<Observation, StateSnapshot> Environment::reset(Rng& rng) {
  sample_initial_state(rng);
  clock_ = 0;
  limit_ = limits_.t_env;
  over_ = false;
  return {observe(), snapshot()};
}

StateSnapshot Environment::snapshot() const {
  ByteWriter w;
  w.u8(kind_tag());
  w.u32(params_fingerprint());
  encode_state(w);
  return StateSnapshot{std::move(w).data(), static_cast<std::uint32_t>(clock_)};
}

Observation Environment::restore(const StateSnapshot& s) {
  try {
    ByteReader r(s.payload);
    if (r.u8() != kind_tag()) throw MalformedSnapshot("snapshot belongs to a different environment");
    if (r.u32() != params_fingerprint()) {
      throw MalformedSnapshot("snapshot was taken with different environment parameters");
    }
    decode_state(r);
    r.expect_done("environment state");
  } catch (const FramingError& e) {
    throw MalformedSnapshot(e.what());
  }
  if (limits_.mode == AugMode::Remaining) {
    if (s.t >= static_cast<std::uint32_t>(limits_.t_env)) {
      throw std::invalid_argument("snapshot time step leaves no steps before the time limit");
    }
    clock_ = static_cast<int>(s.t);
    limit_ = limits_.t_env;
  } else {
    clock_ = 0;
    limit_ = limits_.t_aug;
  }
  over_ = false;
  ++restores_;
  return observe();
}

StepOutcome Environment::step(int action) {
  if (over_) throw EpisodeOver("step called after the episode ended");
  if (action < 0 || action >= num_actions()) throw std::out_of_range("action index out of range");
  const Dynamics d = apply(action);
  ++clock_;
  StepOutcome out;
  out.observation = observe();
  out.reward = d.reward;
  out.terminal = d.terminal;
  out.timeout = !d.terminal && clock_ >= limit_;
  over_ = out.terminal || out.timeout;
  return out;
}

Observation Environment::observe() const {
  Observation obs(static_cast<std::size_t>(observation_size()), 0.0);
  write_observation(obs);
  return obs;
}

}  // namespace restart::env
