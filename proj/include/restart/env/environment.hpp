#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "restart/env/snapshot.hpp"

namespace restart {

using Rng = std::mt19937_64;
using Observation = std::vector<double>;

namespace env {

// How the clock is set when an episode starts from a restored snapshot.
enum class AugMode {
  Fixed,      // clock restarts at 0 with limit t_aug, regardless of snapshot.t
  Remaining,  // clock continues from snapshot.t with limit t_env
};

struct TimeLimitConfig {
  int t_env = 1000;
  AugMode mode = AugMode::Fixed;
  int t_aug = 10;  // only meaningful for Fixed

  // Throws std::invalid_argument unless t_env >= 1 and 1 <= t_aug <= t_env.
  void validate() const;
};

struct StepOutcome {
  Observation observation;
  double reward = 0.0;
  bool terminal = false;  // genuine terminal state only
  bool timeout = false;   // clock exhausted; never set together with terminal
  std::map<std::string, double> info;
};

class EpisodeOver : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic, fully snapshottable environment with a built-in time limit.
///
/// Derived classes supply the dynamics; this base owns the episode clock,
/// the timeout/terminal distinction and the snapshot payload envelope
/// ([u8 kind][u32 parameter fingerprint][state]).
class Environment {
 public:
  explicit Environment(TimeLimitConfig limits);
  virtual ~Environment() = default;

  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  // Draws a state from the initial-state distribution; clock 0, limit t_env.
  std::pair<Observation, StateSnapshot> reset(Rng& rng);
  StateSnapshot snapshot() const;
  // Throws MalformedSnapshot if the payload does not decode for this environment.
  Observation restore(const StateSnapshot& s);
  // Throws EpisodeOver after a terminal step or timeout.
  StepOutcome step(int action);
  Observation observe() const;

  int clock() const { return clock_; }
  int limit() const { return limit_; }
  bool episode_over() const { return over_; }
  const TimeLimitConfig& limits() const { return limits_; }
  std::uint64_t restore_count() const { return restores_; }

  virtual int num_actions() const = 0;
  virtual int observation_size() const = 0;
  // Whether the current state counts as a success for evaluation.
  virtual bool at_success() const = 0;
  virtual std::string_view name() const = 0;

 protected:
  struct Dynamics {
    double reward;
    bool terminal;
  };

  virtual void sample_initial_state(Rng& rng) = 0;
  virtual Dynamics apply(int action) = 0;
  virtual void write_observation(std::span<double> out) const = 0;
  virtual void encode_state(ByteWriter& w) const = 0;
  // Must throw MalformedSnapshot on out-of-range values.
  virtual void decode_state(ByteReader& r) = 0;
  virtual std::uint8_t kind_tag() const = 0;
  virtual std::uint32_t params_fingerprint() const = 0;

 private:
  TimeLimitConfig limits_;
  int clock_ = 0;
  int limit_ = 0;
  bool over_ = true;
  std::uint64_t restores_ = 0;
};

}  // namespace env
}  // namespace restart
