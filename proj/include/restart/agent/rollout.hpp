#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "restart/env/environment.hpp"

namespace restart::agent {

enum class StartOrigin : std::uint8_t { EnvStart, AugmentedStart };

struct Transition {
  Observation observation;
  int action = 0;
  double reward = 0.0;
  double log_prob = 0.0;
  double value = 0.0;
  bool terminal = false;
  bool timeout = false;
  StartOrigin origin = StartOrigin::EnvStart;
};

enum class SegmentEnd {
  Terminal,  // genuine terminal state: successor value is 0
  Timeout,   // time limit reached: bootstrap from the final state
  Cut,       // iteration boundary split the episode: bootstrap as well
};

// Transitions [begin, end) of one episode or episode fragment.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  SegmentEnd end_kind = SegmentEnd::Terminal;
  std::optional<double> bootstrap_value;  // v(s_{T+1}) for Timeout and Cut
};

struct RolloutBatch {
  std::vector<Transition> transitions;
  std::vector<Segment> segments;
  std::vector<StateSnapshot> states;  // state before each transition, when recorded

  // Filled by compute_gae.
  std::vector<double> td_errors;
  std::vector<double> advantages;
  std::vector<double> value_targets;

  std::size_t size() const { return transitions.size(); }
  // Segments must tile the transitions in order; flags must match segment ends.
  void validate() const;
};

class MissingBootstrap : public std::invalid_argument {
 public:
  explicit MissingBootstrap(std::size_t segment);
  std::size_t segment() const { return segment_; }

 private:
  std::size_t segment_;
};

// delta_i = r_i + gamma * v(s'_i) - v(s_i); v(s') is the next transition's
// value inside a segment, 0 after a terminal step, and the bootstrap value at
// a Timeout or Cut end. Throws MissingBootstrap.
std::vector<double> td_errors(const RolloutBatch& batch, double gamma);

// Fills td_errors, advantages (A_t = sum_l (gamma lambda)^l delta_{t+l} within
// the segment) and value_targets (A_t + v(s_t)).
void compute_gae(RolloutBatch& batch, double gamma, double lambda);

}  // namespace restart::agent
