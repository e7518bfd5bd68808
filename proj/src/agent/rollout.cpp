#include "restart/agent/rollout.hpp"

#include <string>

namespace restart::agent {

MissingBootstrap::MissingBootstrap(std::size_t segment)
    : std::invalid_argument("segment " + std::to_string(segment) + " ends without a bootstrap value"),
      segment_(segment) {}

void RolloutBatch::validate() const {
  std::size_t next = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    if (seg.begin != next || seg.end <= seg.begin || seg.end > transitions.size()) {
      throw std::invalid_argument("segment " + std::to_string(s) + " does not tile the batch");
    }
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      const auto& tr = transitions[i];
      if (tr.terminal && tr.timeout) throw std::invalid_argument("transition is both terminal and timeout");
      if (tr.origin != transitions[seg.begin].origin) throw std::invalid_argument("origin changes inside a segment");
      const bool last = i + 1 == seg.end;
      if (tr.terminal != (last && seg.end_kind == SegmentEnd::Terminal) ||
          tr.timeout != (last && seg.end_kind == SegmentEnd::Timeout)) {
        throw std::invalid_argument("segment " + std::to_string(s) + " flags disagree with its end kind");
      }
    }
    next = seg.end;
  }
  if (next != transitions.size()) throw std::invalid_argument("segments do not cover the batch");
  if (!states.empty() && states.size() != transitions.size()) {
    throw std::invalid_argument("recorded states do not match transitions");
  }
}

std::vector<double> td_errors(const RolloutBatch& batch, double gamma) {
  std::vector<double> delta(batch.size(), 0.0);
  for (std::size_t s = 0; s < batch.segments.size(); ++s) {
    const auto& seg = batch.segments[s];
    double tail = 0.0;
    if (seg.end_kind != SegmentEnd::Terminal) {
      if (!seg.bootstrap_value) throw MissingBootstrap(s);
      tail = *seg.bootstrap_value;
    }
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      const auto& tr = batch.transitions[i];
      const double next = i + 1 < seg.end ? batch.transitions[i + 1].value : tail;
      delta[i] = tr.reward + gamma * next - tr.value;
    }
  }
  return delta;
}

void compute_gae(RolloutBatch& batch, double gamma, double lambda) {
  batch.td_errors = td_errors(batch, gamma);
  batch.advantages.assign(batch.size(), 0.0);
  batch.value_targets.assign(batch.size(), 0.0);
  for (const auto& seg : batch.segments) {
    double running = 0.0;
    for (std::size_t i = seg.end; i-- > seg.begin;) {
      running = batch.td_errors[i] + gamma * lambda * running;
      batch.advantages[i] = running;
      batch.value_targets[i] = running + batch.transitions[i].value;
    }
  }
}

}  // namespace restart::agent
