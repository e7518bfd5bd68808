#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "restart/env/environment.hpp"
#include "restart/memory/restart_sample.hpp"
#include "restart/memory/sum_tree.hpp"

namespace restart::memory {

class NonFiniteDelta : public std::invalid_argument {
 public:
  NonFiniteDelta() : std::invalid_argument("TD error is not finite") {}
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Ring buffer of states prioritised by state-value TD error.
///
/// A state pushed with TD error delta gets priority p = |delta| + epsilon and
/// is drawn with probability p^alpha / sum_k p_k^alpha. The exponent is
/// applied on write: each sum-tree leaf stores p^alpha, so sampling is a
/// single descent. No importance weights are produced.
class PrioritisedMemory {
 public:
  PrioritisedMemory(std::size_t capacity, double alpha, double epsilon, int t_aug);

  // Returns the slot written. Throws NonFiniteDelta.
  std::size_t push(StateSnapshot s, double delta);
  // Throws EmptyMemory.
  RestartSample sample(Rng& rng);
  // Throws IndexOutOfRange or NonFiniteDelta.
  void update(std::size_t slot, double delta);

  double priority(std::size_t slot) const;     // |delta| + epsilon
  double probability(std::size_t slot) const;  // leaf / total

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  int t_aug() const { return t_aug_; }
  const StateSnapshot& at(std::size_t slot) const { return items_.at(slot); }
  const SumTree& tree() const { return tree_; }
  SumTree& tree_for_testing() { return tree_; }
  std::uint64_t reads() const { return reads_; }

  Bytes serialize() const;
  static PrioritisedMemory deserialize(std::span<const std::uint8_t> frame);

 private:
  double leaf_weight(double delta, double* priority) const;

  std::size_t capacity_;
  double alpha_;
  double epsilon_;
  int t_aug_;
  SumTree tree_;
  std::vector<StateSnapshot> items_;
  std::vector<double> priorities_;
  std::size_t cursor_ = 0;
  std::uint64_t reads_ = 0;
};

}  // namespace restart::memory
