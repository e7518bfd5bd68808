#pragma once

#include <cstddef>
#include <vector>

namespace restart::memory {

/// Complete binary tree over `capacity` leaf weights whose internal nodes hold
/// the sum of their children. Supports O(log n) weight updates and
/// proportional lookup.
///
/// Internal nodes are always recomputed as left + right (never adjusted by a
/// delta), so the parent/children identity holds exactly in floating point.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  double total() const { return nodes_[1]; }
  double weight(std::size_t leaf) const;

  // Weight must be finite and non-negative.
  void set(std::size_t leaf, double weight);

  // Leaf whose cumulative-weight interval contains `mass`, for mass in [0, total()).
  // Leaves with zero weight are never returned while total() > 0.
  std::size_t find(double mass) const;

  // Largest |node - (left + right)| over internal nodes.
  double max_inconsistency() const;

  // Test hook: perturbs an internal node without repairing its ancestors.
  void corrupt_node_for_testing(std::size_t node, double delta) { nodes_[node] += delta; }
  std::size_t internal_nodes() const { return leaves_ - 1; }

 private:
  std::size_t capacity_;
  std::size_t leaves_;        // power of two >= capacity
  std::vector<double> nodes_; // 1-based heap layout, leaves at [leaves_, 2 * leaves_)
};

}  // namespace restart::memory
