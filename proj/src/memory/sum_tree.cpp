#include "restart/memory/sum_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace restart::memory {

SumTree::SumTree(std::size_t capacity) : capacity_(capacity), leaves_(1) {
  if (capacity == 0) throw std::invalid_argument("sum tree capacity must be positive");
  while (leaves_ < capacity) leaves_ <<= 1;
  nodes_.assign(2 * leaves_, 0.0);
}

double SumTree::weight(std::size_t leaf) const {
  if (leaf >= capacity_) throw std::out_of_range("sum tree leaf out of range");
  return nodes_[leaves_ + leaf];
}

void SumTree::set(std::size_t leaf, double weight) {
  if (leaf >= capacity_) throw std::out_of_range("sum tree leaf out of range");
  if (!std::isfinite(weight) || weight < 0.0) throw std::invalid_argument("sum tree weight must be finite and non-negative");
  std::size_t node = leaves_ + leaf;
  nodes_[node] = weight;
  for (node >>= 1; node >= 1; node >>= 1) {
    nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
  }
}

std::size_t SumTree::find(double mass) const {
  std::size_t node = 1;
  while (node < leaves_) {
    const std::size_t left = 2 * node;
    // Descend right only when the left subtree cannot absorb the mass, and
    // never into an empty subtree (guards against round-off at the top end).
    if (mass < nodes_[left] || nodes_[left + 1] <= 0.0) {
      node = left;
    } else {
      mass -= nodes_[left];
      node = left + 1;
    }
  }
  std::size_t leaf = node - leaves_;
  // Round-off can still land on a zero leaf; walk back to the nearest weighted one.
  while (leaf > 0 && nodes_[leaves_ + leaf] <= 0.0) --leaf;
  return std::min(leaf, capacity_ - 1);
}

double SumTree::max_inconsistency() const {
  double worst = 0.0;
  for (std::size_t node = 1; node < leaves_; ++node) {
    worst = std::max(worst, std::abs(nodes_[node] - (nodes_[2 * node] + nodes_[2 * node + 1])));
  }
  return worst;
}

}  // namespace restart::memory
