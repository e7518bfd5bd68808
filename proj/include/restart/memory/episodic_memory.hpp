#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "restart/env/environment.hpp"
#include "restart/memory/restart_sample.hpp"

namespace restart::memory {

class OrphanSubEpisode : public std::runtime_error {
 public:
  OrphanSubEpisode() : std::runtime_error("parent category was evicted before the sub-episode completed") {}
};

struct ParentEpisode {
  std::vector<EpisodeStep> steps;  // steps[k].state.t == k
  double ret = 0.0;                // undiscounted return
};

struct SubEpisodeRecord {
  std::size_t parent_index = 0;  // category slot
  int start_t = 0;
  double prefix_return = 0.0;
  std::vector<EpisodeStep> lineage;  // linking path, lineage[k].state.t == k, size start_t
  std::vector<EpisodeStep> steps;    // own states, steps[k].state.t == start_t + k
  double augmented_return = 0.0;
  std::uint64_t seq = 0;

  // The eligible state pool is the linking path followed by the own states,
  // so pool entry j always has t == j.
  std::size_t pool_size() const { return lineage.size() + steps.size(); }
  const EpisodeStep& pool_at(std::size_t j) const {
    return j < lineage.size() ? lineage[j] : steps[j - lineage.size()];
  }
};

struct EpisodeCategory {
  std::uint64_t id = 0;
  std::uint64_t seq = 0;
  ParentEpisode parent;
  std::vector<SubEpisodeRecord> subs;
  double g_bar = 0.0;  // max over the parent return and all augmented returns

  double recompute_g_bar() const;
  std::size_t episode_count() const { return 1 + subs.size(); }
  double episode_return(std::size_t episode) const;
  std::size_t pool_size(std::size_t episode) const;
  const EpisodeStep& pool_at(std::size_t episode, std::size_t j) const;
};

/// Nested store of the most rewarding episodes.
///
/// Episodes started from the environment's initial-state distribution become
/// parents of their own category; episodes started from a sampled state are
/// filed as sub-episodes of the category that state came from. Sampling draws
/// a category, then an episode within it, both with probability
/// p^alpha / sum p^alpha where p = G - min(0, min G) + epsilon, then a state
/// uniformly from the episode's pool. The returned time limit is t_env - t.
class EpisodicMemory {
 public:
  EpisodicMemory(std::size_t parent_capacity, std::size_t sub_capacity, double alpha, double epsilon, int t_env);

  // Accepted when a category slot is free or the return beats the lowest
  // G_bar (evicting that category, oldest first among ties).
  bool offer_parent(std::vector<EpisodeStep> steps);
  // Accepted when the parent's sub-list has room or the augmented return beats
  // the lowest stored one (evicting it, oldest first among ties).
  // Throws OrphanSubEpisode if the category no longer exists.
  bool offer_sub(const EpisodicLink& link, std::vector<EpisodeStep> steps);

  // Throws EmptyMemory.
  RestartSample sample(Rng& rng);

  std::vector<double> category_probabilities() const;
  std::vector<double> episode_probabilities(std::size_t category) const;

  // min(0, min_i returns_i); 0 for an empty span.
  static double return_offset(std::span<const double> returns);
  // p_i^alpha / sum_k p_k^alpha with p_i = returns_i - offset + epsilon.
  static std::vector<double> return_probabilities(std::span<const double> returns, double alpha, double epsilon);

  bool contains(std::uint64_t category_id) const;
  std::size_t size() const { return categories_.size(); }
  bool empty() const { return categories_.empty(); }
  std::size_t total_episodes() const;
  const std::vector<EpisodeCategory>& categories() const { return categories_; }
  std::size_t parent_capacity() const { return parent_capacity_; }
  std::size_t sub_capacity() const { return sub_capacity_; }
  int t_env() const { return t_env_; }
  std::uint64_t reads() const { return reads_; }

  Bytes serialize() const;
  static EpisodicMemory deserialize(std::span<const std::uint8_t> frame);

 private:
  std::size_t pick(std::span<const double> probabilities, Rng& rng) const;
  void check_steps(const std::vector<EpisodeStep>& steps, int first_t) const;

  std::size_t parent_capacity_;
  std::size_t sub_capacity_;
  double alpha_;
  double epsilon_;
  int t_env_;
  std::vector<EpisodeCategory> categories_;
  std::uint64_t next_id_ = 1;
  std::uint64_t next_seq_ = 0;
  std::uint64_t reads_ = 0;
};

}  // namespace restart::memory
