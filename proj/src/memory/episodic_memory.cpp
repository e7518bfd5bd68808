#include "restart/memory/episodic_memory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace restart::memory {

namespace {

constexpr std::uint8_t kTag = 'E';

double sum_rewards(const std::vector<EpisodeStep>& steps) {
  double total = 0.0;
  for (const auto& s : steps) total += s.reward;
  return total;
}

void write_steps(ByteWriter& w, const std::vector<EpisodeStep>& steps) {
  w.u64(steps.size());
  for (const auto& s : steps) {
    write_snapshot(w, s.state);
    w.f64(s.reward);
  }
}

std::vector<EpisodeStep> read_steps(ByteReader& r) {
  const auto n = r.u64();
  if (n > r.remaining()) throw FramingError("episode length exceeds file size");
  std::vector<EpisodeStep> steps;
  steps.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    EpisodeStep s;
    s.state = read_snapshot(r);
    s.reward = r.f64();
    steps.push_back(std::move(s));
  }
  return steps;
}

}  // namespace

double EpisodeCategory::recompute_g_bar() const {
  double best = parent.ret;
  for (const auto& s : subs) best = std::max(best, s.augmented_return);
  return best;
}

double EpisodeCategory::episode_return(std::size_t episode) const {
  return episode == 0 ? parent.ret : subs.at(episode - 1).augmented_return;
}

std::size_t EpisodeCategory::pool_size(std::size_t episode) const {
  return episode == 0 ? parent.steps.size() : subs.at(episode - 1).pool_size();
}

const EpisodeStep& EpisodeCategory::pool_at(std::size_t episode, std::size_t j) const {
  return episode == 0 ? parent.steps.at(j) : subs.at(episode - 1).pool_at(j);
}

EpisodicMemory::EpisodicMemory(std::size_t parent_capacity, std::size_t sub_capacity, double alpha, double epsilon,
                               int t_env)
    : parent_capacity_(parent_capacity), sub_capacity_(sub_capacity), alpha_(alpha), epsilon_(epsilon), t_env_(t_env) {
  if (parent_capacity == 0) throw std::invalid_argument("parent capacity must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a finite non-negative number");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  if (t_env < 1) throw std::invalid_argument("t_env must be positive");
  categories_.reserve(parent_capacity);
}

void EpisodicMemory::check_steps(const std::vector<EpisodeStep>& steps, int first_t) const {
  if (steps.empty()) throw std::invalid_argument("episode has no steps");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto expected = static_cast<std::uint32_t>(first_t) + static_cast<std::uint32_t>(k);
    if (steps[k].state.t != expected) {
      throw std::invalid_argument("episode state " + std::to_string(k) + " has t = " +
                                  std::to_string(steps[k].state.t) + ", expected " + std::to_string(expected));
    }
    if (expected >= static_cast<std::uint32_t>(t_env_)) throw std::invalid_argument("episode exceeds the time limit");
  }
}

bool EpisodicMemory::offer_parent(std::vector<EpisodeStep> steps) {
  check_steps(steps, 0);
  EpisodeCategory cat;
  cat.parent.ret = sum_rewards(steps);
  cat.parent.steps = std::move(steps);
  cat.g_bar = cat.parent.ret;

  std::size_t slot = categories_.size();
  if (categories_.size() >= parent_capacity_) {
    // Lowest G_bar, oldest among ties.
    slot = 0;
    for (std::size_t i = 1; i < categories_.size(); ++i) {
      const auto& c = categories_[i];
      const auto& best = categories_[slot];
      if (c.g_bar < best.g_bar || (c.g_bar == best.g_bar && c.seq < best.seq)) slot = i;
    }
    if (!(cat.parent.ret > categories_[slot].g_bar)) return false;
  }
  cat.id = next_id_++;
  cat.seq = next_seq_++;
  if (slot == categories_.size()) {
    categories_.push_back(std::move(cat));
  } else {
    categories_[slot] = std::move(cat);
  }
  return true;
}

bool EpisodicMemory::offer_sub(const EpisodicLink& link, std::vector<EpisodeStep> steps) {
  auto it = std::find_if(categories_.begin(), categories_.end(),
                         [&](const EpisodeCategory& c) { return c.id == link.category_id; });
  if (it == categories_.end()) throw OrphanSubEpisode();
  if (link.start_t < 0 || link.lineage.size() != static_cast<std::size_t>(link.start_t)) {
    throw std::invalid_argument("sub-episode lineage does not match its start time");
  }
  check_steps(steps, link.start_t);
  if (sub_capacity_ == 0) return false;

  SubEpisodeRecord rec;
  rec.parent_index = static_cast<std::size_t>(it - categories_.begin());
  rec.start_t = link.start_t;
  rec.prefix_return = link.prefix_return;
  rec.augmented_return = link.prefix_return + sum_rewards(steps);
  rec.lineage = link.lineage;
  rec.steps = std::move(steps);

  auto& subs = it->subs;
  std::size_t slot = subs.size();
  if (subs.size() >= sub_capacity_) {
    slot = 0;
    for (std::size_t i = 1; i < subs.size(); ++i) {
      if (subs[i].augmented_return < subs[slot].augmented_return ||
          (subs[i].augmented_return == subs[slot].augmented_return && subs[i].seq < subs[slot].seq)) {
        slot = i;
      }
    }
    if (!(rec.augmented_return > subs[slot].augmented_return)) return false;
  }
  rec.seq = next_seq_++;
  if (slot == subs.size()) {
    subs.push_back(std::move(rec));
  } else {
    subs[slot] = std::move(rec);
  }
  it->g_bar = it->recompute_g_bar();
  return true;
}

double EpisodicMemory::return_offset(std::span<const double> returns) {
  if (returns.empty()) return 0.0;
  return std::min(0.0, *std::min_element(returns.begin(), returns.end()));
}

std::vector<double> EpisodicMemory::return_probabilities(std::span<const double> returns, double alpha,
                                                          double epsilon) {
  const double offset = return_offset(returns);
  std::vector<double> w(returns.size());
  double total = 0.0;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    w[i] = std::pow(returns[i] - offset + epsilon, alpha);
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

std::vector<double> EpisodicMemory::category_probabilities() const {
  std::vector<double> g(categories_.size());
  for (std::size_t i = 0; i < categories_.size(); ++i) g[i] = categories_[i].g_bar;
  return return_probabilities(g, alpha_, epsilon_);
}

std::vector<double> EpisodicMemory::episode_probabilities(std::size_t category) const {
  const auto& cat = categories_.at(category);
  std::vector<double> g(cat.episode_count());
  for (std::size_t e = 0; e < g.size(); ++e) g[e] = cat.episode_return(e);
  return return_probabilities(g, alpha_, epsilon_);
}

std::size_t EpisodicMemory::pick(std::span<const double> probabilities, Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return probabilities.size() - 1;
}

RestartSample EpisodicMemory::sample(Rng& rng) {
  if (categories_.empty()) throw EmptyMemory();
  ++reads_;
  const std::size_t c = pick(category_probabilities(), rng);
  const auto& cat = categories_[c];
  const std::size_t e = pick(episode_probabilities(c), rng);
  const std::size_t pool = cat.pool_size(e);
  const std::size_t j = std::uniform_int_distribution<std::size_t>(0, pool - 1)(rng);

  EpisodicOrigin origin;
  origin.category_index = c;
  origin.episode_index = e;
  origin.link.category_id = cat.id;
  origin.link.start_t = static_cast<int>(j);
  origin.link.lineage.reserve(j);
  for (std::size_t k = 0; k < j; ++k) {
    origin.link.lineage.push_back(cat.pool_at(e, k));
    origin.link.prefix_return += origin.link.lineage.back().reward;
  }

  RestartSample out;
  out.snapshot = cat.pool_at(e, j).state;
  out.t_aug = t_env_ - static_cast<int>(out.snapshot.t);
  out.origin = OriginKind::Episodic;
  out.slot = c;
  out.episodic = std::move(origin);
  return out;
}

bool EpisodicMemory::contains(std::uint64_t category_id) const {
  return std::any_of(categories_.begin(), categories_.end(),
                     [&](const EpisodeCategory& c) { return c.id == category_id; });
}

std::size_t EpisodicMemory::total_episodes() const {
  std::size_t n = 0;
  for (const auto& c : categories_) n += c.episode_count();
  return n;
}

Bytes EpisodicMemory::serialize() const {
  ByteWriter w;
  w.u8(kTag);
  w.u64(parent_capacity_);
  w.u64(sub_capacity_);
  w.f64(alpha_);
  w.f64(epsilon_);
  w.i32(t_env_);
  w.u64(next_id_);
  w.u64(next_seq_);
  w.u64(categories_.size());
  for (const auto& c : categories_) {
    w.u64(c.id);
    w.u64(c.seq);
    write_steps(w, c.parent.steps);
    w.u64(c.subs.size());
    for (const auto& s : c.subs) {
      w.i32(s.start_t);
      w.f64(s.prefix_return);
      w.u64(s.seq);
      write_steps(w, s.lineage);
      write_steps(w, s.steps);
    }
  }
  return encode_frame(kSnapshotVersion, w.data());
}

EpisodicMemory EpisodicMemory::deserialize(std::span<const std::uint8_t> frame) {
  const Bytes body = decode_frame(frame, kSnapshotVersion);
  ByteReader r(body);
  if (r.u8() != kTag) throw FramingError("not an episodic memory file");
  const auto parents = r.u64();
  const auto subs = r.u64();
  const double alpha = r.f64();
  const double epsilon = r.f64();
  EpisodicMemory m(parents, subs, alpha, epsilon, r.i32());
  m.next_id_ = r.u64();
  m.next_seq_ = r.u64();
  const auto n = r.u64();
  if (n > parents) throw FramingError("more categories than parent capacity");
  for (std::uint64_t i = 0; i < n; ++i) {
    EpisodeCategory c;
    c.id = r.u64();
    c.seq = r.u64();
    c.parent.steps = read_steps(r);
    c.parent.ret = sum_rewards(c.parent.steps);
    const auto ns = r.u64();
    if (ns > subs) throw FramingError("more sub-episodes than sub capacity");
    for (std::uint64_t k = 0; k < ns; ++k) {
      SubEpisodeRecord s;
      s.parent_index = i;
      s.start_t = r.i32();
      s.prefix_return = r.f64();
      s.seq = r.u64();
      s.lineage = read_steps(r);
      s.steps = read_steps(r);
      s.augmented_return = s.prefix_return + sum_rewards(s.steps);
      c.subs.push_back(std::move(s));
    }
    c.g_bar = c.recompute_g_bar();
    m.categories_.push_back(std::move(c));
  }
  r.expect_done("episodic memory");
  return m;
}

}  // namespace restart::memory
