#include "restart/train/trainer.hpp"

#include <chrono>
#include <iostream>

#include "restart/train/evaluate.hpp"

namespace restart::train {

namespace {

enum Stream : std::uint64_t { kInit = 1, kEnv, kAct, kMemory, kUpdate, kEval };

Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

Trainer::Memory make_memory(const ExperimentConfig& cfg) {
  const auto& m = cfg.memory;
  // Nothing is ever sampled at ratio 0, so no memory is kept.
  if (m.ratio == 0.0) return std::monostate{};
  switch (m.variant) {
    case Variant::None: return std::monostate{};
    case Variant::Uniform: return memory::UniformMemory(m.capacity, m.t_aug);
    case Variant::Prioritised: return memory::PrioritisedMemory(m.capacity, m.alpha, m.epsilon, m.t_aug);
    case Variant::Episodic:
      return memory::EpisodicMemory(m.parent_capacity, m.sub_capacity, m.alpha, m.epsilon, cfg.env.t_env);
  }
  throw std::logic_error("unknown variant");
}

}  // namespace

PurityCounters& PurityCounters::operator+=(const PurityCounters& o) {
  memory_reads += o.memory_reads;
  memory_writes += o.memory_writes;
  restores += o.restores;
  parameter_writes += o.parameter_writes;
  return *this;
}

bool RunRecord::same_outcome(const RunRecord& o) const {
  return seed == o.seed && rows == o.rows && parameter_crc == o.parameter_crc && env_steps == o.env_steps &&
         first_success_step == o.first_success_step && filtered_out == o.filtered_out &&
         orphaned_sub_episodes == o.orphaned_sub_episodes && evaluations == o.evaluations &&
         evaluation_side_effects == o.evaluation_side_effects && losses == o.losses;
}

Trainer::Trainer(ExperimentConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      seed_(seed),
      init_rng_(make_stream(seed, kInit)),
      env_rng_(make_stream(seed, kEnv)),
      act_rng_(make_stream(seed, kAct)),
      memory_rng_(make_stream(seed, kMemory)),
      update_rng_(make_stream(seed, kUpdate)),
      eval_rng_(make_stream(seed, kEval)),
      controller_(cfg_.memory.ratio) {
  cfg_.validate();
  env_ = make_environment(cfg_);
  eval_env_ = make_environment(cfg_);
  net_ = std::make_unique<agent::PolicyValueNet>(env_->observation_size(), env_->num_actions(), cfg_.net, init_rng_);
  learner_ = std::make_unique<agent::PpoLearner>(*net_, cfg_.ppo);
  memory_ = make_memory(cfg_);
}

bool Trainer::memory_empty() const {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          return true;
        } else {
          return m.empty();
        }
      },
      memory_);
}

std::uint64_t Trainer::memory_size() const {
  if (const auto* e = std::get_if<memory::EpisodicMemory>(&memory_)) return e->total_episodes();
  return std::visit(
      [](const auto& m) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          return 0;
        } else {
          return m.size();
        }
      },
      memory_);
}

std::uint64_t Trainer::memory_reads() const {
  return std::visit(
      [](const auto& m) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          return 0;
        } else {
          return m.reads();
        }
      },
      memory_);
}

std::uint64_t Trainer::memory_writes() const { return memory_pushes_; }

void Trainer::start_episode() {
  episode_.steps.clear();
  episode_.link.reset();
  if (controller_.choose(!memory_empty()) == StartChoice::FromMemory) {
    memory::RestartSample sample = std::visit(
        [&](auto& m) -> memory::RestartSample {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
            throw memory::EmptyMemory();
          } else {
            return m.sample(memory_rng_);
          }
        },
        memory_);
    episode_.observation = env_->restore(sample.snapshot);
    if (env_->limit() - env_->clock() != sample.t_aug) {
      throw std::logic_error("restored episode length disagrees with the sampled time limit");
    }
    if (sample.episodic) episode_.link = std::move(sample.episodic->link);
    episode_.origin = agent::StartOrigin::AugmentedStart;
  } else {
    episode_.observation = env_->reset(env_rng_).first;
    episode_.origin = agent::StartOrigin::EnvStart;
  }
  episode_.active = true;
}

void Trainer::finish_episode() {
  episode_.active = false;
  ++episodes_finished_;
  auto* episodic = std::get_if<memory::EpisodicMemory>(&memory_);
  if (!episodic) return;
  ++memory_pushes_;
  if (episode_.origin == agent::StartOrigin::EnvStart) {
    episodic->offer_parent(std::move(episode_.steps));
    return;
  }
  try {
    episodic->offer_sub(*episode_.link, std::move(episode_.steps));
  } catch (const memory::OrphanSubEpisode&) {
    ++orphans_;
  }
  episode_.steps.clear();
}

agent::RolloutBatch Trainer::collect_iteration() {
  const bool record_states = cfg_.memory.variant == Variant::Uniform || cfg_.memory.variant == Variant::Prioritised;
  const bool record_episode = cfg_.memory.variant == Variant::Episodic;
  const auto steps = static_cast<std::size_t>(cfg_.ppo.steps_per_iteration);

  agent::RolloutBatch batch;
  batch.transitions.reserve(steps);
  if (record_states) batch.states.reserve(steps);
  std::size_t segment_begin = 0;

  for (std::size_t k = 0; k < steps; ++k) {
    if (!episode_.active) start_episode();
    StateSnapshot before;
    if (record_states || record_episode) before = env_->snapshot();
    const auto act = net_->act(episode_.observation, act_rng_);
    env::StepOutcome out = env_->step(act.action);

    agent::Transition tr;
    tr.observation = std::move(episode_.observation);
    tr.action = act.action;
    tr.reward = out.reward;
    tr.log_prob = act.log_prob;
    tr.value = act.value;
    tr.terminal = out.terminal;
    tr.timeout = out.timeout;
    tr.origin = episode_.origin;
    batch.transitions.push_back(std::move(tr));
    if (record_states) batch.states.push_back(before);
    if (record_episode) episode_.steps.push_back({std::move(before), out.reward});

    controller_.record(episode_.origin);
    ++env_steps_;
    if (out.reward > 0.0 && !first_success_) first_success_ = env_steps_;
    episode_.observation = std::move(out.observation);

    if (out.terminal || out.timeout) {
      agent::Segment seg{segment_begin, batch.size(), agent::SegmentEnd::Terminal, std::nullopt};
      if (out.timeout) {
        seg.end_kind = agent::SegmentEnd::Timeout;
        seg.bootstrap_value = net_->value(episode_.observation);
      }
      batch.segments.push_back(seg);
      segment_begin = batch.size();
      finish_episode();
    }
  }
  if (segment_begin < batch.size()) {
    batch.segments.push_back(
        {segment_begin, batch.size(), agent::SegmentEnd::Cut, net_->value(episode_.observation)});
  }
  return batch;
}

void Trainer::feed_memory(const agent::RolloutBatch& batch) {
  if (auto* u = std::get_if<memory::UniformMemory>(&memory_)) {
    for (const auto& s : batch.states) u->push(s);
    memory_pushes_ += batch.states.size();
  } else if (auto* p = std::get_if<memory::PrioritisedMemory>(&memory_)) {
    if (batch.td_errors.size() != batch.states.size()) {
      throw std::logic_error("prioritised memory needs one TD error per recorded state");
    }
    for (std::size_t i = 0; i < batch.states.size(); ++i) p->push(batch.states[i], batch.td_errors[i]);
    memory_pushes_ += batch.states.size();
  }
}

double Trainer::evaluate_now() {
  const PurityCounters before{memory_reads(), memory_writes(), env_->restore_count() + eval_env_->restore_count(),
                              learner_->parameter_writes()};
  const double metric = evaluate(*eval_env_, *net_, cfg_.eval, eval_rng_);
  const PurityCounters after{memory_reads(), memory_writes(), env_->restore_count() + eval_env_->restore_count(),
                             learner_->parameter_writes()};
  eval_effects_ += PurityCounters{after.memory_reads - before.memory_reads, after.memory_writes - before.memory_writes,
                                  after.restores - before.restores, after.parameter_writes - before.parameter_writes};
  return metric;
}

RunRecord Trainer::train() {
  const auto started = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.seed = seed_;
  auto eval_row = [&] {
    const double metric = evaluate_now();
    ++rec.evaluations;
    rec.rows.push_back({env_steps_, metric, controller_.realized(), memory_size()});
  };

  eval_row();
  std::int64_t next_eval = cfg_.eval.period;
  while (env_steps_ < cfg_.total_steps) {
    agent::RolloutBatch batch = collect_iteration();
    agent::compute_gae(batch, cfg_.ppo.gamma, cfg_.ppo.lambda);
    feed_memory(batch);
    rec.losses.push_back(learner_->update(batch, update_rng_));

    if (cfg_.filter_steps > 0 && env_steps_ >= cfg_.filter_steps &&
        !(first_success_ && *first_success_ <= cfg_.filter_steps)) {
      rec.filtered_out = true;
      break;
    }
    if (env_steps_ >= next_eval) {
      eval_row();
      next_eval = (env_steps_ / cfg_.eval.period + 1) * cfg_.eval.period;
    }
  }
  if (!rec.filtered_out && rec.rows.back().env_steps != env_steps_) eval_row();

  rec.env_steps = env_steps_;
  rec.first_success_step = first_success_;
  rec.orphaned_sub_episodes = orphans_;
  rec.evaluation_side_effects = eval_effects_;
  // The frame ends in its own CRC, over which a CRC is constant; hash the rest.
  const Bytes params = net_->serialize();
  rec.parameter_crc = crc32_of(std::span<const std::uint8_t>(params).first(params.size() - 4));
  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

}  // namespace restart::train
