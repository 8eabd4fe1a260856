#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmsim/env/action.hpp"
#include "mmsim/env/config.hpp"
#include "mmsim/env/features.hpp"
#include "mmsim/env/reward.hpp"
#include "mmsim/replay/dataset.hpp"
#include "mmsim/replay/simulator.hpp"
#include "mmsim/signals/signals.hpp"

namespace mmsim::env {

struct StepRecord {
  std::size_t step = 0;
  std::size_t t = 0;  // dataset index at decision time
  std::int64_t timestamp_ms = 0;
  std::int64_t mid = 0;       // half ticks, at t
  std::int64_t mid_next = 0;  // half ticks, at t + 1
  HalfTickPrice p_ref;        // used to decode the action
  HalfTickPrice best_bid_next;
  HalfTickPrice best_ask_next;
  std::int64_t spread = 0;  // half ticks, at t
  Volume z_before = 0;
  Volume z_after = 0;
  std::int64_t cash_after = 0;  // half ticks x volume
  std::vector<AgentFill> fills;
  RewardTerms reward;
  QuoteSet quotes;
  std::vector<int> signals;
  std::size_t n_cancels = 0;
  std::size_t n_placements = 0;

  bool operator==(const StepRecord&) const = default;
};

struct TraceMeta {
  EpisodeConfig config;
  RewardParams reward;
  double tick_size = 1.0;
  std::string instrument;
  std::string strategy;
  std::string config_hash;
  std::size_t start = 0;
  std::int64_t mid_0 = 0;  // half ticks
  bool truncated = false;

  bool operator==(const TraceMeta&) const = default;
};

struct EpisodeTrace {
  TraceMeta meta;
  std::vector<StepRecord> steps;

  Volume final_inventory() const noexcept { return steps.empty() ? 0 : steps.back().z_after; }
  std::int64_t final_cash() const noexcept { return steps.empty() ? 0 : steps.back().cash_after; }
  std::int64_t final_mid() const noexcept { return steps.empty() ? meta.mid_0 : steps.back().mid_next; }

  bool operator==(const EpisodeTrace&) const = default;
};

struct StepInfo {
  RewardTerms reward;
  std::vector<AgentFill> fills;
  std::size_t n_cancels = 0;
  std::size_t n_placements = 0;
  bool truncated = false;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class MarketMakingEnv;

// What a policy sees when deciding.
struct DecisionContext {
  const Observation& observation;
  const MarketMakingEnv& env;
  HalfTickPrice p_ref;
  std::int64_t mid = 0;  // half ticks, historical liquidity
  HalfTickPrice best_bid;
  HalfTickPrice best_ask;
  Volume z = 0;
  std::size_t step = 0;
};

// One episode at a time over a shared, immutable dataset. Not thread-safe; use one
// instance per thread.
class MarketMakingEnv {
 public:
  MarketMakingEnv(const replay::Dataset& data, EpisodeConfig cfg, RewardParams reward,
                  std::shared_ptr<const signals::SignalProvider> provider = nullptr);

  // Starts an episode. `seed` overrides the configured seed. Throws DatasetTooShort.
  Observation reset(std::optional<std::uint64_t> seed = std::nullopt);

  // Throws SteppedAfterDone.
  StepResult step(const Action& a);

  // Reward the action would earn over the next interval, leaving the episode untouched.
  RewardTerms preview(const Action& a) const;

  Observation observe() const;
  DecisionContext context(const Observation& obs) const;

  bool done() const noexcept { return done_; }
  bool truncated() const noexcept { return trace_.meta.truncated; }
  std::size_t t() const noexcept { return core_.t; }
  std::size_t steps_taken() const noexcept { return core_.step; }
  std::size_t start_index() const noexcept { return trace_.meta.start; }
  Volume inventory() const noexcept { return core_.z; }
  std::int64_t cash() const noexcept { return core_.cash; }
  std::uint64_t seed() const noexcept { return seed_; }
  const replay::ReplaySimulator& simulator() const noexcept { return core_.sim; }
  const EpisodeConfig& config() const noexcept { return cfg_; }
  const RewardParams& reward_params() const noexcept { return reward_; }
  const replay::Dataset& data() const noexcept { return *data_; }
  const FeatureSchema& schema() const noexcept { return schema_; }
  const EpisodeTrace& trace() const noexcept { return trace_; }
  EpisodeTrace take_trace() { return std::move(trace_); }

  // Free-form tags copied into the trace header.
  void set_trace_tags(std::string strategy, std::string config_hash);

 private:
  struct Core {
    replay::ReplaySimulator sim{lob::QueueModel::Pessimistic};
    std::int64_t cash = 0;
    Volume z = 0;
    std::size_t t = 0;
    std::size_t step = 0;
  };
  struct Advance {
    StepRecord record;
    StepInfo info;
  };

  Advance advance(Core& core, const Action& a) const;
  std::vector<double> feature_row() const;

  const replay::Dataset* data_;
  EpisodeConfig cfg_;
  RewardParams reward_;
  std::shared_ptr<const signals::SignalProvider> provider_;
  FeatureSchema schema_;
  std::uint64_t seed_ = 0;
  Core core_;
  FeatureWindow window_;
  std::vector<int> current_signals_;
  EpisodeTrace trace_;
  bool done_ = true;
  std::string strategy_tag_;
  std::string hash_tag_;
};

// Minimum number of snapshots an episode of `cfg` needs given the provider's lookahead.
std::size_t required_length(const EpisodeConfig& cfg, const signals::SignalProvider* provider);

}  // namespace mmsim::env
