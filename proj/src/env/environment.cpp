#include "mmsim/env/environment.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "mmsim/core/errors.hpp"
#include "mmsim/env/policy.hpp"
#include "mmsim/lob/reference_price.hpp"

namespace mmsim::env {

void EpisodeConfig::validate() const {
  if (T < 1) throw std::invalid_argument("episode length T must be >= 1");
  if (dt_ms <= 0) throw std::invalid_argument("dt_ms must be positive");
  if (n_levels < 1) throw std::invalid_argument("n_levels must be >= 1");
  if (N < n_levels) throw std::invalid_argument("N must be >= n_levels");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
}

std::size_t required_length(const EpisodeConfig& cfg, const signals::SignalProvider* provider) {
  return cfg.T + (provider ? provider->lookahead() : 0) + 1;
}

MarketMakingEnv::MarketMakingEnv(const replay::Dataset& data, EpisodeConfig cfg, RewardParams reward,
                                 std::shared_ptr<const signals::SignalProvider> provider)
    : data_(&data), cfg_(cfg), reward_(reward), provider_(std::move(provider)) {
  cfg_.validate();
  reward_.validate();
  schema_.K = cfg_.K;
  schema_.L = cfg_.L;
  schema_.n_signals = provider_ ? provider_->count() : 4;
  core_.sim = replay::ReplaySimulator(cfg_.queue_model);
}

void MarketMakingEnv::set_trace_tags(std::string strategy, std::string config_hash) {
  strategy_tag_ = std::move(strategy);
  hash_tag_ = std::move(config_hash);
  trace_.meta.strategy = strategy_tag_;
  trace_.meta.config_hash = hash_tag_;
}

Observation MarketMakingEnv::reset(std::optional<std::uint64_t> seed) {
  seed_ = seed.value_or(cfg_.seed);
  const std::size_t need = required_length(cfg_, provider_.get());
  if (data_->size() < need) {
    throw DatasetTooShort("episode needs " + std::to_string(need) + " snapshots, dataset has " +
                          std::to_string(data_->size()));
  }
  std::size_t start = cfg_.start_index;
  if (cfg_.start == StartMode::Random) {
    std::mt19937_64 rng(seed_);
    start = std::uniform_int_distribution<std::size_t>(0, data_->size() - need)(rng);
  } else if (start + 1 >= data_->size()) {
    throw DatasetTooShort("start index " + std::to_string(start) + " leaves no interval to replay");
  }

  core_ = Core{};
  core_.sim = replay::ReplaySimulator(cfg_.queue_model);
  core_.sim.reset((*data_)[start]);
  core_.t = start;
  done_ = false;

  trace_ = EpisodeTrace{};
  trace_.meta.config = cfg_;
  trace_.meta.config.seed = seed_;
  trace_.meta.reward = reward_;
  trace_.meta.tick_size = data_->tick_size();
  trace_.meta.instrument = data_->meta.instrument;
  trace_.meta.strategy = strategy_tag_;
  trace_.meta.config_hash = hash_tag_;
  trace_.meta.start = start;
  trace_.meta.mid_0 = (*data_)[start].mid();
  trace_.steps.reserve(cfg_.T);

  window_ = FeatureWindow(cfg_.L, schema_.features());
  window_.push(feature_row());
  Observation obs = observe();
  current_signals_ = obs.signals;
  return obs;
}

std::vector<double> MarketMakingEnv::feature_row() const {
  const double frac = static_cast<double>(core_.step) / static_cast<double>(cfg_.T);
  return market_features(*data_, core_.t, core_.sim.book(), core_.sim.p_ref(), cfg_.K, frac, cfg_.L);
}

Observation MarketMakingEnv::observe() const {
  Observation obs;
  obs.market.reserve(schema_.market_size());
  window_.flatten_into(obs.market);
  obs.market.insert(obs.market.end(), window_.last().begin(), window_.last().end());

  if (provider_) {
    obs.signals = provider_->signals(*data_, core_.t, seed_);
  } else {
    obs.signals.assign(schema_.n_signals, 0);
  }

  obs.z = core_.z;
  const int K = cfg_.K;
  std::vector<std::vector<QueueEntry>> per_level(static_cast<std::size_t>(2 * K));
  std::vector<Volume> level_total(static_cast<std::size_t>(2 * K), 0);
  const auto& book = core_.sim.book();
  const HalfTickPrice p_ref = core_.sim.p_ref();
  for (const auto& o : core_.sim.agent_orders()) {
    const int i = lob::level_index(p_ref, o.price);
    if (i < -K || i > K) continue;
    const auto slot = static_cast<std::size_t>(i < 0 ? i + K : i + K - 1);
    per_level[slot].push_back({o.volume_ahead, o.volume});
    level_total[slot] = book.volume_at(o.side, o.price);
  }
  obs.q.resize(per_level.size());
  obs.v.resize(per_level.size());
  for (std::size_t s = 0; s < per_level.size(); ++s) {
    Volume own = 0;
    for (const auto& e : per_level[s]) own += e.volume;
    obs.v[s] = static_cast<double>(own);
    obs.q[s] = queue_value(per_level[s], level_total[s]);
  }
  return obs;
}

DecisionContext MarketMakingEnv::context(const Observation& obs) const {
  const auto& rec = (*data_)[core_.t];
  return DecisionContext{obs,           *this,        core_.sim.p_ref(), rec.mid(),
                         rec.best_bid(), rec.best_ask(), core_.z,           core_.step};
}

MarketMakingEnv::Advance MarketMakingEnv::advance(Core& core, const Action& a) const {
  const auto& prev = (*data_)[core.t];
  const auto& next = (*data_)[core.t + 1];

  Advance out;
  auto& rec = out.record;
  rec.step = core.step;
  rec.t = core.t;
  rec.timestamp_ms = prev.timestamp_ms;
  rec.mid = prev.mid();
  rec.mid_next = next.mid();
  rec.p_ref = core.sim.p_ref();
  rec.spread = prev.spread();
  rec.best_bid_next = next.best_bid();
  rec.best_ask_next = next.best_ask();
  rec.z_before = core.z;
  rec.quotes = decode_action(a, cfg_, rec.p_ref);

  const OrderDiff diff = diff_orders(core.sim.agent_orders(), rec.quotes);
  rec.n_cancels = diff.cancels.size();
  rec.n_placements = diff.placements.size();
  for (const auto& f : core.sim.step(prev, next, diff.cancels, diff.placements)) {
    if (f.owner == Owner::Agent && f.taker == Owner::Agent) continue;
    if (f.owner == Owner::Agent) {
      rec.fills.push_back({f.side, f.price, f.volume, true});
    } else {
      rec.fills.push_back({opposite(f.side), f.price, f.volume, false});
    }
  }
  core.z += inventory_change(rec.fills);
  core.cash += cashflow(rec.fills);
  rec.z_after = core.z;
  rec.cash_after = core.cash;
  rec.reward = compute_reward(rec.fills, core.z, rec.mid, rec.mid_next, reward_, data_->tick_size());
  ++core.t;
  ++core.step;

  out.info.reward = rec.reward;
  out.info.fills = rec.fills;
  out.info.n_cancels = rec.n_cancels;
  out.info.n_placements = rec.n_placements;
  return out;
}

StepResult MarketMakingEnv::step(const Action& a) {
  if (done_) throw SteppedAfterDone();
  Advance adv = advance(core_, a);
  adv.record.signals = std::move(current_signals_);

  const bool horizon = core_.step >= cfg_.T;
  const bool exhausted = core_.t + 1 >= data_->size();
  done_ = horizon || exhausted;
  if (exhausted && !horizon) trace_.meta.truncated = true;

  window_.push(feature_row());
  StepResult result;
  result.observation = observe();
  current_signals_ = result.observation.signals;
  result.reward = adv.info.reward.total;
  result.done = done_;
  adv.info.truncated = trace_.meta.truncated;
  result.info = std::move(adv.info);
  trace_.steps.push_back(std::move(adv.record));
  return result;
}

RewardTerms MarketMakingEnv::preview(const Action& a) const {
  if (done_) throw SteppedAfterDone();
  Core copy = core_;
  return advance(copy, a).record.reward;
}

EpisodeTrace run_episode(MarketMakingEnv& env, Policy& policy, std::uint64_t seed) {
  Observation obs = env.reset(seed);
  policy.on_reset(seed);
  while (!env.done()) {
    const Action a = policy.act(env.context(obs));
    obs = env.step(a).observation;
  }
  return env.take_trace();
}

}  // namespace mmsim::env
