#include "mmsim/replay/synth.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace mmsim::replay {

namespace {

constexpr std::int64_t kStartTimestampMs = 1'650'000'000'000;
constexpr double kTradeIntensity = 1.5;
constexpr double kLevelChurn = 0.8;

class Generator {
 public:
  explicit Generator(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Volume poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<Volume>(mean)(rng_);
  }

  Volume fresh_volume(std::size_t depth) {
    return 1 + poisson(cfg_.vol_intensity * (3.0 + 2.0 * static_cast<double>(depth)));
  }

  std::int64_t draw_spread(std::int64_t previous) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (previous > 0 && u(rng_) < 0.7) return previous;
    const double r = u(rng_);
    return r < 0.6 ? 1 : (r < 0.9 ? 2 : 3);
  }

  double noise() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

 private:
  const SynthConfig& cfg_;
  std::mt19937_64 rng_;
};

// Levels kept in ticks while generating.
using Side5 = std::map<std::int64_t, Volume>;

SnapshotRecord to_record(std::int64_t ts, const Side5& bids, const Side5& asks, Volume vol,
                         std::int64_t turnover_ticks) {
  SnapshotRecord r;
  r.timestamp_ms = ts;
  std::size_t i = 0;
  for (auto it = bids.rbegin(); it != bids.rend() && i < kDepth; ++it, ++i) {
    r.bid_prices[i] = HalfTickPrice::from_ticks(it->first);
    r.bid_vols[i] = it->second;
  }
  i = 0;
  for (auto it = asks.begin(); it != asks.end() && i < kDepth; ++it, ++i) {
    r.ask_prices[i] = HalfTickPrice::from_ticks(it->first);
    r.ask_vols[i] = it->second;
  }
  r.interval_trade_volume = vol;
  r.interval_turnover = turnover_ticks * 2;
  return r;
}

}  // namespace

Dataset synth_generate(const SynthConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("synth steps must be >= 1");
  if (!(cfg.tick_size > 0)) throw std::invalid_argument("tick_size must be positive");
  if (cfg.vol_intensity < 0) throw std::invalid_argument("vol_intensity must be >= 0");

  Generator gen(cfg);
  Dataset data;
  data.meta.tick_size = cfg.tick_size;
  data.meta.cadence_ms = 500;
  data.meta.instrument = cfg.instrument;
  data.records.reserve(cfg.steps);

  double latent = cfg.base_price / cfg.tick_size;
  std::int64_t spread = gen.draw_spread(0);
  auto place = [&](std::int64_t s) {
    const auto bid = static_cast<std::int64_t>(std::floor(latent - static_cast<double>(s) / 2.0 + 0.5));
    return std::make_pair(bid, bid + s);
  };

  Side5 bids;
  Side5 asks;
  {
    const auto [bid, ask] = place(spread);
    for (std::size_t i = 0; i < kDepth; ++i) {
      bids[bid - static_cast<std::int64_t>(i)] = gen.fresh_volume(i);
      asks[ask + static_cast<std::int64_t>(i)] = gen.fresh_volume(i);
    }
  }
  data.records.push_back(to_record(kStartTimestampMs, bids, asks, 0, 0));

  for (std::size_t step = 1; step < cfg.steps; ++step) {
    latent += cfg.trend + cfg.volatility * gen.noise();
    spread = gen.draw_spread(spread);
    const auto [bid, ask] = place(spread);

    Volume volume = 0;
    std::int64_t turnover = 0;

    // Buyers lift every ask below the new best ask, then trade at it if it survives.
    Side5 ask_left;
    for (const auto& [price, vol] : asks) {
      if (price < ask) {
        volume += vol;
        turnover += price * vol;
      } else {
        ask_left[price] = vol;
      }
    }
    if (auto it = ask_left.find(ask); it != ask_left.end()) {
      const Volume k = std::min(it->second, gen.poisson(cfg.vol_intensity * kTradeIntensity));
      volume += k;
      turnover += ask * k;
      it->second -= k;
    }
    Side5 bid_left;
    for (const auto& [price, vol] : bids) {
      if (price > bid) {
        volume += vol;
        turnover += price * vol;
      } else {
        bid_left[price] = vol;
      }
    }
    if (auto it = bid_left.find(bid); it != bid_left.end()) {
      const Volume k = std::min(it->second, gen.poisson(cfg.vol_intensity * kTradeIntensity));
      volume += k;
      turnover += bid * k;
      it->second -= k;
    }

    Side5 next_bids;
    Side5 next_asks;
    for (std::size_t i = 0; i < kDepth; ++i) {
      const auto offset = static_cast<std::int64_t>(i);
      auto evolve = [&](const Side5& left, std::int64_t price) {
        const auto it = left.find(price);
        if (it == left.end()) return gen.fresh_volume(i);
        const double churn = cfg.vol_intensity * kLevelChurn;
        const Volume v = it->second + gen.poisson(churn) - gen.poisson(churn);
        return std::max<Volume>(1, v);
      };
      next_bids[bid - offset] = evolve(bid_left, bid - offset);
      next_asks[ask + offset] = evolve(ask_left, ask + offset);
    }
    bids = std::move(next_bids);
    asks = std::move(next_asks);
    data.records.push_back(to_record(kStartTimestampMs + static_cast<std::int64_t>(step) * 500,
                                     bids, asks, volume, turnover));
  }

  finalize_dataset(data);
  return data;
}

}  // namespace mmsim::replay
