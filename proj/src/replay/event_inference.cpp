#include "mmsim/replay/event_inference.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <tuple>

namespace mmsim::replay {

namespace {

// Cumulative cost of walking `units` into one side of a snapshot, best level first.
struct Walk {
  std::vector<std::int64_t> cost;          // cost[k] = turnover of the first k units
  std::vector<HalfTickPrice> unit_price;   // price of unit k (0-based)

  Walk(const std::array<HalfTickPrice, kDepth>& prices, const std::array<Volume, kDepth>& vols,
       Volume cap) {
    cost.reserve(static_cast<std::size_t>(cap) + 1);
    cost.push_back(0);
    for (std::size_t i = 0; i < kDepth && static_cast<Volume>(unit_price.size()) < cap; ++i) {
      for (Volume v = 0; v < vols[i] && static_cast<Volume>(unit_price.size()) < cap; ++v) {
        unit_price.push_back(prices[i]);
        cost.push_back(cost.back() + prices[i].value);
      }
    }
  }
  Volume capacity() const noexcept { return static_cast<Volume>(unit_price.size()); }
};

Volume shrinkage(const std::array<HalfTickPrice, kDepth>& prev_prices,
                 const std::array<Volume, kDepth>& prev_vols, HalfTickPrice next_best,
                 const std::array<HalfTickPrice, kDepth>& next_prices,
                 const std::array<Volume, kDepth>& next_vols, bool ask_side) {
  Volume shrink = 0;
  for (std::size_t i = 0; i < kDepth; ++i) {
    const bool better = ask_side ? prev_prices[i] < next_best : prev_prices[i] > next_best;
    if (better) {
      shrink += prev_vols[i];
    } else if (prev_prices[i] == next_best) {
      const auto pos = std::find(next_prices.begin(), next_prices.end(), next_best);
      const Volume next_vol = next_vols[static_cast<std::size_t>(pos - next_prices.begin())];
      shrink += std::max<Volume>(0, prev_vols[i] - next_vol);
      break;
    } else {
      break;
    }
  }
  return shrink;
}

void add_level_events(const LevelVolumes& current, Side side,
                      const std::array<HalfTickPrice, kDepth>& prices,
                      const std::array<Volume, kDepth>& vols,
                      std::vector<lob::BookEvent>& cancels, std::vector<lob::BookEvent>& inserts) {
  LevelVolumes target;
  for (std::size_t i = 0; i < kDepth; ++i) target[prices[i].value] = vols[i];

  for (const auto& [price, vol] : current) {
    const auto it = target.find(price);
    const Volume want = it == target.end() ? 0 : it->second;
    if (vol > want) cancels.emplace_back(lob::CancelLevelEvent{side, HalfTickPrice{price}, vol - want});
  }
  for (const auto& [price, want] : target) {
    const auto it = current.find(price);
    const Volume have = it == current.end() ? 0 : it->second;
    if (want > have) {
      inserts.emplace_back(lob::InsertEvent{side, HalfTickPrice{price}, want - have, Owner::Historical});
    }
  }
}

}  // namespace

void InferenceStats::record(const TradeSplit& split) {
  ++intervals;
  if (split.clipped > 0) {
    ++inconsistent_intervals;
    clipped_volume += split.clipped;
  }
  if (split.turnover_error != 0) ++turnover_mismatches;
}

TradeSplit attribute_trades(const SnapshotRecord& prev, const SnapshotRecord& next) {
  TradeSplit split;
  Volume total = next.interval_trade_volume;
  if (total <= 0) return split;

  const Walk asks(prev.ask_prices, prev.ask_vols, total);
  const Walk bids(prev.bid_prices, prev.bid_vols, total);
  if (total > asks.capacity() + bids.capacity()) {
    split.clipped = total - asks.capacity() - bids.capacity();
    total = asks.capacity() + bids.capacity();
  }
  if (total == 0) return split;

  const Volume shrink_ask = shrinkage(prev.ask_prices, prev.ask_vols, next.best_ask(),
                                      next.ask_prices, next.ask_vols, true);
  const Volume shrink_bid = shrinkage(prev.bid_prices, prev.bid_vols, next.best_bid(),
                                      next.bid_prices, next.bid_vols, false);
  const bool use_turnover = next.interval_turnover > 0;

  const Volume lo = std::max<Volume>(0, total - bids.capacity());
  const Volume hi = std::min<Volume>(total, asks.capacity());
  // Lexicographic score: turnover error, unexplained volume, distance to proportional split.
  const double proportional =
      shrink_ask + shrink_bid > 0
          ? static_cast<double>(total) * static_cast<double>(shrink_ask) /
                static_cast<double>(shrink_ask + shrink_bid)
          : static_cast<double>(total) / 2.0;
  std::tuple<std::int64_t, Volume, double> best_score{};
  Volume best_buy = lo;
  for (Volume b = lo; b <= hi; ++b) {
    const Volume s = total - b;
    const std::int64_t turnover = asks.cost[static_cast<std::size_t>(b)] +
                                  bids.cost[static_cast<std::size_t>(s)];
    const std::int64_t err = use_turnover ? std::llabs(turnover - next.interval_turnover) : 0;
    const Volume unexplained = std::max<Volume>(0, b - shrink_ask) + std::max<Volume>(0, s - shrink_bid);
    const std::tuple<std::int64_t, Volume, double> score{
        err, unexplained, std::abs(static_cast<double>(b) - proportional)};
    if (b == lo || score < best_score) {
      best_score = score;
      best_buy = b;
    }
  }

  split.buy = best_buy;
  split.sell = total - best_buy;
  split.turnover_error = std::get<0>(best_score);
  if (split.buy > 0) split.buy_limit = asks.unit_price[static_cast<std::size_t>(split.buy - 1)];
  if (split.sell > 0) split.sell_limit = bids.unit_price[static_cast<std::size_t>(split.sell - 1)];
  return split;
}

std::vector<lob::BookEvent> trade_events(const TradeSplit& split) {
  std::vector<lob::BookEvent> events;
  if (split.buy > 0) events.emplace_back(lob::TradeEvent{Side::Bid, split.buy, split.buy_limit});
  if (split.sell > 0) events.emplace_back(lob::TradeEvent{Side::Ask, split.sell, split.sell_limit});
  return events;
}

std::vector<lob::BookEvent> reconcile_levels(const LevelVolumes& bids, const LevelVolumes& asks,
                                             const SnapshotRecord& next) {
  std::vector<lob::BookEvent> cancels;
  std::vector<lob::BookEvent> inserts;
  add_level_events(bids, Side::Bid, next.bid_prices, next.bid_vols, cancels, inserts);
  add_level_events(asks, Side::Ask, next.ask_prices, next.ask_vols, cancels, inserts);
  cancels.insert(cancels.end(), inserts.begin(), inserts.end());
  return cancels;
}

std::vector<lob::BookEvent> infer_events(const SnapshotRecord& prev, const SnapshotRecord& next,
                                         InferenceStats* stats) {
  const TradeSplit split = attribute_trades(prev, next);
  if (stats) stats->record(split);

  auto consume = [](const std::array<HalfTickPrice, kDepth>& prices,
                    const std::array<Volume, kDepth>& vols, Volume traded) {
    LevelVolumes levels;
    for (std::size_t i = 0; i < kDepth; ++i) {
      const Volume take = std::min(traded, vols[i]);
      traded -= take;
      if (vols[i] - take > 0) levels[prices[i].value] = vols[i] - take;
    }
    return levels;
  };
  const LevelVolumes bids = consume(prev.bid_prices, prev.bid_vols, split.sell);
  const LevelVolumes asks = consume(prev.ask_prices, prev.ask_vols, split.buy);

  std::vector<lob::BookEvent> events = trade_events(split);
  auto rest = reconcile_levels(bids, asks, next);
  events.insert(events.end(), rest.begin(), rest.end());
  return events;
}

}  // namespace mmsim::replay
