#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mmsim/lob/events.hpp"
#include "mmsim/replay/dataset.hpp"

namespace mmsim::replay {

// Price (half ticks) -> historical volume, one map per side.
using LevelVolumes = std::map<std::int64_t, Volume>;

// How an interval's aggregated trades were split between buyer- and seller-initiated flow.
struct TradeSplit {
  Volume buy = 0;   // consumes asks
  Volume sell = 0;  // consumes bids
  std::optional<HalfTickPrice> buy_limit;   // deepest ask reached by the walk
  std::optional<HalfTickPrice> sell_limit;  // deepest bid reached by the walk
  Volume clipped = 0;                       // volume that could not be attributed
  std::int64_t turnover_error = 0;          // |walk turnover - reported turnover|, half ticks x volume
};

struct InferenceStats {
  std::size_t intervals = 0;
  std::size_t inconsistent_intervals = 0;  // trade volume exceeded visible liquidity
  std::size_t turnover_mismatches = 0;
  Volume clipped_volume = 0;

  void record(const TradeSplit& split);
};

// Attributes next.interval_trade_volume to the two sides of `prev`. Turnover picks the
// split (walk turnover is strictly increasing in buy volume); shrinkage of the best queues
// breaks ties and decides when turnover is missing.
TradeSplit attribute_trades(const SnapshotRecord& prev, const SnapshotRecord& next);

std::vector<lob::BookEvent> trade_events(const TradeSplit& split);

// Level cancels followed by level inserts that turn the current historical book into the
// visible book of `next`. Levels outside `next`'s five visible prices are cleared.
std::vector<lob::BookEvent> reconcile_levels(const LevelVolumes& bids, const LevelVolumes& asks,
                                             const SnapshotRecord& next);

// Full event stream for one interval: trades, then cancels, then inserts.
std::vector<lob::BookEvent> infer_events(const SnapshotRecord& prev, const SnapshotRecord& next,
                                         InferenceStats* stats = nullptr);

}  // namespace mmsim::replay
