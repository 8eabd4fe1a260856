#include "mmsim/replay/simulator.hpp"

#include <algorithm>

namespace mmsim::replay {

void ReplaySimulator::reset(const SnapshotRecord& snapshot) {
  book_ = lob::Book{};
  stats_ = InferenceStats{};
  for (std::size_t i = 0; i < kDepth; ++i) {
    if (snapshot.bid_vols[i] > 0) {
      book_.add(Side::Bid, snapshot.bid_prices[i], snapshot.bid_vols[i], Owner::Historical);
    }
    if (snapshot.ask_vols[i] > 0) {
      book_.add(Side::Ask, snapshot.ask_prices[i], snapshot.ask_vols[i], Owner::Historical);
    }
  }
  tracker_ = lob::anchor_reference(book_);
}

void ReplaySimulator::apply(const lob::BookEvent& event, std::vector<lob::Fill>& agent_fills) {
  for (const auto& fill : lob::apply_event(book_, tracker_, event, model_)) {
    if (fill.touches_agent()) agent_fills.push_back(fill);
  }
}

std::vector<lob::Fill> ReplaySimulator::step(const SnapshotRecord& prev, const SnapshotRecord& next,
                                             std::span<const AgentCancel> cancels,
                                             std::span<const AgentPlacement> placements) {
  std::vector<lob::Fill> agent_fills;

  for (const auto& c : cancels) apply(lob::CancelOrderEvent{c.order_id, c.volume}, agent_fills);
  for (const auto& p : placements) {
    if (p.volume > 0) apply(lob::InsertEvent{p.side, p.price, p.volume, Owner::Agent}, agent_fills);
  }

  const TradeSplit split = attribute_trades(prev, next);
  stats_.record(split);
  for (auto event : trade_events(split)) {
    // The live book can hold less than the snapshot walk expects (the agent may have
    // taken some of it); clip instead of failing.
    auto& trade = std::get<lob::TradeEvent>(event);
    const Volume available = book_.available(opposite(trade.aggressor), trade.limit);
    if (trade.volume > available) {
      stats_.clipped_volume += trade.volume - available;
      trade.volume = available;
    }
    if (trade.volume > 0) apply(event, agent_fills);
  }

  LevelVolumes bids;
  LevelVolumes asks;
  for (const auto& [price, level] : book_.ladder(Side::Bid)) {
    if (level.market_volume > 0) bids[price] = level.market_volume;
  }
  for (const auto& [price, level] : book_.ladder(Side::Ask)) {
    if (level.market_volume > 0) asks[price] = level.market_volume;
  }
  for (const auto& event : reconcile_levels(bids, asks, next)) apply(event, agent_fills);
  return agent_fills;
}

std::vector<RestingOrder> ReplaySimulator::agent_orders() const {
  std::vector<RestingOrder> out;
  for (const auto& o : book_.orders(Owner::Agent)) {
    out.push_back(RestingOrder{o.id, o.side, o.price, o.volume, book_.volume_ahead(o.id), o.seq});
  }
  return out;
}

}  // namespace mmsim::replay
