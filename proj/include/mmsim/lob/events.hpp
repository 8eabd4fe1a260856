#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "mmsim/core/types.hpp"
#include "mmsim/lob/book.hpp"
#include "mmsim/lob/reference_price.hpp"

namespace mmsim::lob {

// New limit order. A crossing insert trades first and rests the remainder.
struct InsertEvent {
  Side side = Side::Bid;
  HalfTickPrice price;
  Volume volume = 0;
  Owner owner = Owner::Historical;
};

// Cancel of a known order. volume == 0 cancels all of it.
struct CancelOrderEvent {
  OrderId order_id = 0;
  Volume volume = 0;
};

// Cancel of anonymous historical volume at a level; the queue model picks the orders.
struct CancelLevelEvent {
  Side side = Side::Bid;
  HalfTickPrice price;
  Volume volume = 0;
};

// Aggressive flow from `aggressor` consuming the opposite side up to `limit`.
struct TradeEvent {
  Side aggressor = Side::Bid;
  Volume volume = 0;
  std::optional<HalfTickPrice> limit;
};

using BookEvent = std::variant<InsertEvent, CancelOrderEvent, CancelLevelEvent, TradeEvent>;

// Applies one event and then re-evaluates the reference price (skipped while a market
// side is empty). Throws UnknownOrder for cancels of absent ids and Overconsume when a
// trade exceeds the liquidity available up to its limit.
std::vector<Fill> apply_event(Book& book, RefTracker& tracker, const BookEvent& event,
                              QueueModel model = QueueModel::Pessimistic);

}  // namespace mmsim::lob
