#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mmsim/core/types.hpp"

namespace mmsim::lob {

// How historical cancels at a level are spread over the queue.
// Pessimistic takes from the back (newest) first, so volume ahead of the agent is
// only reduced once everything behind it is gone. Proportional spreads the cancel
// over historical orders by their size.
enum class QueueModel : std::uint8_t { Pessimistic, Proportional };

// Which liquidity a query sees. Market excludes agent orders; it is the view the
// reference price and market features are computed from.
enum class View : std::uint8_t { All, Market };

struct OrderRecord {
  OrderId id = 0;
  Side side = Side::Bid;
  HalfTickPrice price;
  Volume volume = 0;
  Owner owner = Owner::Historical;
  Seq seq = 0;
};

// One execution against a resting order.
struct Fill {
  OrderId order_id = 0;  // resting order
  Owner owner = Owner::Historical;
  Side side = Side::Bid;  // side of the resting order
  HalfTickPrice price;
  Volume volume = 0;
  Owner taker = Owner::Historical;

  bool touches_agent() const noexcept { return owner == Owner::Agent || taker == Owner::Agent; }
  bool operator==(const Fill&) const = default;
};

struct Level {
  std::deque<OrderRecord> queue;  // ascending seq
  Volume market_volume = 0;
  Volume agent_volume = 0;

  Volume total() const noexcept { return market_volume + agent_volume; }
  Volume volume(View view) const noexcept { return view == View::All ? total() : market_volume; }
};

class Book {
 public:
  // Keyed by half-tick price value. Best bid is the last bid entry, best ask the first ask entry.
  using Ladder = std::map<std::int64_t, Level>;

  std::optional<HalfTickPrice> best(Side side, View view = View::All) const;
  Volume volume_at(Side side, HalfTickPrice price, View view = View::All) const;

  // Resting volume on `resting_side` at prices at or better than `limit` for an aggressor.
  Volume available(Side resting_side, std::optional<HalfTickPrice> limit = std::nullopt) const;

  // True if an order on `side` at `price` would trade against the opposite side.
  bool crosses(Side side, HalfTickPrice price) const;

  // Rests a passive order at the back of its level. The order must not cross.
  OrderId add(Side side, HalfTickPrice price, Volume volume, Owner owner);

  // Aggressor on `aggressor` side consumes the opposite side in price-time order.
  // Stops at `limit` (inclusive) or when `volume` is exhausted.
  std::vector<Fill> take(Side aggressor, Volume volume, std::optional<HalfTickPrice> limit,
                         Owner taker);

  // Removes `volume` from order `id` (0 or >= remaining removes the order). Keeps queue position.
  // Returns the volume cancelled.
  Volume cancel(OrderId id, Volume volume = 0);

  // Removes historical volume at a level according to `model`. Clipped to what is there.
  Volume cancel_market_volume(Side side, HalfTickPrice price, Volume volume, QueueModel model);

  const OrderRecord* find(OrderId id) const;
  Volume volume_ahead(OrderId id) const;
  std::vector<OrderRecord> orders(Owner owner) const;

  const Ladder& ladder(Side side) const noexcept { return side == Side::Bid ? bids_ : asks_; }
  std::size_t order_count() const noexcept { return index_.size(); }
  bool empty(Side side, View view = View::All) const { return !best(side, view).has_value(); }

 private:
  Ladder& ladder_mut(Side side) noexcept { return side == Side::Bid ? bids_ : asks_; }
  void account(Level& level, Owner owner, Volume delta) noexcept;
  void erase_if_empty(Side side, Ladder::iterator it);

  Ladder bids_;
  Ladder asks_;
  std::unordered_map<OrderId, std::pair<Side, std::int64_t>> index_;
  OrderId next_id_ = 1;
  Seq next_seq_ = 1;
};

struct MatchResult {
  std::vector<Fill> fills;
  std::optional<OrderRecord> residual;  // resting remainder, with its assigned id
};

// Limit order that may cross: trades against resting liquidity at resting prices,
// the remainder rests at the back of its limit level. The taker is `order.owner`.
MatchResult match_marketable(Book& book, const OrderRecord& order);

}  // namespace mmsim::lob
