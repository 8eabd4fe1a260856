#pragma once

#include <span>
#include <vector>

#include "mmsim/lob/book.hpp"
#include "mmsim/lob/events.hpp"
#include "mmsim/lob/reference_price.hpp"
#include "mmsim/replay/dataset.hpp"
#include "mmsim/replay/event_inference.hpp"

namespace mmsim::replay {

struct AgentCancel {
  OrderId order_id = 0;
  Volume volume = 0;  // 0 cancels the whole order

  bool operator==(const AgentCancel&) const = default;
};

struct AgentPlacement {
  Side side = Side::Bid;
  HalfTickPrice price;
  Volume volume = 0;

  bool operator==(const AgentPlacement&) const = default;
};

struct RestingOrder {
  OrderId id = 0;
  Side side = Side::Bid;
  HalfTickPrice price;
  Volume volume = 0;
  Volume volume_ahead = 0;
  Seq seq = 0;
};

// Market replay of one instrument with the agent's orders living in the same queues as
// the historical liquidity. Historical snapshots are never altered by agent activity.
class ReplaySimulator {
 public:
  explicit ReplaySimulator(lob::QueueModel model = lob::QueueModel::Pessimistic) : model_(model) {}

  // Rebuilds the book from `snapshot` (one historical order per non-empty level) and
  // anchors the reference price.
  void reset(const SnapshotRecord& snapshot);

  // Advances over the interval prev -> next. Agent cancels are applied first, then agent
  // placements (marketable ones match immediately), then the inferred historical trades,
  // then level cancels and inserts that bring the historical book in line with `next`.
  // Returns every fill that involves an agent order.
  std::vector<lob::Fill> step(const SnapshotRecord& prev, const SnapshotRecord& next,
                              std::span<const AgentCancel> cancels,
                              std::span<const AgentPlacement> placements);

  const lob::Book& book() const noexcept { return book_; }
  const lob::RefTracker& tracker() const noexcept { return tracker_; }
  HalfTickPrice p_ref() const noexcept { return tracker_.p_ref; }
  lob::QueueModel queue_model() const noexcept { return model_; }
  const InferenceStats& stats() const noexcept { return stats_; }

  std::vector<RestingOrder> agent_orders() const;

 private:
  void apply(const lob::BookEvent& event, std::vector<lob::Fill>& agent_fills);

  lob::QueueModel model_;
  lob::Book book_;
  lob::RefTracker tracker_;
  InferenceStats stats_;
};

}  // namespace mmsim::replay
