#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "mmsim/env/action.hpp"
#include "mmsim/env/features.hpp"
#include "mmsim/env/reward.hpp"
#include "mmsim/lob/reference_price.hpp"

namespace mmsim::env {
namespace {

HalfTickPrice tk(std::int64_t ticks) { return HalfTickPrice::from_ticks(ticks); }
const HalfTickPrice kRef{201};  // 100.5

EpisodeConfig two_levels() {
  EpisodeConfig c;
  c.N = 20;
  c.n_levels = 2;
  return c;
}

TEST(Decode, SymmetricSplit) {
  const auto q = decode_action({0.0, 1.0, {0.5, 0.5}, {0.5, 0.5}}, two_levels(), kRef);
  ASSERT_EQ(q.asks.size(), 2u);
  EXPECT_EQ(q.asks[0], (Quote{tk(101), 10}));
  EXPECT_EQ(q.asks[1], (Quote{tk(102), 10}));
  EXPECT_EQ(q.bids[0], (Quote{tk(100), 10}));
  EXPECT_EQ(q.bids[1], (Quote{tk(99), 10}));
}

TEST(Decode, UnevenWeights) {
  const auto q = decode_action({0.0, 1.0, {0.5, 0.5}, {0.75, 0.25}}, two_levels(), kRef);
  EXPECT_EQ(q.asks[0], (Quote{tk(101), 15}));
  EXPECT_EQ(q.asks[1], (Quote{tk(102), 5}));
}

TEST(Decode, RoundingAwayFromTheRequestedMid) {
  // ask target 100.5 + 1 + 1 = 102.5 -> 103; bid target 100.5 + 1 - 1 = 100.5 -> 100
  const auto q = decode_action({1.0, 2.0, {0.5, 0.5}, {0.5, 0.5}}, two_levels(), kRef);
  EXPECT_EQ(q.asks[0].price, tk(103));
  EXPECT_EQ(q.asks[1].price, tk(104));
  EXPECT_EQ(q.bids[0].price, tk(100));
  EXPECT_EQ(q.bids[1].price, tk(99));
}

TEST(Decode, ClampsOutOfRangeInputs) {
  const auto wide = decode_action({50.0, 100.0, {1, 0}, {1, 0}}, two_levels(), kRef);
  // m* = 10, delta* = 20: ask 100.5 + 20 = 120.5 -> 121, bid 100.5 + 0 -> 100
  EXPECT_EQ(wide.asks[0].price, tk(121));
  EXPECT_EQ(wide.bids[0].price, tk(100));
  const auto tight = decode_action({0.0, 0.0, {1, 0}, {1, 0}}, two_levels(), kRef);
  EXPECT_EQ(tight.asks[0].price, tk(101));
  EXPECT_EQ(tight.bids[0].price, tk(100));
  EXPECT_EQ(tight.asks.size(), 1u);  // zero-volume second level omitted
}

TEST(Decode, ZeroWeightsWithdrawSide) {
  const auto q = decode_action({0.0, 1.0, {0, 0}, {0.5, 0.5}}, two_levels(), kRef);
  EXPECT_TRUE(q.bids.empty());
  EXPECT_EQ(q.asks.size(), 2u);
  EXPECT_THROW(decode_action({0.0, 1.0, {1.0}, {1.0}}, two_levels(), kRef), std::invalid_argument);
}

TEST(Decode, ValidateAction) {
  EXPECT_NO_THROW(validate_action({0.0, 1.0, {0.5, 0.5}, {1, 0}}, 2));
  EXPECT_NO_THROW(validate_action({0.0, 1.0, {0, 0}, {1, 0}}, 2));
  EXPECT_THROW(validate_action({0.0, -1.0, {0.5, 0.5}, {1, 0}}, 2), std::invalid_argument);
  EXPECT_THROW(validate_action({std::nan(""), 1.0, {0.5, 0.5}, {1, 0}}, 2), std::invalid_argument);
  EXPECT_THROW(validate_action({0.0, 1.0, {0.5, 0.4}, {1, 0}}, 2), std::invalid_argument);
  EXPECT_THROW(validate_action({0.0, 1.0, {-0.5, 1.5}, {1, 0}}, 2), std::invalid_argument);
  EXPECT_THROW(validate_action({0.0, 1.0, {1.0}, {1, 0}}, 2), std::invalid_argument);
}

TEST(Apportion, LargestRemainder) {
  EXPECT_EQ(apportion(20, {0.75, 0.25}), (std::vector<Volume>{15, 5}));
  EXPECT_EQ(apportion(20, {1.0 / 3, 1.0 / 3, 1.0 / 3}), (std::vector<Volume>{7, 7, 6}));
  EXPECT_EQ(apportion(10, {0.55, 0.45}), (std::vector<Volume>{6, 4}));
  EXPECT_EQ(apportion(5, {0.5, 0.5}), (std::vector<Volume>{3, 2}));  // tie to the lower index
  EXPECT_EQ(apportion(5, {0, 0}), (std::vector<Volume>{0, 0}));
  EXPECT_EQ(apportion(7, {2, 6}), (std::vector<Volume>{2, 5}));  // unnormalised input
}

replay::RestingOrder resting(OrderId id, Side s, std::int64_t ticks, Volume v, Seq seq) {
  return {id, s, tk(ticks), v, 0, seq};
}

TEST(DiffOrders, FixedPoint) {
  QuoteSet want;
  want.asks = {{tk(101), 10}};
  EXPECT_TRUE(diff_orders({resting(1, Side::Ask, 101, 10, 1)}, want).empty());
}

TEST(DiffOrders, MovedQuote) {
  QuoteSet want;
  want.asks = {{tk(102), 10}};
  const auto d = diff_orders({resting(1, Side::Ask, 101, 10, 1)}, want);
  ASSERT_EQ(d.cancels.size(), 1u);
  EXPECT_EQ(d.cancels[0], (replay::AgentCancel{1, 0}));
  ASSERT_EQ(d.placements.size(), 1u);
  EXPECT_EQ(d.placements[0], (replay::AgentPlacement{Side::Ask, tk(102), 10}));
}

TEST(DiffOrders, ExcessComesOffTheNewestOrder) {
  QuoteSet want;
  want.asks = {{tk(101), 7}};
  const auto d = diff_orders({resting(1, Side::Ask, 101, 6, 1), resting(5, Side::Ask, 101, 4, 5)}, want);
  ASSERT_EQ(d.cancels.size(), 1u);
  EXPECT_EQ(d.cancels[0], (replay::AgentCancel{5, 3}));
  EXPECT_TRUE(d.placements.empty());

  want.asks = {{tk(101), 2}};
  const auto d2 = diff_orders({resting(1, Side::Ask, 101, 6, 1), resting(5, Side::Ask, 101, 4, 5)}, want);
  ASSERT_EQ(d2.cancels.size(), 2u);
  EXPECT_EQ(d2.cancels[0], (replay::AgentCancel{5, 0}));
  EXPECT_EQ(d2.cancels[1], (replay::AgentCancel{1, 4}));
}

TEST(DiffOrders, ShortfallIsOneOrder) {
  QuoteSet want;
  want.bids = {{tk(100), 9}};
  const auto d = diff_orders({resting(3, Side::Bid, 100, 4, 3)}, want);
  EXPECT_TRUE(d.cancels.empty());
  ASSERT_EQ(d.placements.size(), 1u);
  EXPECT_EQ(d.placements[0].volume, 5);
}

TEST(DiffOrders, SidesAreKeptApart) {
  QuoteSet want;
  want.bids = {{tk(100), 4}};
  const auto d = diff_orders({resting(3, Side::Ask, 100, 4, 3)}, want);
  EXPECT_EQ(d.cancels.size(), 1u);
  EXPECT_EQ(d.placements.size(), 1u);
}

TEST(Reward, NoFills) {
  const auto r = compute_reward({}, 0, 201, 203, {}, 1.0);
  EXPECT_EQ(r, RewardTerms{});
}

TEST(Reward, VerbatimAndWealthDelta) {
  const std::vector<AgentFill> fills{{Side::Ask, tk(101), 2, true}};
  RewardParams verbatim;
  verbatim.pnl_mode = PnlMode::Verbatim;
  const auto v = compute_reward(fills, -2, 201, 200, verbatim, 1.0);
  EXPECT_DOUBLE_EQ(v.pnl, 203.0);
  const auto w = compute_reward(fills, -2, 201, 200, RewardParams{}, 1.0);
  EXPECT_DOUBLE_EQ(w.pnl, 2.0);
  EXPECT_EQ(w.pnl_raw - v.pnl_raw, 201 * -2);
  // tick size scales the price terms
  EXPECT_DOUBLE_EQ(compute_reward(fills, -2, 201, 200, RewardParams{}, 0.5).pnl, 1.0);
}

TEST(Reward, InventoryPenaltyBoundary) {
  RewardParams p;
  p.eta = 1.0;
  p.C = 3.0;
  EXPECT_DOUBLE_EQ(compute_reward({}, 5, 200, 200, p, 1.0).ip, -5.0);
  EXPECT_DOUBLE_EQ(compute_reward({}, -5, 200, 200, p, 1.0).ip, -5.0);
  EXPECT_DOUBLE_EQ(compute_reward({}, 3, 200, 200, p, 1.0).ip, 0.0);
}

TEST(Reward, Compensation) {
  RewardParams p;
  p.beta = 0.01;
  const std::vector<AgentFill> fills{{Side::Ask, tk(101), 2, true}, {Side::Bid, tk(100), 1, true}};
  const auto r = compute_reward(fills, -1, 201, 201, p, 1.0);
  EXPECT_DOUBLE_EQ(r.comp, 0.01 * 302.0);
  EXPECT_DOUBLE_EQ(r.total, r.pnl + r.ip + r.comp);
  EXPECT_EQ(cashflow(fills), 2 * 202 - 200);
  EXPECT_EQ(inventory_change(fills), -1);
  EXPECT_EQ(traded_notional(fills), 604);
}

TEST(Reward, ParamValidation) {
  RewardParams p;
  p.eta = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(QueueValue, Examples) {
  EXPECT_DOUBLE_EQ(queue_value({{4, 2}}, 10), 0.4);
  EXPECT_DOUBLE_EQ(queue_value({{0, 2}}, 2), 0.0);
  EXPECT_DOUBLE_EQ(queue_value({{0, 3}, {5, 1}}, 10), 0.125);
  EXPECT_DOUBLE_EQ(queue_value({}, 10), 0.0);
}

TEST(Features, RowLayout) {
  const FeatureSchema schema{5, 50, 4};
  EXPECT_EQ(schema.features(), 17u);
  EXPECT_EQ(schema.market_size(), 17u * 51u);
  EXPECT_EQ(schema.private_size(), 21u);
  const auto names = schema.feature_names();
  ASSERT_EQ(names.size(), 17u);

  auto data = testing::path_dataset({100, 100, 101, 101});
  data.records[3].interval_trade_volume = 8;
  lob::Book book;
  book.add(Side::Bid, tk(101), 3, Owner::Historical);
  book.add(Side::Bid, tk(100), 1, Owner::Historical);
  book.add(Side::Ask, tk(102), 4, Owner::Historical);
  book.add(Side::Ask, tk(103), 2, Owner::Agent);  // not part of the market view
  const auto row = market_features(data, 3, book, HalfTickPrice{203}, 5, 0.25, 2);
  ASSERT_EQ(row.size(), 17u);
  // levels -5..-1 then +1..+5, relative to total historical volume 8
  EXPECT_DOUBLE_EQ(row[3], 1.0 / 8);
  EXPECT_DOUBLE_EQ(row[4], 3.0 / 8);
  EXPECT_DOUBLE_EQ(row[5], 4.0 / 8);
  EXPECT_DOUBLE_EQ(row[6], 0.0);
  EXPECT_DOUBLE_EQ(row[10], 1.0);  // spread in ticks
  EXPECT_DOUBLE_EQ(row[11], 0.0);  // lag 1
  EXPECT_DOUBLE_EQ(row[12], std::log(203.0 / 201.0));  // lag 5 falls back to t = 0
  EXPECT_DOUBLE_EQ(row[15], 8.0 / 4.0);  // volume over its 2-step rolling mean
  EXPECT_DOUBLE_EQ(row[16], 0.25);
}

TEST(Features, WindowOldestFirstWithPadding) {
  FeatureWindow w(3, 2);
  std::vector<double> out;
  w.push({1, 1});
  w.flatten_into(out);
  EXPECT_EQ(out, (std::vector<double>{0, 0, 0, 0, 1, 1}));
  w.push({2, 2});
  w.push({3, 3});
  w.push({4, 4});
  out.clear();
  w.flatten_into(out);
  EXPECT_EQ(out, (std::vector<double>{2, 2, 3, 3, 4, 4}));
  EXPECT_EQ(w.last(), (std::vector<double>{4, 4}));
}

}  // namespace
}  // namespace mmsim::env
