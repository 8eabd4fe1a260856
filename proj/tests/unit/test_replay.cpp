#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <variant>

#include "fixtures.hpp"
#include "mmsim/core/errors.hpp"
#include "mmsim/replay/dataset.hpp"
#include "mmsim/replay/event_inference.hpp"
#include "mmsim/replay/simulator.hpp"
#include "mmsim/replay/synth.hpp"

namespace mmsim {
namespace {

using testing::flat_snapshot;
using testing::ladder_snapshot;

HalfTickPrice tk(std::int64_t ticks) { return HalfTickPrice::from_ticks(ticks); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST(Dataset, RoundTripThroughCsv) {
  testing::TempDir dir;
  auto data = testing::synth(11, 50, 0.02);
  data.meta.tick_size = 0.5;
  replay::save_dataset(data, dir / "d.csv");
  EXPECT_TRUE(std::filesystem::exists(dir / "d.meta"));
  const auto back = replay::load_dataset(dir / "d.csv");
  EXPECT_EQ(back.meta, data.meta);
  ASSERT_EQ(back.size(), data.size());
  EXPECT_EQ(back.records, data.records);
}

TEST(Dataset, ThreeRows) {
  testing::TempDir dir;
  replay::save_dataset(testing::constant_dataset(3), dir / "d.csv");
  EXPECT_EQ(replay::load_dataset(dir / "d.csv").size(), 3u);
}

TEST(Dataset, CrossedRowIsRejectedWithItsLine) {
  testing::TempDir dir;
  replay::save_dataset(testing::constant_dataset(3), dir / "d.csv");
  std::string text = slurp(dir / "d.csv");
  // third line (second data row): make the best bid equal to the best ask
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  const auto pos = lines[2].find(",100,");
  ASSERT_NE(pos, std::string::npos);
  lines[2].replace(pos, 5, ",101,");
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  spit(dir / "d.csv", out);
  try {
    replay::load_dataset(dir / "d.csv");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Dataset, GapIsFlagged) {
  auto recs = std::vector<replay::SnapshotRecord>(4, flat_snapshot(100, 101));
  replay::Dataset d;
  d.meta.cadence_ms = 500;
  const std::int64_t ts[] = {0, 500, 1500, 2000};
  for (std::size_t i = 0; i < 4; ++i) recs[i].timestamp_ms = ts[i];
  d.records = recs;
  replay::finalize_dataset(d);
  ASSERT_EQ(d.gaps.size(), 1u);
  EXPECT_TRUE(d.gap_before(2));
  EXPECT_FALSE(d.gap_before(1));

  d.records[3].timestamp_ms = 1500;
  EXPECT_THROW(replay::finalize_dataset(d), NonMonotoneTimestamps);
}

TEST(Dataset, MalformedFields) {
  testing::TempDir dir;
  replay::save_dataset(testing::constant_dataset(2), dir / "d.csv");
  const std::string good = slurp(dir / "d.csv");
  spit(dir / "d.csv", good + "1,2,3\n");
  try {
    replay::load_dataset(dir / "d.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  spit(dir / "d.csv", "ts,bp1\n");
  EXPECT_THROW(replay::load_dataset(dir / "d.csv"), SchemaError);
  EXPECT_THROW(replay::load_dataset(dir / "missing.csv"), SchemaError);
}

TEST(Dataset, MetadataDefaultsAndErrors) {
  testing::TempDir dir;
  spit(dir / "m.meta", "tick_size=0.25\ncadence_ms=1000\ninstrument=RB\n");
  const auto m = replay::load_metadata(dir / "m.meta");
  EXPECT_DOUBLE_EQ(m.tick_size, 0.25);
  EXPECT_EQ(m.cadence_ms, 1000);
  EXPECT_EQ(m.instrument, "RB");
  spit(dir / "m.meta", "tick_size=-1\n");
  EXPECT_THROW(replay::load_metadata(dir / "m.meta"), SchemaError);
  spit(dir / "m.meta", "colour=blue\n");
  EXPECT_THROW(replay::load_metadata(dir / "m.meta"), SchemaError);
}

TEST(EventInference, IdenticalSnapshotsGiveNoEvents) {
  const auto s = flat_snapshot(100, 101);
  EXPECT_TRUE(replay::infer_events(s, s).empty());
}

TEST(EventInference, UniqueBuyAttribution) {
  auto prev = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {10, 5, 5, 5, 5});
  auto next = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {6, 5, 5, 5, 5});
  next.interval_trade_volume = 4;
  next.interval_turnover = 4 * tk(101).value;
  const auto events = replay::infer_events(prev, next);
  ASSERT_EQ(events.size(), 1u);
  const auto& tr = std::get<lob::TradeEvent>(events[0]);
  EXPECT_EQ(tr.aggressor, Side::Bid);
  EXPECT_EQ(tr.volume, 4);
  EXPECT_EQ(tr.limit, tk(101));
}

TEST(EventInference, PureAdd) {
  auto prev = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {5, 5, 5, 5, 5});
  auto next = ladder_snapshot(100, 101, {8, 5, 5, 5, 5}, {5, 5, 5, 5, 5});
  const auto events = replay::infer_events(prev, next);
  ASSERT_EQ(events.size(), 1u);
  const auto& ins = std::get<lob::InsertEvent>(events[0]);
  EXPECT_EQ(ins.side, Side::Bid);
  EXPECT_EQ(ins.price, tk(100));
  EXPECT_EQ(ins.volume, 3);
  EXPECT_EQ(ins.owner, Owner::Historical);
}

TEST(EventInference, TurnoverDecidesTheSide) {
  // Both best queues shrank by 2 but the turnover says the sell side traded.
  auto prev = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {5, 5, 5, 5, 5});
  auto next = ladder_snapshot(100, 101, {3, 5, 5, 5, 5}, {3, 5, 5, 5, 5});
  next.interval_trade_volume = 2;
  next.interval_turnover = 2 * tk(100).value;
  const auto split = replay::attribute_trades(prev, next);
  EXPECT_EQ(split.sell, 2);
  EXPECT_EQ(split.buy, 0);
  EXPECT_EQ(split.turnover_error, 0);
}

TEST(EventInference, ShrinkageDecidesWithoutTurnover) {
  auto prev = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {5, 5, 5, 5, 5});
  auto next = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {2, 5, 5, 5, 5});
  next.interval_trade_volume = 3;
  const auto split = replay::attribute_trades(prev, next);
  EXPECT_EQ(split.buy, 3);
  EXPECT_EQ(split.sell, 0);
}

TEST(EventInference, UnattributableVolumeIsClipped) {
  auto prev = ladder_snapshot(100, 101, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1});
  auto next = prev;
  next.interval_trade_volume = 15;
  replay::InferenceStats stats;
  replay::infer_events(prev, next, &stats);
  EXPECT_EQ(stats.inconsistent_intervals, 1u);
  EXPECT_EQ(stats.clipped_volume, 5);
}

// Replaying the inferred events from `prev` rebuilds `next`'s visible levels.
TEST(EventInference, ReplayReproducesNextSnapshot) {
  const auto data = testing::synth(5, 400, 0.02);
  replay::ReplaySimulator sim;
  sim.reset(data[0]);
  for (std::size_t t = 0; t + 1 < data.size(); ++t) {
    sim.step(data[t], data[t + 1], {}, {});
    const auto& book = sim.book();
    for (std::size_t i = 0; i < replay::kDepth; ++i) {
      ASSERT_EQ(book.volume_at(Side::Bid, data[t + 1].bid_prices[i]), data[t + 1].bid_vols[i]) << t;
      ASSERT_EQ(book.volume_at(Side::Ask, data[t + 1].ask_prices[i]), data[t + 1].ask_vols[i]) << t;
    }
    ASSERT_EQ(book.ladder(Side::Bid).size() + book.ladder(Side::Ask).size(), 2 * replay::kDepth);
  }
  EXPECT_EQ(sim.stats().clipped_volume, 0);
  EXPECT_EQ(sim.stats().turnover_mismatches, 0u);
}

TEST(Simulator, AgentFillLimitedByVolumeAhead) {
  auto prev = ladder_snapshot(100, 101, {5, 5, 5, 5, 5}, {4, 5, 5, 5, 5});
  // 6 units bought: the walk over the historical book reaches 102
  auto next = ladder_snapshot(100, 102, {5, 5, 5, 5, 5}, {3, 5, 5, 5, 5});
  next.interval_trade_volume = 6;
  next.interval_turnover = 4 * tk(101).value + 2 * tk(102).value;
  replay::ReplaySimulator sim;
  sim.reset(prev);
  const replay::AgentPlacement place{Side::Ask, tk(101), 5};
  const auto fills = sim.step(prev, next, {}, std::span(&place, 1));
  ASSERT_EQ(fills.size(), 1u);
  EXPECT_EQ(fills[0].owner, Owner::Agent);
  EXPECT_EQ(fills[0].volume, 2);
  const auto rest = sim.agent_orders();
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_EQ(rest[0].volume, 3);
  EXPECT_EQ(rest[0].volume_ahead, 0);
}

TEST(Simulator, DeepOrderUntouched) {
  const auto s = flat_snapshot(100, 101);
  auto next = s;
  next.interval_trade_volume = 3;
  next.interval_turnover = 3 * tk(100).value;
  next.bid_vols[0] = 7;
  replay::ReplaySimulator sim;
  sim.reset(s);
  const replay::AgentPlacement place{Side::Bid, tk(98), 4};
  EXPECT_TRUE(sim.step(s, next, {}, std::span(&place, 1)).empty());
  const auto rest = sim.agent_orders();
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_EQ(rest[0].volume_ahead, 10);
}

TEST(Simulator, AgentBeyondVisibleDepth) {
  const auto s = flat_snapshot(100, 101);
  replay::ReplaySimulator sim;
  sim.reset(s);
  const replay::AgentPlacement place{Side::Bid, tk(90), 4};
  sim.step(s, s, {}, std::span(&place, 1));
  const auto rest = sim.agent_orders();
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_EQ(rest[0].volume_ahead, 0);
}

TEST(Simulator, MarketableAgentOrderTradesImmediately) {
  const auto s = flat_snapshot(100, 101, 3);
  replay::ReplaySimulator sim;
  sim.reset(s);
  const replay::AgentPlacement place{Side::Bid, tk(101), 2};
  const auto fills = sim.step(s, s, {}, std::span(&place, 1));
  ASSERT_EQ(fills.size(), 1u);
  EXPECT_EQ(fills[0].taker, Owner::Agent);
  EXPECT_EQ(fills[0].volume, 2);
  // the historical book is restored from the next snapshot
  EXPECT_EQ(sim.book().volume_at(Side::Ask, tk(101)), 3);
}

TEST(Simulator, CancelsComeBeforePlacements) {
  const auto s = flat_snapshot(100, 101);
  replay::ReplaySimulator sim;
  sim.reset(s);
  const replay::AgentPlacement place{Side::Bid, tk(100), 4};
  sim.step(s, s, {}, std::span(&place, 1));
  const auto id = sim.agent_orders().at(0).id;
  const replay::AgentCancel cancel{id, 0};
  const replay::AgentPlacement again{Side::Bid, tk(100), 4};
  sim.step(s, s, std::span(&cancel, 1), std::span(&again, 1));
  const auto rest = sim.agent_orders();
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_NE(rest[0].id, id);
}

TEST(Simulator, PessimisticNeverFillsMoreThanProportional) {
  const auto data = testing::synth(8, 600, 0.0);
  for (std::int64_t offset : {0, 1}) {
    Volume filled[2] = {0, 0};
    int mode_i = 0;
    for (auto mode : {lob::QueueModel::Pessimistic, lob::QueueModel::Proportional}) {
      replay::ReplaySimulator sim(mode);
      sim.reset(data[0]);
      for (std::size_t t = 0; t + 1 < data.size(); ++t) {
        std::vector<replay::AgentPlacement> place;
        if (t % 50 == 0) {
          place.push_back({Side::Bid, data[t].best_bid() - 2 * offset, 3});
          place.push_back({Side::Ask, data[t].best_ask() + 2 * offset, 3});
        }
        for (const auto& f : sim.step(data[t], data[t + 1], {}, place)) filled[mode_i] += f.volume;
      }
      ++mode_i;
    }
    EXPECT_LE(filled[0], filled[1]);
  }
}

TEST(Synth, Deterministic) {
  const auto a = testing::synth(7, 100);
  const auto b = testing::synth(7, 100);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.size(), 100u);
  EXPECT_NE(testing::synth(8, 100).records, a.records);
}

TEST(Synth, OutputPassesValidation) {
  const auto d = testing::synth(3, 2000, -0.05);
  for (std::size_t i = 0; i < d.size(); ++i) {
    replay::validate_snapshot(d[i], i);
    const auto spread = d[i].spread() / 2;
    EXPECT_GE(spread, 1);
    EXPECT_LE(spread, 3);
  }
  EXPECT_TRUE(d.gaps.empty());
}

TEST(Synth, DriftShowsUpInMostSeeds) {
  int up = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto d = testing::synth(seed, 10000, 0.01);
    if (d.records.back().mid() > d.records.front().mid()) ++up;
  }
  EXPECT_GE(up, 95);
}

TEST(Synth, ZeroIntensityKeepsUnitVolumes) {
  replay::SynthConfig cfg;
  cfg.steps = 200;
  cfg.vol_intensity = 0.0;
  const auto d = replay::synth_generate(cfg);
  for (const auto& r : d.records) {
    for (std::size_t i = 0; i < replay::kDepth; ++i) {
      EXPECT_GE(r.bid_vols[i], 1);
      EXPECT_GE(r.ask_vols[i], 1);
    }
  }
  cfg.steps = 0;
  EXPECT_THROW(replay::synth_generate(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace mmsim
