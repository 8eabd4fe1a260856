#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mmsim/core/errors.hpp"
#include "mmsim/signals/signals.hpp"

namespace mmsim {
namespace {

// Best bid path in ticks; mids sit half a tick above.
replay::Dataset rising(std::size_t n, std::int64_t step_ticks) {
  std::vector<std::int64_t> bids;
  for (std::size_t i = 0; i < n; ++i) bids.push_back(100 + static_cast<std::int64_t>(i) * step_ticks);
  return testing::path_dataset(bids);
}

TEST(OracleSignal, ThresholdedSign) {
  std::mt19937_64 rng(1);
  const auto up = testing::path_dataset({100, 101, 102, 103});
  EXPECT_EQ(signals::oracle_signal(up, 0, 3, 1.0, 0.0, rng), 1);
  EXPECT_EQ(signals::oracle_signal(up, 0, 1, 1.0, 0.0, rng), 0);  // |move| = theta
  const auto down = testing::path_dataset({103, 102, 101, 100});
  EXPECT_EQ(signals::oracle_signal(down, 0, 3, 1.0, 0.0, rng), -1);
  EXPECT_THROW(signals::oracle_signal(up, 1, 3, 1.0, 0.0, rng), HorizonOutOfRange);
}

TEST(OracleSignal, FullNoiseAlwaysFlips) {
  const auto up = testing::path_dataset({100, 101, 102, 103});
  std::mt19937_64 rng(9);
  int flipped = 0;
  int to_zero = 0;
  for (int i = 0; i < 10000; ++i) {
    const int y = signals::oracle_signal(up, 0, 3, 1.0, 1.0, rng);
    flipped += y != 1;
    to_zero += y == 0;
  }
  EXPECT_EQ(flipped, 10000);
  // resampled uniformly over the other two labels
  EXPECT_NEAR(to_zero / 10000.0, 0.5, 0.03);
}

TEST(OracleSignal, ExactWithoutNoiseMatchesRecount) {
  const auto data = testing::synth(4, 3000, 0.02);
  const signals::OracleProvider p(signals::SignalSpec{});
  for (std::size_t t = 0; t + 600 < data.size(); t += 7) {
    const auto y = p.signals(data, t, 123);
    const std::size_t hs[] = {20, 120, 240, 600};
    for (std::size_t i = 0; i < 4; ++i) {
      const double move = (static_cast<double>(data[t + hs[i]].best_bid().value + data[t + hs[i]].best_ask().value) -
                           static_cast<double>(data[t].best_bid().value + data[t].best_ask().value)) /
                          4.0;
      const int want = move > 1.0 ? 1 : (move < -1.0 ? -1 : 0);
      ASSERT_EQ(y[i], want) << "t=" << t << " h=" << hs[i];
    }
  }
}

TEST(MomentumSignal, Basics) {
  const auto flat = testing::constant_dataset(30);
  EXPECT_EQ(signals::momentum_signal(flat, 20, 20, 1.0), 0);
  const auto up = rising(30, 1);
  EXPECT_EQ(signals::momentum_signal(up, 2, 2, 1.0), 1);  // rise of 2 theta over w
  EXPECT_THROW(signals::momentum_signal(up, 1, 2, 1.0), WindowOutOfRange);
}

TEST(MomentumSignal, AgreesWithOracleOnLinearPath) {
  for (std::int64_t slope : {-1, 1}) {
    const auto d = rising(200, slope);
    std::mt19937_64 rng(0);
    for (std::size_t w : {2, 5, 20}) {
      for (std::size_t t = w; t + w < d.size(); ++t) {
        ASSERT_EQ(signals::momentum_signal(d, t, w, 1.0), signals::oracle_signal(d, t - w, w, 1.0, 0.0, rng));
      }
    }
  }
}

TEST(Providers, DeterministicPerStreamAndCausal) {
  const auto data = testing::synth(2, 1500, 0.0);
  signals::SignalSpec spec;
  spec.noise = 0.3;
  const auto p = signals::make_provider(spec);
  EXPECT_EQ(p->lookahead(), 600u);
  EXPECT_EQ(p->count(), 4u);
  EXPECT_EQ(p->signals(data, 100, 5), p->signals(data, 100, 5));
  // the end of the data reads as no signal
  EXPECT_EQ(p->signals(data, data.size() - 1, 5), std::vector<int>(4, 0));

  spec.kind = signals::SignalKind::Momentum;
  const auto m = signals::make_provider(spec);
  EXPECT_EQ(m->lookahead(), 0u);
  EXPECT_EQ(m->signals(data, 10, 0), std::vector<int>(4, 0));
  // Momentum only reads the past: truncating the data after t changes nothing.
  auto cut = data;
  cut.records.resize(701);
  EXPECT_EQ(m->signals(data, 700, 0), m->signals(cut, 700, 0));
}

TEST(Providers, SpecValidation) {
  signals::SignalSpec s;
  s.horizons = {20, 10};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.horizons = {0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.horizons = {5};
  s.noise = 1.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.noise = 0.0;
  s.theta = -1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace mmsim
