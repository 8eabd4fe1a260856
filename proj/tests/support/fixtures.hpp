#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mmsim/replay/dataset.hpp"
#include "mmsim/replay/synth.hpp"

namespace mmsim::testing {

// Snapshot with contiguous one-tick levels below `bid` and above `ask` (both in ticks).
inline replay::SnapshotRecord ladder_snapshot(std::int64_t bid, std::int64_t ask,
                                              std::array<Volume, replay::kDepth> bid_vols,
                                              std::array<Volume, replay::kDepth> ask_vols,
                                              std::int64_t ts = 0) {
  replay::SnapshotRecord r;
  r.timestamp_ms = ts;
  for (std::size_t i = 0; i < replay::kDepth; ++i) {
    r.bid_prices[i] = HalfTickPrice::from_ticks(bid - static_cast<std::int64_t>(i));
    r.ask_prices[i] = HalfTickPrice::from_ticks(ask + static_cast<std::int64_t>(i));
  }
  r.bid_vols = bid_vols;
  r.ask_vols = ask_vols;
  return r;
}

inline replay::SnapshotRecord flat_snapshot(std::int64_t bid, std::int64_t ask, Volume vol = 10,
                                            std::int64_t ts = 0) {
  return ladder_snapshot(bid, ask, {vol, vol, vol, vol, vol}, {vol, vol, vol, vol, vol}, ts);
}

inline replay::Dataset make_dataset(std::vector<replay::SnapshotRecord> records, double tick = 1.0,
                                    std::int64_t cadence = 500) {
  replay::Dataset d;
  d.meta.tick_size = tick;
  d.meta.cadence_ms = cadence;
  d.meta.instrument = "TEST";
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].timestamp_ms = static_cast<std::int64_t>(i) * cadence;
  }
  d.records = std::move(records);
  replay::finalize_dataset(d);
  return d;
}

// `n` identical snapshots without trades.
inline replay::Dataset constant_dataset(std::size_t n, std::int64_t bid = 100, std::int64_t ask = 101,
                                        Volume vol = 10) {
  return make_dataset(std::vector<replay::SnapshotRecord>(n, flat_snapshot(bid, ask, vol)));
}

// Best quotes follow `mids` (ticks, spread of one tick), no trades.
inline replay::Dataset path_dataset(const std::vector<std::int64_t>& bids, Volume vol = 10) {
  std::vector<replay::SnapshotRecord> recs;
  for (auto b : bids) recs.push_back(flat_snapshot(b, b + 1, vol));
  return make_dataset(std::move(recs));
}

inline replay::Dataset synth(std::uint64_t seed, std::size_t steps, double trend = 0.0) {
  replay::SynthConfig cfg;
  cfg.seed = seed;
  cfg.steps = steps;
  cfg.trend = trend;
  return replay::synth_generate(cfg);
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mmsim_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace mmsim::testing
