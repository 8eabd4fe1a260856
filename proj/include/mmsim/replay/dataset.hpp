#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmsim/core/types.hpp"

namespace mmsim::replay {

inline constexpr std::size_t kDepth = 5;

// One 5-depth snapshot plus the trades aggregated over the interval that ended at it.
struct SnapshotRecord {
  std::int64_t timestamp_ms = 0;
  std::array<HalfTickPrice, kDepth> bid_prices{};
  std::array<Volume, kDepth> bid_vols{};
  std::array<HalfTickPrice, kDepth> ask_prices{};
  std::array<Volume, kDepth> ask_vols{};
  Volume interval_trade_volume = 0;
  std::int64_t interval_turnover = 0;  // half ticks x volume

  HalfTickPrice best_bid() const noexcept { return bid_prices[0]; }
  HalfTickPrice best_ask() const noexcept { return ask_prices[0]; }
  std::int64_t mid() const noexcept { return (bid_prices[0].value + ask_prices[0].value) / 2; }
  std::int64_t spread() const noexcept { return ask_prices[0] - bid_prices[0]; }

  bool operator==(const SnapshotRecord&) const = default;
};

enum class PriceFormat : std::uint8_t { Decimal, HalfTicks };

struct DatasetMeta {
  double tick_size = 1.0;
  std::int64_t cadence_ms = 500;
  std::string instrument = "UNKNOWN";
  PriceFormat price_format = PriceFormat::Decimal;
  double multiplier = 1.0;  // turnover = price x volume x multiplier

  bool operator==(const DatasetMeta&) const = default;
};

// Immutable after construction; safe to share read-only across threads.
struct Dataset {
  DatasetMeta meta;
  std::vector<SnapshotRecord> records;
  // Indices i where the step from records[i-1] to records[i] exceeds the cadence.
  std::vector<std::size_t> gaps;

  std::size_t size() const noexcept { return records.size(); }
  const SnapshotRecord& operator[](std::size_t i) const { return records[i]; }
  bool gap_before(std::size_t i) const;
  double tick_size() const noexcept { return meta.tick_size; }
};

// Throws SchemaError (tagged with `line`) when the snapshot breaks price/volume invariants.
void validate_snapshot(const SnapshotRecord& record, std::size_t line = 0);

// Checks records and recomputes the gap flags. Throws NonMonotoneTimestamps.
void finalize_dataset(Dataset& data);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

DatasetMeta load_metadata(const std::filesystem::path& meta_path);
void save_metadata(const DatasetMeta& meta, const std::filesystem::path& meta_path);

// Reads `csv` and its `.meta` sidecar (defaults apply when the sidecar is absent).
Dataset load_dataset(const std::filesystem::path& csv);

// Writes `csv` and its `.meta` sidecar.
void save_dataset(const Dataset& data, const std::filesystem::path& csv);

std::string csv_header();

}  // namespace mmsim::replay
